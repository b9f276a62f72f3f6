//! Varieties generated by a single finite algebra, `V = HSP(A)`.
//!
//! Such varieties are locally finite: the free algebra on `n` generators is
//! the subalgebra of `A^(A^n)` generated by the `n` projections, i.e. the
//! set of `n`-ary term functions of `A`. Identities are decided in `A`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, TABLE_ENTRY_CAP};
use crate::closure::bfs_closure;
use crate::congruence::{congruence_generated, quotient, Congruence, UnionFind};
use crate::error::{Error, Result};
use crate::hom::Homomorphism;
use crate::term::{assignment_count, eval_term, projection_vector, term_function, Identity, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest free algebra (element count) any construction may build.
    pub max_free_size: usize,
    /// Largest power `A^d` searched for separating algebras.
    pub max_power: usize,
    /// Width up to which generator identities are checked in membership tests.
    pub membership_width: usize,
    /// Bound on enumerated subuniverses / congruences in searches.
    pub max_enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_free_size: 1_000_000,
            max_power: 4,
            membership_width: 3,
            max_enumeration: 200_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VarietyPresentation {
    generator: Arc<FiniteAlgebra>,
    pub caps: Caps,
}

impl VarietyPresentation {
    pub fn new(generator: FiniteAlgebra) -> Self {
        VarietyPresentation {
            generator: Arc::new(generator),
            caps: Caps::default(),
        }
    }

    /// `HSP(A_1, ..., A_k)`, presented by the product of the generators.
    pub fn from_generators(gens: &[FiniteAlgebra]) -> Result<Self> {
        let (first, rest) = gens
            .split_first()
            .ok_or_else(|| Error::Invalid("a variety needs at least one generator".into()))?;
        let mut acc = first.clone();
        for g in rest {
            acc = acc.product(g)?;
        }
        Ok(Self::new(acc))
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    pub fn generator(&self) -> &Arc<FiniteAlgebra> {
        &self.generator
    }
}

/// The free algebra `F_V(n)`: term functions of the generator together with
/// a witness term for each.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    n: usize,
    generator: Arc<FiniteAlgebra>,
    elements: Vec<Vec<usize>>,
    witnesses: Vec<Term>,
    generator_ids: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
    algebra: OnceLock<Arc<FiniteAlgebra>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeAlgebraJson {
    pub n: usize,
    pub size: usize,
    pub witnesses: Vec<String>,
}

impl FreeAlgebra {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Size of the generating algebra's carrier.
    pub fn carrier_size(&self) -> usize {
        self.generator.size()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn witnesses(&self) -> &[Term] {
        &self.witnesses
    }

    pub fn witness(&self, e: usize) -> &Term {
        &self.witnesses[e]
    }

    /// Element index of generator `j` (the `j`-th projection).
    pub fn generator_id(&self, j: usize) -> usize {
        self.generator_ids[j]
    }

    pub fn generator_ids(&self) -> &[usize] {
        &self.generator_ids
    }

    pub fn index_of(&self, vector: &[usize]) -> Option<usize> {
        self.index.get(vector).copied()
    }

    /// Index of the element represented by `t` (a term over `n` variables).
    pub fn element_of_term(&self, t: &Term) -> Result<usize> {
        let v = term_function(t, &self.generator, self.n)?;
        self.index_of(&v)
            .ok_or_else(|| Error::Invalid("term function missing from free algebra".into()))
    }

    /// The free algebra as a finite algebra with induced operation tables.
    pub fn algebra(&self) -> Result<Arc<FiniteAlgebra>> {
        if let Some(a) = self.algebra.get() {
            return Ok(Arc::clone(a));
        }
        let sig = self.generator.sig().clone();
        let size = self.size();
        for op in sig.ops() {
            if assignment_count(size, op.arity).map_or(true, |c| c > TABLE_ENTRY_CAP) {
                return Err(Error::CapExceeded {
                    what: "free algebra operation table",
                    cap: TABLE_ENTRY_CAP,
                    found: size,
                });
            }
        }
        let len = self.elements.first().map_or(0, Vec::len);
        let mut scratch = vec![0usize; len];
        let mut pointwise = Vec::new();
        let alg = FiniteAlgebra::from_fn(
            format!("F{}({})", self.n, self.generator.name()),
            sig,
            size,
            |op, args| {
                for (i, slot) in scratch.iter_mut().enumerate() {
                    pointwise.clear();
                    pointwise.extend(args.iter().map(|&a| self.elements[a][i]));
                    *slot = self.generator.apply(op, &pointwise);
                }
                self.index[&scratch]
            },
        )?;
        let alg = Arc::new(alg);
        let _ = self.algebra.set(Arc::clone(&alg));
        Ok(alg)
    }

    pub fn to_json(&self) -> FreeAlgebraJson {
        FreeAlgebraJson {
            n: self.n,
            size: self.size(),
            witnesses: self
                .witnesses
                .iter()
                .map(|w| w.render(self.generator.sig()))
                .collect(),
        }
    }
}

/// `F_V(n)` as the subalgebra of `A^(A^n)` generated by the projections.
pub fn free_algebra(v: &VarietyPresentation, n: usize) -> Result<FreeAlgebra> {
    let a = &v.generator;
    if n == 0 && !a.sig().has_constant() {
        return Err(Error::Invalid(
            "free algebra on no generators is empty without constants".into(),
        ));
    }
    let len = assignment_count(a.size(), n)
        .filter(|&l| l <= TABLE_ENTRY_CAP)
        .ok_or(Error::CapExceeded {
            what: "free algebra vector length",
            cap: TABLE_ENTRY_CAP,
            found: 0,
        })?;
    let seeds: Vec<Vec<usize>> = (0..n).map(|j| projection_vector(a.size(), n, j)).collect();
    let mut pointwise = Vec::new();
    let closure = bfs_closure(
        a.sig(),
        &seeds,
        |op, args| {
            (0..len)
                .map(|i| {
                    pointwise.clear();
                    pointwise.extend(args.iter().map(|v| v[i]));
                    a.apply(op, &pointwise)
                })
                .collect()
        },
        v.caps.max_free_size,
        "free algebra size",
    )?;
    let index = closure
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    Ok(FreeAlgebra {
        n,
        generator: Arc::clone(a),
        elements: closure.elements,
        witnesses: closure.witnesses,
        generator_ids: closure.seed_positions,
        index,
        algebra: OnceLock::new(),
    })
}

/// Whether `id` holds in `V`, i.e. in the generating algebra.
pub fn holds_identity(v: &VarietyPresentation, id: &Identity) -> Result<bool> {
    Ok(first_counterexample(&v.generator, id)?.is_none())
}

/// First assignment (in assignment-index order) falsifying `id` in `alg`.
pub fn first_counterexample(alg: &FiniteAlgebra, id: &Identity) -> Result<Option<Vec<usize>>> {
    id.lhs.check(alg.sig())?;
    id.rhs.check(alg.sig())?;
    let l = term_function(&id.lhs, alg, id.width)?;
    let r = term_function(&id.rhs, alg, id.width)?;
    Ok(l
        .iter()
        .zip(&r)
        .position(|(a, b)| a != b)
        .map(|idx| crate::term::decode_assignment(idx, alg.size(), id.width)))
}

/// Approximate membership of `b` in `V`: every identity of the generator of
/// width at most `caps.membership_width` must hold in `b`.
///
/// Checked by mapping each element of `F_V(w)` to the term function of its
/// witness on `b` and verifying that this map is a homomorphism.
pub fn check_membership(v: &VarietyPresentation, b: &FiniteAlgebra) -> Result<()> {
    v.generator.same_signature(b)?;
    let start = if v.generator.sig().has_constant() { 0 } else { 1 };
    for w in start..=v.caps.membership_width {
        let free = free_algebra(v, w)?;
        let images: Vec<Vec<usize>> = free
            .witnesses
            .iter()
            .map(|t| term_function(t, b, w))
            .collect::<Result<_>>()?;
        let fa = free.algebra()?;
        let len = images.first().map_or(0, Vec::len);
        let mut pointwise = Vec::new();
        for op in 0..fa.sig().len() {
            let arity = fa.sig().arity(op);
            let total = fa.size().pow(arity as u32);
            let mut args = vec![0; arity];
            for idx in 0..total {
                let mut rest = idx;
                for slot in args.iter_mut() {
                    *slot = rest % fa.size();
                    rest /= fa.size();
                }
                let target = &images[fa.apply(op, &args)];
                for i in 0..len {
                    pointwise.clear();
                    pointwise.extend(args.iter().map(|&e| images[e][i]));
                    if b.apply(op, &pointwise) != target[i] {
                        return Err(Error::NotInVariety(b.name().to_string()));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The coproduct `B + C` in `V` with its injections.
#[derive(Debug, Clone)]
pub struct Coproduct {
    pub algebra: Arc<FiniteAlgebra>,
    pub iota1: Homomorphism,
    pub iota2: Homomorphism,
    /// `F_V(|B| + |C|)`; generator `j < |B|` stands for element `j` of `B`,
    /// generator `|B| + k` for element `k` of `C`.
    pub free: FreeAlgebra,
    /// The congruence on `free` making both injections homomorphisms.
    pub congruence: Congruence,
    pub projection: Homomorphism,
}

/// The table congruence on `F_V(|B| + |C|)`: generated by
/// `(ω(i(a_1), ..., i(a_k)), i(ω(a_1, ..., a_k)))` for both algebras.
pub fn coproduct_congruence(
    v: &VarietyPresentation,
    b: &FiniteAlgebra,
    c: &FiniteAlgebra,
) -> Result<(FreeAlgebra, Congruence)> {
    let free = free_algebra(v, b.size() + c.size())?;
    let fa = free.algebra()?;
    let mut pairs = Vec::new();
    for (alg, offset) in [(b, 0usize), (c, b.size())] {
        let gen = |e: usize| free.generator_id(offset + e);
        for op in 0..alg.sig().len() {
            let arity = alg.sig().arity(op);
            let total = alg.size().pow(arity as u32);
            let mut args = vec![0; arity];
            let mut fargs = vec![0; arity];
            for idx in 0..total {
                let mut rest = idx;
                for (a, fa_slot) in args.iter_mut().zip(fargs.iter_mut()) {
                    *a = rest % alg.size();
                    *fa_slot = gen(*a);
                    rest /= alg.size();
                }
                pairs.push((fa.apply(op, &fargs), gen(alg.apply(op, &args))));
            }
        }
    }
    let theta = congruence_generated(&fa, &pairs)?;
    Ok((free, theta))
}

pub fn coproduct(v: &VarietyPresentation, b: &Arc<FiniteAlgebra>, c: &Arc<FiniteAlgebra>) -> Result<Coproduct> {
    check_membership(v, b)?;
    check_membership(v, c)?;
    let (free, theta) = coproduct_congruence(v, b, c)?;
    let fa = free.algebra()?;
    let (q, projection) = quotient(&fa, &theta)?;
    let q = Arc::new(q.as_ref().clone().with_name(format!("{}+{}", b.name(), c.name())));
    let projection = Homomorphism::new_unchecked(Arc::clone(&fa), Arc::clone(&q), projection.map().to_vec());
    let iota1 = Homomorphism::new(
        Arc::clone(b),
        Arc::clone(&q),
        (0..b.size()).map(|e| projection.apply(free.generator_id(e))).collect(),
    )?;
    let iota2 = Homomorphism::new(
        Arc::clone(c),
        Arc::clone(&q),
        (0..c.size())
            .map(|e| projection.apply(free.generator_id(b.size() + e)))
            .collect(),
    )?;
    Ok(Coproduct {
        algebra: q,
        iota1,
        iota2,
        free,
        congruence: theta,
        projection,
    })
}

/// The unique `φ: B + C → D` with `φ ι1 = f` and `φ ι2 = g`, computed as
/// `φ([s(b..., c...)]) = s^D(f(b)..., g(c)...)`.
pub fn couniversal_factor(cp: &Coproduct, f: &Homomorphism, g: &Homomorphism) -> Result<Homomorphism> {
    if **f.cod() != **g.cod() {
        return Err(Error::Invalid("couniversal_factor: codomains differ".into()));
    }
    if **f.dom() != **cp.iota1.dom() || **g.dom() != **cp.iota2.dom() {
        return Err(Error::Invalid("couniversal_factor: domains do not match the summands".into()));
    }
    let d = f.cod();
    let assignment: Vec<usize> = f.map().iter().chain(g.map()).copied().collect();
    let reps: Vec<usize> = cp
        .congruence
        .blocks()
        .iter()
        .enumerate()
        .filter(|&(x, &b)| x == b)
        .map(|(x, _)| x)
        .collect();
    let map = reps
        .iter()
        .map(|&r| eval_term(cp.free.witness(r), d, &assignment))
        .collect::<Result<Vec<_>>>()?;
    let phi = Homomorphism::new(Arc::clone(&cp.algebra), Arc::clone(d), map)
        .map_err(|_| Error::NotInVariety(d.name().to_string()))?;
    if phi.map().len() != cp.algebra.size()
        || (0..f.dom().size()).any(|x| phi.apply(cp.iota1.apply(x)) != f.apply(x))
        || (0..g.dom().size()).any(|x| phi.apply(cp.iota2.apply(x)) != g.apply(x))
    {
        return Err(Error::NotInVariety(d.name().to_string()));
    }
    Ok(phi)
}

/// Quotient of the common codomain by `Cg{(f(b), g(b))}`.
pub fn coequalizer(f: &Homomorphism, g: &Homomorphism) -> Result<(Arc<FiniteAlgebra>, Homomorphism)> {
    if **f.dom() != **g.dom() || **f.cod() != **g.cod() {
        return Err(Error::Invalid("coequalizer: maps are not parallel".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..f.dom().size()).map(|b| (f.apply(b), g.apply(b))).collect();
    let theta = congruence_generated(f.cod(), &pairs)?;
    quotient(f.cod(), &theta)
}

#[derive(Debug, Clone)]
pub struct CokernelPair {
    pub algebra: Arc<FiniteAlgebra>,
    pub q1: Homomorphism,
    pub q2: Homomorphism,
}

/// The pushout of `m: B → C` with itself, built as a coequalizer in `C + C`.
pub fn cokernel_pair(v: &VarietyPresentation, m: &Homomorphism) -> Result<CokernelPair> {
    let c = m.cod();
    let cp = coproduct(v, c, c)?;
    let left = m.then(&cp.iota1)?;
    let right = m.then(&cp.iota2)?;
    let (q_alg, q) = coequalizer(&left, &right)?;
    Ok(CokernelPair {
        q1: cp.iota1.then(&q)?,
        q2: cp.iota2.then(&q)?,
        algebra: q_alg,
    })
}

/// The symmetric, reflexive step relation on `F_V(|B| + |C|)` whose
/// transitive closure is the coproduct's table congruence: all pairs
/// `(τ(ā, b̄, μ1(ā), μ2(b̄)), τ(ā, b̄, λ1(ā), λ2(b̄)))` with `μ1 = λ1` at `ā`
/// in `B` and `μ2 = λ2` at `b̄` in `C`.
///
/// Tuples `ā`, `b̄` range over increasing (repetition-free) sequences;
/// repeated or permuted arguments are expressible inside the terms.
#[derive(Debug, Clone)]
pub struct ZigzagRelation {
    pub free: FreeAlgebra,
    pub pairs: BTreeSet<(usize, usize)>,
}

pub const ZIGZAG_MAX_FREE: usize = 256;

pub fn zigzag_step_relation(v: &VarietyPresentation, b: &FiniteAlgebra, c: &FiniteAlgebra) -> Result<ZigzagRelation> {
    let small = VarietyPresentation {
        generator: Arc::clone(&v.generator),
        caps: Caps {
            max_free_size: v.caps.max_free_size.min(ZIGZAG_MAX_FREE),
            ..v.caps
        },
    };
    let free = free_algebra(&small, b.size() + c.size()).map_err(|e| match e {
        Error::CapExceeded { found, .. } => Error::CapExceeded {
            what: "zigzag free algebra (size guard)",
            cap: ZIGZAG_MAX_FREE,
            found,
        },
        other => other,
    })?;
    let fa = free.algebra()?;
    let mut free_cache: HashMap<usize, Option<FreeAlgebra>> = HashMap::new();
    let mut get_free = |k: usize| -> Result<Option<FreeAlgebra>> {
        if let Some(f) = free_cache.get(&k) {
            return Ok(f.clone());
        }
        let f = match free_algebra(v, k) {
            Ok(f) => Some(f),
            Err(Error::Invalid(_)) => None, // no nullary terms
            Err(e) => return Err(e),
        };
        free_cache.insert(k, f.clone());
        Ok(f)
    };

    let subsets = |n: usize| -> Vec<Vec<usize>> {
        (0..(1usize << n))
            .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
            .collect()
    };

    // pairs (μ(ā), λ(ā)) in F with μ, λ agreeing at ā in the algebra
    let agreeing_pairs = |alg: &FiniteAlgebra,
                          tuple: &[usize],
                          offset: usize,
                          terms: &FreeAlgebra|
     -> Result<Vec<(usize, usize)>> {
        let gens: Vec<usize> = tuple.iter().map(|&x| free.generator_id(offset + x)).collect();
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for w in terms.witnesses() {
            let value = eval_term(w, alg, tuple)?;
            let in_free = eval_term(w, &fa, &gens)?;
            groups.entry(value).or_default().push(in_free);
        }
        let mut out = Vec::new();
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort_unstable();
        for k in keys {
            let g = &groups[&k];
            for &x in g {
                for &y in g {
                    out.push((x, y));
                }
            }
        }
        Ok(out)
    };

    let mut pairs = BTreeSet::new();
    for abar in subsets(b.size()) {
        let Some(fm) = get_free(abar.len())? else { continue };
        let left_pairs = agreeing_pairs(b, &abar, 0, &fm)?;
        for bbar in subsets(c.size()) {
            let Some(fn_) = get_free(bbar.len())? else { continue };
            let right_pairs = agreeing_pairs(c, &bbar, b.size(), &fn_)?;
            let Some(ftau) = get_free(abar.len() + bbar.len() + 2)? else { continue };
            let mut base: Vec<usize> = abar.iter().map(|&x| free.generator_id(x)).collect();
            base.extend(bbar.iter().map(|&y| free.generator_id(b.size() + y)));
            let mut args = base.clone();
            args.push(0);
            args.push(0);
            let k = base.len();
            for &(mu1, lambda1) in &left_pairs {
                for &(mu2, lambda2) in &right_pairs {
                    for tau in ftau.witnesses() {
                        args[k] = mu1;
                        args[k + 1] = mu2;
                        let x = eval_term(tau, &fa, &args)?;
                        args[k] = lambda1;
                        args[k + 1] = lambda2;
                        let y = eval_term(tau, &fa, &args)?;
                        pairs.insert((x, y));
                    }
                }
            }
        }
    }
    Ok(ZigzagRelation { free, pairs })
}

/// Transitive closure of a reflexive symmetric relation, as a partition.
pub fn equivalence_closure(size: usize, pairs: &BTreeSet<(usize, usize)>) -> Congruence {
    let mut uf = UnionFind::new(size);
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    Congruence::from_labels(&uf.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lattice2, n5, set2, z2xor};
    use crate::term::parse_term;

    fn v(a: FiniteAlgebra) -> VarietyPresentation {
        VarietyPresentation::new(a)
    }

    #[test]
    fn free_sizes() {
        let l = v(lattice2());
        assert_eq!(free_algebra(&l, 1).unwrap().size(), 1);
        assert_eq!(free_algebra(&l, 2).unwrap().size(), 4);
        assert_eq!(free_algebra(&l, 3).unwrap().size(), 18);
        let z = v(z2xor());
        for n in 0..=4 {
            assert_eq!(free_algebra(&z, n).unwrap().size(), 1 << n);
        }
        assert_eq!(free_algebra(&v(set2()), 3).unwrap().size(), 3);
        assert!(free_algebra(&l, 0).is_err());
    }

    #[test]
    fn free_cap_reports_progress() {
        let l = v(lattice2()).with_caps(Caps {
            max_free_size: 10,
            ..Caps::default()
        });
        match free_algebra(&l, 3) {
            Err(Error::CapExceeded { found, cap, .. }) => {
                assert_eq!(cap, 10);
                assert!(found > 10);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn witnesses_reproduce_elements() {
        for a in [lattice2(), z2xor(), n5()] {
            let var = v(a.clone());
            let f = free_algebra(&var, 2).unwrap();
            for (e, w) in f.elements().iter().zip(f.witnesses()) {
                assert_eq!(&term_function(w, &a, 2).unwrap(), e);
            }
            for j in 0..2 {
                assert_eq!(f.elements()[f.generator_id(j)], projection_vector(a.size(), 2, j));
            }
        }
    }

    #[test]
    fn identities() {
        let l = lattice2();
        let sig = l.sig().clone();
        let lat = v(l);
        let dist = Identity::new(
            parse_term("(meet $0 (join $1 $2))", &sig).unwrap(),
            parse_term("(join (meet $0 $1) (meet $0 $2))", &sig).unwrap(),
            3,
        )
        .unwrap();
        assert!(holds_identity(&lat, &dist).unwrap());
        assert!(!holds_identity(&lat, &Identity::trivializing()).unwrap());
        let z = z2xor();
        let zsig = z.sig().clone();
        let assoc = Identity::new(
            parse_term("(xor $0 (xor $1 $2))", &zsig).unwrap(),
            parse_term("(xor (xor $0 $1) $2)", &zsig).unwrap(),
            3,
        )
        .unwrap();
        assert!(holds_identity(&v(z), &assoc).unwrap());
        assert!(!holds_identity(&v(n5()), &dist).unwrap());
    }

    #[test]
    fn membership() {
        let lat = v(lattice2());
        assert!(check_membership(&lat, &lattice2().product(&lattice2()).unwrap()).is_ok());
        assert!(matches!(check_membership(&lat, &n5()), Err(Error::NotInVariety(_))));
    }

    #[test]
    fn z2_coproduct_has_four_elements() {
        let z = Arc::new(z2xor());
        let cp = coproduct(&v(z2xor()), &z, &z).unwrap();
        assert_eq!(cp.free.size(), 16);
        assert_eq!(cp.algebra.size(), 4);
        let phi = couniversal_factor(&cp, &cp.iota1, &cp.iota2).unwrap();
        assert_eq!(phi.map(), (0..4).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn coequalizers() {
        let z = Arc::new(z2xor());
        let id = Homomorphism::identity(Arc::clone(&z));
        let (q, _) = coequalizer(&id, &id).unwrap();
        assert_eq!(q.size(), 2);
        let zero = Homomorphism::new(Arc::clone(&z), Arc::clone(&z), vec![0, 0]).unwrap();
        let (q, _) = coequalizer(&id, &zero).unwrap();
        assert_eq!(q.size(), 1);
    }

    #[test]
    fn cokernel_pair_of_identity_is_diagonal() {
        let z = Arc::new(z2xor());
        let id = Homomorphism::identity(Arc::clone(&z));
        let ck = cokernel_pair(&v(z2xor()), &id).unwrap();
        assert_eq!(ck.q1.map(), ck.q2.map());
        assert_eq!(ck.algebra.size(), 2);
    }

    #[test]
    fn zigzag_matches_table_congruence() {
        let z = z2xor();
        let var = v(z.clone());
        let zz = zigzag_step_relation(&var, &z, &z).unwrap();
        let n = zz.free.size();
        for x in 0..n {
            assert!(zz.pairs.contains(&(x, x)));
        }
        for &(a, b) in &zz.pairs {
            assert!(zz.pairs.contains(&(b, a)));
        }
        let (_, theta) = coproduct_congruence(&var, &z, &z).unwrap();
        assert_eq!(equivalence_closure(n, &zz.pairs), theta);
    }

    #[test]
    fn zigzag_size_guard() {
        let l = lattice2();
        let sq = l.product(&l).unwrap();
        // F(6) over lattice2 is far beyond the guard
        let err = zigzag_step_relation(&v(l), &sq, &lattice2()).unwrap_err();
        assert!(err.is_cap());
    }
}
