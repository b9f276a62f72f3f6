//! Mal'tsev-type properties of `V = HSP(A)`.
//!
//! Everything here is phrased through a small fixed configuration built
//! from the free algebra `F(x, y)`:
//!
//! * `P = {(t1, t2) ∈ F(x,y)² : t1(x,x) = t2(x,x)}`, the pullback of the two
//!   split epimorphisms `F(x,y) → F(x)` sending both generators to `x`;
//! * `e1(t) = (t(x,y), t(y,y))` and `e2(t) = (t(x,x), t(x,y))`;
//! * `R`, the subalgebra generated by `(x,x)`, `(x,y)`, `(y,y)`, which is the
//!   image of `[e1, e2]` and equals `{(p(x,x,y), p(x,y,y)) : p ternary}`;
//! * the element `(y, x)`.
//!
//! `V` has a Mal'tsev term iff `(y,x) ∈ R`; it is weakly Mal'tsev iff `(y,x)`
//! lies in the dominion of `R` in `P`; every reflexive regular relation is an
//! equivalence iff `(y,x)` lies in the dominion of `R` in `F(x,y)²`.

mod dominion;
mod jonsson;
mod witness;

use std::sync::Arc;

pub use dominion::{
    check_certificate, dominion_member, reg_maltsev, si_candidates, weakly_maltsev, Ambient,
    CertificateCheck, CertificateJson, DominionMode, Justification, Provenance,
    SeparationCertificate, SiCandidate, Verdict, VerdictJson,
};
pub use jonsson::{cd_certify, jonsson_chain};
pub use witness::{
    verify_witness, BundleTheorem, EquationKind, EquationResult, VerificationReport, WitnessBundle,
    WitnessBundleJson, DL_BUNDLE_NAME,
};

use crate::algebra::FiniteAlgebra;
use crate::closure::{close_set, subalgebra_generate, Subuniverse};
use crate::error::{Error, Result};
use crate::hom::Homomorphism;
use crate::term::{substitute, Identity, Term};
use crate::variety::{free_algebra, holds_identity, FreeAlgebra, VarietyPresentation};

/// The test configuration `F(x,y)`, `F(x,y)²`, `P`, `R`, `(y,x)`, `e1`, `e2`.
#[derive(Debug, Clone)]
pub struct CoreObjects {
    pub variety: VarietyPresentation,
    /// `F(x, y)` with `x = $0`, `y = $1`.
    pub f2: FreeAlgebra,
    pub f2_algebra: Arc<FiniteAlgebra>,
    /// `F(x,y)²`; the pair `(t1, t2)` is element `t1 + |F(x,y)| * t2`.
    pub f2sq: Arc<FiniteAlgebra>,
    /// `P` as an algebra; element `i` is `p_elements[i]` of `f2sq`.
    pub p: Arc<FiniteAlgebra>,
    pub p_elements: Vec<usize>,
    /// `R` inside `f2sq`, with witnesses over `((x,x), (x,y), (y,y))`.
    pub r: Subuniverse,
    /// `(y, x)` as an element of `f2sq`.
    pub yx: usize,
    pub e1: Homomorphism,
    pub e2: Homomorphism,
}

impl CoreObjects {
    pub fn f2_size(&self) -> usize {
        self.f2.size()
    }

    pub fn pair(&self, sq: usize) -> (usize, usize) {
        (sq % self.f2.size(), sq / self.f2.size())
    }

    pub fn encode(&self, t1: usize, t2: usize) -> usize {
        t1 + self.f2.size() * t2
    }

    /// Position of an `f2sq` element inside `P`.
    pub fn p_index(&self, sq: usize) -> Option<usize> {
        self.p_elements.binary_search(&sq).ok()
    }

    pub fn ambient_algebra(&self, ambient: Ambient) -> &Arc<FiniteAlgebra> {
        match ambient {
            Ambient::P => &self.p,
            Ambient::F2Squared => &self.f2sq,
        }
    }

    /// Converts an `f2sq` element to the indexing of `ambient`.
    pub fn to_ambient(&self, ambient: Ambient, sq: usize) -> Option<usize> {
        match ambient {
            Ambient::P => self.p_index(sq),
            Ambient::F2Squared => Some(sq),
        }
    }

    /// `R` in the indexing of `ambient`.
    pub fn r_in(&self, ambient: Ambient) -> Vec<usize> {
        self.r
            .elements
            .iter()
            .map(|&e| self.to_ambient(ambient, e).expect("R lies in P"))
            .collect()
    }

    pub fn yx_in(&self, ambient: Ambient) -> usize {
        self.to_ambient(ambient, self.yx).expect("(y,x) lies in P")
    }

    pub fn render_element(&self, sq: usize) -> String {
        let (a, b) = self.pair(sq);
        let sig = self.f2_algebra.sig();
        format!(
            "({}, {})",
            self.f2.witness(a).render(sig),
            self.f2.witness(b).render(sig)
        )
    }
}

/// `t(x, x)`, `t(x, y)`-style substitutions on binary term functions.
fn substitute_binary(f2: &FreeAlgebra, t: usize, first: usize, second: usize) -> usize {
    let n = f2.carrier_size();
    let v = &f2.elements()[t];
    let pick = |z: usize, a: usize, b: usize| if z == 0 { a } else { b };
    let out: Vec<usize> = (0..n * n)
        .map(|idx| {
            let (a, b) = (idx % n, idx / n);
            v[pick(first, a, b) + n * pick(second, a, b)]
        })
        .collect();
    f2.index_of(&out).expect("substitution instance is a binary term function")
}

pub fn build_core(v: &VarietyPresentation) -> Result<CoreObjects> {
    let f2 = free_algebra(v, 2)?;
    let f2_algebra = f2.algebra()?;
    let n = f2.size();
    let f2sq = Arc::new(f2_algebra.product(&f2_algebra)?.with_name("F(x,y)^2"));
    let (x, y) = (f2.generator_id(0), f2.generator_id(1));

    // t(x, x) for every binary term t
    let diag: Vec<usize> = (0..n).map(|t| substitute_binary(&f2, t, 0, 0)).collect();
    let p_elements: Vec<usize> = (0..n * n).filter(|&e| diag[e % n] == diag[e / n]).collect();
    let p = Arc::new(f2sq.restrict("P", &p_elements)?);

    let encode = |a: usize, b: usize| a + n * b;
    let r = subalgebra_generate(&f2sq, &[encode(x, x), encode(x, y), encode(y, y)])?;
    let yx = encode(y, x);

    let p_index = |sq: usize| p_elements.binary_search(&sq).ok();
    let e1_map = (0..n)
        .map(|t| p_index(encode(t, substitute_binary(&f2, t, 1, 1))))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Invalid("e1 leaves P".into()))?;
    let e2_map = (0..n)
        .map(|t| p_index(encode(substitute_binary(&f2, t, 0, 0), t)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Invalid("e2 leaves P".into()))?;
    let e1 = Homomorphism::new(Arc::clone(&f2_algebra), Arc::clone(&p), e1_map)?;
    let e2 = Homomorphism::new(Arc::clone(&f2_algebra), Arc::clone(&p), e2_map)?;

    let core = CoreObjects {
        variety: v.clone(),
        f2,
        f2_algebra,
        f2sq,
        p,
        p_elements,
        r,
        yx,
        e1,
        e2,
    };
    check_core_invariants(&core)?;
    Ok(core)
}

fn check_core_invariants(core: &CoreObjects) -> Result<()> {
    let broken = |what: &str| Err(Error::Invalid(format!("core invariant violated: {what}")));
    if core.r.elements.iter().any(|&e| core.p_index(e).is_none()) {
        return broken("R is not contained in P");
    }
    if core.p_index(core.yx).is_none() {
        return broken("(y,x) is not in P");
    }
    let (x, y) = (core.f2.generator_id(0), core.f2.generator_id(1));
    let at = |sq: usize| core.p_index(sq).expect("in P");
    let expect = [
        (core.e1.apply(x), at(core.encode(x, y))),
        (core.e1.apply(y), at(core.encode(y, y))),
        (core.e2.apply(x), at(core.encode(x, x))),
        (core.e2.apply(y), at(core.encode(x, y))),
    ];
    if expect.iter().any(|(a, b)| a != b) {
        return broken("e1/e2 on generators");
    }
    // R is the image of [e1, e2]
    let seeds: Vec<usize> = core.e1.map().iter().chain(core.e2.map()).copied().collect();
    let image = close_set(&core.p, &seeds);
    let mut r_in_p: Vec<usize> = core.r_in(Ambient::P);
    r_in_p.sort_unstable();
    let image_list: Vec<usize> = (0..core.p.size()).filter(|&e| image[e]).collect();
    if image_list != r_in_p {
        return broken("R differs from the image of [e1, e2]");
    }
    Ok(())
}

/// `p(x, x, y)` and `p(x, y, y)` as binary terms.
pub fn maltsev_instances(p: &Term) -> Result<(Term, Term)> {
    let (x, y) = (Term::Var(0), Term::Var(1));
    Ok((
        substitute(p, &[x.clone(), x.clone(), y.clone()])?,
        substitute(p, &[x, y.clone(), y])?,
    ))
}

/// Whether `p(x,x,y) = y` and `p(x,y,y) = x` hold in `V`.
pub fn is_maltsev_term(v: &VarietyPresentation, p: &Term) -> Result<bool> {
    let (xxy, xyy) = maltsev_instances(p)?;
    Ok(holds_identity(v, &Identity::new(xxy, Term::Var(1), 2)?)?
        && holds_identity(v, &Identity::new(xyy, Term::Var(0), 2)?)?)
}

/// A Mal'tsev term, read off the witness of `(y,x)` in `R` when present.
pub fn maltsev_term(core: &CoreObjects) -> Result<Option<Term>> {
    let Some(pos) = core.r.position(core.yx) else {
        return Ok(None);
    };
    let p = core.r.witnesses[pos].clone();
    if !is_maltsev_term(&core.variety, &p)? {
        return Err(Error::Invalid(
            "witness of (y,x) in R fails the Mal'tsev identities".into(),
        ));
    }
    Ok(Some(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lattice2, set2, z2xor};
    use crate::term::term_function;

    fn core_of(a: FiniteAlgebra) -> CoreObjects {
        build_core(&VarietyPresentation::new(a)).unwrap()
    }

    #[test]
    fn lattice2_core_sizes() {
        let c = core_of(lattice2());
        assert_eq!(c.f2.size(), 4);
        assert_eq!(c.p.size(), 16);
        assert!(!c.r.contains(c.yx));
    }

    #[test]
    fn set2_core() {
        let c = core_of(set2());
        assert_eq!(c.f2.size(), 2);
        assert_eq!(c.p.size(), 4);
        let (x, y) = (c.f2.generator_id(0), c.f2.generator_id(1));
        let mut expected = vec![c.encode(x, x), c.encode(x, y), c.encode(y, y)];
        expected.sort_unstable();
        assert_eq!(c.r.sorted(), expected);
    }

    #[test]
    fn z2_maltsev_term_is_affine() {
        let c = core_of(z2xor());
        assert!(c.r.contains(c.yx));
        let p = maltsev_term(&c).unwrap().unwrap();
        let f = term_function(&p, &z2xor(), 3).unwrap();
        let expected: Vec<usize> = (0..8).map(|i| (i & 1) ^ ((i >> 1) & 1) ^ ((i >> 2) & 1)).collect();
        assert_eq!(f, expected);
    }

    #[test]
    fn lattice_and_set_have_no_maltsev_term() {
        assert!(maltsev_term(&core_of(lattice2())).unwrap().is_none());
        assert!(maltsev_term(&core_of(set2())).unwrap().is_none());
    }

    #[test]
    fn trivial_variety_has_a_maltsev_term() {
        let one = FiniteAlgebra::trivial(lattice2().sig().clone());
        let c = core_of(one);
        assert!(maltsev_term(&c).unwrap().is_some());
    }

    #[test]
    fn r_elements_are_pairs_of_ternary_instances() {
        for a in [lattice2(), z2xor(), set2()] {
            let c = core_of(a.clone());
            for (&e, p) in c.r.elements.iter().zip(&c.r.witnesses) {
                let (t1, t2) = c.pair(e);
                let (xxy, xyy) = maltsev_instances(p).unwrap();
                assert_eq!(term_function(&xxy, &a, 2).unwrap(), c.f2.elements()[t1]);
                assert_eq!(term_function(&xyy, &a, 2).unwrap(), c.f2.elements()[t2]);
            }
        }
    }
}
