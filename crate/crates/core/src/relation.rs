//! Binary relations that are subuniverses of products, and pullbacks of
//! split epimorphisms.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::closure::close_set;
use crate::error::{Error, Result};
use crate::hom::Homomorphism;

/// A subuniverse of `left × right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    left: Arc<FiniteAlgebra>,
    right: Arc<FiniteAlgebra>,
    pairs: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelationFlags {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub difunctional: bool,
    pub equivalence: bool,
}

impl Relation {
    /// Checks closure under the operations, componentwise.
    pub fn new(
        left: Arc<FiniteAlgebra>,
        right: Arc<FiniteAlgebra>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        left.same_signature(&right)?;
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        for &(a, b) in &pairs {
            if a >= left.size() || b >= right.size() {
                return Err(Error::ElementOutOfRange {
                    element: a.max(b),
                    size: left.size().min(right.size()),
                });
            }
        }
        let rel = Relation { left, right, pairs };
        if let Some(why) = rel.closure_violation() {
            return Err(Error::NotSubuniverse(why));
        }
        Ok(rel)
    }

    fn closure_violation(&self) -> Option<String> {
        let list: Vec<(usize, usize)> = self.pairs.iter().copied().collect();
        let sig = self.left.sig();
        for op in 0..sig.len() {
            let arity = sig.arity(op);
            let total = list.len().pow(arity as u32);
            let mut la = vec![0; arity];
            let mut ra = vec![0; arity];
            for idx in 0..total {
                let mut rest = idx;
                for i in 0..arity {
                    let (a, b) = list[rest % list.len()];
                    la[i] = a;
                    ra[i] = b;
                    rest /= list.len();
                }
                let p = (self.left.apply(op, &la), self.right.apply(op, &ra));
                if !self.pairs.contains(&p) {
                    return Some(format!("`{}` produces {:?}", sig.name(op), p));
                }
            }
        }
        None
    }

    pub fn left(&self) -> &Arc<FiniteAlgebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteAlgebra> {
        &self.right
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Exhaustive property flags of a relation on a single algebra.
pub fn relation_properties(r: &Relation) -> Result<RelationFlags> {
    if *r.left != *r.right {
        return Err(Error::Invalid(
            "relation properties need left and right to be the same algebra".into(),
        ));
    }
    let n = r.left.size();
    let reflexive = (0..n).all(|x| r.contains(x, x));
    let symmetric = r.pairs.iter().all(|&(a, b)| r.contains(b, a));
    let transitive = r.pairs.iter().all(|&(a, b)| {
        r.pairs
            .range((b, 0)..=(b, usize::MAX))
            .all(|&(_, c)| r.contains(a, c))
    });
    // xRy, x'Ry, x'Ry'  ⟹  xRy'
    let difunctional = r.pairs.iter().all(|&(x, y)| {
        r.pairs.iter().filter(|&&(_, y2)| y2 == y).all(|&(x2, _)| {
            r.pairs
                .range((x2, 0)..=(x2, usize::MAX))
                .all(|&(_, y3)| r.contains(x, y3))
        })
    });
    Ok(RelationFlags {
        reflexive,
        symmetric,
        transitive,
        difunctional,
        equivalence: reflexive && symmetric && transitive,
    })
}

/// Every subuniverse of `alg²` containing the diagonal.
///
/// Sorted by size, then by pair list.
pub fn enumerate_reflexive_relations(alg: &Arc<FiniteAlgebra>, cap: usize) -> Result<Vec<Relation>> {
    let n = alg.size();
    let sq = alg.product(alg)?;
    let encode = |a: usize, b: usize| a + n * b;
    let diagonal: Vec<usize> = (0..n).map(|x| encode(x, x)).collect();
    let start = close_set(&sq, &diagonal);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut frontier = vec![start.clone()];
    seen.insert(start);
    while let Some(cur) = frontier.pop() {
        let members: Vec<usize> = (0..sq.size()).filter(|&e| cur[e]).collect();
        for e in (0..sq.size()).filter(|&e| !cur[e]) {
            let mut seeds = members.clone();
            seeds.push(e);
            let next = close_set(&sq, &seeds);
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "reflexive relation count",
                        cap,
                        found: seen.len(),
                    });
                }
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<Relation> = seen
        .into_iter()
        .map(|mask| Relation {
            left: Arc::clone(alg),
            right: Arc::clone(alg),
            pairs: (0..sq.size()).filter(|&e| mask[e]).map(|e| (e % n, e / n)).collect(),
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.pairs.cmp(&b.pairs)));
    Ok(out)
}

/// The pullback of split epimorphisms `f: X → Z ← Y: g` with splittings
/// `r: Z → X`, `s: Z → Y`, together with its projections and the canonical
/// injections `e1(x) = (x, s f x)`, `e2(y) = (r g y, y)`.
#[derive(Debug, Clone)]
pub struct SplitPullback {
    pub algebra: Arc<FiniteAlgebra>,
    /// Pairs `(x, y)` in the order of the pullback's elements.
    pub pairs: Vec<(usize, usize)>,
    pub p1: Homomorphism,
    pub p2: Homomorphism,
    pub e1: Homomorphism,
    pub e2: Homomorphism,
}

pub fn pullback_split_epis(
    f: &Homomorphism,
    r: &Homomorphism,
    g: &Homomorphism,
    s: &Homomorphism,
) -> Result<SplitPullback> {
    let (x_alg, z_alg, y_alg) = (f.dom(), f.cod(), g.dom());
    if **g.cod() != **z_alg || **r.dom() != **z_alg || **s.dom() != **z_alg {
        return Err(Error::SplittingViolated("maps do not share the base Z".into()));
    }
    if **r.cod() != **x_alg || **s.cod() != **y_alg {
        return Err(Error::SplittingViolated("splittings land in the wrong algebras".into()));
    }
    if (0..z_alg.size()).any(|z| f.apply(r.apply(z)) != z) {
        return Err(Error::SplittingViolated("f ∘ r is not the identity".into()));
    }
    if (0..z_alg.size()).any(|z| g.apply(s.apply(z)) != z) {
        return Err(Error::SplittingViolated("g ∘ s is not the identity".into()));
    }
    let nx = x_alg.size();
    let product = x_alg.product(y_alg)?;
    let mut pairs = Vec::new();
    let mut elements = Vec::new();
    for y in 0..y_alg.size() {
        for x in 0..nx {
            if f.apply(x) == g.apply(y) {
                pairs.push((x, y));
                elements.push(x + nx * y);
            }
        }
    }
    let algebra = Arc::new(product.restrict(
        format!("{}x_{}{}", x_alg.name(), z_alg.name(), y_alg.name()),
        &elements,
    )?);
    let index_of = |x: usize, y: usize| {
        elements
            .binary_search(&(x + nx * y))
            .expect("pair lies in the pullback")
    };
    let p1 = Homomorphism::new(Arc::clone(&algebra), Arc::clone(x_alg), pairs.iter().map(|p| p.0).collect())?;
    let p2 = Homomorphism::new(Arc::clone(&algebra), Arc::clone(y_alg), pairs.iter().map(|p| p.1).collect())?;
    let e1 = Homomorphism::new(
        Arc::clone(x_alg),
        Arc::clone(&algebra),
        (0..nx).map(|x| index_of(x, s.apply(f.apply(x)))).collect(),
    )?;
    let e2 = Homomorphism::new(
        Arc::clone(y_alg),
        Arc::clone(&algebra),
        (0..y_alg.size()).map(|y| index_of(r.apply(g.apply(y)), y)).collect(),
    )?;
    Ok(SplitPullback {
        algebra,
        pairs,
        p1,
        p2,
        e1,
        e2,
    })
}
