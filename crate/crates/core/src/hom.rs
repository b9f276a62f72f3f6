//! Homomorphisms between finite algebras and their enumeration.

use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::closure::{close_set, greedy_generating_set};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Homomorphism {
    dom: Arc<FiniteAlgebra>,
    cod: Arc<FiniteAlgebra>,
    map: Vec<usize>,
}

impl PartialEq for Homomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && *self.dom == *other.dom && *self.cod == *other.cod
    }
}

impl Eq for Homomorphism {}

/// First tuple (op, args) on which `map` fails to commute with the operations.
pub fn hom_violation(dom: &FiniteAlgebra, cod: &FiniteAlgebra, map: &[usize]) -> Option<String> {
    if map.len() != dom.size() {
        return Some(format!(
            "map has {} entries for a domain of size {}",
            map.len(),
            dom.size()
        ));
    }
    if let Some(&bad) = map.iter().find(|&&v| v >= cod.size()) {
        return Some(format!("value {bad} outside codomain of size {}", cod.size()));
    }
    if dom.sig() != cod.sig() {
        return Some("signature mismatch".into());
    }
    let n = dom.size();
    for op in 0..dom.sig().len() {
        let arity = dom.sig().arity(op);
        let table = dom.table(op);
        let mut args = vec![0usize; arity];
        let mut image = vec![0usize; arity];
        for (idx, &val) in table.iter().enumerate() {
            let mut rest = idx;
            for (a, i) in args.iter_mut().zip(image.iter_mut()) {
                *a = rest % n;
                *i = map[*a];
                rest /= n;
            }
            if map[val] != cod.apply(op, &image) {
                return Some(format!(
                    "`{}` at {:?}: image of result is {}, result on images is {}",
                    dom.sig().name(op),
                    args,
                    map[val],
                    cod.apply(op, &image)
                ));
            }
        }
    }
    None
}

impl Homomorphism {
    /// Checks the homomorphism property on every operation table entry.
    pub fn new(dom: Arc<FiniteAlgebra>, cod: Arc<FiniteAlgebra>, map: Vec<usize>) -> Result<Self> {
        dom.same_signature(&cod)?;
        if let Some(why) = hom_violation(&dom, &cod, &map) {
            return Err(Error::NotHomomorphism(why));
        }
        Ok(Homomorphism { dom, cod, map })
    }

    /// For maps already known to be homomorphisms (e.g. produced by search).
    pub(crate) fn new_unchecked(
        dom: Arc<FiniteAlgebra>,
        cod: Arc<FiniteAlgebra>,
        map: Vec<usize>,
    ) -> Self {
        debug_assert!(hom_violation(&dom, &cod, &map).is_none());
        Homomorphism { dom, cod, map }
    }

    pub fn identity(alg: Arc<FiniteAlgebra>) -> Self {
        let map = (0..alg.size()).collect();
        Homomorphism {
            dom: Arc::clone(&alg),
            cod: alg,
            map,
        }
    }

    pub fn dom(&self) -> &Arc<FiniteAlgebra> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteAlgebra> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism> {
        if *self.cod != *next.dom {
            return Err(Error::Invalid(format!(
                "cannot compose: codomain `{}` is not domain `{}`",
                self.cod.name(),
                next.dom.name()
            )));
        }
        Ok(Homomorphism {
            dom: Arc::clone(&self.dom),
            cod: Arc::clone(&next.cod),
            map: self.map.iter().map(|&x| next.map[x]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.size()];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod.size()];
        self.map.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
    }

    /// The kernel as a canonical block-id vector.
    pub fn kernel(&self) -> Vec<usize> {
        let mut first = vec![usize::MAX; self.cod.size()];
        self.map
            .iter()
            .enumerate()
            .map(|(x, &v)| {
                if first[v] == usize::MAX {
                    first[v] = x;
                }
                first[v]
            })
            .collect()
    }
}

/// Result of a possibly truncated homomorphism search.
#[derive(Debug, Clone)]
pub struct HomEnumeration {
    pub homs: Vec<Homomorphism>,
    /// False when the search stopped at the limit.
    pub exhausted: bool,
}

/// All homomorphisms `a -> b`, backtracking over a greedy generating set.
pub fn hom_enumerate(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
    limit: Option<usize>,
) -> Result<HomEnumeration> {
    a.same_signature(b)?;
    let gens = greedy_generating_set(a, &[]);
    hom_enumerate_with_gens(a, b, &gens, limit)
}

/// All homomorphisms `a -> b`, assigning images to `gens` in order.
///
/// `gens` must generate `a`. Maps are produced in lexicographic order of the
/// generator images (first generator slowest).
pub fn hom_enumerate_with_gens(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
    gens: &[usize],
    limit: Option<usize>,
) -> Result<HomEnumeration> {
    a.same_signature(b)?;
    if !close_set(a, gens).into_iter().all(|m| m) {
        return Err(Error::Invalid("generator list does not generate the domain".into()));
    }
    let mut search = HomSearch::new(a, b);
    let mut homs = Vec::new();
    let mut exhausted = true;
    search.run(gens, &mut |map| {
        if limit.is_some_and(|l| homs.len() >= l) {
            exhausted = false;
            return false;
        }
        homs.push(Homomorphism::new_unchecked(Arc::clone(a), Arc::clone(b), map.to_vec()));
        true
    });
    Ok(HomEnumeration { homs, exhausted })
}

/// Backtracking search with forward propagation over a partial map.
pub(crate) struct HomSearch<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    map: Vec<Option<usize>>,
    mapped: Vec<usize>,
    trail: Vec<usize>,
}

impl<'a> HomSearch<'a> {
    pub(crate) fn new(a: &'a FiniteAlgebra, b: &'a FiniteAlgebra) -> Self {
        HomSearch {
            a,
            b,
            map: vec![None; a.size()],
            mapped: Vec::new(),
            trail: Vec::new(),
        }
    }

    fn set(&mut self, x: usize, v: usize) {
        self.map[x] = Some(v);
        self.mapped.push(x);
        self.trail.push(x);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("trail above mark");
            self.map[x] = None;
            self.mapped.pop();
        }
    }

    /// Maps `x ↦ v` and propagates through every operation whose arguments
    /// are all mapped. Returns false on conflict.
    fn assign(&mut self, x: usize, v: usize) -> bool {
        match self.map[x] {
            Some(w) => return w == v,
            None => self.set(x, v),
        }
        let mut queue = vec![x];
        let sig = self.a.sig();
        while let Some(e) = queue.pop() {
            for op in 0..sig.len() {
                let arity = sig.arity(op);
                if arity == 0 {
                    continue;
                }
                // tuples over mapped elements with `e` at some position,
                // counting each tuple once (at its first occurrence of `e`)
                for pos in 0..arity {
                    let others = arity - 1;
                    let pool = self.mapped.len();
                    let total = pool.pow(others as u32);
                    let mut choice = vec![0usize; others];
                    let mut args = vec![0usize; arity];
                    let mut image = vec![0usize; arity];
                    'tuples: for _ in 0..total {
                        let mut k = 0;
                        for (i, slot) in args.iter_mut().enumerate() {
                            if i == pos {
                                *slot = e;
                            } else {
                                *slot = self.mapped[choice[k]];
                                k += 1;
                            }
                        }
                        let skip = args[..pos].contains(&e);
                        // advance before any `continue`
                        for c in choice.iter_mut() {
                            *c += 1;
                            if *c < pool {
                                break;
                            }
                            *c = 0;
                        }
                        if skip {
                            continue 'tuples;
                        }
                        for (im, &ar) in image.iter_mut().zip(&args) {
                            *im = self.map[ar].expect("argument mapped");
                        }
                        let r = self.a.apply(op, &args);
                        let want = self.b.apply(op, &image);
                        match self.map[r] {
                            Some(got) if got != want => return false,
                            Some(_) => {}
                            None => {
                                self.set(r, want);
                                queue.push(r);
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Calls `emit` with every total homomorphism; stops when it returns false.
    pub(crate) fn run(&mut self, gens: &[usize], emit: &mut dyn FnMut(&[usize]) -> bool) {
        // constants are forced
        let sig = self.a.sig();
        for op in 0..sig.len() {
            if sig.arity(op) == 0 {
                let x = self.a.apply(op, &[]);
                let v = self.b.apply(op, &[]);
                if !self.assign(x, v) {
                    return;
                }
            }
        }
        self.descend(gens, 0, emit);
    }

    fn descend(&mut self, gens: &[usize], depth: usize, emit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == gens.len() {
            let total: Vec<usize> = self.map.iter().map(|m| m.expect("generators cover domain")).collect();
            return emit(&total);
        }
        let g = gens[depth];
        if self.map[g].is_some() {
            return self.descend(gens, depth + 1, emit);
        }
        for v in 0..self.b.size() {
            let mark = self.trail.len();
            if self.assign(g, v) && !self.descend(gens, depth + 1, emit) {
                self.undo_to(mark);
                return false;
            }
            self.undo_to(mark);
        }
        true
    }
}

/// Whether the images of `e1` and `e2` generate their common codomain.
pub fn jointly_surjective(e1: &Homomorphism, e2: &Homomorphism) -> Result<bool> {
    if *e1.cod() != *e2.cod() {
        return Err(Error::Invalid("jointly_surjective: codomains differ".into()));
    }
    let seeds: Vec<usize> = e1.map().iter().chain(e2.map()).copied().collect();
    Ok(close_set(e1.cod(), &seeds).into_iter().all(|m| m))
}
