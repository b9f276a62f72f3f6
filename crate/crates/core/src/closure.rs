//! Breadth-first closure under the operations of a signature.
//!
//! Elements are discovered in rounds. Within a round, operations are tried
//! in signature order and argument tuples (over the elements known when the
//! round started) in assignment-index order; a tuple is skipped when none of
//! its entries was new in the previous round. Each element keeps the first
//! witness term found, so outputs are reproducible.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::term::{Signature, Term};

#[derive(Debug, Clone)]
pub struct Closure<E> {
    pub elements: Vec<E>,
    /// `witnesses[i]` is a term over the seed positions evaluating to `elements[i]`.
    pub witnesses: Vec<Term>,
    /// Position in `elements` of each seed (duplicated seeds share a position).
    pub seed_positions: Vec<usize>,
}

/// Generic closure. `apply(op, args)` computes an operation on elements.
///
/// Fails with [`Error::CapExceeded`] once more than `cap` elements exist.
pub fn bfs_closure<E, F>(
    sig: &Signature,
    seeds: &[E],
    mut apply: F,
    cap: usize,
    what: &'static str,
) -> Result<Closure<E>>
where
    E: Clone + Eq + Hash,
    F: FnMut(usize, &[&E]) -> E,
{
    let mut elements: Vec<E> = Vec::new();
    let mut witnesses: Vec<Term> = Vec::new();
    let mut index: HashMap<E, usize> = HashMap::new();
    let mut seed_positions = Vec::with_capacity(seeds.len());

    for (i, s) in seeds.iter().enumerate() {
        let pos = *index.entry(s.clone()).or_insert_with(|| {
            elements.push(s.clone());
            witnesses.push(Term::Var(i));
            elements.len() - 1
        });
        seed_positions.push(pos);
    }
    if elements.len() > cap {
        return Err(Error::CapExceeded {
            what,
            cap,
            found: elements.len(),
        });
    }

    let mut prev_start = 0usize;
    let mut first_round = true;
    loop {
        let known = elements.len();
        for op in 0..sig.len() {
            let arity = sig.arity(op);
            if arity == 0 {
                if !first_round {
                    continue;
                }
                let v = apply(op, &[]);
                if !index.contains_key(&v) {
                    index.insert(v.clone(), elements.len());
                    elements.push(v);
                    witnesses.push(Term::app(op, Vec::new()));
                }
                continue;
            }
            if known == 0 {
                continue;
            }
            let total = match known.checked_pow(arity as u32) {
                Some(t) => t,
                None => {
                    return Err(Error::CapExceeded {
                        what,
                        cap,
                        found: elements.len(),
                    })
                }
            };
            let mut tuple = vec![0usize; arity];
            for _ in 0..total {
                if tuple.iter().any(|&t| t >= prev_start) {
                    let v = {
                        let args: Vec<&E> = tuple.iter().map(|&t| &elements[t]).collect();
                        apply(op, &args)
                    };
                    if !index.contains_key(&v) {
                        index.insert(v.clone(), elements.len());
                        elements.push(v);
                        let w = Term::app(op, tuple.iter().map(|&t| witnesses[t].clone()).collect());
                        witnesses.push(w);
                        if elements.len() > cap {
                            return Err(Error::CapExceeded {
                                what,
                                cap,
                                found: elements.len(),
                            });
                        }
                    }
                }
                // advance in assignment-index order (position 0 fastest)
                for slot in tuple.iter_mut() {
                    *slot += 1;
                    if *slot < known {
                        break;
                    }
                    *slot = 0;
                }
            }
        }
        first_round = false;
        if elements.len() == known {
            break;
        }
        prev_start = known;
    }

    Ok(Closure {
        elements,
        witnesses,
        seed_positions,
    })
}

/// A subuniverse of a finite algebra with a witness term per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subuniverse {
    /// Elements in discovery order.
    pub elements: Vec<usize>,
    /// Terms over the seed indices.
    pub witnesses: Vec<Term>,
}

impl Subuniverse {
    pub fn contains(&self, e: usize) -> bool {
        self.elements.contains(&e)
    }

    pub fn position(&self, e: usize) -> Option<usize> {
        self.elements.iter().position(|&x| x == e)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.elements.clone();
        v.sort_unstable();
        v
    }
}

/// The subalgebra of `alg` generated by `seeds`, with witness terms.
pub fn subalgebra_generate(alg: &FiniteAlgebra, seeds: &[usize]) -> Result<Subuniverse> {
    if seeds.is_empty() && !alg.sig().has_constant() {
        return Err(Error::Invalid(
            "subalgebra generation needs a seed or a constant".into(),
        ));
    }
    if let Some(&bad) = seeds.iter().find(|&&s| s >= alg.size()) {
        return Err(Error::ElementOutOfRange {
            element: bad,
            size: alg.size(),
        });
    }
    let mut buf = Vec::new();
    let c = bfs_closure(
        alg.sig(),
        seeds,
        |op, args| {
            buf.clear();
            buf.extend(args.iter().map(|&&a| a));
            alg.apply(op, &buf)
        },
        usize::MAX,
        "subalgebra",
    )?;
    Ok(Subuniverse {
        elements: c.elements,
        witnesses: c.witnesses,
    })
}

/// Membership mask of the subuniverse generated by `seeds` (no witnesses).
pub fn close_set(alg: &FiniteAlgebra, seeds: &[usize]) -> Vec<bool> {
    let n = alg.size();
    let mut member = vec![false; n];
    let mut list = Vec::new();
    for &s in seeds {
        if !member[s] {
            member[s] = true;
            list.push(s);
        }
    }
    let sig = alg.sig();
    for op in 0..sig.len() {
        if sig.arity(op) == 0 {
            let v = alg.apply(op, &[]);
            if !member[v] {
                member[v] = true;
                list.push(v);
            }
        }
    }
    let mut prev_start = 0;
    loop {
        let known = list.len();
        if known == 0 {
            break;
        }
        for op in 0..sig.len() {
            let arity = sig.arity(op);
            if arity == 0 {
                continue;
            }
            let mut tuple = vec![0usize; arity];
            let mut args = vec![0usize; arity];
            let total = known.pow(arity as u32);
            for _ in 0..total {
                if tuple.iter().any(|&t| t >= prev_start) {
                    for (a, &t) in args.iter_mut().zip(&tuple) {
                        *a = list[t];
                    }
                    let v = alg.apply(op, &args);
                    if !member[v] {
                        member[v] = true;
                        list.push(v);
                    }
                }
                for slot in tuple.iter_mut() {
                    *slot += 1;
                    if *slot < known {
                        break;
                    }
                    *slot = 0;
                }
            }
        }
        if list.len() == known {
            break;
        }
        prev_start = known;
    }
    member
}

/// Extends `start` greedily to a generating set of `alg`: repeatedly adds
/// the element whose addition enlarges the generated subuniverse the most
/// (ties broken by the smallest element).
pub fn greedy_generating_set(alg: &FiniteAlgebra, start: &[usize]) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    for &s in start {
        if !gens.contains(&s) {
            gens.push(s);
        }
    }
    let count = |m: &[bool]| m.iter().filter(|&&b| b).count();
    let mut current = close_set(alg, &gens);
    while count(&current) < alg.size() {
        let mut best: Option<(usize, usize)> = None;
        for e in (0..alg.size()).filter(|&e| !current[e]) {
            gens.push(e);
            let gain = count(&close_set(alg, &gens));
            gens.pop();
            if best.map_or(true, |(_, g)| gain > g) {
                best = Some((e, gain));
            }
        }
        let (e, _) = best.expect("some element lies outside the closure");
        gens.push(e);
        current = close_set(alg, &gens);
    }
    gens
}

/// Every non-empty subuniverse of `alg`, as sorted element lists ordered by
/// size and then lexicographically.
pub fn all_subuniverses(alg: &FiniteAlgebra, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = alg.size();
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut frontier: Vec<Vec<bool>> = Vec::new();
    let add = |mask: Vec<bool>, seen: &mut HashSet<Vec<bool>>, frontier: &mut Vec<Vec<bool>>| -> Result<()> {
        if seen.insert(mask.clone()) {
            if seen.len() > cap {
                return Err(Error::CapExceeded {
                    what: "subuniverse count",
                    cap,
                    found: seen.len(),
                });
            }
            frontier.push(mask);
        }
        Ok(())
    };
    if alg.sig().has_constant() {
        add(close_set(alg, &[]), &mut seen, &mut frontier)?;
    }
    for a in 0..n {
        add(close_set(alg, &[a]), &mut seen, &mut frontier)?;
    }
    while let Some(mask) = frontier.pop() {
        let members: Vec<usize> = (0..n).filter(|&e| mask[e]).collect();
        let mut seeds = members.clone();
        for a in (0..n).filter(|&a| !mask[a]) {
            seeds.push(a);
            add(close_set(alg, &seeds), &mut seen, &mut frontier)?;
            seeds.pop();
        }
    }
    let mut out: Vec<Vec<usize>> = seen
        .into_iter()
        .map(|m| (0..n).filter(|&e| m[e]).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b: &Vec<usize>| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}
