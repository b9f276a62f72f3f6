//! Brute-force oracles shared by the integration and acceptance suites.
//! They deliberately avoid the library's closure, congruence and hom code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use proptest::prelude::*;
use ua_core::term::Term;
use ua_core::FiniteAlgebra;

/// Term functions of width `n` reachable by terms of depth `<= depth`,
/// built level by level from the projections.
pub fn term_functions_by_depth(a: &FiniteAlgebra, n: usize, depth: usize) -> HashSet<Vec<usize>> {
    let size = a.size();
    let len = size.pow(n as u32);
    let mut known: HashSet<Vec<usize>> = (0..n)
        .map(|j| (0..len).map(|i| (i / size.pow(j as u32)) % size).collect())
        .collect();
    for _ in 0..depth {
        let list: Vec<Vec<usize>> = known.iter().cloned().collect();
        let mut next = known.clone();
        for op in 0..a.sig().len() {
            let arity = a.sig().arity(op);
            let total = list.len().pow(arity as u32);
            for idx in 0..total {
                let mut rest = idx;
                let args: Vec<&Vec<usize>> = (0..arity)
                    .map(|_| {
                        let pick = &list[rest % list.len()];
                        rest /= list.len();
                        pick
                    })
                    .collect();
                let v: Vec<usize> = (0..len)
                    .map(|i| {
                        let point: Vec<usize> = args.iter().map(|f| f[i]).collect();
                        a.apply(op, &point)
                    })
                    .collect();
                next.insert(v);
            }
        }
        if next.len() == known.len() {
            break;
        }
        known = next;
    }
    known
}

/// All set partitions of `{0..n}` as canonical block vectors (least member).
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        let reps: BTreeSet<usize> = cur.iter().copied().collect();
        for r in reps {
            cur.push(r);
            go(i + 1, n, cur, out);
            cur.pop();
        }
        cur.push(i);
        go(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

pub fn is_compatible_partition(a: &FiniteAlgebra, blocks: &[usize]) -> bool {
    let n = a.size();
    for op in 0..a.sig().len() {
        let arity = a.sig().arity(op);
        let total = n.pow(arity as u32);
        for x in 0..total {
            for y in 0..total {
                let xs: Vec<usize> = (0..arity).map(|k| (x / n.pow(k as u32)) % n).collect();
                let ys: Vec<usize> = (0..arity).map(|k| (y / n.pow(k as u32)) % n).collect();
                if xs.iter().zip(&ys).all(|(&p, &q)| blocks[p] == blocks[q])
                    && blocks[a.apply(op, &xs)] != blocks[a.apply(op, &ys)]
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Every congruence of `a`, by filtering all partitions.
pub fn brute_congruences(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
    all_partitions(a.size())
        .into_iter()
        .filter(|p| is_compatible_partition(a, p))
        .collect()
}

/// Every map `a → b` that preserves all operations.
pub fn brute_homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let (n, m) = (a.size(), b.size());
    let mut out = Vec::new();
    for idx in 0..m.pow(n as u32) {
        let map: Vec<usize> = (0..n).map(|k| (idx / m.pow(k as u32)) % m).collect();
        let ok = (0..a.sig().len()).all(|op| {
            let arity = a.sig().arity(op);
            (0..n.pow(arity as u32)).all(|x| {
                let xs: Vec<usize> = (0..arity).map(|k| (x / n.pow(k as u32)) % n).collect();
                let ys: Vec<usize> = xs.iter().map(|&e| map[e]).collect();
                map[a.apply(op, &xs)] == b.apply(op, &ys)
            })
        });
        if ok {
            out.push(map);
        }
    }
    out
}

/// Small corpus used by the congruence and hom oracles (all of size <= 4).
pub fn small_corpus() -> Vec<Arc<FiniteAlgebra>> {
    use ua_core::algebra::{lattice2, set2, z2xor};
    let l = lattice2();
    let z = z2xor();
    let mut out = vec![
        Arc::new(l.clone()),
        Arc::new(z.clone()),
        Arc::new(set2()),
        Arc::new(l.power(2).unwrap()),
        Arc::new(z.power(2).unwrap()),
    ];
    // a 3-element chain and a 4-element algebra with a unary operation
    let chain3 = FiniteAlgebra::from_fn("chain3", l.sig().clone(), 3, |op, a| {
        if op == 0 {
            a[0].min(a[1])
        } else {
            a[0].max(a[1])
        }
    })
    .unwrap();
    out.push(Arc::new(chain3));
    let sig = ua_core::Signature::from_pairs(&[("f", 1), ("g", 2)]).unwrap();
    let odd = FiniteAlgebra::from_fn("mixed4", sig, 4, |op, a| {
        if op == 0 {
            (a[0] + 1) % 4
        } else {
            (a[0] * a[1]) % 4
        }
    })
    .unwrap();
    out.push(Arc::new(odd));
    out
}

/// Random terms over a signature with the
/// given arities, on `width` variables.
pub fn term_strategy(arities: Vec<usize>, width: usize) -> BoxedStrategy<Term> {
    let leaf = (0..width).prop_map(Term::Var).boxed();
    let constants: Vec<usize> = (0..arities.len()).filter(|&o| arities[o] == 0).collect();
    let leaf = if constants.is_empty() {
        leaf
    } else {
        prop_oneof![3 => leaf, 1 => proptest::sample::select(constants).prop_map(|c| Term::app(c, vec![]))].boxed()
    };
    leaf.prop_recursive(4, 24, 3, move |inner| {
        let ops: Vec<usize> = (0..arities.len()).filter(|&o| arities[o] > 0).collect();
        let arities = arities.clone();
        proptest::sample::select(ops)
            .prop_flat_map(move |op| proptest::collection::vec(inner.clone(), arities[op]).prop_map(move |args| Term::app(op, args)))
    })
    .boxed()
}
