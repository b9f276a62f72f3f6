//! Certification of congruence distributivity via Jónsson terms.

use std::collections::{HashMap, VecDeque};

use crate::error::Result;
use crate::term::Term;
use crate::variety::{free_algebra, VarietyPresentation};

/// Searches `F(x, y, z)` for a Jónsson chain `x = d_0, d_1, ..., d_n = z` with
/// `d_i(x, y, x) = x` for all `i`, `d_i(x,x,y) = d_{i+1}(x,x,y)` for even `i`
/// and `d_i(x,y,y) = d_{i+1}(x,y,y)` for odd `i`.
///
/// Breadth-first over (element, parity of the step), so the chain returned
/// is a shortest one. `None` means no chain exists, which holds exactly
/// when the variety is not congruence distributive.
pub fn jonsson_chain(v: &VarietyPresentation) -> Result<Option<Vec<Term>>> {
    let f3 = free_algebra(v, 3)?;
    let n = f3.carrier_size();
    let at = |t: &[usize], a: usize, b: usize, c: usize| t[a + n * b + n * n * c];
    let binary = |t: &[usize], pattern: [usize; 3]| -> Vec<usize> {
        (0..n * n)
            .map(|idx| {
                let ab = [idx % n, idx / n];
                at(t, ab[pattern[0]], ab[pattern[1]], ab[pattern[2]])
            })
            .collect()
    };

    // t(x, y, x) = x
    let admissible: Vec<usize> = (0..f3.size())
        .filter(|&e| {
            let t = &f3.elements()[e];
            (0..n).all(|a| (0..n).all(|b| at(t, a, b, a) == a))
        })
        .collect();
    let key_xxy: Vec<Vec<usize>> = f3.elements().iter().map(|t| binary(t, [0, 0, 1])).collect();
    let key_xyy: Vec<Vec<usize>> = f3.elements().iter().map(|t| binary(t, [0, 1, 1])).collect();
    let mut by_xxy: HashMap<&[usize], Vec<usize>> = HashMap::new();
    let mut by_xyy: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for &e in &admissible {
        by_xxy.entry(&key_xxy[e]).or_default().push(e);
        by_xyy.entry(&key_xyy[e]).or_default().push(e);
    }

    let (x, z) = (f3.generator_id(0), f3.generator_id(2));
    // node = (element, parity of the next step)
    let mut parent: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([(x, 0usize)]);
    parent.insert((x, 0), (x, 0));
    let mut reached = None;
    while let Some((e, parity)) = queue.pop_front() {
        if e == z {
            reached = Some((e, parity));
            break;
        }
        let next = if parity == 0 {
            &by_xxy[key_xxy[e].as_slice()]
        } else {
            &by_xyy[key_xyy[e].as_slice()]
        };
        for &f in next {
            let node = (f, 1 - parity);
            if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(node) {
                slot.insert((e, parity));
                queue.push_back(node);
            }
        }
    }
    let Some(mut node) = reached else {
        return Ok(None);
    };
    let mut chain = vec![f3.witness(node.0).clone()];
    while node != (x, 0) {
        node = parent[&node];
        chain.push(f3.witness(node.0).clone());
    }
    chain.reverse();
    Ok(Some(chain))
}

/// True iff `V` is congruence distributive.
pub fn cd_certify(v: &VarietyPresentation) -> Result<bool> {
    Ok(jonsson_chain(v)?.is_some())
}
