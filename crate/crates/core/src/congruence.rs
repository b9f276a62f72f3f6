//! Congruences: generation by union-find, enumeration, quotients.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::hom::Homomorphism;

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two distinct classes were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }

    /// Canonical block ids: each element maps to the least member of its class.
    pub fn canonical(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut least = vec![usize::MAX; n];
        let mut out = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if least[r] == usize::MAX {
                least[r] = x;
            }
            out[x] = least[r];
        }
        out
    }
}

/// An equivalence on a carrier, stored as canonical block ids (block id =
/// least member), so equality of congruences is vector equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    blocks: Vec<usize>,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Congruence {
            blocks: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Congruence { blocks: vec![0; n] }
    }

    /// Accepts any block labelling and canonicalizes it.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut first = std::collections::HashMap::new();
        let blocks = labels
            .iter()
            .enumerate()
            .map(|(x, l)| *first.entry(*l).or_insert(x))
            .collect();
        Congruence { blocks }
    }

    /// Wraps a canonical block vector, validating canonicity.
    pub fn from_canonical(blocks: Vec<usize>) -> Result<Self> {
        let c = Self::from_labels(&blocks);
        if c.blocks != blocks {
            return Err(Error::Invalid("block ids are not canonical".into()));
        }
        Ok(c)
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    pub fn block_count(&self) -> usize {
        self.blocks.iter().enumerate().filter(|&(x, &b)| x == b).count()
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().enumerate().all(|(x, &b)| x == b)
    }

    pub fn is_total(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Containment as relations.
    pub fn le(&self, other: &Congruence) -> bool {
        (0..self.size()).all(|x| other.related(x, self.blocks[x]))
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let labels: Vec<usize> = (0..self.size())
            .map(|x| self.blocks[x] * self.size() + other.blocks[x])
            .collect();
        Congruence::from_labels(&labels)
    }

    /// Join as equivalences; the join of two congruences is a congruence.
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.size());
        for x in 0..self.size() {
            uf.union(x, self.blocks[x]);
            uf.union(x, other.blocks[x]);
        }
        Congruence {
            blocks: uf.canonical(),
        }
    }

    /// Members of each block, blocks ordered by least member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.size()];
        for (x, &b) in self.blocks.iter().enumerate() {
            if slot[b] == usize::MAX {
                slot[b] = out.len();
                out.push(Vec::new());
            }
            out[slot[b]].push(x);
        }
        out
    }

    /// Whether the partition is compatible with every operation of `alg`.
    pub fn is_compatible(&self, alg: &FiniteAlgebra) -> bool {
        if alg.size() != self.size() {
            return false;
        }
        let n = alg.size();
        for op in 0..alg.sig().len() {
            let arity = alg.sig().arity(op);
            let table = alg.table(op);
            let mut canon_idx = vec![0usize; table.len()];
            for (idx, slot) in canon_idx.iter_mut().enumerate() {
                let mut rest = idx;
                let mut c = 0;
                let mut place = 1;
                for _ in 0..arity {
                    c += self.blocks[rest % n] * place;
                    place *= n;
                    rest /= n;
                }
                *slot = c;
            }
            for (idx, &val) in table.iter().enumerate() {
                if !self.related(val, table[canon_idx[idx]]) {
                    return false;
                }
            }
        }
        true
    }
}

/// The least congruence of `alg` containing every pair in `pairs`.
///
/// Union-find with a worklist of merged pairs: for each merged `(a, b)`,
/// every operation, argument position and environment tuple, the results
/// with `a` and with `b` in that position are merged too.
pub fn congruence_generated(alg: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<Congruence> {
    let n = alg.size();
    for &(a, b) in pairs {
        for x in [a, b] {
            if x >= n {
                return Err(Error::ElementOutOfRange { element: x, size: n });
            }
        }
    }
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in pairs {
        if uf.union(a, b) {
            work.push((a, b));
        }
    }
    let sig = alg.sig();
    while let Some((a, b)) = work.pop() {
        for op in 0..sig.len() {
            let arity = sig.arity(op);
            if arity == 0 {
                continue;
            }
            let env_count = n.pow((arity - 1) as u32);
            let mut args_a = vec![0usize; arity];
            let mut args_b = vec![0usize; arity];
            for pos in 0..arity {
                for env in 0..env_count {
                    let mut rest = env;
                    for i in 0..arity {
                        if i == pos {
                            args_a[i] = a;
                            args_b[i] = b;
                        } else {
                            args_a[i] = rest % n;
                            args_b[i] = args_a[i];
                            rest /= n;
                        }
                    }
                    let x = alg.apply(op, &args_a);
                    let y = alg.apply(op, &args_b);
                    if uf.union(x, y) {
                        work.push((x, y));
                    }
                }
            }
        }
    }
    Ok(Congruence {
        blocks: uf.canonical(),
    })
}

/// Principal congruences `Cg(a, b)` for all `a < b`, in lexicographic order.
pub fn principal_congruences(alg: &FiniteAlgebra) -> Vec<((usize, usize), Congruence)> {
    let n = alg.size();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in (a + 1)..n {
            let c = congruence_generated(alg, &[(a, b)]).expect("elements in range");
            out.push(((a, b), c));
        }
    }
    out
}

/// Every congruence of `alg`: the join-closure of the principal ones,
/// together with the identity. Sorted by block count (descending), then
/// by block vector.
pub fn all_congruences(alg: &FiniteAlgebra, cap: usize) -> Result<Vec<Congruence>> {
    let n = alg.size();
    let mut seen: HashSet<Congruence> = HashSet::new();
    let mut list: Vec<Congruence> = Vec::new();
    let push = |c: Congruence, seen: &mut HashSet<Congruence>, list: &mut Vec<Congruence>| -> Result<bool> {
        if seen.insert(c.clone()) {
            list.push(c);
            if list.len() > cap {
                return Err(Error::CapExceeded {
                    what: "congruence count",
                    cap,
                    found: list.len(),
                });
            }
            return Ok(true);
        }
        Ok(false)
    };
    push(Congruence::identity(n), &mut seen, &mut list)?;
    let mut principals: Vec<Congruence> = Vec::new();
    for (_, c) in principal_congruences(alg) {
        if !principals.contains(&c) {
            principals.push(c.clone());
        }
        push(c, &mut seen, &mut list)?;
    }
    // joins with principal congruences reach every finite join
    let mut frontier: Vec<Congruence> = list.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in &frontier {
            for p in &principals {
                let j = c.join(p);
                if push(j.clone(), &mut seen, &mut list)? {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    list.sort_by(|x, y| {
        y.block_count()
            .cmp(&x.block_count())
            .then_with(|| x.blocks.cmp(&y.blocks))
    });
    Ok(list)
}

/// The quotient algebra and its projection.
///
/// Quotient elements are the blocks in increasing order of their least member.
pub fn quotient(alg: &Arc<FiniteAlgebra>, theta: &Congruence) -> Result<(Arc<FiniteAlgebra>, Homomorphism)> {
    if theta.size() != alg.size() {
        return Err(Error::Invalid("congruence and algebra sizes differ".into()));
    }
    if !theta.is_compatible(alg) {
        return Err(Error::Invalid("partition is not compatible with the operations".into()));
    }
    let reps: Vec<usize> = (0..alg.size()).filter(|&x| theta.blocks[x] == x).collect();
    let mut rank = vec![0usize; alg.size()];
    for (i, &r) in reps.iter().enumerate() {
        rank[r] = i;
    }
    let class_of: Vec<usize> = theta.blocks.iter().map(|&b| rank[b]).collect();
    let mut args = Vec::new();
    let q = FiniteAlgebra::from_fn(
        format!("{}/~", alg.name()),
        alg.sig().clone(),
        reps.len(),
        |op, qargs| {
            args.clear();
            args.extend(qargs.iter().map(|&c| reps[c]));
            class_of[alg.apply(op, &args)]
        },
    )?;
    let q = Arc::new(q);
    let proj = Homomorphism::new_unchecked(Arc::clone(alg), Arc::clone(&q), class_of);
    Ok((q, proj))
}

/// The monolith (least non-identity congruence), if `alg` has one.
pub fn monolith(alg: &FiniteAlgebra) -> Result<Option<Congruence>> {
    if alg.size() < 2 {
        return Err(Error::Invalid(
            "subdirect irreducibility is undefined for one-element algebras".into(),
        ));
    }
    let mut acc: Option<Congruence> = None;
    for (_, c) in principal_congruences(alg) {
        acc = Some(match acc {
            None => c,
            Some(m) => m.meet(&c),
        });
        if acc.as_ref().is_some_and(Congruence::is_identity) {
            return Ok(None);
        }
    }
    Ok(acc)
}

/// True iff the non-identity congruences have a non-identity intersection.
pub fn is_subdirectly_irreducible(alg: &FiniteAlgebra) -> Result<bool> {
    Ok(monolith(alg)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lattice2, z2xor};

    #[test]
    fn generated_examples() {
        let l = lattice2();
        let sq = l.product(&l).unwrap();
        assert!(congruence_generated(&sq, &[]).unwrap().is_identity());
        // (0,0)=0, (0,1)=2; blocks {0,2} and {1,3}
        let c = congruence_generated(&sq, &[(0, 2)]).unwrap();
        assert_eq!(c.blocks(), &[0, 1, 0, 1]);
        let z = z2xor();
        assert!(congruence_generated(&z, &[(0, 1)]).unwrap().is_total());
    }

    #[test]
    fn congruence_counts() {
        let l = lattice2();
        assert_eq!(all_congruences(&l, 100).unwrap().len(), 2);
        assert_eq!(all_congruences(&l.product(&l).unwrap(), 100).unwrap().len(), 4);
        assert_eq!(all_congruences(&z2xor(), 100).unwrap().len(), 2);
        assert!(all_congruences(&l.product(&l).unwrap(), 2).unwrap_err().is_cap());
    }

    #[test]
    fn quotients() {
        let l = Arc::new(lattice2());
        let sq = Arc::new(l.product(&l).unwrap());
        let (q, p) = quotient(&sq, &Congruence::identity(4)).unwrap();
        assert_eq!(q.size(), 4);
        assert_eq!(p.kernel(), Congruence::identity(4).blocks());
        let (q, _) = quotient(&sq, &Congruence::total(4)).unwrap();
        assert_eq!(q.size(), 1);
        let theta = congruence_generated(&sq, &[(0, 2)]).unwrap();
        let (q, p) = quotient(&sq, &theta).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(q.table(0), l.table(0));
        assert_eq!(p.kernel(), theta.blocks());
    }

    #[test]
    fn subdirect_irreducibility() {
        let l = lattice2();
        assert!(is_subdirectly_irreducible(&l).unwrap());
        assert!(!is_subdirectly_irreducible(&l.product(&l).unwrap()).unwrap());
        assert!(is_subdirectly_irreducible(&z2xor()).unwrap());
        let one = FiniteAlgebra::trivial(l.sig().clone());
        assert!(is_subdirectly_irreducible(&one).is_err());
    }
}
