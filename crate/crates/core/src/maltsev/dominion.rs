//! Dominion membership by searching for separating homomorphism pairs.
//!
//! An element `t` of `C` lies in the dominion of a subalgebra `B ≤ C` (with
//! respect to `V`) iff every two homomorphisms `C → D ∈ V` that agree on `B`
//! agree on `t`. A separating pair may be composed with a projection onto a
//! subdirectly irreducible quotient of `D`, and every finite member of `V` is
//! a quotient of a subalgebra of a power of `A`, so it suffices to search
//! subdirectly irreducible quotients of subalgebras of `A^e`.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::jonsson::jonsson_chain;
use super::CoreObjects;
use crate::algebra::{AlgebraJson, FiniteAlgebra};
use crate::closure::{all_subuniverses, close_set, greedy_generating_set};
use crate::congruence::{all_congruences, is_subdirectly_irreducible, quotient, Congruence};
use crate::error::{Error, Result};
use crate::hom::{hom_violation, HomSearch};
use crate::variety::VarietyPresentation;

/// Which ambient algebra a certificate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ambient {
    /// The pullback `P` (weakly Mal'tsev question).
    #[serde(rename = "P")]
    P,
    /// `F(x,y)²` (regular-relation question).
    #[serde(rename = "F2sq")]
    F2Squared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum DominionMode {
    /// Requires a congruence-distributive `V`; complete.
    CdComplete,
    /// Searches `A^e` for `e <= max_power`; sound but possibly `Unknown`.
    Refute { max_power: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Justification {
    /// The target already lies in the subalgebra.
    TargetInSubalgebra { witness: Option<String> },
    /// `V` is congruence distributive (Jónsson chain of the given length) and
    /// no subdirectly irreducible algebra in `HS(A)` separates.
    NoSeparation { jonsson_terms: usize, candidates: usize },
}

/// Where a separating algebra comes from: `A^power`, restricted to
/// `subalgebra`, divided by `congruence` (block ids on subalgebra positions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub power: usize,
    pub subalgebra: Vec<usize>,
    pub congruence: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCertificate {
    /// `None` for queries outside the fixed configuration.
    pub ambient: Option<Ambient>,
    pub algebra: Arc<FiniteAlgebra>,
    pub provenance: Provenance,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub ambient: Option<Ambient>,
    pub algebra: AlgebraJson,
    pub provenance: Provenance,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub target: usize,
}

impl SeparationCertificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            ambient: self.ambient,
            algebra: self.algebra.to_json(),
            provenance: self.provenance.clone(),
            u: self.u.clone(),
            v: self.v.clone(),
            target: self.target,
        }
    }

    pub fn from_json(json: &CertificateJson) -> Result<Self> {
        Ok(SeparationCertificate {
            ambient: json.ambient,
            algebra: Arc::new(FiniteAlgebra::from_json(&json.algebra)?),
            provenance: json.provenance.clone(),
            u: json.u.clone(),
            v: json.v.clone(),
            target: json.target,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes(Justification),
    No(Box<SeparationCertificate>),
    /// Nothing separates inside `A^e` for `e <= bound`.
    Unknown { bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum VerdictJson {
    Yes { justification: Justification },
    No { certificate: CertificateJson },
    Unknown { bound: usize },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn certificate(&self) -> Option<&SeparationCertificate> {
        match self {
            Verdict::No(c) => Some(c),
            _ => None,
        }
    }

    pub fn to_json(&self) -> VerdictJson {
        match self {
            Verdict::Yes(j) => VerdictJson::Yes { justification: j.clone() },
            Verdict::No(c) => VerdictJson::No { certificate: c.to_json() },
            Verdict::Unknown { bound } => VerdictJson::Unknown { bound: *bound },
        }
    }

    pub fn from_json(json: &VerdictJson) -> Result<Self> {
        Ok(match json {
            VerdictJson::Yes { justification } => Verdict::Yes(justification.clone()),
            VerdictJson::No { certificate } => {
                Verdict::No(Box::new(SeparationCertificate::from_json(certificate)?))
            }
            VerdictJson::Unknown { bound } => Verdict::Unknown { bound: *bound },
        })
    }
}

/// A subdirectly irreducible quotient of a subalgebra of `A^power`.
#[derive(Debug, Clone)]
pub struct SiCandidate {
    pub algebra: Arc<FiniteAlgebra>,
    pub provenance: Provenance,
}

/// The subdirectly irreducible quotients of subalgebras of `A^e`, without
/// repeated tables, ordered by size (stable within equal sizes).
pub fn si_candidates(v: &VarietyPresentation, e: usize) -> Result<Vec<SiCandidate>> {
    let cap = v.caps.max_enumeration;
    let power = v.generator().power(e)?;
    let mut seen: HashSet<FiniteAlgebra> = HashSet::new();
    let mut out = Vec::new();
    for sub in all_subuniverses(&power, cap)? {
        if sub.len() < 2 {
            continue;
        }
        let b = Arc::new(power.restrict(format!("{}|sub", power.name()), &sub)?);
        for theta in all_congruences(&b, cap)? {
            if theta.is_total() {
                continue;
            }
            let (q, _) = quotient(&b, &theta)?;
            if !is_subdirectly_irreducible(&q)? {
                continue;
            }
            let q = (*q).clone().with_name(format!("S{}", out.len()));
            if !seen.insert(q.clone().with_name("")) {
                continue;
            }
            out.push(SiCandidate {
                algebra: Arc::new(q),
                provenance: Provenance {
                    power: e,
                    subalgebra: sub.clone(),
                    congruence: theta.blocks().to_vec(),
                },
            });
        }
    }
    out.sort_by_key(|c| c.algebra.size());
    Ok(out)
}

/// Generators of `ambient` whose first entries generate `sub`.
fn generators_extending(ambient: &FiniteAlgebra, sub: &[usize], start: &[usize]) -> Result<(Vec<usize>, usize)> {
    let sub_alg = ambient.restrict("sub", sub)?;
    let local: Vec<usize> = start
        .iter()
        .map(|s| sub.binary_search(s).map_err(|_| Error::Invalid("seed outside the subalgebra".into())))
        .collect::<Result<_>>()?;
    let sub_gens: Vec<usize> = greedy_generating_set(&sub_alg, &local)
        .into_iter()
        .map(|i| sub[i])
        .collect();
    let gens = greedy_generating_set(ambient, &sub_gens);
    Ok((gens, sub_gens.len()))
}

/// The first pair of homomorphisms `ambient → s` agreeing on the first
/// `fixed` generators and differing at `target`.
fn separate(ambient: &FiniteAlgebra, s: &FiniteAlgebra, gens: &[usize], fixed: usize, target: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut search = HomSearch::new(ambient, s);
    let mut group: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut found = None;
    search.run(gens, &mut |map| {
        let key: Vec<usize> = gens[..fixed].iter().map(|&g| map[g]).collect();
        match &group {
            Some((k, first)) if *k == key => {
                if first[target] != map[target] {
                    found = Some((first.clone(), map.to_vec()));
                    return false;
                }
            }
            _ => group = Some((key, map.to_vec())),
        }
        true
    });
    found
}

fn search(
    v: &VarietyPresentation,
    ambient: &FiniteAlgebra,
    tag: Option<Ambient>,
    sub: &[usize],
    seeds: &[usize],
    target: usize,
    max_power: usize,
) -> Result<(Option<SeparationCertificate>, usize)> {
    let (gens, fixed) = generators_extending(ambient, sub, seeds)?;
    let mut seen: HashSet<FiniteAlgebra> = HashSet::new();
    let mut tried = 0;
    for e in 1..=max_power {
        for cand in si_candidates(v, e)? {
            if !seen.insert((*cand.algebra).clone().with_name("")) {
                continue;
            }
            tried += 1;
            if let Some((u, w)) = separate(ambient, &cand.algebra, &gens, fixed, target) {
                let cert = SeparationCertificate {
                    ambient: tag,
                    algebra: cand.algebra,
                    provenance: cand.provenance,
                    u,
                    v: w,
                    target,
                };
                return Ok((Some(cert), tried));
            }
        }
    }
    Ok((None, tried))
}

fn dominion_impl(
    v: &VarietyPresentation,
    ambient: &FiniteAlgebra,
    tag: Option<Ambient>,
    sub: &[usize],
    seeds: &[usize],
    target: usize,
    witness: Option<String>,
    mode: DominionMode,
) -> Result<Verdict> {
    v.generator().same_signature(ambient)?;
    if target >= ambient.size() {
        return Err(Error::ElementOutOfRange {
            element: target,
            size: ambient.size(),
        });
    }
    let mut sub: Vec<usize> = sub.to_vec();
    sub.sort_unstable();
    sub.dedup();
    let mask = close_set(ambient, &sub);
    if mask.iter().filter(|&&b| b).count() != sub.len() {
        return Err(Error::NotSubuniverse("dominion query needs a subuniverse".into()));
    }
    if mask[target] {
        return Ok(Verdict::Yes(Justification::TargetInSubalgebra { witness }));
    }
    match mode {
        DominionMode::CdComplete => {
            let chain = match jonsson_chain(v) {
                Ok(Some(chain)) => chain,
                Ok(None) => return Err(Error::CdCertificationFailed),
                Err(e) if e.is_cap() => {
                    let mode = DominionMode::Refute {
                        max_power: v.caps.max_power,
                    };
                    return dominion_impl(v, ambient, tag, &sub, seeds, target, None, mode);
                }
                Err(e) => return Err(e),
            };
            // Jónsson's lemma: every subdirectly irreducible member is in HS(A)
            match search(v, ambient, tag, &sub, seeds, target, 1)? {
                (Some(cert), _) => Ok(Verdict::No(Box::new(cert))),
                (None, candidates) => Ok(Verdict::Yes(Justification::NoSeparation {
                    jonsson_terms: chain.len(),
                    candidates,
                })),
            }
        }
        DominionMode::Refute { max_power } => match search(v, ambient, tag, &sub, seeds, target, max_power)? {
            (Some(cert), _) => Ok(Verdict::No(Box::new(cert))),
            (None, _) => Ok(Verdict::Unknown { bound: max_power }),
        },
    }
}

/// Whether `target` lies in the dominion of the subuniverse `sub` of
/// `ambient` with respect to `V`.
pub fn dominion_member(
    v: &VarietyPresentation,
    ambient: &FiniteAlgebra,
    sub: &[usize],
    target: usize,
    mode: DominionMode,
) -> Result<Verdict> {
    dominion_impl(v, ambient, None, sub, &[], target, None, mode)
}

fn core_query(core: &CoreObjects, ambient: Ambient, mode: DominionMode) -> Result<Verdict> {
    let alg = core.ambient_algebra(ambient);
    let (x, y) = (core.f2.generator_id(0), core.f2.generator_id(1));
    let seeds: Vec<usize> = [(x, x), (x, y), (y, y)]
        .iter()
        .map(|&(a, b)| core.to_ambient(ambient, core.encode(a, b)).expect("generator of R"))
        .collect();
    let witness = core
        .r
        .position(core.yx)
        .map(|i| core.r.witnesses[i].render(core.f2_algebra.sig()));
    dominion_impl(
        &core.variety,
        alg,
        Some(ambient),
        &core.r_in(ambient),
        &seeds,
        core.yx_in(ambient),
        witness,
        mode,
    )
}

/// Is `V` a weakly Mal'tsev category: does `(y,x)` lie in the dominion of
/// `R` in `P`?
pub fn weakly_maltsev(core: &CoreObjects, mode: DominionMode) -> Result<Verdict> {
    core_query(core, Ambient::P, mode)
}

/// Is every reflexive regular relation in `V` an equivalence: does `(y,x)`
/// lie in the dominion of `R` in `F(x,y)²`?
pub fn reg_maltsev(core: &CoreObjects, mode: DominionMode) -> Result<Verdict> {
    core_query(core, Ambient::F2Squared, mode)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub valid: bool,
    /// The first violated condition.
    pub violation: Option<String>,
}

impl CertificateCheck {
    fn fail(msg: impl Into<String>) -> Self {
        CertificateCheck {
            valid: false,
            violation: Some(msg.into()),
        }
    }
}

fn rebuild(v: &VarietyPresentation, prov: &Provenance) -> Result<FiniteAlgebra> {
    let power = v.generator().power(prov.power)?;
    let b = Arc::new(power.restrict("sub", &prov.subalgebra)?);
    let theta = Congruence::from_canonical(prov.congruence.clone())?;
    Ok((*quotient(&b, &theta)?.0).clone())
}

/// Re-checks a certificate from scratch: `S` is the stated quotient of a
/// subalgebra of a power of `A`, `u` and `v` are homomorphisms from the
/// ambient algebra, they agree on `R` and differ at `(y,x)`.
pub fn check_certificate(cert: &SeparationCertificate, core: &CoreObjects) -> CertificateCheck {
    let Some(tag) = cert.ambient else {
        return CertificateCheck::fail("certificate names no ambient algebra");
    };
    let ambient = core.ambient_algebra(tag);
    let s = &cert.algebra;
    match rebuild(&core.variety, &cert.provenance) {
        Ok(q) => {
            if q.sig() != s.sig() || q.size() != s.size() || (0..q.sig().len()).any(|op| q.table(op) != s.table(op)) {
                return CertificateCheck::fail("S differs from the quotient named by its provenance");
            }
        }
        Err(e) => return CertificateCheck::fail(format!("provenance does not describe an algebra: {e}")),
    }
    for (name, map) in [("u", &cert.u), ("v", &cert.v)] {
        if map.len() != ambient.size() || map.iter().any(|&x| x >= s.size()) {
            return CertificateCheck::fail(format!("{name} is not a map from the ambient algebra into S"));
        }
        if let Some(why) = hom_violation(ambient, s, map) {
            return CertificateCheck::fail(format!("{name} is not a homomorphism: {why}"));
        }
    }
    for r in core.r_in(tag) {
        if cert.u[r] != cert.v[r] {
            return CertificateCheck::fail(format!("u and v differ at element {r} of R"));
        }
    }
    if cert.target != core.yx_in(tag) {
        return CertificateCheck::fail("target is not (y,x)");
    }
    if cert.u[cert.target] == cert.v[cert.target] {
        return CertificateCheck::fail("u and v agree at the target");
    }
    CertificateCheck {
        valid: true,
        violation: None,
    }
}
