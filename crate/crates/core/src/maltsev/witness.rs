//! Term systems certifying the weakly Mal'tsev property (and its variant for
//! regular relations), and their verification against a variety.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::{parse_term, substitute, Identity, Signature, Term};
use crate::variety::{first_counterexample, VarietyPresentation};

/// Name of the built-in distributive-lattice bundle.
pub const DL_BUNDLE_NAME: &str = "distributive-lattice";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BundleTheorem {
    /// Weakly Mal'tsev: all equations.
    Wm,
    /// Reflexive regular relations are equivalences: drops the pair equations.
    Reg,
}

impl std::str::FromStr for BundleTheorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wm" => Ok(BundleTheorem::Wm),
            "reg" => Ok(BundleTheorem::Reg),
            other => Err(Error::Invalid(format!("unknown theorem `{other}` (expected wm or reg)"))),
        }
    }
}

/// The equation families, in checking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationKind {
    /// `f_i(x,x) = g_i(x,x)`
    Pair,
    /// `η(y, f(x,y), p(x,x,y)) = ε(y, f(x,y), p(x,x,y))`
    EtaY,
    /// `η(x, g(x,y), p(x,y,y)) = ε(x, g(x,y), p(x,y,y))`
    EtaX,
    /// `σ_i(.., ε(i)) = s_i(u, v, w, w, u', v', w', w')`
    Odd,
    /// `s_i(u, v, w, w', u', v', w', w) = σ_{i+1}(.., η(i+1))`
    Even,
    /// `u = σ_1(.., η(1))`
    Start,
    /// `u' = σ_{N+1}(.., ε(N+1))`
    End,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationResult {
    pub label: String,
    pub kind: EquationKind,
    /// Number of variables the identity is checked over.
    pub width: usize,
    pub passed: bool,
    /// First falsifying assignment (variable `$j` gets entry `j`).
    pub counterexample: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: BundleTheorem,
    pub results: Vec<EquationResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EquationResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            if r.passed {
                out.push_str(&format!("PASS {}\n", r.label));
            } else {
                let cx = r
                    .counterexample
                    .as_ref()
                    .map(|a| {
                        a.iter()
                            .enumerate()
                            .map(|(j, v)| format!("${j}={v}"))
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .unwrap_or_default();
                out.push_str(&format!("FAIL {} at {}\n", r.label, cx));
            }
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} of {} equations hold\n",
            self.results.len() - failed,
            self.results.len()
        ));
        out
    }
}

/// `{"k":..,"m":..,"N":..,"f":[..],...}` with terms as s-expressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBundleJson {
    pub k: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default)]
    pub f: Vec<String>,
    #[serde(default)]
    pub g: Vec<String>,
    #[serde(default)]
    pub p: Vec<String>,
    #[serde(default)]
    pub s: Vec<String>,
    pub sigma: Vec<String>,
    pub eta1: Vec<String>,
    pub eta2: Vec<String>,
    pub eps1: Vec<String>,
    pub eps2: Vec<String>,
}

/// `k, m, N` and the terms `f, g, p, s, σ, η1, η2, ε1, ε2` (all 0-indexed).
///
/// Argument orders: `s_i(u, v⃗, w⃗, w̃⃗, u', v⃗', w⃗', w̃⃗')`,
/// `σ_i(u, v⃗, w⃗, u', v⃗', w⃗', a, b)` and `η(u, v⃗, w⃗)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessBundle {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub f: Vec<Term>,
    pub g: Vec<Term>,
    pub p: Vec<Term>,
    pub s: Vec<Term>,
    pub sigma: Vec<Term>,
    pub eta1: Vec<Term>,
    pub eta2: Vec<Term>,
    pub eps1: Vec<Term>,
    pub eps2: Vec<Term>,
}

impl WitnessBundle {
    pub fn s_width(&self) -> usize {
        2 * (self.k + 2 * self.m + 1)
    }

    pub fn sigma_width(&self) -> usize {
        2 * (self.k + self.m + 2)
    }

    pub fn eta_width(&self) -> usize {
        self.k + self.m + 1
    }

    /// Variables `u, v⃗, w⃗, u', v⃗', w⃗'` of the main equations.
    pub fn equation_width(&self) -> usize {
        2 * (self.k + self.m + 1)
    }

    /// Checks list lengths, term widths and the signature.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let families: [(&str, &[Term], usize, usize); 9] = [
            ("f", &self.f, self.k, 2),
            ("g", &self.g, self.k, 2),
            ("p", &self.p, self.m, 3),
            ("s", &self.s, self.n, self.s_width()),
            ("sigma", &self.sigma, self.n + 1, self.sigma_width()),
            ("eta1", &self.eta1, self.n + 1, self.eta_width()),
            ("eta2", &self.eta2, self.n + 1, self.eta_width()),
            ("eps1", &self.eps1, self.n + 1, self.eta_width()),
            ("eps2", &self.eps2, self.n + 1, self.eta_width()),
        ];
        for (name, terms, count, width) in &families {
            if terms.len() != *count {
                return Err(Error::BundleShape(format!(
                    "`{name}` has {} terms, expected {count}",
                    terms.len()
                )));
            }
            for (i, t) in terms.iter().enumerate() {
                t.check(sig)?;
                if t.min_width() > *width {
                    return Err(Error::BundleShape(format!(
                        "`{name}[{}]` uses ${} but has width {width}",
                        i + 1,
                        t.min_width() - 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(json: &WitnessBundleJson, sig: &Signature) -> Result<Self> {
        let parse = |list: &[String]| -> Result<Vec<Term>> {
            list.iter().map(|s| parse_term(s, sig)).collect()
        };
        let bundle = WitnessBundle {
            k: json.k,
            m: json.m,
            n: json.n,
            f: parse(&json.f)?,
            g: parse(&json.g)?,
            p: parse(&json.p)?,
            s: parse(&json.s)?,
            sigma: parse(&json.sigma)?,
            eta1: parse(&json.eta1)?,
            eta2: parse(&json.eta2)?,
            eps1: parse(&json.eps1)?,
            eps2: parse(&json.eps2)?,
        };
        bundle.validate(sig)?;
        Ok(bundle)
    }

    pub fn from_json_str(text: &str, sig: &Signature) -> Result<Self> {
        let json: WitnessBundleJson = serde_json::from_str(text)?;
        Self::from_json(&json, sig)
    }

    pub fn to_json(&self, sig: &Signature) -> WitnessBundleJson {
        let render = |list: &[Term]| list.iter().map(|t| t.render(sig)).collect();
        WitnessBundleJson {
            k: self.k,
            m: self.m,
            n: self.n,
            f: render(&self.f),
            g: render(&self.g),
            p: render(&self.p),
            s: render(&self.s),
            sigma: render(&self.sigma),
            eta1: render(&self.eta1),
            eta2: render(&self.eta2),
            eps1: render(&self.eps1),
            eps2: render(&self.eps2),
        }
    }

    /// The distributive-lattice bundle (`k = 0`, `m = 3`, `N = 5`), over a
    /// signature with binary `meet` and `join`.
    pub fn distributive_lattice(sig: &Signature) -> Result<Self> {
        let json = WitnessBundleJson {
            k: 0,
            m: 3,
            n: 5,
            f: vec![],
            g: vec![],
            p: strings(&["$0", "$1", "$2"]),
            s: strings(&[
                "(meet $0 (join $6 $4))",
                "(meet $0 (join $7 $12))",
                "(join (meet $7 $0) (meet $6 $4))",
                "(meet $7 (join $0 $12))",
                "(meet $7 (join $6 $4))",
            ]),
            sigma: strings(&[
                "(meet $0 $8)",
                "(meet $0 $9)",
                "(join (meet $0 $4) $8)",
                "(join (meet $4 $0) $9)",
                "(meet $4 $8)",
                "(meet $4 $9)",
            ]),
            eta1: strings(&["(join $0 $2)", "$0", "(meet $0 $2)", "$0", "(join $0 $2)", "$0"]),
            eps1: strings(&["(join $3 $1)", "$0", "(meet $3 $1)", "$0", "(join $3 $1)", "$0"]),
            eta2: strings(&["$0", "(join $3 $1)", "$0", "(meet $3 $1)", "$0", "(join $3 $1)"]),
            eps2: strings(&["$0", "(join $0 $2)", "$0", "(meet $0 $2)", "$0", "(join $0 $2)"]),
        };
        Self::from_json(&json, sig)
    }

    /// The bundle obtained from a Mal'tsev term `p` (`k = 0`, `m = N = 1`).
    pub fn from_maltsev_term(p: &Term) -> Self {
        let (u, w) = (Term::Var(0), Term::Var(1));
        WitnessBundle {
            k: 0,
            m: 1,
            n: 1,
            f: vec![],
            g: vec![],
            p: vec![p.clone()],
            s: vec![Term::Var(2)],
            sigma: vec![Term::Var(4), Term::Var(5)],
            eta1: vec![u.clone(), u.clone()],
            eps1: vec![w.clone(), u.clone()],
            eta2: vec![u.clone(), w],
            eps2: vec![u.clone(), u],
        }
    }

    /// Looks up a built-in bundle by name.
    pub fn builtin(name: &str, sig: &Signature) -> Result<Self> {
        match name {
            DL_BUNDLE_NAME => Self::distributive_lattice(sig),
            other => Err(Error::UnknownBuiltin(other.to_string())),
        }
    }
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn vars(range: std::ops::Range<usize>) -> impl Iterator<Item = Term> {
    range.map(Term::Var)
}

/// Every identity of the chosen theorem, labelled, in checking order.
pub fn bundle_identities(b: &WitnessBundle, theorem: BundleTheorem) -> Result<Vec<(String, EquationKind, Identity)>> {
    let (k, m, n) = (b.k, b.m, b.n);
    let mut out = Vec::new();
    let (x, y) = (Term::Var(0), Term::Var(1));

    if theorem == BundleTheorem::Wm {
        for i in 0..k {
            let lhs = substitute(&b.f[i], &[x.clone(), x.clone()])?;
            let rhs = substitute(&b.g[i], &[x.clone(), x.clone()])?;
            out.push((
                format!("pair f{0}(x,x) = g{0}(x,x)", i + 1),
                EquationKind::Pair,
                Identity::new(lhs, rhs, 2)?,
            ));
        }
    }

    // arguments (y, f(x,y), p(x,x,y)) and (x, g(x,y), p(x,y,y))
    let mut at_y = vec![y.clone()];
    let mut at_x = vec![x.clone()];
    for i in 0..k {
        at_y.push(substitute(&b.f[i], &[x.clone(), y.clone()])?);
        at_x.push(substitute(&b.g[i], &[x.clone(), y.clone()])?);
    }
    for j in 0..m {
        at_y.push(substitute(&b.p[j], &[x.clone(), x.clone(), y.clone()])?);
        at_x.push(substitute(&b.p[j], &[x.clone(), y.clone(), y.clone()])?);
    }
    for i in 0..=n {
        for (alpha, eta, eps) in [(1, &b.eta1[i], &b.eps1[i]), (2, &b.eta2[i], &b.eps2[i])] {
            for (kind, args, tag) in [(EquationKind::EtaY, &at_y, "y"), (EquationKind::EtaX, &at_x, "x")] {
                out.push((
                    format!("eta-{tag} eta{alpha}({}) = eps{alpha}({})", i + 1, i + 1),
                    kind,
                    Identity::new(substitute(eta, args)?, substitute(eps, args)?, 2)?,
                ));
            }
        }
    }

    // u = $0, v = $1..=k, w = $(k+1)..=(k+m), then the primed copies
    let width = b.equation_width();
    let half = k + m + 1;
    let u = Term::Var(0);
    let u2 = Term::Var(half);
    let v: Vec<Term> = vars(1..1 + k).collect();
    let w: Vec<Term> = vars(1 + k..half).collect();
    let v2: Vec<Term> = vars(half + 1..half + 1 + k).collect();
    let w2: Vec<Term> = vars(half + 1 + k..width).collect();
    let left: Vec<Term> = vars(0..half).collect();
    let right: Vec<Term> = vars(half..width).collect();

    let sigma_at = |i: usize, a: &Term, bb: &Term| -> Result<Term> {
        let mut args: Vec<Term> = vars(0..width).collect();
        args.push(substitute(a, &left)?);
        args.push(substitute(bb, &right)?);
        substitute(&b.sigma[i], &args)
    };
    let s_at = |i: usize, swap: bool| -> Result<Term> {
        let (first, second) = if swap { (&w2, &w) } else { (&w, &w2) };
        let mut args = vec![u.clone()];
        args.extend(v.iter().cloned());
        args.extend(w.iter().cloned());
        args.extend(first.iter().cloned());
        args.push(u2.clone());
        args.extend(v2.iter().cloned());
        args.extend(w2.iter().cloned());
        args.extend(second.iter().cloned());
        substitute(&b.s[i], &args)
    };

    out.push((
        "start u = sigma1(.., eta(1))".to_string(),
        EquationKind::Start,
        Identity::new(u.clone(), sigma_at(0, &b.eta1[0], &b.eta2[0])?, width)?,
    ));
    for i in 0..n {
        out.push((
            format!("odd sigma{0}(.., eps({0})) = s{0}(u,v,w,w,u',v',w',w')", i + 1),
            EquationKind::Odd,
            Identity::new(sigma_at(i, &b.eps1[i], &b.eps2[i])?, s_at(i, false)?, width)?,
        ));
        out.push((
            format!("even s{0}(u,v,w,w',u',v',w',w) = sigma{1}(.., eta({1}))", i + 1, i + 2),
            EquationKind::Even,
            Identity::new(s_at(i, true)?, sigma_at(i + 1, &b.eta1[i + 1], &b.eta2[i + 1])?, width)?,
        ));
    }
    out.push((
        format!("end u' = sigma{0}(.., eps({0}))", n + 1),
        EquationKind::End,
        Identity::new(u2, sigma_at(n, &b.eps1[n], &b.eps2[n])?, width)?,
    ));
    Ok(out)
}

/// Checks every equation of the theorem in `V`, reporting the first
/// falsifying assignment of each failure.
pub fn verify_witness(v: &VarietyPresentation, b: &WitnessBundle, theorem: BundleTheorem) -> Result<VerificationReport> {
    let sig = v.generator().sig();
    b.validate(sig)?;
    let mut results = Vec::new();
    for (label, kind, id) in bundle_identities(b, theorem)? {
        let cx = first_counterexample(v.generator(), &id)?;
        results.push(EquationResult {
            label,
            kind,
            width: id.width,
            passed: cx.is_none(),
            counterexample: cx,
        });
    }
    Ok(VerificationReport { theorem, results })
}
