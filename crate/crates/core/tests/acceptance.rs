//! Acceptance checks: one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRunner};
use ua_core::algebra::{lattice2, n5, set2, z2xor};
use ua_core::congruence::{all_congruences, congruence_generated};
use ua_core::hom::hom_enumerate;
use ua_core::maltsev::{
    build_core, check_certificate, maltsev_term, reg_maltsev, verify_witness, weakly_maltsev, BundleTheorem,
    DominionMode, EquationKind, Verdict, WitnessBundle,
};
use ua_core::term::{eval_term, parse_term, substitute, term_function, Identity, Term};
use ua_core::variety::{
    coproduct, coproduct_congruence, couniversal_factor, equivalence_closure, free_algebra, holds_identity,
    zigzag_step_relation,
};
use ua_core::{FiniteAlgebra, VarietyPresentation};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Check {
    let took = start.elapsed();
    ensure(took < limit, format!("{what} took {took:?}, limit {limit:?}"))
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let l = lattice2();
    let v = VarietyPresentation::new(l.clone());
    let bundle = WitnessBundle::distributive_lattice(l.sig()).map_err(e)?;
    ensure((bundle.k, bundle.m, bundle.n) == (0, 3, 5), "bundle shape")?;
    let report = verify_witness(&v, &bundle, BundleTheorem::Wm).map_err(e)?;
    ensure(report.passed(), "builtin bundle fails on lattice2")?;
    ensure(
        report.results.iter().all(|r| 2usize.pow(r.width as u32) <= 256),
        "an identity needs more than 256 assignments",
    )?;
    within(start, Duration::from_secs(1), "verification")?;

    let mut mutated = bundle.clone();
    mutated.sigma[0] = parse_term("(meet $0 $9)", l.sig()).map_err(e)?;
    let report = verify_witness(&v, &mutated, BundleTheorem::Wm).map_err(e)?;
    let start_eq = report
        .failures()
        .find(|r| r.kind == EquationKind::Start)
        .ok_or("mutation not detected by the start equation")?;
    ensure(start_eq.counterexample.is_some(), "no falsifying assignment reported")
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let core = build_core(&VarietyPresentation::new(lattice2())).map_err(e)?;
    ensure(weakly_maltsev(&core, DominionMode::CdComplete).map_err(e)?.is_yes(), "lattice2 not Yes")?;
    within(start, Duration::from_secs(10), "lattice2")?;

    let start = Instant::now();
    let core = build_core(&VarietyPresentation::new(n5())).map_err(e)?;
    let verdict = weakly_maltsev(&core, DominionMode::CdComplete).map_err(e)?;
    let cert = verdict.certificate().ok_or("n5 not No")?;
    let check = check_certificate(cert, &core);
    ensure(check.valid, format!("n5 certificate rejected: {:?}", check.violation))?;
    within(start, Duration::from_secs(10), "n5")?;

    let start = Instant::now();
    let core = build_core(&VarietyPresentation::new(set2())).map_err(e)?;
    let verdict = weakly_maltsev(&core, DominionMode::Refute { max_power: 1 }).map_err(e)?;
    ensure(verdict.is_no(), "set2 not No")?;
    within(start, Duration::from_secs(10), "set2")
}

fn criterion_3() -> Check {
    let z = z2xor();
    let zv = VarietyPresentation::new(z.clone());
    let core = build_core(&zv).map_err(e)?;
    let p = maltsev_term(&core).map_err(e)?.ok_or("no Mal'tsev term for z2xor")?;
    let f = term_function(&p, &z, 3).map_err(e)?;
    let xor3: Vec<usize> = (0..8).map(|i| (i & 1) ^ ((i >> 1) & 1) ^ ((i >> 2) & 1)).collect();
    ensure(f == xor3, "term function is not x+y+z")?;
    let (x, y) = (Term::Var(0), Term::Var(1));
    let xxy = substitute(&p, &[x.clone(), x.clone(), y.clone()]).map_err(e)?;
    let xyy = substitute(&p, &[x.clone(), y.clone(), y.clone()]).map_err(e)?;
    ensure(holds_identity(&zv, &Identity::new(xxy, y, 2).map_err(e)?).map_err(e)?, "p(x,x,y) = y fails")?;
    ensure(holds_identity(&zv, &Identity::new(xyy, x, 2).map_err(e)?).map_err(e)?, "p(x,y,y) = x fails")?;

    let lcore = build_core(&VarietyPresentation::new(lattice2())).map_err(e)?;
    ensure(maltsev_term(&lcore).map_err(e)?.is_none(), "lattice2 has a Mal'tsev term")?;
    ensure(reg_maltsev(&lcore, DominionMode::CdComplete).map_err(e)?.is_yes(), "reg_maltsev(lattice2) not Yes")
}

fn criterion_4() -> Check {
    let lv = VarietyPresentation::new(lattice2());
    for (n, expected) in [(1, 1), (2, 4), (3, 18)] {
        let f = free_algebra(&lv, n).map_err(e)?;
        let brute = common::term_functions_by_depth(&lattice2(), n, 6);
        ensure(
            f.size() == expected && brute.len() == expected && f.elements().iter().all(|x| brute.contains(x)),
            format!("lattice2 F({n}): closure {} brute {}", f.size(), brute.len()),
        )?;
    }
    let zv = VarietyPresentation::new(z2xor());
    for n in 1..=4 {
        let f = free_algebra(&zv, n).map_err(e)?;
        let brute = common::term_functions_by_depth(&z2xor(), n, 6);
        ensure(
            f.size() == 1 << n && brute.len() == 1 << n && f.elements().iter().all(|x| brute.contains(x)),
            format!("z2xor F({n}): closure {} brute {}", f.size(), brute.len()),
        )?;
    }
    Ok(())
}

fn criterion_5() -> Check {
    for a in common::small_corpus() {
        let n = a.size();
        let all = all_congruences(&a, 100_000).map_err(e)?;
        for x in 0..n {
            for y in 0..n {
                let theta = congruence_generated(&a, &[(x, y)]).map_err(e)?;
                let least = all
                    .iter()
                    .filter(|c| c.related(x, y))
                    .fold(None, |acc: Option<ua_core::congruence::Congruence>, c| {
                        Some(match acc {
                            None => c.clone(),
                            Some(m) => m.meet(c),
                        })
                    })
                    .ok_or("no congruence contains the pair")?;
                ensure(theta == least, format!("{} pair ({x},{y})", a.name()))?;
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let v = VarietyPresentation::new(z2xor());
    let z = Arc::new(z2xor());
    let cp = coproduct(&v, &z, &z).map_err(e)?;
    ensure(cp.algebra.size() == 4, format!("coproduct size {}", cp.algebra.size()))?;
    for d in [Arc::new(z2xor()), Arc::new(z2xor().power(2).map_err(e)?)] {
        let from_z = hom_enumerate(&z, &d, None).map_err(e)?.homs;
        let from_cp = hom_enumerate(&cp.algebra, &d, None).map_err(e)?.homs;
        for f in &from_z {
            for g in &from_z {
                let phi = couniversal_factor(&cp, f, g).map_err(e)?;
                let factoring: Vec<_> = from_cp
                    .iter()
                    .filter(|h| {
                        (0..z.size())
                            .all(|x| h.apply(cp.iota1.apply(x)) == f.apply(x) && h.apply(cp.iota2.apply(x)) == g.apply(x))
                    })
                    .collect();
                ensure(
                    factoring.len() == 1 && factoring[0].map() == phi.map(),
                    format!("factorization not unique into {}", d.name()),
                )?;
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    let v = VarietyPresentation::new(z2xor());
    let z = z2xor();
    let zig = zigzag_step_relation(&v, &z, &z).map_err(e)?;
    let (free, theta) = coproduct_congruence(&v, &z, &z).map_err(e)?;
    ensure(free.elements() == zig.free.elements(), "free algebras differ")?;
    ensure(equivalence_closure(free.size(), &zig.pairs) == theta, "closure differs from table congruence")
}

fn run_property<S: Strategy>(cases: u32, strategy: S, mut test: impl FnMut(S::Value) -> Check) -> Check {
    let mut runner = TestRunner::new(Config {
        cases,
        ..Config::default()
    });
    for _ in 0..cases {
        let value = strategy.new_tree(&mut runner).map_err(e)?.current();
        test(value)?;
    }
    Ok(())
}

fn arities(a: &FiniteAlgebra) -> Vec<usize> {
    (0..a.sig().len()).map(|op| a.sig().arity(op)).collect()
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let l = lattice2();

    // substitution commutes with evaluation
    let terms = common::term_strategy(arities(&l), 3);
    let inner = proptest::collection::vec(common::term_strategy(arities(&l), 2), 3);
    run_property(200, (terms, inner), |(t, s)| {
        let composed = substitute(&t, &s).map_err(e)?;
        for point in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let args: Vec<usize> = s.iter().map(|si| eval_term(si, &l, &point)).collect::<Result<_, _>>().map_err(e)?;
            ensure(
                eval_term(&composed, &l, &point).map_err(e)? == eval_term(&t, &l, &args).map_err(e)?,
                "substitution law",
            )?;
        }
        Ok(())
    })?;

    // certificate self-checks
    for (a, mode) in [(n5(), DominionMode::CdComplete), (set2(), DominionMode::Refute { max_power: 1 })] {
        let core = build_core(&VarietyPresentation::new(a)).map_err(e)?;
        for verdict in [weakly_maltsev(&core, mode).map_err(e)?, reg_maltsev(&core, mode).map_err(e)?] {
            let cert = verdict.certificate().ok_or("expected a certificate")?;
            ensure(check_certificate(cert, &core).valid, "certificate rejected")?;
            let mut same = cert.clone();
            same.v = same.u.clone();
            ensure(!check_certificate(&same, &core).valid, "u = v accepted")?;
        }
    }

    // a bundle with N = 0 forces x = y
    let z = z2xor();
    let zv = VarietyPresentation::new(z.clone());
    let t2 = common::term_strategy(arities(&z), 2);
    let bundles = (
        common::term_strategy(arities(&z), 3),
        common::term_strategy(arities(&z), 6),
        proptest::collection::vec(t2, 4),
    );
    run_property(200, bundles, |(p, sigma, etas)| {
        let b = WitnessBundle {
            k: 0,
            m: 1,
            n: 0,
            f: vec![],
            g: vec![],
            p: vec![p],
            s: vec![],
            sigma: vec![sigma],
            eta1: vec![etas[0].clone()],
            eta2: vec![etas[1].clone()],
            eps1: vec![etas[2].clone()],
            eps2: vec![etas[3].clone()],
        };
        if verify_witness(&zv, &b, BundleTheorem::Wm).map_err(e)?.passed() {
            ensure(holds_identity(&zv, &Identity::trivializing()).map_err(e)?, "N = 0 bundle without x = y")?;
        }
        Ok(())
    })?;

    // refute(d) is monotone in d
    for a in [set2(), n5()] {
        let core = build_core(&VarietyPresentation::new(a)).map_err(e)?;
        let first = weakly_maltsev(&core, DominionMode::Refute { max_power: 1 }).map_err(e)?;
        ensure(first.is_no(), "refute(1) not No")?;
        for d in 2..=3 {
            ensure(
                weakly_maltsev(&core, DominionMode::Refute { max_power: d }).map_err(e)? == first,
                format!("refute({d}) changed the answer"),
            )?;
        }
    }
    let core = build_core(&VarietyPresentation::new(l.clone())).map_err(e)?;
    for d in 1..=3 {
        ensure(
            weakly_maltsev(&core, DominionMode::Refute { max_power: d }).map_err(e)? == Verdict::Unknown { bound: d },
            "lattice2 refuted",
        )?;
    }
    within(start, Duration::from_secs(60), "property suites")
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("1 distributive-lattice witness bundle", criterion_1),
        ("2 weakly Mal'tsev decisions", criterion_2),
        ("3 Mal'tsev term detection", criterion_3),
        ("4 free algebra sizes", criterion_4),
        ("5 congruence oracle", criterion_5),
        ("6 coproduct universal property", criterion_6),
        ("7 zigzag closure", criterion_7),
        ("8 property suites", criterion_8),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(()) => println!("PASS criterion {name} ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
