mod common;

use proptest::prelude::*;
use ua_core::algebra::{lattice2, m3, n5, set2, z2xor};
use ua_core::maltsev::{
    build_core, check_certificate, is_maltsev_term, maltsev_term, reg_maltsev, verify_witness, weakly_maltsev,
    BundleTheorem, DominionMode, Verdict, WitnessBundle,
};
use ua_core::term::{Identity, Term};
use ua_core::variety::holds_identity;
use ua_core::{FiniteAlgebra, VarietyPresentation};

use common::term_strategy;

fn variety(a: FiniteAlgebra) -> VarietyPresentation {
    VarietyPresentation::new(a)
}

fn n0_bundle(p: Term, sigma: Term, etas: [Term; 4]) -> WitnessBundle {
    let [eta1, eta2, eps1, eps2] = etas;
    WitnessBundle {
        k: 0,
        m: 1,
        n: 0,
        f: vec![],
        g: vec![],
        p: vec![p],
        s: vec![],
        sigma: vec![sigma],
        eta1: vec![eta1],
        eta2: vec![eta2],
        eps1: vec![eps1],
        eps2: vec![eps2],
    }
}

fn arities(a: &FiniteAlgebra) -> Vec<usize> {
    (0..a.sig().len()).map(|op| a.sig().arity(op)).collect()
}

fn etas(a: &FiniteAlgebra) -> impl Strategy<Value = [Term; 4]> {
    let t = term_strategy(arities(a), 2);
    (t.clone(), t.clone(), t.clone(), t).prop_map(|(a, b, c, d)| [a, b, c, d])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    // a bundle with N = 0 forces y = x
    #[test]
    fn n0_bundles_force_trivial_varieties_over_lattice2(
        p in term_strategy(arities(&lattice2()), 3),
        sigma in term_strategy(arities(&lattice2()), 6),
        e in etas(&lattice2()),
    ) {
        let v = variety(lattice2());
        let b = n0_bundle(p, sigma, e);
        if verify_witness(&v, &b, BundleTheorem::Wm).unwrap().passed() {
            prop_assert!(holds_identity(&v, &Identity::trivializing()).unwrap());
        }
    }

    #[test]
    fn n0_bundles_force_trivial_varieties_over_z2(
        p in term_strategy(arities(&z2xor()), 3),
        sigma in term_strategy(arities(&z2xor()), 6),
        e in etas(&z2xor()),
    ) {
        let v = variety(z2xor());
        let b = n0_bundle(p, sigma, e);
        if verify_witness(&v, &b, BundleTheorem::Wm).unwrap().passed() {
            prop_assert!(holds_identity(&v, &Identity::trivializing()).unwrap());
        }
    }
}

#[test]
fn n0_bundle_passes_in_the_trivial_variety() {
    let v = variety(FiniteAlgebra::trivial(lattice2().sig().clone()));
    let b = n0_bundle(Term::Var(0), Term::Var(0), [Term::Var(0), Term::Var(0), Term::Var(0), Term::Var(0)]);
    assert!(verify_witness(&v, &b, BundleTheorem::Wm).unwrap().passed());
    assert!(holds_identity(&v, &Identity::trivializing()).unwrap());
}

#[test]
fn refute_is_monotone_in_the_power() {
    for a in [set2(), n5(), m3()] {
        let core = build_core(&variety(a)).unwrap();
        let first = weakly_maltsev(&core, DominionMode::Refute { max_power: 1 }).unwrap();
        assert!(first.is_no());
        for d in 2..=3 {
            let later = weakly_maltsev(&core, DominionMode::Refute { max_power: d }).unwrap();
            assert_eq!(later, first, "power {d}");
        }
    }
    let core = build_core(&variety(lattice2())).unwrap();
    for d in 1..=3 {
        assert_eq!(
            weakly_maltsev(&core, DominionMode::Refute { max_power: d }).unwrap(),
            Verdict::Unknown { bound: d }
        );
    }
}

#[test]
fn every_negative_verdict_carries_a_valid_certificate() {
    let cases = [
        (n5(), DominionMode::CdComplete),
        (m3(), DominionMode::CdComplete),
        (set2(), DominionMode::Refute { max_power: 1 }),
        (set2(), DominionMode::Refute { max_power: 2 }),
    ];
    for (a, mode) in cases {
        let core = build_core(&variety(a)).unwrap();
        for verdict in [weakly_maltsev(&core, mode).unwrap(), reg_maltsev(&core, mode).unwrap()] {
            let cert = verdict.certificate().expect("negative verdict");
            let check = check_certificate(cert, &core);
            assert!(check.valid, "{check:?}");
        }
    }
}

#[test]
fn maltsev_implies_both_properties() {
    let core = build_core(&variety(z2xor())).unwrap();
    let p = maltsev_term(&core).unwrap().expect("z2 is Mal'tsev");
    assert!(is_maltsev_term(&core.variety, &p).unwrap());
    for mode in [DominionMode::CdComplete, DominionMode::Refute { max_power: 1 }] {
        assert!(weakly_maltsev(&core, mode).unwrap().is_yes());
        assert!(reg_maltsev(&core, mode).unwrap().is_yes());
    }
    let bundle = WitnessBundle::from_maltsev_term(&p);
    assert!(verify_witness(&core.variety, &bundle, BundleTheorem::Wm).unwrap().passed());
}

#[test]
fn distributive_lattice_bundle_certifies_both_theorems() {
    let v = variety(lattice2());
    let b = WitnessBundle::distributive_lattice(lattice2().sig()).unwrap();
    for theorem in [BundleTheorem::Wm, BundleTheorem::Reg] {
        assert!(verify_witness(&v, &b, theorem).unwrap().passed());
    }
    let core = build_core(&v).unwrap();
    assert!(weakly_maltsev(&core, DominionMode::CdComplete).unwrap().is_yes());
    assert!(reg_maltsev(&core, DominionMode::CdComplete).unwrap().is_yes());
}

#[test]
fn distributive_lattice_bundle_fails_on_the_pentagon() {
    let v = variety(n5());
    let b = WitnessBundle::distributive_lattice(n5().sig()).unwrap();
    assert!(!verify_witness(&v, &b, BundleTheorem::Wm).unwrap().passed());
}
