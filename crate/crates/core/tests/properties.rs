mod common;

use proptest::prelude::*;
use ua_core::algebra::{lattice2, z2xor};
use ua_core::congruence::{all_congruences, congruence_generated};
use ua_core::term::{decode_assignment, eval_term, parse_term, render_term, substitute, term_function, Term};
use ua_core::FiniteAlgebra;

use common::{brute_congruences, small_corpus, term_strategy};

fn arities(a: &FiniteAlgebra) -> Vec<usize> {
    (0..a.sig().len()).map(|op| a.sig().arity(op)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // t[s_1..s_k] evaluated at a equals t evaluated at (s_1(a), ..., s_k(a))
    #[test]
    fn substitution_commutes_with_evaluation(
        t in term_strategy(arities(&lattice2()), 3),
        s in proptest::collection::vec(term_strategy(arities(&lattice2()), 2), 3),
        point in proptest::collection::vec(0usize..2, 2),
    ) {
        let a = lattice2();
        let composed = substitute(&t, &s).unwrap();
        let inner: Vec<usize> = s.iter().map(|si| eval_term(si, &a, &point).unwrap()).collect();
        prop_assert_eq!(eval_term(&composed, &a, &point).unwrap(), eval_term(&t, &a, &inner).unwrap());
    }

    #[test]
    fn substitution_law_over_z2(
        t in term_strategy(arities(&z2xor()), 2),
        s in proptest::collection::vec(term_strategy(arities(&z2xor()), 3), 2),
    ) {
        let a = z2xor();
        let composed = term_function(&substitute(&t, &s).unwrap(), &a, 3).unwrap();
        for (i, &value) in composed.iter().enumerate() {
            let point = decode_assignment(i, 2, 3);
            let inner: Vec<usize> = s.iter().map(|si| eval_term(si, &a, &point).unwrap()).collect();
            prop_assert_eq!(value, eval_term(&t, &a, &inner).unwrap());
        }
    }

    #[test]
    fn parse_render_round_trip(t in term_strategy(arities(&z2xor()), 4)) {
        let sig = z2xor().sig().clone();
        let text = render_term(&t, &sig);
        prop_assert_eq!(parse_term(&text, &sig).unwrap(), t);
    }

    #[test]
    fn substituting_projections_is_identity(t in term_strategy(arities(&lattice2()), 3)) {
        let vars: Vec<Term> = (0..3).map(Term::Var).collect();
        prop_assert_eq!(substitute(&t, &vars).unwrap(), t);
    }

    #[test]
    fn generated_congruence_is_least(
        which in 0usize..7,
        raw in proptest::collection::vec((0usize..16, 0usize..16), 0..3),
    ) {
        let corpus = small_corpus();
        let a = &corpus[which % corpus.len()];
        let n = a.size();
        let pairs: Vec<(usize, usize)> = raw.iter().map(|&(x, y)| (x % n, y % n)).collect();
        let theta = congruence_generated(a, &pairs).unwrap();
        let containing: Vec<Vec<usize>> = brute_congruences(a)
            .into_iter()
            .filter(|p| pairs.iter().all(|&(x, y)| p[x] == p[y]))
            .collect();
        prop_assert!(containing.iter().any(|p| p.as_slice() == theta.blocks()));
        for p in &containing {
            prop_assert!((0..n).all(|x| (0..n).all(|y| !theta.related(x, y) || p[x] == p[y])));
        }
    }
}

#[test]
fn all_congruences_matches_partition_filter() {
    for a in small_corpus() {
        let mut ours: Vec<Vec<usize>> = all_congruences(&a, 10_000)
            .unwrap()
            .into_iter()
            .map(|c| c.blocks().to_vec())
            .collect();
        let mut brute = brute_congruences(&a);
        ours.sort();
        brute.sort();
        assert_eq!(ours, brute, "{}", a.name());
    }
}

#[test]
fn parse_errors_carry_offsets() {
    let sig = lattice2().sig().clone();
    assert!(matches!(
        parse_term("(meet $0 (frob $1))", &sig),
        Err(ua_core::Error::UnknownOperation { offset: 10, .. })
    ));
    assert!(parse_term("(meet $0)", &sig).is_err());
    assert!(parse_term("(meet $0 $1) junk", &sig).is_err());
}
