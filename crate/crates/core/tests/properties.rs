mod common;

use common::props;
use ologism::syll::prove;
use ologism::{Form, Proposition, Statement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_form() -> impl Strategy<Value = Form> {
    (0..4usize).prop_map(|i| Form::ALL[i])
}

fn arb_statement(terms: &'static [&'static str]) -> impl Strategy<Value = Statement> {
    (arb_form(), 0..terms.len(), 0..terms.len()).prop_map(move |(f, s, p)| Statement::new(f, terms[s], terms[p]))
}

fn ok(r: props::Check) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closure_agrees_with_naive_fixpoint(o in common::arb_is_only(5, 8)) {
        ok(props::closure_matches_naive(&o))?;
    }

    #[test]
    fn closure_is_idempotent(o in common::arb_is_only(5, 8)) {
        ok(props::closure_idempotent(&o))?;
    }

    #[test]
    fn closure_is_monotone(o in common::arb_is_only(4, 6), f in arb_form(), s in 0..4usize, p in 0..4usize) {
        let k = o.types.len();
        let extra = Proposition::new(f, format!("T{}", s % k), format!("T{}", p % k));
        ok(props::closure_monotone(&o, &extra))?;
    }

    #[test]
    fn reversal_is_an_involution(s in arb_statement(&["S", "M", "P"])) {
        ok(props::reversal_involution(&s))?;
    }

    #[test]
    fn successful_proofs_conserve_bullets(
        premisses in proptest::collection::vec(arb_statement(&["S", "M", "P"]), 1..=3),
        conclusion in arb_statement(&["S", "M", "P"]),
    ) {
        if let Ok(tree) = prove(&premisses, &conclusion) {
            ok(props::bullets_conserved(&tree))?;
            prop_assert_eq!(tree.conclusion(), Some(conclusion.proposition()));
        }
    }

    #[test]
    fn proving_ignores_e_and_i_orientation(
        premisses in proptest::collection::vec(arb_statement(&["S", "M", "P"]), 2..=2),
        conclusion in arb_statement(&["S", "M", "P"]),
    ) {
        let flipped: Vec<Statement> = premisses
            .iter()
            .map(|s| if s.form.is_symmetric() { s.swapped() } else { s.clone() })
            .collect();
        prop_assert_eq!(prove(&premisses, &conclusion).is_ok(), prove(&flipped, &conclusion).is_ok());
    }

    #[test]
    fn generated_documents_round_trip(seed in any::<u64>()) {
        let o = props::random_document(&mut ChaCha8Rng::seed_from_u64(seed));
        ok(props::round_trips(&o))?;
    }

    #[test]
    fn congruence_laws_hold(seed in any::<u64>()) {
        let o = props::random_document(&mut ChaCha8Rng::seed_from_u64(seed));
        ok(props::congruence_laws(&o, 3))?;
    }

    #[test]
    fn parser_never_panics_on_token_soup(seed in any::<u64>()) {
        let valid = std::fs::read_to_string(common::sample_path("custodian.olgm")).unwrap();
        let input = props::fuzz_input(&mut ChaCha8Rng::seed_from_u64(seed), &valid);
        ok(props::parser_survives(&input))?;
    }

    #[test]
    fn parser_never_panics_on_arbitrary_text(input in "\\PC{0,200}") {
        ok(props::parser_survives(&input))?;
    }
}
