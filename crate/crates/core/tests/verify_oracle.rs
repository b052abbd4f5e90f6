//! check_unsat and entails against an independent Fourier-Motzkin oracle.

mod support;

use proptest::prelude::*;
use sdsproof_core::verify::entails;
use support::{atom, fm_feasible, rows_of, system, Row};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn check_unsat_agrees_with_oracle(clauses in system()) {
        support::check_unsat_case(clauses)?;
    }

    #[test]
    fn entailment_is_monotone(base in prop::collection::vec(atom(), 0..4), more in atom(), claim in atom()) {
        if entails(&base, &claim) {
            let mut bigger = base.clone();
            bigger.push(more);
            prop_assert!(entails(&bigger, &claim));
        }
    }

    #[test]
    fn entailment_matches_oracle(base in prop::collection::vec(atom(), 0..4), claim in atom()) {
        let expected = claim.negated().into_iter().all(|neg| {
            let mut rows: Vec<Row> = base.iter().flat_map(rows_of).collect();
            rows.extend(rows_of(&neg));
            !fm_feasible(rows)
        });
        prop_assert_eq!(entails(&base, &claim), expected);
    }
}
