//! Oracles and generators shared by the property suites and the
//! acceptance run.
#![allow(dead_code)]

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use sdsproof_core::efficiency::lp::{
    certify_infeasible, certify_optimal, certify_unbounded, lp_solve, LinearProgram, LpOutcome, Relation,
};
use sdsproof_core::encode::{Atom, Clause, LinExpr, Rel, Var};
use sdsproof_core::lottery::{
    construct_violating_utility, expected_utility, rat, sample_consistent_utility, sd_geq, Lottery, Rational,
};
use sdsproof_core::prefs::{enumerate_weak_orders, Alternative};
use sdsproof_core::verify::{check_assignment, check_certificate, check_unsat, UnsatResult};

pub const VARS: usize = 6;

pub fn var(i: usize) -> Var {
    Var::new(1 + i / 3, Alternative::new(i % 3))
}

// sum coeffs[i] * x_i + constant (< or <=) 0
#[derive(Clone)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub strict: bool,
}

pub fn rows_of(atom: &Atom) -> Vec<Row> {
    let d = atom.diff();
    let mut coeffs = vec![Rational::zero(); VARS];
    for i in 0..VARS {
        if let Some(c) = d.coeff(var(i)) {
            coeffs[i] = c.clone();
        }
    }
    let row = Row { coeffs, constant: d.constant_term().clone(), strict: atom.rel == Rel::Lt };
    match atom.rel {
        Rel::Eq => {
            let neg = Row {
                coeffs: row.coeffs.iter().map(|c| -c).collect(),
                constant: -&row.constant,
                strict: false,
            };
            vec![row, neg]
        }
        _ => vec![row],
    }
}

pub fn fm_feasible(mut rows: Vec<Row>) -> bool {
    for j in 0..VARS {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.coeffs[j].is_positive() {
                pos.push(r);
            } else if r.coeffs[j].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                let (a, b) = (-&q.coeffs[j], p.coeffs[j].clone());
                rest.push(Row {
                    coeffs: (0..VARS).map(|i| &p.coeffs[i] * &a + &q.coeffs[i] * &b).collect(),
                    constant: &p.constant * &a + &q.constant * &b,
                    strict: p.strict || q.strict,
                });
            }
        }
        rows = rest;
    }
    rows.iter().all(|r| if r.strict { r.constant.is_negative() } else { !r.constant.is_positive() })
}

pub fn oracle_sat(clauses: &[Clause]) -> bool {
    fn go(clauses: &[Clause], rows: Vec<Row>) -> bool {
        let Some((first, rest)) = clauses.split_first() else { return true };
        first.cubes.iter().any(|cube| {
            let mut next = rows.clone();
            next.extend(cube.iter().flat_map(rows_of));
            fm_feasible(next.clone()) && go(rest, next)
        })
    }
    go(clauses, Vec::new())
}

pub fn grid() -> impl Strategy<Value = Rational> {
    (-4i64..=4).prop_map(|k| rat(k, 4))
}

pub fn expr() -> impl Strategy<Value = LinExpr> {
    (prop::collection::vec((0..VARS, -2i64..=2), 1..=2), grid()).prop_map(|(terms, c)| {
        let mut e = LinExpr::constant(c);
        for (v, k) in terms {
            e.add_term(var(v), rat(k, 1));
        }
        e
    })
}

pub fn atom() -> impl Strategy<Value = Atom> {
    (expr(), prop::sample::select(vec![Rel::Le, Rel::Lt, Rel::Eq]), grid())
        .prop_map(|(l, rel, c)| Atom::new(l, rel, LinExpr::constant(c)))
}

pub fn system() -> impl Strategy<Value = Vec<Clause>> {
    prop::collection::vec(prop::collection::vec(prop::collection::vec(atom(), 1..=2), 1..=3), 1..=8).prop_map(|cs| {
        cs.into_iter()
            .enumerate()
            .map(|(i, cubes)| Clause { name: format!("c{i}"), cubes })
            .collect()
    })
}

pub fn lottery(weights: Vec<u32>) -> Lottery {
    let total: u32 = weights.iter().sum::<u32>().max(1);
    let mut probs: Vec<Rational> = weights.iter().map(|&w| rat(w as i64, total as i64)).collect();
    if weights.iter().all(|&w| w == 0) {
        probs[0] = rat(1, 1);
    }
    Lottery::new(probs).unwrap()
}

pub fn weights() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(prop_oneof![Just(0u32), 0u32..6], 4)
}

pub fn program() -> impl Strategy<Value = LinearProgram> {
    let row = (prop::collection::vec(-3i64..=3, 3), 0usize..3, -4i64..=4);
    (prop::collection::vec(row, 1..=4), prop::collection::vec(-2i64..=2, 3), prop::collection::vec(any::<bool>(), 3))
        .prop_map(|(rows, obj, free)| {
            let mut lp = LinearProgram::non_negative(3);
            for (j, f) in free.into_iter().enumerate() {
                if f {
                    lp.lower[j] = None;
                }
            }
            lp.objective = obj.into_iter().enumerate().map(|(j, c)| (j, rat(c, 1))).collect();
            for (coeffs, rel, rhs) in rows {
                let relation = [Relation::Le, Relation::Ge, Relation::Eq][rel];
                let coeffs = coeffs.into_iter().enumerate().map(|(j, c)| (j, rat(c, 1))).collect();
                lp.add(coeffs, relation, rat(rhs, 1));
            }
            lp
        })
}


/// SD dominance agrees with every consistent utility: a sampled utility
/// never contradicts it, and when it fails an explicit utility does.
pub fn sd_utility_case(order_ix: usize, p: Vec<u32>, q: Vec<u32>, seed: u64) -> Result<(), TestCaseError> {
    let order = enumerate_weak_orders(4).unwrap()[order_ix].clone();
    let (p, q) = (lottery(p), lottery(q));
    let u = sample_consistent_utility(&order, seed);
    prop_assert!(u.is_consistent_with(&order));
    if sd_geq(&p, &q, &order) {
        prop_assert!(expected_utility(&u, &p) >= expected_utility(&u, &q));
        prop_assert!(construct_violating_utility(&p, &q, &order).is_none());
    } else {
        let v = construct_violating_utility(&p, &q, &order).expect("violating utility");
        prop_assert!(v.is_consistent_with(&order));
        prop_assert!(expected_utility(&v, &q) > expected_utility(&v, &p));
    }
    Ok(())
}

pub fn sd_utility_input() -> impl Strategy<Value = (usize, Vec<u32>, Vec<u32>, u64)> {
    (0usize..75, weights(), weights(), any::<u64>())
}

pub fn lp_case(lp: LinearProgram) -> Result<(), TestCaseError> {
    match lp_solve(&lp).unwrap() {
        LpOutcome::Optimal { point, dual, .. } => prop_assert!(certify_optimal(&lp, &point, &dual)),
        LpOutcome::Unbounded { point, ray } => prop_assert!(certify_unbounded(&lp, &point, &ray)),
        LpOutcome::Infeasible { farkas } => prop_assert!(certify_infeasible(&lp, &farkas)),
    }
    Ok(())
}

pub fn check_unsat_case(clauses: Vec<Clause>) -> Result<(), TestCaseError> {
    let expected = oracle_sat(&clauses);
    match check_unsat(&clauses) {
        UnsatResult::Sat(w) => {
            prop_assert!(expected);
            prop_assert!(check_assignment(&clauses, &w).unwrap());
        }
        UnsatResult::Unsat(cert) => {
            prop_assert!(!expected);
            prop_assert!(check_certificate(&clauses, &cert));
        }
        UnsatResult::Inconclusive { .. } => prop_assert!(false, "budget exhausted"),
    }
    Ok(())
}
