//! SD-efficiency: exact dominance tests for lotteries, Pareto-dominated
//! alternatives, and inclusion-minimal inefficient supports.

pub mod lp;

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::lottery::{Lottery, Rational};
use crate::prefs::{AltSet, Alternative, PrefsError, Profile};
use lp::{lp_solve, LinearProgram, LpOutcome, Relation};

/// Result of an efficiency test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Efficiency {
    Efficient,
    /// A lottery every agent weakly SD-prefers and some agent strictly does.
    DominatedBy(Lottery),
}

impl Efficiency {
    pub fn is_efficient(&self) -> bool {
        matches!(self, Efficiency::Efficient)
    }
}

/// The dominance LP for `p`: variables `q_x >= 0` summing to one, each
/// upper contour set of each agent gets at least its mass under `p`, and the
/// objective is the total upper-contour mass of `q` over all agents and
/// alternatives. `p` is efficient iff the optimum equals that total for `p`.
pub fn dominance_lp(profile: &Profile, p: &Lottery) -> Result<LinearProgram, PrefsError> {
    let m = profile.num_alternatives();
    crate::prefs::same_m(m, p.num_alternatives())?;
    let mut lp = LinearProgram::non_negative(m);
    let mut weight = alloc::vec![Rational::zero(); m];
    for order in profile.orders() {
        for u in order.prefixes() {
            if u.len() == m {
                continue;
            }
            let coeffs = u.iter().map(|y| (y.index(), Rational::one())).collect();
            lp.add(coeffs, Relation::Ge, p.mass(u));
        }
        for x in order.alternatives() {
            for y in order.upper_contour(x).iter() {
                weight[y.index()] += Rational::one();
            }
        }
    }
    lp.add((0..m).map(|x| (x, Rational::one())).collect(), Relation::Eq, Rational::one());
    lp.objective = weight.into_iter().enumerate().filter(|(_, w)| !w.is_zero()).collect();
    Ok(lp)
}

/// Whether `p` is SD-efficient at `profile`, with a dominating lottery when
/// it is not.
pub fn is_efficient_lottery(profile: &Profile, p: &Lottery) -> Result<Efficiency, PrefsError> {
    let lp = dominance_lp(profile, p)?;
    let baseline = lp.objective_at(p.probs());
    match lp_solve(&lp).expect("dominance program is well formed") {
        LpOutcome::Optimal { value, point, .. } => {
            if value == baseline {
                Ok(Efficiency::Efficient)
            } else {
                let q = Lottery::new(point).expect("feasible points are lotteries");
                Ok(Efficiency::DominatedBy(q))
            }
        }
        // p itself is feasible and the simplex bounds the objective
        other => unreachable!("dominance program returned {:?}", other.status()),
    }
}

/// Alternatives `x` for which some `y` is weakly preferred by every agent
/// and strictly by at least one.
pub fn pareto_dominated_alternatives(profile: &Profile) -> AltSet {
    let m = profile.num_alternatives();
    let alts = || (0..m).map(Alternative::new);
    alts()
        .filter(|&x| {
            alts().any(|y| {
                let orders = profile.orders();
                orders.iter().all(|o| o.weakly_prefers(y, x)) && orders.iter().any(|o| o.strictly_prefers(y, x))
            })
        })
        .collect()
}

/// Inclusion-minimal supports whose uniform lottery is SD-inefficient,
/// ordered by size and then by bit pattern. Efficiency depends only on the
/// support, so the uniform lottery stands in for every lottery on it.
pub fn minimal_inefficient_supports(profile: &Profile) -> Vec<AltSet> {
    let m = profile.num_alternatives();
    let mut supports: Vec<AltSet> = (1..(1u16 << m)).map(|b| AltSet::from_bits(b as u8)).collect();
    supports.sort_by_key(|s| (s.len(), s.bits()));
    let mut found: Vec<AltSet> = Vec::new();
    for s in supports {
        if found.iter().any(|f| f.is_subset(s)) {
            continue;
        }
        let uniform = Lottery::uniform_on(m, s);
        if !is_efficient_lottery(profile, &uniform).expect("dimensions agree").is_efficient() {
            found.push(s);
        }
    }
    found
}
