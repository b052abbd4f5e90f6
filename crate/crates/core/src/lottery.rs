//! Lotteries over alternatives with exact rational probabilities,
//! stochastic dominance, random serial dictatorship, and utility functions.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::prefs::{AltSet, Alternative, ParseError, Profile, WeakOrder};

pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LotteryError {
    Negative(Alternative),
    SumNotOne(Rational),
    Mismatch { expected: usize, found: usize },
}

impl core::error::Error for LotteryError {}

impl fmt::Display for LotteryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LotteryError::Negative(x) => write!(f, "negative probability for {x}"),
            LotteryError::SumNotOne(s) => write!(f, "probabilities sum to {s}, not 1"),
            LotteryError::Mismatch { expected, found } => {
                write!(f, "expected {expected} alternatives, found {found}")
            }
        }
    }
}

/// Probability distribution over the alternatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lottery {
    probs: Vec<Rational>,
}

impl Lottery {
    pub fn new(probs: Vec<Rational>) -> Result<Self, LotteryError> {
        for (x, p) in probs.iter().enumerate() {
            if p.is_negative() {
                return Err(LotteryError::Negative(Alternative::new(x)));
            }
        }
        let sum: Rational = probs.iter().sum();
        if !sum.is_one() {
            return Err(LotteryError::SumNotOne(sum));
        }
        Ok(Lottery { probs })
    }

    pub fn degenerate(m: usize, x: Alternative) -> Self {
        let mut probs = vec![Rational::zero(); m];
        probs[x.index()] = Rational::one();
        Lottery { probs }
    }

    /// Uniform lottery over a non-empty support.
    pub fn uniform_on(m: usize, support: AltSet) -> Self {
        assert!(!support.is_empty(), "uniform lottery needs a non-empty support");
        let share = rat(1, support.len() as i64);
        let probs = (0..m)
            .map(|x| if support.contains(Alternative::new(x)) { share.clone() } else { Rational::zero() })
            .collect();
        Lottery { probs }
    }

    pub fn num_alternatives(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, x: Alternative) -> &Rational {
        &self.probs[x.index()]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn support(&self) -> AltSet {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_positive())
            .map(|(x, _)| Alternative::new(x))
            .collect()
    }

    /// Total probability of a set of alternatives.
    pub fn mass(&self, set: AltSet) -> Rational {
        set.iter().map(|x| &self.probs[x.index()]).sum()
    }

    /// Parses `7/24*a + 7/24*b + 5/24*c + 5/24*d`; a bare letter means
    /// coefficient one and omitted alternatives get zero. `m` fixes the
    /// alternative count.
    pub fn parse(text: &str, m: usize) -> Result<Lottery, ParseError> {
        let mut probs = vec![Rational::zero(); m];
        let mut offset = 0;
        for term in text.split('+') {
            let here = offset + term.len() - term.trim_start().len();
            offset += term.len() + 1;
            let term = term.trim();
            let (coef, alt) = match term.split_once('*') {
                Some((c, a)) => (parse_rational(c.trim()).ok_or_else(|| ParseError::new(here, "bad coefficient"))?, a.trim()),
                None => (Rational::one(), term),
            };
            let mut chars = alt.chars();
            let x = match (chars.next().and_then(Alternative::from_letter), chars.next()) {
                (Some(x), None) if x.index() < m => x,
                _ => return Err(ParseError::new(here, alloc::format!("bad alternative '{alt}'"))),
            };
            probs[x.index()] += coef;
        }
        Lottery::new(probs).map_err(|e| ParseError::new(0, alloc::format!("{e}")))
    }
}

impl fmt::Display for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, p) in self.probs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{p}*{}", Alternative::new(x))?;
        }
        Ok(())
    }
}

/// Parses an integer or `num/den` fraction, optionally negative.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// `p` stochastically dominates `q` for `order`: every upper contour set
/// receives at least as much probability under `p`.
pub fn sd_geq(p: &Lottery, q: &Lottery, order: &WeakOrder) -> bool {
    order.prefixes().into_iter().all(|u| p.mass(u) >= q.mass(u))
}

/// Strict stochastic dominance.
pub fn sd_gt(p: &Lottery, q: &Lottery, order: &WeakOrder) -> bool {
    sd_geq(p, q, order) && !sd_geq(q, p, order)
}

/// Random serial dictatorship: average over all agent orderings of the
/// uniform lottery on the set left after each agent in turn keeps only its
/// most preferred surviving alternatives.
pub fn rsd(profile: &Profile) -> Lottery {
    let m = profile.num_alternatives();
    let n = profile.num_agents();
    assert!(n < 16, "rsd enumerates agent orderings; keep profiles small");
    let mut memo = BTreeMap::new();
    let mut weights = vec![Rational::zero(); m];
    let dist = rsd_rec(profile, (1u32 << n) - 1, AltSet::full(m), &mut memo);
    for (set, w) in dist {
        let share = w / Rational::from_integer(BigInt::from(set.len()));
        for x in set.iter() {
            weights[x.index()] += share.clone();
        }
    }
    Lottery { probs: weights }
}

// distribution over final surviving sets, given the agents still to act
fn rsd_rec(
    profile: &Profile,
    remaining: u32,
    surviving: AltSet,
    memo: &mut BTreeMap<(u32, AltSet), Vec<(AltSet, Rational)>>,
) -> Vec<(AltSet, Rational)> {
    if remaining == 0 {
        return vec![(surviving, Rational::one())];
    }
    if let Some(hit) = memo.get(&(remaining, surviving)) {
        return hit.clone();
    }
    let k = remaining.count_ones() as i64;
    let mut acc: BTreeMap<AltSet, Rational> = BTreeMap::new();
    for agent in 0..profile.num_agents() {
        if remaining & (1 << agent) == 0 {
            continue;
        }
        let next = profile.order(agent).maximal_in(surviving);
        for (set, w) in rsd_rec(profile, remaining & !(1 << agent), next, memo) {
            *acc.entry(set).or_insert_with(Rational::zero) += w / int(k);
        }
    }
    let out: Vec<_> = acc.into_iter().collect();
    memo.insert((remaining, surviving), out.clone());
    out
}

/// Utility value per alternative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityVector {
    pub values: Vec<Rational>,
}

impl UtilityVector {
    /// `u(x) >= u(y)` exactly when `x` is weakly preferred to `y`.
    pub fn is_consistent_with(&self, order: &WeakOrder) -> bool {
        let m = order.num_alternatives();
        self.values.len() == m
            && (0..m).all(|x| {
                (0..m).all(|y| {
                    let (ax, ay) = (Alternative::new(x), Alternative::new(y));
                    (self.values[x] >= self.values[y]) == order.weakly_prefers(ax, ay)
                })
            })
    }
}

pub fn expected_utility(u: &UtilityVector, p: &Lottery) -> Rational {
    assert_eq!(u.values.len(), p.num_alternatives(), "dimension mismatch");
    u.values.iter().zip(p.probs()).map(|(a, b)| a * b).sum()
}

/// Random utility function consistent with `order`, deterministic in
/// `seed`. Values lie in `(0, 1]`; the top class gets 1.
pub fn sample_consistent_utility(order: &WeakOrder, seed: u64) -> UtilityVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = order.num_classes();
    // positive gaps between consecutive classes, worst class first
    let gaps: Vec<u64> = (0..k).map(|_| 1 + (rng.next_u32() % 1000) as u64).collect();
    let total: u64 = gaps.iter().sum();
    let mut level = vec![0u64; k];
    let mut acc = 0;
    for c in (0..k).rev() {
        acc += gaps[k - 1 - c];
        level[c] = acc;
    }
    let values = order
        .alternatives()
        .map(|x| rat(level[order.rank(x)] as i64, total as i64))
        .collect();
    UtilityVector { values }
}

/// Utility function consistent with `order` under which `q` has strictly
/// higher expected utility than `p`, or `None` when `p` stochastically
/// dominates `q`. The witness is concentrated near 1 on a violated upper
/// contour set and near 0 below it.
pub fn construct_violating_utility(p: &Lottery, q: &Lottery, order: &WeakOrder) -> Option<UtilityVector> {
    let classes = order.class_sets();
    let prefixes = order.prefixes();
    let (cut, eps) = prefixes
        .iter()
        .enumerate()
        .map(|(c, &u)| (c, q.mass(u) - p.mass(u)))
        .find(|(_, gap)| gap.is_positive())?;
    let k = classes.len();
    let half = &eps / int(2);
    let quarter = &eps / int(4);
    // classes 0..=cut spread over [1 - eps/2, 1], the rest over [0, eps/4]
    let class_value = |c: usize| -> Rational {
        if c <= cut {
            if cut == 0 {
                Rational::one()
            } else {
                Rational::one() - &half * int(c as i64) / int(cut as i64)
            }
        } else {
            let below = k - cut - 1;
            if below == 1 {
                Rational::zero()
            } else {
                &quarter * int((k - 1 - c) as i64) / int(below as i64 - 1)
            }
        }
    };
    let values = order.alternatives().map(|x| class_value(order.rank(x))).collect();
    Some(UtilityVector { values })
}

impl fmt::Display for UtilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .map(|(x, v)| alloc::format!("{}={v}", Alternative::new(x)))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefs::parse_weak_order;

    fn lot(s: &str, m: usize) -> Lottery {
        Lottery::parse(s, m).unwrap()
    }

    #[test]
    fn dominance_examples() {
        let r = parse_weak_order("a,b,c").unwrap();
        let p = lot("2/3*a + 1/3*c", 3);
        let q = lot("1/3*a + 1/3*b + 1/3*c", 3);
        assert!(sd_gt(&p, &q, &r));
        assert!(sd_geq(&p, &p, &r));
        let b = lot("b", 3);
        assert!(!sd_geq(&p, &b, &r) && !sd_geq(&b, &p, &r));
    }

    #[test]
    fn rsd_examples() {
        let ex = Profile::parse(["{a,c},{b,d}", "{b,d},{a,c}", "{a,d},b,c", "{b,c},a,d"]).unwrap();
        assert_eq!(rsd(&ex), lot("7/24*a + 7/24*b + 5/24*c + 5/24*d", 4));
        let chain = Profile::new(vec![WeakOrder::chain(4); 4]).unwrap();
        assert_eq!(rsd(&chain), Lottery::degenerate(4, Alternative::new(0)));
        let flat = Profile::new(vec![WeakOrder::indifferent(4); 4]).unwrap();
        assert_eq!(rsd(&flat), Lottery::uniform_on(4, AltSet::full(4)));
    }

    #[test]
    fn expected_utility_examples() {
        let u = UtilityVector { values: vec![int(1), int(0), int(0)] };
        assert_eq!(expected_utility(&u, &lot("2/3*a + 1/3*c", 3)), rat(2, 3));
        assert_eq!(expected_utility(&u, &lot("a", 3)), int(1));
        let v = UtilityVector { values: vec![rat(1, 2), rat(1, 4), int(0)] };
        assert_eq!(expected_utility(&v, &Lottery::uniform_on(3, AltSet::full(3))), rat(1, 4));
    }

    #[test]
    fn sampled_utilities_are_consistent() {
        let flat = WeakOrder::indifferent(4);
        let u = sample_consistent_utility(&flat, 7);
        assert!(u.values.iter().all(|v| *v == u.values[0]));
        let chain = WeakOrder::chain(4);
        let u = sample_consistent_utility(&chain, 7);
        assert!(u.values.windows(2).all(|w| w[0] > w[1]));
        for o in crate::prefs::enumerate_weak_orders(4).unwrap() {
            for seed in 0..5 {
                let u = sample_consistent_utility(&o, seed);
                assert!(u.is_consistent_with(&o));
                assert!(u.values.iter().all(|v| !v.is_negative() && *v <= int(1)));
            }
        }
        assert_eq!(sample_consistent_utility(&chain, 3), sample_consistent_utility(&chain, 3));
    }

    #[test]
    fn violating_utility_examples() {
        let r = parse_weak_order("a,b,c").unwrap();
        let p = lot("b", 3);
        let q = lot("2/3*a + 1/3*c", 3);
        let u = construct_violating_utility(&p, &q, &r).unwrap();
        assert!(u.is_consistent_with(&r));
        // violated prefix {a}: eps = 2/3, so u = (1, eps/4, 0)
        assert_eq!(u.values, vec![int(1), rat(1, 6), int(0)]);
        assert!(expected_utility(&u, &q) > expected_utility(&u, &p));
        assert!(construct_violating_utility(&q, &q, &r).is_none());
        let dominated = lot("1/3*a + 1/3*b + 1/3*c", 3);
        assert!(construct_violating_utility(&q, &dominated, &r).is_none());
    }

    #[test]
    fn violating_utility_with_full_mass_gap() {
        let r = parse_weak_order("a,b").unwrap();
        let u = construct_violating_utility(&lot("b", 2), &lot("a", 2), &r).unwrap();
        assert!(u.is_consistent_with(&r));
    }

    #[test]
    fn lottery_text_forms() {
        let l = lot("7/24*a + 7/24*b + 5/24*c + 5/24*d", 4);
        assert_eq!(format!("{l}"), "7/24*a + 7/24*b + 5/24*c + 5/24*d");
        assert_eq!(lot("1*a", 2), lot("a", 2));
        assert!(Lottery::parse("1/2*a", 2).is_err());
        assert!(Lottery::parse("1/2*a + 1/2*z", 2).is_err());
        assert!(Lottery::new(vec![rat(3, 2), rat(-1, 2)]).is_err());
    }
}
