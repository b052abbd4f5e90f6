//! Linear constraints over lottery variables `p[R][x]`: the lottery,
//! orbit, efficiency and strategyproofness families, and SMT-LIB output.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::canon::Canonicalizer;
use crate::domain::{DomainGraph, ManipulationEdge};
use crate::efficiency::minimal_inefficient_supports;
use crate::lottery::{Lottery, Rational};
use crate::prefs::{AltSet, Alternative, Profile};

/// Probability that profile `profile` assigns to alternative `alt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub profile: u32,
    pub alt: u8,
}

impl Var {
    pub fn new(profile: usize, alt: Alternative) -> Self {
        Var { profile: profile as u32, alt: alt.index() as u8 }
    }

    pub fn alternative(self) -> Alternative {
        Alternative::new(self.alt as usize)
    }

    /// Symbol used in SMT-LIB output.
    pub fn smt_name(self) -> String {
        alloc::format!("p_R{}_{}", self.profile, self.alternative())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p[R{}][{}]", self.profile, self.alternative())
    }
}

/// `sum coeff * var + constant`, with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinExpr {
    terms: BTreeMap<Var, Rational>,
    constant: Rational,
}

impl LinExpr {
    pub fn zero() -> Self {
        LinExpr::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinExpr { terms: BTreeMap::new(), constant: c }
    }

    pub fn var(v: Var) -> Self {
        let mut e = LinExpr::zero();
        e.add_term(v, Rational::one());
        e
    }

    /// Sum of the variables of `profile` over `set`.
    pub fn mass(profile: usize, set: AltSet) -> Self {
        let mut e = LinExpr::zero();
        for x in set.iter() {
            e.add_term(Var::new(profile, x), Rational::one());
        }
        e
    }

    pub fn add_term(&mut self, v: Var, c: Rational) {
        let entry = self.terms.entry(v).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn coeff(&self, v: Var) -> Option<&Rational> {
        self.terms.get(&v)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Var, &Rational)> {
        self.terms.iter().map(|(v, c)| (*v, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.terms.keys().copied()
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.add_term(*v, -c);
        }
        out.constant -= &other.constant;
        out
    }

    pub fn scaled(&self, k: &Rational) -> LinExpr {
        if k.is_zero() {
            return LinExpr::zero();
        }
        LinExpr {
            terms: self.terms.iter().map(|(v, c)| (*v, c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Rational, Var> {
        let mut total = self.constant.clone();
        for (v, c) in &self.terms {
            total += c * assignment.get(v).ok_or(*v)?;
        }
        Ok(total)
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            let (neg, mag) = (c.is_negative(), c.abs());
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant.is_positive() {
            write!(f, " + {}", self.constant)
        } else if self.constant.is_negative() {
            write!(f, " - {}", -&self.constant)
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Le,
    Eq,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
        }
    }
}

/// `lhs rel rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub lhs: LinExpr,
    pub rel: Rel,
    pub rhs: LinExpr,
}

impl Atom {
    pub fn new(lhs: LinExpr, rel: Rel, rhs: LinExpr) -> Self {
        Atom { lhs, rel, rhs }
    }

    /// `lhs - rhs`, so the atom reads `diff() rel 0`.
    pub fn diff(&self) -> LinExpr {
        self.lhs.sub(&self.rhs)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.lhs.vars().chain(self.rhs.vars()).collect()
    }

    pub fn holds(&self, assignment: &BTreeMap<Var, Rational>) -> Result<bool, Var> {
        Ok(self.rel.holds(&self.lhs.eval(assignment)?, &self.rhs.eval(assignment)?))
    }

    /// The negation as a disjunction of atoms.
    pub fn negated(&self) -> Vec<Atom> {
        let (l, r) = (self.lhs.clone(), self.rhs.clone());
        match self.rel {
            Rel::Lt => vec![Atom::new(r, Rel::Le, l)],
            Rel::Le => vec![Atom::new(r, Rel::Lt, l)],
            Rel::Eq => vec![Atom::new(l.clone(), Rel::Lt, r.clone()), Atom::new(r, Rel::Lt, l)],
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel.symbol(), self.rhs)
    }
}

/// Disjunction of cubes; each cube is a conjunction of atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub name: String,
    pub cubes: Vec<Vec<Atom>>,
}

impl Clause {
    pub fn unit(name: impl Into<String>, atom: Atom) -> Self {
        Clause { name: name.into(), cubes: vec![vec![atom]] }
    }

    pub fn holds(&self, assignment: &BTreeMap<Var, Rational>) -> Result<bool, Var> {
        for cube in &self.cubes {
            let mut all = true;
            for a in cube {
                if !a.holds(assignment)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.cubes.iter().flatten().flat_map(|a| a.vars()).collect()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name)?;
        for (i, cube) in self.cubes.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            for (j, a) in cube.iter().enumerate() {
                if j > 0 {
                    f.write_str(" & ")?;
                }
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

/// Clauses over the lottery variables of a set of profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub m: usize,
    pub n: usize,
    pub description: String,
    /// Profile id and a human-readable key, listed in the output header.
    pub profiles: Vec<(usize, String)>,
    pub clauses: Vec<Clause>,
}

impl ConstraintSystem {
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut vars: BTreeSet<Var> = self
            .profiles
            .iter()
            .flat_map(|(id, _)| (0..self.m).map(move |x| Var::new(*id, Alternative::new(x))))
            .collect();
        for c in &self.clauses {
            vars.extend(c.vars());
        }
        vars
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    /// Names that occur more than once.
    pub fn duplicate_names(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut dups = BTreeSet::new();
        for c in &self.clauses {
            if !seen.insert(c.name.as_str()) {
                dups.insert(c.name.clone());
            }
        }
        dups.into_iter().collect()
    }
}

/// Per profile: the probabilities sum to one and are non-negative.
pub fn build_lottery_constraints(domain: &DomainGraph) -> Vec<Clause> {
    let mut out = Vec::new();
    for node in &domain.nodes {
        let all = AltSet::full(domain.m);
        out.push(Clause::unit(
            alloc::format!("lot_R{}_sum", node.id),
            Atom::new(LinExpr::mass(node.id, all), Rel::Eq, LinExpr::constant(Rational::one())),
        ));
        for x in all.iter() {
            out.push(Clause::unit(
                alloc::format!("lot_R{}_{}", node.id, x),
                Atom::new(LinExpr::zero(), Rel::Le, LinExpr::var(Var::new(node.id, x))),
            ));
        }
    }
    out
}

/// Per profile and orbit of its automorphism group: consecutive members
/// of the orbit get equal probability.
pub fn build_orbit_constraints(canon: &Canonicalizer, domain: &DomainGraph) -> Vec<Clause> {
    let mut out = Vec::new();
    for node in &domain.nodes {
        for block in canon.orbits(&node.anon).blocks {
            let members: Vec<Alternative> = block.iter().collect();
            for w in members.windows(2) {
                out.push(Clause::unit(
                    alloc::format!("orb_R{}_{}_{}", node.id, w[0], w[1]),
                    Atom::new(
                        LinExpr::var(Var::new(node.id, w[0])),
                        Rel::Eq,
                        LinExpr::var(Var::new(node.id, w[1])),
                    ),
                ));
            }
        }
    }
    out
}

/// Per profile and minimal inefficient support: some alternative of the
/// support gets probability zero.
pub fn build_efficiency_constraints(domain: &DomainGraph) -> Vec<Clause> {
    let mut out = Vec::new();
    for node in &domain.nodes {
        for support in minimal_inefficient_supports(&node.profile) {
            let letters: String = support.iter().map(|x| x.letter()).collect();
            let cubes = support
                .iter()
                .map(|x| vec![Atom::new(LinExpr::var(Var::new(node.id, x)), Rel::Eq, LinExpr::zero())])
                .collect();
            out.push(Clause { name: alloc::format!("eff_R{}_{}", node.id, letters), cubes });
        }
    }
    out
}

/// The strategyproofness clause of one edge: the lottery of the
/// manipulated profile, read through the edge's map, does not strictly
/// SD-dominate the source lottery under the truthful order. `None` when
/// the truthful order is complete indifference, where the condition is
/// vacuous.
pub fn sp_clause(edge: &ManipulationEdge, m: usize) -> Option<Clause> {
    let prefixes: Vec<AltSet> = edge.truthful.prefixes().into_iter().filter(|u| u.len() < m).collect();
    if prefixes.is_empty() {
        return None;
    }
    let sides = |u: AltSet| {
        let manipulated = LinExpr::mass(edge.target, edge.map.apply_set(u));
        (manipulated, LinExpr::mass(edge.source, u))
    };
    let cubes = if prefixes.len() == 1 {
        let (q, p) = sides(prefixes[0]);
        vec![vec![Atom::new(q, Rel::Le, p)]]
    } else {
        let mut cubes: Vec<Vec<Atom>> = prefixes
            .iter()
            .map(|&u| {
                let (q, p) = sides(u);
                vec![Atom::new(q, Rel::Lt, p)]
            })
            .collect();
        cubes.push(
            prefixes
                .iter()
                .map(|&u| {
                    let (q, p) = sides(u);
                    Atom::new(q, Rel::Eq, p)
                })
                .collect(),
        );
        cubes
    };
    Some(Clause { name: edge.name.clone(), cubes })
}

pub fn build_sp_constraints(domain: &DomainGraph) -> Vec<Clause> {
    domain.edges.iter().filter_map(|e| sp_clause(e, domain.m)).collect()
}

/// All four families over `domain`, in the order lottery, orbit,
/// efficiency, strategyproofness.
pub fn build_system(canon: &Canonicalizer, domain: &DomainGraph, description: impl Into<String>) -> ConstraintSystem {
    let mut clauses = build_lottery_constraints(domain);
    clauses.extend(build_orbit_constraints(canon, domain));
    clauses.extend(build_efficiency_constraints(domain));
    clauses.extend(build_sp_constraints(domain));
    ConstraintSystem {
        m: domain.m,
        n: domain.n,
        description: description.into(),
        profiles: domain.nodes.iter().map(|n| (n.id, n.anon.key())).collect(),
        clauses,
    }
}

/// The assignment an SDS `f` induces on the variables of `domain`.
pub fn sds_assignment(domain: &DomainGraph, f: impl Fn(&Profile) -> Lottery) -> BTreeMap<Var, Rational> {
    let mut out = BTreeMap::new();
    for node in &domain.nodes {
        let p = f(&node.profile);
        for x in node.profile.orders()[0].alternatives() {
            out.insert(Var::new(node.id, x), p.prob(x).clone());
        }
    }
    out
}

fn smt_rational(r: &Rational) -> String {
    let mag = r.abs();
    let body = if mag.is_integer() {
        mag.numer().to_string()
    } else {
        alloc::format!("(/ {} {})", mag.numer(), mag.denom())
    };
    if r.is_negative() {
        alloc::format!("(- {body})")
    } else {
        body
    }
}

fn smt_expr(e: &LinExpr) -> String {
    let mut parts: Vec<String> = e
        .terms()
        .map(|(v, c)| if c.is_one() { v.smt_name() } else { alloc::format!("(* {} {})", smt_rational(c), v.smt_name()) })
        .collect();
    if !e.constant_term().is_zero() || parts.is_empty() {
        parts.push(smt_rational(e.constant_term()));
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        alloc::format!("(+ {})", parts.join(" "))
    }
}

fn smt_atom(a: &Atom) -> String {
    alloc::format!("({} {} {})", a.rel.symbol(), smt_expr(&a.lhs), smt_expr(&a.rhs))
}

fn smt_cube(cube: &[Atom]) -> String {
    match cube {
        [] => String::from("true"),
        [a] => smt_atom(a),
        _ => {
            let parts: Vec<String> = cube.iter().map(smt_atom).collect();
            alloc::format!("(and {})", parts.join(" "))
        }
    }
}

/// SMT-LIB v2 text in QF_LRA. With `named`, every assertion carries its
/// clause name and the script ends by asking for an unsat core.
pub fn emit_smtlib(system: &ConstraintSystem, named: bool) -> String {
    let mut out = String::new();
    if !system.description.is_empty() {
        for line in system.description.lines() {
            let _ = writeln!(out, "; {line}");
        }
    }
    let _ = writeln!(out, "; m = {}, n = {}", system.m, system.n);
    for (id, key) in &system.profiles {
        let _ = writeln!(out, "; R{id} = {key}");
    }
    if named {
        out.push_str("(set-option :produce-unsat-cores true)\n");
    }
    out.push_str("(set-logic QF_LRA)\n");
    for v in system.variables() {
        let _ = writeln!(out, "(declare-const {} Real)", v.smt_name());
    }
    for c in &system.clauses {
        let body = match c.cubes.as_slice() {
            [cube] => smt_cube(cube),
            cubes => {
                let parts: Vec<String> = cubes.iter().map(|c| smt_cube(c)).collect();
                if parts.is_empty() {
                    String::from("false")
                } else {
                    alloc::format!("(or {})", parts.join(" "))
                }
            }
        };
        if named {
            let _ = writeln!(out, "(assert (! {body} :named {}))", c.name);
        } else {
            let _ = writeln!(out, "(assert {body})");
        }
    }
    out.push_str("(check-sat)\n");
    if named {
        out.push_str("(get-unsat-core)\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainGraph;
    use crate::lottery::{rat, sd_gt, Lottery};
    use crate::prefs::{parse_weak_order, Permutation, Profile};

    fn single(profile: &str) -> (Canonicalizer, DomainGraph) {
        let canon = Canonicalizer::new(4).unwrap();
        let p = Profile::parse(profile.split("; ")).unwrap();
        let g = DomainGraph::from_parts(&canon, vec![(1, p)], vec![]).unwrap();
        (canon, g)
    }

    #[test]
    fn lottery_family() {
        let (_, g) = single("a,b,c,d; a,b,c,d; a,b,c,d; a,b,c,d");
        let lot = build_lottery_constraints(&g);
        assert_eq!(lot.len(), 5);
        assert_eq!(lot[0].to_string(), "lot_R1_sum: p[R1][a] + p[R1][b] + p[R1][c] + p[R1][d] = 1");
        assert_eq!(lot[2].to_string(), "lot_R1_b: 0 <= p[R1][b]");
        let empty = DomainGraph { nodes: vec![], ..g };
        assert!(build_lottery_constraints(&empty).is_empty());
    }

    #[test]
    fn orbit_and_efficiency_families() {
        // R10 from the appendix
        let (canon, g) = single("{a,b},{c,d}; {c,d},{a,b}; {a,c},d,b; {b,d},a,c");
        let orb: Vec<String> = build_orbit_constraints(&canon, &g).iter().map(|c| c.to_string()).collect();
        assert_eq!(orb, ["orb_R1_a_d: p[R1][a] = p[R1][d]", "orb_R1_b_c: p[R1][b] = p[R1][c]"]);
        let eff: Vec<String> = build_efficiency_constraints(&g).iter().map(|c| c.to_string()).collect();
        assert_eq!(eff, ["eff_R1_bc: p[R1][b] = 0 | p[R1][c] = 0"]);
        let (canon, g) = single("{a,b,c,d}; {a,b,c,d}; {a,b,c,d}; {a,b,c,d}");
        assert!(build_efficiency_constraints(&g).is_empty());
        assert_eq!(build_orbit_constraints(&canon, &g).len(), 3);
        let (canon, g) = single("a,b,c,d; b,a,c,d; a,b,d,c; c,d,a,b");
        assert!(build_orbit_constraints(&canon, &g).is_empty());
    }

    fn edge(truthful: &str, map: &str) -> ManipulationEdge {
        ManipulationEdge {
            name: "S_1_2".into(),
            source: 1,
            target: 2,
            agent: 0,
            truthful: parse_weak_order(truthful).unwrap(),
            misreport: parse_weak_order("a,b,c,d").unwrap(),
            map: Permutation::parse_cycles(map, 4).unwrap(),
        }
    }

    #[test]
    fn sp_clause_shapes() {
        let c = sp_clause(&edge("{c,d},{a,b}", "()"), 4).unwrap();
        assert_eq!(c.to_string(), "S_1_2: p[R2][c] + p[R2][d] <= p[R1][c] + p[R1][d]");
        let c = sp_clause(&edge("a,b,{c,d}", "()"), 4).unwrap();
        assert_eq!(c.cubes.len(), 3);
        assert_eq!(c.cubes[2].len(), 2);
        assert!(sp_clause(&edge("{a,b,c,d}", "()"), 4).is_none());
    }

    fn random_lottery(state: &mut u64) -> Lottery {
        let mut w = [0i64; 4];
        for x in w.iter_mut() {
            *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *x = ((*state >> 33) % 4) as i64;
        }
        if w.iter().sum::<i64>() == 0 {
            w[0] = 1;
        }
        let total: i64 = w.iter().sum();
        Lottery::new(w.iter().map(|&x| rat(x, total)).collect()).unwrap()
    }

    #[test]
    fn sp_clause_matches_dominance() {
        let mut state = 7u64;
        for (truthful, map) in [("a,b,{c,d}", "(a c)(b d)"), ("{a,c},b,d", "(a b c d)"), ("d,c,b,a", "()")] {
            let e = edge(truthful, map);
            let clause = sp_clause(&e, 4).unwrap();
            for _ in 0..200 {
                let p = random_lottery(&mut state);
                let q = random_lottery(&mut state);
                let mut assignment = BTreeMap::new();
                for x in 0..4 {
                    assignment.insert(Var::new(1, Alternative::new(x)), p.probs()[x].clone());
                    assignment.insert(Var::new(2, Alternative::new(x)), q.probs()[x].clone());
                }
                // the manipulated lottery in the source labeling
                let pulled = Lottery::new((0..4).map(|x| q.prob(e.map.apply(Alternative::new(x))).clone()).collect()).unwrap();
                assert_eq!(clause.holds(&assignment).unwrap(), !sd_gt(&pulled, &p, &e.truthful));
            }
        }
    }

    #[test]
    fn smtlib_output() {
        let (canon, g) = single("{a,b},{c,d}; {c,d},{a,b}; {a,c},d,b; {b,d},a,c");
        let sys = build_system(&canon, &g, "test");
        let text = emit_smtlib(&sys, true);
        assert!(text.contains("(set-option :produce-unsat-cores true)\n(set-logic QF_LRA)\n"));
        assert!(text.contains("(declare-const p_R1_a Real)"));
        assert!(text.contains("(assert (! (= (+ p_R1_a p_R1_b p_R1_c p_R1_d) 1) :named lot_R1_sum))"));
        assert!(text.contains("(assert (! (or (= p_R1_b 0) (= p_R1_c 0)) :named eff_R1_bc))"));
        assert!(text.ends_with("(check-sat)\n(get-unsat-core)\n"));
        assert_eq!(text, emit_smtlib(&sys.clone(), true));
        let plain = emit_smtlib(&sys, false);
        assert!(plain.lines().find(|l| !l.starts_with(';')) == Some("(set-logic QF_LRA)"));
        let empty = ConstraintSystem { m: 4, n: 4, description: String::new(), profiles: vec![], clauses: vec![] };
        assert_eq!(emit_smtlib(&empty, false), "; m = 4, n = 4\n(set-logic QF_LRA)\n(check-sat)\n");
        assert_eq!(smt_rational(&rat(-3, 4)), "(- (/ 3 4))");
        assert_eq!(smt_rational(&rat(2, 1)), "2");
    }
}
