//! Solver-independent reasoning over linear atoms: exact feasibility with
//! Farkas certificates, entailment, a case-splitting unsatisfiability
//! checker whose proofs can be re-checked without an LP, and proof-step
//! replay.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::efficiency::lp::{lp_solve, LinearProgram, LpOutcome, Relation};
use crate::encode::{Atom, Clause, ConstraintSystem, LinExpr, Rel, Var};
use crate::lottery::Rational;

pub type Assignment = BTreeMap<Var, Rational>;

/// A conjunction of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AtomSet {
    pub atoms: Vec<Atom>,
}

impl AtomSet {
    pub fn new(atoms: Vec<Atom>) -> Self {
        AtomSet { atoms }
    }
}

/// Non-negative multipliers (any sign for equalities) over a list of
/// atoms whose weighted sum of `lhs - rhs` has no variable terms and
/// yields `0 < c`, `0 <= c` with `c < 0`, or `0 < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Farkas {
    pub terms: Vec<(usize, Rational)>,
}

/// Checks a Farkas certificate by exact arithmetic, with no LP involved.
pub fn check_farkas(atoms: &[&Atom], farkas: &Farkas) -> bool {
    let mut sum = LinExpr::zero();
    let mut strict = false;
    for (i, lambda) in &farkas.terms {
        let Some(atom) = atoms.get(*i) else { return false };
        if lambda.is_zero() {
            continue;
        }
        match atom.rel {
            Rel::Eq => {}
            Rel::Le | Rel::Lt if lambda.is_negative() => return false,
            Rel::Lt => strict = true,
            Rel::Le => {}
        }
        let d = atom.diff();
        for (v, c) in d.terms() {
            sum.add_term(v, c * lambda);
        }
        sum.add_constant(&(d.constant_term() * lambda));
    }
    // sum_i lambda_i (lhs_i - rhs_i) is <= 0, or < 0 when a strict atom
    // has positive weight; a positive or (strict) zero constant contradicts it
    sum.is_constant() && (sum.constant_term().is_positive() || (strict && sum.constant_term().is_zero()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Assignment),
    Infeasible(Farkas),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Decides a conjunction of atoms over the rationals. Strict atoms share
/// one slack `d`: `a < b` becomes `a + d <= b`, `d` is maximized subject to
/// `d <= 1`, and the system is feasible iff the optimum is positive.
pub fn feasible(atoms: &[Atom]) -> Feasibility {
    let refs: Vec<&Atom> = atoms.iter().collect();
    feasible_refs(&refs)
}

type Deriv = BTreeMap<usize, Rational>;

fn add_scaled(d: &mut Deriv, other: &Deriv, k: &Rational) {
    for (i, c) in other {
        let e = d.entry(*i).or_insert_with(Rational::zero);
        *e += c * k;
        if e.is_zero() {
            d.remove(i);
        }
    }
}

// `var` solved from `diff = 0`; `deriv` expresses `diff` over the input atoms
struct Substitution {
    var: Var,
    diff: LinExpr,
    deriv: Deriv,
}

fn reduce(subs: &[Substitution], mut e: LinExpr, mut d: Deriv) -> (LinExpr, Deriv) {
    for s in subs {
        let Some(c) = e.coeff(s.var) else { continue };
        let k = c / s.diff.coeff(s.var).expect("pivot variable present");
        e = e.sub(&s.diff.scaled(&k));
        add_scaled(&mut d, &s.deriv, &-k);
    }
    (e, d)
}

fn farkas_of(d: Deriv) -> Feasibility {
    Feasibility::Infeasible(Farkas { terms: d.into_iter().collect() })
}

/// Eliminates equalities by substitution, then decides the remaining
/// inequalities by LP. Certificates are mapped back onto the input atoms.
pub fn feasible_refs(atoms: &[&Atom]) -> Feasibility {
    let unit = |i: usize| Deriv::from([(i, Rational::one())]);
    let mut subs: Vec<Substitution> = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        if a.rel != Rel::Eq {
            continue;
        }
        let (e, d) = reduce(&subs, a.diff(), unit(i));
        if e.is_constant() {
            if e.constant_term().is_zero() {
                continue;
            }
            // equalities take multipliers of either sign
            let sign = if e.constant_term().is_positive() { Rational::one() } else { -Rational::one() };
            return farkas_of(d.into_iter().map(|(i, c)| (i, c * &sign)).collect());
        }
        let var = e.vars().last().expect("non-constant expression");
        subs.push(Substitution { var, diff: e, deriv: d });
    }
    let mut rows: Vec<(LinExpr, Rel, Deriv)> = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        if a.rel == Rel::Eq {
            continue;
        }
        let (e, d) = reduce(&subs, a.diff(), unit(i));
        if e.is_constant() {
            let c = e.constant_term();
            let holds = if a.rel == Rel::Lt { c.is_negative() } else { !c.is_positive() };
            if holds {
                continue;
            }
            return farkas_of(d);
        }
        rows.push((e, a.rel, d));
    }
    match lp_feasible(&rows) {
        Ok(mut point) => {
            let value = |point: &Assignment, v: Var| point.get(&v).cloned().unwrap_or_else(Rational::zero);
            for s in subs.iter().rev() {
                let mut rest = s.diff.constant_term().clone();
                for (v, c) in s.diff.terms() {
                    if v != s.var {
                        rest += c * value(&point, v);
                    }
                }
                let x = -rest / s.diff.coeff(s.var).unwrap();
                point.insert(s.var, x);
            }
            for a in atoms {
                for v in a.vars() {
                    point.entry(v).or_insert_with(Rational::zero);
                }
            }
            Feasibility::Feasible(point)
        }
        Err(lambda) => {
            let mut d = Deriv::new();
            for (r, l) in lambda {
                add_scaled(&mut d, &rows[r].2, &l);
            }
            farkas_of(d)
        }
    }
}

// Strict rows share one slack `d`: `e < 0` becomes `e + d <= 0`, `d` is
// maximized subject to `d <= 1`, and the rows are feasible iff the optimum
// is positive. Err carries multipliers over the rows.
fn lp_feasible(atoms: &[(LinExpr, Rel, Deriv)]) -> Result<Assignment, Vec<(usize, Rational)>> {
    let mut index: BTreeMap<Var, usize> = BTreeMap::new();
    for (e, _, _) in atoms {
        for v in e.vars() {
            let next = index.len();
            index.entry(v).or_insert(next);
        }
    }
    let nv = index.len();
    let delta = nv;

    // single-variable `k*v + c <= 0` with k < 0 gives the lower bound v >= -c/k;
    // the tightest one per variable becomes a bound, the rest stay rows
    let mut bound_atom: Vec<Option<(usize, Rational)>> = vec![None; nv];
    for (i, (d, rel, _)) in atoms.iter().enumerate() {
        if *rel != Rel::Le || d.num_terms() != 1 {
            continue;
        }
        let (v, k) = d.terms().next().unwrap();
        if !k.is_negative() {
            continue;
        }
        let l = -d.constant_term() / k;
        let j = index[&v];
        if bound_atom[j].as_ref().is_none_or(|(_, cur)| l > *cur) {
            bound_atom[j] = Some((i, l));
        }
    }
    let is_bound: BTreeSet<usize> = bound_atom.iter().flatten().map(|(i, _)| *i).collect();

    let mut lp = LinearProgram::free(nv + 1);
    for (j, b) in bound_atom.iter().enumerate() {
        lp.lower[j] = b.as_ref().map(|(_, l)| l.clone());
    }
    lp.objective = vec![(delta, Rational::one())];
    let mut row_atom = Vec::new();
    for (i, (d, rel, _)) in atoms.iter().enumerate() {
        if is_bound.contains(&i) {
            continue;
        }
        let mut coeffs: Vec<(usize, Rational)> = d.terms().map(|(v, c)| (index[&v], c.clone())).collect();
        let relation = match rel {
            Rel::Eq => Relation::Eq,
            Rel::Le => Relation::Le,
            Rel::Lt => {
                coeffs.push((delta, Rational::one()));
                Relation::Le
            }
        };
        lp.add(coeffs, relation, -d.constant_term());
        row_atom.push(i);
    }
    lp.add(vec![(delta, Rational::one())], Relation::Le, Rational::one());

    let outcome = lp_solve(&lp).expect("feasibility program is well formed");
    let dual = match outcome {
        LpOutcome::Optimal { value, point, dual } => {
            if value.is_positive() {
                return Ok(index.iter().map(|(v, &j)| (*v, point[j].clone())).collect());
            }
            dual
        }
        LpOutcome::Infeasible { farkas } => farkas,
        LpOutcome::Unbounded { .. } => unreachable!("d is bounded above and is the only objective term"),
    };
    // row multipliers carry over; bound multipliers are what the rows leave
    // unbalanced on each bounded variable
    let mut terms: Vec<(usize, Rational)> = Vec::new();
    let mut g = vec![Rational::zero(); nv];
    for (r, &i) in row_atom.iter().enumerate() {
        let y = &dual[r];
        if y.is_zero() {
            continue;
        }
        for (j, a) in &lp.constraints[r].coeffs {
            if *j < nv {
                g[*j] += y * a;
            }
        }
        terms.push((i, y.clone()));
    }
    for (j, b) in bound_atom.iter().enumerate() {
        if let Some((i, _)) = b {
            if g[j].is_zero() {
                continue;
            }
            let k = atoms[*i].0.terms().next().unwrap().1.clone();
            terms.push((*i, -&g[j] / k));
        }
    }
    terms.sort_by_key(|(i, _)| *i);
    Err(terms)
}

/// Whether every point satisfying `atoms` satisfies `claim`.
pub fn entails(atoms: &[Atom], claim: &Atom) -> bool {
    claim.negated().into_iter().all(|neg| {
        let mut all = atoms.to_vec();
        all.push(neg);
        !feasible(&all).is_feasible()
    })
}

/// Reference to an atom while checking a proof: an atom asserted earlier
/// on the current path, an atom of the cube under consideration, or the
/// negation of the fact a [`Step::Derive`] establishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomRef {
    Asserted(usize),
    Cube(usize),
    NegatedFact,
}

/// Farkas refutation of one cube of a clause, together with atoms
/// asserted on the current path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub clause: usize,
    pub cube: usize,
    pub atoms: Vec<AtomRef>,
    pub farkas: Farkas,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// The cube is infeasible together with the asserted atoms.
    Refute(Refutation),
    /// Every other cube of the clause has been refuted on this path, so the
    /// remaining cube's atoms are asserted.
    Assert { clause: usize, cube: usize },
    /// Each cube of the clause not yet refuted contradicts the negation of
    /// `fact` (a `<=` atom), so `fact` holds and is asserted.
    Derive { clause: usize, fact: Atom, cases: Vec<Refutation> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeEnd {
    /// Every cube of the clause has been refuted.
    Conflict { clause: usize },
    /// One branch per cube that has not been refuted, each asserting it.
    Split { clause: usize, branches: Vec<(usize, ProofNode)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofNode {
    pub steps: Vec<Step>,
    pub end: NodeEnd,
}

/// Case-split refutation of a clause list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsatCertificate {
    pub root: ProofNode,
}

impl UnsatCertificate {
    /// Number of proof nodes, i.e. explored branches.
    pub fn branch_count(&self) -> usize {
        fn count(n: &ProofNode) -> usize {
            1 + match &n.end {
                NodeEnd::Conflict { .. } => 0,
                NodeEnd::Split { branches, .. } => branches.iter().map(|(_, c)| count(c)).sum(),
            }
        }
        count(&self.root)
    }

    pub fn leaf_count(&self) -> usize {
        fn count(n: &ProofNode) -> usize {
            match &n.end {
                NodeEnd::Conflict { .. } => 1,
                NodeEnd::Split { branches, .. } => branches.iter().map(|(_, c)| count(c)).sum(),
            }
        }
        count(&self.root)
    }

    /// All Farkas certificates in the proof.
    pub fn refutations(&self) -> Vec<&Refutation> {
        fn walk<'a>(n: &'a ProofNode, out: &mut Vec<&'a Refutation>) {
            for s in &n.steps {
                match s {
                    Step::Refute(r) => out.push(r),
                    Step::Derive { cases, .. } => out.extend(cases),
                    Step::Assert { .. } => {}
                }
            }
            if let NodeEnd::Split { branches, .. } = &n.end {
                for (_, c) in branches {
                    walk(c, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Names of the clauses the proof refers to.
    pub fn used_clauses<'a>(&self, clauses: &'a [Clause]) -> BTreeSet<&'a str> {
        fn walk(n: &ProofNode, out: &mut BTreeSet<usize>) {
            for s in &n.steps {
                match s {
                    Step::Refute(r) => out.insert(r.clause),
                    Step::Assert { clause, .. } | Step::Derive { clause, .. } => out.insert(*clause),
                };
            }
            match &n.end {
                NodeEnd::Conflict { clause } => {
                    out.insert(*clause);
                }
                NodeEnd::Split { clause, branches } => {
                    out.insert(*clause);
                    for (_, c) in branches {
                        walk(c, out);
                    }
                }
            }
        }
        let mut ids = BTreeSet::new();
        walk(&self.root, &mut ids);
        ids.into_iter().filter_map(|i| clauses.get(i)).map(|c| c.name.as_str()).collect()
    }
}

fn negate_fact(fact: &Atom) -> Atom {
    Atom::new(fact.rhs.clone(), Rel::Lt, fact.lhs.clone())
}

/// Replays a certificate against `clauses`, re-deriving every
/// contradiction from its Farkas multipliers.
pub fn check_certificate(clauses: &[Clause], cert: &UnsatCertificate) -> bool {
    check_node(clauses, &cert.root, &mut Vec::new(), &mut BTreeSet::new())
}

fn check_node(clauses: &[Clause], node: &ProofNode, asserted: &mut Vec<Atom>, refuted: &mut BTreeSet<(usize, usize)>) -> bool {
    let (base_len, base_refuted) = (asserted.len(), refuted.clone());
    let ok = check_node_inner(clauses, node, asserted, refuted);
    asserted.truncate(base_len);
    *refuted = base_refuted;
    ok
}

fn check_refutation(clauses: &[Clause], asserted: &[Atom], r: &Refutation, negated: Option<&Atom>) -> bool {
    let Some(cube) = clauses.get(r.clause).and_then(|c| c.cubes.get(r.cube)) else { return false };
    let mut atoms = Vec::with_capacity(r.atoms.len());
    for a in &r.atoms {
        let atom = match *a {
            AtomRef::Asserted(i) => asserted.get(i),
            AtomRef::Cube(i) => cube.get(i),
            AtomRef::NegatedFact => negated,
        };
        match atom {
            Some(atom) => atoms.push(atom),
            None => return false,
        }
    }
    check_farkas(&atoms, &r.farkas)
}

fn check_node_inner(
    clauses: &[Clause],
    node: &ProofNode,
    asserted: &mut Vec<Atom>,
    refuted: &mut BTreeSet<(usize, usize)>,
) -> bool {
    let all_others_refuted = |refuted: &BTreeSet<(usize, usize)>, ci: usize, keep: Option<usize>| {
        (0..clauses[ci].cubes.len()).all(|k| Some(k) == keep || refuted.contains(&(ci, k)))
    };
    for step in &node.steps {
        match step {
            Step::Refute(r) => {
                if !check_refutation(clauses, asserted, r, None) {
                    return false;
                }
                refuted.insert((r.clause, r.cube));
            }
            Step::Assert { clause, cube } => {
                let Some(atoms) = clauses.get(*clause).and_then(|c| c.cubes.get(*cube)) else { return false };
                if !all_others_refuted(refuted, *clause, Some(*cube)) {
                    return false;
                }
                asserted.extend(atoms.iter().cloned());
            }
            Step::Derive { clause, fact, cases } => {
                let Some(c) = clauses.get(*clause) else { return false };
                if fact.rel != Rel::Le {
                    return false;
                }
                let neg = negate_fact(fact);
                let mut covered = BTreeSet::new();
                for r in cases {
                    if r.clause != *clause || !check_refutation(clauses, asserted, r, Some(&neg)) {
                        return false;
                    }
                    covered.insert(r.cube);
                }
                if !(0..c.cubes.len()).all(|k| covered.contains(&k) || refuted.contains(&(*clause, k))) {
                    return false;
                }
                asserted.push(fact.clone());
            }
        }
    }
    match &node.end {
        NodeEnd::Conflict { clause } => *clause < clauses.len() && all_others_refuted(refuted, *clause, None),
        NodeEnd::Split { clause, branches } => {
            let Some(c) = clauses.get(*clause) else { return false };
            let covered: BTreeSet<usize> = branches.iter().map(|(k, _)| *k).collect();
            let complete = (0..c.cubes.len()).all(|k| covered.contains(&k) || refuted.contains(&(*clause, k)));
            complete
                && branches.iter().all(|(k, child)| {
                    let Some(cube) = c.cubes.get(*k) else { return false };
                    let len = asserted.len();
                    asserted.extend(cube.iter().cloned());
                    let ok = check_node(clauses, child, asserted, refuted);
                    asserted.truncate(len);
                    ok
                })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnsatResult {
    Unsat(UnsatCertificate),
    /// A satisfying assignment for every variable in the clauses.
    Sat(Assignment),
    Inconclusive { nodes: usize },
}

impl UnsatResult {
    pub fn is_unsat(&self) -> bool {
        matches!(self, UnsatResult::Unsat(_))
    }
}

/// Search limits for [`check_unsat_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 100_000 }
    }
}

/// Decides a clause list by case splitting with exact LP pruning.
pub fn check_unsat(clauses: &[Clause]) -> UnsatResult {
    check_unsat_with(clauses, Budget::default())
}

pub fn check_unsat_with(clauses: &[Clause], budget: Budget) -> UnsatResult {
    let mut all_vars = BTreeSet::new();
    for c in clauses {
        all_vars.extend(c.vars());
    }
    // branching order among equally constrained clauses: by name, then position
    let mut by_name: Vec<usize> = (0..clauses.len()).collect();
    by_name.sort_by(|&a, &b| clauses[a].name.cmp(&clauses[b].name).then(a.cmp(&b)));
    let mut rank = vec![0; clauses.len()];
    for (r, &ci) in by_name.iter().enumerate() {
        rank[ci] = r;
    }
    let candidates = clauses.iter().map(hull_candidates).collect();
    let mut search = Search { clauses, budget, nodes: 0, rank, candidates };
    let per_cube = || clauses.iter().map(|c| vec![None; c.cubes.len()]).collect::<Vec<_>>();
    let state = State {
        asserted: Vec::new(),
        var_atoms: BTreeMap::new(),
        witness: all_vars.iter().map(|v| (*v, Rational::zero())).collect(),
        alive: clauses.iter().map(|c| vec![true; c.cubes.len()]).collect(),
        done: vec![false; clauses.len()],
        tested: per_cube(),
        tested_local: clauses.iter().map(|c| vec![None; c.cubes.len()]).collect(),
        hull_tested: BTreeMap::new(),
    };
    match search.run(state) {
        Outcome::Unsat(root) => UnsatResult::Unsat(UnsatCertificate { root }),
        Outcome::Sat(w) => UnsatResult::Sat(w),
        Outcome::Budget => UnsatResult::Inconclusive { nodes: search.nodes },
    }
}

// weak forms of a clause's atoms, tried as facts every cube may imply
fn hull_candidates(clause: &Clause) -> Vec<Atom> {
    let mut out: Vec<Atom> = Vec::new();
    if clause.cubes.len() < 2 {
        return out;
    }
    for a in clause.cubes.iter().flatten() {
        let weak = match a.rel {
            Rel::Lt | Rel::Le => vec![Atom::new(a.lhs.clone(), Rel::Le, a.rhs.clone())],
            Rel::Eq => vec![
                Atom::new(a.lhs.clone(), Rel::Le, a.rhs.clone()),
                Atom::new(a.rhs.clone(), Rel::Le, a.lhs.clone()),
            ],
        };
        for w in weak {
            if !out.contains(&w) {
                out.push(w);
            }
        }
    }
    out
}

#[derive(Clone)]
struct State {
    asserted: Vec<Atom>,
    var_atoms: BTreeMap<Var, Vec<usize>>,
    witness: Assignment,
    alive: Vec<Vec<bool>>,
    done: Vec<bool>,
    // (component size, point on the component) of the last exact test each
    // cube survived; components only grow, so an unchanged size means an
    // unchanged component
    tested: Vec<Vec<Option<(usize, Assignment)>>>,
    // local atom count of the last local test each cube survived
    tested_local: Vec<Vec<Option<usize>>>,
    // (clause, candidate) -> (scope, atom count) of the last failed derivation
    hull_tested: BTreeMap<(usize, usize), (Scope, usize)>,
}

enum Outcome {
    Unsat(ProofNode),
    Sat(Assignment),
    Budget,
}

struct Search<'a> {
    clauses: &'a [Clause],
    budget: Budget,
    nodes: usize,
    rank: Vec<usize>,
    candidates: Vec<Vec<Atom>>,
}

fn satisfied(cube: &[Atom], w: &Assignment) -> bool {
    cube.iter().all(|a| a.holds(w).unwrap_or(false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scope {
    /// Only atoms over the profiles involved: cheap, incomplete.
    Local,
    /// Every atom connected to the atoms involved: decides feasibility exactly.
    Component,
}

impl State {
    fn assert_atoms<'a>(&mut self, atoms: impl IntoIterator<Item = &'a Atom>, point: Assignment) {
        for a in atoms {
            let i = self.asserted.len();
            for v in a.vars() {
                self.var_atoms.entry(v).or_default().push(i);
            }
            self.asserted.push(a.clone());
        }
        self.witness.extend(point);
    }

    // asserted atoms sharing a variable, transitively, with `extra`
    fn component(&self, extra: &[Atom]) -> Vec<usize> {
        let mut seen_vars: BTreeSet<Var> = BTreeSet::new();
        let mut stack: Vec<Var> = extra.iter().flat_map(|a| a.vars()).collect();
        let mut atoms = BTreeSet::new();
        while let Some(v) = stack.pop() {
            if !seen_vars.insert(v) {
                continue;
            }
            for &i in self.var_atoms.get(&v).map(|x| x.as_slice()).unwrap_or(&[]) {
                if atoms.insert(i) {
                    stack.extend(self.asserted[i].vars().into_iter().filter(|u| !seen_vars.contains(u)));
                }
            }
        }
        atoms.into_iter().collect()
    }

    // asserted atoms whose variables all belong to the profiles of `extra`
    fn local(&self, extra: &[Atom]) -> Vec<usize> {
        let profiles: BTreeSet<u32> = extra.iter().flat_map(|a| a.vars()).map(|v| v.profile).collect();
        let mut atoms = BTreeSet::new();
        for &p in &profiles {
            let range = Var { profile: p, alt: 0 }..=Var { profile: p, alt: u8::MAX };
            for (_, ids) in self.var_atoms.range(range) {
                atoms.extend(ids.iter().copied());
            }
        }
        atoms.into_iter().filter(|&i| self.asserted[i].vars().iter().all(|v| profiles.contains(&v.profile))).collect()
    }

    fn scope(&self, extra: &[Atom], scope: Scope) -> Vec<usize> {
        match scope {
            Scope::Local => self.local(extra),
            Scope::Component => self.component(extra),
        }
    }

    // the asserted atoms `within` together with `extra`: a point, or a
    // refutation whose `Cube(i)` refers to `extra[i]`
    fn test(&self, within: &[usize], extra: &[Atom]) -> Result<Assignment, (Vec<AtomRef>, Farkas)> {
        let mut refs: Vec<&Atom> = within.iter().map(|&i| &self.asserted[i]).collect();
        refs.extend(extra.iter());
        match feasible_refs(&refs) {
            Feasibility::Feasible(point) => Ok(point),
            Feasibility::Infeasible(f) => {
                let n = within.len();
                let map = |i: usize| if i < n { AtomRef::Asserted(within[i]) } else { AtomRef::Cube(i - n) };
                let atoms = f.terms.iter().map(|(i, _)| map(*i)).collect();
                let terms = f.terms.into_iter().enumerate().map(|(k, (_, l))| (k, l)).collect();
                Err((atoms, Farkas { terms }))
            }
        }
    }

    // a refutation of the cube, or None after caching that it survived
    fn refute(&mut self, ci: usize, k: usize, cube: &[Atom], scope: Scope) -> Option<(Vec<AtomRef>, Farkas)> {
        let within = self.scope(cube, scope);
        let cached = match scope {
            Scope::Local => self.tested_local[ci][k] == Some(within.len()),
            Scope::Component => matches!(&self.tested[ci][k], Some((size, _)) if *size == within.len()),
        };
        if cached {
            return None;
        }
        match self.test(&within, cube) {
            Ok(point) => {
                match scope {
                    Scope::Local => self.tested_local[ci][k] = Some(within.len()),
                    Scope::Component => self.tested[ci][k] = Some((within.len(), point)),
                }
                None
            }
            Err(r) => Some(r),
        }
    }
}

impl<'a> Search<'a> {
    fn run(&mut self, mut st: State) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Outcome::Budget;
        }
        let clauses = self.clauses;
        let mut steps = Vec::new();
        // cheap local inference to a fixpoint, exact inference until one
        // step makes progress, and back; derived facts only when unit
        // propagation is stuck
        loop {
            let passes: [(fn(&mut Self, &mut State, &mut Vec<Step>, Scope) -> Result<bool, usize>, Scope); 4] = [
                (Self::propagate, Scope::Local),
                (Self::propagate, Scope::Component),
                (Self::derive, Scope::Local),
                (Self::derive, Scope::Component),
            ];
            let mut progress = false;
            for (pass, scope) in passes {
                match pass(self, &mut st, &mut steps, scope) {
                    Err(clause) => return Outcome::Unsat(ProofNode { steps, end: NodeEnd::Conflict { clause } }),
                    Ok(true) => {
                        progress = true;
                        break;
                    }
                    Ok(false) => {}
                }
            }
            if !progress {
                break;
            }
        }
        let open = (0..clauses.len())
            .filter(|&ci| !st.done[ci])
            .filter(|&ci| !clauses[ci].cubes.iter().enumerate().any(|(k, c)| st.alive[ci][k] && satisfied(c, &st.witness)))
            .min_by_key(|&ci| (st.alive[ci].iter().filter(|&&a| a).count(), self.rank[ci]));
        let Some(ci) = open else {
            return Outcome::Sat(st.witness);
        };
        let mut branches = Vec::new();
        for k in 0..clauses[ci].cubes.len() {
            if !st.alive[ci][k] {
                continue;
            }
            let point = match self.point_for(&mut st, ci, k) {
                Ok(point) => point,
                Err(refutation) => {
                    steps.push(refutation);
                    continue;
                }
            };
            let mut child = st.clone();
            child.assert_atoms(&clauses[ci].cubes[k], point);
            child.done[ci] = true;
            match self.run(child) {
                Outcome::Unsat(node) => {
                    // a refutation that never touches the branch's own atoms
                    // refutes the parent state: skip the other branches
                    let refuted = refuted_set(&st.alive);
                    let cube_len = clauses[ci].cubes[k].len();
                    if let Some(lifted) = lift_proof(clauses, &node, st.asserted.len(), cube_len, refuted) {
                        steps.extend(lifted.steps);
                        return Outcome::Unsat(ProofNode { steps, end: lifted.end });
                    }
                    branches.push((k, node))
                }
                other => return other,
            }
        }
        Outcome::Unsat(ProofNode { steps, end: NodeEnd::Split { clause: ci, branches } })
    }

    // one pass over the open clauses, refuting cubes and asserting clauses
    // left with a single cube; exact passes stop at the first progress.
    // Err carries a clause with no surviving cube.
    fn propagate(&mut self, st: &mut State, steps: &mut Vec<Step>, scope: Scope) -> Result<bool, usize> {
        let clauses = self.clauses;
        let mut progress = false;
        for ci in 0..clauses.len() {
            if st.done[ci] {
                continue;
            }
            let cubes = &clauses[ci].cubes;
            for k in 0..cubes.len() {
                if !st.alive[ci][k] || satisfied(&cubes[k], &st.witness) {
                    continue;
                }
                if let Some((atoms, farkas)) = st.refute(ci, k, &cubes[k], scope) {
                    st.alive[ci][k] = false;
                    steps.push(Step::Refute(Refutation { clause: ci, cube: k, atoms, farkas }));
                    progress = true;
                }
            }
            let alive: Vec<usize> = (0..cubes.len()).filter(|&k| st.alive[ci][k]).collect();
            match alive.as_slice() {
                [] => return Err(ci),
                [k] => {
                    let point = match self.point_for(st, ci, *k) {
                        Ok(point) => point,
                        Err(refutation) => {
                            steps.push(refutation);
                            return Err(ci);
                        }
                    };
                    st.assert_atoms(&cubes[*k], point);
                    st.done[ci] = true;
                    steps.push(Step::Assert { clause: ci, cube: *k });
                    progress = true;
                }
                _ => {}
            }
            if progress && scope == Scope::Component {
                return Ok(true);
            }
        }
        Ok(progress)
    }

    // facts implied by every surviving cube of an open clause; only facts
    // the witness violates are new. Stops at the first derived fact.
    fn derive(&mut self, st: &mut State, steps: &mut Vec<Step>, scope: Scope) -> Result<bool, usize> {
        let clauses = self.clauses;
        for ci in 0..clauses.len() {
            if st.done[ci] {
                continue;
            }
            let alive: Vec<usize> = (0..clauses[ci].cubes.len()).filter(|&k| st.alive[ci][k]).collect();
            if alive.len() < 2 {
                continue;
            }
            let involved: Vec<Atom> = alive.iter().flat_map(|&k| clauses[ci].cubes[k].iter().cloned()).collect();
            let within = st.scope(&involved, scope);
            for (j, fact) in self.candidates[ci].iter().enumerate() {
                if fact.holds(&st.witness).unwrap_or(false) || st.hull_tested.get(&(ci, j)) == Some(&(scope, within.len())) {
                    continue;
                }
                let neg = negate_fact(fact);
                let mut cases = Vec::new();
                for &k in &alive {
                    let mut extra = clauses[ci].cubes[k].clone();
                    extra.push(neg.clone());
                    match st.test(&within, &extra) {
                        Ok(_) => break,
                        Err((atoms, farkas)) => {
                            let n = extra.len() - 1;
                            let atoms = atoms
                                .into_iter()
                                .map(|a| if a == AtomRef::Cube(n) { AtomRef::NegatedFact } else { a })
                                .collect();
                            cases.push(Refutation { clause: ci, cube: k, atoms, farkas });
                        }
                    }
                }
                if cases.len() < alive.len() {
                    st.hull_tested.insert((ci, j), (scope, within.len()));
                    continue;
                }
                let comp = st.component(core::slice::from_ref(fact));
                match st.test(&comp, core::slice::from_ref(fact)) {
                    Ok(point) => {
                        st.assert_atoms(core::iter::once(fact), point);
                        steps.push(Step::Derive { clause: ci, fact: fact.clone(), cases });
                        return Ok(true);
                    }
                    Err(_) => {
                        // the asserted atoms refute the fact, hence every
                        // cube implying it
                        for &k in &alive {
                            match st.refute(ci, k, &clauses[ci].cubes[k], Scope::Component) {
                                Some((atoms, farkas)) => {
                                    st.alive[ci][k] = false;
                                    steps.push(Step::Refute(Refutation { clause: ci, cube: k, atoms, farkas }));
                                }
                                None => unreachable!("a cube implying a refuted fact is refuted"),
                            }
                        }
                        return Err(ci);
                    }
                }
            }
        }
        Ok(false)
    }

    // a point satisfying the asserted atoms and the cube, restricted to the
    // cube's component, or a refutation when the cube has only been
    // tested locally
    fn point_for(&self, st: &mut State, ci: usize, k: usize) -> Result<Assignment, Step> {
        let cube = &self.clauses[ci].cubes[k];
        if satisfied(cube, &st.witness) {
            return Ok(Assignment::new());
        }
        if let Some((atoms, farkas)) = st.refute(ci, k, cube, Scope::Component) {
            st.alive[ci][k] = false;
            return Err(Step::Refute(Refutation { clause: ci, cube: k, atoms, farkas }));
        }
        Ok(st.tested[ci][k].as_ref().map(|(_, p)| p.clone()).unwrap_or_default())
    }
}

fn refuted_set(alive: &[Vec<bool>]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (ci, cubes) in alive.iter().enumerate() {
        for (k, a) in cubes.iter().enumerate() {
            if !a {
                out.insert((ci, k));
            }
        }
    }
    out
}

/// Rewrites a proof of `state + cube` (the cube's atoms at positions
/// `base..base + cube_len`) into a proof of `state` alone, dropping steps
/// that depend on the cube. `None` when the proof needs the cube.
fn lift_proof(
    clauses: &[Clause],
    node: &ProofNode,
    base: usize,
    cube_len: usize,
    refuted: BTreeSet<(usize, usize)>,
) -> Option<ProofNode> {
    let mut lifter = Lifter { clauses, base, map: vec![None; cube_len], new_len: base, refuted };
    lifter.node(node)
}

struct Lifter<'a> {
    clauses: &'a [Clause],
    base: usize,
    // new position of each old asserted atom at or past `base`
    map: Vec<Option<usize>>,
    new_len: usize,
    refuted: BTreeSet<(usize, usize)>,
}

impl<'a> Lifter<'a> {
    fn index(&self, i: usize) -> Option<usize> {
        if i < self.base {
            Some(i)
        } else {
            self.map.get(i - self.base).copied().flatten()
        }
    }

    fn refutation(&self, r: &Refutation) -> Option<Refutation> {
        let atoms = r
            .atoms
            .iter()
            .map(|a| match *a {
                AtomRef::Asserted(i) => self.index(i).map(AtomRef::Asserted),
                other => Some(other),
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Refutation { atoms, ..r.clone() })
    }

    fn all_refuted(&self, ci: usize, keep: Option<usize>) -> bool {
        (0..self.clauses[ci].cubes.len()).all(|k| Some(k) == keep || self.refuted.contains(&(ci, k)))
    }

    fn push_atoms(&mut self, n: usize, keep: bool) {
        for _ in 0..n {
            if keep {
                self.map.push(Some(self.new_len));
                self.new_len += 1;
            } else {
                self.map.push(None);
            }
        }
    }

    fn node(&mut self, node: &ProofNode) -> Option<ProofNode> {
        let mut steps = Vec::new();
        for step in &node.steps {
            match step {
                Step::Refute(r) => {
                    if let Some(r) = self.refutation(r) {
                        self.refuted.insert((r.clause, r.cube));
                        steps.push(Step::Refute(r));
                    }
                }
                Step::Assert { clause, cube } => {
                    let keep = !self.refuted.contains(&(*clause, *cube)) && self.all_refuted(*clause, Some(*cube));
                    self.push_atoms(self.clauses[*clause].cubes[*cube].len(), keep);
                    if keep {
                        steps.push(step.clone());
                    }
                }
                Step::Derive { clause, fact, cases } => {
                    let lifted: Option<Vec<Refutation>> = cases.iter().map(|r| self.refutation(r)).collect();
                    let kept = lifted.filter(|cases| {
                        let covered: BTreeSet<usize> = cases.iter().map(|r| r.cube).collect();
                        (0..self.clauses[*clause].cubes.len()).all(|k| covered.contains(&k) || self.refuted.contains(&(*clause, k)))
                    });
                    self.push_atoms(1, kept.is_some());
                    if let Some(cases) = kept {
                        steps.push(Step::Derive { clause: *clause, fact: fact.clone(), cases });
                    }
                }
            }
        }
        let end = match &node.end {
            NodeEnd::Conflict { clause } => {
                if !self.all_refuted(*clause, None) {
                    return None;
                }
                NodeEnd::Conflict { clause: *clause }
            }
            NodeEnd::Split { clause, branches } => {
                let covered: BTreeSet<usize> = branches.iter().map(|(k, _)| *k).collect();
                if !(0..self.clauses[*clause].cubes.len()).all(|k| covered.contains(&k) || self.refuted.contains(&(*clause, k))) {
                    return None;
                }
                let mut out = Vec::new();
                for (k, child) in branches {
                    let saved = (self.map.len(), self.new_len, self.refuted.clone());
                    self.push_atoms(self.clauses[*clause].cubes[*k].len(), true);
                    let lifted = self.node(child);
                    self.map.truncate(saved.0);
                    self.new_len = saved.1;
                    self.refuted = saved.2;
                    out.push((*k, lifted?));
                }
                NodeEnd::Split { clause: *clause, branches: out }
            }
        };
        Some(ProofNode { steps, end })
    }
}

/// Whether every clause has a cube whose atoms all hold.
pub fn check_assignment(clauses: &[Clause], assignment: &Assignment) -> Result<bool, Var> {
    for c in clauses {
        if !c.holds(assignment)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Clauses equivalent to the negation of `clause`: one clause per cube,
/// holding when some atom of that cube fails.
pub fn negate_clause(clause: &Clause) -> Vec<Clause> {
    clause
        .cubes
        .iter()
        .enumerate()
        .map(|(k, cube)| Clause {
            name: alloc::format!("not_{}_{}", clause.name, k),
            cubes: cube.iter().flat_map(|a| a.negated()).map(|a| vec![a]).collect(),
        })
        .collect()
}

/// Whether `side` together with `premise` entails `conclusion`.
pub fn clause_implies(side: &[Clause], premise: &Clause, conclusion: &Clause) -> UnsatResult {
    let mut all = side.to_vec();
    all.push(premise.clone());
    all.extend(negate_clause(conclusion));
    check_unsat(&all)
}

/// One derivation step: the assumptions and the cited clauses entail every
/// claim. Steps marked `expect_fail` are negative controls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub name: String,
    pub assume: Vec<Atom>,
    /// Clause names, `*` matching any run of characters.
    pub uses: Vec<String>,
    pub claims: Vec<Atom>,
    pub expect_fail: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayError {
    UnknownCondition { step: String, pattern: String },
}

impl core::error::Error for ReplayError {}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayError::UnknownCondition { step, pattern } => {
                write!(f, "step '{step}': no condition matches '{pattern}'")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimResult {
    pub claim: Atom,
    pub result: UnsatResult,
}

impl ClaimResult {
    pub fn entailed(&self) -> bool {
        self.result.is_unsat()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub name: String,
    pub expect_fail: bool,
    pub claims: Vec<ClaimResult>,
}

impl StepReport {
    /// All claims entailed, or for a negative control, some claim refuted
    /// by a satisfying assignment.
    pub fn passed(&self) -> bool {
        if self.expect_fail {
            self.claims.iter().any(|c| matches!(c.result, UnsatResult::Sat(_)))
        } else {
            self.claims.iter().all(|c| c.entailed())
        }
    }

    pub fn branch_count(&self) -> usize {
        self.claims
            .iter()
            .map(|c| match &c.result {
                UnsatResult::Unsat(cert) => cert.branch_count(),
                _ => 0,
            })
            .sum()
    }
}

/// `*` matches any (possibly empty) run of characters.
pub fn glob_match(pattern: &str, name: &str) -> bool {
    let (p, n) = (pattern.as_bytes(), name.as_bytes());
    let (mut pi, mut ni) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ni < n.len() {
        if pi < p.len() && p[pi] == b'*' {
            star = Some((pi, ni));
            pi += 1;
        } else if pi < p.len() && p[pi] == n[ni] {
            pi += 1;
            ni += 1;
        } else if let Some((sp, sn)) = star {
            pi = sp + 1;
            ni = sn + 1;
            star = Some((sp, sn + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == b'*')
}

/// The clauses a step cites, in system order.
pub fn select_clauses(step: &ProofStep, system: &ConstraintSystem) -> Result<Vec<Clause>, ReplayError> {
    let mut chosen = vec![false; system.clauses.len()];
    for pattern in &step.uses {
        let mut hit = false;
        for (i, c) in system.clauses.iter().enumerate() {
            if glob_match(pattern, &c.name) {
                chosen[i] = true;
                hit = true;
            }
        }
        if !hit {
            return Err(ReplayError::UnknownCondition { step: step.name.clone(), pattern: pattern.clone() });
        }
    }
    Ok(system.clauses.iter().zip(chosen).filter(|(_, c)| *c).map(|(c, _)| c.clone()).collect())
}

/// Checks each claim of one step by refuting its negation together with
/// the step's assumptions and cited clauses.
pub fn replay_step(step: &ProofStep, system: &ConstraintSystem) -> Result<StepReport, ReplayError> {
    let mut base = select_clauses(step, system)?;
    for (i, a) in step.assume.iter().enumerate() {
        base.push(Clause::unit(alloc::format!("assume_{i}"), a.clone()));
    }
    let claims = step
        .claims
        .iter()
        .map(|claim| {
            let mut all = base.clone();
            all.push(Clause {
                name: String::from("negated_claim"),
                cubes: claim.negated().into_iter().map(|a| vec![a]).collect(),
            });
            ClaimResult { claim: claim.clone(), result: check_unsat(&all) }
        })
        .collect();
    Ok(StepReport { name: step.name.clone(), expect_fail: step.expect_fail, claims })
}

pub fn replay_proof(steps: &[ProofStep], system: &ConstraintSystem) -> Result<Vec<StepReport>, ReplayError> {
    steps.iter().map(|s| replay_step(s, system)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lottery::{int, rat};
    use crate::prefs::Alternative;

    fn x() -> LinExpr {
        LinExpr::var(Var::new(1, Alternative::new(0)))
    }

    fn y() -> LinExpr {
        LinExpr::var(Var::new(1, Alternative::new(1)))
    }

    fn c(r: Rational) -> LinExpr {
        LinExpr::constant(r)
    }

    fn at(l: LinExpr, rel: Rel, r: LinExpr) -> Atom {
        Atom::new(l, rel, r)
    }

    fn assert_infeasible(atoms: &[Atom]) {
        match feasible(atoms) {
            Feasibility::Infeasible(f) => {
                let refs: Vec<&Atom> = atoms.iter().collect();
                assert!(check_farkas(&refs, &f), "{f:?}");
            }
            Feasibility::Feasible(w) => panic!("expected infeasible, got {w:?}"),
        }
    }

    #[test]
    fn feasibility_examples() {
        let half = rat(1, 2);
        let atoms = [at(c(half.clone()), Rel::Le, x()), at(x(), Rel::Le, c(half.clone()))];
        match feasible(&atoms) {
            Feasibility::Feasible(w) => assert_eq!(w[&Var::new(1, Alternative::new(0))], half),
            _ => panic!(),
        }
        assert_infeasible(&[at(x(), Rel::Lt, c(int(0))), at(c(int(0)), Rel::Lt, x())]);
        assert_infeasible(&[at(x(), Rel::Le, y()), at(y(), Rel::Lt, x())]);
        assert_infeasible(&[at(x(), Rel::Le, c(int(0))), at(c(int(1)), Rel::Le, x())]);
        assert_infeasible(&[at(c(int(1)), Rel::Le, c(int(0)))]);
        assert!(feasible(&[]).is_feasible());
    }

    #[test]
    fn bounds_as_variable_bounds() {
        // x >= 0, y >= 0, x + y = 1, x > 1: the bound on y carries the proof
        let atoms = [
            at(c(int(0)), Rel::Le, x()),
            at(c(int(0)), Rel::Le, y()),
            at(x().sub(&y().scaled(&int(-1))), Rel::Eq, c(int(1))),
            at(c(int(1)), Rel::Lt, x()),
        ];
        assert_infeasible(&atoms);
        assert!(feasible(&atoms[..3]).is_feasible());
    }

    #[test]
    fn entailment_examples() {
        let half = rat(1, 2);
        let atoms = [at(c(half.clone()), Rel::Le, x()), at(x(), Rel::Le, c(half.clone()))];
        assert!(entails(&atoms, &at(x(), Rel::Eq, c(half.clone()))));
        assert!(!entails(&[], &at(c(int(0)), Rel::Le, x())));
        assert!(!entails(&atoms[..1], &at(x(), Rel::Eq, c(half))));
    }

    #[test]
    fn farkas_checker_rejects_bad_multipliers() {
        let atoms = [at(x(), Rel::Le, c(int(0))), at(c(int(1)), Rel::Le, x())];
        let refs: Vec<&Atom> = atoms.iter().collect();
        assert!(check_farkas(&refs, &Farkas { terms: vec![(0, int(1)), (1, int(1))] }));
        assert!(!check_farkas(&refs, &Farkas { terms: vec![(0, int(1)), (1, int(2))] }));
        assert!(!check_farkas(&refs, &Farkas { terms: vec![(0, int(-1)), (1, int(-1))] }));
        assert!(!check_farkas(&refs, &Farkas { terms: vec![(0, int(1)), (5, int(1))] }));
    }

    #[test]
    fn unsat_examples() {
        assert_eq!(check_unsat(&[]), UnsatResult::Sat(Assignment::new()));
        let clauses = [
            Clause::unit("a", at(c(int(1)), Rel::Le, x())),
            Clause::unit("b", at(x(), Rel::Lt, c(int(1)))),
        ];
        match check_unsat(&clauses) {
            UnsatResult::Unsat(cert) => {
                assert_eq!(cert.leaf_count(), 1);
                assert!(check_certificate(&clauses, &cert));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn splitting() {
        // (x <= 0 or x >= 2) and (x >= 1) and (x <= 3): sat with x = 2..3
        let split = Clause {
            name: "s".into(),
            cubes: vec![vec![at(x(), Rel::Le, c(int(0)))], vec![at(c(int(2)), Rel::Le, x())]],
        };
        let mut clauses = vec![
            split.clone(),
            Clause::unit("lo", at(c(int(1)), Rel::Le, x())),
            Clause::unit("hi", at(x(), Rel::Le, c(int(3)))),
        ];
        match check_unsat(&clauses) {
            UnsatResult::Sat(w) => assert!(check_assignment(&clauses, &w).unwrap()),
            other => panic!("{other:?}"),
        }
        // (x <= 0 or x >= 2) and (y = x) and (y in (0, 2)): needs both branches
        clauses = vec![
            split,
            Clause::unit("eq", at(x(), Rel::Eq, y())),
            Clause {
                name: "mid".into(),
                cubes: vec![vec![at(c(int(0)), Rel::Lt, y()), at(y(), Rel::Lt, c(int(2)))]],
            },
        ];
        match check_unsat(&clauses) {
            UnsatResult::Unsat(cert) => assert!(check_certificate(&clauses, &cert)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let clauses = [
            Clause::unit("a", at(c(int(1)), Rel::Le, x())),
            Clause::unit("b", at(x(), Rel::Lt, c(int(1)))),
        ];
        let UnsatResult::Unsat(mut cert) = check_unsat(&clauses) else { panic!() };
        for s in cert.root.steps.iter_mut() {
            if let Step::Refute(r) = s {
                for (_, l) in r.farkas.terms.iter_mut() {
                    *l = -&*l;
                }
            }
        }
        assert!(!check_certificate(&clauses, &cert));
        let weaker = [clauses[0].clone(), Clause::unit("b", at(x(), Rel::Le, c(int(1))))];
        let UnsatResult::Unsat(cert) = check_unsat(&clauses) else { panic!() };
        assert!(!check_certificate(&weaker, &cert));
    }

    #[test]
    fn derived_facts_are_checked() {
        let z = || LinExpr::var(Var::new(2, Alternative::new(0)));
        let clauses = [
            Clause {
                name: "hull".into(),
                cubes: vec![
                    vec![at(x(), Rel::Le, c(int(-1))), at(y(), Rel::Eq, c(int(1)))],
                    vec![at(x(), Rel::Lt, c(int(-2))), at(y(), Rel::Eq, c(int(2)))],
                ],
            },
            Clause {
                name: "other".into(),
                cubes: vec![
                    vec![at(c(int(-1)), Rel::Lt, x()), at(z(), Rel::Le, c(int(0)))],
                    vec![at(c(int(-1)), Rel::Lt, x()), at(c(int(1)), Rel::Le, z())],
                ],
            },
        ];
        let UnsatResult::Unsat(mut cert) = check_unsat(&clauses) else { panic!() };
        assert!(check_certificate(&clauses, &cert));
        assert_eq!(cert.branch_count(), 1);
        let fact = cert.root.steps.iter_mut().find_map(|s| match s {
            Step::Derive { fact, .. } => Some(fact),
            _ => None,
        });
        let fact = fact.expect("derived fact");
        *fact = at(x(), Rel::Le, c(int(-3)));
        assert!(!check_certificate(&clauses, &cert));
    }

    #[test]
    fn budget_gives_inconclusive() {
        let split = |name: &str, v: LinExpr| Clause {
            name: name.into(),
            cubes: vec![vec![at(v.clone(), Rel::Le, c(int(0)))], vec![at(c(int(1)), Rel::Le, v)]],
        };
        let clauses = [split("p", x()), split("q", y())];
        assert!(matches!(check_unsat_with(&clauses, Budget { max_nodes: 0 }), UnsatResult::Inconclusive { .. }));
    }

    #[test]
    fn globbing() {
        assert!(glob_match("lot_R39_*", "lot_R39_sum"));
        assert!(glob_match("orb_R45*", "orb_R45_a_b"));
        assert!(!glob_match("orb_R45*", "orb_R4_a_b"));
        assert!(glob_match("S_29_39", "S_29_39"));
        assert!(!glob_match("S_29_39", "S_29_390"));
        assert!(glob_match("*", ""));
    }
}
