//! Exact two-phase simplex over arbitrary-precision rationals.
//!
//! Problems are stated as `maximize c.x` subject to sparse linear rows and
//! per-variable lower bounds (or free variables). Every outcome carries a
//! certificate that [`certify_optimal`], [`certify_infeasible`] and
//! [`certify_unbounded`] can check without re-solving.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::lottery::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn flipped(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

/// Sparse row `sum coeffs (relation) rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpConstraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LpConstraint {
    pub fn new(coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Self {
        LpConstraint { coeffs, relation, rhs }
    }

    pub fn lhs_at(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| a * &x[*j]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    Dimension { index: usize, num_vars: usize },
    BoundCount { expected: usize, found: usize },
}

impl core::error::Error for LpError {}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::Dimension { index, num_vars } => {
                write!(f, "variable index {index} out of range for {num_vars} variables")
            }
            LpError::BoundCount { expected, found } => {
                write!(f, "expected {expected} lower bounds, found {found}")
            }
        }
    }
}

/// `maximize objective.x` over the rows, with `lower[j] = None` meaning
/// `x_j` is free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<(usize, Rational)>,
    pub constraints: Vec<LpConstraint>,
    pub lower: Vec<Option<Rational>>,
}

impl LinearProgram {
    /// Program with `num_vars` non-negative variables and no rows.
    pub fn non_negative(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: Vec::new(),
            constraints: Vec::new(),
            lower: vec![Some(Rational::zero()); num_vars],
        }
    }

    /// Program with `num_vars` free variables and no rows.
    pub fn free(num_vars: usize) -> Self {
        LinearProgram { num_vars, objective: Vec::new(), constraints: Vec::new(), lower: vec![None; num_vars] }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.constraints.push(LpConstraint::new(coeffs, relation, rhs));
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective.iter().map(|(j, c)| c * &x[*j]).sum()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.lower.len() != self.num_vars {
            return Err(LpError::BoundCount { expected: self.num_vars, found: self.lower.len() });
        }
        let indices = self
            .objective
            .iter()
            .map(|(j, _)| *j)
            .chain(self.constraints.iter().flat_map(|c| c.coeffs.iter().map(|(j, _)| *j)));
        for index in indices {
            if index >= self.num_vars {
                return Err(LpError::Dimension { index, num_vars: self.num_vars });
            }
        }
        Ok(())
    }

    /// Whether `x` satisfies every row and bound exactly.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && self.lower.iter().zip(x).all(|(l, v)| l.as_ref().is_none_or(|l| v >= l))
            && self.constraints.iter().all(|c| c.relation.holds(&c.lhs_at(x), &c.rhs))
    }

    fn dense_objective(&self) -> Vec<Rational> {
        let mut c = vec![Rational::zero(); self.num_vars];
        for (j, v) in &self.objective {
            c[*j] += v;
        }
        c
    }

    // sum_i y_i a_i as a dense vector
    fn combine_rows(&self, y: &[Rational]) -> Vec<Rational> {
        let mut g = vec![Rational::zero(); self.num_vars];
        for (row, yi) in self.constraints.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (j, a) in &row.coeffs {
                g[*j] += yi * a;
            }
        }
        g
    }
}

impl fmt::Display for LinearProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn terms(coeffs: &[(usize, Rational)]) -> String {
            if coeffs.is_empty() {
                return String::from("0");
            }
            let parts: Vec<String> = coeffs.iter().map(|(j, a)| alloc::format!("{a}*x{j}")).collect();
            parts.join(" + ")
        }
        writeln!(f, "maximize {}", terms(&self.objective))?;
        for (i, c) in self.constraints.iter().enumerate() {
            writeln!(f, "r{i}: {} {} {}", terms(&c.coeffs), c.relation, c.rhs)?;
        }
        for (j, l) in self.lower.iter().enumerate() {
            match l {
                Some(l) => writeln!(f, "x{j} >= {l}")?,
                None => writeln!(f, "x{j} free")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// `dual[i]` is the multiplier of row `i`: non-negative for `<=`,
    /// non-positive for `>=`, free for `=`.
    Optimal { value: Rational, point: Vec<Rational>, dual: Vec<Rational> },
    /// `point + t * ray` is feasible for all `t >= 0` and the objective
    /// grows along `ray`.
    Unbounded { point: Vec<Rational>, ray: Vec<Rational> },
    /// Row multipliers with the same sign convention as the dual; see
    /// [`certify_infeasible`].
    Infeasible { farkas: Vec<Rational> },
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
            LpOutcome::Infeasible { .. } => LpStatus::Infeasible,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } | LpOutcome::Unbounded { point, .. } => Some(point),
            LpOutcome::Infeasible { .. } => None,
        }
    }
}

fn sign_ok(relation: Relation, y: &Rational) -> bool {
    match relation {
        Relation::Le => !y.is_negative(),
        Relation::Ge => !y.is_positive(),
        Relation::Eq => true,
    }
}

/// Checks an optimality claim: `point` is feasible, `dual` is dual
/// feasible, and both objectives agree.
pub fn certify_optimal(lp: &LinearProgram, point: &[Rational], dual: &[Rational]) -> bool {
    if lp.validate().is_err() || dual.len() != lp.constraints.len() || !lp.is_feasible_point(point) {
        return false;
    }
    if !lp.constraints.iter().zip(dual).all(|(c, y)| sign_ok(c.relation, y)) {
        return false;
    }
    let g = lp.combine_rows(dual);
    let c = lp.dense_objective();
    let mut bound: Rational = lp.constraints.iter().zip(dual).map(|(row, y)| y * &row.rhs).sum();
    for j in 0..lp.num_vars {
        let r = &c[j] - &g[j];
        match &lp.lower[j] {
            None if !r.is_zero() => return false,
            None => {}
            Some(_) if r.is_positive() => return false,
            Some(l) => bound += r * l,
        }
    }
    lp.objective_at(point) == bound
}

/// Checks an infeasibility certificate: with `g = sum y_i a_i`, every
/// feasible `x` would satisfy `g.l <= g.x <= y.b`, so `g.l > y.b` is a
/// contradiction.
pub fn certify_infeasible(lp: &LinearProgram, farkas: &[Rational]) -> bool {
    if lp.validate().is_err() || farkas.len() != lp.constraints.len() {
        return false;
    }
    if !lp.constraints.iter().zip(farkas).all(|(c, y)| sign_ok(c.relation, y)) {
        return false;
    }
    let g = lp.combine_rows(farkas);
    let mut lower_value = Rational::zero();
    for j in 0..lp.num_vars {
        match &lp.lower[j] {
            None if !g[j].is_zero() => return false,
            None => {}
            Some(_) if g[j].is_negative() => return false,
            Some(l) => lower_value += &g[j] * l,
        }
    }
    let yb: Rational = lp.constraints.iter().zip(farkas).map(|(row, y)| y * &row.rhs).sum();
    lower_value > yb
}

/// Checks an unboundedness claim: `point` is feasible, `ray` is a recession
/// direction, and the objective strictly increases along it.
pub fn certify_unbounded(lp: &LinearProgram, point: &[Rational], ray: &[Rational]) -> bool {
    if lp.validate().is_err() || ray.len() != lp.num_vars || !lp.is_feasible_point(point) {
        return false;
    }
    let bounded_ok = lp.lower.iter().zip(ray).all(|(l, r)| l.is_none() || !r.is_negative());
    let rows_ok = lp.constraints.iter().all(|c| c.relation.holds(&c.lhs_at(ray), &Rational::zero()));
    bounded_ok && rows_ok && lp.objective_at(ray).is_positive()
}

/// Solves `lp` exactly with a two-phase simplex using Bland's rule.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    Ok(Tableau::build(lp).solve(lp))
}

// column of an original variable in standard form
#[derive(Clone, Copy)]
enum Column {
    Shifted(usize),
    Split(usize, usize),
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    // reduced costs z_j - c_j, last entry is the objective value
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    columns: Vec<Column>,
    // identity column of each row (slack or artificial) and whether it is artificial
    id_col: Vec<usize>,
    id_artificial: Vec<bool>,
    artificial: Vec<bool>,
    flipped: Vec<bool>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut columns = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for l in &lp.lower {
            match l {
                Some(_) => {
                    columns.push(Column::Shifted(next));
                    next += 1;
                }
                None => {
                    columns.push(Column::Split(next, next + 1));
                    next += 2;
                }
            }
        }
        let structural = next;
        // structural part of each row, oriented so the right-hand side is non-negative
        let mut oriented = Vec::with_capacity(lp.constraints.len());
        for c in &lp.constraints {
            let mut row = vec![Rational::zero(); structural];
            let mut rhs = c.rhs.clone();
            for (j, a) in &c.coeffs {
                match columns[*j] {
                    Column::Shifted(k) => {
                        row[k] += a;
                        rhs -= a * lp.lower[*j].as_ref().unwrap();
                    }
                    Column::Split(p, n) => {
                        row[p] += a;
                        row[n] -= a;
                    }
                }
            }
            let flip = rhs.is_negative();
            let mut relation = c.relation;
            if flip {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                rhs = -rhs;
                relation = relation.flipped();
            }
            oriented.push((row, rhs, relation, flip));
        }
        let extra: usize = oriented.iter().map(|(_, _, rel, _)| if *rel == Relation::Ge { 2 } else { 1 }).sum();
        let ncols = structural + extra;
        let nrows = oriented.len();
        let mut rows = Vec::with_capacity(nrows);
        let mut basis = Vec::with_capacity(nrows);
        let mut id_col = Vec::with_capacity(nrows);
        let mut id_artificial = Vec::with_capacity(nrows);
        let mut artificial = vec![false; ncols];
        let mut flipped = Vec::with_capacity(nrows);
        let mut col = structural;
        for (mut row, rhs, relation, flip) in oriented {
            row.resize(ncols + 1, Rational::zero());
            row[ncols] = rhs;
            flipped.push(flip);
            match relation {
                Relation::Le => {
                    row[col] = Rational::one();
                    basis.push(col);
                    id_col.push(col);
                    id_artificial.push(false);
                    col += 1;
                }
                Relation::Ge => {
                    row[col] = -Rational::one();
                    row[col + 1] = Rational::one();
                    artificial[col + 1] = true;
                    basis.push(col + 1);
                    id_col.push(col + 1);
                    id_artificial.push(true);
                    col += 2;
                }
                Relation::Eq => {
                    row[col] = Rational::one();
                    artificial[col] = true;
                    basis.push(col);
                    id_col.push(col);
                    id_artificial.push(true);
                    col += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            obj: vec![Rational::zero(); ncols + 1],
            basis,
            ncols,
            columns,
            id_col,
            id_artificial,
            artificial,
            flipped,
        }
    }

    // recompute the objective row for costs `cost` (indexed by column)
    fn price(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.iter().map(|c| -c).collect();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                if !v.is_zero() {
                    *o += cb * v;
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let inv = self.rows[r][j].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let support: Vec<usize> = (0..=self.ncols).filter(|&k| !self.rows[r][k].is_zero()).collect();
        let pivot_row = core::mem::take(&mut self.rows[r]);
        let eliminate = |target: &mut Vec<Rational>| {
            let f = target[j].clone();
            if f.is_zero() {
                return;
            }
            for &k in &support {
                target[k] -= &f * &pivot_row[k];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = pivot_row;
        self.basis[r] = j;
    }

    // Bland's rule: smallest eligible entering column, ratio ties broken by
    // smallest basic column. Returns false when the entering column is
    // unbounded, leaving that column index in `unbounded`.
    fn optimize(&mut self, barred: &[bool], unbounded: &mut Option<usize>) -> bool {
        loop {
            let entering = (0..self.ncols).find(|&k| !barred[k] && self.obj[k].is_negative());
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, j),
                None => {
                    *unbounded = Some(j);
                    return false;
                }
            }
        }
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.ncols];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            v[b] = row[self.ncols].clone();
        }
        v
    }

    fn to_original(&self, lp: &LinearProgram, cols: &[Rational], shift: bool) -> Vec<Rational> {
        self.columns
            .iter()
            .enumerate()
            .map(|(j, c)| match *c {
                Column::Shifted(k) => {
                    let base = if shift { lp.lower[j].clone().unwrap() } else { Rational::zero() };
                    base + &cols[k]
                }
                Column::Split(p, n) => &cols[p] - &cols[n],
            })
            .collect()
    }

    // row multipliers in the original orientation, given the cost of each
    // row's identity column
    fn multipliers(&self, id_cost: impl Fn(usize) -> Rational) -> Vec<Rational> {
        (0..self.rows.len())
            .map(|i| {
                let y = &self.obj[self.id_col[i]] + id_cost(i);
                if self.flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }

    fn solve(mut self, lp: &LinearProgram) -> LpOutcome {
        let none_barred = vec![false; self.ncols];
        let mut unbounded = None;
        if self.artificial.iter().any(|&a| a) {
            let cost: Vec<Rational> =
                self.artificial.iter().map(|&a| if a { -Rational::one() } else { Rational::zero() }).collect();
            self.price(&cost);
            let done = self.optimize(&none_barred, &mut unbounded);
            debug_assert!(done, "phase one is bounded by zero");
            if self.obj[self.ncols].is_negative() {
                // identity column cost is -1 for artificials, 0 for slacks
                let art = self.id_artificial.clone();
                let farkas = self.multipliers(|i| if art[i] { -Rational::one() } else { Rational::zero() });
                return LpOutcome::Infeasible { farkas };
            }
            self.drive_out_artificials();
        }
        let mut cost = vec![Rational::zero(); self.ncols];
        for (j, v) in &lp.objective {
            match self.columns[*j] {
                Column::Shifted(k) => cost[k] += v,
                Column::Split(p, n) => {
                    cost[p] += v;
                    cost[n] -= v;
                }
            }
        }
        self.price(&cost);
        let barred = self.artificial.clone();
        if !self.optimize(&barred, &mut unbounded) {
            let j = unbounded.unwrap();
            let point = self.to_original(lp, &self.column_values(), true);
            let mut dir = vec![Rational::zero(); self.ncols];
            dir[j] = Rational::one();
            for (row, &b) in self.rows.iter().zip(&self.basis) {
                dir[b] = -&row[j];
            }
            let ray = self.to_original(lp, &dir, false);
            return LpOutcome::Unbounded { point, ray };
        }
        let point = self.to_original(lp, &self.column_values(), true);
        let dual = self.multipliers(|_| Rational::zero());
        LpOutcome::Optimal { value: lp.objective_at(&point), point, dual }
    }

    // after a successful phase one, pivot zero-valued artificials out of the
    // basis where some real column allows it
    fn drive_out_artificials(&mut self) {
        for r in 0..self.rows.len() {
            if !self.artificial[self.basis[r]] {
                continue;
            }
            if let Some(j) = (0..self.ncols).find(|&k| !self.artificial[k] && !self.rows[r][k].is_zero()) {
                self.pivot(r, j);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lottery::{int, rat};

    fn one_var(rows: Vec<(Relation, i64)>, lower: Option<i64>, obj: i64) -> LinearProgram {
        let mut lp = LinearProgram {
            num_vars: 1,
            objective: vec![(0, int(obj))],
            constraints: Vec::new(),
            lower: vec![lower.map(int)],
        };
        for (rel, b) in rows {
            lp.add(vec![(0, int(1))], rel, int(b));
        }
        lp
    }

    fn check(lp: &LinearProgram) -> LpOutcome {
        let out = lp_solve(lp).unwrap();
        match &out {
            LpOutcome::Optimal { point, dual, .. } => assert!(certify_optimal(lp, point, dual), "{lp}"),
            LpOutcome::Unbounded { point, ray } => assert!(certify_unbounded(lp, point, ray), "{lp}"),
            LpOutcome::Infeasible { farkas } => assert!(certify_infeasible(lp, farkas), "{lp}"),
        }
        out
    }

    #[test]
    fn trivial_programs() {
        let out = check(&one_var(vec![(Relation::Le, 1)], Some(0), 1));
        assert_eq!(out.value(), Some(&int(1)));
        assert_eq!(check(&one_var(vec![], Some(0), 1)).status(), LpStatus::Unbounded);
        let lp = one_var(vec![(Relation::Le, 0), (Relation::Ge, 1)], None, 0);
        assert_eq!(check(&lp).status(), LpStatus::Infeasible);
    }

    #[test]
    fn free_and_shifted_variables() {
        // max x - y, x free, y >= 2, x + y <= 5, x - y >= -7
        let mut lp = LinearProgram {
            num_vars: 2,
            objective: vec![(0, int(1)), (1, int(-1))],
            constraints: Vec::new(),
            lower: vec![None, Some(int(2))],
        };
        lp.add(vec![(0, int(1)), (1, int(1))], Relation::Le, int(5));
        lp.add(vec![(0, int(1)), (1, int(-1))], Relation::Ge, int(-7));
        let out = check(&lp);
        assert_eq!(out.value(), Some(&int(1)));
        assert_eq!(out.point().unwrap(), &[int(3), int(2)]);
        lp.objective = vec![(0, int(-1))];
        // min x: x >= y - 7 with y >= 2 gives x >= -5
        assert_eq!(check(&lp).value(), Some(&int(5)));
    }

    #[test]
    fn equality_rows_and_fractions() {
        // max 2a + 3b, a + b = 1, a - 2b >= -1/2, a,b >= 0
        let mut lp = LinearProgram::non_negative(2);
        lp.objective = vec![(0, int(2)), (1, int(3))];
        lp.add(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(1));
        lp.add(vec![(0, int(1)), (1, int(-2))], Relation::Ge, rat(-1, 2));
        let out = check(&lp);
        assert_eq!(out.point().unwrap(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(out.value(), Some(&rat(5, 2)));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::non_negative(2);
        lp.objective = vec![(0, int(1))];
        lp.add(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(1));
        lp.add(vec![(0, int(2)), (1, int(2))], Relation::Eq, int(2));
        lp.add(vec![(0, int(-1)), (1, int(-1))], Relation::Eq, int(-1));
        assert_eq!(check(&lp).value(), Some(&int(1)));
    }

    #[test]
    fn cycling_example_terminates() {
        // Beale's classic cycling instance under the textbook rule
        let mut lp = LinearProgram::non_negative(4);
        lp.objective = vec![(0, rat(3, 4)), (1, int(-150)), (2, rat(1, 50)), (3, int(-6))];
        lp.add(vec![(0, rat(1, 4)), (1, int(-60)), (2, rat(-1, 25)), (3, int(9))], Relation::Le, int(0));
        lp.add(vec![(0, rat(1, 2)), (1, int(-90)), (2, rat(-1, 50)), (3, int(3))], Relation::Le, int(0));
        lp.add(vec![(2, int(1))], Relation::Le, int(1));
        assert_eq!(check(&lp).value(), Some(&rat(1, 20)));
    }

    #[test]
    fn certificates_reject_forgeries() {
        let lp = one_var(vec![(Relation::Le, 1)], Some(0), 1);
        assert!(!certify_optimal(&lp, &[rat(1, 2)], &[int(1)]));
        assert!(!certify_optimal(&lp, &[int(1)], &[int(-1)]));
        assert!(!certify_infeasible(&lp, &[int(1)]));
        let bad = one_var(vec![(Relation::Le, 0), (Relation::Ge, 1)], None, 0);
        assert!(certify_infeasible(&bad, &[int(1), int(-1)]));
        assert!(!certify_infeasible(&bad, &[int(-1), int(1)]));
    }

    #[test]
    fn dimension_errors() {
        let mut lp = LinearProgram::non_negative(1);
        lp.add(vec![(3, int(1))], Relation::Le, int(1));
        assert_eq!(lp_solve(&lp), Err(LpError::Dimension { index: 3, num_vars: 1 }));
        let lp = LinearProgram { num_vars: 2, objective: vec![], constraints: vec![], lower: vec![None] };
        assert!(lp_solve(&lp).is_err());
    }
}
