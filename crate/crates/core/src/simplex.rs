//! Exact-rational linear programming: a bounded-variable two-phase primal
//! simplex over `BigRational`, returning basic (vertex) optima.
//!
//! Exactness beats speed everywhere here: the callers assert exact LP
//! identities (duality, complementarity, strict improvements), so there is
//! no scaling, no presolve and no floating point. Bland's rule prevents
//! cycling. All structural variables must carry finite bounds, which every
//! program in this crate satisfies (the covering programs box their
//! variables in `[0, 1]`).

use crate::rat::{is_half_integral, rzero, Rat};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
struct Var {
    name: String,
    lo: Rat,
    hi: Rat,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<(usize, Rat)>,
    sense: Sense,
    rhs: Rat,
}

/// A sparse rational LP with boxed variables.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub direction: Direction,
    vars: Vec<Var>,
    objective: Vec<(usize, Rat)>,
    rows: Vec<Row>,
    /// Set by builders whose polytope is known to have half-integral
    /// vertices (the fractional vertex-cover and independent-set LPs).
    /// The solver then checks the returned vertex and treats a violation
    /// as an internal bug.
    pub expect_half_integral_vertex: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    BadVariable { index: usize },
    DuplicateCoefficient { row: usize, var: usize },
    HalfIntegralityViolated { var: String },
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::BadVariable { index } => write!(f, "variable index {index} out of range"),
            LpError::DuplicateCoefficient { row, var } => {
                write!(f, "constraint {row} names variable {var} twice")
            }
            LpError::HalfIntegralityViolated { var } => write!(
                f,
                "internal invariant violated: tagged LP returned a non-half-integral vertex at {var}"
            ),
        }
    }
}

impl std::error::Error for LpError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// A solved LP. For `Optimal` the assignment is a vertex of the feasible
/// polytope and satisfies every constraint exactly.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Rat,
    names: Vec<String>,
    pub values: Vec<Rat>,
    pub is_vertex: bool,
}

impl LpSolution {
    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }

    pub fn value_of(&self, var: usize) -> &Rat {
        &self.values[var]
    }

    pub fn assignment(&self) -> BTreeMap<String, Rat> {
        self.names.iter().cloned().zip(self.values.iter().cloned()).collect()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn non_optimal(status: LpStatus) -> Self {
        LpSolution { status, value: rzero(), names: Vec::new(), values: Vec::new(), is_vertex: false }
    }
}

impl LpProblem {
    pub fn new(direction: Direction) -> Self {
        LpProblem {
            direction,
            vars: Vec::new(),
            objective: Vec::new(),
            rows: Vec::new(),
            expect_half_integral_vertex: false,
        }
    }

    /// Adds a variable with inclusive bounds `[lo, hi]`; returns its index.
    pub fn add_var(&mut self, name: impl Into<String>, lo: Rat, hi: Rat) -> usize {
        assert!(lo <= hi, "variable bounds must satisfy lo <= hi");
        self.vars.push(Var { name: name.into(), lo, hi });
        self.vars.len() - 1
    }

    /// Adds a `[0,1]` variable, the default box of the covering LPs.
    pub fn add_unit_var(&mut self, name: impl Into<String>) -> usize {
        self.add_var(name, rzero(), Rat::one())
    }

    pub fn set_objective_coeff(&mut self, var: usize, coeff: Rat) -> Result<(), LpError> {
        if var >= self.vars.len() {
            return Err(LpError::BadVariable { index: var });
        }
        self.objective.push((var, coeff));
        Ok(())
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<(usize, Rat)>,
        sense: Sense,
        rhs: Rat,
    ) -> Result<(), LpError> {
        let row = self.rows.len();
        let mut seen = std::collections::HashSet::new();
        for &(v, _) in &coeffs {
            if v >= self.vars.len() {
                return Err(LpError::BadVariable { index: v });
            }
            if !seen.insert(v) {
                return Err(LpError::DuplicateCoefficient { row, var: v });
            }
        }
        self.rows.push(Row { coeffs, sense, rhs });
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn var_names(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|v| v.name.as_str())
    }

    /// Objective value of an assignment, in the problem's own direction.
    pub fn eval_objective(&self, values: &[Rat]) -> Rat {
        self.objective.iter().map(|(v, c)| c * &values[*v]).sum()
    }

    /// Exact feasibility check of an assignment.
    pub fn is_feasible(&self, values: &[Rat]) -> bool {
        if values.len() != self.vars.len() {
            return false;
        }
        for (var, x) in self.vars.iter().zip(values) {
            if *x < var.lo || *x > var.hi {
                return false;
            }
        }
        self.rows.iter().all(|row| {
            let lhs: Rat = row.coeffs.iter().map(|(v, c)| c * &values[*v]).sum();
            match row.sense {
                Sense::Le => lhs <= row.rhs,
                Sense::Ge => lhs >= row.rhs,
                Sense::Eq => lhs == row.rhs,
            }
        })
    }
}

/// Bounds of a solver column; `None` means unbounded on that side.
#[derive(Clone)]
struct ColBounds {
    lo: Option<Rat>,
    hi: Option<Rat>,
}

struct Tableau {
    /// Dense rows over all columns.
    rows: Vec<Vec<Rat>>,
    /// Current value of every column variable.
    x: Vec<Rat>,
    bounds: Vec<ColBounds>,
    /// Basic column of each row.
    basis: Vec<usize>,
    in_basis: Vec<bool>,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    /// Runs the simplex on objective `c` (minimization) until optimality.
    /// Entering and leaving choices follow Bland's rule.
    fn optimize(&mut self, c: &[Rat]) -> PhaseOutcome {
        let m = self.rows.len();
        let ncols = self.x.len();
        // Reduced costs d = c - c_B^T * T.
        let mut d: Vec<Rat> = c.to_vec();
        for i in 0..m {
            let cb = &c[self.basis[i]];
            if !cb.is_zero() {
                for j in 0..ncols {
                    if !self.rows[i][j].is_zero() {
                        let delta = cb * &self.rows[i][j];
                        d[j] -= delta;
                    }
                }
            }
        }

        loop {
            // Entering column: smallest index with a profitable direction.
            let mut entering: Option<(usize, bool)> = None; // (col, increasing)
            for j in 0..ncols {
                if self.in_basis[j] {
                    continue;
                }
                let b = &self.bounds[j];
                if b.lo.is_some() && b.lo == b.hi {
                    continue; // fixed column
                }
                let at_lo = b.lo.as_ref() == Some(&self.x[j]);
                let at_hi = b.hi.as_ref() == Some(&self.x[j]);
                if d[j].is_negative() && (at_lo || (!at_lo && !at_hi)) {
                    entering = Some((j, true));
                    break;
                }
                if d[j].is_positive() && (at_hi || (!at_lo && !at_hi)) {
                    entering = Some((j, false));
                    break;
                }
            }
            let Some((j, increasing)) = entering else {
                return PhaseOutcome::Optimal;
            };
            let sigma: i32 = if increasing { 1 } else { -1 };

            // Ratio test: x_j moves by sigma*step, basics move by -sigma*T[i][j]*step.
            let own_cap: Option<Rat> = match (&self.bounds[j].lo, &self.bounds[j].hi) {
                (Some(lo), Some(hi)) => Some(hi - lo),
                _ => None,
            };
            let mut limit: Option<Rat> = own_cap.clone();
            let mut leaving: Option<(usize, bool)> = None; // (row, basic leaves at lower bound)
            for i in 0..m {
                let coeff = &self.rows[i][j];
                if coeff.is_zero() {
                    continue;
                }
                let b = self.basis[i];
                // Basic value moves at rate -sigma * coeff.
                let rate_negative = if sigma == 1 { coeff.is_positive() } else { coeff.is_negative() };
                let (bound, to_lower): (Option<&Rat>, bool) = if rate_negative {
                    (self.bounds[b].lo.as_ref(), true)
                } else {
                    (self.bounds[b].hi.as_ref(), false)
                };
                let Some(bound) = bound else { continue };
                let room = if to_lower { &self.x[b] - bound } else { bound - &self.x[b] };
                let step = room / coeff.abs();
                let better = match &limit {
                    None => true,
                    Some(cur) => {
                        step < *cur
                            || (step == *cur
                                && leaving.map_or(false, |(r, _)| b < self.basis[r]))
                    }
                };
                if better {
                    limit = Some(step);
                    leaving = Some((i, to_lower));
                }
            }

            let Some(step) = limit else {
                return PhaseOutcome::Unbounded;
            };

            // Apply the move to the current point.
            if !step.is_zero() {
                let signed = if sigma == 1 { step.clone() } else { -step.clone() };
                self.x[j] += &signed;
                for i in 0..m {
                    if !self.rows[i][j].is_zero() {
                        let delta = &signed * &self.rows[i][j];
                        let b = self.basis[i];
                        self.x[b] -= delta;
                    }
                }
            }

            // When the step is limited by a basic variable, pivot; when the
            // entering column hit its opposite bound first (or tied), it is
            // a bound flip and the basis stays. Flips always move strictly,
            // so only pivots matter for Bland's anti-cycling argument.
            if let Some((r, _)) = leaving {
                if own_cap.map_or(true, |cap| step < cap) {
                    self.pivot(r, j, &mut d);
                }
            }
        }
    }

    /// Pivots column `j` into row `r`'s basis slot, updating tableau and
    /// reduced costs.
    fn pivot(&mut self, r: usize, j: usize, d: &mut [Rat]) {
        let ncols = self.x.len();
        let old = self.basis[r];
        self.in_basis[old] = false;
        self.in_basis[j] = true;
        self.basis[r] = j;

        let pivot = self.rows[r][j].clone();
        debug_assert!(!pivot.is_zero());
        if !pivot.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &pivot;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][j].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        let dfac = d[j].clone();
        if !dfac.is_zero() {
            for (v, p) in d.iter_mut().zip(&pivot_row).take(ncols) {
                if !p.is_zero() {
                    *v -= &dfac * p;
                }
            }
        }
    }
}

/// Solves the LP, returning an exact vertex optimum or an
/// infeasible/unbounded status.
pub fn solve(p: &LpProblem) -> Result<LpSolution, LpError> {
    let n = p.vars.len();
    let m = p.rows.len();
    let nslack = m;
    let ncols = n + nslack + m; // structural, slack, artificial

    let mut bounds: Vec<ColBounds> = Vec::with_capacity(ncols);
    for v in &p.vars {
        bounds.push(ColBounds { lo: Some(v.lo.clone()), hi: Some(v.hi.clone()) });
    }
    for row in &p.rows {
        bounds.push(match row.sense {
            Sense::Le => ColBounds { lo: Some(rzero()), hi: None },
            Sense::Ge => ColBounds { lo: None, hi: Some(rzero()) },
            Sense::Eq => ColBounds { lo: Some(rzero()), hi: Some(rzero()) },
        });
    }
    for _ in 0..m {
        bounds.push(ColBounds { lo: Some(rzero()), hi: None });
    }

    // Nonbasic start: every structural and slack column at a finite bound.
    let mut x: Vec<Rat> = Vec::with_capacity(ncols);
    for b in bounds.iter().take(n + nslack) {
        x.push(b.lo.clone().or_else(|| b.hi.clone()).expect("column needs a finite bound"));
    }

    // Residuals decide the artificial signs; basis starts as artificials.
    let mut dense_rows: Vec<Vec<Rat>> = vec![vec![rzero(); ncols]; m];
    let mut residual: Vec<Rat> = Vec::with_capacity(m);
    for (i, row) in p.rows.iter().enumerate() {
        let mut lhs = rzero();
        for (v, c) in &row.coeffs {
            dense_rows[i][*v] = c.clone();
            lhs += c * &x[*v];
        }
        dense_rows[i][n + i] = Rat::one(); // slack
        residual.push(&row.rhs - lhs); // slack starts at 0
    }
    let mut basis = Vec::with_capacity(m);
    let mut in_basis = vec![false; ncols];
    for i in 0..m {
        let art = n + nslack + i;
        let neg = residual[i].is_negative();
        let sign = if neg { -Rat::one() } else { Rat::one() };
        dense_rows[i][art] = sign.clone();
        x.push(residual[i].abs());
        basis.push(art);
        in_basis[art] = true;
        if neg {
            for v in dense_rows[i].iter_mut() {
                if !v.is_zero() {
                    *v = -v.clone();
                }
            }
            // Keep the artificial column itself at +1 after the row flip.
            dense_rows[i][art] = Rat::one();
        }
    }

    let mut t = Tableau { rows: dense_rows, x, bounds, basis, in_basis };

    // Phase 1: minimize the sum of artificials.
    let mut c1 = vec![rzero(); ncols];
    for item in c1.iter_mut().skip(n + nslack) {
        *item = Rat::one();
    }
    match t.optimize(&c1) {
        PhaseOutcome::Unbounded => unreachable!("phase-1 objective is bounded below by zero"),
        PhaseOutcome::Optimal => {}
    }
    let infeasibility: Rat = t.x.iter().skip(n + nslack).cloned().sum();
    if !infeasibility.is_zero() {
        return Ok(LpSolution::non_optimal(LpStatus::Infeasible));
    }
    // Freeze artificials at zero for phase 2.
    for b in t.bounds.iter_mut().skip(n + nslack) {
        b.hi = Some(rzero());
    }

    // Phase 2: the real objective, minimization form.
    let mut c2 = vec![rzero(); ncols];
    for (v, coeff) in &p.objective {
        let signed = match p.direction {
            Direction::Min => coeff.clone(),
            Direction::Max => -coeff.clone(),
        };
        c2[*v] += signed;
    }
    match t.optimize(&c2) {
        PhaseOutcome::Unbounded => return Ok(LpSolution::non_optimal(LpStatus::Unbounded)),
        PhaseOutcome::Optimal => {}
    }

    let values: Vec<Rat> = t.x[..n].to_vec();
    debug_assert!(p.is_feasible(&values), "simplex returned an infeasible point");
    let value = p.eval_objective(&values);

    if p.expect_half_integral_vertex {
        for (var, val) in p.vars.iter().zip(&values) {
            if !is_half_integral(val) {
                return Err(LpError::HalfIntegralityViolated { var: var.name.clone() });
            }
        }
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        value,
        names: p.vars.iter().map(|v| v.name.clone()).collect(),
        values,
        is_vertex: true,
    })
}

/// Solves a primal/dual pair; callers assert exact value equality for
/// known dual pairs such as FVC/FMM.
pub fn solve_dual_pair(
    primal: &LpProblem,
    dual: &LpProblem,
) -> Result<(LpSolution, LpSolution), LpError> {
    Ok((solve(primal)?, solve(dual)?))
}
