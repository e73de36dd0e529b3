//! Bounded-variable primal simplex with a dense basis inverse.
//!
//! The solver is built for desk-scale relaxations (up to a few thousand
//! rows). Rows are scaled to unit magnitude, the basis inverse is kept
//! explicitly and refreshed by full refactorization, and Dantzig pricing
//! falls back to Bland's rule after a degenerate stall. Warm starts repair
//! a single violated basic variable, which is exactly the state a
//! branch-and-bound child node is in.

use super::milp::{MilpProblem, Sense};
use std::time::Instant;

const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-8;
const FEAS_TOL: f64 = 1e-7;
const STALL_LIMIT: usize = 300;
const REFACTOR_INTERVAL: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    TimeLimit,
    Numerical,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    /// Structural column values (slacks stripped).
    pub x: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

/// Snapshot of a basis for warm starting.
#[derive(Debug, Clone)]
pub struct Basis {
    basic: Vec<usize>,
    state: Vec<VarState>,
}

#[derive(Debug, Clone, Default)]
pub struct LpOptions {
    pub max_iterations: usize,
    pub deadline: Option<Instant>,
}

impl LpOptions {
    fn iter_cap(&self, rows: usize, cols: usize) -> usize {
        if self.max_iterations > 0 {
            self.max_iterations
        } else {
            20_000 + 40 * (rows + cols)
        }
    }
}

/// Immutable LP matrix data shared across branch-and-bound nodes; only the
/// column bounds change between solves.
pub struct LpSolver {
    rows: usize,
    structural: usize,
    /// Column-major sparse matrix over structural + slack columns, with
    /// row-scaled coefficients.
    col_ptr: Vec<usize>,
    col_rows: Vec<usize>,
    col_vals: Vec<f64>,
    objective: Vec<f64>,
    rhs: Vec<f64>,
    /// Slack bounds implied by each row's sense.
    slack_lower: Vec<f64>,
    slack_upper: Vec<f64>,
}

impl LpSolver {
    pub fn new(problem: &MilpProblem) -> Self {
        let m = problem.rows.len();
        let n = problem.cols.len();

        // Power-of-two row equilibration keeps coefficients exact.
        let mut scale = vec![1.0f64; m];
        for (i, row) in problem.rows.iter().enumerate() {
            let max = row
                .terms
                .iter()
                .map(|&(_, a)| a.abs())
                .fold(0.0f64, f64::max);
            if max > 0.0 {
                scale[i] = (2.0f64).powi(-max.log2().floor() as i32);
            }
        }

        let mut per_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, row) in problem.rows.iter().enumerate() {
            for &(j, a) in &row.terms {
                per_col[j].push((i, a * scale[i]));
            }
        }
        let mut col_ptr = Vec::with_capacity(n + m + 1);
        let mut col_rows = Vec::new();
        let mut col_vals = Vec::new();
        col_ptr.push(0);
        for col in &per_col {
            for &(i, a) in col {
                col_rows.push(i);
                col_vals.push(a);
            }
            col_ptr.push(col_rows.len());
        }
        // Slack columns: identity.
        for i in 0..m {
            col_rows.push(i);
            col_vals.push(1.0);
            col_ptr.push(col_rows.len());
        }

        let mut slack_lower = Vec::with_capacity(m);
        let mut slack_upper = Vec::with_capacity(m);
        for row in &problem.rows {
            let (lo, hi) = match row.sense {
                Sense::Le => (0.0, f64::INFINITY),
                Sense::Ge => (f64::NEG_INFINITY, 0.0),
                Sense::Eq => (0.0, 0.0),
            };
            slack_lower.push(lo);
            slack_upper.push(hi);
        }

        Self {
            rows: m,
            structural: n,
            col_ptr,
            col_rows,
            col_vals,
            objective: problem.cols.iter().map(|c| c.objective).collect(),
            rhs: problem
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| r.rhs * scale[i])
                .collect(),
            slack_lower,
            slack_upper,
        }
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    /// Solves with the given structural bounds. `warm` must come from a
    /// previous solve on the same matrix.
    pub fn solve(
        &self,
        lower: &[f64],
        upper: &[f64],
        warm: Option<&Basis>,
        opts: &LpOptions,
    ) -> (LpSolution, Option<Basis>) {
        let mut ws = Workspace::new(self, lower, upper);
        let status = ws.run(warm, opts);
        let x = ws.structural_values();
        let objective = self
            .objective
            .iter()
            .zip(&x)
            .map(|(c, v)| c * v)
            .sum::<f64>();
        let basis = if status == LpStatus::Optimal {
            Some(Basis {
                basic: ws.basic.clone(),
                state: ws.state.clone(),
            })
        } else {
            None
        };
        (
            LpSolution {
                status,
                objective,
                x,
                iterations: ws.iterations,
            },
            basis,
        )
    }
}

struct Workspace<'a> {
    lp: &'a LpSolver,
    ncols: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    state: Vec<VarState>,
    basic: Vec<usize>,
    pos_in_basis: Vec<usize>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    iterations: usize,
    pivots_since_refactor: usize,
    bland: bool,
    stall: usize,
}

impl<'a> Workspace<'a> {
    fn new(lp: &'a LpSolver, struct_lower: &[f64], struct_upper: &[f64]) -> Self {
        let m = lp.rows;
        let ncols = lp.structural + m;
        let mut lower = Vec::with_capacity(ncols);
        let mut upper = Vec::with_capacity(ncols);
        lower.extend_from_slice(struct_lower);
        upper.extend_from_slice(struct_upper);
        lower.extend_from_slice(&lp.slack_lower);
        upper.extend_from_slice(&lp.slack_upper);
        Self {
            lp,
            ncols,
            lower,
            upper,
            cost: vec![0.0; ncols],
            state: vec![VarState::AtLower; ncols],
            basic: Vec::new(),
            pos_in_basis: vec![usize::MAX; ncols],
            binv: Vec::new(),
            xb: vec![0.0; m],
            iterations: 0,
            pivots_since_refactor: 0,
            bland: false,
            stall: 0,
        }
    }

    fn col_entries(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (s, e) = (self.lp.col_ptr[j], self.lp.col_ptr[j + 1]);
        self.lp.col_rows[s..e]
            .iter()
            .copied()
            .zip(self.lp.col_vals[s..e].iter().copied())
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.state[j] {
            VarState::AtLower => {
                if self.lower[j].is_finite() {
                    self.lower[j]
                } else {
                    0.0
                }
            }
            VarState::AtUpper => self.upper[j],
            VarState::Basic => unreachable!(),
        }
    }

    fn run(&mut self, warm: Option<&Basis>, opts: &LpOptions) -> LpStatus {
        let m = self.lp.rows;
        let cap = opts.iter_cap(m, self.ncols);

        let warm_ok = match warm {
            Some(b) if b.basic.len() == m => {
                self.basic = b.basic.clone();
                self.state = b.state.clone();
                // Clamp nonbasic states onto the current bounds.
                for j in 0..self.ncols {
                    if self.state[j] == VarState::Basic {
                        continue;
                    }
                    let at_lower_valid = self.lower[j].is_finite();
                    let at_upper_valid = self.upper[j].is_finite();
                    self.state[j] = match self.state[j] {
                        VarState::AtUpper if at_upper_valid => VarState::AtUpper,
                        _ if at_lower_valid => VarState::AtLower,
                        _ if at_upper_valid => VarState::AtUpper,
                        _ => VarState::AtLower,
                    };
                }
                for (pos, &j) in self.basic.iter().enumerate() {
                    self.pos_in_basis[j] = pos;
                }
                self.refactor() && self.repair_bound_violations(cap, opts)
            }
            _ => false,
        };

        if !warm_ok {
            for s in self.pos_in_basis.iter_mut() {
                *s = usize::MAX;
            }
            if !self.cold_start(cap, opts) {
                return LpStatus::Infeasible;
            }
        }

        // Phase 2 with the real objective.
        self.cost[..self.lp.structural].copy_from_slice(&self.lp.objective);
        for c in self.cost[self.lp.structural..].iter_mut() {
            *c = 0.0;
        }
        self.primal_loop(cap, opts)
    }

    /// Fresh-basis start: slacks basic where their implied value fits the
    /// slack bounds, artificial handling via temporarily relaxed slack
    /// bounds plus a phase-1 objective that drives the violation out.
    fn cold_start(&mut self, cap: usize, opts: &LpOptions) -> bool {
        let m = self.lp.rows;
        let n = self.lp.structural;
        for j in 0..self.ncols {
            self.state[j] = if self.lower[j].is_finite() || !self.upper[j].is_finite() {
                VarState::AtLower
            } else {
                VarState::AtUpper
            };
        }
        self.basic = (n..n + m).collect();
        for (pos, &j) in self.basic.iter().enumerate() {
            self.pos_in_basis[j] = pos;
            self.state[j] = VarState::Basic;
        }
        self.binv = identity(m);
        self.compute_basic_values();
        self.repair_bound_violations(cap, opts)
    }

    /// Phase 1: while any basic variable sits outside its bounds, relax the
    /// offending bounds and minimize the total excursion. Stops as soon as
    /// the basis is primal feasible.
    fn repair_bound_violations(&mut self, cap: usize, opts: &LpOptions) -> bool {
        loop {
            let mut relaxed: Vec<(usize, f64, f64)> = Vec::new();
            for c in self.cost.iter_mut() {
                *c = 0.0;
            }
            for (pos, &j) in self.basic.iter().enumerate() {
                let v = self.xb[pos];
                if v > self.upper[j] + FEAS_TOL {
                    relaxed.push((j, self.lower[j], self.upper[j]));
                    self.cost[j] = 1.0;
                    self.upper[j] = f64::INFINITY;
                } else if v < self.lower[j] - FEAS_TOL {
                    relaxed.push((j, self.lower[j], self.upper[j]));
                    self.cost[j] = -1.0;
                    self.lower[j] = f64::NEG_INFINITY;
                }
            }
            if relaxed.is_empty() {
                return true;
            }
            let target: f64 = relaxed
                .iter()
                .map(|&(j, lo, hi)| {
                    let v = self.xb[self.pos_in_basis[j]];
                    if self.cost[j] > 0.0 {
                        v - hi
                    } else {
                        lo - v
                    }
                })
                .sum();
            debug_assert!(target > 0.0);

            let status = self.primal_loop_phase1(cap, opts, &relaxed);
            // Restore the relaxed bounds.
            for &(j, lo, hi) in &relaxed {
                self.lower[j] = lo;
                self.upper[j] = hi;
            }
            match status {
                Phase1Outcome::Feasible => continue, // re-scan; usually clean
                Phase1Outcome::Infeasible => return false,
                Phase1Outcome::Stopped => return false,
            }
        }
    }

    fn structural_values(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.lp.structural];
        for (j, v) in x.iter_mut().enumerate() {
            *v = match self.state[j] {
                VarState::Basic => self.xb[self.pos_in_basis[j]],
                _ => self.nonbasic_value(j),
            };
        }
        x
    }

    fn compute_basic_values(&mut self) {
        let m = self.lp.rows;
        // r = b - N x_N
        let mut r = self.lp.rhs.clone();
        for j in 0..self.ncols {
            if self.state[j] == VarState::Basic {
                continue;
            }
            let v = self.nonbasic_value(j);
            if v != 0.0 {
                for (i, a) in self.col_entries(j) {
                    r[i] -= a * v;
                }
            }
        }
        for pos in 0..m {
            let row = &self.binv[pos * m..(pos + 1) * m];
            self.xb[pos] = row.iter().zip(&r).map(|(b, v)| b * v).sum();
        }
    }

    /// Rebuilds the dense inverse from the basis columns. False on a
    /// singular basis.
    fn refactor(&mut self) -> bool {
        let m = self.lp.rows;
        let mut mat = vec![0.0f64; m * m];
        for (pos, &j) in self.basic.iter().enumerate() {
            for (i, a) in self.col_entries(j) {
                mat[i * m + pos] = a;
            }
        }
        match invert(&mut mat, m) {
            Some(inv) => {
                self.binv = inv;
                self.pivots_since_refactor = 0;
                self.compute_basic_values();
                true
            }
            None => false,
        }
    }

    /// One run of the primal loop with the current cost vector.
    fn primal_loop(&mut self, cap: usize, opts: &LpOptions) -> LpStatus {
        loop {
            if self.iterations >= cap {
                return LpStatus::IterationLimit;
            }
            if self.iterations % 128 == 0 {
                if let Some(deadline) = opts.deadline {
                    if Instant::now() >= deadline {
                        return LpStatus::TimeLimit;
                    }
                }
            }
            let y = self.duals();
            let entering = self.price(&y);
            let Some((q, dir, _)) = entering else {
                return LpStatus::Optimal;
            };
            match self.step(q, dir) {
                StepResult::Moved => {}
                StepResult::Unbounded => return LpStatus::Unbounded,
                StepResult::Singular => {
                    if !self.refactor() {
                        return LpStatus::Numerical;
                    }
                }
            }
        }
    }

    fn primal_loop_phase1(
        &mut self,
        cap: usize,
        opts: &LpOptions,
        relaxed: &[(usize, f64, f64)],
    ) -> Phase1Outcome {
        loop {
            // Early exit: all relaxed variables back inside their bounds.
            let clean = relaxed.iter().all(|&(j, lo, hi)| {
                let v = match self.state[j] {
                    VarState::Basic => self.xb[self.pos_in_basis[j]],
                    _ => self.nonbasic_value(j),
                };
                v >= lo - FEAS_TOL && v <= hi + FEAS_TOL
            });
            if clean {
                return Phase1Outcome::Feasible;
            }
            if self.iterations >= cap {
                return Phase1Outcome::Stopped;
            }
            if self.iterations % 128 == 0 {
                if let Some(deadline) = opts.deadline {
                    if Instant::now() >= deadline {
                        return Phase1Outcome::Stopped;
                    }
                }
            }
            let y = self.duals();
            let entering = self.price(&y);
            let Some((q, dir, _)) = entering else {
                return Phase1Outcome::Infeasible; // residual stays positive
            };
            match self.step(q, dir) {
                StepResult::Moved => {}
                StepResult::Unbounded => {
                    // The phase-1 objective is bounded below by zero, so an
                    // unbounded ray means numerical trouble.
                    return Phase1Outcome::Stopped;
                }
                StepResult::Singular => {
                    if !self.refactor() {
                        return Phase1Outcome::Stopped;
                    }
                }
            }
        }
    }

    fn duals(&self) -> Vec<f64> {
        let m = self.lp.rows;
        let mut y = vec![0.0; m];
        for (pos, &j) in self.basic.iter().enumerate() {
            let cb = self.cost[j];
            if cb != 0.0 {
                let row = &self.binv[pos * m..(pos + 1) * m];
                for (yi, b) in y.iter_mut().zip(row) {
                    *yi += cb * b;
                }
            }
        }
        y
    }

    /// Picks the entering column and its direction (+1 from lower, -1 from
    /// upper). Dantzig pricing, or Bland's rule while stalled.
    fn price(&self, y: &[f64]) -> Option<(usize, f64, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.ncols {
            if self.state[j] == VarState::Basic || self.lower[j] == self.upper[j] {
                continue;
            }
            let mut d = self.cost[j];
            for (i, a) in self.col_entries(j) {
                d -= y[i] * a;
            }
            let tol = DUAL_TOL * self.cost[j].abs().max(1.0);
            let candidate = match self.state[j] {
                VarState::AtLower if d < -tol => Some((j, 1.0, -d)),
                VarState::AtUpper if d > tol => Some((j, -1.0, d)),
                _ => None,
            };
            if let Some((j, dir, score)) = candidate {
                if self.bland {
                    return Some((j, dir, score));
                }
                if best.map_or(true, |(_, _, s)| score > s) {
                    best = Some((j, dir, score));
                }
            }
        }
        best
    }

    fn step(&mut self, q: usize, dir: f64) -> StepResult {
        let m = self.lp.rows;
        // alpha = B^-1 a_q
        let mut alpha = vec![0.0f64; m];
        for (i, a) in self.col_entries(q) {
            if a == 0.0 {
                continue;
            }
            for pos in 0..m {
                alpha[pos] += self.binv[pos * m + i] * a;
            }
        }

        // Ratio test.
        let own_range = self.upper[q] - self.lower[q];
        let mut limit = if own_range.is_finite() { own_range } else { f64::INFINITY };
        let mut leaving: Option<(usize, bool)> = None; // (basis pos, hits_upper)
        for pos in 0..m {
            let a = dir * alpha[pos];
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let j = self.basic[pos];
            let v = self.xb[pos];
            let (step, hits_upper) = if a > 0.0 {
                if self.lower[j].is_finite() {
                    ((v - self.lower[j]) / a, false)
                } else {
                    continue;
                }
            } else if self.upper[j].is_finite() {
                ((self.upper[j] - v) / (-a), true)
            } else {
                continue;
            };
            let step = step.max(0.0);
            if step < limit - 1e-12 {
                limit = step;
                leaving = Some((pos, hits_upper));
            } else if step < limit + 1e-12 {
                // Tie break on pivot magnitude for stability; Bland prefers
                // the smallest basic index.
                if let Some((cur, _)) = leaving {
                    let better = if self.bland {
                        self.basic[pos] < self.basic[cur]
                    } else {
                        alpha[pos].abs() > alpha[cur].abs()
                    };
                    if better {
                        limit = step.min(limit);
                        leaving = Some((pos, hits_upper));
                    }
                } else {
                    limit = step;
                    leaving = Some((pos, hits_upper));
                }
            }
        }

        if limit.is_infinite() {
            return StepResult::Unbounded;
        }
        self.iterations += 1;
        if limit > 1e-10 {
            self.stall = 0;
            if self.bland {
                self.bland = false;
            }
        } else {
            self.stall += 1;
            if self.stall > STALL_LIMIT {
                self.bland = true;
            }
        }

        match leaving {
            None => {
                // Bound flip: q runs to its opposite bound.
                for pos in 0..m {
                    self.xb[pos] -= dir * alpha[pos] * limit;
                }
                self.state[q] = if dir > 0.0 {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                };
                StepResult::Moved
            }
            Some((r, hits_upper)) => {
                let piv = alpha[r];
                if piv.abs() <= PIVOT_TOL {
                    return StepResult::Singular;
                }
                let entering_value = self.nonbasic_value(q) + dir * limit;
                for pos in 0..m {
                    if pos != r {
                        self.xb[pos] -= dir * alpha[pos] * limit;
                    }
                }
                let old = self.basic[r];
                self.state[old] = if hits_upper {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                };
                self.pos_in_basis[old] = usize::MAX;
                self.basic[r] = q;
                self.pos_in_basis[q] = r;
                self.state[q] = VarState::Basic;
                self.xb[r] = entering_value;

                // binv <- E binv with E the elementary pivot matrix.
                let (head, tail) = self.binv.split_at_mut(r * m);
                let (pivot_row, rest) = tail.split_at_mut(m);
                for v in pivot_row.iter_mut() {
                    *v /= piv;
                }
                for (pos, chunk) in head.chunks_exact_mut(m).enumerate() {
                    let f = alpha[pos];
                    if f != 0.0 {
                        for (c, p) in chunk.iter_mut().zip(pivot_row.iter()) {
                            *c -= f * p;
                        }
                    }
                }
                for (off, chunk) in rest.chunks_exact_mut(m).enumerate() {
                    let f = alpha[r + 1 + off];
                    if f != 0.0 {
                        for (c, p) in chunk.iter_mut().zip(pivot_row.iter()) {
                            *c -= f * p;
                        }
                    }
                }

                self.pivots_since_refactor += 1;
                if self.pivots_since_refactor >= REFACTOR_INTERVAL && !self.refactor() {
                    return StepResult::Singular;
                }
                StepResult::Moved
            }
        }
    }
}

enum StepResult {
    Moved,
    Unbounded,
    Singular,
}

enum Phase1Outcome {
    Feasible,
    Infeasible,
    Stopped,
}

fn identity(m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        out[i * m + i] = 1.0;
    }
    out
}

/// Gauss-Jordan inverse with partial pivoting; None if singular.
fn invert(mat: &mut [f64], m: usize) -> Option<Vec<f64>> {
    let mut inv = identity(m);
    for col in 0..m {
        let mut piv_row = col;
        let mut piv_val = mat[col * m + col].abs();
        for r in (col + 1)..m {
            let v = mat[r * m + col].abs();
            if v > piv_val {
                piv_val = v;
                piv_row = r;
            }
        }
        if piv_val <= 1e-12 {
            return None;
        }
        if piv_row != col {
            for k in 0..m {
                mat.swap(col * m + k, piv_row * m + k);
                inv.swap(col * m + k, piv_row * m + k);
            }
        }
        let piv = mat[col * m + col];
        for k in 0..m {
            mat[col * m + k] /= piv;
            inv[col * m + k] /= piv;
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let f = mat[r * m + col];
            if f != 0.0 {
                for k in 0..m {
                    mat[r * m + k] -= f * mat[col * m + k];
                    inv[r * m + k] -= f * inv[col * m + k];
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::milp::{MilpCol, MilpProblem, MilpRow};

    fn col(name: &str, lower: f64, upper: f64, obj: f64) -> MilpCol {
        MilpCol {
            name: name.into(),
            lower,
            upper,
            integer: false,
            objective: obj,
        }
    }

    fn row(name: &str, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> MilpRow {
        MilpRow {
            name: name.into(),
            terms,
            sense,
            rhs,
        }
    }

    fn solve(p: &MilpProblem) -> LpSolution {
        let solver = LpSolver::new(p);
        let lower: Vec<f64> = p.cols.iter().map(|c| c.lower).collect();
        let upper: Vec<f64> = p.cols.iter().map(|c| c.upper).collect();
        solver.solve(&lower, &upper, None, &LpOptions::default()).0
    }

    #[test]
    fn maximization_as_negated_min() {
        // max 3x + 2y st x + y <= 4, x + 3y <= 6, x,y >= 0 -> (4, 0), obj 12.
        let p = MilpProblem {
            cols: vec![
                col("x", 0.0, f64::INFINITY, -3.0),
                col("y", 0.0, f64::INFINITY, -2.0),
            ],
            rows: vec![
                row("c1", vec![(0, 1.0), (1, 1.0)], Sense::Le, 4.0),
                row("c2", vec![(0, 1.0), (1, 3.0)], Sense::Le, 6.0),
            ],
        };
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 12.0).abs() < 1e-9);
        assert!((s.x[0] - 4.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_bounds() {
        // min x + y st x + y = 5, 1 <= x <= 3, 0 <= y <= 10.
        let p = MilpProblem {
            cols: vec![col("x", 1.0, 3.0, 1.0), col("y", 0.0, 10.0, 1.0)],
            rows: vec![row("sum", vec![(0, 1.0), (1, 1.0)], Sense::Eq, 5.0)],
        };
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 5.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        let p = MilpProblem {
            cols: vec![col("x", 0.0, 1.0, 1.0)],
            rows: vec![row("need", vec![(0, 1.0)], Sense::Ge, 2.0)],
        };
        assert_eq!(solve(&p).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let p = MilpProblem {
            cols: vec![col("x", 0.0, f64::INFINITY, -1.0)],
            rows: vec![row("slacky", vec![(0, -1.0)], Sense::Le, 1.0)],
        };
        assert_eq!(solve(&p).status, LpStatus::Unbounded);
    }

    #[test]
    fn degenerate_cycling_guard() {
        // Beale's classic cycling example for naive pivoting.
        let p = MilpProblem {
            cols: vec![
                col("x1", 0.0, f64::INFINITY, -0.75),
                col("x2", 0.0, f64::INFINITY, 150.0),
                col("x3", 0.0, f64::INFINITY, -0.02),
                col("x4", 0.0, f64::INFINITY, 6.0),
            ],
            rows: vec![
                row(
                    "r1",
                    vec![(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)],
                    Sense::Le,
                    0.0,
                ),
                row(
                    "r2",
                    vec![(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)],
                    Sense::Le,
                    0.0,
                ),
                row("r3", vec![(2, 1.0)], Sense::Le, 1.0),
            ],
        };
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 0.05).abs() < 1e-9);
    }

    #[test]
    fn negative_lower_bounds() {
        // min x st x >= -5, x + y >= -2, y <= 0 free-ish ranges.
        let p = MilpProblem {
            cols: vec![col("x", -5.0, 5.0, 1.0), col("y", -4.0, 0.0, 0.0)],
            rows: vec![row("c", vec![(0, 1.0), (1, 1.0)], Sense::Ge, -2.0)],
        };
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 2.0).abs() < 1e-9, "x should reach -2: {s:?}");
    }

    #[test]
    fn warm_start_after_bound_tightening() {
        // min -x - y st x + 2y <= 4, 4x + 2y <= 12.
        let p = MilpProblem {
            cols: vec![
                col("x", 0.0, f64::INFINITY, -1.0),
                col("y", 0.0, f64::INFINITY, -1.0),
            ],
            rows: vec![
                row("c1", vec![(0, 1.0), (1, 2.0)], Sense::Le, 4.0),
                row("c2", vec![(0, 4.0), (1, 2.0)], Sense::Le, 12.0),
            ],
        };
        let solver = LpSolver::new(&p);
        let lower = vec![0.0, 0.0];
        let upper = vec![f64::INFINITY, f64::INFINITY];
        let (s1, basis) = solver.solve(&lower, &upper, None, &LpOptions::default());
        assert_eq!(s1.status, LpStatus::Optimal);
        // Tighten x and re-solve warm.
        let upper2 = vec![1.0, f64::INFINITY];
        let (s2, _) = solver.solve(&lower, &upper2, basis.as_ref(), &LpOptions::default());
        assert_eq!(s2.status, LpStatus::Optimal);
        assert!(s2.x[0] <= 1.0 + 1e-9);
        // Against a cold solve of the same problem.
        let (s3, _) = solver.solve(&lower, &upper2, None, &LpOptions::default());
        assert!((s2.objective - s3.objective).abs() < 1e-9);
    }
}
