//! Two-phase primal simplex on a dense tableau.
//!
//! The solver returns vertex (basic) solutions together with the optimal
//! basis, exposes single-pivot adjacency enumeration, and certifies
//! unboundedness with a ray. Pricing is Dantzig by default; whenever the
//! objective stalls on degenerate pivots the rule switches to Bland, which
//! prevents cycling.

use super::mat::{self, Mat};

const EPS: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;
const DEGENERATE_STREAK: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub kind: RowKind,
    pub rhs: f64,
}

/// min c^T x subject to rows of the form g^T x >= h or g^T x = h.
/// Variables are free unless flagged in `nonneg`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub nonneg: Vec<bool>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; num_vars],
            rows: Vec::new(),
            nonneg: vec![false; num_vars],
        }
    }

    pub fn minimize(mut self, c: &[f64]) -> Self {
        assert_eq!(c.len(), self.objective.len());
        self.objective = c.to_vec();
        self
    }

    pub fn ge(mut self, coeffs: &[f64], rhs: f64) -> Self {
        self.push_row(coeffs, RowKind::Ge, rhs);
        self
    }

    pub fn eq(mut self, coeffs: &[f64], rhs: f64) -> Self {
        self.push_row(coeffs, RowKind::Eq, rhs);
        self
    }

    pub fn push_row(&mut self, coeffs: &[f64], kind: RowKind, rhs: f64) {
        assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push(LpRow {
            coeffs: coeffs.to_vec(),
            kind,
            rhs,
        });
    }

    pub fn nonneg_all(mut self) -> Self {
        self.nonneg.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn nonneg_var(mut self, j: usize) -> Self {
        self.nonneg[j] = true;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Feasibility of a point against all rows, within `tol`.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        for (j, &nn) in self.nonneg.iter().enumerate() {
            if nn && x[j] < -tol {
                return false;
            }
        }
        self.rows.iter().all(|row| {
            let v = mat::dot(&row.coeffs, x);
            match row.kind {
                RowKind::Ge => v >= row.rhs - tol,
                RowKind::Eq => (v - row.rhs).abs() <= tol,
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Pivot budget exhausted before a conclusion.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Vertex solution in the original variables (valid when Optimal).
    pub x: Vec<f64>,
    pub objective: f64,
    /// Standard-form indices of the basic columns (valid when Optimal).
    pub basis: Vec<usize>,
    /// Unbounded direction in the original variables (valid when Unbounded).
    pub ray: Option<Vec<f64>>,
    state: Option<Simplex>,
}

impl LpSolution {
    /// Vertices reachable from the optimal vertex by one simplex edge.
    /// A degenerate pivot lands on another basis of the same vertex; each
    /// such basis is explored once (visited set), so edges hidden behind
    /// degeneracy are still traversed. Rays and duplicates are dropped.
    pub fn adjacent_vertices(&self) -> Vec<Vec<f64>> {
        const BASIS_BUDGET: usize = 256;
        let Some(state) = &self.state else {
            return Vec::new();
        };
        let mut out: Vec<Vec<f64>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut sorted0 = state.basis.clone();
        sorted0.sort_unstable();
        seen.insert(sorted0);
        let mut queue = vec![state.clone()];
        while let Some(st) = queue.pop() {
            for j in 0..st.ncols {
                if st.is_artificial(j) || st.basis.contains(&j) {
                    continue;
                }
                let mut probe = st.clone();
                if probe.pivot_column(j).is_none() {
                    continue; // edge is a ray
                }
                let x = probe.extract_x();
                if mat::dist_inf(&x, &self.x) <= 1e-9 {
                    // same vertex under a different basis
                    let mut key = probe.basis.clone();
                    key.sort_unstable();
                    if seen.len() < BASIS_BUDGET && seen.insert(key) {
                        queue.push(probe);
                    }
                    continue;
                }
                if out.iter().all(|v| mat::dist_inf(v, &x) > 1e-9) {
                    out.push(x);
                }
            }
        }
        out
    }
}

fn failed(status: LpStatus, nvars: usize) -> LpSolution {
    LpSolution {
        status,
        x: vec![0.0; nvars],
        objective: f64::NAN,
        basis: Vec::new(),
        ray: None,
        state: None,
    }
}

/// Column layout of the standard form: how each original variable maps to
/// one nonnegative column (or a split pair for free variables).
#[derive(Clone, Debug)]
enum VarCols {
    Single(usize),
    Split(usize, usize),
}

#[derive(Clone, Debug)]
struct Simplex {
    t: Mat,             // m x (ncols + 1); last column is the rhs
    basis: Vec<usize>,  // basic column per row
    obj: Vec<f64>,      // reduced costs, length ncols + 1 (last = -objval)
    ncols: usize,
    art_start: usize,   // columns >= art_start are artificial
    var_cols: Vec<VarCols>,
    pivots_left: usize,
}

impl Simplex {
    fn is_artificial(&self, j: usize) -> bool {
        j >= self.art_start
    }

    fn rhs(&self, i: usize) -> f64 {
        self.t[(i, self.ncols)]
    }

    /// Ratio test + pivot for a chosen entering column. Returns the leaving
    /// row, or None when the column certifies unboundedness.
    fn pivot_column(&mut self, j: usize) -> Option<usize> {
        let m = self.t.rows();
        let mut best: Option<(f64, usize, usize)> = None; // (ratio, basis var, row)
        for i in 0..m {
            let a = self.t[(i, j)];
            if a > EPS {
                let ratio = self.rhs(i) / a;
                let key = (ratio, self.basis[i], i);
                let better = match best {
                    None => true,
                    Some((r, bv, _)) => {
                        ratio < r - EPS || (ratio < r + EPS && self.basis[i] < bv)
                    }
                };
                if better {
                    best = Some(key);
                }
            }
        }
        let (_, _, row) = best?;
        self.do_pivot(row, j);
        Some(row)
    }

    fn do_pivot(&mut self, row: usize, col: usize) {
        let m = self.t.rows();
        let w = self.ncols + 1;
        let pivot = self.t[(row, col)];
        for j in 0..w {
            self.t[(row, j)] /= pivot;
        }
        self.t[(row, col)] = 1.0;
        for i in 0..m {
            if i == row {
                continue;
            }
            let f = self.t[(i, col)];
            if f != 0.0 {
                for j in 0..w {
                    self.t[(i, j)] -= f * self.t[(row, j)];
                }
                self.t[(i, col)] = 0.0;
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for j in 0..w {
                self.obj[j] -= f * self.t[(row, j)];
            }
            self.obj[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Recompute the reduced-cost row for a cost vector over standard columns.
    fn price(&mut self, costs: &[f64]) {
        let m = self.t.rows();
        let w = self.ncols + 1;
        self.obj = vec![0.0; w];
        self.obj[..self.ncols].copy_from_slice(costs);
        for i in 0..m {
            let cb = costs[self.basis[i]];
            if cb != 0.0 {
                for j in 0..w {
                    self.obj[j] -= cb * self.t[(i, j)];
                }
            }
        }
    }

    fn objective_value(&self) -> f64 {
        -self.obj[self.ncols]
    }

    /// Run simplex iterations on the current objective row.
    /// `allowed` filters the columns that may enter.
    fn optimize(&mut self, allowed: impl Fn(&Self, usize) -> bool) -> SimplexOutcome {
        let mut stalled = 0usize;
        let mut bland = false;
        let mut last_obj = self.objective_value();
        loop {
            if self.pivots_left == 0 {
                return SimplexOutcome::PivotBudget;
            }
            let mut entering: Option<usize> = None;
            if bland {
                for j in 0..self.ncols {
                    if self.obj[j] < -EPS && allowed(self, j) {
                        entering = Some(j);
                        break;
                    }
                }
            } else {
                let mut best = -EPS;
                for j in 0..self.ncols {
                    if self.obj[j] < best && allowed(self, j) {
                        best = self.obj[j];
                        entering = Some(j);
                    }
                }
            }
            let Some(j) = entering else {
                return SimplexOutcome::Optimal;
            };
            if self.pivot_column(j).is_none() {
                return SimplexOutcome::Unbounded(j);
            }
            self.pivots_left -= 1;
            let obj = self.objective_value();
            if obj < last_obj - 1e-12 {
                stalled = 0;
                bland = false;
            } else {
                stalled += 1;
                if stalled >= DEGENERATE_STREAK {
                    bland = true;
                }
            }
            last_obj = obj;
        }
    }

    /// Current basic solution mapped back to the original variables.
    /// Entries at roundoff level are snapped to exact zero so that sign
    /// logic downstream sees the vertex, not pivot noise.
    fn extract_x(&self) -> Vec<f64> {
        let mut std_vals = vec![0.0; self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            std_vals[b] = self.rhs(i);
        }
        let mut x: Vec<f64> = self
            .var_cols
            .iter()
            .map(|vc| match vc {
                VarCols::Single(j) => std_vals[*j],
                VarCols::Split(p, q) => std_vals[*p] - std_vals[*q],
            })
            .collect();
        let scale = 1.0 + mat::norm_inf(&x);
        for v in &mut x {
            if v.abs() <= 1e-11 * scale {
                *v = 0.0;
            }
        }
        x
    }

    /// Unbounded direction for an entering column, in original variables.
    fn extract_ray(&self, entering: usize) -> Vec<f64> {
        let mut d = vec![0.0; self.ncols];
        d[entering] = 1.0;
        for (i, &b) in self.basis.iter().enumerate() {
            d[b] = -self.t[(i, entering)];
        }
        self.var_cols
            .iter()
            .map(|vc| match vc {
                VarCols::Single(j) => d[*j],
                VarCols::Split(p, q) => d[*p] - d[*q],
            })
            .collect()
    }
}

enum SimplexOutcome {
    Optimal,
    Unbounded(usize),
    PivotBudget,
}

/// Two-phase primal simplex. See module docs for the pivoting rules.
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    let nvars = lp.num_vars();
    let m = lp.rows.len();

    // standard-form columns: structural first, then slacks, then artificials
    let mut var_cols = Vec::with_capacity(nvars);
    let mut ncols = 0usize;
    for &nn in &lp.nonneg {
        if nn {
            var_cols.push(VarCols::Single(ncols));
            ncols += 1;
        } else {
            var_cols.push(VarCols::Split(ncols, ncols + 1));
            ncols += 2;
        }
    }
    let slack_start = ncols;
    let num_slacks = lp.rows.iter().filter(|r| r.kind == RowKind::Ge).count();
    ncols += num_slacks;
    let art_start = ncols;

    // assemble rows; flip signs so every rhs is nonnegative
    let mut rows_data: Vec<(Vec<f64>, f64, Option<usize>)> = Vec::with_capacity(m);
    let mut slack_idx = slack_start;
    for row in &lp.rows {
        let mut coeffs = vec![0.0; art_start];
        for (v, vc) in row.coeffs.iter().zip(&var_cols) {
            match vc {
                VarCols::Single(j) => coeffs[*j] = *v,
                VarCols::Split(p, q) => {
                    coeffs[*p] = *v;
                    coeffs[*q] = -*v;
                }
            }
        }
        let mut slack_col = None;
        if row.kind == RowKind::Ge {
            coeffs[slack_idx] = -1.0; // surplus
            slack_col = Some(slack_idx);
            slack_idx += 1;
        }
        let mut rhs = row.rhs;
        if rhs < 0.0 {
            coeffs.iter_mut().for_each(|c| *c = -*c);
            rhs = -rhs;
        }
        rows_data.push((coeffs, rhs, slack_col));
    }

    // initial basis: a slack column with +1 coefficient where available,
    // otherwise a fresh artificial
    let mut basis = vec![usize::MAX; m];
    let mut num_art = 0usize;
    for (i, (coeffs, _, slack_col)) in rows_data.iter().enumerate() {
        if let Some(sc) = slack_col {
            if coeffs[*sc] > 0.5 {
                basis[i] = *sc;
                continue;
            }
        }
        basis[i] = art_start + num_art;
        num_art += 1;
    }
    let total_cols = art_start + num_art;

    let mut t = Mat::zeros(m, total_cols + 1);
    for (i, (coeffs, rhs, _)) in rows_data.iter().enumerate() {
        for (j, &c) in coeffs.iter().enumerate() {
            t[(i, j)] = c;
        }
        if basis[i] >= art_start {
            t[(i, basis[i])] = 1.0;
        }
        t[(i, total_cols)] = *rhs;
    }

    let mut sx = Simplex {
        t,
        basis,
        obj: Vec::new(),
        ncols: total_cols,
        art_start,
        var_cols,
        pivots_left: 50_000 * m.max(1),
    };

    // phase 1
    if num_art > 0 {
        let mut phase1 = vec![0.0; total_cols];
        for c in phase1.iter_mut().skip(art_start) {
            *c = 1.0;
        }
        sx.price(&phase1);
        // artificials that leave the basis may not re-enter
        match sx.optimize(|s, j| !s.is_artificial(j)) {
            SimplexOutcome::Optimal => {}
            SimplexOutcome::Unbounded(_) => {
                // impossible in exact arithmetic (the objective is bounded
                // below by zero); reaching it means roundoff-level pivots
                if sx.objective_value() > FEAS_TOL {
                    return failed(LpStatus::Unknown, nvars);
                }
            }
            SimplexOutcome::PivotBudget => return failed(LpStatus::Unknown, nvars),
        }
        if sx.objective_value() > FEAS_TOL {
            return failed(LpStatus::Infeasible, nvars);
        }
        // drive artificials out of the basis where possible
        for i in 0..m {
            if sx.basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| sx.t[(i, j)].abs() > 1e-7) {
                    sx.do_pivot(i, j);
                }
            }
        }
    }

    // phase 2
    let mut costs = vec![0.0; total_cols];
    for (c, vc) in lp.objective.iter().zip(&sx.var_cols.clone()) {
        match vc {
            VarCols::Single(j) => costs[*j] = *c,
            VarCols::Split(p, q) => {
                costs[*p] = *c;
                costs[*q] = -*c;
            }
        }
    }
    sx.price(&costs);
    let outcome = sx.optimize(|s, j| !s.is_artificial(j));
    match outcome {
        SimplexOutcome::Optimal => {
            let x = sx.extract_x();
            let objective = mat::dot(&lp.objective, &x);
            let basis = sx.basis.clone();
            LpSolution {
                status: LpStatus::Optimal,
                x,
                objective,
                basis,
                ray: None,
                state: Some(sx),
            }
        }
        SimplexOutcome::Unbounded(j) => {
            let ray = sx.extract_ray(j);
            let mut sol = failed(LpStatus::Unbounded, nvars);
            sol.x = sx.extract_x();
            sol.ray = Some(ray);
            sol
        }
        SimplexOutcome::PivotBudget => failed(LpStatus::Unknown, nvars),
    }
}
