//! Generalized Gauss-Seidel sweeps for the AVE, exploiting that the scalar
//! equation a x - |x| = s with a > 1 splits by the sign of s, plus the
//! preconditioned variant that multiplies the system by P_beta = D + beta F
//! (with A = D - E - F) before sweeping.

use super::{diverged, finish};
use crate::core::mat::{self, Mat};
use crate::core::{AveProblem, SolveOutcome, SolverConfig, Status};

fn diag_gt_one(a: &Mat) -> bool {
    (0..a.rows()).all(|i| a[(i, i)] > 1.0 + 1e-12)
}

fn not_applicable(p: &AveProblem, why: &str) -> SolveOutcome {
    SolveOutcome {
        status: Status::NotApplicable,
        x: vec![0.0; p.n()],
        residual_inf: f64::NAN,
        iterations: 0,
        linear_solves: 0,
        trace: None,
        method: Some(why.to_string()),
    }
}

/// One outer iteration = one full sweep: component i is updated from
/// s = b_i - sum_{j<i} a_ij x_j^{new} - sum_{j>i} a_ij x_j^{old} by
/// x_i = s / (a_ii - 1) when s >= 0 and s / (a_ii + 1) otherwise.
/// Requires every a_ii > 1.
pub fn solve_ggs(p: &AveProblem, x0: &[f64], cfg: &SolverConfig) -> SolveOutcome {
    if !diag_gt_one(&p.a) {
        return not_applicable(p, "generalized Gauss-Seidel needs a_ii > 1 for all i");
    }
    let n = p.n();
    let mut x = x0.to_vec();
    let mut trace = cfg.trace.then(Vec::new);
    for iter in 1..=cfg.max_iters {
        for i in 0..n {
            let mut s = p.b[i];
            for j in 0..n {
                if j != i {
                    s -= p.a[(i, j)] * x[j];
                }
            }
            x[i] = if s >= 0.0 {
                s / (p.a[(i, i)] - 1.0)
            } else {
                s / (p.a[(i, i)] + 1.0)
            };
        }
        let r = p.residual_inf(&x);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if p.converged(&x, cfg.tol) {
            return finish(p, Status::Converged, x, iter, 0, trace);
        }
        if diverged(p, r) {
            return finish(p, Status::Diverged, x, iter, 0, trace);
        }
    }
    finish(p, Status::MaxIters, x, cfg.max_iters, 0, trace)
}

/// Preconditioned sweeps on P_beta A x - P_beta |x| = P_beta b with
/// P_beta = D + beta F. Writing P_beta A = D~ - E~ - F~, each iteration
/// solves the lower-triangular absolute-value system
///   D^-1 (D~ - E~) x - |x| = beta D^-1 F |x^k| + D^-1 F~ x^k + D^-1 P_beta b
/// by forward substitution. Intended for Z-matrices A; the a_ii > 1
/// requirement is enforced, the Z-pattern is only noted.
pub fn solve_pggs(p: &AveProblem, beta: f64, x0: &[f64], cfg: &SolverConfig) -> SolveOutcome {
    if !diag_gt_one(&p.a) {
        return not_applicable(p, "preconditioned Gauss-Seidel needs a_ii > 1 for all i");
    }
    let n = p.n();
    let is_z_matrix = (0..n).all(|i| (0..n).all(|j| i == j || p.a[(i, j)] <= 1e-12));

    // A = D - E - F with E, F the negated strict triangles
    let mut f_upper = Mat::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            f_upper[(i, j)] = -p.a[(i, j)];
        }
    }
    let mut p_beta = f_upper.scale(beta);
    for i in 0..n {
        p_beta[(i, i)] += p.a[(i, i)];
    }
    let pa = p_beta.matmul(&p.a);
    let pb = p_beta.matvec(&p.b);
    // P_beta A = D~ - E~ - F~; build the lower-triangular L = D^-1 (D~ - E~)
    // and the upper remainder U~ = D^-1 F~
    let mut l = Mat::zeros(n, n);
    let mut u = Mat::zeros(n, n);
    for i in 0..n {
        let d = p.a[(i, i)];
        for j in 0..=i {
            l[(i, j)] = pa[(i, j)] / d;
        }
        for j in i + 1..n {
            u[(i, j)] = -pa[(i, j)] / d; // F~ = -(strict upper of P_beta A)
        }
    }

    let mut x = x0.to_vec();
    let mut trace = cfg.trace.then(Vec::new);
    for iter in 1..=cfg.max_iters {
        // rhs = beta D^-1 F |x| + D^-1 F~ x + D^-1 P_beta b
        let absx = mat::vec_abs(&x);
        let f_abs = f_upper.matvec(&absx);
        let ux = u.matvec(&x);
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = beta * f_abs[i] / p.a[(i, i)] + ux[i] + pb[i] / p.a[(i, i)];
        }
        // forward substitution on L x - |x| = rhs
        let mut x_new = vec![0.0; n];
        for i in 0..n {
            let mut s = rhs[i];
            for j in 0..i {
                s -= l[(i, j)] * x_new[j];
            }
            let lii = l[(i, i)];
            // scalar equation lii * t - |t| = s
            let pos = s / (lii - 1.0);
            let neg = s / (lii + 1.0);
            x_new[i] = if lii > 1.0 {
                if s >= 0.0 {
                    pos
                } else {
                    neg
                }
            } else if pos.is_finite() && pos >= 0.0 {
                pos
            } else if neg.is_finite() && neg < 0.0 {
                neg
            } else {
                return finish(p, Status::SingularStep, x, iter - 1, 0, trace);
            };
        }
        x = x_new;
        let r = p.residual_inf(&x);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if p.converged(&x, cfg.tol) {
            let mut out = finish(p, Status::Converged, x, iter, 0, trace);
            if !is_z_matrix {
                out.method = Some("warning: A is not a Z-matrix".into());
            }
            return out;
        }
        if diverged(p, r) {
            return finish(p, Status::Diverged, x, iter, 0, trace);
        }
    }
    finish(p, Status::MaxIters, x, cfg.max_iters, 0, trace)
}
