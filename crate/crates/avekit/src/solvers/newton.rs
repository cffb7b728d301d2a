//! Generalized Newton iterations: the classic step x <- (A - D(x))^-1 b, the
//! modified step through (A + I - D(x))^-1 (x + b), the relaxed variant with
//! parameter theta, and the inexact variant with a Gauss-Seidel inner solver.

use std::collections::HashSet;

use super::{a_minus_diag, diverged, finish};
use crate::core::linalg::LuFactors;
use crate::core::mat::{self};
use crate::core::{sign_diag, AveProblem, SignVector, SolveOutcome, SolverConfig, Status};
use crate::AveError;

/// Semismooth Newton iteration x^{k+1} = (A - D(x^k))^-1 b. The sign pattern
/// stabilizing makes the next iterate an exact fixed point; a previously
/// visited pattern recurring without convergence means a cycle (Stalled).
pub fn solve_newton(p: &AveProblem, x0: &[f64], cfg: &SolverConfig) -> SolveOutcome {
    let mut x = x0.to_vec();
    let mut trace = cfg.trace.then(Vec::new);
    let mut seen: HashSet<SignVector> = HashSet::new();
    let mut solves = 0usize;
    let mut last_sign: Option<SignVector> = None;

    for iter in 1..=cfg.max_iters {
        let s = sign_diag(&x);
        if last_sign.as_ref() == Some(&s) {
            // exact fixed point by sign pattern; residual decides
            let status = if p.converged(&x, cfg.tol) {
                Status::Converged
            } else {
                Status::Stalled
            };
            return finish(p, status, x, iter - 1, solves, trace);
        }
        if !seen.insert(s.clone()) {
            let status = if p.converged(&x, cfg.tol) {
                Status::Converged
            } else {
                Status::Stalled
            };
            return finish(p, status, x, iter - 1, solves, trace);
        }
        let m = a_minus_diag(&p.a, &s);
        let fac = match LuFactors::factor(&m) {
            Ok(f) => f,
            Err(_) => return finish(p, Status::SingularStep, x, iter - 1, solves, trace),
        };
        x = fac.solve(&p.b);
        solves += 1;
        let r = p.residual_inf(&x);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if p.converged(&x, cfg.tol) {
            return finish(p, Status::Converged, x, iter, solves, trace);
        }
        if diverged(p, r) {
            return finish(p, Status::Diverged, x, iter, solves, trace);
        }
        last_sign = Some(s);
    }
    finish(p, Status::MaxIters, x, cfg.max_iters, solves, trace)
}

/// Modified step: x^{k+1} = (A + I - D(x^k))^-1 (x^k + b).
pub fn solve_newton_modified(p: &AveProblem, x0: &[f64], cfg: &SolverConfig) -> SolveOutcome {
    let n = p.n();
    let mut x = x0.to_vec();
    let mut trace = cfg.trace.then(Vec::new);
    let mut solves = 0usize;

    for iter in 1..=cfg.max_iters {
        let s = sign_diag(&x);
        let mut shift = vec![1.0; n];
        for i in 0..n {
            shift[i] -= s.0[i] as f64;
        }
        let m = p.a.add_diag(&shift);
        let fac = match LuFactors::factor(&m) {
            Ok(f) => f,
            Err(_) => return finish(p, Status::SingularStep, x, iter - 1, solves, trace),
        };
        let rhs = mat::vec_add(&x, &p.b);
        let x_new = fac.solve(&rhs);
        solves += 1;
        let r = p.residual_inf(&x_new);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if p.converged(&x_new, cfg.tol) {
            return finish(p, Status::Converged, x_new, iter, solves, trace);
        }
        if diverged(p, r) {
            return finish(p, Status::Diverged, x_new, iter, solves, trace);
        }
        if mat::dist_inf(&x_new, &x) <= 1e-15 * (1.0 + mat::norm_inf(&x)) {
            return finish(p, Status::Stalled, x_new, iter, solves, trace);
        }
        x = x_new;
    }
    finish(p, Status::MaxIters, x, cfg.max_iters, solves, trace)
}

/// Relaxed step: x^{k+1} = (A - theta D(x^k))^-1 (b + (1 - theta) |x^k|).
/// theta = 1 reproduces the Newton trajectory exactly; theta = 0 is Picard.
pub fn solve_newton_relaxed(
    p: &AveProblem,
    theta: f64,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, AveError> {
    if !(theta >= 0.0) {
        return Err(AveError::Parameter(format!(
            "relaxation theta must be >= 0, got {theta}"
        )));
    }
    let n = p.n();
    let mut x = x0.to_vec();
    let mut trace = cfg.trace.then(Vec::new);
    let mut solves = 0usize;

    for iter in 1..=cfg.max_iters {
        let s = sign_diag(&x);
        let shift: Vec<f64> = (0..n).map(|i| -theta * s.0[i] as f64).collect();
        let m = p.a.add_diag(&shift);
        let fac = match LuFactors::factor(&m) {
            Ok(f) => f,
            Err(_) => return Ok(finish(p, Status::SingularStep, x, iter - 1, solves, trace)),
        };
        let rhs: Vec<f64> = (0..n)
            .map(|i| p.b[i] + (1.0 - theta) * x[i].abs())
            .collect();
        let x_new = fac.solve(&rhs);
        solves += 1;
        let r = p.residual_inf(&x_new);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if p.converged(&x_new, cfg.tol) {
            return Ok(finish(p, Status::Converged, x_new, iter, solves, trace));
        }
        if diverged(p, r) {
            return Ok(finish(p, Status::Diverged, x_new, iter, solves, trace));
        }
        if mat::dist_inf(&x_new, &x) <= 1e-15 * (1.0 + mat::norm_inf(&x)) {
            return Ok(finish(p, Status::Stalled, x_new, iter, solves, trace));
        }
        x = x_new;
    }
    Ok(finish(p, Status::MaxIters, x, cfg.max_iters, solves, trace))
}

/// Inexact Newton: the linearized system (A - D(x^k)) x = b is solved by
/// Gauss-Seidel sweeps until the inner residual drops below
/// theta_res * ||f(x^k)||; theta_res = 0 (or a stalling inner loop) falls
/// back to a direct solve.
pub fn solve_newton_inexact(
    p: &AveProblem,
    theta_res: f64,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, AveError> {
    if !(0.0..1.0).contains(&theta_res) {
        return Err(AveError::Parameter(format!(
            "residual tolerance theta must satisfy 0 <= theta < 1, got {theta_res}"
        )));
    }
    let n = p.n();
    let mut x = x0.to_vec();
    let mut trace = cfg.trace.then(Vec::new);
    let mut solves = 0usize;
    let inner_cap = 50 * n;

    for iter in 1..=cfg.max_iters {
        let s = sign_diag(&x);
        let m = a_minus_diag(&p.a, &s);
        let outer_res = mat::norm_two(&p.residual(&x).expect("dims fixed"));
        let target = theta_res * outer_res;

        let mut x_new = None;
        if theta_res > 0.0 && (0..n).all(|i| m[(i, i)].abs() > 1e-13 * m.norm_inf()) {
            // Gauss-Seidel sweeps, warm-started from the outer iterate
            let mut z = x.clone();
            for _sweep in 0..inner_cap {
                for i in 0..n {
                    let mut acc = p.b[i];
                    for j in 0..n {
                        if j != i {
                            acc -= m[(i, j)] * z[j];
                        }
                    }
                    z[i] = acc / m[(i, i)];
                }
                let inner = mat::norm_two(&mat::vec_sub(&m.matvec(&z), &p.b));
                if inner <= target {
                    x_new = Some(z.clone());
                    break;
                }
                if !inner.is_finite() {
                    break;
                }
            }
        }
        let x_next = match x_new {
            Some(z) => z,
            None => {
                let fac = match LuFactors::factor(&m) {
                    Ok(f) => f,
                    Err(_) => {
                        return Ok(finish(p, Status::SingularStep, x, iter - 1, solves, trace))
                    }
                };
                fac.solve(&p.b)
            }
        };
        solves += 1;
        let r = p.residual_inf(&x_next);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if p.converged(&x_next, cfg.tol) {
            return Ok(finish(p, Status::Converged, x_next, iter, solves, trace));
        }
        if diverged(p, r) {
            return Ok(finish(p, Status::Diverged, x_next, iter, solves, trace));
        }
        x = x_next;
    }
    Ok(finish(p, Status::MaxIters, x, cfg.max_iters, solves, trace))
}
