//! Picard fixed-point iterations: the basic scheme x <- A^-1 (|x| + b), the
//! shifted variant through (A + Omega)^-1, and the Picard-HSS scheme that
//! replaces the exact solve with inner Hermitian/skew-Hermitian half-steps.

use super::{diverged, finish};
use crate::core::linalg::{sym_eigenvalues, LuFactors};
use crate::core::mat::{self, Mat};
use crate::core::{AveProblem, SolveOutcome, SolverConfig, Status};
use crate::AveError;

/// x^{k+1} = A^-1 (|x^k| + b), started from A^-1 b unless overridden.
/// A is factored once and reused.
pub fn solve_picard(p: &AveProblem, x0: Option<&[f64]>, cfg: &SolverConfig) -> SolveOutcome {
    let fac = match LuFactors::factor(&p.a) {
        Ok(f) => f,
        Err(_) => {
            return finish(p, Status::SingularStep, vec![0.0; p.n()], 0, 0, None);
        }
    };
    let mut solves = 1usize; // factorization charged once
    let mut x = match x0 {
        Some(v) => v.to_vec(),
        None => {
            solves += 1;
            fac.solve(&p.b)
        }
    };
    let mut trace = cfg.trace.then(Vec::new);
    for iter in 1..=cfg.max_iters {
        if p.converged(&x, cfg.tol) {
            return finish(p, Status::Converged, x, iter - 1, solves, trace);
        }
        let rhs = mat::vec_add(&mat::vec_abs(&x), &p.b);
        x = fac.solve(&rhs);
        solves += 1;
        let r = p.residual_inf(&x);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if diverged(p, r) {
            return finish(p, Status::Diverged, x, iter, solves, trace);
        }
    }
    let status = if p.converged(&x, cfg.tol) {
        Status::Converged
    } else {
        Status::MaxIters
    };
    finish(p, status, x, cfg.max_iters, solves, trace)
}

/// x^{k+1} = (A + Omega)^-1 (Omega x^k + |x^k| + b); Omega = 0 reproduces the
/// plain Picard iteration exactly.
pub fn solve_picard_omega(
    p: &AveProblem,
    omega: &Mat,
    x0: Option<&[f64]>,
    cfg: &SolverConfig,
) -> SolveOutcome {
    let n = p.n();
    assert!(omega.is_square() && omega.rows() == n, "Omega must be n x n");
    let shifted = p.a.add(omega);
    let fac = match LuFactors::factor(&shifted) {
        Ok(f) => f,
        Err(_) => return finish(p, Status::SingularStep, vec![0.0; n], 0, 0, None),
    };
    let mut solves = 1usize;
    let mut x = match x0 {
        Some(v) => v.to_vec(),
        None => {
            solves += 1;
            fac.solve(&p.b)
        }
    };
    let mut trace = cfg.trace.then(Vec::new);
    for iter in 1..=cfg.max_iters {
        if p.converged(&x, cfg.tol) {
            return finish(p, Status::Converged, x, iter - 1, solves, trace);
        }
        let mut rhs = omega.matvec(&x);
        for i in 0..n {
            rhs[i] += x[i].abs() + p.b[i];
        }
        x = fac.solve(&rhs);
        solves += 1;
        let r = p.residual_inf(&x);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if diverged(p, r) {
            return finish(p, Status::Diverged, x, iter, solves, trace);
        }
    }
    let status = if p.converged(&x, cfg.tol) {
        Status::Converged
    } else {
        Status::MaxIters
    };
    finish(p, status, x, cfg.max_iters, solves, trace)
}

/// Picard-HSS: the outer Picard right-hand side |x^(k)| + b is fixed while
/// ell_k inner alternating half-steps run with the splitting A = H + S,
/// H = (A + A^T)/2, S = (A - A^T)/2:
///
///   (alpha I + H) x' = (alpha I - S) x + |x^(k)| + b
///   (alpha I + S) x'' = (alpha I - H) x' + |x^(k)| + b
///
/// Requires real positive definite A (symmetric-part eigenvalues > 1e-12)
/// and alpha > 0. Inner counts come from `cfg.inner_iters` (last entry
/// repeats; default 10).
pub fn solve_picard_hss(
    p: &AveProblem,
    alpha: f64,
    x0: Option<&[f64]>,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, AveError> {
    if !(alpha > 0.0) {
        return Err(AveError::Parameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let n = p.n();
    let at = p.a.transpose();
    let h = p.a.add(&at).scale(0.5);
    let s = p.a.sub(&at).scale(0.5);
    let eig_floor = sym_eigenvalues(&h).into_iter().fold(f64::INFINITY, f64::min);
    if !(eig_floor > 1e-12) {
        return Ok(SolveOutcome {
            status: Status::NotApplicable,
            x: vec![0.0; n],
            residual_inf: f64::NAN,
            iterations: 0,
            linear_solves: 0,
            trace: None,
            method: Some(format!(
                "not positive definite: min eigenvalue of (A+A^T)/2 is {eig_floor:.3e}"
            )),
        });
    }
    let alpha_diag = vec![alpha; n];
    let ah = h.add_diag(&alpha_diag);
    let as_ = s.add_diag(&alpha_diag);
    // alpha I + H is SPD and alpha I + S has eigenvalues alpha + i mu
    let fac_h = LuFactors::factor(&ah).expect("alpha I + H is positive definite");
    let fac_s = LuFactors::factor(&as_).expect("alpha I + S is nonsingular for alpha > 0");
    let minus_s = s.scale(-1.0).add_diag(&alpha_diag); // alpha I - S
    let minus_h = h.scale(-1.0).add_diag(&alpha_diag); // alpha I - H

    let mut x = x0.map(|v| v.to_vec()).unwrap_or_else(|| vec![0.0; n]);
    let mut trace = cfg.trace.then(Vec::new);
    let mut solves = 2usize;
    let default_ells = [10usize];
    let ells: &[usize] = cfg.inner_iters.as_deref().unwrap_or(&default_ells);

    for iter in 1..=cfg.max_iters {
        if p.converged(&x, cfg.tol) {
            return Ok(finish(p, Status::Converged, x, iter - 1, solves, trace));
        }
        let ell = *ells.get(iter - 1).or(ells.last()).unwrap_or(&10);
        let fixed = mat::vec_add(&mat::vec_abs(&x), &p.b); // |x^(k)| + b held fixed
        let mut z = x.clone();
        for _ in 0..ell {
            let rhs1 = mat::vec_add(&minus_s.matvec(&z), &fixed);
            let half = fac_h.solve(&rhs1);
            let rhs2 = mat::vec_add(&minus_h.matvec(&half), &fixed);
            z = fac_s.solve(&rhs2);
            solves += 2;
        }
        x = z;
        let r = p.residual_inf(&x);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if diverged(p, r) {
            return Ok(finish(p, Status::Diverged, x, iter, solves, trace));
        }
    }
    let status = if p.converged(&x, cfg.tol) {
        Status::Converged
    } else {
        Status::MaxIters
    };
    Ok(finish(p, status, x, cfg.max_iters, solves, trace))
}
