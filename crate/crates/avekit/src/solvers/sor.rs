//! SOR-like iteration on the pair (x, y) with y tracking |x|:
//!   x^{k+1} = (1 - w) x^k + w A^-1 (y^k + b)
//!   y^{k+1} = (1 - w) y^k + w |x^{k+1}|

use super::{diverged, finish};
use crate::core::linalg::LuFactors;
use crate::core::mat::{self};
use crate::core::{AveProblem, SolveOutcome, SolverConfig, Status};
use crate::AveError;

pub fn solve_sor_like(
    p: &AveProblem,
    omega: f64,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, AveError> {
    Ok(solve_sor_like_traced(p, omega, cfg, None)?.0)
}

/// Same iteration; when a reference solution is supplied the second return
/// value records the composite error norm
/// sqrt(||x - x*||^2 + w^-2 ||y - y*||^2) per iteration (y* = |x*|).
pub fn solve_sor_like_traced(
    p: &AveProblem,
    omega: f64,
    cfg: &SolverConfig,
    x_ref: Option<&[f64]>,
) -> Result<(SolveOutcome, Option<Vec<f64>>), AveError> {
    if !(omega > 0.0) {
        return Err(AveError::Parameter(format!(
            "relaxation parameter must be positive, got {omega}"
        )));
    }
    let n = p.n();
    let fac = match LuFactors::factor(&p.a) {
        Ok(f) => f,
        Err(_) => {
            return Ok((
                finish(p, Status::SingularStep, vec![0.0; n], 0, 0, None),
                None,
            ))
        }
    };
    let y_ref: Option<Vec<f64>> = x_ref.map(mat::vec_abs);
    let mut err_trace = x_ref.map(|_| Vec::new());

    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut trace = cfg.trace.then(Vec::new);
    let mut solves = 1usize;
    for iter in 1..=cfg.max_iters {
        let rhs = mat::vec_add(&y, &p.b);
        let z = fac.solve(&rhs);
        solves += 1;
        for i in 0..n {
            x[i] = (1.0 - omega) * x[i] + omega * z[i];
        }
        for i in 0..n {
            y[i] = (1.0 - omega) * y[i] + omega * x[i].abs();
        }
        let r = p.residual_inf(&x);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if let (Some(et), Some(xr), Some(yr)) = (err_trace.as_mut(), x_ref, y_ref.as_ref()) {
            let ex = mat::norm_two(&mat::vec_sub(xr, &x));
            let ey = mat::norm_two(&mat::vec_sub(yr, &y));
            et.push((ex * ex + ey * ey / (omega * omega)).sqrt());
        }
        if p.converged(&x, cfg.tol) {
            return Ok((finish(p, Status::Converged, x, iter, solves, trace), err_trace));
        }
        if diverged(p, r) {
            return Ok((finish(p, Status::Diverged, x, iter, solves, trace), err_trace));
        }
    }
    Ok((
        finish(p, Status::MaxIters, x, cfg.max_iters, solves, trace),
        err_trace,
    ))
}
