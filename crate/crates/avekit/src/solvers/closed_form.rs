//! Closed-form solution of x - B|x| = b for B >= 0 with rho(B) < 1 when at
//! most one entry of b is negative: with M = (I - B)^-1 and that entry k,
//!   x = max{ Mb, Mb - 2 (Mb)_k / (2 M_kk - 1) * (M - I) e_k }  (entrywise).

use crate::core::linalg::{inverse, spectral_radius_nonneg};
use crate::core::mat::{self, Mat};
use crate::core::{SolveOutcome, Status};

fn not_applicable(n: usize, why: String) -> SolveOutcome {
    SolveOutcome {
        status: Status::NotApplicable,
        x: vec![0.0; n],
        residual_inf: f64::NAN,
        iterations: 0,
        linear_solves: 0,
        trace: None,
        method: Some(why),
    }
}

pub fn solve_special_closed_form(b_mat: &Mat, rhs: &[f64]) -> SolveOutcome {
    let n = b_mat.rows();
    assert!(b_mat.is_square() && rhs.len() == n);
    if !b_mat.entrywise_ge(0.0) {
        return not_applicable(n, "B must be entrywise nonnegative".into());
    }
    match spectral_radius_nonneg(b_mat) {
        Ok(rho) if rho < 1.0 - 1e-12 => {}
        Ok(rho) => return not_applicable(n, format!("rho(B) = {rho:.6e} >= 1")),
        Err(e) => return not_applicable(n, e.to_string()),
    }
    let negatives: Vec<usize> = (0..n).filter(|&i| rhs[i] < 0.0).collect();
    if negatives.len() > 1 {
        return not_applicable(
            n,
            format!("{} entries of b are negative; at most one allowed", negatives.len()),
        );
    }
    // most negative entry if any, else index 0 (any k is admissible for b >= 0)
    let k = negatives
        .iter()
        .copied()
        .min_by(|&i, &j| rhs[i].partial_cmp(&rhs[j]).unwrap())
        .unwrap_or(0);

    let m = inverse(&Mat::identity(n).sub(b_mat)).expect("rho(B) < 1");
    let mb = m.matvec(rhs);
    let factor = 2.0 * mb[k] / (2.0 * m[(k, k)] - 1.0);
    let x: Vec<f64> = (0..n)
        .map(|i| {
            let shift = factor * (m[(i, k)] - if i == k { 1.0 } else { 0.0 });
            mb[i].max(mb[i] - shift)
        })
        .collect();

    let babs = b_mat.matvec(&mat::vec_abs(&x));
    let res: Vec<f64> = (0..n).map(|i| x[i] - babs[i] - rhs[i]).collect();
    let residual_inf = mat::norm_inf(&res);
    let status = if residual_inf <= 1e-10 * (1.0 + mat::norm_inf(rhs)) {
        Status::Converged
    } else {
        Status::Stalled
    };
    SolveOutcome {
        status,
        x,
        residual_inf,
        iterations: 0,
        linear_solves: 1,
        trace: None,
        method: Some(format!("closed form with k = {k}")),
    }
}
