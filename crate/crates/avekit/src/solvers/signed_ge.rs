//! Signed Gaussian elimination for x - B|x| = b. When the data falls into an
//! applicability class, the entry of largest |b_i| fixes sgn(x_i) = sgn(b_i);
//! substituting |x_i| = sgn(b_i) x_i makes column i linear, one elimination
//! step reduces the system to size n-1, and back-substitution finishes.

use crate::core::mat::{self, Mat};
use crate::core::{sgn, SolveOutcome, SolverConfig, Status};

/// Applicability classes, checked in order:
/// 1. ||B||_inf < 1/2
/// 2. B irreducible and ||B||_inf <= 1/2
/// 3. B strictly diagonally dominant and ||B||_inf <= 2/3
/// 4. |B| symmetric tridiagonal, n >= 2, ||B||_inf < 1
pub fn signed_ge_class(b: &Mat) -> Option<&'static str> {
    let n = b.rows();
    let ninf = b.norm_inf();
    if ninf < 0.5 {
        return Some("norm_below_half");
    }
    if ninf <= 0.5 && irreducible(b) {
        return Some("irreducible_norm_at_half");
    }
    let sdd = (0..n).all(|i| {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| b[(i, j)].abs()).sum();
        b[(i, i)].abs() > off
    });
    if sdd && ninf <= 2.0 / 3.0 {
        return Some("diagonally_dominant_two_thirds");
    }
    if n >= 2 && ninf < 1.0 && abs_symmetric_tridiagonal(b) {
        return Some("symmetric_tridiagonal");
    }
    None
}

fn irreducible(b: &Mat) -> bool {
    let n = b.rows();
    if n <= 1 {
        return true;
    }
    let reach = |transpose: bool| -> bool {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let touched = if transpose {
                    b[(j, i)] != 0.0
                } else {
                    b[(i, j)] != 0.0
                };
                if touched && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|v| v)
    };
    reach(false) && reach(true)
}

fn abs_symmetric_tridiagonal(b: &Mat) -> bool {
    let n = b.rows();
    for i in 0..n {
        for j in 0..n {
            if i.abs_diff(j) > 1 && b[(i, j)] != 0.0 {
                return false;
            }
            if b[(i, j)].abs() != b[(j, i)].abs() {
                return false;
            }
        }
    }
    true
}

/// Solve x - B|x| = b. `force` skips the class check (the returned residual
/// still reports how well the produced x fits).
pub fn solve_signed_ge(b_mat: &Mat, rhs: &[f64], force: bool, cfg: &SolverConfig) -> SolveOutcome {
    let n = b_mat.rows();
    assert!(b_mat.is_square() && rhs.len() == n);
    let class = signed_ge_class(b_mat);
    if class.is_none() && !force {
        return SolveOutcome {
            status: Status::NotApplicable,
            x: vec![0.0; n],
            residual_inf: f64::NAN,
            iterations: 0,
            linear_solves: 0,
            trace: None,
            method: Some("no applicability class holds".into()),
        };
    }

    let x = eliminate(b_mat.clone(), rhs.to_vec());
    let res: Vec<f64> = {
        let babs = b_mat.matvec(&mat::vec_abs(&x));
        (0..n).map(|i| x[i] - babs[i] - rhs[i]).collect()
    };
    let residual_inf = mat::norm_inf(&res);
    let status = if residual_inf <= cfg.tol * (1.0 + mat::norm_inf(rhs)) {
        Status::Converged
    } else {
        Status::Stalled
    };
    SolveOutcome {
        status,
        x,
        residual_inf,
        iterations: n,
        linear_solves: 0,
        trace: None,
        method: class.map(|c| c.to_string()),
    }
}

fn eliminate(b: Mat, rhs: Vec<f64>) -> Vec<f64> {
    let n = rhs.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        // x - b11 |x| = r: the sign of x matches the sign of r here
        let sigma = sgn(rhs[0]);
        return vec![rhs[0] / (1.0 - sigma * b[(0, 0)])];
    }
    // pivot on the largest |b_i| (ties: smallest index)
    let mut piv = 0usize;
    for i in 1..n {
        if rhs[i].abs() > rhs[piv].abs() {
            piv = i;
        }
    }
    let sigma = sgn(rhs[piv]);
    let denom = 1.0 - sigma * b[(piv, piv)];
    debug_assert!(denom.abs() > 1e-12, "pivot denominator must stay away from 0");

    // reduced (n-1)-system over the remaining indices
    let others: Vec<usize> = (0..n).filter(|&i| i != piv).collect();
    let mut b_red = Mat::zeros(n - 1, n - 1);
    let mut r_red = vec![0.0; n - 1];
    for (ri, &i) in others.iter().enumerate() {
        r_red[ri] = rhs[i] + sigma * b[(i, piv)] * rhs[piv] / denom;
        for (rj, &j) in others.iter().enumerate() {
            b_red[(ri, rj)] = b[(i, j)] + sigma * b[(i, piv)] * b[(piv, j)] / denom;
        }
    }
    let x_red = eliminate(b_red, r_red);
    // back-substitute the pivot coordinate
    let mut abs_sum = 0.0;
    for (rj, &j) in others.iter().enumerate() {
        abs_sum += b[(piv, j)] * x_red[rj].abs();
    }
    let x_piv = (rhs[piv] + abs_sum) / denom;
    let mut x = vec![0.0; n];
    x[piv] = x_piv;
    for (ri, &i) in others.iter().enumerate() {
        x[i] = x_red[ri];
    }
    x
}
