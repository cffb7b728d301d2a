//! Nonnegative least squares (Lawson-Hanson active set): min ||Mz - b||^2
//! over z >= 0. Normal equations are fine at desk scale.

use crate::core::linalg::LuFactors;
use crate::core::mat::{self, Mat};

pub fn nnls(m: &Mat, b: &[f64], tol: f64) -> Vec<f64> {
    let (rows, cols) = (m.rows(), m.cols());
    debug_assert_eq!(rows, b.len());
    let mut passive: Vec<bool> = vec![false; cols];
    let mut z = vec![0.0; cols];
    let max_outer = 3 * cols.max(1) + 10;

    for _ in 0..max_outer {
        // gradient of 0.5 ||Mz - b||^2 is -M^T (b - Mz)
        let resid = mat::vec_sub(b, &m.matvec(&z));
        let w: Vec<f64> = (0..cols)
            .map(|j| (0..rows).map(|i| m[(i, j)] * resid[i]).sum())
            .collect();
        let candidate = (0..cols)
            .filter(|&j| !passive[j])
            .max_by(|&a, &b_| w[a].partial_cmp(&w[b_]).unwrap());
        match candidate {
            Some(j) if w[j] > tol => passive[j] = true,
            _ => break,
        }

        loop {
            let idx: Vec<usize> = (0..cols).filter(|&j| passive[j]).collect();
            let zeta = ls_on_subset(m, b, &idx);
            if zeta.iter().all(|&v| v > tol) {
                for (k, &j) in idx.iter().enumerate() {
                    z[j] = zeta[k];
                }
                for (j, flag) in passive.iter().enumerate() {
                    if !flag {
                        z[j] = 0.0;
                    }
                }
                break;
            }
            // interpolate back to the boundary and drop the vanished index
            let mut alpha = 1.0f64;
            for (k, &j) in idx.iter().enumerate() {
                if zeta[k] <= tol {
                    let denom = z[j] - zeta[k];
                    if denom > 0.0 {
                        alpha = alpha.min(z[j] / denom);
                    }
                }
            }
            for (k, &j) in idx.iter().enumerate() {
                z[j] += alpha * (zeta[k] - z[j]);
                if z[j] <= tol {
                    z[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
    }
    z
}

/// Least squares restricted to a column subset via normal equations.
fn ls_on_subset(m: &Mat, b: &[f64], idx: &[usize]) -> Vec<f64> {
    let k = idx.len();
    if k == 0 {
        return Vec::new();
    }
    let rows = m.rows();
    let mut gram = Mat::zeros(k, k);
    let mut rhs = vec![0.0; k];
    for (p, &jp) in idx.iter().enumerate() {
        for (q, &jq) in idx.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..rows {
                acc += m[(i, jp)] * m[(i, jq)];
            }
            gram[(p, q)] = acc;
        }
        let mut acc = 0.0;
        for i in 0..rows {
            acc += m[(i, jp)] * b[i];
        }
        rhs[p] = acc;
    }
    // tiny ridge keeps degenerate subsets solvable
    match LuFactors::factor(&gram) {
        Ok(f) => f.solve(&rhs),
        Err(_) => {
            let ridge = 1e-12 * gram.norm_inf().max(1.0);
            let g2 = gram.add_diag(&vec![ridge; k]);
            LuFactors::factor(&g2)
                .map(|f| f.solve(&rhs))
                .unwrap_or_else(|_| vec![0.0; k])
        }
    }
}
