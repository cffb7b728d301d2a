//! AVE <-> LCP reductions.
//!
//! Forward: with x = x+ - x-, |x| = x+ + x-, the system becomes the
//! complementarity problem with Q = (A+I)^-1 (A-I), q = -(A+I)^-1 b,
//! z = x+, w = x-. Backward: substituting w = |x| - x, z = |x| + x turns
//! w = Qz + q into the AVE (I-Q)^-1 (I+Q) x - |x| = (Q-I)^-1 q.

use crate::core::linalg::LuFactors;
use crate::core::mat::{self, Mat};
use crate::core::AveProblem;
use crate::AveError;

/// w = Qz + q, w^T z = 0, w, z >= 0.
#[derive(Clone, Debug)]
pub struct Lcp {
    pub q_mat: Mat,
    pub q_vec: Vec<f64>,
}

impl Lcp {
    pub fn n(&self) -> usize {
        self.q_vec.len()
    }

    /// Max violation of w = Qz + q, complementarity and nonnegativity.
    pub fn violation(&self, w: &[f64], z: &[f64]) -> f64 {
        let qz = self.q_mat.matvec(z);
        let mut v = 0.0f64;
        for i in 0..self.n() {
            v = v.max((w[i] - qz[i] - self.q_vec[i]).abs());
            v = v.max((-w[i]).max(-z[i]).max(0.0));
        }
        v.max(mat::dot(w, z).abs())
    }
}

#[derive(Clone, Debug)]
pub struct AveToLcp {
    pub lcp: Lcp,
}

impl AveToLcp {
    /// Back-map: x = z - w (z = x+, w = x-).
    pub fn x_from(&self, w: &[f64], z: &[f64]) -> Vec<f64> {
        mat::vec_sub(z, w)
    }

    /// Forward solution transport: an AVE solution splits into its positive
    /// and negative parts.
    pub fn wz_from_x(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let w = x.iter().map(|&v| (-v).max(0.0)).collect();
        let z = x.iter().map(|&v| v.max(0.0)).collect();
        (w, z)
    }
}

pub fn ave_to_lcp(p: &AveProblem) -> Result<AveToLcp, AveError> {
    let n = p.n();
    let a_plus = p.a.add_diag(&vec![1.0; n]);
    let fac = LuFactors::factor(&a_plus)
        .map_err(|_| AveError::Singular("A + I must be nonsingular for the reduction".into()))?;
    let a_minus = p.a.add_diag(&vec![-1.0; n]);
    let q_mat_inv = fac.inverse();
    let q_mat = q_mat_inv.matmul(&a_minus);
    let q_vec = mat::vec_scale(&fac.solve(&p.b), -1.0);
    Ok(AveToLcp {
        lcp: Lcp { q_mat, q_vec },
    })
}

#[derive(Clone, Debug)]
pub struct LcpToAve {
    pub ave: AveProblem,
}

impl LcpToAve {
    /// Back-map: x = (z - w) / 2.
    pub fn x_from(&self, w: &[f64], z: &[f64]) -> Vec<f64> {
        mat::vec_scale(&mat::vec_sub(z, w), 0.5)
    }

    /// Forward map: w = |x| - x, z = |x| + x; complementarity is exact.
    pub fn wz_from_x(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let w = x.iter().map(|&v| v.abs() - v).collect();
        let z = x.iter().map(|&v| v.abs() + v).collect();
        (w, z)
    }
}

pub fn lcp_to_ave(l: &Lcp) -> Result<LcpToAve, AveError> {
    let n = l.n();
    let eye = Mat::identity(n);
    let i_minus_q = eye.sub(&l.q_mat);
    let fac = LuFactors::factor(&i_minus_q)
        .map_err(|_| AveError::Singular("I - Q must be nonsingular for the reduction".into()))?;
    let i_plus_q = eye.add(&l.q_mat);
    let a = fac.inverse().matmul(&i_plus_q);
    // (Q - I)^-1 q = -(I - Q)^-1 q
    let b = mat::vec_scale(&fac.solve(&l.q_vec), -1.0);
    Ok(LcpToAve {
        ave: AveProblem::new(a, b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_reduction_values() {
        // A = 3I, b = e: Q = 0.5 I, q = -0.25 e; the AVE solution x = 0.5 e
        // maps to z = 0.5 e, w = 0 with w = Qz + q = 0
        let p = AveProblem::new(Mat::identity(2).scale(3.0), vec![1.0, 1.0]).unwrap();
        let red = ave_to_lcp(&p).unwrap();
        assert!((red.lcp.q_mat[(0, 0)] - 0.5).abs() < 1e-12);
        assert!((red.lcp.q_vec[0] + 0.25).abs() < 1e-12);
        let (w, z) = red.wz_from_x(&[0.5, 0.5]);
        assert!(red.lcp.violation(&w, &z) < 1e-12);
        assert_eq!(red.x_from(&w, &z), vec![0.5, 0.5]);
    }

    #[test]
    fn shifted_identity_is_singular() {
        let p = AveProblem::new(Mat::identity(2).scale(-1.0), vec![1.0, 1.0]).unwrap();
        assert!(matches!(ave_to_lcp(&p), Err(AveError::Singular(_))));
    }

    #[test]
    fn lcp_round_trip_on_zero_q() {
        // Q = 0, q = e: the unique LCP solution is (w, z) = (e, 0), mapping
        // to x = -e/2 for the reduced system x - |x| = -e
        let l = Lcp {
            q_mat: Mat::zeros(2, 2),
            q_vec: vec![1.0, 1.0],
        };
        let red = lcp_to_ave(&l).unwrap();
        let x = red.x_from(&[1.0, 1.0], &[0.0, 0.0]);
        assert_eq!(x, vec![-0.5, -0.5]);
        assert!(red.ave.residual_inf(&x) < 1e-12);
        let (w, z) = red.wz_from_x(&x);
        assert!(l.violation(&w, &z) < 1e-12);
    }

    #[test]
    fn infeasible_lcp_maps_to_unsolvable_ave() {
        // Q = 0, q = -e forces w = -e < 0: no LCP solution; the reduced
        // system x - |x| = e is unsolvable as well (x - |x| <= 0 always)
        let l = Lcp {
            q_mat: Mat::zeros(2, 2),
            q_vec: vec![-1.0, -1.0],
        };
        let red = lcp_to_ave(&l).unwrap();
        assert_eq!(red.ave.b, vec![1.0, 1.0]);
        let set = crate::solvers::enumerate_solutions(&red.ave, false, 20).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn q_identity_rejected() {
        let l = Lcp {
            q_mat: Mat::identity(2),
            q_vec: vec![1.0, 1.0],
        };
        assert!(matches!(lcp_to_ave(&l), Err(AveError::Singular(_))));
    }
}
