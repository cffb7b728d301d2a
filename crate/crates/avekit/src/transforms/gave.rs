//! Reductions involving the generalized equation Ax - B|x| = b: down to the
//! plain AVE (through B^-1 or a 3n-sized block system), from the variant
//! Ax + |Bx| = b, and from Sylvester-type matrix equations AXB + C|X|D = E
//! through Kronecker vectorization.

use crate::core::linalg::LuFactors;
use crate::core::mat::Mat;
use crate::core::{AveProblem, GaveProblem};
use crate::AveError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaveToAveMode {
    /// Multiply through by B^-1 (requires nonsingular B); sizes unchanged.
    InverseB,
    /// Assumption-free block construction of size 3n with stacked variables
    /// (x, y, z), y tracking |x| and z forced to zero.
    Block3n,
}

#[derive(Clone, Debug)]
pub struct GaveToAve {
    pub ave: AveProblem,
    pub mode: GaveToAveMode,
    n: usize,
}

impl GaveToAve {
    /// Project a solution of the reduced system back to the original one.
    pub fn x_from(&self, solved: &[f64]) -> Vec<f64> {
        solved[..self.n].to_vec()
    }

    /// Embed an original solution into the reduced system.
    pub fn embed(&self, x: &[f64]) -> Vec<f64> {
        match self.mode {
            GaveToAveMode::InverseB => x.to_vec(),
            GaveToAveMode::Block3n => {
                let mut w = Vec::with_capacity(3 * self.n);
                w.extend_from_slice(x);
                w.extend(x.iter().map(|v| v.abs()));
                w.extend(std::iter::repeat_n(0.0, self.n));
                w
            }
        }
    }
}

pub fn gave_to_ave(g: &GaveProblem, mode: GaveToAveMode) -> Result<GaveToAve, AveError> {
    if !g.is_square() {
        return Err(AveError::Dim("reduction needs a square system".into()));
    }
    let n = g.n();
    match mode {
        GaveToAveMode::InverseB => {
            let fac = LuFactors::factor(&g.b)
                .map_err(|_| AveError::Singular("B must be nonsingular for this mode".into()))?;
            let binv = fac.inverse();
            let a = binv.matmul(&g.a);
            let b = fac.solve(&g.rhs);
            Ok(GaveToAve {
                ave: AveProblem::new(a, b)?,
                mode,
                n,
            })
        }
        GaveToAveMode::Block3n => {
            // rows: y - |x| = 0;  y - z - |y| = 0;  Ax - By - |z| = b.
            // Any solution has y = |x| >= 0, hence z = y - |y| = 0 and the
            // last block reduces to Ax - B|x| = b.
            let m3 = 3 * n;
            let mut a3 = Mat::zeros(m3, m3);
            for i in 0..n {
                a3[(i, n + i)] = 1.0; // y
                a3[(n + i, n + i)] = 1.0; // y
                a3[(n + i, 2 * n + i)] = -1.0; // -z
            }
            for i in 0..n {
                for j in 0..n {
                    a3[(2 * n + i, j)] = g.a[(i, j)];
                    a3[(2 * n + i, n + j)] = -g.b[(i, j)];
                }
            }
            let mut b3 = vec![0.0; m3];
            b3[2 * n..].copy_from_slice(&g.rhs);
            Ok(GaveToAve {
                ave: AveProblem::new(a3, b3)?,
                mode,
                n,
            })
        }
    }
}

/// Reduce Ax + |Bx| = b to a generalized system over (x, y) with y = Bx:
/// Ax + |y| = b and Bx - y = 0.
pub fn ngave_to_gave(a: &Mat, b: &Mat, rhs: &[f64]) -> Result<GaveProblem, AveError> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() || rhs.len() != a.rows() {
        return Err(AveError::Dim("square matrices of one size required".into()));
    }
    let n = a.rows();
    let m2 = 2 * n;
    let mut a2 = Mat::zeros(m2, m2);
    let mut b2 = Mat::zeros(m2, m2);
    for i in 0..n {
        for j in 0..n {
            a2[(i, j)] = a[(i, j)];
            a2[(n + i, j)] = b[(i, j)];
        }
        a2[(n + i, n + i)] = -1.0;
        // row i: Ax + |y| = b  =>  -B' block must contribute -(-|y|)
        b2[(i, n + i)] = -1.0;
    }
    let mut rhs2 = vec![0.0; m2];
    rhs2[..n].copy_from_slice(rhs);
    GaveProblem::new(a2, b2, rhs2)
}

#[derive(Clone, Debug)]
pub struct SylvesterReduction {
    pub gave: GaveProblem,
    x_rows: usize,
    x_cols: usize,
}

impl SylvesterReduction {
    /// Reshape a vectorized solution back into matrix form.
    pub fn unvec(&self, x: &[f64]) -> Mat {
        Mat::from_vec_cols(self.x_rows, self.x_cols, x)
    }

    pub fn vec(&self, x: &Mat) -> Vec<f64> {
        x.vec_cols()
    }
}

/// Vectorize AXB + C|X|D = E into (B^T (x) A) vec(X) - (-(D^T (x) C)) |vec X|
/// = vec(E); componentwise |vec(X)| = vec(|X|) makes the reduction exact.
pub fn sylvester_to_gave(
    a: &Mat,
    b: &Mat,
    c: &Mat,
    d: &Mat,
    e: &Mat,
) -> Result<SylvesterReduction, AveError> {
    let (m, n) = (a.rows(), a.cols());
    let (p, q) = (b.rows(), b.cols());
    if c.rows() != m || c.cols() != n || d.rows() != p || d.cols() != q {
        return Err(AveError::Dim("C must match A and D must match B".into()));
    }
    if e.rows() != m || e.cols() != q {
        return Err(AveError::Dim(format!(
            "E must be {}x{}, got {}x{}",
            m,
            q,
            e.rows(),
            e.cols()
        )));
    }
    let a_g = b.transpose().kron(a);
    let b_g = d.transpose().kron(c).scale(-1.0);
    let rhs = e.vec_cols();
    Ok(SylvesterReduction {
        gave: GaveProblem::new(a_g, b_g, rhs)?,
        x_rows: n,
        x_cols: p,
    })
}
