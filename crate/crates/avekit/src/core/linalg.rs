//! Dense linear-algebra kernels: LU with partial pivoting, rank-revealing
//! elimination, power iteration for nonnegative matrices, and a cyclic Jacobi
//! eigensolver used for singular values and the spectral norm.

use super::mat::{self, Mat};
use crate::AveError;

/// Relative pivot tolerance: a pivot below `PIVOT_TOL * ||A||_inf` counts as
/// zero. This single constant defines "singular" everywhere in the crate.
pub const PIVOT_TOL: f64 = 1e-13;

/// LU factorization with partial pivoting, PA = LU packed in one matrix.
#[derive(Clone, Debug)]
pub struct LuFactors {
    lu: Mat,
    perm: Vec<usize>,
    sign: f64,
    n: usize,
}

impl LuFactors {
    pub fn factor(a: &Mat) -> Result<LuFactors, AveError> {
        Self::factor_with_tol(a, PIVOT_TOL * a.norm_inf().max(1e-300))
    }

    /// `abs_tol` is the absolute pivot threshold below which the matrix is
    /// declared singular.
    pub fn factor_with_tol(a: &Mat, abs_tol: f64) -> Result<LuFactors, AveError> {
        if !a.is_square() {
            return Err(AveError::Dim(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_val = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = i;
                }
            }
            if pivot_val <= abs_tol || !pivot_val.is_finite() {
                return Err(AveError::Singular(format!(
                    "pivot {pivot_val:.3e} below tolerance {abs_tol:.3e} at column {k}"
                )));
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                if m != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= m * lu[(k, j)];
                    }
                }
            }
        }
        Ok(LuFactors { lu, perm, sign, n })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "rhs length mismatch");
        let n = self.n;
        // forward substitution on permuted rhs
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = b[self.perm[i]];
            for j in 0..i {
                acc -= self.lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        // back substitution
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    pub fn det(&self) -> f64 {
        let mut d = self.sign;
        for i in 0..self.n {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn inverse(&self) -> Mat {
        let n = self.n;
        let mut inv = Mat::zeros(n, n);
        for k in 0..n {
            let col = self.solve(&mat::unit(n, k));
            for i in 0..n {
                inv[(i, k)] = col[i];
            }
        }
        inv
    }
}

/// Solve Ax = b by LU with partial pivoting.
pub fn lu_solve(a: &Mat, b: &[f64]) -> Result<Vec<f64>, AveError> {
    if a.rows() != b.len() {
        return Err(AveError::Dim(format!(
            "matrix is {}x{} but rhs has length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    Ok(LuFactors::factor(a)?.solve(b))
}

pub fn inverse(a: &Mat) -> Result<Mat, AveError> {
    Ok(LuFactors::factor(a)?.inverse())
}

/// Determinant via LU; `None` when a pivot falls below the singularity
/// threshold (the determinant is then numerically zero).
pub fn det_or_singular(a: &Mat) -> Option<f64> {
    LuFactors::factor(a).ok().map(|f| f.det())
}

/// Induced matrix p-norm for p in {1, 2, inf}. p = 2 is the spectral norm.
pub fn norm(m: &Mat, p: u32) -> f64 {
    match p {
        1 => m.norm_one(),
        2 => extreme_singular_values(m).1,
        u32::MAX => m.norm_inf(),
        _ => panic!("only p in {{1, 2, inf}} supported"),
    }
}

const POWER_TOL: f64 = 1e-12;
const POWER_CAP: usize = 10_000;

/// Spectral radius of an entrywise-nonnegative matrix by power iteration with
/// a positive start vector. Uses Collatz-Wielandt ratio bounds while the
/// iterate stays strictly positive, and a norm-growth estimate otherwise.
/// Periodic patterns (where the plain iteration oscillates) are retried on
/// M + I, whose Perron root is exactly rho(M) + 1.
pub fn spectral_radius_nonneg(m: &Mat) -> Result<f64, AveError> {
    match power_iteration_nonneg(m) {
        Ok(v) => Ok(v),
        Err(_) => {
            let shifted = m.add_diag(&vec![1.0; m.rows()]);
            match power_iteration_nonneg(&shifted) {
                Ok(v) => Ok(v - 1.0),
                Err(AveError::NonConvergence { estimate }) => Err(AveError::NonConvergence {
                    estimate: estimate - 1.0,
                }),
                Err(e) => Err(e),
            }
        }
    }
}

fn power_iteration_nonneg(m: &Mat) -> Result<f64, AveError> {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return Ok(0.0);
    }
    debug_assert!(m.data().iter().all(|&v| v >= 0.0), "matrix must be >= 0");
    let mut x = vec![1.0; n];
    let mut last_estimate = f64::NAN;
    for _ in 0..POWER_CAP {
        let y = m.matvec(&x);
        let ymax = mat::norm_inf(&y);
        if ymax == 0.0 {
            return Ok(0.0); // reached the kernel: nilpotent action on the cone
        }
        if x.iter().all(|&v| v > 0.0) && y.iter().all(|&v| v > 0.0) {
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for i in 0..n {
                let r = y[i] / x[i];
                lo = lo.min(r);
                hi = hi.max(r);
            }
            if hi - lo <= POWER_TOL * hi.max(1.0) {
                return Ok(0.5 * (lo + hi));
            }
            last_estimate = 0.5 * (lo + hi);
        } else {
            let estimate = ymax; // x is inf-normalized
            if (estimate - last_estimate).abs() <= POWER_TOL * estimate.max(1.0) {
                let xn: Vec<f64> = y.iter().map(|v| v / ymax).collect();
                if mat::dist_inf(&xn, &x) <= 1e-10 {
                    return Ok(estimate);
                }
            }
            last_estimate = estimate;
        }
        x = y.iter().map(|v| v / ymax).collect();
    }
    Err(AveError::NonConvergence {
        estimate: last_estimate,
    })
}

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_SWEEPS: usize = 64;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn sym_eigenvalues(s: &Mat) -> Vec<f64> {
    assert!(s.is_square());
    let n = s.rows();
    let mut a = s.clone();
    let scale = a.max_abs().max(1e-300);
    for _ in 0..JACOBI_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= JACOBI_TOL * scale * 1e-2 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s_ = t * c;
                // rotate rows/cols p and q
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s_ * akq;
                    a[(k, q)] = s_ * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s_ * aqk;
                    a[(q, k)] = s_ * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}

/// (sigma_min, sigma_max) via the symmetric eigensolution of A^T A;
/// eigenvalues are clamped at zero before the square root.
pub fn extreme_singular_values(a: &Mat) -> (f64, f64) {
    let ata = a.transpose().matmul(a);
    let eig = sym_eigenvalues(&ata);
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for l in eig {
        let s = l.max(0.0).sqrt();
        lo = lo.min(s);
        hi = hi.max(s);
    }
    if !lo.is_finite() {
        lo = 0.0;
    }
    (lo, hi)
}

/// Outcome of rank-revealing elimination on [A | b].
#[derive(Clone, Debug)]
pub struct RankRevealed {
    pub rank: usize,
    /// One solution of Ax = b, if the system is consistent.
    pub particular: Option<Vec<f64>>,
    /// Basis of the nullspace of A (empty when A has full column rank).
    pub nullspace: Vec<Vec<f64>>,
}

/// Gaussian elimination with complete pivoting on the augmented system.
/// Rank decisions use the threshold `1e-11 * ||A||_inf` (or the supplied one).
pub fn rank_revealing_solve(a: &Mat, b: &[f64], tol: Option<f64>) -> RankRevealed {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m);
    let tol = tol.unwrap_or(1e-11 * a.norm_inf().max(1e-300));
    let mut w = Mat::zeros(m, n + 1);
    for i in 0..m {
        for j in 0..n {
            w[(i, j)] = a[(i, j)];
        }
        w[(i, n)] = b[i];
    }
    let mut col_of_pivot: Vec<usize> = Vec::new(); // pivot column per pivot row
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut r = 0usize;
    while r < m && r < n {
        // complete pivot over the remaining block (columns restricted to A part)
        let mut best = (r, r, 0.0f64);
        for i in r..m {
            for j in r..n {
                let v = w[(i, j)].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        let (pi, pj, _) = best;
        if pi != r {
            for j in 0..=n {
                let t = w[(r, j)];
                w[(r, j)] = w[(pi, j)];
                w[(pi, j)] = t;
            }
        }
        if pj != r {
            for i in 0..m {
                let t = w[(i, r)];
                w[(i, r)] = w[(i, pj)];
                w[(i, pj)] = t;
            }
            col_perm.swap(r, pj);
        }
        let pivot = w[(r, r)];
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = w[(i, r)] / pivot;
            if f != 0.0 {
                for j in r..=n {
                    w[(i, j)] -= f * w[(r, j)];
                }
                w[(i, r)] = 0.0;
            }
        }
        col_of_pivot.push(r);
        r += 1;
    }
    let rank = r;
    let _ = &col_of_pivot;
    // consistency: rows below the rank must have ~zero rhs
    let consistent = (rank..m).all(|i| w[(i, n)].abs() <= tol.max(1e-9 * mat::norm_inf(b)));
    let particular = if consistent {
        let mut xp = vec![0.0; n]; // permuted coordinates; free vars at 0
        for i in 0..rank {
            xp[i] = w[(i, n)] / w[(i, i)];
        }
        let mut x = vec![0.0; n];
        for (pj, &oj) in col_perm.iter().enumerate() {
            x[oj] = xp[pj];
        }
        Some(x)
    } else {
        None
    };
    let mut nullspace = Vec::new();
    for free in rank..n {
        let mut vp = vec![0.0; n];
        vp[free] = 1.0;
        for i in 0..rank {
            vp[i] = -w[(i, free)] / w[(i, i)];
        }
        let mut v = vec![0.0; n];
        for (pj, &oj) in col_perm.iter().enumerate() {
            v[oj] = vp[pj];
        }
        let nv = mat::norm_two(&v).max(1e-300);
        nullspace.push(mat::vec_scale(&v, 1.0 / nv));
    }
    RankRevealed {
        rank,
        particular,
        nullspace,
    }
}

/// Orthonormalize a set of vectors (modified Gram-Schmidt); drops
/// near-dependent ones.
pub fn orthonormalize(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for b in &basis {
            let c = mat::dot(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        let n = mat::norm_two(&w);
        if n > 1e-12 {
            basis.push(mat::vec_scale(&w, 1.0 / n));
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_identity_and_2x2() {
        let id = Mat::identity(3);
        let b = vec![1.0, -2.0, 3.0];
        assert_eq!(lu_solve(&id, &b).unwrap(), b);

        // 2x2 closed form: det = 2
        let a = Mat::from_rows(&[vec![2.0, 1.0], vec![6.0, 4.0]]);
        let x = lu_solve(&a, &[3.0, 10.0]).unwrap();
        assert!(mat::dist_inf(&x, &[1.0, 1.0]) < 1e-12);
    }

    #[test]
    fn lu_singular_detected() {
        let a = Mat::from_rows(&[vec![-2.0, 2.0], vec![-2.0, 2.0]]);
        assert!(matches!(
            lu_solve(&a, &[1.0, 1.0]),
            Err(AveError::Singular(_))
        ));
    }

    #[test]
    fn power_iteration_examples() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).scale(1.0 / 3.0);
        let rho = spectral_radius_nonneg(&m).unwrap();
        assert!((rho - 1.0).abs() < 1e-10);

        let nilpotent = Mat::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(spectral_radius_nonneg(&nilpotent).unwrap(), 0.0);
    }

    #[test]
    fn singular_values_of_scaled_identity() {
        let a = Mat::identity(2).scale(3.0);
        let (lo, hi) = extreme_singular_values(&a);
        assert!((lo - 3.0).abs() < 1e-12 && (hi - 3.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_matches_sigma_max() {
        let a = Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]);
        let (_, smax) = extreme_singular_values(&a);
        assert!((norm(&a, 2) - smax).abs() <= 1e-9 * smax);
    }

    #[test]
    fn rank_revealing_ray_case() {
        // singular system with one-dimensional nullspace
        let a = Mat::from_rows(&[vec![-1.0, 1.0], vec![-2.0, 2.0]]);
        let out = rank_revealing_solve(&a, &[-3.0, -6.0], None);
        assert_eq!(out.rank, 1);
        let xp = out.particular.unwrap();
        // residual of the particular solution
        let r = mat::vec_sub(&a.matvec(&xp), &[-3.0, -6.0]);
        assert!(mat::norm_inf(&r) < 1e-9);
        assert_eq!(out.nullspace.len(), 1);
        let v = &out.nullspace[0];
        assert!((v[0] - v[1]).abs() < 1e-9); // direction (1,1)/sqrt(2)
    }

    #[test]
    fn rank_revealing_inconsistent() {
        let a = Mat::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let out = rank_revealing_solve(&a, &[1.0, 2.0], None);
        assert!(out.particular.is_none());
    }
}
