//! Newton-based matrix splitting iterations for Ax - B|x| = b:
//!   x^{k+1} = (M + Omega)^-1 ((N + Omega) x^k + B |x^k| + b),  A = M - N.
//! Presets cover the Jacobi, Gauss-Seidel and SOR splittings; the explicit
//! splitting (A, 0) with Omega = 0 reduces to the Picard iteration.

use super::finish_gave;
use crate::core::linalg::LuFactors;
use crate::core::mat::{self, Mat};
use crate::core::{GaveProblem, SolveOutcome, SolverConfig, Status};
use crate::AveError;

#[derive(Clone, Debug)]
pub enum SplitScheme {
    /// A = M - N supplied directly.
    Explicit(Mat, Mat),
    /// M = diag(A).
    Jacobi,
    /// M = lower triangle of A including the diagonal.
    GaussSeidel,
    /// M = (1/alpha) diag(A) + strictly lower triangle of A.
    Sor(f64),
}

#[derive(Clone, Debug)]
pub struct SplittingSpec {
    pub scheme: SplitScheme,
    /// Shift matrix Omega; zero when absent.
    pub omega: Option<Mat>,
}

impl SplittingSpec {
    pub fn explicit(m: Mat, n: Mat) -> Self {
        SplittingSpec {
            scheme: SplitScheme::Explicit(m, n),
            omega: None,
        }
    }

    pub fn jacobi() -> Self {
        SplittingSpec {
            scheme: SplitScheme::Jacobi,
            omega: None,
        }
    }

    pub fn gauss_seidel() -> Self {
        SplittingSpec {
            scheme: SplitScheme::GaussSeidel,
            omega: None,
        }
    }

    pub fn sor(alpha: f64) -> Self {
        SplittingSpec {
            scheme: SplitScheme::Sor(alpha),
            omega: None,
        }
    }

    pub fn with_omega(mut self, omega: Mat) -> Self {
        self.omega = Some(omega);
        self
    }

    /// Materialize (M, N) with A = M - N; validates the reconstruction.
    pub fn matrices(&self, a: &Mat) -> Result<(Mat, Mat), AveError> {
        let n = a.rows();
        let (m, nn) = match &self.scheme {
            SplitScheme::Explicit(m, nn) => (m.clone(), nn.clone()),
            SplitScheme::Jacobi => {
                let d = diag_of(a)?;
                let nmat = d.sub(a);
                (d, nmat)
            }
            SplitScheme::GaussSeidel => {
                let mut m = Mat::zeros(n, n);
                for i in 0..n {
                    for j in 0..=i {
                        m[(i, j)] = a[(i, j)];
                    }
                }
                check_diag(a)?;
                let nmat = m.sub(a);
                (m, nmat)
            }
            SplitScheme::Sor(alpha) => {
                if *alpha == 0.0 {
                    return Err(AveError::Parameter("SOR preset needs alpha != 0".into()));
                }
                check_diag(a)?;
                let mut m = Mat::zeros(n, n);
                for i in 0..n {
                    for j in 0..i {
                        m[(i, j)] = a[(i, j)];
                    }
                    m[(i, i)] = a[(i, i)] / alpha;
                }
                let nmat = m.sub(a);
                (m, nmat)
            }
        };
        let recon = m.sub(&nn);
        let scale = a.norm_inf().max(1.0);
        if recon.sub(a).max_abs() > 1e-12 * scale {
            return Err(AveError::Parameter(
                "splitting does not reconstruct A within 1e-12".into(),
            ));
        }
        Ok((m, nn))
    }
}

fn diag_of(a: &Mat) -> Result<Mat, AveError> {
    check_diag(a)?;
    let n = a.rows();
    let mut d = Mat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = a[(i, i)];
    }
    Ok(d)
}

fn check_diag(a: &Mat) -> Result<(), AveError> {
    for i in 0..a.rows() {
        if a[(i, i)] == 0.0 {
            return Err(AveError::Parameter(format!(
                "splitting preset requires a nonzero diagonal; a[{i}][{i}] = 0"
            )));
        }
    }
    Ok(())
}

/// Spectral radius of |(M+Omega)^-1 (N+Omega)| + |(M+Omega)^-1 B|; below one
/// the iteration is guaranteed to converge.
pub fn splitting_radius(g: &GaveProblem, split: &SplittingSpec) -> Result<f64, AveError> {
    let (m, n) = split.matrices(&g.a)?;
    let zero = Mat::zeros(m.rows(), m.cols());
    let omega = split.omega.as_ref().unwrap_or(&zero);
    let mo = m.add(omega);
    let moinv = crate::core::linalg::inverse(&mo)?;
    let t = moinv.matmul(&n.add(omega)).abs().add(&moinv.matmul(&g.b).abs());
    crate::core::linalg::spectral_radius_nonneg(&t)
}

pub fn solve_newton_splitting(
    g: &GaveProblem,
    split: &SplittingSpec,
    x0: &[f64],
    cfg: &SolverConfig,
) -> SolveOutcome {
    debug_assert!(g.is_square());
    let n = g.n();
    let (m, nn) = match split.matrices(&g.a) {
        Ok(pair) => pair,
        Err(e) => {
            return SolveOutcome {
                status: Status::NotApplicable,
                x: vec![0.0; n],
                residual_inf: f64::NAN,
                iterations: 0,
                linear_solves: 0,
                trace: None,
                method: Some(e.to_string()),
            }
        }
    };
    let zero = Mat::zeros(n, n);
    let omega = split.omega.as_ref().unwrap_or(&zero);
    let mo = m.add(omega);
    let no = nn.add(omega);
    let fac = match LuFactors::factor(&mo) {
        Ok(f) => f,
        Err(_) => return finish_gave(g, Status::SingularStep, vec![0.0; n], 0, 0, None),
    };
    let mut x = x0.to_vec();
    let mut trace = cfg.trace.then(Vec::new);
    let mut solves = 1usize;
    let blow_up = super::DIVERGE_FACTOR * (1.0 + mat::norm_inf(&g.rhs));
    for iter in 1..=cfg.max_iters {
        if g.converged(&x, cfg.tol) {
            return finish_gave(g, Status::Converged, x, iter - 1, solves, trace);
        }
        let mut rhs = no.matvec(&x);
        let babs = g.b.matvec(&mat::vec_abs(&x));
        for i in 0..n {
            rhs[i] += babs[i] + g.rhs[i];
        }
        x = fac.solve(&rhs);
        solves += 1;
        let r = g.residual_inf(&x);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if r > blow_up {
            return finish_gave(g, Status::Diverged, x, iter, solves, trace);
        }
    }
    let status = if g.converged(&x, cfg.tol) {
        Status::Converged
    } else {
        Status::MaxIters
    };
    finish_gave(g, status, x, cfg.max_iters, solves, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::AveProblem;
    use crate::solvers::solve_picard;

    fn as_gave(p: &AveProblem) -> GaveProblem {
        p.to_gave()
    }

    #[test]
    fn explicit_split_reduces_to_picard() {
        let p = AveProblem::new(Mat::identity(2).scale(2.0), vec![1.0, 1.0]).unwrap();
        let g = as_gave(&p);
        let split = SplittingSpec::explicit(p.a.clone(), Mat::zeros(2, 2));
        let mut cfg = SolverConfig::default();
        cfg.trace = true;
        let a = solve_newton_splitting(&g, &split, &[0.0, 0.0], &cfg);
        let b = solve_picard(&p, Some(&[0.0, 0.0]), &cfg);
        assert_eq!(a.status, Status::Converged);
        // identical per-iteration residual traces
        assert_eq!(a.trace.unwrap(), b.trace.unwrap());
    }

    #[test]
    fn gauss_seidel_preset_converges_with_radius_below_one() {
        let p = AveProblem::new(
            Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]),
            vec![3.0, 10.0],
        )
        .unwrap();
        let g = as_gave(&p);
        let split = SplittingSpec::gauss_seidel();
        let rho = splitting_radius(&g, &split).unwrap();
        assert!(rho < 1.0, "contraction radius {rho}");
        let out = solve_newton_splitting(&g, &split, &[0.0, 0.0], &SolverConfig::default());
        assert_eq!(out.status, Status::Converged);
        assert!(mat::dist_inf(&out.x, &[1.0, 1.0]) < 1e-8);
    }

    #[test]
    fn jacobi_preset_on_diagonally_dominant_instance() {
        let p = AveProblem::new(
            Mat::from_rows(&[vec![5.0, 1.0], vec![1.0, 5.0]]),
            vec![1.0, 1.0],
        )
        .unwrap();
        let out = solve_newton_splitting(
            &as_gave(&p),
            &SplittingSpec::jacobi(),
            &[0.0, 0.0],
            &SolverConfig::default(),
        );
        assert_eq!(out.status, Status::Converged);
        assert!(out.residual_inf <= 1e-10 * 2.0);
    }

    #[test]
    fn sor_preset_alpha_one_equals_gauss_seidel() {
        let a = Mat::from_rows(&[vec![4.0, 1.0], vec![2.0, 5.0]]);
        let (m1, n1) = SplittingSpec::sor(1.0).matrices(&a).unwrap();
        let (m2, n2) = SplittingSpec::gauss_seidel().matrices(&a).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(n1, n2);
    }

    #[test]
    fn preset_needs_nonzero_diagonal() {
        let a = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 1.0]]);
        assert!(SplittingSpec::jacobi().matrices(&a).is_err());
        let p = AveProblem::new(a, vec![1.0, 1.0]).unwrap();
        let out = solve_newton_splitting(
            &as_gave(&p),
            &SplittingSpec::jacobi(),
            &[0.0, 0.0],
            &SolverConfig::default(),
        );
        assert_eq!(out.status, Status::NotApplicable);
    }
}
