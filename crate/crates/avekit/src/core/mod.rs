//! Problem types, solver configuration/outcome contracts, and the shared
//! numerical kernels (dense linear algebra and a simplex LP solver).

pub mod linalg;
pub mod lp;
pub mod mat;

use std::collections::BTreeMap;

use mat::Mat;

/// The square system Ax - |x| = b.
#[derive(Clone, Debug)]
pub struct AveProblem {
    pub a: Mat,
    pub b: Vec<f64>,
}

impl AveProblem {
    pub fn new(a: Mat, b: Vec<f64>) -> Result<Self, crate::AveError> {
        if !a.is_square() || a.rows() != b.len() {
            return Err(crate::AveError::Dim(format!(
                "need square A with matching b: A is {}x{}, b has length {}",
                a.rows(),
                a.cols(),
                b.len()
            )));
        }
        if a.rows() == 0 {
            return Err(crate::AveError::Dim("empty system".into()));
        }
        if !a.all_finite() || !b.iter().all(|v| v.is_finite()) {
            return Err(crate::AveError::Dim("entries must be finite".into()));
        }
        Ok(AveProblem { a, b })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// The defect Ax - |x| - b.
    pub fn residual(&self, x: &[f64]) -> Result<Vec<f64>, crate::AveError> {
        if x.len() != self.n() {
            return Err(crate::AveError::Dim(format!(
                "x has length {}, expected {}",
                x.len(),
                self.n()
            )));
        }
        let ax = self.a.matvec(x);
        Ok((0..self.n()).map(|i| ax[i] - x[i].abs() - self.b[i]).collect())
    }

    pub fn residual_inf(&self, x: &[f64]) -> f64 {
        mat::norm_inf(&self.residual(x).expect("dimension checked by caller"))
    }

    /// Relative convergence test shared by every iterative solver:
    /// ||Ax - |x| - b||_inf <= tol * (1 + ||b||_inf).
    pub fn converged(&self, x: &[f64], tol: f64) -> bool {
        self.residual_inf(x) <= tol * (1.0 + mat::norm_inf(&self.b))
    }

    /// View as a generalized problem with B = I.
    pub fn to_gave(&self) -> GaveProblem {
        GaveProblem {
            a: self.a.clone(),
            b: Mat::identity(self.n()),
            rhs: self.b.clone(),
        }
    }
}

/// The generalized system Ax - B|x| = b. Solvers require square matrices;
/// transforms may construct rectangular instances.
#[derive(Clone, Debug)]
pub struct GaveProblem {
    pub a: Mat,
    pub b: Mat,
    pub rhs: Vec<f64>,
}

impl GaveProblem {
    pub fn new(a: Mat, b: Mat, rhs: Vec<f64>) -> Result<Self, crate::AveError> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(crate::AveError::Dim(
                "A and B must have identical shape".into(),
            ));
        }
        if a.rows() != rhs.len() {
            return Err(crate::AveError::Dim(
                "rhs length must match the row count".into(),
            ));
        }
        if !a.all_finite() || !b.all_finite() || !rhs.iter().all(|v| v.is_finite()) {
            return Err(crate::AveError::Dim("entries must be finite".into()));
        }
        Ok(GaveProblem { a, b, rhs })
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn is_square(&self) -> bool {
        self.a.is_square()
    }

    /// Ax - B|x| - b.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let ax = self.a.matvec(x);
        let babs = self.b.matvec(&mat::vec_abs(x));
        (0..self.m()).map(|i| ax[i] - babs[i] - self.rhs[i]).collect()
    }

    pub fn residual_inf(&self, x: &[f64]) -> f64 {
        mat::norm_inf(&self.residual(x))
    }

    pub fn converged(&self, x: &[f64], tol: f64) -> bool {
        self.residual_inf(x) <= tol * (1.0 + mat::norm_inf(&self.rhs))
    }
}

/// Sign convention used throughout: sgn(r) = 1 for r > 0 and -1 otherwise,
/// so sgn(0) = -1. With D(x) = diag(sgn(x)) this keeps |x| = D(x) x exact.
pub fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// A vector with entries in {-1, +1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn from_x(x: &[f64]) -> Self {
        SignVector(x.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect())
    }

    pub fn all_minus(n: usize) -> Self {
        SignVector(vec![-1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&s| s as f64).collect()
    }

    /// diag(s) x
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.0.iter().zip(x).map(|(&s, &v)| s as f64 * v).collect()
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }
}

/// diag(sgn(x)) as a sign vector.
pub fn sign_diag(x: &[f64]) -> SignVector {
    SignVector::from_x(x)
}

/// Iterator over all 2^n sign vectors in Gray-code order (exactly one entry
/// flips between consecutive items). Panics above the hard enumeration cap.
pub struct GraySigns {
    n: usize,
    counter: u64,
    total: u64,
    current: Vec<i8>,
}

/// Hard cap for any 2^n enumeration.
pub const ENUM_HARD_CAP: usize = 22;

pub fn gray_signs(n: usize) -> GraySigns {
    assert!(
        n <= ENUM_HARD_CAP,
        "2^{n} orthants exceed the hard enumeration cap of 2^{ENUM_HARD_CAP}"
    );
    GraySigns {
        n,
        counter: 0,
        total: 1u64 << n,
        current: vec![1; n],
    }
}

impl Iterator for GraySigns {
    /// (sign vector, index of the entry flipped relative to the previous one)
    type Item = (SignVector, Option<usize>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.counter >= self.total {
            return None;
        }
        if self.counter == 0 {
            self.counter = 1;
            return Some((SignVector(self.current.clone()), None));
        }
        // Gray code: bit flipped at step k is the ruler sequence of k
        let flip = self.counter.trailing_zeros() as usize;
        debug_assert!(flip < self.n);
        self.current[flip] = -self.current[flip];
        self.counter += 1;
        Some((SignVector(self.current.clone()), Some(flip)))
    }
}

/// Shared solver configuration. `params` carries named scalars (omega, alpha,
/// theta, beta, theta_res, ...); `omega_matrix` the optional matrix shift.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iters: usize,
    pub params: BTreeMap<String, f64>,
    pub omega_matrix: Option<Mat>,
    pub inner_iters: Option<Vec<usize>>,
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-10,
            max_iters: 500,
            params: BTreeMap::new(),
            omega_matrix: None,
            inner_iters: None,
            trace: false,
        }
    }
}

impl SolverConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, it: usize) -> Self {
        self.max_iters = it;
        self
    }

    pub fn with_param(mut self, k: &str, v: f64) -> Self {
        self.params.insert(k.to_string(), v);
        self
    }

    pub fn param(&self, k: &str, default: f64) -> f64 {
        self.params.get(k).copied().unwrap_or(default)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIters,
    SingularStep,
    Stalled,
    Diverged,
    NotApplicable,
    /// Sign-accord specific: the relevant interval matrix is not regular.
    NotRegular,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "Converged",
            Status::MaxIters => "MaxIters",
            Status::SingularStep => "SingularStep",
            Status::Stalled => "Stalled",
            Status::Diverged => "Diverged",
            Status::NotApplicable => "NotApplicable",
            Status::NotRegular => "NotRegular",
        }
    }
}

/// Terminal state of a solver run.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: Status,
    pub x: Vec<f64>,
    /// Infinity norm of Ax - |x| - b (or the generalized residual).
    pub residual_inf: f64,
    pub iterations: usize,
    pub linear_solves: usize,
    pub trace: Option<Vec<f64>>,
    /// Dispatcher note (set by solve_auto) or solver-specific detail.
    pub method: Option<String>,
}

impl SolveOutcome {
    pub fn new(status: Status, x: Vec<f64>, residual_inf: f64) -> Self {
        SolveOutcome {
            status,
            x,
            residual_inf,
            iterations: 0,
            linear_solves: 0,
            trace: None,
            method: None,
        }
    }

    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_reference_points() {
        // three known solutions / values
        let p = AveProblem::new(
            Mat::from_rows(&[vec![0.0, 0.0], vec![-1.0, -0.5]]),
            vec![-1.0, -1.0],
        )
        .unwrap();
        assert_eq!(p.residual(&[1.0, 0.0]).unwrap(), vec![0.0, 0.0]);

        let q = AveProblem::new(
            Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]),
            vec![3.0, 10.0],
        )
        .unwrap();
        assert_eq!(q.residual(&[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);

        // x = 0 gives -b for any instance
        assert_eq!(q.residual(&[0.0, 0.0]).unwrap(), vec![-3.0, -10.0]);
    }

    #[test]
    fn residual_dimension_error() {
        let p = AveProblem::new(Mat::identity(2), vec![1.0, 1.0]).unwrap();
        assert!(p.residual(&[1.0]).is_err());
    }

    #[test]
    fn sign_convention() {
        assert_eq!(sign_diag(&[2.0, -3.0]).0, vec![1, -1]);
        assert_eq!(sign_diag(&[0.0, 0.0]).0, vec![-1, -1]);
        assert_eq!(sign_diag(&[1e-300, -0.0]).0, vec![1, -1]);
    }

    #[test]
    fn abs_identity_via_sign_diag() {
        let xs = [vec![1.5, -2.0, 0.0], vec![0.0, -0.0, 3.0]];
        for x in &xs {
            let s = sign_diag(x);
            assert_eq!(s.apply(x), mat::vec_abs(x));
        }
    }

    #[test]
    fn gray_code_flips_one_entry() {
        let mut seen = std::collections::HashSet::new();
        let mut prev: Option<Vec<i8>> = None;
        for (s, flip) in gray_signs(4) {
            if let (Some(p), Some(f)) = (&prev, flip) {
                let diff: Vec<usize> = (0..4).filter(|&i| p[i] != s.0[i]).collect();
                assert_eq!(diff, vec![f]);
            }
            seen.insert(s.0.clone());
            prev = Some(s.0);
        }
        assert_eq!(seen.len(), 16);
    }
}
