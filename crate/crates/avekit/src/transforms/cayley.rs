//! Cayley-type matrix transforms connecting the AVE <-> LCP reductions:
//! C(A) = (I+A)^-1 (I-A), AL(A) = (A+I)^-1 (A-I), LA(Q) = (I-Q)^-1 (I+Q),
//! with the identities AL(A) = -C(A) and LA(Q) = C(-Q).

use crate::core::linalg::LuFactors;
use crate::core::mat::Mat;
use crate::AveError;

pub fn cayley(a: &Mat) -> Result<Mat, AveError> {
    let n = a.rows();
    let plus = a.add_diag(&vec![1.0; n]); // I + A
    let fac = LuFactors::factor(&plus)
        .map_err(|_| AveError::Singular("I + A must be nonsingular".into()))?;
    let minus = a.scale(-1.0).add_diag(&vec![1.0; n]); // I - A
    Ok(fac.inverse().matmul(&minus))
}

pub fn transform_al(a: &Mat) -> Result<Mat, AveError> {
    let n = a.rows();
    let plus = a.add_diag(&vec![1.0; n]);
    let fac = LuFactors::factor(&plus)
        .map_err(|_| AveError::Singular("A + I must be nonsingular".into()))?;
    let minus = a.add_diag(&vec![-1.0; n]);
    Ok(fac.inverse().matmul(&minus))
}

pub fn transform_la(q: &Mat) -> Result<Mat, AveError> {
    let n = q.rows();
    let i_minus_q = q.scale(-1.0).add_diag(&vec![1.0; n]);
    let fac = LuFactors::factor(&i_minus_q)
        .map_err(|_| AveError::Singular("I - Q must be nonsingular".into()))?;
    let i_plus_q = q.add_diag(&vec![1.0; n]);
    Ok(fac.inverse().matmul(&i_plus_q))
}
