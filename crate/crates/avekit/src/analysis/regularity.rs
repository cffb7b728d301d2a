//! Exact regularity test for the one-parameter matrix families
//! { A + B diag(d) : d in [-1, 1]^n } via determinant-sign enumeration over
//! the 2^n sign vertices, plus construction of an explicit singular member
//! when the test fails.
//!
//! The determinant is affine in each d_i separately, so the family contains a
//! singular matrix iff the vertex determinants are not all nonzero of one
//! sign. For the certificate we canonicalize to the singular member with the
//! smallest |t| such that A + t B diag(s) is singular for some sign vector s;
//! on the classic 2x2 counterexamples this reproduces the textbook members.

use crate::core::linalg::{det_or_singular, extreme_singular_values, LuFactors};
use crate::core::mat::Mat;
use crate::core::{gray_signs, SignVector};
use crate::AveError;

#[derive(Clone, Debug)]
pub struct RegularityCheck {
    pub regular: bool,
    /// Explicit singular member of the family, when not regular.
    pub singular_member: Option<Mat>,
    /// Sign vector associated with the singular member (its diag direction).
    pub member_signs: Option<SignVector>,
    /// Range of vertex determinants seen (min, max).
    pub det_range: (f64, f64),
}

fn member(a: &Mat, b: &Mat, t: f64, s: &SignVector) -> Mat {
    // A + t * B * diag(s)
    let n = a.rows();
    let mut m = a.clone();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] += t * b[(i, j)] * s.0[j] as f64;
        }
    }
    m
}

fn det_of(a: &Mat, b: &Mat, t: f64, s: &SignVector) -> f64 {
    det_or_singular(&member(a, b, t, s)).unwrap_or(0.0)
}

/// Decide whether every matrix A + B diag(d), |d_i| <= 1, is nonsingular.
pub fn family_regular(a: &Mat, b: &Mat, enum_cap: usize) -> Result<RegularityCheck, AveError> {
    let n = a.rows();
    let cap = enum_cap.min(crate::core::ENUM_HARD_CAP);
    if n > cap {
        return Err(AveError::CapExceeded { n, cap });
    }
    let mut det_lo = f64::INFINITY;
    let mut det_hi = f64::NEG_INFINITY;
    let mut zero_vertex: Option<SignVector> = None;
    let mut flip_edge: Option<(SignVector, usize)> = None; // (vertex after flip, flipped idx)
    let mut prev_sign = 0i8;
    for (s, flipped) in gray_signs(n) {
        let det = match det_or_singular(&member(a, b, 1.0, &s)) {
            Some(d) => d,
            None => {
                if zero_vertex.is_none() {
                    zero_vertex = Some(s.clone());
                }
                0.0
            }
        };
        det_lo = det_lo.min(det);
        det_hi = det_hi.max(det);
        let sign = if det > 0.0 {
            1
        } else if det < 0.0 {
            -1
        } else {
            0
        };
        if let Some(f) = flipped {
            if flip_edge.is_none() && sign != 0 && prev_sign != 0 && sign != prev_sign {
                flip_edge = Some((s.clone(), f));
            }
        }
        if sign != 0 {
            prev_sign = sign;
        }
    }
    let regular = zero_vertex.is_none() && det_lo * det_hi > 0.0;
    if regular {
        return Ok(RegularityCheck {
            regular: true,
            singular_member: None,
            member_signs: None,
            det_range: (det_lo, det_hi),
        });
    }

    // Construct a singular member. Prefer the min-|t| canonical member; fall
    // back to a singular vertex or to interpolation along the flip edge.
    let canon = if n <= 12 { min_t_member(a, b) } else { None };
    let (m, s) = if let Some((t, s)) = canon {
        (member(a, b, t, &s), s)
    } else if let Some(s) = zero_vertex {
        (member(a, b, 1.0, &s), s)
    } else {
        let (s_after, f) = flip_edge.expect("sign flip must exist when not regular");
        // determinant is affine in coordinate f: interpolate between the two
        // vertices that differ there
        let mut s_before = s_after.clone();
        s_before.flip(f);
        let g_hi = det_of(a, b, 1.0, &s_after); // d_f = s_after[f]
        // parametrize d_f = u * s_after[f], u in [-1, 1]; u = -1 is s_before
        let g_lo = det_of_partial(a, b, &s_after, f, -1.0);
        debug_assert!(g_lo * g_hi <= 0.0);
        let u = if (g_hi - g_lo).abs() > 0.0 {
            -1.0 - 2.0 * g_lo / (g_hi - g_lo)
        } else {
            0.0
        };
        let mut mm = member(a, b, 1.0, &s_after);
        // fix column f: entries a_ij + u * s_after[f] * b_if
        let n_ = a.rows();
        for i in 0..n_ {
            mm[(i, f)] = a[(i, f)] + u * s_after.0[f] as f64 * b[(i, f)];
        }
        (mm, s_after)
    };
    Ok(RegularityCheck {
        regular: false,
        singular_member: Some(m),
        member_signs: Some(s),
        det_range: (det_lo, det_hi),
    })
}

/// det with coordinate `f` of the diag direction replaced by `u * s[f]`.
fn det_of_partial(a: &Mat, b: &Mat, s: &SignVector, f: usize, u: f64) -> f64 {
    let n = a.rows();
    let mut m = member(a, b, 1.0, s);
    for i in 0..n {
        m[(i, f)] = a[(i, f)] + u * s.0[f] as f64 * b[(i, f)];
    }
    det_or_singular(&m).unwrap_or(0.0)
}

/// Scan g_s(t) = det(A + t B diag(s)) over all sign vectors for the root of
/// smallest magnitude in [-1, 1]. Deterministic: gray-code order, left-to-
/// right grid, first winner kept on ties.
fn min_t_member(a: &Mat, b: &Mat) -> Option<(f64, SignVector)> {
    let n = a.rows();
    const GRID: usize = 64;
    let mut best: Option<(f64, f64, SignVector)> = None; // (|t|, t, s)
    for (s, _) in gray_signs(n) {
        let ts: Vec<f64> = (0..=GRID)
            .map(|k| -1.0 + 2.0 * k as f64 / GRID as f64)
            .collect();
        let gs: Vec<f64> = ts.iter().map(|&t| det_of(a, b, t, &s)).collect();
        let gmax = gs.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        let zero_tol = 1e-12 * gmax.max(1e-300);
        for k in 0..=GRID {
            let mut root: Option<f64> = None;
            if gs[k].abs() <= zero_tol {
                root = Some(ts[k]);
            } else if k > 0 && gs[k - 1] * gs[k] < 0.0 {
                let (mut lo, mut hi, mut glo) = (ts[k - 1], ts[k], gs[k - 1]);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    let gm = det_of(a, b, mid, &s);
                    if glo * gm <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        glo = gm;
                    }
                }
                root = Some(0.5 * (lo + hi));
            }
            if let Some(r) = root {
                let better = match &best {
                    None => true,
                    Some((ba, _, _)) => r.abs() < ba - 1e-12,
                };
                if better {
                    best = Some((r.abs(), r, s.clone()));
                }
            }
        }
    }
    best.map(|(_, t, s)| (t, s))
}

/// Cheap singularity check used by debug assertions on produced members.
pub fn is_numerically_singular(m: &Mat) -> bool {
    if LuFactors::factor(m).is_err() {
        return true;
    }
    let (lo, hi) = extreme_singular_values(m);
    lo <= 1e-8 * hi.max(1.0)
}
