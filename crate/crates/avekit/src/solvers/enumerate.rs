//! Exhaustive orthant enumeration. In the orthant fixed by a sign vector s
//! the system is linear: solutions there are exactly
//! { x : (A - diag(s)) x = b, diag(s) x >= 0 }. A nonsingular orthant matrix
//! yields at most one point; a singular one yields an affine piece found by
//! rank-revealing elimination and clipped to the orthant. The box bound
//! |x| <= u = -(I-|A|)^-1 b prunes orthants when rho(|A|) < 1.

use super::{a_minus_diag, AffinePiece, OrthantPiece, PieceKind, SolutionSet, SpanKind};
use crate::analysis::solution_bounds;
use crate::core::linalg::{orthonormalize, rank_revealing_solve, LuFactors};
use crate::core::lp::{solve_lp, LinearProgram, LpStatus, RowKind};
use crate::core::mat::{self};
use crate::core::{gray_signs, AveProblem, SignVector};
use crate::AveError;

const ORTHANT_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-8;

pub fn enumerate_solutions(
    p: &AveProblem,
    prune: bool,
    enum_cap: usize,
) -> Result<SolutionSet, AveError> {
    let n = p.n();
    if n > enum_cap || n > crate::core::ENUM_HARD_CAP {
        return Err(AveError::CapExceeded {
            n,
            cap: enum_cap.min(crate::core::ENUM_HARD_CAP),
        });
    }
    let bounds = if prune { solution_bounds(p).ok() } else { None };
    if let Some(b) = &bounds {
        if b.empty {
            return Ok(SolutionSet {
                pieces: Vec::new(),
                complete: true,
                orthants_pruned: 1usize << n,
            });
        }
    }

    let mut set = SolutionSet {
        pieces: Vec::new(),
        complete: true,
        orthants_pruned: 0,
    };
    let res_tol = ORTHANT_TOL * (1.0 + mat::norm_inf(&p.b));

    for (s, _) in gray_signs(n) {
        if let Some(b) = &bounds {
            if orthant_box_incompatible(p, &s, &b.u) {
                set.orthants_pruned += 1;
                continue;
            }
        }
        let m = a_minus_diag(&p.a, &s);
        match LuFactors::factor(&m) {
            Ok(fac) => {
                let x = fac.solve(&p.b);
                let in_orthant = (0..n).all(|i| s.0[i] as f64 * x[i] >= -ORTHANT_TOL);
                if in_orthant && p.residual_inf(&x) <= res_tol {
                    push_point(&mut set, s, x);
                }
            }
            Err(_) => {
                if let Some(piece) = affine_piece(p, &s, &m) {
                    // the piece contract: its base solves the system
                    if p.residual_inf(&piece.base) <= res_tol {
                        push_affine(&mut set, s, piece);
                    }
                }
            }
        }
    }
    absorb_points_into_affine(&mut set);
    Ok(set)
}

/// Interval evaluation of row i of (A - diag(s)) x over the box-orthant
/// { diag(s) x >= 0, |x| <= u }: if b_i falls outside the attainable range
/// for some row, the orthant cannot contain a solution.
fn orthant_box_incompatible(p: &AveProblem, s: &SignVector, u: &[f64]) -> bool {
    let n = p.n();
    for i in 0..n {
        let mut lo = 0.0f64;
        let mut hi = 0.0f64;
        for j in 0..n {
            let mut c = p.a[(i, j)];
            if i == j {
                c -= s.0[i] as f64;
            }
            // x_j ranges over [0, u_j] (s_j = +1) or [-u_j, 0] (s_j = -1)
            let (xlo, xhi) = if s.0[j] > 0 { (0.0, u[j]) } else { (-u[j], 0.0) };
            lo += (c * xlo).min(c * xhi);
            hi += (c * xlo).max(c * xhi);
        }
        let tol = 1e-9 * (1.0 + p.b[i].abs());
        if p.b[i] < lo - tol || p.b[i] > hi + tol {
            return true;
        }
    }
    false
}

/// Build the orthant-clipped affine piece for a singular orthant matrix.
fn affine_piece(p: &AveProblem, s: &SignVector, m: &crate::core::mat::Mat) -> Option<AffinePiece> {
    let n = p.n();
    let rr = rank_revealing_solve(m, &p.b, None);
    let x0 = rr.particular?;
    let dirs = orthonormalize(&rr.nullspace);
    if dirs.is_empty() {
        // numerically singular but full-rank elimination: treat as a point
        let in_orthant = (0..n).all(|i| s.0[i] as f64 * x0[i] >= -ORTHANT_TOL);
        let res_tol = ORTHANT_TOL * (1.0 + mat::norm_inf(&p.b));
        if in_orthant && p.residual_inf(&x0) <= res_tol {
            return Some(AffinePiece {
                base: x0,
                dirs,
                span: SpanKind::Polyhedral,
            });
        }
        return None;
    }

    if dirs.len() == 1 {
        // one-dimensional: clip the parameter range against the orthant
        let v = &dirs[0];
        let mut t_lo = f64::NEG_INFINITY;
        let mut t_hi = f64::INFINITY;
        for i in 0..n {
            let coef = s.0[i] as f64 * v[i];
            let base = s.0[i] as f64 * x0[i];
            if coef > 1e-12 {
                t_lo = t_lo.max(-base / coef);
            } else if coef < -1e-12 {
                t_hi = t_hi.min(-base / coef);
            } else if base < -ORTHANT_TOL {
                return None; // coordinate fixed outside the orthant
            }
        }
        if t_lo > t_hi + 1e-12 {
            return None;
        }
        let piece = match (t_lo.is_finite(), t_hi.is_finite()) {
            (true, true) => {
                let base = mat::vec_add(&x0, &mat::vec_scale(v, t_lo));
                let len = t_hi - t_lo;
                if len <= 1e-12 {
                    AffinePiece {
                        base,
                        dirs: Vec::new(),
                        span: SpanKind::Polyhedral,
                    }
                } else {
                    AffinePiece {
                        base,
                        dirs: vec![v.clone()],
                        span: SpanKind::Segment(len),
                    }
                }
            }
            (true, false) => AffinePiece {
                base: mat::vec_add(&x0, &mat::vec_scale(v, t_lo)),
                dirs: vec![v.clone()],
                span: SpanKind::Ray,
            },
            (false, true) => AffinePiece {
                base: mat::vec_add(&x0, &mat::vec_scale(v, t_hi)),
                dirs: vec![mat::vec_scale(v, -1.0)],
                span: SpanKind::Ray,
            },
            (false, false) => {
                // least-norm point as the canonical base
                let t = -mat::dot(v, &x0);
                AffinePiece {
                    base: mat::vec_add(&x0, &mat::vec_scale(v, t)),
                    dirs: vec![v.clone()],
                    span: SpanKind::Line,
                }
            }
        };
        return Some(piece);
    }

    // dimension >= 2: certify orthant feasibility by LP over the parameters
    // and take its vertex as the canonical base point
    let dim = dirs.len();
    let mut lp = LinearProgram::new(dim);
    for i in 0..n {
        let row: Vec<f64> = dirs.iter().map(|d| s.0[i] as f64 * d[i]).collect();
        lp.push_row(&row, RowKind::Ge, -(s.0[i] as f64) * x0[i]);
    }
    let sol = solve_lp(&lp);
    if sol.status != LpStatus::Optimal {
        return None;
    }
    let mut base = x0.clone();
    for (t, d) in sol.x.iter().zip(&dirs) {
        for i in 0..n {
            base[i] += t * d[i];
        }
    }
    Some(AffinePiece {
        base,
        dirs,
        span: SpanKind::Polyhedral,
    })
}

fn push_point(set: &mut SolutionSet, signs: SignVector, x: Vec<f64>) {
    // boundary points show up in several orthants: keep one copy
    for piece in &set.pieces {
        if let PieceKind::Point(existing) = &piece.kind {
            if mat::dist_inf(existing, &x) < DEDUP_TOL {
                return;
            }
        }
    }
    set.pieces.push(OrthantPiece {
        signs,
        kind: PieceKind::Point(x),
    });
}

fn push_affine(set: &mut SolutionSet, signs: SignVector, piece: AffinePiece) {
    if piece.dirs.is_empty() {
        push_point(set, signs, piece.base);
        return;
    }
    // drop exact duplicates produced by boundary-sharing orthants
    for existing in &set.pieces {
        if let PieceKind::Affine(a) = &existing.kind {
            if a.dim() == piece.dim()
                && mat::dist_inf(&a.base, &piece.base) < DEDUP_TOL
                && a.span == piece.span
            {
                let same_span = piece.dirs.iter().all(|d| {
                    let mut proj = 0.0;
                    for ad in &a.dirs {
                        proj += mat::dot(d, ad).powi(2);
                    }
                    (proj - 1.0).abs() < 1e-9
                });
                if same_span {
                    return;
                }
            }
        }
    }
    set.pieces.push(OrthantPiece {
        signs,
        kind: PieceKind::Affine(piece),
    });
}

/// Remove point pieces that lie on an affine piece (duplicates across an
/// orthant boundary, e.g. a ray base recurring as the neighbouring orthant's
/// unique point).
fn absorb_points_into_affine(set: &mut SolutionSet) {
    let affine: Vec<(SignVector, AffinePiece)> = set
        .pieces
        .iter()
        .filter_map(|p| match &p.kind {
            PieceKind::Affine(a) => Some((p.signs.clone(), a.clone())),
            PieceKind::Point(_) => None,
        })
        .collect();
    if affine.is_empty() {
        return;
    }
    set.pieces.retain(|piece| match &piece.kind {
        PieceKind::Point(x) => !affine
            .iter()
            .any(|(s, a)| a.distance_inf(x, s) < DEDUP_TOL),
        PieceKind::Affine(_) => true,
    });
}
