//! Solution algorithms. All iterative methods share the `SolverConfig` /
//! `SolveOutcome` contracts and the uniform relative stopping rule
//! ||Ax - |x| - b||_inf <= tol (1 + ||b||_inf), so the benchmark harness can
//! treat them interchangeably. `enumerate_solutions` is the exhaustive
//! orthant oracle the test suites cross-check everything against.

mod auto;
mod closed_form;
mod concave;
mod enumerate;
mod gauss_seidel;
mod newton;
mod picard;
mod sign_accord;
mod signed_ge;
mod sor;
mod splitting;

pub use auto::solve_auto;
pub use closed_form::solve_special_closed_form;
pub use concave::{solve_concave_hybrid, solve_concave_sla, solve_concave_zh};
pub use enumerate::enumerate_solutions;
pub use gauss_seidel::{solve_ggs, solve_pggs};
pub use newton::{solve_newton, solve_newton_inexact, solve_newton_modified, solve_newton_relaxed};
pub use picard::{solve_picard, solve_picard_hss, solve_picard_omega};
pub use sign_accord::{solve_sign_accord, solve_sign_accord_ave};
pub use signed_ge::{signed_ge_class, solve_signed_ge};
pub use sor::{solve_sor_like, solve_sor_like_traced};
pub use splitting::{solve_newton_splitting, splitting_radius, SplitScheme, SplittingSpec};

use crate::core::mat::{self, Mat};
use crate::core::{AveProblem, SignVector, SolveOutcome, Status};

/// Residual blow-up level at which iterations are declared divergent.
pub(crate) const DIVERGE_FACTOR: f64 = 1e12;

pub(crate) fn diverged(p: &AveProblem, r: f64) -> bool {
    r > DIVERGE_FACTOR * (1.0 + mat::norm_inf(&p.b))
}

/// One convex polyhedron of the solution set, living in the orthant fixed by
/// `signs`: either an isolated point or an affine piece.
#[derive(Clone, Debug)]
pub struct OrthantPiece {
    pub signs: SignVector,
    pub kind: PieceKind,
}

#[derive(Clone, Debug)]
pub enum PieceKind {
    Point(Vec<f64>),
    Affine(AffinePiece),
}

/// Affine solution piece: base + span(dirs), clipped to the orthant.
/// Directions are orthonormal; `span` describes the clipped extent for
/// one-dimensional pieces.
#[derive(Clone, Debug)]
pub struct AffinePiece {
    pub base: Vec<f64>,
    pub dirs: Vec<Vec<f64>>,
    pub span: SpanKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpanKind {
    /// base + t dirs[0], t >= 0.
    Ray,
    /// base + t dirs[0], 0 <= t <= len.
    Segment(f64),
    /// Unbounded in both directions.
    Line,
    /// Dimension >= 2, constrained by the orthant inequalities.
    Polyhedral,
}

impl AffinePiece {
    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    /// Distance from x to the piece (infinity norm), honoring the span
    /// bounds and, for polyhedral pieces, the orthant constraints.
    pub fn distance_inf(&self, x: &[f64], signs: &SignVector) -> f64 {
        let d = mat::vec_sub(x, &self.base);
        let proj = match self.span {
            SpanKind::Ray => {
                let t = mat::dot(&d, &self.dirs[0]).max(0.0);
                mat::vec_add(&self.base, &mat::vec_scale(&self.dirs[0], t))
            }
            SpanKind::Segment(len) => {
                let t = mat::dot(&d, &self.dirs[0]).clamp(0.0, len);
                mat::vec_add(&self.base, &mat::vec_scale(&self.dirs[0], t))
            }
            SpanKind::Line => {
                let t = mat::dot(&d, &self.dirs[0]);
                mat::vec_add(&self.base, &mat::vec_scale(&self.dirs[0], t))
            }
            SpanKind::Polyhedral => {
                // project onto the subspace, then clip coordinates that
                // leave the orthant
                let mut y = self.base.clone();
                for dir in &self.dirs {
                    let t = mat::dot(&d, dir);
                    for (yi, di) in y.iter_mut().zip(dir) {
                        *yi += t * di;
                    }
                }
                for _ in 0..x.len() {
                    let viol = (0..y.len())
                        .filter(|&i| signs.0[i] as f64 * y[i] < -1e-12)
                        .max_by(|&i, &j| {
                            let vi = -(signs.0[i] as f64) * y[i];
                            let vj = -(signs.0[j] as f64) * y[j];
                            vi.partial_cmp(&vj).unwrap()
                        });
                    match viol {
                        Some(i) => y[i] = 0.0,
                        None => break,
                    }
                }
                y
            }
        };
        mat::dist_inf(x, &proj)
    }
}

/// The complete per-orthant description of the solution set.
#[derive(Clone, Debug, Default)]
pub struct SolutionSet {
    pub pieces: Vec<OrthantPiece>,
    pub complete: bool,
    pub orthants_pruned: usize,
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn points(&self) -> Vec<&Vec<f64>> {
        self.pieces
            .iter()
            .filter_map(|p| match &p.kind {
                PieceKind::Point(x) => Some(x),
                PieceKind::Affine(_) => None,
            })
            .collect()
    }

    pub fn affine_pieces(&self) -> Vec<(&SignVector, &AffinePiece)> {
        self.pieces
            .iter()
            .filter_map(|p| match &p.kind {
                PieceKind::Affine(a) => Some((&p.signs, a)),
                PieceKind::Point(_) => None,
            })
            .collect()
    }

    /// Distance from x to the nearest piece.
    pub fn distance_inf(&self, x: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for piece in &self.pieces {
            let d = match &piece.kind {
                PieceKind::Point(p) => mat::dist_inf(x, p),
                PieceKind::Affine(a) => a.distance_inf(x, &piece.signs),
            };
            best = best.min(d);
        }
        best
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.distance_inf(x) <= tol
    }

    /// Some solution point: an isolated point if one exists, otherwise the
    /// base point of an affine piece.
    pub fn representative(&self) -> Option<Vec<f64>> {
        for piece in &self.pieces {
            if let PieceKind::Point(x) = &piece.kind {
                return Some(x.clone());
            }
        }
        self.pieces.first().map(|p| match &p.kind {
            PieceKind::Point(x) => x.clone(),
            PieceKind::Affine(a) => a.base.clone(),
        })
    }
}

/// Convexity test for an enumerated solution set: the set is convex exactly
/// when it fits inside a single orthant. Evidence: a sign vector compatible
/// with every piece, or a coordinate taking both signs.
pub fn check_convexity(set: &SolutionSet) -> crate::analysis::Verdict {
    use crate::analysis::{Certificate, Verdict};
    if set.pieces.is_empty() {
        return Verdict::holds("empty set is convex", Vec::new());
    }
    let n = match &set.pieces[0].kind {
        PieceKind::Point(x) => x.len(),
        PieceKind::Affine(a) => a.base.len(),
    };
    let mut has_pos = vec![false; n];
    let mut has_neg = vec![false; n];
    let tol = 1e-9;
    for piece in &set.pieces {
        match &piece.kind {
            PieceKind::Point(x) => {
                for i in 0..n {
                    has_pos[i] |= x[i] > tol;
                    has_neg[i] |= x[i] < -tol;
                }
            }
            PieceKind::Affine(a) => {
                for i in 0..n {
                    let (lo, hi) = coordinate_range(a, i);
                    has_pos[i] |= hi > tol;
                    has_neg[i] |= lo < -tol;
                }
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| has_pos[i] && has_neg[i]) {
        return Verdict::fails(
            format!("coordinate {i} takes both signs across the set"),
            vec![Certificate::Scalar(i as f64)],
        );
    }
    let signs = SignVector((0..n).map(|i| if has_pos[i] { 1 } else { -1 }).collect());
    Verdict::holds(
        "every piece fits one common orthant",
        vec![Certificate::Signs(signs)],
    )
}

fn coordinate_range(a: &AffinePiece, i: usize) -> (f64, f64) {
    match a.span {
        SpanKind::Ray => {
            let v = a.dirs[0][i];
            let base = a.base[i];
            if v > 1e-12 {
                (base, f64::INFINITY)
            } else if v < -1e-12 {
                (f64::NEG_INFINITY, base)
            } else {
                (base, base)
            }
        }
        SpanKind::Segment(len) => {
            let other = a.base[i] + len * a.dirs[0][i];
            (a.base[i].min(other), a.base[i].max(other))
        }
        SpanKind::Line => {
            if a.dirs[0][i].abs() > 1e-12 {
                (f64::NEG_INFINITY, f64::INFINITY)
            } else {
                (a.base[i], a.base[i])
            }
        }
        SpanKind::Polyhedral => {
            // conservative: the orthant constraint pins the sign side
            let moves = a.dirs.iter().any(|d| d[i].abs() > 1e-12);
            if moves {
                if a.base[i] >= 0.0 {
                    (0.0, f64::INFINITY)
                } else {
                    (f64::NEG_INFINITY, 0.0)
                }
            } else {
                (a.base[i], a.base[i])
            }
        }
    }
}

pub(crate) fn finish(
    p: &AveProblem,
    status: Status,
    x: Vec<f64>,
    iterations: usize,
    linear_solves: usize,
    trace: Option<Vec<f64>>,
) -> SolveOutcome {
    let residual_inf = if x.len() == p.n() {
        p.residual_inf(&x)
    } else {
        f64::NAN
    };
    SolveOutcome {
        status,
        x,
        residual_inf,
        iterations,
        linear_solves,
        trace,
        method: None,
    }
}

pub(crate) fn finish_gave(
    g: &crate::core::GaveProblem,
    status: Status,
    x: Vec<f64>,
    iterations: usize,
    linear_solves: usize,
    trace: Option<Vec<f64>>,
) -> SolveOutcome {
    let residual_inf = if x.len() == g.n() {
        g.residual_inf(&x)
    } else {
        f64::NAN
    };
    SolveOutcome {
        status,
        x,
        residual_inf,
        iterations,
        linear_solves,
        trace,
        method: None,
    }
}

/// A - diag(s).
pub(crate) fn a_minus_diag(a: &Mat, s: &SignVector) -> Mat {
    a.add_diag(&mat::vec_scale(&s.as_f64(), -1.0))
}
