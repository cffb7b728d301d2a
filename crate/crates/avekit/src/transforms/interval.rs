//! Interval-system bridges: hull vertices of the solution set of an interval
//! linear system via sign-accord-solved generalized equations, Gerlach
//! weak/strong membership for interval inequality systems, and the theorem
//! of alternatives deciding regularity of [A - D, A + D] with a constructive
//! witness in the irregular case.

use crate::core::linalg::{det_or_singular, rank_revealing_solve};
use crate::core::mat::{self, Mat};
use crate::core::{gray_signs, AveProblem, GaveProblem, SignVector};
use crate::solvers::solve_sign_accord;
use crate::core::{SolverConfig, Status};
use crate::AveError;

const MEMBERSHIP_TOL: f64 = 1e-10;

/// [center - radius, center + radius] entrywise; radius >= 0.
#[derive(Clone, Debug)]
pub struct IntervalMatrix {
    pub center: Mat,
    pub radius: Mat,
}

impl IntervalMatrix {
    pub fn new(center: Mat, radius: Mat) -> Result<Self, AveError> {
        if center.rows() != radius.rows() || center.cols() != radius.cols() {
            return Err(AveError::Dim("center/radius shape mismatch".into()));
        }
        if !radius.entrywise_ge(0.0) {
            return Err(AveError::Parameter("radius must be nonnegative".into()));
        }
        Ok(IntervalMatrix { center, radius })
    }

    pub fn n(&self) -> usize {
        self.center.rows()
    }
}

#[derive(Clone, Debug)]
pub struct IntervalVector {
    pub center: Vec<f64>,
    pub radius: Vec<f64>,
}

impl IntervalVector {
    pub fn new(center: Vec<f64>, radius: Vec<f64>) -> Result<Self, AveError> {
        if center.len() != radius.len() {
            return Err(AveError::Dim("center/radius length mismatch".into()));
        }
        if radius.iter().any(|&r| r < 0.0) {
            return Err(AveError::Parameter("radius must be nonnegative".into()));
        }
        Ok(IntervalVector { center, radius })
    }

    pub fn exact(center: Vec<f64>) -> Self {
        let radius = vec![0.0; center.len()];
        IntervalVector { center, radius }
    }
}

/// Outcome of the alternatives test on (A, D >= 0): either every |B| <= D
/// and every b admit a unique solution of Ax - B|x| = b, or |Ax| <= D|x| has
/// a nontrivial solution.
#[derive(Clone, Debug)]
pub enum Alternatives {
    UniqueForAll {
        det_range: (f64, f64),
    },
    NontrivialWitness {
        x: Vec<f64>,
        member: Mat,
    },
}

/// Decide the alternatives via determinant signs of the vertex matrices
/// A - diag(s) D diag(s'), the classical two-sided vertex criterion for
/// regularity of [A - D, A + D]. The enumeration walks all 2^(2n) sign
/// pairs, so the effective cap is enum_cap / 2.
pub fn theorem_of_alternatives(
    a: &Mat,
    d: &Mat,
    enum_cap: usize,
) -> Result<Alternatives, AveError> {
    let n = a.rows();
    if !d.entrywise_ge(0.0) {
        return Err(AveError::Parameter("D must be entrywise nonnegative".into()));
    }
    if 2 * n > enum_cap.min(crate::core::ENUM_HARD_CAP) {
        return Err(AveError::CapExceeded {
            n,
            cap: enum_cap.min(crate::core::ENUM_HARD_CAP) / 2,
        });
    }
    let member_of = |s: &[i8]| -> Mat {
        // A - diag(s) D diag(s') with s = first n signs, s' = last n signs
        let mut m = a.clone();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= s[i] as f64 * d[(i, j)] * s[n + j] as f64;
            }
        }
        m
    };
    let mut det_lo = f64::INFINITY;
    let mut det_hi = f64::NEG_INFINITY;
    let mut singular: Option<Mat> = None;
    let mut prev: Option<(Vec<i8>, f64)> = None;
    for (sv, flipped) in gray_signs(2 * n) {
        let m = member_of(&sv.0);
        let det = det_or_singular(&m).unwrap_or(0.0);
        if det == 0.0 && singular.is_none() {
            singular = Some(m);
        }
        det_lo = det_lo.min(det);
        det_hi = det_hi.max(det);
        if singular.is_none() {
            if let (Some((prev_s, prev_det)), Some(f)) = (&prev, flipped) {
                if prev_det * det < 0.0 {
                    // determinant is affine in the flipped sign coordinate:
                    // interpolate the root along that edge
                    let root = interpolate_edge(a, d, prev_s, &sv.0, f, *prev_det, det);
                    singular = Some(root);
                }
            }
        }
        prev = Some((sv.0, det));
    }
    if let Some(member) = singular {
        let rr = rank_revealing_solve(&member, &vec![0.0; n], None);
        let x = rr
            .nullspace
            .first()
            .cloned()
            .unwrap_or_else(|| vec![0.0; n]);
        debug_assert!(witness_valid(a, d, &x));
        return Ok(Alternatives::NontrivialWitness { x, member });
    }
    Ok(Alternatives::UniqueForAll {
        det_range: (det_lo, det_hi),
    })
}

fn interpolate_edge(
    a: &Mat,
    d: &Mat,
    _prev: &[i8],
    cur: &[i8],
    flipped: usize,
    g_prev: f64,
    g_cur: f64,
) -> Mat {
    let n = a.rows();
    // parametrize the flipped coordinate by u in [-1, 1] relative to its
    // current sign: u = 1 is `cur`, u = -1 the previous vertex
    let t = -1.0 - 2.0 * g_prev / (g_cur - g_prev); // affine root in [-1, 1]
    let mut m = a.clone();
    for i in 0..n {
        for j in 0..n {
            let si = if i == flipped && flipped < n {
                t * cur[i] as f64
            } else {
                cur[i] as f64
            };
            let sj = if flipped >= n && j == flipped - n {
                t * cur[n + j] as f64
            } else {
                cur[n + j] as f64
            };
            m[(i, j)] -= si * d[(i, j)] * sj;
        }
    }
    m
}

fn witness_valid(a: &Mat, d: &Mat, x: &[f64]) -> bool {
    let ax = a.matvec(x);
    let dax = d.matvec(&mat::vec_abs(x));
    ax.iter().zip(&dax).all(|(&l, &r)| l.abs() <= r + 1e-9)
}

/// Hull vertices of the solution set of [A]x = [b]: for every s in {+-1}^n
/// the vertex x_s solves the generalized system
/// Ac x - diag(s) Ad |x| = bc + diag(s) bd, computed by the sign accord
/// algorithm. Requires [A] regular (verified first when n <= enum_cap).
pub fn interval_hull_vertices(
    ai: &IntervalMatrix,
    bi: &IntervalVector,
    enum_cap: usize,
) -> Result<Vec<(SignVector, Vec<f64>)>, AveError> {
    let n = ai.n();
    if 2 * n <= enum_cap {
        match theorem_of_alternatives(&ai.center, &ai.radius, enum_cap)? {
            Alternatives::UniqueForAll { .. } => {}
            Alternatives::NontrivialWitness { member, .. } => {
                return Err(AveError::NotApplicable(format!(
                    "interval matrix is not regular; singular member {member:?}"
                )));
            }
        }
    }
    let mut cfg = SolverConfig::default();
    cfg.max_iters = 1usize << n.min(20);
    let mut out = Vec::new();
    for (s, _) in gray_signs(n) {
        let mut b_s = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                b_s[(i, j)] = s.0[i] as f64 * ai.radius[(i, j)];
            }
        }
        let rhs: Vec<f64> = (0..n)
            .map(|i| bi.center[i] + s.0[i] as f64 * bi.radius[i])
            .collect();
        let g = GaveProblem::new(ai.center.clone(), b_s, rhs)?;
        let sol = solve_sign_accord(&g, &cfg);
        if sol.status != Status::Converged {
            return Err(AveError::NotApplicable(format!(
                "sign accord returned {:?} for s = {:?}: interval matrix not regular",
                sol.status, s.0
            )));
        }
        out.push((s, sol.x));
    }
    Ok(out)
}

/// Gerlach membership for the interval inequality system [A] x <= [b]:
/// weak (some member satisfies it): Ac x - Ad |x| <= bc + bd;
/// strong (every member satisfies it): Ac x + Ad |x| <= bc - bd.
pub fn weak_strong_membership(
    ai: &IntervalMatrix,
    bi: &IntervalVector,
    x: &[f64],
) -> (bool, bool) {
    let ax = ai.center.matvec(x);
    let rad = ai.radius.matvec(&mat::vec_abs(x));
    let mut weak = true;
    let mut strong = true;
    for i in 0..ax.len() {
        let upper = bi.center[i] + bi.radius[i];
        let lower = bi.center[i] - bi.radius[i];
        if ax[i] - rad[i] > upper + MEMBERSHIP_TOL {
            weak = false;
        }
        if ax[i] + rad[i] > lower + MEMBERSHIP_TOL {
            strong = false;
        }
    }
    (weak, strong)
}

/// x solves Ax - |x| = b iff it is a weak solution of [A-I, A+I] x <= b and
/// a strong solution of the negated system -[A-I, A+I] x <= -b.
pub fn ave_membership(p: &AveProblem, x: &[f64]) -> bool {
    let n = p.n();
    let ai = IntervalMatrix {
        center: p.a.clone(),
        radius: Mat::identity(n),
    };
    let bi = IntervalVector::exact(p.b.clone());
    let (weak, _) = weak_strong_membership(&ai, &bi, x);
    let neg = IntervalMatrix {
        center: p.a.scale(-1.0),
        radius: Mat::identity(n),
    };
    let neg_b = IntervalVector::exact(mat::vec_scale(&p.b, -1.0));
    let (_, strong) = weak_strong_membership(&neg, &neg_b, x);
    weak && strong
}
