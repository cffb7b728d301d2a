//! Executable certificates: solvability, unique solvability, nonexistence,
//! solution bounds, solution-set structure, condition numbers and error
//! bounds. Every Holds/Fails verdict carries evidence that an independent
//! checker can validate; Unknown carries a reason.

pub mod regularity;

use std::collections::BTreeMap;

use crate::core::linalg::{
    extreme_singular_values, inverse, norm, spectral_radius_nonneg, LuFactors,
};
use crate::core::lp::{solve_lp, LinearProgram, LpStatus, RowKind};
use crate::core::mat::{self, Mat};
use crate::core::{gray_signs, AveProblem, SignVector};
use crate::AveError;

pub use regularity::{family_regular, RegularityCheck};

/// Slack for strict inequalities in certificates.
pub const STRICT_SLACK: f64 = 1e-12;
/// Floor for entrywise nonnegativity checks.
pub const NONNEG_FLOOR: f64 = -1e-12;
/// Default cap on 2^n enumerations.
pub const DEFAULT_ENUM_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictState {
    Holds,
    Fails,
    Unknown,
}

/// Machine-checkable evidence attached to a verdict.
#[derive(Clone, Debug)]
pub enum Certificate {
    Signs(SignVector),
    Matrix(Mat),
    Vector(Vec<f64>),
    Scalar(f64),
    Reason(String),
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub state: VerdictState,
    pub evidence: Vec<Certificate>,
    pub detail: String,
}

impl Verdict {
    pub fn holds(detail: impl Into<String>, evidence: Vec<Certificate>) -> Self {
        Verdict {
            state: VerdictState::Holds,
            evidence,
            detail: detail.into(),
        }
    }

    pub fn fails(detail: impl Into<String>, evidence: Vec<Certificate>) -> Self {
        Verdict {
            state: VerdictState::Fails,
            evidence,
            detail: detail.into(),
        }
    }

    pub fn unknown(reason: impl Into<String>) -> Self {
        Verdict {
            state: VerdictState::Unknown,
            evidence: Vec::new(),
            detail: reason.into(),
        }
    }

    pub fn holds_state(&self) -> bool {
        self.state == VerdictState::Holds
    }

    pub fn matrix_evidence(&self) -> Option<&Mat> {
        self.evidence.iter().find_map(|c| match c {
            Certificate::Matrix(m) => Some(m),
            _ => None,
        })
    }

    pub fn signs_evidence(&self) -> Option<&SignVector> {
        self.evidence.iter().find_map(|c| match c {
            Certificate::Signs(s) => Some(s),
            _ => None,
        })
    }

    pub fn vector_evidence(&self) -> Option<&Vec<f64>> {
        self.evidence.iter().find_map(|c| match c {
            Certificate::Vector(v) => Some(v),
            _ => None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn as_str(&self) -> &'static str {
        match self {
            TriState::Yes => "Yes",
            TriState::No => "No",
            TriState::Unknown => "Unknown",
        }
    }
}

/// Box and polyhedron enclosing every solution (valid when rho(|A|) < 1).
#[derive(Clone, Debug)]
pub struct SolutionBounds {
    /// |x| <= u for every solution.
    pub u: Vec<f64>,
    /// Some u_i is negative: the bound set is empty, certifying unsolvability.
    pub empty: bool,
    pub rho_abs_a: f64,
}

impl SolutionBounds {
    /// Membership in the box part of the enclosure.
    pub fn box_contains(&self, x: &[f64], tol: f64) -> bool {
        !self.empty && x.iter().zip(&self.u).all(|(&xi, &ui)| xi.abs() <= ui + tol)
    }
}

/// Named verdicts plus summary flags.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub verdicts: BTreeMap<String, Verdict>,
    pub unique_for_all_b: TriState,
    pub solvable_hint: TriState,
    pub bounds: Option<SolutionBounds>,
}

impl AnalysisReport {
    fn new() -> Self {
        AnalysisReport {
            verdicts: BTreeMap::new(),
            unique_for_all_b: TriState::Unknown,
            solvable_hint: TriState::Unknown,
            bounds: None,
        }
    }

    pub fn verdict(&self, key: &str) -> Option<&Verdict> {
        self.verdicts.get(key)
    }

    pub fn any_holds(&self) -> bool {
        self.verdicts.values().any(|v| v.holds_state())
    }
}

fn scalar_cert(v: f64) -> Vec<Certificate> {
    vec![Certificate::Scalar(v)]
}

// ---------------------------------------------------------------------------
// unique solvability for every right-hand side
// ---------------------------------------------------------------------------

/// Layered test for "unique solution for each b": cheap sufficient conditions
/// first (sigma_min > 1; rho(|A^-1|) < 1; strict diagonal dominance; shifted
/// H-matrix), then the exact determinant-sign test when n <= enum_cap.
pub fn check_unique_all_rhs(a: &Mat, enum_cap: usize) -> AnalysisReport {
    let n = a.rows();
    let mut rep = AnalysisReport::new();

    // sigma_min(A) > 1
    let (smin, _) = extreme_singular_values(a);
    rep.verdicts.insert(
        "01_sigma_min_gt_one".into(),
        if smin > 1.0 + STRICT_SLACK {
            Verdict::holds(format!("sigma_min = {smin:.6e} > 1"), scalar_cert(smin))
        } else {
            Verdict::fails(format!("sigma_min = {smin:.6e} <= 1"), scalar_cert(smin))
        },
    );

    // rho(|A^-1|) < 1
    match inverse(a) {
        Ok(ai) => {
            let v = match spectral_radius_nonneg(&ai.abs()) {
                Ok(rho) if rho < 1.0 - STRICT_SLACK => {
                    Verdict::holds(format!("rho(|A^-1|) = {rho:.6e} < 1"), scalar_cert(rho))
                }
                Ok(rho) => {
                    Verdict::fails(format!("rho(|A^-1|) = {rho:.6e} >= 1"), scalar_cert(rho))
                }
                Err(AveError::NonConvergence { estimate }) => Verdict::unknown(format!(
                    "power iteration cap reached; last estimate {estimate:.6e}"
                )),
                Err(e) => Verdict::unknown(e.to_string()),
            };
            rep.verdicts.insert("02_rho_abs_inverse_lt_one".into(), v);
        }
        Err(_) => {
            // a singular A is itself a member of the family: not regular
            rep.verdicts.insert(
                "02_rho_abs_inverse_lt_one".into(),
                Verdict::fails(
                    "A is singular; A itself is a singular member",
                    vec![Certificate::Matrix(a.clone())],
                ),
            );
            rep.unique_for_all_b = TriState::No;
        }
    }

    // strict diagonal dominance |a_ii| > 1 + sum_{j != i} |a_ij|
    let mut sdd_margin = f64::INFINITY;
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        sdd_margin = sdd_margin.min(a[(i, i)].abs() - 1.0 - off);
    }
    rep.verdicts.insert(
        "03_strict_diag_dominance".into(),
        if sdd_margin > STRICT_SLACK {
            Verdict::holds(
                format!("min_i (|a_ii| - 1 - offdiag row sum) = {sdd_margin:.6e}"),
                scalar_cert(sdd_margin),
            )
        } else {
            Verdict::fails(
                format!("row margin {sdd_margin:.6e} <= 0"),
                scalar_cert(sdd_margin),
            )
        },
    );

    // A - I is an H-matrix with positive diagonal
    rep.verdicts.insert(
        "04_shifted_h_matrix".into(),
        h_matrix_with_positive_diag(&a.add_diag(&vec![-1.0; n])),
    );

    // exact determinant-sign test
    if rep.unique_for_all_b != TriState::No {
        let exact = match family_regular(a, &Mat::identity(n), enum_cap) {
            Ok(chk) => {
                rep.unique_for_all_b = if chk.regular { TriState::Yes } else { TriState::No };
                exact_verdict(&chk)
            }
            Err(AveError::CapExceeded { n, cap }) => {
                Verdict::unknown(format!("n = {n} exceeds enumeration cap {cap}"))
            }
            Err(e) => Verdict::unknown(e.to_string()),
        };
        rep.verdicts.insert("05_exact_regularity".into(), exact);
    } else {
        rep.verdicts.insert(
            "05_exact_regularity".into(),
            Verdict::fails(
                "family contains a singular member",
                vec![Certificate::Matrix(a.clone())],
            ),
        );
    }

    finish_uniqueness_summary(&mut rep);
    rep
}

/// Generalized version: tests rho(|A^-1 B|) < 1, ||A^-1 B|| < 1,
/// sigma_max(B) < sigma_min(A), and the exact determinant-sign test over
/// A + B diag(s). With singular A only the last two are attempted.
pub fn check_unique_all_rhs_gave(a: &Mat, b: &Mat, enum_cap: usize) -> AnalysisReport {
    let mut rep = AnalysisReport::new();

    match inverse(a) {
        Ok(ai) => {
            let aib = ai.matmul(b);
            let v = match spectral_radius_nonneg(&aib.abs()) {
                Ok(rho) if rho < 1.0 - STRICT_SLACK => {
                    Verdict::holds(format!("rho(|A^-1 B|) = {rho:.6e} < 1"), scalar_cert(rho))
                }
                Ok(rho) => {
                    Verdict::fails(format!("rho(|A^-1 B|) = {rho:.6e} >= 1"), scalar_cert(rho))
                }
                Err(AveError::NonConvergence { estimate }) => Verdict::unknown(format!(
                    "power iteration cap reached; last estimate {estimate:.6e}"
                )),
                Err(e) => Verdict::unknown(e.to_string()),
            };
            rep.verdicts.insert("01_rho_abs_ainv_b_lt_one".into(), v);

            let nm = norm(&aib, 2);
            rep.verdicts.insert(
                "02_norm_ainv_b_lt_one".into(),
                if nm < 1.0 - STRICT_SLACK {
                    Verdict::holds(format!("||A^-1 B|| = {nm:.6e} < 1"), scalar_cert(nm))
                } else {
                    Verdict::fails(format!("||A^-1 B|| = {nm:.6e} >= 1"), scalar_cert(nm))
                },
            );
        }
        Err(_) => {
            rep.verdicts.insert(
                "01_rho_abs_ainv_b_lt_one".into(),
                Verdict::unknown("A is singular"),
            );
            rep.verdicts.insert(
                "02_norm_ainv_b_lt_one".into(),
                Verdict::unknown("A is singular"),
            );
        }
    }

    let (smin_a, _) = extreme_singular_values(a);
    let (_, smax_b) = extreme_singular_values(b);
    rep.verdicts.insert(
        "03_sigma_max_b_lt_sigma_min_a".into(),
        if smax_b < smin_a - STRICT_SLACK {
            Verdict::holds(
                format!("sigma_max(B) = {smax_b:.6e} < sigma_min(A) = {smin_a:.6e}"),
                vec![Certificate::Scalar(smax_b), Certificate::Scalar(smin_a)],
            )
        } else {
            Verdict::fails(
                format!("sigma_max(B) = {smax_b:.6e} >= sigma_min(A) = {smin_a:.6e}"),
                vec![Certificate::Scalar(smax_b), Certificate::Scalar(smin_a)],
            )
        },
    );

    let exact = match family_regular(a, b, enum_cap) {
        Ok(chk) => {
            rep.unique_for_all_b = if chk.regular { TriState::Yes } else { TriState::No };
            exact_verdict(&chk)
        }
        Err(AveError::CapExceeded { n, cap }) => {
            Verdict::unknown(format!("n = {n} exceeds enumeration cap {cap}"))
        }
        Err(e) => Verdict::unknown(e.to_string()),
    };
    rep.verdicts.insert("04_exact_regularity".into(), exact);

    finish_uniqueness_summary(&mut rep);
    rep
}

fn exact_verdict(chk: &RegularityCheck) -> Verdict {
    if chk.regular {
        Verdict::holds(
            format!(
                "vertex determinants keep one sign; range [{:.6e}, {:.6e}]",
                chk.det_range.0, chk.det_range.1
            ),
            vec![
                Certificate::Scalar(chk.det_range.0),
                Certificate::Scalar(chk.det_range.1),
            ],
        )
    } else {
        let mut ev = Vec::new();
        if let Some(m) = &chk.singular_member {
            ev.push(Certificate::Matrix(m.clone()));
        }
        if let Some(s) = &chk.member_signs {
            ev.push(Certificate::Signs(s.clone()));
        }
        Verdict::fails("not regular: the family contains a singular member", ev)
    }
}

fn finish_uniqueness_summary(rep: &mut AnalysisReport) {
    if rep.unique_for_all_b == TriState::Unknown {
        let sufficient = rep
            .verdicts
            .iter()
            .filter(|(k, _)| !k.contains("exact"))
            .any(|(_, v)| v.holds_state());
        if sufficient {
            rep.unique_for_all_b = TriState::Yes;
        }
    }
    if rep.unique_for_all_b == TriState::Yes {
        rep.solvable_hint = TriState::Yes;
    }
}

/// Is M an H-matrix with positive diagonal? Tested through the comparison
/// matrix: <M> must be an M-matrix, i.e. have a (near) nonnegative inverse.
fn h_matrix_with_positive_diag(m: &Mat) -> Verdict {
    let n = m.rows();
    for i in 0..n {
        if m[(i, i)] <= STRICT_SLACK {
            return Verdict::fails(
                format!("diagonal entry {i} is not positive"),
                scalar_cert(m[(i, i)]),
            );
        }
    }
    let mut comparison = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            comparison[(i, j)] = if i == j {
                m[(i, j)].abs()
            } else {
                -m[(i, j)].abs()
            };
        }
    }
    match inverse(&comparison) {
        Ok(ci) if ci.entrywise_ge(NONNEG_FLOOR) => Verdict::holds(
            "comparison matrix has a nonnegative inverse",
            vec![Certificate::Matrix(ci)],
        ),
        Ok(ci) => Verdict::fails(
            "comparison-matrix inverse has negative entries",
            vec![Certificate::Matrix(ci)],
        ),
        Err(_) => Verdict::fails("comparison matrix is singular", Vec::new()),
    }
}

// ---------------------------------------------------------------------------
// bounds and nonexistence
// ---------------------------------------------------------------------------

/// Box bound u = -(I - |A|)^-1 b with |x| <= u for every solution; requires
/// rho(|A|) < 1. A negative u_i certifies unsolvability.
pub fn solution_bounds(p: &AveProblem) -> Result<SolutionBounds, AveError> {
    let n = p.n();
    let abs_a = p.a.abs();
    let rho = spectral_radius_nonneg(&abs_a)?;
    if rho >= 1.0 - STRICT_SLACK {
        return Err(AveError::NotApplicable(format!(
            "rho(|A|) = {rho:.6e} >= 1; the bound requires a contraction"
        )));
    }
    let i_minus = Mat::identity(n).sub(&abs_a);
    let fac = LuFactors::factor(&i_minus)?;
    let u = mat::vec_scale(&fac.solve(&p.b), -1.0);
    let empty = u.iter().any(|&v| v < NONNEG_FLOOR);
    Ok(SolutionBounds {
        u,
        empty,
        rho_abs_a: rho,
    })
}

/// Four nonexistence tests; any Holds certifies unsolvability. A report with
/// no Holds is inconclusive (the system may still be unsolvable).
pub fn check_unsolvable(p: &AveProblem) -> AnalysisReport {
    let n = p.n();
    let mut rep = AnalysisReport::new();

    // LP: exists y with -y <= A^T y <= y and b^T y >= 1. The normalization
    // b^T y >= 1 replaces a strict inequality; the cone is scale-invariant.
    let at = p.a.transpose();
    let mut lp = LinearProgram::new(n);
    for i in 0..n {
        let mut plus = vec![0.0; n];
        let mut minus = vec![0.0; n];
        for j in 0..n {
            plus[j] = at[(i, j)];
            minus[j] = -at[(i, j)];
        }
        plus[i] += 1.0;
        minus[i] += 1.0;
        lp.push_row(&plus, RowKind::Ge, 0.0);
        lp.push_row(&minus, RowKind::Ge, 0.0);
    }
    lp.push_row(&p.b, RowKind::Ge, 1.0);
    let sol = solve_lp(&lp);
    rep.verdicts.insert(
        "01_lp_dual_cone".into(),
        match sol.status {
            LpStatus::Optimal => Verdict::holds(
                "found y with -y <= A^T y <= y and b^T y >= 1",
                vec![Certificate::Vector(sol.x.clone())],
            ),
            LpStatus::Infeasible => Verdict::fails(
                "the dual cone admits no such y (LP infeasible)",
                vec![Certificate::Reason("phase-1 optimum positive".into())],
            ),
            _ => Verdict::unknown("LP solver returned no conclusion"),
        },
    );

    // 0 != b >= 0 and ||A|| < 1
    let bnorm = mat::norm_inf(&p.b);
    let b_nonneg = bnorm > 0.0 && p.b.iter().all(|&v| v >= NONNEG_FLOOR);
    let a_spec = norm(&p.a, 2);
    rep.verdicts.insert(
        "02_contraction_nonneg_rhs".into(),
        if b_nonneg && a_spec < 1.0 - STRICT_SLACK {
            Verdict::holds(
                format!("0 != b >= 0 and ||A|| = {a_spec:.6e} < 1"),
                scalar_cert(a_spec),
            )
        } else {
            Verdict::fails(
                format!("nonzero b >= 0: {b_nonneg}; ||A|| = {a_spec:.6e}"),
                scalar_cert(a_spec),
            )
        },
    );

    // empty bound box, and the per-row ratio test
    match solution_bounds(p) {
        Ok(bounds) => {
            let v = if bounds.empty {
                Verdict::holds(
                    "the bound box -(I-|A|)^-1 b has a negative entry",
                    vec![Certificate::Vector(bounds.u.clone())],
                )
            } else {
                Verdict::fails(
                    "the bound box is nonnegative",
                    vec![Certificate::Vector(bounds.u.clone())],
                )
            };
            rep.verdicts.insert("03_empty_bound_box".into(), v);

            let i_minus = Mat::identity(n).sub(&p.a.abs());
            let m_inv = inverse(&i_minus).expect("rho(|A|) < 1 makes I - |A| nonsingular");
            let mabs_b = m_inv.matvec(&mat::vec_abs(&p.b));
            let mut hit = None;
            for i in 0..n {
                let rhs = mabs_b[i] / m_inv[(i, i)];
                if 2.0 * p.b[i] > rhs + STRICT_SLACK {
                    hit = Some((i, 2.0 * p.b[i] - rhs));
                    break;
                }
            }
            rep.verdicts.insert(
                "04_row_ratio".into(),
                match hit {
                    Some((i, margin)) => Verdict::holds(
                        format!("row {i}: 2 b_i exceeds (M|b|)_i / M_ii by {margin:.6e}"),
                        vec![Certificate::Scalar(i as f64), Certificate::Scalar(margin)],
                    ),
                    None => Verdict::fails("no row satisfies the ratio test", Vec::new()),
                },
            );
            rep.bounds = Some(bounds);
        }
        Err(_) => {
            rep.verdicts.insert(
                "03_empty_bound_box".into(),
                Verdict::unknown("rho(|A|) >= 1; bound not applicable"),
            );
            rep.verdicts.insert(
                "04_row_ratio".into(),
                Verdict::unknown("rho(|A|) >= 1; bound not applicable"),
            );
        }
    }

    if rep.any_holds() {
        rep.solvable_hint = TriState::No;
    }
    rep
}

/// Sufficient condition for exactly 2^n solutions: rho(|A|) < 1, b < 0, and
/// (i) 2|b| > G (I-|A|)^-1 |b| with G = diag(1 / (I-|A|)^-1_ii), or
/// (ii) |b| > 2 |A| |b|.
pub fn check_exponential_solutions(p: &AveProblem) -> Verdict {
    let n = p.n();
    let abs_a = p.a.abs();
    let rho = match spectral_radius_nonneg(&abs_a) {
        Ok(r) => r,
        Err(e) => return Verdict::unknown(e.to_string()),
    };
    if rho >= 1.0 - STRICT_SLACK {
        return Verdict::fails(format!("rho(|A|) = {rho:.6e} >= 1"), scalar_cert(rho));
    }
    if !p.b.iter().all(|&v| v < -STRICT_SLACK) {
        return Verdict::fails("b is not strictly negative", Vec::new());
    }
    let abs_b = mat::vec_abs(&p.b);

    // (ii) first: cheaper to evaluate
    let two_ab = mat::vec_scale(&abs_a.matvec(&abs_b), 2.0);
    if (0..n).all(|i| abs_b[i] > two_ab[i] + STRICT_SLACK) {
        return Verdict::holds(
            "condition (ii): |b| > 2 |A| |b|",
            vec![Certificate::Vector(two_ab)],
        );
    }

    let m_inv = inverse(&Mat::identity(n).sub(&abs_a)).expect("contraction");
    // (I - |A|)^-1 >= I entrywise whenever rho(|A|) < 1, so no zero diagonal
    for i in 0..n {
        assert!(
            m_inv[(i, i)] >= 1.0 - 1e-9,
            "diagonal of (I-|A|)^-1 must be >= 1"
        );
    }
    let mb = m_inv.matvec(&abs_b);
    let cond_i = (0..n).all(|i| 2.0 * abs_b[i] > mb[i] / m_inv[(i, i)] + STRICT_SLACK);
    if cond_i {
        Verdict::holds(
            "condition (i): 2|b| > G (I-|A|)^-1 |b|",
            vec![Certificate::Vector(mb)],
        )
    } else {
        Verdict::fails("neither sufficient condition applies", Vec::new())
    }
}

/// Nonnegative-solution structure: (A-I)^-1 >= 0 characterizes a nonnegative
/// solution for every b >= 0; inverse nonnegativity of both endpoints makes
/// that solution unique; A >= 0 with ||A|| < 1 gives existence for b <= 0.
pub fn check_nonneg_solvability(a: &Mat) -> AnalysisReport {
    let n = a.rows();
    let mut rep = AnalysisReport::new();
    let lower = a.add_diag(&vec![-1.0; n]);
    let upper = a.add_diag(&vec![1.0; n]);

    let lower_inv = inverse(&lower);
    rep.verdicts.insert(
        "01_shift_down_inverse_nonneg".into(),
        match &lower_inv {
            Ok(li) if li.entrywise_ge(NONNEG_FLOOR) => Verdict::holds(
                "(A - I)^-1 >= 0: a nonnegative solution exists for each b >= 0",
                vec![Certificate::Matrix(li.clone())],
            ),
            Ok(li) => Verdict::fails(
                "(A - I)^-1 has negative entries",
                vec![Certificate::Matrix(li.clone())],
            ),
            Err(_) => Verdict::fails("A - I is singular", Vec::new()),
        },
    );

    let upper_inv = inverse(&upper);
    let both = matches!(&lower_inv, Ok(li) if li.entrywise_ge(NONNEG_FLOOR))
        && matches!(&upper_inv, Ok(ui) if ui.entrywise_ge(NONNEG_FLOOR));
    rep.verdicts.insert(
        "02_interval_inverse_nonneg".into(),
        if both {
            let mut ev = Vec::new();
            if let Ok(ui) = &upper_inv {
                ev.push(Certificate::Matrix(ui.clone()));
            }
            Verdict::holds(
                "both endpoint inverses are nonnegative: for each b >= 0 the \
                 solution is unique and nonnegative",
                ev,
            )
        } else {
            Verdict::fails("endpoint inverses are not both nonnegative", Vec::new())
        },
    );

    let a_nonneg = a.entrywise_ge(NONNEG_FLOOR);
    let a_spec = norm(a, 2);
    rep.verdicts.insert(
        "03_nonneg_contraction".into(),
        if a_nonneg && a_spec < 1.0 - STRICT_SLACK {
            Verdict::holds(
                format!(
                    "A >= 0 and ||A|| = {a_spec:.6e} < 1: a nonnegative solution \
                     exists whenever b <= 0"
                ),
                scalar_cert(a_spec),
            )
        } else {
            Verdict::fails(
                format!("A >= 0: {a_nonneg}; ||A|| = {a_spec:.6e}"),
                scalar_cert(a_spec),
            )
        },
    );
    rep
}

// ---------------------------------------------------------------------------
// structure of the solution set
// ---------------------------------------------------------------------------

/// Finiteness (all A + diag(s) nonsingular) and boundedness (Ax + |x| = 0 has
/// only the trivial solution) of the solution set, for every right-hand side.
pub fn check_structure(a: &Mat, enum_cap: usize) -> Result<AnalysisReport, AveError> {
    let n = a.rows();
    let cap = enum_cap.min(crate::core::ENUM_HARD_CAP);
    if n > cap {
        return Err(AveError::CapExceeded { n, cap });
    }
    let mut rep = AnalysisReport::new();

    let mut finite = Verdict::holds("A + diag(s) is nonsingular for every s", Vec::new());
    for (s, _) in gray_signs(n) {
        let m = a.add_diag(&s.as_f64());
        if LuFactors::factor(&m).is_err() {
            finite = Verdict::fails(
                "A + diag(s) is singular for some s",
                vec![Certificate::Matrix(m), Certificate::Signs(s)],
            );
            break;
        }
    }
    rep.verdicts.insert("01_finite_for_all_b".into(), finite);

    // bounded iff Ax + |x| = 0 has only x = 0: per orthant s look for a
    // nontrivial x with (A + diag(s)) x = 0, diag(s) x >= 0; any such x
    // scales to e^T diag(s) x = 1
    let mut bounded = Verdict::holds("Ax + |x| = 0 has only the trivial solution", Vec::new());
    for (s, _) in gray_signs(n) {
        let m = a.add_diag(&s.as_f64());
        if LuFactors::factor(&m).is_ok() {
            continue;
        }
        let mut lp = LinearProgram::new(n);
        for i in 0..n {
            lp.push_row(m.row(i), RowKind::Eq, 0.0);
        }
        for i in 0..n {
            let mut row = vec![0.0; n];
            row[i] = s.0[i] as f64;
            lp.push_row(&row, RowKind::Ge, 0.0);
        }
        lp.push_row(&s.as_f64(), RowKind::Eq, 1.0);
        let sol = solve_lp(&lp);
        if sol.status == LpStatus::Optimal {
            bounded = Verdict::fails(
                "a recession direction exists",
                vec![Certificate::Vector(sol.x), Certificate::Signs(s)],
            );
            break;
        }
    }
    rep.verdicts.insert("02_bounded_for_all_b".into(), bounded);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// condition numbers and error bounds
// ---------------------------------------------------------------------------

/// c(A) = max over |D| = I of ||(A - D)^-1||_p (infinite when some member is
/// singular) and the relative variant c*(A) = c(A) * max ||A - D||_p.
#[derive(Clone, Debug)]
pub struct ConditionNumbers {
    pub c: f64,
    pub c_rel: f64,
    pub p: u32,
    /// Sign vector maximizing the inverse norm (or exhibiting singularity).
    pub argmax_inverse: Option<SignVector>,
    /// Sign vector maximizing ||A - diag(s)||_p.
    pub argmax_norm: Option<SignVector>,
}

pub fn condition_numbers(a: &Mat, p: u32, enum_cap: usize) -> Result<ConditionNumbers, AveError> {
    let n = a.rows();
    let cap = enum_cap.min(crate::core::ENUM_HARD_CAP);
    if n > cap {
        return Err(AveError::CapExceeded { n, cap });
    }
    // c is finite exactly when [A - I, A + I] is regular; an irregular family
    // can have all 2^n vertices nonsingular (the singular member sits in the
    // interior), so the regularity test comes first
    let chk = family_regular(a, &Mat::identity(n), enum_cap)?;
    if !chk.regular {
        return Ok(ConditionNumbers {
            c: f64::INFINITY,
            c_rel: f64::INFINITY,
            p,
            argmax_inverse: chk.member_signs,
            argmax_norm: None,
        });
    }
    // regular family: the maximum of ||(A - D)^-1|| over |D| <= I is
    // attained at a vertex |D| = I
    let mut c = 0.0f64;
    let mut argmax_inverse = None;
    let mut max_norm = 0.0f64;
    let mut argmax_norm = None;
    for (s, _) in gray_signs(n) {
        let m = a.add_diag(&mat::vec_scale(&s.as_f64(), -1.0));
        let nm = norm(&m, p);
        if nm > max_norm {
            max_norm = nm;
            argmax_norm = Some(s.clone());
        }
        let mi = inverse(&m).expect("regular family has nonsingular vertices");
        let v = norm(&mi, p);
        if v > c {
            c = v;
            argmax_inverse = Some(s.clone());
        }
    }
    Ok(ConditionNumbers {
        c,
        c_rel: c * max_norm,
        p,
        argmax_inverse,
        argmax_norm,
    })
}

/// Bounds on the distance to the exact solution derived from the condition
/// numbers: ||x - x*|| <= c(A) ||Ax - |x| - b||, and for b != 0 the two-sided
/// relative bound via c*(A).
#[derive(Clone, Debug)]
pub struct ErrorCertificate {
    pub absolute: f64,
    /// (lower, upper) bounds on ||x - x*|| / ||x*||, present when b != 0.
    pub relative: Option<(f64, f64)>,
    pub p: u32,
}

pub fn vec_norm_p(x: &[f64], p: u32) -> f64 {
    match p {
        1 => mat::norm_one(x),
        2 => mat::norm_two(x),
        u32::MAX => mat::norm_inf(x),
        _ => panic!("only p in {{1, 2, inf}} supported"),
    }
}

pub fn certify_error(
    p_ave: &AveProblem,
    x: &[f64],
    cond: &ConditionNumbers,
) -> Result<ErrorCertificate, AveError> {
    if !cond.c.is_finite() {
        return Err(AveError::NotApplicable(
            "condition number is infinite".into(),
        ));
    }
    let res = p_ave.residual(x)?;
    let rn = vec_norm_p(&res, cond.p);
    let bn = vec_norm_p(&p_ave.b, cond.p);
    let relative = if bn > 0.0 {
        Some((rn / (cond.c_rel * bn), cond.c_rel * rn / bn))
    } else {
        None
    };
    Ok(ErrorCertificate {
        absolute: cond.c * rn,
        relative,
        p: cond.p,
    })
}

// ---------------------------------------------------------------------------

/// Cheap dispatcher hints used by the automatic solver.
#[derive(Clone, Debug)]
pub struct Hints {
    pub sigma_min: f64,
    pub rho_abs_inverse: Option<f64>,
}

pub fn hints(a: &Mat) -> Hints {
    let (sigma_min, _) = extreme_singular_values(a);
    let rho_abs_inverse = inverse(a)
        .ok()
        .and_then(|ai| spectral_radius_nonneg(&ai.abs()).ok());
    Hints {
        sigma_min,
        rho_abs_inverse,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1a() -> AveProblem {
        AveProblem::new(
            Mat::from_rows(&[vec![0.0, 0.0], vec![-1.0, -0.5]]),
            vec![-1.0, -1.0],
        )
        .unwrap()
    }

    #[test]
    fn uniqueness_counterexample_certificate() {
        let a = Mat::from_rows(&[vec![-1.0, 2.0], vec![-2.0, 1.0]]);
        let rep = check_unique_all_rhs(&a, 20);
        assert_eq!(rep.unique_for_all_b, TriState::No);
        let exact = rep.verdict("05_exact_regularity").unwrap();
        assert_eq!(exact.state, VerdictState::Fails);
        let member = exact.matrix_evidence().unwrap();
        let want = Mat::from_rows(&[vec![-2.0, 2.0], vec![-2.0, 2.0]]);
        for i in 0..2 {
            for j in 0..2 {
                assert!((member[(i, j)] - want[(i, j)]).abs() < 1e-12);
            }
        }
        assert!(exact.signs_evidence().is_some());
    }

    #[test]
    fn uniqueness_by_sigma_and_exact() {
        let rep = check_unique_all_rhs(&Mat::identity(2).scale(3.0), 20);
        assert_eq!(rep.unique_for_all_b, TriState::Yes);
        assert!(rep.verdict("01_sigma_min_gt_one").unwrap().holds_state());

        let a = Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]);
        let rep = check_unique_all_rhs(&a, 20);
        assert_eq!(rep.unique_for_all_b, TriState::Yes);
        assert!(rep.verdict("05_exact_regularity").unwrap().holds_state());
    }

    #[test]
    fn gave_uniqueness_cases() {
        let a = Mat::from_rows(&[vec![0.5, 0.2], vec![0.0, -0.4]]);
        let rep = check_unique_all_rhs_gave(&a, &Mat::zeros(2, 2), 20);
        assert_eq!(rep.unique_for_all_b, TriState::Yes);

        let a = Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]);
        let rep = check_unique_all_rhs_gave(&a, &Mat::identity(2), 20);
        assert_eq!(rep.unique_for_all_b, TriState::Yes);

        let rep = check_unique_all_rhs_gave(&Mat::identity(2), &Mat::identity(2), 20);
        assert_eq!(rep.unique_for_all_b, TriState::No);
    }

    #[test]
    fn bounds_on_reference_instances() {
        let b = solution_bounds(&fig1a()).unwrap();
        assert!(!b.empty);
        assert!((b.u[0] - 1.0).abs() < 1e-12 && (b.u[1] - 4.0).abs() < 1e-12);
        for x in [[1.0, 0.0], [-1.0, -4.0], [-1.0, 4.0 / 3.0]] {
            assert!(b.box_contains(&x, 1e-9));
        }

        let p = AveProblem::new(Mat::zeros(2, 2), vec![-1.0, -1.0]).unwrap();
        let b = solution_bounds(&p).unwrap();
        assert_eq!(b.u, vec![1.0, 1.0]);

        let p = AveProblem::new(Mat::identity(2).scale(0.3), vec![1.0, 1.0]).unwrap();
        let b = solution_bounds(&p).unwrap();
        assert!(b.empty);
        assert!((b.u[0] + 1.0 / 0.7).abs() < 1e-9);
    }

    #[test]
    fn unsolvable_tests_fire() {
        let p = AveProblem::new(Mat::identity(2).scale(0.3), vec![1.0, 1.0]).unwrap();
        let rep = check_unsolvable(&p);
        assert!(rep.verdict("01_lp_dual_cone").unwrap().holds_state());
        assert!(rep
            .verdict("02_contraction_nonneg_rhs")
            .unwrap()
            .holds_state());
        assert!(rep.verdict("03_empty_bound_box").unwrap().holds_state());
        let y = rep
            .verdict("01_lp_dual_cone")
            .unwrap()
            .vector_evidence()
            .unwrap();
        let aty = p.a.transpose().matvec(y);
        for i in 0..2 {
            assert!(aty[i].abs() <= y[i] + 1e-9);
        }
        assert!(mat::dot(&p.b, y) >= 1.0 - 1e-9);

        let q = AveProblem::new(
            Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]),
            vec![3.0, 10.0],
        )
        .unwrap();
        assert!(!check_unsolvable(&q).any_holds());

        let r = AveProblem::new(Mat::zeros(2, 2), vec![1.0, -1.0]).unwrap();
        assert!(check_unsolvable(&r)
            .verdict("03_empty_bound_box")
            .unwrap()
            .holds_state());
    }

    #[test]
    fn exponential_solution_counts() {
        let p = AveProblem::new(Mat::zeros(2, 2), vec![-1.0, -1.0]).unwrap();
        assert!(check_exponential_solutions(&p).holds_state());

        // condition (ii) fails here (|b| = e vs 2|A||b| = 1.2e) but the
        // weaker condition (i) holds: 2 > 0.64 * 2.5 = 1.6
        let a = Mat::from_rows(&[vec![0.0, 0.6], vec![0.6, 0.0]]);
        let p = AveProblem::new(a, vec![-1.0, -1.0]).unwrap();
        let v = check_exponential_solutions(&p);
        assert!(v.holds_state());
        assert!(v.detail.contains("(i)"));

        assert_eq!(
            check_exponential_solutions(&fig1a()).state,
            VerdictState::Fails
        );
    }

    #[test]
    fn nonneg_solvability_cases() {
        let rep = check_nonneg_solvability(&Mat::identity(2).scale(3.0));
        assert!(rep
            .verdict("01_shift_down_inverse_nonneg")
            .unwrap()
            .holds_state());
        assert!(rep
            .verdict("02_interval_inverse_nonneg")
            .unwrap()
            .holds_state());
        // the contraction test needs ||A|| < 1, which 3I does not satisfy
        assert_eq!(
            rep.verdict("03_nonneg_contraction").unwrap().state,
            VerdictState::Fails
        );

        let rep = check_nonneg_solvability(&Mat::identity(2).scale(0.5));
        assert_eq!(
            rep.verdict("01_shift_down_inverse_nonneg").unwrap().state,
            VerdictState::Fails
        );

        let a = Mat::from_rows(&[vec![3.0, -1.0], vec![-1.0, 3.0]]);
        let rep = check_nonneg_solvability(&a);
        assert!(rep
            .verdict("02_interval_inverse_nonneg")
            .unwrap()
            .holds_state());
    }

    #[test]
    fn structure_verdicts() {
        let a = Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]);
        let rep = check_structure(&a, 20).unwrap();
        assert!(rep.verdict("01_finite_for_all_b").unwrap().holds_state());
        assert!(rep.verdict("02_bounded_for_all_b").unwrap().holds_state());

        // ray instance: A + diag((-1, -1)) = A - I is singular
        let a = Mat::from_rows(&[vec![0.0, 1.0], vec![-2.0, 3.0]]);
        let rep = check_structure(&a, 20).unwrap();
        assert_eq!(
            rep.verdict("01_finite_for_all_b").unwrap().state,
            VerdictState::Fails
        );
        assert_eq!(
            rep.verdict("02_bounded_for_all_b").unwrap().state,
            VerdictState::Fails
        );
    }

    #[test]
    fn condition_number_values() {
        let c = condition_numbers(&Mat::identity(2).scale(3.0), 2, 20).unwrap();
        assert!((c.c - 0.5).abs() < 1e-12);

        let a = Mat::from_rows(&[vec![-1.0, 2.0], vec![-2.0, 1.0]]);
        let c = condition_numbers(&a, 2, 20).unwrap();
        assert!(c.c.is_infinite());

        let a = Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]);
        let c = condition_numbers(&a, u32::MAX, 20).unwrap();
        let mut expect = 0.0f64;
        for (s, _) in gray_signs(2) {
            let m = a.add_diag(&mat::vec_scale(&s.as_f64(), -1.0));
            expect = expect.max(inverse(&m).unwrap().norm_inf());
        }
        assert!((c.c - expect).abs() < 1e-12);
    }

    #[test]
    fn error_bound_dominates() {
        let a = Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]);
        let p = AveProblem::new(a.clone(), vec![3.0, 10.0]).unwrap();
        let cond = condition_numbers(&a, 2, 20).unwrap();

        let cert = certify_error(&p, &[1.0, 1.0], &cond).unwrap();
        assert!(cert.absolute <= 1e-12);

        let x = [1.01, 1.0];
        let cert = certify_error(&p, &x, &cond).unwrap();
        let true_err = mat::norm_two(&mat::vec_sub(&x, &[1.0, 1.0]));
        assert!(cert.absolute >= true_err - 1e-12);
    }
}
