//! Name-keyed solver dispatch shared by `solve` and `bench`.

use anyhow::{bail, Result};
use avekit::solvers::*;
use avekit::{AveProblem, Mat, SolveOutcome, SolverConfig};
use std::collections::BTreeMap;

pub const METHODS: &[&str] = &[
    "newton",
    "newton-mod",
    "newton-relaxed",
    "newton-inexact",
    "picard",
    "picard-omega",
    "picard-hss",
    "sor",
    "splitting",
    "ggs",
    "pggs",
    "sla",
    "hybrid",
    "zh",
    "sign-accord",
    "signed-ge",
    "closed-form",
    "auto",
];

/// Starting point selection for the iterative methods.
#[derive(Clone, Debug)]
pub enum StartPoint {
    Zero,
    Picard,
    Ones,
    Given(Vec<f64>),
}

impl StartPoint {
    fn materialize(&self, p: &AveProblem) -> Result<Vec<f64>> {
        Ok(match self {
            StartPoint::Zero => vec![0.0; p.n()],
            StartPoint::Ones => vec![1.0; p.n()],
            StartPoint::Picard => avekit::core::linalg::lu_solve(&p.a, &p.b)
                .unwrap_or_else(|_| vec![0.0; p.n()]),
            StartPoint::Given(v) => {
                if v.len() != p.n() {
                    bail!("start vector has length {}, expected {}", v.len(), p.n());
                }
                v.clone()
            }
        })
    }
}

/// Run a named method on a bundle-shaped problem. `b_matrix` carries the
/// optional generalized matrix for the methods that consume one
/// (sign-accord, signed-ge, closed-form, splitting).
pub fn run_method(
    method: &str,
    p: &AveProblem,
    b_matrix: Option<&Mat>,
    start: &StartPoint,
    cfg: &SolverConfig,
    params: &BTreeMap<String, f64>,
) -> Result<SolveOutcome> {
    let x0 = start.materialize(p)?;
    let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
    let out = match method {
        "newton" => solve_newton(p, &x0, cfg),
        "newton-mod" => solve_newton_modified(p, &x0, cfg),
        "newton-relaxed" => solve_newton_relaxed(p, get("theta", 0.9), &x0, cfg)?,
        "newton-inexact" => solve_newton_inexact(p, get("theta_res", 0.5), &x0, cfg)?,
        "picard" => solve_picard(p, start_override(start, &x0), cfg),
        "picard-omega" => {
            let omega = Mat::identity(p.n()).scale(get("omega_diag", 0.5));
            solve_picard_omega(p, &omega, start_override(start, &x0), cfg)
        }
        "picard-hss" => solve_picard_hss(p, get("alpha", 1.0), start_override(start, &x0), cfg)?,
        "sor" => solve_sor_like(p, get("omega", 0.9), cfg)?,
        "splitting" => {
            let scheme = get("split_scheme", 1.0);
            let spec = if scheme < 0.5 {
                SplittingSpec::jacobi()
            } else if scheme < 1.5 {
                SplittingSpec::gauss_seidel()
            } else {
                SplittingSpec::sor(get("split_alpha", 1.0))
            };
            solve_newton_splitting(&gave_of(p, b_matrix), &spec, &x0, cfg)
        }
        "ggs" => solve_ggs(p, &x0, cfg),
        "pggs" => solve_pggs(p, get("beta", 0.5), &x0, cfg),
        "sla" => solve_concave_sla(p, &x0, cfg),
        "hybrid" => solve_concave_hybrid(p, &x0, get("itmax", 10.0) as usize, cfg),
        "zh" => solve_concave_zh(p, &x0, cfg),
        "sign-accord" => solve_sign_accord(&gave_of(p, b_matrix), cfg),
        "signed-ge" => {
            // solves x - B|x| = b; the bundle must carry B and an identity A
            let Some(bm) = b_matrix else {
                bail!("signed-ge needs a bundle with a B matrix (system x - B|x| = b)");
            };
            require_identity_a(p)?;
            solve_signed_ge(bm, &p.b, get("force", 0.0) > 0.5, cfg)
        }
        "closed-form" => {
            let Some(bm) = b_matrix else {
                bail!("closed-form needs a bundle with a B matrix (system x - B|x| = b)");
            };
            require_identity_a(p)?;
            solve_special_closed_form(bm, &p.b)
        }
        "auto" => solve_auto(p, cfg),
        other => bail!("unknown method '{other}'; available: {}", METHODS.join(", ")),
    };
    Ok(out)
}

fn gave_of(p: &AveProblem, b_matrix: Option<&Mat>) -> avekit::GaveProblem {
    match b_matrix {
        Some(bm) => avekit::GaveProblem {
            a: p.a.clone(),
            b: bm.clone(),
            rhs: p.b.clone(),
        },
        None => p.to_gave(),
    }
}

fn require_identity_a(p: &AveProblem) -> Result<()> {
    let n = p.n();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { 1.0 } else { 0.0 };
            if (p.a[(i, j)] - want).abs() > 1e-12 {
                bail!("this method handles the form x - B|x| = b: A must be the identity");
            }
        }
    }
    Ok(())
}

/// Picard-style methods use A^-1 b as their own default start; only an
/// explicit user-provided start overrides it.
fn start_override<'a>(start: &StartPoint, x0: &'a [f64]) -> Option<&'a [f64]> {
    match start {
        StartPoint::Picard => None,
        _ => Some(x0),
    }
}
