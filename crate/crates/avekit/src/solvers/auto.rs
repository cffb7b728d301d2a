//! Automatic method dispatch from cheap analysis hints: sigma_min(A) > 1
//! favours the Newton iteration, rho(|A^-1|) < 1 the Picard iteration, and
//! small systems fall back to exhaustive enumeration.

use super::{enumerate_solutions, solve_newton, solve_picard};
use crate::analysis::{self, DEFAULT_ENUM_CAP, STRICT_SLACK};
use crate::core::{AveProblem, SolveOutcome, SolverConfig, Status};

pub fn solve_auto(p: &AveProblem, cfg: &SolverConfig) -> SolveOutcome {
    let hints = analysis::hints(&p.a);
    if hints.sigma_min > 1.0 + STRICT_SLACK {
        let mut out = solve_newton(p, &vec![0.0; p.n()], cfg);
        out.method = Some("newton (sigma_min > 1)".into());
        return out;
    }
    if let Some(rho) = hints.rho_abs_inverse {
        if rho < 1.0 - STRICT_SLACK {
            let mut out = solve_picard(p, None, cfg);
            out.method = Some("picard (rho(|A^-1|) < 1)".into());
            return out;
        }
    }
    if p.n() <= DEFAULT_ENUM_CAP.min(12) {
        match enumerate_solutions(p, true, DEFAULT_ENUM_CAP) {
            Ok(set) => {
                if let Some(x) = set.representative() {
                    let mut out = super::finish(p, Status::Converged, x, 0, 0, None);
                    out.method = Some("enumerate (small n fallback)".into());
                    return out;
                }
                let rep = analysis::check_unsolvable(p);
                let why = rep
                    .verdicts
                    .iter()
                    .find(|(_, v)| v.holds_state())
                    .map(|(k, v)| format!("unsolvable by {k}: {}", v.detail))
                    .unwrap_or_else(|| "enumeration found no solution".into());
                let mut out =
                    super::finish(p, Status::NotApplicable, vec![0.0; p.n()], 0, 0, None);
                out.method = Some(why);
                return out;
            }
            Err(e) => {
                let mut out = super::finish(p, Status::NotApplicable, vec![0.0; p.n()], 0, 0, None);
                out.method = Some(e.to_string());
                return out;
            }
        }
    }
    // last resort: Newton attempt, honestly reported
    let mut out = solve_newton(p, &vec![0.0; p.n()], cfg);
    out.method = Some("newton (no hint matched)".into());
    out
}
