//! The sign accord algorithm for Ax - B|x| = b: guess s = sgn(A^-1 b), solve
//! (A - B diag(s)) x = b, and while some s_i x_i < 0 flip the smallest such
//! index and re-solve. Flip counters p_i trigger the abort test
//! log2(p_k) > n - k, which certifies that [A - |B|, A + |B|] is not regular.

use super::finish_gave;
use crate::core::linalg::LuFactors;
use crate::core::mat::Mat;
use crate::core::{sign_diag, GaveProblem, SolveOutcome, SolverConfig, Status};

fn not_regular(g: &GaveProblem, x: Vec<f64>, flips: usize, solves: usize, why: String) -> SolveOutcome {
    let mut out = finish_gave(g, Status::NotRegular, x, flips, solves, None);
    out.method = Some(why);
    out
}

pub fn solve_sign_accord(g: &GaveProblem, cfg: &SolverConfig) -> SolveOutcome {
    debug_assert!(g.is_square());
    let n = g.n();
    let fac_a = match LuFactors::factor(&g.a) {
        Ok(f) => f,
        Err(_) => {
            return not_regular(
                g,
                vec![0.0; n],
                0,
                0,
                "A is singular".into(),
            )
        }
    };
    let mut s = sign_diag(&fac_a.solve(&g.rhs));
    let mut solves = 1usize;
    let mut flips = 0usize;
    let mut p_count = vec![0u64; n];

    // (A - B diag(s)) x = b for the current s
    let solve_for = |s: &crate::core::SignVector, solves: &mut usize| -> Option<Vec<f64>> {
        let mut m = g.a.clone();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= g.b[(i, j)] * s.0[j] as f64;
            }
        }
        *solves += 1;
        LuFactors::factor(&m).ok().map(|f| f.solve(&g.rhs))
    };

    let mut x = match solve_for(&s, &mut solves) {
        Some(x) => x,
        None => {
            return not_regular(
                g,
                vec![0.0; n],
                0,
                solves,
                format!("singular step at s = {:?}", s.0),
            )
        }
    };

    loop {
        let k = (0..n).find(|&i| s.0[i] as f64 * x[i] < 0.0);
        let Some(k) = k else {
            // sign accord reached: x solves the system
            let mut out = finish_gave(g, Status::Converged, x, flips, solves, None);
            out.method = Some("sign accord".into());
            return out;
        };
        if flips >= cfg.max_iters {
            return finish_gave(g, Status::MaxIters, x, flips, solves, None);
        }
        p_count[k] += 1;
        // abort test with 1-based index: log2(p_k) > n - k
        let k1 = (k + 1) as f64;
        if (p_count[k] as f64).log2() > n as f64 - k1 {
            return not_regular(
                g,
                x,
                flips,
                solves,
                format!("flip counter p_{} exceeded the regularity budget", k + 1),
            );
        }
        s.flip(k);
        flips += 1;
        x = match solve_for(&s, &mut solves) {
            Some(x) => x,
            None => {
                return not_regular(
                    g,
                    vec![0.0; n],
                    flips,
                    solves,
                    format!("singular step at s = {:?}", s.0),
                )
            }
        };
    }
}

/// Convenience wrapper for the AVE case (B = I).
pub fn solve_sign_accord_ave(
    p: &crate::core::AveProblem,
    cfg: &SolverConfig,
) -> SolveOutcome {
    let g = GaveProblem {
        a: p.a.clone(),
        b: Mat::identity(p.n()),
        rhs: p.b.clone(),
    };
    solve_sign_accord(&g, cfg)
}
