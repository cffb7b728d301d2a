//! Concave-minimization approaches. All three methods work on the polyhedron
//! S = { x : (A+I)x >= b, (A-I)x >= b }, on which e^T(Ax - |x| - b) is a
//! nonnegative concave merit that vanishes exactly at solutions:
//! successive linearization (vertex LPs), the hybrid alternation with
//! linearized Newton solves, and the variant that escapes non-solution
//! stationary vertices through adjacent-vertex pivots.

use super::{a_minus_diag, finish};
use crate::core::linalg::LuFactors;
use crate::core::lp::{solve_lp, LinearProgram, LpSolution, LpStatus};
use crate::core::mat::{self};
use crate::core::{sign_diag, AveProblem, SolveOutcome, SolverConfig, Status};

/// Rows of S: (A + I) x >= b and (A - I) x >= b.
fn feasible_set_lp(p: &AveProblem, objective: &[f64]) -> LinearProgram {
    let n = p.n();
    let mut lp = LinearProgram::new(n).minimize(objective);
    for shift in [1.0f64, -1.0] {
        for i in 0..n {
            let mut row = p.a.row(i).to_vec();
            row[i] += shift;
            lp.push_row(&row, crate::core::lp::RowKind::Ge, p.b[i]);
        }
    }
    lp
}

/// Linearized objective at x: e^T A - sgn(x)^T.
fn linearized_cost(p: &AveProblem, x: &[f64]) -> Vec<f64> {
    let n = p.n();
    let s = sign_diag(x);
    (0..n)
        .map(|j| (0..n).map(|i| p.a[(i, j)]).sum::<f64>() - s.0[j] as f64)
        .collect()
}

/// Concave merit e^T (Ax - |x| - b); nonnegative on S.
fn merit(p: &AveProblem, x: &[f64]) -> f64 {
    p.residual(x).expect("dims fixed").iter().sum()
}

fn outcome_with_note(mut out: SolveOutcome, note: String) -> SolveOutcome {
    out.method = Some(note);
    out
}

/// Successive linearization: pick a vertex minimizer of the linearized
/// objective over S; stop at stationarity. Converged only when the vertex
/// also solves the system; a stationary non-solution reports Stalled with
/// the point. An empty S certifies unsolvability (NotApplicable).
pub fn solve_concave_sla(p: &AveProblem, x0: &[f64], cfg: &SolverConfig) -> SolveOutcome {
    let mut x = x0.to_vec();
    let mut trace = cfg.trace.then(Vec::new);
    for iter in 1..=cfg.max_iters {
        let cost = linearized_cost(p, &x);
        let sol = solve_lp(&feasible_set_lp(p, &cost));
        match sol.status {
            LpStatus::Infeasible => {
                return outcome_with_note(
                    finish(p, Status::NotApplicable, x, iter - 1, 0, trace),
                    "feasible set S is empty: the system is unsolvable".into(),
                );
            }
            LpStatus::Unbounded => {
                let mut out = finish(p, Status::Stalled, x, iter - 1, 0, trace);
                out.method = Some(format!(
                    "linearized LP unbounded along ray {:?}",
                    sol.ray.unwrap_or_default()
                ));
                return out;
            }
            LpStatus::Unknown => {
                return finish(p, Status::Stalled, x, iter - 1, 0, trace);
            }
            LpStatus::Optimal => {}
        }
        let x_new = sol.x;
        let r = p.residual_inf(&x_new);
        if let Some(t) = trace.as_mut() {
            t.push(r);
        }
        if p.converged(&x_new, cfg.tol) {
            return finish(p, Status::Converged, x_new, iter, 0, trace);
        }
        // minimum-principle stationarity: c^T (x_new - x) = 0
        let step = mat::dot(&cost, &mat::vec_sub(&x_new, &x));
        if step.abs() <= 1e-9 * (1.0 + mat::dot(&cost, &x_new).abs()) {
            return finish(p, Status::Stalled, x_new, iter, 0, trace);
        }
        x = x_new;
    }
    finish(p, Status::MaxIters, x, cfg.max_iters, 0, trace)
}

/// Hybrid alternation: linearized Newton solve (A - D(x))z = b, then one LP
/// over Z = { (x, y) : y >= x >= -y, y >= Ax - b } with objective
/// -(e^T A + sgn(z)^T) x + 2 e^T y; either half may deliver the solution.
pub fn solve_concave_hybrid(
    p: &AveProblem,
    x0: &[f64],
    itmax: usize,
    cfg: &SolverConfig,
) -> SolveOutcome {
    let n = p.n();
    let mut x = x0.to_vec();
    let mut trace = cfg.trace.then(Vec::new);
    let mut solves = 0usize;
    for iter in 1..=itmax {
        let s = sign_diag(&x);
        let m = a_minus_diag(&p.a, &s);
        let z = match LuFactors::factor(&m) {
            Ok(f) => {
                solves += 1;
                f.solve(&p.b)
            }
            Err(_) => return finish(p, Status::SingularStep, x, iter - 1, solves, trace),
        };
        if let Some(t) = trace.as_mut() {
            t.push(p.residual_inf(&z));
        }
        if p.converged(&z, cfg.tol) {
            return finish(p, Status::Converged, z, iter, solves, trace);
        }

        // LP over Z in variables (x, y); y >= |x| forces y >= 0
        let sz = sign_diag(&z);
        let mut objective = vec![0.0; 2 * n];
        for j in 0..n {
            objective[j] = -((0..n).map(|i| p.a[(i, j)]).sum::<f64>() + sz.0[j] as f64);
            objective[n + j] = 2.0;
        }
        let mut lp = LinearProgram::new(2 * n).minimize(&objective);
        for i in 0..n {
            lp.nonneg[n + i] = true;
            // y_i - x_i >= 0
            let mut row = vec![0.0; 2 * n];
            row[i] = -1.0;
            row[n + i] = 1.0;
            lp.push_row(&row, crate::core::lp::RowKind::Ge, 0.0);
            // y_i + x_i >= 0
            let mut row = vec![0.0; 2 * n];
            row[i] = 1.0;
            row[n + i] = 1.0;
            lp.push_row(&row, crate::core::lp::RowKind::Ge, 0.0);
            // y_i - (Ax)_i >= -b_i
            let mut row = vec![0.0; 2 * n];
            for j in 0..n {
                row[j] = -p.a[(i, j)];
            }
            row[n + i] = 1.0;
            lp.push_row(&row, crate::core::lp::RowKind::Ge, -p.b[i]);
        }
        let sol = solve_lp(&lp);
        match sol.status {
            LpStatus::Optimal => {
                x = sol.x[..n].to_vec();
            }
            LpStatus::Unbounded => {
                let mut out = finish(p, Status::Stalled, z, iter, solves, trace);
                out.method = Some("relaxation LP unbounded".into());
                return out;
            }
            _ => return finish(p, Status::Stalled, z, iter, solves, trace),
        }
        if p.converged(&x, cfg.tol) {
            return finish(p, Status::Converged, x, iter, solves, trace);
        }
    }
    finish(p, Status::MaxIters, x, itmax, solves, trace)
}

/// Successive linearization with an escape move: at a stationary vertex that
/// does not solve the system, inspect the vertices adjacent via one simplex
/// pivot and move to the one minimizing the merit e^T(Ax - |x| - b); stop
/// when no adjacent vertex improves.
pub fn solve_concave_zh(p: &AveProblem, x0: &[f64], cfg: &SolverConfig) -> SolveOutcome {
    let mut x = x0.to_vec();
    let mut trace = cfg.trace.then(Vec::new);
    for iter in 1..=cfg.max_iters {
        let cost = linearized_cost(p, &x);
        let sol: LpSolution = solve_lp(&feasible_set_lp(p, &cost));
        match sol.status {
            LpStatus::Infeasible => {
                return outcome_with_note(
                    finish(p, Status::NotApplicable, x, iter - 1, 0, trace),
                    "feasible set S is empty: the system is unsolvable".into(),
                );
            }
            LpStatus::Unbounded => {
                let mut out = finish(p, Status::Stalled, x, iter - 1, 0, trace);
                out.method = Some("linearized LP unbounded".into());
                return out;
            }
            LpStatus::Unknown => return finish(p, Status::Stalled, x, iter - 1, 0, trace),
            LpStatus::Optimal => {}
        }
        let x_new = sol.x.clone();
        if let Some(t) = trace.as_mut() {
            t.push(p.residual_inf(&x_new));
        }
        if p.converged(&x_new, cfg.tol) {
            return finish(p, Status::Converged, x_new, iter, 0, trace);
        }
        let step = mat::dot(&cost, &mat::vec_sub(&x_new, &x));
        if step.abs() <= 1e-9 * (1.0 + mat::dot(&cost, &x_new).abs()) {
            // stationary non-solution vertex: look at adjacent vertices
            let g_here = merit(p, &x_new);
            let mut best: Option<(f64, Vec<f64>)> = None;
            for v in sol.adjacent_vertices() {
                let g = merit(p, &v);
                if g < best.as_ref().map_or(g_here, |(bg, _)| *bg) - 1e-12 {
                    best = Some((g, v));
                }
            }
            match best {
                Some((_, v)) => {
                    if p.converged(&v, cfg.tol) {
                        return finish(p, Status::Converged, v, iter, 0, trace);
                    }
                    x = v;
                }
                None => return finish(p, Status::Stalled, x_new, iter, 0, trace),
            }
        } else {
            x = x_new;
        }
    }
    finish(p, Status::MaxIters, x, cfg.max_iters, 0, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::mat::Mat;

    fn stall_instance() -> AveProblem {
        AveProblem::new(
            Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]),
            vec![3.0, 10.0],
        )
        .unwrap()
    }

    #[test]
    fn sla_stalls_at_non_solution_vertex() {
        let out = solve_concave_sla(&stall_instance(), &[0.0, 0.0], &SolverConfig::default());
        assert_eq!(out.status, Status::Stalled);
        assert!(
            mat::dist_inf(&out.x, &[5.0 / 3.0, 0.0]) < 1e-8,
            "stalled at {:?}",
            out.x
        );
    }

    #[test]
    fn sla_converges_when_vertex_is_solution() {
        let p = AveProblem::new(Mat::identity(2).scale(2.0), vec![1.0, 1.0]).unwrap();
        let out = solve_concave_sla(&p, &[0.0, 0.0], &SolverConfig::default());
        assert_eq!(out.status, Status::Converged);
        assert!(mat::dist_inf(&out.x, &[1.0, 1.0]) < 1e-9);
    }

    #[test]
    fn sla_detects_empty_feasible_set() {
        let p = AveProblem::new(Mat::identity(2).scale(0.3), vec![1.0, 1.0]).unwrap();
        let out = solve_concave_sla(&p, &[0.0, 0.0], &SolverConfig::default());
        assert_eq!(out.status, Status::NotApplicable);
    }

    #[test]
    fn zh_escapes_the_sla_stall() {
        let out = solve_concave_zh(&stall_instance(), &[0.0, 0.0], &SolverConfig::default());
        assert_eq!(out.status, Status::Converged);
        assert!(
            mat::dist_inf(&out.x, &[1.0, 1.0]) < 1e-9,
            "ended at {:?}",
            out.x
        );
    }

    #[test]
    fn zh_without_adjacency_phase_when_start_is_good() {
        let p = AveProblem::new(Mat::identity(2).scale(2.0), vec![1.0, 1.0]).unwrap();
        let out = solve_concave_zh(&p, &[1.0, 1.0], &SolverConfig::default());
        assert_eq!(out.status, Status::Converged);
    }

    #[test]
    fn hybrid_first_solve_matches_newton_then_converges() {
        let p = stall_instance();
        let mut cfg = SolverConfig::default();
        cfg.trace = true;
        let out = solve_concave_hybrid(&p, &[0.0, 0.0], 10, &cfg);
        assert_eq!(out.status, Status::Converged);
        assert!(mat::dist_inf(&out.x, &[1.0, 1.0]) < 1e-9);
        // the first linearized solve from zero is (A + I) z = b
        let t = out.trace.unwrap();
        let z1 = [4.0 / 9.0, 11.0 / 9.0];
        let r1 = p.residual_inf(&z1);
        assert!((t[0] - r1).abs() < 1e-12);
    }

    #[test]
    fn hybrid_quick_convergence_on_diagonal() {
        let p = AveProblem::new(Mat::identity(2).scale(2.0), vec![1.0, 1.0]).unwrap();
        let out = solve_concave_hybrid(&p, &[0.0, 0.0], 10, &SolverConfig::default());
        assert_eq!(out.status, Status::Converged);
        assert!(out.iterations <= 2);
    }
}
