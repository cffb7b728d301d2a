//! Reference benchmark suites run through the harness itself: Newton and
//! the hybrid method on 100 well-posed instances at n = 50, and the sign
//! accord algorithm on 50 certified-regular instances at n = 100.

use avekit_cli::bench::{run_suite, summarize, GenSpec, SolverSpec, SuiteSpec};
use std::collections::BTreeMap;

fn spec(kind: &str, n: usize, seeds: u64, solvers: Vec<SolverSpec>) -> SuiteSpec {
    SuiteSpec {
        generators: vec![GenSpec {
            kind: kind.into(),
            sizes: vec![n],
            seeds: (0..seeds).collect(),
            params: BTreeMap::new(),
        }],
        solvers,
    }
}

fn method(name: &str, tol: Option<f64>) -> SolverSpec {
    SolverSpec {
        method: name.into(),
        params: BTreeMap::new(),
        tol,
        max_iters: None,
    }
}

#[test]
fn newton_sweep_on_well_posed_instances() {
    let suite = spec("sigma_gt1", 50, 100, vec![method("newton", None)]);
    let records = run_suite(&suite, 4).unwrap();
    assert_eq!(records.len(), 100);
    let summary = summarize(&records);
    let rate = summary["newton"]["success_rate"].as_f64().unwrap();
    assert!(rate >= 0.95, "newton success rate {rate}");
    let median = summary["newton"]["median_iterations"].as_u64().unwrap();
    assert!(median <= 10, "median iterations {median}");
}

#[test]
fn hybrid_sweep_reaches_1e8_accuracy() {
    let suite = spec("sigma_gt1", 50, 100, vec![method("hybrid", Some(1e-8))]);
    let records = run_suite(&suite, 4).unwrap();
    let summary = summarize(&records);
    let rate = summary["hybrid"]["success_rate"].as_f64().unwrap();
    assert!(rate >= 0.95, "hybrid success rate {rate}");
}

#[test]
fn sign_accord_flip_budget_on_regular_instances() {
    let suite = spec("uniform-regular", 100, 50, vec![method("sign-accord", None)]);
    let records = run_suite(&suite, 4).unwrap();
    assert_eq!(records.len(), 50);
    let mut flips = 0usize;
    for r in &records {
        assert_eq!(r.status, "Converged", "{}", r.instance_id);
        flips += r.iterations; // one iteration = one sign flip
    }
    let mean = flips as f64 / 50.0;
    assert!(mean <= 0.5 * 100.0, "mean flips {mean}");
}
