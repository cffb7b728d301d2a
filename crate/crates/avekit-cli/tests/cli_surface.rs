//! End-to-end checks of the `avekit` binary: pipelines, exit codes, and the
//! stability of the file formats.

use std::path::Path;
use std::process::{Command, Output};

fn avekit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avekit"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_solve_analyze_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = avekit(
        &["gen", "--kind", "sigma_gt1", "--n", "5", "--seed", "3", "--out", "inst.json"],
        dir.path(),
    );
    assert!(out.status.success());

    let out = avekit(
        &["solve", "--method", "newton", "--input", "inst.json", "--out", "sol.json"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("Converged"));
    let sol: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sol.json")).unwrap())
            .unwrap();
    assert_eq!(sol["status"], "Converged");
    assert!(sol["residual_inf"].as_f64().unwrap() < 1e-9);

    let out = avekit(&["analyze", "--input", "inst.json"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("unique_for_all_b = Yes"));
}

#[test]
fn unsolvable_instances_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    assert!(avekit(
        &["gen", "--kind", "infeasible", "--n", "3", "--seed", "1", "--out", "bad.json"],
        dir.path(),
    )
    .status
    .success());

    // analyze delivers an unsolvability certificate
    let out = avekit(&["analyze", "--input", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // the enumerated set is empty
    let out = avekit(&["enum", "--input", "bad.json", "--prune"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("0 point(s)"));

    // a solver that needs a nonempty feasible set reports NotApplicable
    let out = avekit(
        &["solve", "--method", "sla", "--input", "bad.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_params_flow_through() {
    let dir = tempfile::tempdir().unwrap();
    assert!(avekit(
        &["gen", "--kind", "rho_inv_lt1", "--n", "4", "--seed", "5", "--out", "i.json"],
        dir.path(),
    )
    .status
    .success());
    let out = avekit(
        &[
            "solve",
            "--method",
            "newton-relaxed",
            "--input",
            "i.json",
            "--param",
            "theta=1.0",
            "--x0",
            "ones",
            "--trace",
            "--out",
            "o.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let sol: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o.json")).unwrap())
            .unwrap();
    assert!(sol["trace"].is_array());
}

#[test]
fn transform_outputs() {
    let dir = tempfile::tempdir().unwrap();
    // the two-point reference instance
    std::fs::write(
        dir.path().join("fig.json"),
        r#"{"schema_version":1,"n":2,"A":[0.0,0.0,-1.0,-0.5],"b":[-1.0,-1.0]}"#,
    )
    .unwrap();
    let out = avekit(
        &["transform", "--to", "lcp", "--input", "fig.json", "--out", "lcp.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let lcp: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("lcp.json")).unwrap())
            .unwrap();
    assert_eq!(lcp["q"].as_array().unwrap().len(), 2);

    let out = avekit(
        &["transform", "--to", "milp-mps", "--input", "fig.json", "--out", "fig.mps"],
        dir.path(),
    );
    assert!(out.status.success());
    let mps = std::fs::read_to_string(dir.path().join("fig.mps")).unwrap();
    assert!(mps.starts_with("NAME"));
    assert!(mps.contains("ROWS") && mps.contains("BOUNDS") && mps.ends_with("ENDATA\n"));
    assert!(mps.contains(" BV "));

    let out = avekit(
        &["transform", "--to", "gave3n", "--input", "fig.json", "--out", "g3.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let g3: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("g3.json")).unwrap())
            .unwrap();
    assert_eq!(g3["n"], 6);
}

#[test]
fn matrix_market_conversion_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert!(avekit(
        &["gen", "--kind", "uniform", "--n", "3", "--seed", "11", "--out", "u.json"],
        dir.path(),
    )
    .status
    .success());
    assert!(avekit(
        &["convert", "--to", "mm", "--input", "u.json", "--out", "u"],
        dir.path(),
    )
    .status
    .success());
    assert!(dir.path().join("u.A.mtx").exists());
    assert!(dir.path().join("u.b.mtx").exists());
    assert!(avekit(
        &[
            "convert", "--to", "json", "--a", "u.A.mtx", "--b", "u.b.mtx", "--out", "u2.json",
        ],
        dir.path(),
    )
    .status
    .success());
    let orig: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("u.json")).unwrap())
            .unwrap();
    let back: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("u2.json")).unwrap())
            .unwrap();
    assert_eq!(orig["A"], back["A"]);
    assert_eq!(orig["b"], back["b"]);
}

#[test]
fn correct_command_reports_objective() {
    let dir = tempfile::tempdir().unwrap();
    assert!(avekit(
        &["gen", "--kind", "infeasible", "--n", "2", "--seed", "2", "--out", "inf.json"],
        dir.path(),
    )
    .status
    .success());
    for mode in ["rhs", "both", "chebyshev"] {
        let out = avekit(
            &["correct", "--mode", mode, "--input", "inf.json"],
            dir.path(),
        );
        assert!(out.status.success(), "{mode}");
        assert!(stdout(&out).contains("objective"));
    }
}

#[test]
fn bad_inputs_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.json"), "{not json").unwrap();
    let out = avekit(
        &["solve", "--method", "newton", "--input", "broken.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));

    let out = avekit(
        &["solve", "--method", "no-such-method", "--input", "broken.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}
