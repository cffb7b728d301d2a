//! Subcommand implementations. Every command prints a human-readable report
//! to standard output and optionally writes a JSON (or format-specific)
//! artifact. Exit codes: 0 when a result or verdict was delivered, 2 when
//! the answer is NotApplicable/Unsolvable (with a certificate), 1 on
//! internal errors (mapped by main from anyhow).

use crate::bench::{records_to_csv, run_suite, summarize, SuiteSpec};
use crate::bundle::ProblemBundle;
use crate::dispatch::{run_method, StartPoint};
use crate::gen::{gen_instance, GenKind};
use anyhow::{bail, Context, Result};
use avekit::analysis::{self, AnalysisReport, VerdictState};
use avekit::core::mat;
use avekit::solvers::{check_convexity, enumerate_solutions, PieceKind, SpanKind};
use avekit::transforms::{
    ave_to_lcp, export_milp, gave_to_ave, interval_hull_vertices, GaveToAveMode, IntervalMatrix,
    IntervalVector, MilpVariant,
};
use avekit::{Mat, SolveOutcome, SolverConfig, Status};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub fn parse_params(pairs: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for raw in pairs {
        let (k, v) = raw
            .split_once('=')
            .with_context(|| format!("parameter '{raw}' is not of the form key=value"))?;
        let value: f64 = v
            .parse()
            .with_context(|| format!("parameter '{raw}' has a non-numeric value"))?;
        map.insert(k.to_string(), value);
    }
    Ok(map)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?)
        .with_context(|| format!("writing {}", path.display()))
}

pub fn cmd_gen(
    kind: &str,
    n: usize,
    seed: u64,
    out: &Path,
    params: &BTreeMap<String, f64>,
) -> Result<i32> {
    let bundle = gen_instance(GenKind::parse(kind)?, n, seed, params)?;
    bundle.write(out)?;
    println!("wrote {} instance (n = {n}, seed = {seed}) to {}", kind, out.display());
    Ok(0)
}

fn vec_preview(x: &[f64]) -> String {
    const SHOW: usize = 8;
    let shown: Vec<String> = x.iter().take(SHOW).map(|v| format!("{v:.6}")).collect();
    if x.len() > SHOW {
        format!("[{}, ... ({} entries)]", shown.join(", "), x.len())
    } else {
        format!("[{}]", shown.join(", "))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_solve(
    method: &str,
    input: &Path,
    tol: f64,
    max_iters: usize,
    x0: &str,
    params: &BTreeMap<String, f64>,
    trace: bool,
    out: Option<&Path>,
) -> Result<i32> {
    let bundle = ProblemBundle::read(input)?;
    let p = bundle.to_ave()?;
    let b_matrix = bundle
        .b_matrix
        .as_ref()
        .map(|bm| Mat::from_vec(bundle.n, bundle.n, bm.clone()));
    let start = match x0 {
        "zero" => StartPoint::Zero,
        "picard" => StartPoint::Picard,
        "ones" => StartPoint::Ones,
        path => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("--x0 {path}: not a keyword and not a readable file"))?;
            let v: Vec<f64> = serde_json::from_str(&text)
                .context("start-vector file must be a JSON array of numbers")?;
            StartPoint::Given(v)
        }
    };
    let mut cfg = SolverConfig::default().with_tol(tol).with_max_iters(max_iters);
    cfg.trace = trace;
    cfg.params = params.clone();
    let outcome = run_method(method, &p, b_matrix.as_ref(), &start, &cfg, params)?;
    print_outcome(method, &outcome);
    if let Some(path) = out {
        write_json(path, &outcome_json(method, &outcome))?;
    }
    Ok(exit_code_for(outcome.status))
}

fn exit_code_for(status: Status) -> i32 {
    match status {
        Status::NotApplicable | Status::NotRegular => 2,
        _ => 0,
    }
}

fn print_outcome(method: &str, out: &SolveOutcome) {
    println!("method          {method}");
    println!("status          {}", out.status.as_str());
    println!("x               {}", vec_preview(&out.x));
    println!("residual_inf    {:.3e}", out.residual_inf);
    println!("iterations      {}", out.iterations);
    println!("linear_solves   {}", out.linear_solves);
    if let Some(note) = &out.method {
        println!("note            {note}");
    }
}

fn outcome_json(method: &str, out: &SolveOutcome) -> serde_json::Value {
    serde_json::json!({
        "method": method,
        "status": out.status.as_str(),
        "x": out.x,
        "residual_inf": out.residual_inf,
        "iterations": out.iterations,
        "linear_solves": out.linear_solves,
        "note": out.method,
        "trace": out.trace,
    })
}

fn report_json(rep: &AnalysisReport) -> serde_json::Value {
    let verdicts: serde_json::Map<String, serde_json::Value> = rep
        .verdicts
        .iter()
        .map(|(k, v)| {
            (
                k.clone(),
                serde_json::json!({
                    "state": match v.state {
                        VerdictState::Holds => "Holds",
                        VerdictState::Fails => "Fails",
                        VerdictState::Unknown => "Unknown",
                    },
                    "detail": v.detail,
                }),
            )
        })
        .collect();
    serde_json::json!({
        "verdicts": verdicts,
        "unique_for_all_b": rep.unique_for_all_b.as_str(),
        "solvable_hint": rep.solvable_hint.as_str(),
        "bounds": rep.bounds.as_ref().map(|b| serde_json::json!({
            "u": b.u, "empty": b.empty, "rho_abs_a": b.rho_abs_a,
        })),
    })
}

fn print_report(title: &str, rep: &AnalysisReport) {
    println!("== {title}");
    for (key, v) in &rep.verdicts {
        let state = match v.state {
            VerdictState::Holds => "Holds ",
            VerdictState::Fails => "Fails ",
            VerdictState::Unknown => "???   ",
        };
        println!("  {state} {key}: {}", v.detail);
        if let Some(m) = v.matrix_evidence() {
            if m.rows() <= 6 {
                for i in 0..m.rows() {
                    println!("            {:?}", m.row(i));
                }
            }
        }
    }
}

pub fn cmd_analyze(input: &Path, enum_cap: usize, out: Option<&Path>) -> Result<i32> {
    let bundle = ProblemBundle::read(input)?;
    let p = bundle.to_ave()?;
    let n = p.n();

    if let Some(bm) = &bundle.b_matrix {
        // generalized system: the remaining tests below address the B = I
        // form and would silently ignore B, so only the uniqueness report
        // applies here
        let unique =
            analysis::check_unique_all_rhs_gave(&p.a, &Mat::from_vec(n, n, bm.clone()), enum_cap);
        print_report("unique solvability for every right-hand side", &unique);
        println!(
            "  summary: unique_for_all_b = {}",
            unique.unique_for_all_b.as_str()
        );
        if let Some(path) = out {
            write_json(path, &serde_json::json!({ "unique": report_json(&unique) }))?;
        }
        return Ok(0);
    }
    let unique = analysis::check_unique_all_rhs(&p.a, enum_cap);
    print_report("unique solvability for every right-hand side", &unique);
    println!("  summary: unique_for_all_b = {}", unique.unique_for_all_b.as_str());

    let unsolvable = analysis::check_unsolvable(&p);
    print_report("nonexistence tests", &unsolvable);

    let nonneg = analysis::check_nonneg_solvability(&p.a);
    print_report("nonnegative solutions", &nonneg);

    let expo = analysis::check_exponential_solutions(&p);
    println!(
        "== exponential solution count\n  {} : {}",
        match expo.state {
            VerdictState::Holds => "Holds ",
            VerdictState::Fails => "Fails ",
            VerdictState::Unknown => "???   ",
        },
        expo.detail
    );

    let cond = analysis::condition_numbers(&p.a, 2, enum_cap).ok();
    if let Some(c) = &cond {
        println!("== condition numbers (spectral norm)");
        if c.c.is_finite() {
            println!("  c(A)  = {:.6e}", c.c);
            println!("  c*(A) = {:.6e}", c.c_rel);
        } else {
            println!("  c(A) = +inf (a singular member exists)");
        }
    }

    let structure = analysis::check_structure(&p.a, enum_cap).ok();
    if let Some(s) = &structure {
        print_report("structure for every right-hand side", s);
    }
    let convexity = enumerate_solutions(&p, true, enum_cap)
        .ok()
        .map(|set| check_convexity(&set));
    if let Some(c) = &convexity {
        println!(
            "== convexity of the solution set\n  {} : {}",
            match c.state {
                VerdictState::Holds => "Holds ",
                VerdictState::Fails => "Fails ",
                VerdictState::Unknown => "???   ",
            },
            c.detail
        );
    }

    if let Some(path) = out {
        let value = serde_json::json!({
            "unique": report_json(&unique),
            "nonexistence": report_json(&unsolvable),
            "nonnegative": report_json(&nonneg),
            "exponential": { "state": format!("{:?}", expo.state), "detail": expo.detail },
            "structure": structure.as_ref().map(report_json),
            "condition_numbers": cond.as_ref().map(|c| serde_json::json!({
                "c": c.c, "c_rel": c.c_rel, "p": 2,
            })),
        });
        write_json(path, &value)?;
    }
    let unsat = unsolvable.any_holds();
    Ok(if unsat { 2 } else { 0 })
}

pub fn cmd_enum(input: &Path, prune: bool, enum_cap: usize, out: Option<&Path>) -> Result<i32> {
    let bundle = ProblemBundle::read(input)?;
    let p = bundle.to_ave()?;
    let set = enumerate_solutions(&p, prune, enum_cap)?;
    let points = set.points();
    let affine = set.affine_pieces();
    let describe = |span: &SpanKind| match span {
        SpanKind::Ray => "ray",
        SpanKind::Segment(_) => "segment",
        SpanKind::Line => "line",
        SpanKind::Polyhedral => "polyhedral piece",
    };
    let count_of = |want: &str| {
        affine
            .iter()
            .filter(|(_, a)| describe(&a.span) == want)
            .count()
    };
    let mut summary = format!("{} point(s)", points.len());
    for kind in ["ray", "segment", "line", "polyhedral piece"] {
        let c = count_of(kind);
        if c > 0 {
            summary.push_str(&format!(", {c} {kind}(s)"));
        }
    }
    println!("{summary}; {} orthant(s) pruned", set.orthants_pruned);
    for x in &points {
        println!("  point   {}", vec_preview(x));
    }
    for (_, a) in &affine {
        println!(
            "  {:7} base {} directions {:?}",
            describe(&a.span),
            vec_preview(&a.base),
            a.dirs.iter().map(|d| vec_preview(d)).collect::<Vec<_>>()
        );
    }
    if let Some(path) = out {
        let pieces: Vec<serde_json::Value> = set
            .pieces
            .iter()
            .map(|piece| match &piece.kind {
                PieceKind::Point(x) => serde_json::json!({"type": "point", "x": x}),
                PieceKind::Affine(a) => serde_json::json!({
                    "type": describe(&a.span),
                    "base": a.base,
                    "directions": a.dirs,
                    "length": match a.span { SpanKind::Segment(l) => Some(l), _ => None },
                }),
            })
            .collect();
        write_json(
            path,
            &serde_json::json!({
                "pieces": pieces,
                "complete": set.complete,
                "orthants_pruned": set.orthants_pruned,
            }),
        )?;
    }
    Ok(if set.is_empty() { 2 } else { 0 })
}

pub fn cmd_correct(input: &Path, mode: &str, enum_cap: usize, out: Option<&Path>) -> Result<i32> {
    let bundle = ProblemBundle::read(input)?;
    let p = bundle.to_ave()?;
    let cfg = SolverConfig::default();
    let result = match mode {
        "rhs" => avekit::correction::correct_rhs(&p, &cfg),
        "both" => avekit::correction::correct_both(&p, &cfg),
        "chebyshev" => avekit::correction::correct_chebyshev(&p, enum_cap)?,
        other => bail!("unknown correction mode '{other}' (rhs, both, chebyshev)"),
    };
    println!("mode            {mode}");
    println!("objective       {:.6e}", result.objective);
    println!(
        "attained        {}",
        match result.attained {
            avekit::correction::Attainment::Yes => "yes",
            avekit::correction::Attainment::SuspectedNotAttained => "suspected-not-attained",
        }
    );
    println!("x_star          {}", vec_preview(&result.x_star));
    println!("||r||_inf       {:.6e}", mat::norm_inf(&result.r_vec));
    println!("||R||_F         {:.6e}", result.r_mat.norm_frobenius());
    if let Some(path) = out {
        write_json(
            path,
            &serde_json::json!({
                "mode": mode,
                "objective": result.objective,
                "attained": matches!(result.attained, avekit::correction::Attainment::Yes),
                "x_star": result.x_star,
                "r": result.r_vec,
                "R": result.r_mat.data(),
                "corrected_b": result.corrected_b,
            }),
        )?;
    }
    Ok(0)
}

pub fn cmd_transform(input: &Path, to: &str, out: &Path, enum_cap: usize) -> Result<i32> {
    let bundle = ProblemBundle::read(input)?;
    match to {
        "lcp" => {
            let p = bundle.to_ave()?;
            let red = ave_to_lcp(&p)?;
            write_json(
                out,
                &serde_json::json!({
                    "Q": red.lcp.q_mat.data(),
                    "q": red.lcp.q_vec,
                    "n": p.n(),
                }),
            )?;
            println!("wrote complementarity data (w = Qz + q) to {}", out.display());
        }
        "ave" => {
            let g = bundle.to_gave()?;
            let red = gave_to_ave(&g, GaveToAveMode::InverseB)?;
            let mut nb = ProblemBundle::from_ave(&red.ave);
            nb.metadata = bundle.metadata.clone();
            nb.write(out)?;
            println!("wrote B^-1-reduced system to {}", out.display());
        }
        "gave3n" => {
            let g = bundle.to_gave()?;
            let red = gave_to_ave(&g, GaveToAveMode::Block3n)?;
            ProblemBundle::from_ave(&red.ave).write(out)?;
            println!("wrote 3n block system to {}", out.display());
        }
        "milp-mps" => {
            let p = bundle.to_ave()?;
            let variant = match analysis::solution_bounds(&p) {
                Ok(bounds) if !bounds.empty => MilpVariant::Bounded {
                    lower: mat::vec_scale(&bounds.u, -1.0),
                    upper: bounds.u,
                },
                _ => MilpVariant::Prokopyev,
            };
            let model = export_milp(&p, &variant)?;
            std::fs::write(out, model.to_mps())
                .with_context(|| format!("writing {}", out.display()))?;
            println!(
                "wrote {} MPS model to {}",
                match variant {
                    MilpVariant::Bounded { .. } => "box-bounded",
                    MilpVariant::Prokopyev => "scaling",
                },
                out.display()
            );
        }
        "hull" => {
            // interval data: A is the center; B (required) is the radius
            let Some(bm) = &bundle.b_matrix else {
                bail!("hull needs a bundle with B as the radius matrix");
            };
            let n = bundle.n;
            let ai = IntervalMatrix::new(
                Mat::from_vec(n, n, bundle.a.clone()),
                Mat::from_vec(n, n, bm.clone()),
            )?;
            let bi = IntervalVector::exact(bundle.b.clone());
            match interval_hull_vertices(&ai, &bi, enum_cap) {
                Ok(verts) => {
                    let list: Vec<serde_json::Value> = verts
                        .iter()
                        .map(|(s, v)| serde_json::json!({"signs": s.0, "x": v}))
                        .collect();
                    write_json(out, &serde_json::json!({ "vertices": list }))?;
                    println!("wrote {} hull vertices to {}", verts.len(), out.display());
                }
                Err(e) => {
                    println!("hull not available: {e}");
                    return Ok(2);
                }
            }
        }
        other => bail!("unknown transform target '{other}' (lcp, ave, gave3n, milp-mps, hull)"),
    }
    Ok(0)
}

pub fn cmd_bench(
    suite_path: &Path,
    out_csv: &Path,
    jobs: usize,
    summary_out: Option<&Path>,
) -> Result<i32> {
    let text = std::fs::read_to_string(suite_path)
        .with_context(|| format!("reading suite from {}", suite_path.display()))?;
    let spec = SuiteSpec::from_json(&text)?;
    let records = run_suite(&spec, jobs)?;
    std::fs::write(out_csv, records_to_csv(&records))
        .with_context(|| format!("writing {}", out_csv.display()))?;
    let summary = summarize(&records);
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if let Some(path) = summary_out {
        write_json(path, &summary)?;
    }
    println!("{} records written to {}", records.len(), out_csv.display());
    Ok(0)
}

/// Bundle <-> Matrix Market conversion. `to = "mm"` expands a JSON bundle
/// into <prefix>.A.mtx / <prefix>.b.mtx (and <prefix>.B.mtx when present);
/// `to = "json"` reassembles a bundle from such files.
pub fn cmd_convert(
    to: &str,
    input: Option<&Path>,
    a_path: Option<&Path>,
    b_path: Option<&Path>,
    bmat_path: Option<&Path>,
    out: &Path,
) -> Result<i32> {
    match to {
        "mm" => {
            let Some(input) = input else {
                bail!("--to mm needs --input <bundle.json>");
            };
            let bundle = ProblemBundle::read(input)?;
            let n = bundle.n;
            let prefix = out.to_string_lossy();
            let a = Mat::from_vec(n, n, bundle.a.clone());
            crate::mm::write_matrix_file(&a, Path::new(&format!("{prefix}.A.mtx")))?;
            let bvec = Mat::from_vec(n, 1, bundle.b.clone());
            crate::mm::write_matrix_file(&bvec, Path::new(&format!("{prefix}.b.mtx")))?;
            if let Some(bm) = &bundle.b_matrix {
                let b = Mat::from_vec(n, n, bm.clone());
                crate::mm::write_matrix_file(&b, Path::new(&format!("{prefix}.B.mtx")))?;
            }
            println!("wrote Matrix Market files with prefix {prefix}");
        }
        "json" => {
            let Some(a_path) = a_path else {
                bail!("--to json needs --a <A.mtx> and --b <b.mtx>");
            };
            let Some(b_path) = b_path else {
                bail!("--to json needs --b <b.mtx>");
            };
            let a = crate::mm::read_matrix_file(a_path)?;
            let b = crate::mm::read_matrix_file(b_path)?;
            if b.cols() != 1 {
                bail!("right-hand side file must be an n x 1 array");
            }
            let n = a.rows();
            if a.cols() != n || b.rows() != n {
                bail!("A must be n x n and b must be n x 1 with matching n");
            }
            let mut bundle = ProblemBundle {
                schema_version: crate::bundle::SCHEMA_VERSION,
                n,
                a: a.data().to_vec(),
                b_matrix: None,
                b: b.col(0),
                metadata: None,
            };
            if let Some(bm_path) = bmat_path {
                let bm = crate::mm::read_matrix_file(bm_path)?;
                if bm.rows() != n || bm.cols() != n {
                    bail!("B must be n x n");
                }
                bundle.b_matrix = Some(bm.data().to_vec());
            }
            bundle.validate()?;
            bundle.write(out)?;
            println!("wrote bundle to {}", out.display());
        }
        other => bail!("unknown conversion target '{other}' (mm, json)"),
    }
    Ok(0)
}

pub fn default_out(input: &Path, suffix: &str) -> PathBuf {
    let mut p = input.to_path_buf();
    p.set_extension(suffix);
    p
}
