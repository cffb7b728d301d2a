//! Benchmark harness: a suite file names generators x sizes x seeds and a
//! list of solver configurations; every (instance, solver) cell runs once.
//! Cells may be fanned out over a worker pool; records are ordered by cell
//! index before output, so results are deterministic apart from timings.

use crate::bundle::ProblemBundle;
use crate::dispatch::{run_method, StartPoint};
use crate::gen::{gen_instance, regular_uniform, GenKind};
use anyhow::{Context, Result};
use avekit::{SolveOutcome, SolverConfig};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: String,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverSpec {
    pub method: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iters: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub generators: Vec<GenSpec>,
    pub solvers: Vec<SolverSpec>,
}

impl SuiteSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("could not parse the suite specification")
    }
}

#[derive(Clone, Debug)]
pub struct BenchmarkRecord {
    pub instance_id: String,
    pub generator: String,
    pub n: usize,
    pub seed: u64,
    pub solver_id: String,
    pub params: String,
    pub status: String,
    pub iterations: usize,
    pub linear_solves: usize,
    pub residual_inf: f64,
    pub wall_time_ms: f64,
}

pub const CSV_HEADER: &str = "instance_id,generator,n,seed,solver_id,params,status,iterations,linear_solves,residual_inf,wall_time_ms";

impl BenchmarkRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:e},{:.3}",
            self.instance_id,
            self.generator,
            self.n,
            self.seed,
            self.solver_id,
            self.params,
            self.status,
            self.iterations,
            self.linear_solves,
            self.residual_inf,
            self.wall_time_ms
        )
    }
}

pub fn records_to_csv(records: &[BenchmarkRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

fn params_column(spec: &SolverSpec) -> String {
    let mut parts: Vec<String> = spec
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    if let Some(t) = spec.tol {
        parts.push(format!("tol={t}"));
    }
    if let Some(m) = spec.max_iters {
        parts.push(format!("max_iters={m}"));
    }
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(";")
    }
}

struct Cell {
    bundle: ProblemBundle,
    instance_id: String,
    generator: String,
    n: usize,
    seed: u64,
    solver: SolverSpec,
}

/// Run the full cross product. Individual solver failures become records
/// with an Error status; they never abort the suite.
pub fn run_suite(spec: &SuiteSpec, jobs: usize) -> Result<Vec<BenchmarkRecord>> {
    let mut cells: Vec<Cell> = Vec::new();
    for g in &spec.generators {
        for &n in &g.sizes {
            for &seed in &g.seeds {
                let bundle = if g.kind == "uniform-regular" {
                    regular_uniform(n, seed)?
                } else {
                    let kind = GenKind::parse(&g.kind)?;
                    gen_instance(kind, n, seed, &g.params)?
                };
                let instance_id = format!("{}-n{}-s{}", g.kind, n, seed);
                for solver in &spec.solvers {
                    cells.push(Cell {
                        bundle: bundle.clone(),
                        instance_id: instance_id.clone(),
                        generator: g.kind.clone(),
                        n,
                        seed,
                        solver: solver.clone(),
                    });
                }
            }
        }
    }

    let jobs = jobs.max(1);
    let mut results: Vec<Option<BenchmarkRecord>> = Vec::new();
    results.resize_with(cells.len(), || None);
    if jobs == 1 {
        for (i, cell) in cells.iter().enumerate() {
            results[i] = Some(run_cell(cell));
        }
    } else {
        let next = AtomicUsize::new(0);
        let slots: Vec<std::sync::Mutex<Option<BenchmarkRecord>>> =
            (0..cells.len()).map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= cells.len() {
                        break;
                    }
                    let record = run_cell(&cells[i]);
                    *slots[i].lock().unwrap() = Some(record);
                });
            }
        });
        for (i, slot) in slots.into_iter().enumerate() {
            results[i] = slot.into_inner().unwrap();
        }
    }
    Ok(results.into_iter().flatten().collect())
}

fn run_cell(cell: &Cell) -> BenchmarkRecord {
    let mut cfg = SolverConfig::default();
    if let Some(t) = cell.solver.tol {
        cfg.tol = t;
    }
    if let Some(m) = cell.solver.max_iters {
        cfg.max_iters = m;
    }
    cfg.params = cell.solver.params.clone();

    let start = Instant::now();
    let outcome: Result<SolveOutcome> = cell.bundle.to_ave().and_then(|p| {
        let b_matrix = cell
            .bundle
            .b_matrix
            .as_ref()
            .map(|bm| avekit::Mat::from_vec(cell.n, cell.n, bm.clone()));
        run_method(
            &cell.solver.method,
            &p,
            b_matrix.as_ref(),
            &StartPoint::Zero,
            &cfg,
            &cell.solver.params,
        )
    });
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    match outcome {
        Ok(out) => BenchmarkRecord {
            instance_id: cell.instance_id.clone(),
            generator: cell.generator.clone(),
            n: cell.n,
            seed: cell.seed,
            solver_id: cell.solver.method.clone(),
            params: params_column(&cell.solver),
            status: out.status.as_str().to_string(),
            iterations: out.iterations,
            linear_solves: out.linear_solves,
            residual_inf: out.residual_inf,
            wall_time_ms,
        },
        Err(e) => BenchmarkRecord {
            instance_id: cell.instance_id.clone(),
            generator: cell.generator.clone(),
            n: cell.n,
            seed: cell.seed,
            solver_id: cell.solver.method.clone(),
            params: params_column(&cell.solver),
            status: format!("Error({})", e.to_string().replace(',', ";")),
            iterations: 0,
            linear_solves: 0,
            residual_inf: f64::NAN,
            wall_time_ms,
        },
    }
}

/// Per-solver success rate and median iteration count.
pub fn summarize(records: &[BenchmarkRecord]) -> serde_json::Value {
    let mut by_solver: BTreeMap<String, Vec<&BenchmarkRecord>> = BTreeMap::new();
    for r in records {
        by_solver.entry(r.solver_id.clone()).or_default().push(r);
    }
    let mut out = serde_json::Map::new();
    for (solver, rs) in by_solver {
        let total = rs.len();
        let converged: Vec<&&BenchmarkRecord> =
            rs.iter().filter(|r| r.status == "Converged").collect();
        let mut iters: Vec<usize> = converged.iter().map(|r| r.iterations).collect();
        iters.sort_unstable();
        let median_iters = if iters.is_empty() {
            serde_json::Value::Null
        } else {
            serde_json::json!(iters[iters.len() / 2])
        };
        out.insert(
            solver,
            serde_json::json!({
                "runs": total,
                "converged": converged.len(),
                "success_rate": converged.len() as f64 / total.max(1) as f64,
                "median_iterations": median_iters,
            }),
        );
    }
    serde_json::Value::Object(out)
}
