use anyhow::Result;
use avekit_cli::commands::{self, parse_params};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "avekit",
    version,
    about = "Solvers, certificates, transforms and benchmarks for absolute value equations Ax - |x| = b"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded instance and write it as a JSON bundle.
    Gen {
        /// sigma_gt1 | rho_inv_lt1 | diag_dom | bvp | exp2n | infeasible | uniform
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Generator parameters as key=value (e.g. margin=0.2).
        #[arg(long = "param")]
        params: Vec<String>,
    },
    /// Run one solver on a bundle.
    Solve {
        #[arg(long)]
        method: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long = "max-iters", default_value_t = 500)]
        max_iters: usize,
        /// zero | picard | ones | <path to a JSON array>
        #[arg(long, default_value = "zero")]
        x0: String,
        /// Solver parameters as key=value (e.g. omega=0.9, theta=0.5).
        #[arg(long = "param")]
        params: Vec<String>,
        /// Record the per-iteration residual trace.
        #[arg(long, default_value_t = false)]
        trace: bool,
        /// Write the outcome as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solvability, uniqueness, nonexistence and structure certificates.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "enum-cap", default_value_t = 20)]
        enum_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the complete solution set by orthants.
    #[command(name = "enum")]
    Enumerate {
        #[arg(long)]
        input: PathBuf,
        /// Prune orthants through the solution bound box.
        #[arg(long, default_value_t = false)]
        prune: bool,
        #[arg(long = "enum-cap", default_value_t = 20)]
        enum_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal correction of an infeasible system.
    Correct {
        /// rhs | both | chebyshev
        #[arg(long)]
        mode: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "enum-cap", default_value_t = 20)]
        enum_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact reductions to neighbouring problem classes.
    Transform {
        /// lcp | ave | gave3n | milp-mps | hull
        #[arg(long)]
        to: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long = "enum-cap", default_value_t = 20)]
        enum_cap: usize,
    },
    /// Convert between JSON bundles and Matrix Market files.
    Convert {
        /// mm (bundle -> .mtx files) | json (.mtx files -> bundle)
        #[arg(long)]
        to: String,
        /// Bundle to expand (for --to mm).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Matrix A file (for --to json).
        #[arg(long)]
        a: Option<PathBuf>,
        /// Right-hand side file, n x 1 (for --to json).
        #[arg(long)]
        b: Option<PathBuf>,
        /// Optional generalized matrix B file (for --to json).
        #[arg(long)]
        bmat: Option<PathBuf>,
        /// Output prefix (mm) or bundle path (json).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a benchmark suite and write one CSV record per (instance, solver).
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write the per-solver summary as JSON.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Gen {
            kind,
            n,
            seed,
            out,
            params,
        } => commands::cmd_gen(&kind, n, seed, &out, &parse_params(&params)?),
        Cmd::Solve {
            method,
            input,
            tol,
            max_iters,
            x0,
            params,
            trace,
            out,
        } => commands::cmd_solve(
            &method,
            &input,
            tol,
            max_iters,
            &x0,
            &parse_params(&params)?,
            trace,
            out.as_deref(),
        ),
        Cmd::Analyze {
            input,
            enum_cap,
            out,
        } => commands::cmd_analyze(&input, enum_cap, out.as_deref()),
        Cmd::Enumerate {
            input,
            prune,
            enum_cap,
            out,
        } => commands::cmd_enum(&input, prune, enum_cap, out.as_deref()),
        Cmd::Correct {
            mode,
            input,
            enum_cap,
            out,
        } => commands::cmd_correct(&input, &mode, enum_cap, out.as_deref()),
        Cmd::Transform {
            to,
            input,
            out,
            enum_cap,
        } => commands::cmd_transform(&input, &to, &out, enum_cap),
        Cmd::Convert {
            to,
            input,
            a,
            b,
            bmat,
            out,
        } => commands::cmd_convert(
            &to,
            input.as_deref(),
            a.as_deref(),
            b.as_deref(),
            bmat.as_deref(),
            &out,
        ),
        Cmd::Bench {
            suite,
            out,
            jobs,
            summary,
        } => commands::cmd_bench(&suite, &out, jobs, summary.as_deref()),
    }
}

fn main() -> ExitCode {
    // die quietly when stdout is a closed pipe (e.g. `avekit ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
