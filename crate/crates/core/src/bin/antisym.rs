//! Command-line front end. Prints a JSON (or CSV) summary on stdout and
//! diagnostics on stderr. Exit codes: 0 success, 1 runtime failure,
//! 2 usage error, 3 non-convergence under `--strict`.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use antisym::approx::{hooi, jacobi, thosvd, ConvergenceTrace, FactorInit, HooiOptions, JacobiInit, JacobiOptions, SolverStatus};
use antisym::experiment::{compare_inits, run_experiment, write_trials_csv, ExperimentConfig};
use antisym::io::{read_tensor, write_tensor};
use antisym::problems::{antisym_ground_state, function_tensor, random_antisymmetric, GroundStateOptions, HamiltonianSpec};
use antisym::rank::multilinear_rank;
use antisym::rank_d::{hopm, rank1_to_antisymmetric, HopmInit, HopmOptions};
use antisym::Error;

#[derive(Parser)]
#[command(name = "antisym", version, about = "Low multilinear rank approximation of antisymmetric tensors")]
struct Cli {
    /// Seed for random generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Exit with status 3 if an iterative solver does not converge.
    #[arg(long, global = true)]
    strict: bool,
    /// Format of the summary written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tensor file.
    #[command(subcommand)]
    Gen(Gen),
    /// Multilinear rank of a tensor.
    Rank {
        #[arg(long)]
        input: PathBuf,
        /// Absolute singular value threshold.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Truncated HOSVD.
    Hosvd {
        #[command(flatten)]
        io: SolverIo,
        #[arg(long)]
        rank: usize,
    },
    /// Higher-order orthogonal iteration with antisymmetrized output.
    Hooi(IterArgs),
    /// Jacobi rotation algorithm.
    Jacobi {
        #[command(flatten)]
        args: IterArgs,
        /// Pivot threshold eps = factor / n.
        #[arg(long, default_value_t = 0.1)]
        eps_factor: f64,
    },
    /// Antisymmetric rank-d approximation via the higher-order power method.
    Rankd {
        #[command(flatten)]
        io: SolverIo,
        #[arg(long, value_enum, default_value_t = RankdInit::Auto)]
        init: RankdInit,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_iters: usize,
    },
    /// Run a batch experiment from a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// HOPM from both starts on an order-4 tensor.
    CompareInits {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_iters: usize,
        /// Directory for the aligned and per-start trace CSVs.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Antisymmetrized uniform random tensor.
    Random(GenShape),
    /// Antisymmetrized exp(-sqrt(x^2 + 2y^2 + ...)) on [0, 1]^d.
    Function(GenShape),
    /// Antisymmetric ground state of the model Hamiltonian.
    Groundstate {
        #[command(flatten)]
        shape: GenShape,
        #[arg(long, default_value_t = 100.0)]
        cv: f64,
        #[arg(long, default_value_t = 5.0)]
        cw: f64,
        /// Eigensolver residual tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Args)]
struct GenShape {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct SolverIo {
    #[arg(long)]
    input: PathBuf,
    /// Write the reconstructed approximation here.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write the convergence trace CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct IterArgs {
    #[command(flatten)]
    io: SolverIo,
    #[arg(long)]
    rank: usize,
    /// Gradient norm tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = InitArg::Hosvd)]
    init: InitArg,
    /// Sweeps for HOOI, accepted rotations for Jacobi.
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Hosvd,
    Identity,
}

#[derive(Clone, Copy, ValueEnum)]
enum RankdInit {
    /// Eigenvector start for d = 4, HOSVD otherwise.
    Auto,
    Hosvd,
    Kofidis,
}

enum Failure {
    Usage(String),
    Runtime(String),
    NotConverged(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence(_) | Error::NotOrthonormal(_) => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Report {
    summary: Value,
    /// Statuses of iterative solvers, checked under `--strict`.
    statuses: Vec<String>,
    /// Replaces the one-row CSV rendering of `summary`.
    csv: Option<String>,
}

impl Report {
    fn new(summary: Value) -> Self {
        Self {
            summary,
            statuses: Vec::new(),
            csv: None,
        }
    }

    fn with_status(mut self, s: SolverStatus) -> Self {
        self.statuses.push(status_name(s));
        self
    }
}

fn status_name(s: SolverStatus) -> String {
    serde_json::to_value(s).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn save_outputs(io: &SolverIo, recon: impl FnOnce() -> antisym::Result<antisym::DenseTensor>, trace: &ConvergenceTrace) -> Result<(), Failure> {
    if let Some(path) = &io.output {
        write_tensor(path, &recon()?)?;
    }
    if let Some(path) = &io.trace {
        trace.save_csv(path)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Gen(g) => {
            let (kind, shape, tensor, extra) = match g {
                Gen::Random(s) => ("random", s, random_antisymmetric(s.n, s.d, cli.seed), Map::new()),
                Gen::Function(s) => ("function", s, function_tensor(s.n, s.d)?, Map::new()),
                Gen::Groundstate { shape, cv, cw, tol } => {
                    let spec = HamiltonianSpec {
                        d: shape.d,
                        n: shape.n,
                        c_v: *cv,
                        c_w: *cw,
                    };
                    let opts = GroundStateOptions {
                        tol: *tol,
                        seed: cli.seed,
                        ..Default::default()
                    };
                    let g = antisym_ground_state(&spec, &opts).map_err(|e| match e {
                        Error::NoConvergence(m) => Failure::NotConverged(m),
                        e => e.into(),
                    })?;
                    let mut extra = Map::new();
                    extra.insert("eigenvalue".into(), json!(g.eigenvalue));
                    extra.insert("residual".into(), json!(g.residual));
                    extra.insert("operator_applications".into(), json!(g.applies));
                    ("groundstate", shape, g.eigentensor, extra)
                }
            };
            write_tensor(&shape.output, &tensor)?;
            let mut m = Map::new();
            m.insert("kind".into(), json!(kind));
            m.insert("n".into(), json!(shape.n));
            m.insert("d".into(), json!(shape.d));
            m.insert("seed".into(), json!(cli.seed));
            m.insert("norm".into(), json!(tensor.frobenius_norm()));
            m.insert("output".into(), json!(shape.output));
            m.extend(extra);
            Ok(Report::new(Value::Object(m)))
        }
        Command::Rank { input, tol } => {
            let a = read_tensor(input)?;
            let rep = multilinear_rank(&a, *tol)?;
            Ok(Report::new(json!({
                "n": a.dims()[0],
                "d": a.order(),
                "rank": rep.rank,
                "tolerance_used": rep.tolerance_used,
                "singular_values": rep.singular_values,
            })))
        }
        Command::Hosvd { io, rank } => {
            let a = read_tensor(&io.input)?;
            let t = thosvd(&a, *rank)?;
            let mut trace = ConvergenceTrace::default();
            trace.push(0, t.objective, t.error, f64::NAN);
            save_outputs(io, || t.reconstruct(), &trace)?;
            Ok(Report::new(json!({
                "algorithm": "hosvd",
                "rank": rank,
                "error": t.error,
                "relative_error": t.error / a.frobenius_norm(),
                "objective": t.objective,
            })))
        }
        Command::Hooi(args) => {
            let a = read_tensor(&args.io.input)?;
            let opts = HooiOptions {
                max_iters: args.max_iters.unwrap_or(1000),
                grad_tol: args.tol,
                init: match args.init {
                    InitArg::Hosvd => FactorInit::Hosvd,
                    InitArg::Identity => FactorInit::Identity,
                },
                ..Default::default()
            };
            let res = hooi(&a, args.rank, &opts)?;
            save_outputs(&args.io, || res.approx.reconstruct(), &res.trace)?;
            Ok(Report::new(json!({
                "algorithm": "hooi",
                "rank": args.rank,
                "status": res.status,
                "iterations": res.iterations,
                "error": res.approx.error,
                "relative_error": res.approx.error / a.frobenius_norm(),
                "unstructured_objective": res.objective,
                "gradient_norm": res.gradient_norm,
                "chosen_mode": res.chosen_mode,
            }))
            .with_status(res.status))
        }
        Command::Jacobi { args, eps_factor } => {
            let a = read_tensor(&args.io.input)?;
            let n = a.dims().first().copied().unwrap_or(0).max(1);
            let opts = JacobiOptions {
                eps: Some(eps_factor / n as f64),
                grad_tol: args.tol,
                max_rotations: args.max_iters.unwrap_or(10_000),
                init: match args.init {
                    InitArg::Hosvd => JacobiInit::Hosvd,
                    InitArg::Identity => JacobiInit::Identity,
                },
                ..Default::default()
            };
            let res = jacobi(&a, args.rank, &opts)?;
            save_outputs(&args.io, || res.approx.reconstruct(), res.trace())?;
            Ok(Report::new(json!({
                "algorithm": "jacobi",
                "rank": args.rank,
                "status": res.status,
                "rotations": res.rotations,
                "pivots_checked": res.pivots_checked,
                "error": res.approx.error,
                "relative_error": res.approx.error / a.frobenius_norm(),
                "objective": res.approx.objective,
                "gradient_norm": res.gradient_norm,
            }))
            .with_status(res.status))
        }
        Command::Rankd { io, init, tol, max_iters } => {
            let a = read_tensor(&io.input)?;
            let init = match init {
                RankdInit::Auto => None,
                RankdInit::Hosvd => Some(HopmInit::Hosvd),
                RankdInit::Kofidis => Some(HopmInit::Kofidis),
            };
            let res = hopm(
                &a,
                &HopmOptions {
                    init,
                    tol: *tol,
                    max_iters: *max_iters,
                    seed: cli.seed,
                    ..Default::default()
                },
            )?;
            let t = rank1_to_antisymmetric(&a, &res)?;
            save_outputs(io, || t.reconstruct(), &res.trace)?;
            Ok(Report::new(json!({
                "algorithm": "rankd",
                "status": res.status,
                "iterations": res.iterations,
                "alpha": res.alpha,
                "error": t.error,
                "relative_error": t.error / a.frobenius_norm(),
                "gradient_norm": res.gradient_norm,
                "restarts": res.restarts,
            }))
            .with_status(res.status))
        }
        Command::Experiment { config, output_dir } => {
            let mut cfg = ExperimentConfig::load(config)?;
            if output_dir.is_some() {
                cfg.output_dir = output_dir.clone();
            }
            let summary = run_experiment(&cfg)?;
            let mut buf = Vec::new();
            write_trials_csv(&summary.records, &mut buf)?;
            let mut rep = Report::new(serde_json::to_value(&summary).map_err(Error::from)?);
            rep.statuses = summary.records.iter().filter(|r| !r.converged()).map(|r| r.status.clone()).collect();
            rep.csv = Some(String::from_utf8_lossy(&buf).into_owned());
            Ok(rep)
        }
        Command::CompareInits {
            input,
            tol,
            max_iters,
            output_dir,
        } => {
            let a = read_tensor(input)?;
            let cmp = compare_inits(&a, *tol, *max_iters)?;
            if let Some(dir) = output_dir {
                fs::create_dir_all(dir).map_err(Error::from)?;
                cmp.write_aligned_csv(File::create(dir.join("aligned.csv")).map_err(Error::from)?)?;
                cmp.hosvd.trace.save_csv(dir.join("trace_hosvd.csv"))?;
                cmp.kofidis.trace.save_csv(dir.join("trace_kofidis.csv"))?;
            }
            let s = cmp.summary();
            Ok(Report::new(serde_json::to_value(&s).map_err(Error::from)?)
                .with_status(s.status_hosvd)
                .with_status(s.status_kofidis))
        }
    }
}

fn csv_row(summary: &Value) -> String {
    let Value::Object(m) = summary else {
        return format!("{summary}\n");
    };
    let cell = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => v.to_string(),
        other => other.to_string(),
    };
    let keys: Vec<&str> = m.keys().map(String::as_str).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(&keys);
    let _ = w.write_record(m.values().map(cell));
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

fn ensure_parent(path: &Path) {
    if let Some(p) = path.parent() {
        if !p.as_os_str().is_empty() {
            let _ = fs::create_dir_all(p);
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if let Command::Gen(Gen::Random(s) | Gen::Function(s) | Gen::Groundstate { shape: s, .. }) = &cli.command {
        ensure_parent(&s.output);
    }
    match run(&cli) {
        Ok(rep) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&rep.summary).unwrap_or_default() + "\n",
                Format::Csv => rep.csv.clone().unwrap_or_else(|| csv_row(&rep.summary)),
            };
            // A closed downstream pipe is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            let bad: Vec<&String> = rep.statuses.iter().filter(|s| !matches!(s.as_str(), "converged" | "zero-tensor" | "direct")).collect();
            if !bad.is_empty() {
                eprintln!("warning: {} solver run(s) did not converge: {:?}", bad.len(), bad);
                if cli.strict {
                    return ExitCode::from(3);
                }
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::NotConverged(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(if cli.strict { 3 } else { 1 })
        }
    }
}
