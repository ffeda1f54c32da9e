//! Batch experiments: generate a family of tensors, run a list of
//! algorithms on each, and write per-trial rows, convergence traces and a
//! JSON summary.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{hooi, jacobi, thosvd, ConvergenceTrace, FactorInit, HooiOptions, JacobiInit, JacobiOptions, SolverStatus};
use crate::error::{Error, Result};
use crate::problems::{antisym_ground_state, function_tensor, random_antisymmetric, GroundStateOptions, HamiltonianSpec};
use crate::rank::admissible_rank;
use crate::rank_d::{hopm, rank1_to_antisymmetric, HopmInit, HopmOptions, Rank1Result};
use crate::tensor::DenseTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Antisymmetrized uniform random tensors, one per trial.
    RandomBatch,
    /// The antisymmetrized exponential function tensor (identical trials).
    Function,
    /// Antisymmetric ground state of the model Hamiltonian, seeded start.
    Groundstate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Hosvd,
    Hooi,
    HooiIdentity,
    Jacobi,
    JacobiIdentity,
    /// Rank-`d` approximation from HOPM with HOSVD start (`r` is ignored).
    Rankd,
    /// Rank-`d` approximation from HOPM with the order-4 eigenvector start.
    RankdKofidis,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hosvd => "hosvd",
            Algorithm::Hooi => "hooi",
            Algorithm::HooiIdentity => "hooi-identity",
            Algorithm::Jacobi => "jacobi",
            Algorithm::JacobiIdentity => "jacobi-identity",
            Algorithm::Rankd => "rankd",
            Algorithm::RankdKofidis => "rankd-kofidis",
        }
    }

    fn uses_r(self) -> bool {
        !matches!(self, Algorithm::Rankd | Algorithm::RankdKofidis)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub grad_tol: f64,
    pub max_iters: usize,
    pub max_rotations: usize,
    /// Jacobi pivot threshold; `None` means `1/(10n)`.
    pub eps: Option<f64>,
    pub eigen_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            max_iters: 1000,
            max_rotations: 10_000,
            eps: None,
            eigen_tol: 1e-8,
        }
    }
}

/// Experiment description, loadable from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    pub algorithms: Vec<Algorithm>,
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub trials: usize,
    /// Trial `k` uses seed `seed_base + k`.
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_cv")]
    pub c_v: f64,
    #[serde(default = "default_cw")]
    pub c_w: f64,
}

fn default_cv() -> f64 {
    100.0
}

fn default_cw() -> f64 {
    5.0
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::InvalidParameter("no algorithms given".into()));
        }
        if self.d < 2 {
            return Err(Error::InvalidParameter(format!("need d >= 2, got {}", self.d)));
        }
        if self.n < self.d {
            return Err(Error::InvalidParameter(format!("need n >= d, got n = {}, d = {}", self.n, self.d)));
        }
        if self.family == Family::Function && !(self.d == 3 || self.d == 4) {
            return Err(Error::InvalidParameter("function family needs d in {3, 4}".into()));
        }
        if self.family == Family::Groundstate && self.n < 3 {
            return Err(Error::InvalidParameter("groundstate family needs n >= 3".into()));
        }
        if self.algorithms.iter().any(|a| a.uses_r()) && !admissible_rank(self.n, self.d, self.r) {
            return Err(Error::InvalidRank {
                rank: self.r,
                reason: format!(
                    "not an attainable multilinear rank for n = {}, d = {}",
                    self.n, self.d
                ),
            });
        }
        if self.algorithms.contains(&Algorithm::RankdKofidis) && self.d != 4 {
            return Err(Error::InvalidParameter("rankd-kofidis needs d = 4".into()));
        }
        if self.r == 0 && self.algorithms.iter().any(|a| a.uses_r()) {
            return Err(Error::InvalidRank {
                rank: 0,
                reason: "rank 0 has no approximation to compute".into(),
            });
        }
        Ok(())
    }

    /// Tensor for trial `k`.
    pub fn instance(&self, trial: usize) -> Result<DenseTensor> {
        let seed = self.seed_base.wrapping_add(trial as u64);
        match self.family {
            Family::RandomBatch => Ok(random_antisymmetric(self.n, self.d, seed)),
            Family::Function => function_tensor(self.n, self.d),
            Family::Groundstate => {
                let spec = HamiltonianSpec {
                    d: self.d,
                    n: self.n,
                    c_v: self.c_v,
                    c_w: self.c_w,
                };
                let opts = GroundStateOptions {
                    tol: self.tolerances.eigen_tol,
                    seed,
                    ..Default::default()
                };
                Ok(antisym_ground_state(&spec, &opts)?.eigentensor)
            }
        }
    }
}

/// Result of one algorithm on one trial.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub algorithm: Algorithm,
    pub error: f64,
    pub gradnorm: f64,
    pub iterations: usize,
    pub wall_time: f64,
    /// Solver status, or `error` if the solver returned an error.
    pub status: String,
    #[serde(skip)]
    pub trace: ConvergenceTrace,
}

impl TrialRecord {
    pub fn converged(&self) -> bool {
        self.status == "converged" || self.status == "zero-tensor" || self.status == "direct"
    }
}

fn status_name(s: SolverStatus) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

/// Runs one algorithm and reports the antisymmetric approximation error.
pub fn run_algorithm(a: &DenseTensor, alg: Algorithm, r: usize, tol: &Tolerances) -> Result<(f64, f64, usize, SolverStatus, ConvergenceTrace)> {
    let hooi_opts = |init| HooiOptions {
        max_iters: tol.max_iters,
        grad_tol: tol.grad_tol,
        init,
        ..Default::default()
    };
    let jac_opts = |init| JacobiOptions {
        eps: tol.eps,
        grad_tol: tol.grad_tol,
        max_rotations: tol.max_rotations,
        init,
        ..Default::default()
    };
    let hopm_opts = |init| HopmOptions {
        init: Some(init),
        tol: tol.grad_tol,
        max_iters: tol.max_iters,
        ..Default::default()
    };
    let rankd = |res: Rank1Result| -> Result<_> {
        let t = rank1_to_antisymmetric(a, &res)?;
        Ok((t.error, res.gradient_norm, res.iterations, res.status, res.trace))
    };
    match alg {
        Algorithm::Hosvd => {
            let t = thosvd(a, r)?;
            let mut trace = ConvergenceTrace::default();
            trace.push(0, t.objective, t.error, f64::NAN);
            Ok((t.error, f64::NAN, 0, SolverStatus::Converged, trace))
        }
        Algorithm::Hooi | Algorithm::HooiIdentity => {
            let init = if alg == Algorithm::Hooi { FactorInit::Hosvd } else { FactorInit::Identity };
            let res = hooi(a, r, &hooi_opts(init))?;
            Ok((res.approx.error, res.gradient_norm, res.iterations, res.status, res.trace))
        }
        Algorithm::Jacobi | Algorithm::JacobiIdentity => {
            let init = if alg == Algorithm::Jacobi { JacobiInit::Hosvd } else { JacobiInit::Identity };
            let res = jacobi(a, r, &jac_opts(init))?;
            Ok((res.approx.error, res.gradient_norm, res.rotations, res.status, res.state.trace))
        }
        Algorithm::Rankd => rankd(hopm(a, &hopm_opts(HopmInit::Hosvd))?),
        Algorithm::RankdKofidis => rankd(hopm(a, &hopm_opts(HopmInit::Kofidis))?),
    }
}

fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Vec<TrialRecord> {
    let failed = |alg, msg: String| TrialRecord {
        trial,
        algorithm: alg,
        error: f64::NAN,
        gradnorm: f64::NAN,
        iterations: 0,
        wall_time: 0.0,
        status: "error".into(),
        trace: {
            warn!("trial {trial}, {}: {msg}", Algorithm::name(alg));
            ConvergenceTrace::default()
        },
    };
    let a = match cfg.instance(trial) {
        Ok(a) => a,
        Err(e) => return cfg.algorithms.iter().map(|&alg| failed(alg, e.to_string())).collect(),
    };
    cfg.algorithms
        .iter()
        .map(|&alg| {
            let start = Instant::now();
            match run_algorithm(&a, alg, cfg.r, &cfg.tolerances) {
                Ok((error, gradnorm, iterations, status, trace)) => TrialRecord {
                    trial,
                    algorithm: alg,
                    error,
                    gradnorm,
                    iterations,
                    wall_time: start.elapsed().as_secs_f64(),
                    status: if alg == Algorithm::Hosvd { "direct".into() } else { status_name(status) },
                    trace,
                },
                Err(e) => failed(alg, e.to_string()),
            }
        })
        .collect()
}

/// Quantiles of a sample (linear interpolation between order statistics).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Option<Self> {
        let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Some(Self {
            min: v[0],
            q25: q(0.25),
            median: q(0.5),
            q75: q(0.75),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmSummary {
    pub runs: usize,
    pub converged: usize,
    pub failed: usize,
    pub error_quantiles: Option<Quantiles>,
    pub mean_iterations: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub trials: usize,
    pub algorithms: BTreeMap<String, AlgorithmSummary>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

impl ExperimentSummary {
    /// True if every solver run converged.
    pub fn all_converged(&self) -> bool {
        self.records.iter().all(TrialRecord::converged)
    }
}

pub const TRIALS_HEADER: [&str; 7] = ["trial", "algorithm", "error", "gradnorm", "iterations", "wall_time", "status"];

/// Writes the per-trial table with header
/// `trial,algorithm,error,gradnorm,iterations,wall_time,status`.
pub fn write_trials_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIALS_HEADER)?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.algorithm.name().to_string(),
            r.error.to_string(),
            r.gradnorm.to_string(),
            r.iterations.to_string(),
            r.wall_time.to_string(),
            r.status.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn summarize(cfg: &ExperimentConfig, records: Vec<TrialRecord>) -> ExperimentSummary {
    let mut algorithms = BTreeMap::new();
    for &alg in &cfg.algorithms {
        let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.algorithm == alg).collect();
        let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
        let ok: Vec<&&TrialRecord> = rows.iter().filter(|r| r.status != "error").collect();
        algorithms.insert(
            alg.name().to_string(),
            AlgorithmSummary {
                runs: rows.len(),
                converged: rows.iter().filter(|r| r.converged()).count(),
                failed: rows.len() - ok.len(),
                error_quantiles: Quantiles::of(&errors),
                mean_iterations: (!ok.is_empty())
                    .then(|| ok.iter().map(|r| r.iterations as f64).sum::<f64>() / ok.len() as f64),
            },
        );
    }
    ExperimentSummary {
        config: cfg.clone(),
        trials: cfg.trials,
        algorithms,
        records,
    }
}

/// Runs every trial (in parallel, results ordered by trial index) and, if
/// `output_dir` is set, writes `trials.csv`, `summary.json` and
/// `traces/trial<k>_<algorithm>.csv`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    info!("running {} trials of {:?}", cfg.trials, cfg.family);
    let records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let summary = summarize(cfg, records);
    if let Some(dir) = &cfg.output_dir {
        write_artifacts(dir, &summary)?;
    }
    Ok(summary)
}

fn write_artifacts(dir: &Path, summary: &ExperimentSummary) -> Result<()> {
    let traces = dir.join("traces");
    fs::create_dir_all(&traces)?;
    write_trials_csv(&summary.records, fs::File::create(dir.join("trials.csv"))?)?;
    for r in &summary.records {
        r.trace
            .save_csv(traces.join(format!("trial{:04}_{}.csv", r.trial, r.algorithm.name())))?;
    }
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(summary)?)?;
    Ok(())
}

/// HOPM from the HOSVD start and from the eigenvector start on the same
/// order-4 tensor.
#[derive(Debug, Clone)]
pub struct InitComparison {
    pub hosvd: Rank1Result,
    pub kofidis: Rank1Result,
    /// Antisymmetric rank-4 approximation errors `(hosvd, kofidis)`.
    pub errors: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct InitComparisonSummary {
    pub error_hosvd: f64,
    pub error_kofidis: f64,
    pub iterations_hosvd: usize,
    pub iterations_kofidis: usize,
    pub status_hosvd: SolverStatus,
    pub status_kofidis: SolverStatus,
}

impl InitComparison {
    pub fn summary(&self) -> InitComparisonSummary {
        InitComparisonSummary {
            error_hosvd: self.errors.0,
            error_kofidis: self.errors.1,
            iterations_hosvd: self.hosvd.iterations,
            iterations_kofidis: self.kofidis.iterations,
            status_hosvd: self.hosvd.status,
            status_kofidis: self.kofidis.status,
        }
    }

    /// Side-by-side traces with header
    /// `iteration,objective_hosvd,error_hosvd,gradnorm_hosvd,objective_kofidis,error_kofidis,gradnorm_kofidis`;
    /// the shorter run leaves its columns empty.
    pub fn write_aligned_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "iteration",
            "objective_hosvd",
            "error_hosvd",
            "gradnorm_hosvd",
            "objective_kofidis",
            "error_kofidis",
            "gradnorm_kofidis",
        ])?;
        let (a, b) = (&self.hosvd.trace.records, &self.kofidis.trace.records);
        let cells = |t: Option<&crate::approx::TraceRecord>| match t {
            Some(t) => [t.objective.to_string(), t.error.to_string(), t.gradnorm.to_string()],
            None => Default::default(),
        };
        for k in 0..a.len().max(b.len()) {
            let mut row = vec![k.to_string()];
            row.extend(cells(a.get(k)));
            row.extend(cells(b.get(k)));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs HOPM twice with both starts on an order-4 tensor.
pub fn compare_inits(a: &DenseTensor, tol: f64, max_iters: usize) -> Result<InitComparison> {
    if a.order() != 4 {
        return Err(Error::InvalidShape(format!("need an order-4 tensor, got order {}", a.order())));
    }
    let run = |init| -> Result<(Rank1Result, f64)> {
        let res = hopm(
            a,
            &HopmOptions {
                init: Some(init),
                tol,
                max_iters,
                ..Default::default()
            },
        )?;
        let err = rank1_to_antisymmetric(a, &res)?.error;
        Ok((res, err))
    };
    let (hosvd, e1) = run(HopmInit::Hosvd)?;
    let (kofidis, e2) = run(HopmInit::Kofidis)?;
    Ok(InitComparison {
        hosvd,
        kofidis,
        errors: (e1, e2),
    })
}
