use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// One row of a convergence trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub objective: f64,
    pub error: f64,
    pub gradnorm: f64,
    pub pivot_i: Option<usize>,
    pub pivot_j: Option<usize>,
}

/// How an iterative solver stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverStatus {
    /// Gradient norm reached the tolerance.
    Converged,
    /// Objective and gradient stopped improving before the tolerance.
    Stagnated,
    /// Iteration cap reached.
    MaxIterations,
    /// No admissible step could be found.
    Stalled,
    /// Input was the zero tensor.
    ZeroTensor,
    /// Unrecoverable breakdown (e.g. repeated zero contractions).
    Failed,
}

impl SolverStatus {
    pub fn converged(self) -> bool {
        matches!(self, SolverStatus::Converged | SolverStatus::ZeroTensor)
    }
}

/// Per-iteration history: objective `‖S‖`, approximation error, and
/// gradient norm. CSV column order is
/// `iteration,objective,error,gradnorm,pivot_i,pivot_j`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ConvergenceTrace {
    pub records: Vec<TraceRecord>,
}

impl ConvergenceTrace {
    pub fn push(&mut self, iteration: usize, objective: f64, error: f64, gradnorm: f64) {
        self.records.push(TraceRecord {
            iteration,
            objective,
            error,
            gradnorm,
            pivot_i: None,
            pivot_j: None,
        });
    }

    pub fn push_pivot(&mut self, iteration: usize, objective: f64, error: f64, gradnorm: f64, pivot: (usize, usize)) {
        self.records.push(TraceRecord {
            iteration,
            objective,
            error,
            gradnorm,
            pivot_i: Some(pivot.0),
            pivot_j: Some(pivot.1),
        });
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// True if every objective is at least its predecessor minus
    /// `slack·max(1, |previous|)`.
    pub fn objective_nondecreasing(&self, slack: f64) -> bool {
        self.records
            .windows(2)
            .all(|w| w[1].objective >= w[0].objective - slack * w[0].objective.abs().max(1.0))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.records.is_empty() {
            w.write_record(["iteration", "objective", "error", "gradnorm", "pivot_i", "pivot_j"])?;
        }
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(File::create(path)?)
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        serde_json::to_writer_pretty(File::create(path)?, &self.records)?;
        Ok(())
    }
}
