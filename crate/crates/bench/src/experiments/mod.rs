//! The six bench commands. Each returns a [`SweepReport`] plus any extra artifacts.

mod sweeps;
mod synthesize;
mod transmon;
mod two_qubit;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use geogate::gates::{nsgp_named_with, GateRecipe, NamedGate, Scheme};
use geogate::mhz;
use geogate::path::EnvelopeSpec;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::config::{DriveConfig, ExperimentConfig};
use crate::error::{BenchError, Result};
use crate::report::SweepReport;

pub use sweeps::{decoherence_fidelity, error_grid_fidelity, sweep_decoherence, sweep_error_grid};
pub use synthesize::synthesize;
pub use transmon::{dynamics, optimize_omega, transmon_fidelity, TransmonRun};
pub use two_qubit::two_qubit;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Synthesize,
    SweepDecoherence,
    SweepErrorGrid,
    OptimizeOmega,
    Dynamics,
    TwoQubit,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Self::Synthesize,
        Self::SweepDecoherence,
        Self::SweepErrorGrid,
        Self::OptimizeOmega,
        Self::Dynamics,
        Self::TwoQubit,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Synthesize => "synthesize",
            Self::SweepDecoherence => "sweep-decoherence",
            Self::SweepErrorGrid => "sweep-error-grid",
            Self::OptimizeOmega => "optimize-omega",
            Self::Dynamics => "dynamics",
            Self::TwoQubit => "two-qubit",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Command {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|c| c.id() == s).ok_or_else(|| {
            let valid: Vec<_> = Self::ALL.iter().map(|c| c.id()).collect();
            BenchError::Config(format!("unknown command '{s}' (valid: {})", valid.join(", ")))
        })
    }
}

/// Command-line overrides.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses one per core.
    pub jobs: Option<usize>,
    /// Integrator steps per piece, overriding the config.
    pub steps: Option<usize>,
}

/// Report plus extra files as `(file name, contents)`.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: SweepReport,
    pub artifacts: Vec<(String, String)>,
}

impl Outcome {
    pub fn new(report: SweepReport) -> Self {
        Self { report, artifacts: Vec::new() }
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut written = self.report.write(dir)?;
        for (name, contents) in &self.artifacts {
            let path = dir.join(name);
            std::fs::write(&path, contents)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Runs `command` on `config` and stamps the wall-clock runtime.
pub fn run(command: Command, config: &ExperimentConfig, options: RunOptions) -> Result<Outcome> {
    let steps = options.steps.unwrap_or(config.steps);
    if steps == 0 {
        return Err(BenchError::Config("steps must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(options.jobs.unwrap_or(0)).build()?;
    let started = Instant::now();
    let mut outcome = match command {
        Command::Synthesize => synthesize(config, steps)?,
        Command::SweepDecoherence => sweep_decoherence(config, steps, &pool)?,
        Command::SweepErrorGrid => sweep_error_grid(config, steps, &pool)?,
        Command::OptimizeOmega => optimize_omega(config, steps, &pool)?,
        Command::Dynamics => dynamics(config, steps)?,
        Command::TwoQubit => two_qubit(config, steps)?,
    };
    outcome.report.runtime_seconds = started.elapsed().as_secs_f64();
    outcome.report.validate()?;
    log::info!("{command} '{}' finished in {:.2} s", config.experiment, outcome.report.runtime_seconds);
    Ok(outcome)
}

/// Maps `items` on the pool; results keep the input order.
pub(crate) fn par_map<T, R, F>(pool: &ThreadPool, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    pool.install(|| items.par_iter().map(f).collect())
}

/// Named-gate recipe at the configured envelope and peak. The detuning strategy applies
/// to latitude recipes; the other schemes drive with fixed detunings.
pub fn build_recipe(scheme: Scheme, gate: NamedGate, drive: &DriveConfig) -> Result<GateRecipe> {
    build_recipe_at(scheme, gate, drive, drive.peak_mhz)
}

pub fn build_recipe_at(scheme: Scheme, gate: NamedGate, drive: &DriveConfig, peak_mhz: f64) -> Result<GateRecipe> {
    let envelope = EnvelopeSpec::new(drive.envelope, mhz(peak_mhz));
    let recipe = match scheme {
        Scheme::Nsgp => nsgp_named_with(gate, envelope, drive.strategy),
        other => other.named(gate, envelope),
    };
    recipe.map_err(|e| {
        let valid: Vec<String> = Scheme::ALL
            .iter()
            .flat_map(|s| NamedGate::ALL.iter().map(move |g| (s, g)))
            .filter(|(s, g)| s.named(**g, envelope).is_ok())
            .map(|(s, g)| format!("{s}/{g}"))
            .collect();
        BenchError::Config(format!("cannot build {scheme}/{gate}: {e} (valid: {})", valid.join(", ")))
    })
}

/// `"<scheme>.<gate>"`, the prefix of per-recipe summary keys.
pub(crate) fn key(scheme: Scheme, gate: NamedGate) -> String {
    format!("{scheme}.{gate}")
}
