//! TOML experiment configuration. Frequencies are given in MHz (`f`, converted to `2πf`
//! rad/µs), decoherence rates in kHz or in units of the peak Rabi frequency.

use std::path::Path;

use geogate::gates::{NamedGate, Scheme};
use geogate::path::{DetuningStrategy, EnvelopeShape};
use geogate::quadrature::uniform_nodes;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

pub const DEFAULT_STEPS: usize = geogate::propagate::DEFAULT_STEPS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Names the output files.
    pub experiment: String,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub drive: DriveConfig,
    pub synthesize: Option<SynthesizeConfig>,
    pub decoherence: Option<DecoherenceConfig>,
    pub error_grid: Option<ErrorGridConfig>,
    pub omega_scan: Option<OmegaScanConfig>,
    pub dynamics: Option<DynamicsConfig>,
    pub two_qubit: Option<TwoQubitConfig>,
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

/// Envelope family, peak Rabi frequency and detuning strategy shared by the recipes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveConfig {
    pub envelope: EnvelopeShape,
    pub peak_mhz: f64,
    pub strategy: DetuningStrategy,
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self { envelope: EnvelopeShape::Sine, peak_mhz: 20.0, strategy: DetuningStrategy::Constant }
    }
}

/// `points` uniform values from `start` to `stop`, both included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        uniform_nodes(self.start, self.stop, self.points).collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.points < 2 {
            return Err(BenchError::Config(format!("{name}: needs at least 2 points, got {}", self.points)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.start >= self.stop {
            return Err(BenchError::Config(format!("{name}: empty range [{}, {}]", self.start, self.stop)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthesizeConfig {
    pub scheme: Scheme,
    pub gate: NamedGate,
    /// Total samples across all segments.
    #[serde(default = "default_pulse_samples")]
    pub samples: usize,
}

fn default_pulse_samples() -> usize {
    1024
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoherenceConfig {
    pub schemes: Vec<Scheme>,
    pub gates: Vec<NamedGate>,
    /// `κ₁ = κ₂ = κ` in units of the peak Rabi frequency.
    pub kappa_over_peak: Sweep,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

fn default_grid_points() -> usize {
    geogate::open_system::DEFAULT_GRID_POINTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorGridConfig {
    pub schemes: Vec<Scheme>,
    pub gates: Vec<NamedGate>,
    pub kappa_over_peak: f64,
    /// `δ` in units of the peak Rabi frequency.
    pub detuning_drift: Sweep,
    /// Fractional amplitude error `ε`.
    pub amplitude_error: Sweep,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

/// One driven transmon and its decoherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransmonSection {
    pub levels: usize,
    pub anharmonicity_mhz: f64,
    pub drag: bool,
    /// `κ₁ = κ₂`, in kHz (`2π × f`).
    pub kappa_khz: f64,
}

impl Default for TransmonSection {
    fn default() -> Self {
        Self { levels: 3, anharmonicity_mhz: 220.0, drag: true, kappa_khz: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaScanConfig {
    pub gates: Vec<NamedGate>,
    pub min_mhz: f64,
    pub max_mhz: f64,
    pub resolution_mhz: f64,
    /// Golden-section refinement around the best grid point, to this tolerance.
    #[serde(default = "default_refine")]
    pub refine_mhz: f64,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default)]
    pub transmon: TransmonSection,
}

fn default_refine() -> f64 {
    0.01
}

impl OmegaScanConfig {
    pub fn peaks(&self) -> Vec<f64> {
        let n = ((self.max_mhz - self.min_mhz) / self.resolution_mhz).round() as usize + 1;
        (0..n).map(|k| (self.min_mhz + k as f64 * self.resolution_mhz).min(self.max_mhz)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// `|0⟩`.
    Ground,
    /// `|1⟩`.
    Excited,
    /// `(|0⟩ + |1⟩)/√2`.
    Plus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsConfig {
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    pub gate: NamedGate,
    pub peak_mhz: f64,
    pub initial: InitialState,
    #[serde(default = "default_time_samples")]
    pub samples: usize,
    /// θ points for the gate fidelity at intermediate times.
    #[serde(default = "default_dynamics_grid")]
    pub grid_points: usize,
    #[serde(default)]
    pub transmon: TransmonSection,
}

fn default_scheme() -> Scheme {
    Scheme::Nsgp
}

fn default_time_samples() -> usize {
    256
}

fn default_dynamics_grid() -> usize {
    201
}

/// Parametrically coupled transmons. `qubit_detuning_mhz` is `(ω₁ − ω₂)/2π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TwoQubitConfig {
    pub coupling_mhz: f64,
    pub modulation_depth: f64,
    pub qubit_detuning_mhz: f64,
    pub anharmonicity_mhz: [f64; 2],
    pub levels: usize,
    /// Same rate for decay and dephasing on both transmons.
    pub kappa_khz: f64,
    pub grid: [usize; 2],
    /// Product-state grid for the gate fidelity at intermediate times.
    pub dynamics_grid: [usize; 2],
    pub samples: usize,
    /// Real amplitudes on `|00⟩, |01⟩, |10⟩, |11⟩`, normalized on use.
    pub initial: [f64; 4],
}

impl Default for TwoQubitConfig {
    fn default() -> Self {
        Self {
            coupling_mhz: 8.0,
            modulation_depth: 1.3,
            qubit_detuning_mhz: -345.0,
            anharmonicity_mhz: [220.0, 180.0],
            levels: 3,
            kappa_khz: 4.0,
            grid: [101, 101],
            dynamics_grid: [21, 21],
            samples: 256,
            initial: [0.0, 1.0, 0.0, 1.0],
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(BenchError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(BenchError::Config(format!("{name} must be >= 0 and finite, got {v}")))
    }
}

fn grid(name: &str, points: usize) -> Result<()> {
    if points < 2 {
        return Err(BenchError::Config(format!("{name} must be >= 2, got {points}")));
    }
    Ok(())
}

fn non_empty<T>(name: &str, items: &[T]) -> Result<()> {
    if items.is_empty() {
        return Err(BenchError::Config(format!("{name} must not be empty")));
    }
    Ok(())
}

impl TransmonSection {
    fn validate(&self) -> Result<()> {
        if self.levels < 2 {
            return Err(BenchError::Config(format!("transmon levels must be >= 2, got {}", self.levels)));
        }
        positive("anharmonicity_mhz", self.anharmonicity_mhz)?;
        non_negative("kappa_khz", self.kappa_khz)
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment.is_empty() || self.experiment.contains(['/', '\\']) {
            return Err(BenchError::Config(format!("experiment id '{}' must be a plain file stem", self.experiment)));
        }
        if self.steps == 0 {
            return Err(BenchError::Config("steps must be >= 1".into()));
        }
        positive("drive.peak_mhz", self.drive.peak_mhz)?;
        if let Some(s) = &self.synthesize {
            if s.samples < 1024 {
                return Err(BenchError::Config(format!("synthesize.samples must be >= 1024, got {}", s.samples)));
            }
        }
        if let Some(d) = &self.decoherence {
            non_empty("decoherence.schemes", &d.schemes)?;
            non_empty("decoherence.gates", &d.gates)?;
            d.kappa_over_peak.validate("decoherence.kappa_over_peak")?;
            non_negative("decoherence.kappa_over_peak.start", d.kappa_over_peak.start)?;
            grid("decoherence.grid_points", d.grid_points)?;
        }
        if let Some(e) = &self.error_grid {
            non_empty("error_grid.schemes", &e.schemes)?;
            non_empty("error_grid.gates", &e.gates)?;
            non_negative("error_grid.kappa_over_peak", e.kappa_over_peak)?;
            e.detuning_drift.validate("error_grid.detuning_drift")?;
            e.amplitude_error.validate("error_grid.amplitude_error")?;
            grid("error_grid.grid_points", e.grid_points)?;
        }
        if let Some(o) = &self.omega_scan {
            non_empty("omega_scan.gates", &o.gates)?;
            positive("omega_scan.min_mhz", o.min_mhz)?;
            positive("omega_scan.resolution_mhz", o.resolution_mhz)?;
            positive("omega_scan.refine_mhz", o.refine_mhz)?;
            if !matches!(o.max_mhz.partial_cmp(&o.min_mhz), Some(std::cmp::Ordering::Greater)) {
                return Err(BenchError::Config(format!("omega_scan: empty range [{}, {}]", o.min_mhz, o.max_mhz)));
            }
            grid("omega_scan.grid_points", o.grid_points)?;
            o.transmon.validate()?;
        }
        if let Some(d) = &self.dynamics {
            positive("dynamics.peak_mhz", d.peak_mhz)?;
            grid("dynamics.samples", d.samples)?;
            grid("dynamics.grid_points", d.grid_points)?;
            d.transmon.validate()?;
        }
        if let Some(t) = &self.two_qubit {
            positive("two_qubit.coupling_mhz", t.coupling_mhz)?;
            positive("two_qubit.modulation_depth", t.modulation_depth)?;
            if t.qubit_detuning_mhz == 0.0 || !t.qubit_detuning_mhz.is_finite() {
                return Err(BenchError::Config("two_qubit.qubit_detuning_mhz must be nonzero".into()));
            }
            positive("two_qubit.anharmonicity_mhz[0]", t.anharmonicity_mhz[0])?;
            positive("two_qubit.anharmonicity_mhz[1]", t.anharmonicity_mhz[1])?;
            if t.levels < 2 {
                return Err(BenchError::Config(format!("two_qubit.levels must be >= 2, got {}", t.levels)));
            }
            non_negative("two_qubit.kappa_khz", t.kappa_khz)?;
            for (name, g) in [("two_qubit.grid", t.grid), ("two_qubit.dynamics_grid", t.dynamics_grid)] {
                grid(name, g[0])?;
                grid(name, g[1])?;
            }
            grid("two_qubit.samples", t.samples)?;
            if t.initial.iter().map(|x| x * x).sum::<f64>() == 0.0 {
                return Err(BenchError::Config("two_qubit.initial must be a nonzero vector".into()));
            }
        }
        Ok(())
    }

    /// The named section, or a config error naming the table the command needs.
    pub fn section<'a, T>(&self, section: &'a Option<T>, table: &str, command: &str) -> Result<&'a T> {
        section.as_ref().ok_or_else(|| BenchError::Config(format!("command '{command}' needs a [{table}] table")))
    }
}
