//! Decoherence and systematic-error models, and the fidelity measures built on
//! Lindblad channels.

mod fidelity;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::GateRecipe;
use crate::linalg::{ladder_ops, Operator};
use crate::path::DriveSchedule;
use crate::propagate::{CollapseOp, Hamiltonian, Piece, Schedule};

pub use fidelity::{
    gate_fidelity, gate_fidelity_direct, state_fidelity, theta_grid, two_qubit_gate_fidelity, DEFAULT_GRID_POINTS,
    DEFAULT_TWO_QUBIT_GRID,
};

/// Decay and dephasing rates in rad/µs. Second-qubit rates default to the first-qubit
/// ones.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub decay: f64,
    pub dephasing: f64,
    #[serde(default)]
    pub decay_second: Option<f64>,
    #[serde(default)]
    pub dephasing_second: Option<f64>,
}

impl NoiseConfig {
    pub fn uniform(rate: f64) -> Self {
        Self { decay: rate, dephasing: rate, decay_second: None, dephasing_second: None }
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [Some(self.decay), Some(self.dephasing), self.decay_second, self.dephasing_second];
        for r in rates.into_iter().flatten() {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::InvalidNoise(format!("rate {r} must be finite and >= 0")));
            }
        }
        Ok(())
    }

    fn rates(&self, qubit: usize) -> (f64, f64) {
        if qubit == 0 {
            (self.decay, self.dephasing)
        } else {
            (self.decay_second.unwrap_or(self.decay), self.dephasing_second.unwrap_or(self.dephasing))
        }
    }

    /// Lowering (rate `κ₁`) and number (rate `κ₂`) collapse operators for every qubit of
    /// a register of `qubits` transmons with `levels` levels each.
    pub fn collapse_ops(&self, levels: usize, qubits: usize) -> Result<Vec<CollapseOp>> {
        self.validate()?;
        let mut ops = Vec::new();
        for m in 0..qubits {
            let (lower, number) = ladder_ops(levels, m, qubits)?;
            let (decay, dephasing) = self.rates(m);
            ops.push(CollapseOp::new(decay, lower));
            ops.push(CollapseOp::new(dephasing, number));
        }
        Ok(ops)
    }
}

/// Systematic errors: qubit-frequency drift `δ` in units of the peak Rabi frequency and
/// fractional amplitude error `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorConfig {
    pub detuning_drift: f64,
    pub amplitude_error: f64,
}

impl ErrorConfig {
    pub fn new(detuning_drift: f64, amplitude_error: f64) -> Self {
        Self { detuning_drift, amplitude_error }
    }
}

/// Drive with detuning `Δ + δΩ_m` and amplitude `(1 + ε)Ω`.
#[derive(Debug, Clone, Copy)]
pub struct ErroredDrive {
    pub drive: DriveSchedule,
    pub detuning_shift: f64,
    pub amplitude_scale: f64,
}

impl Hamiltonian for ErroredDrive {
    fn dim(&self) -> usize {
        2
    }
    fn at(&self, t: f64) -> Operator {
        self.drive.hamiltonian_with(t, self.detuning_shift, self.amplitude_scale)
    }
}

pub fn inject_error(drive: &DriveSchedule, err: ErrorConfig, peak_rabi: f64) -> ErroredDrive {
    ErroredDrive {
        drive: *drive,
        detuning_shift: err.detuning_drift * peak_rabi,
        amplitude_scale: 1.0 + err.amplitude_error,
    }
}

/// Recipe schedule with the same error applied to every segment.
pub fn errored_schedule(recipe: &GateRecipe, err: ErrorConfig, peak_rabi: f64) -> Schedule {
    let pieces = recipe
        .segments
        .iter()
        .map(|d| Piece { duration: d.duration(), hamiltonian: Arc::new(inject_error(d, err, peak_rabi)) })
        .collect();
    Schedule::new(pieces).expect("recipe segments are non-empty")
}
