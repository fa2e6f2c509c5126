use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, cis, Operator, C64};
use crate::path::DriveSchedule;
use crate::propagate::Hamiltonian;

/// One transmon truncated to `levels` levels with anharmonicity `α` (rad/µs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmonConfig {
    pub levels: usize,
    pub anharmonicity: f64,
    #[serde(default)]
    pub label: String,
}

impl TransmonConfig {
    pub fn new(levels: usize, anharmonicity: f64) -> Result<Self> {
        let cfg = Self { levels, anharmonicity, label: String::new() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels < 2 {
            return Err(Error::InvalidDimension(format!("transmon needs >= 2 levels, got {}", self.levels)));
        }
        if !self.anharmonicity.is_finite() || self.anharmonicity <= 0.0 {
            return Err(Error::Config(format!("anharmonicity {} must be positive", self.anharmonicity)));
        }
        Ok(())
    }

    /// `−k(k−1)α/2`.
    pub fn anharmonic_shift(&self, k: usize) -> f64 {
        -0.5 * (k * k.saturating_sub(1)) as f64 * self.anharmonicity
    }
}

/// Reference frame of a driven transmon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    /// Lab frame with qubit frequency `ω₁` (rad/µs) and drive frequency `ω₁ − Δ(t)`.
    Lab { qubit_frequency: f64 },
    /// Frame rotating with the drive.
    DriveRotating,
}

/// DRAG-corrected complex envelope
/// `Ω_D = Ω − (iΩ̇ + Ω φ̇ + Δ Ω) / (2α)`, derivatives taken in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragPulse {
    pub drive: DriveSchedule,
    pub anharmonicity: f64,
}

impl DragPulse {
    pub fn value(&self, t: f64) -> C64 {
        let d = &self.drive;
        let omega = d.omega(t);
        let correction = c(omega * d.phase_rate(t) + d.detuning(t) * omega, d.omega_rate(t));
        c(omega, 0.0) - correction / (2.0 * self.anharmonicity)
    }
}

pub fn drag_pulse(drive: &DriveSchedule, anharmonicity: f64) -> Result<DragPulse> {
    if anharmonicity == 0.0 || !anharmonicity.is_finite() {
        return Err(Error::Division("DRAG correction needs a nonzero anharmonicity".into()));
    }
    Ok(DragPulse { drive: *drive, anharmonicity })
}

/// Driven transmon; implements [`Hamiltonian`] in the chosen frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmonDrive {
    pub config: TransmonConfig,
    pub drive: DriveSchedule,
    pub drag: bool,
    pub frame: Frame,
}

impl TransmonDrive {
    pub fn new(config: TransmonConfig, drive: DriveSchedule, drag: bool, frame: Frame) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, drive, drag, frame })
    }

    /// Complex drive amplitude, DRAG-corrected when enabled.
    pub fn amplitude(&self, t: f64) -> C64 {
        if self.drag {
            DragPulse { drive: self.drive, anharmonicity: self.config.anharmonicity }.value(t)
        } else {
            c(self.drive.omega(t), 0.0)
        }
    }

    /// Accumulated drive phase `∫₀ᵗ ω_d = ω₁t − ∫₀ᵗΔ` of the lab frame.
    pub fn carrier_phase(&self, qubit_frequency: f64, t: f64) -> f64 {
        qubit_frequency * t - self.drive.detuning.integral(&self.drive.envelope, t)
    }

    /// `exp(i θ N)`: maps lab-frame states to the drive frame at carrier phase `θ`.
    pub fn frame_rotation(&self, carrier_phase: f64) -> Operator {
        let n = self.config.levels;
        Operator::from_diagonal(&nalgebra::DVector::from_fn(n, |k, _| cis(carrier_phase * k as f64)))
    }
}

impl Hamiltonian for TransmonDrive {
    fn dim(&self) -> usize {
        self.config.levels
    }

    fn at(&self, t: f64) -> Operator {
        transmon_hamiltonian(self, t)
    }
}

/// Transmon Hamiltonian at time `t`.
///
/// Lab frame: `Σ_k (kω₁ − k(k−1)α/2)|k⟩⟨k| + Σ_k (Ω_D/2)√k e^{i(θ_d − φ)}|k−1⟩⟨k| + h.c.`.
/// Drive frame: diagonal `kΔ − k(k−1)α/2`, coupling `(Ω_D/2)√k e^{−iφ}|k−1⟩⟨k| + h.c.`.
pub fn transmon_hamiltonian(model: &TransmonDrive, t: f64) -> Operator {
    let cfg = &model.config;
    let (linear, carrier) = match model.frame {
        Frame::Lab { qubit_frequency } => (qubit_frequency, model.carrier_phase(qubit_frequency, t)),
        Frame::DriveRotating => (model.drive.detuning(t), 0.0),
    };
    let half = model.amplitude(t) * 0.5 * cis(carrier - model.drive.phase(t));
    let mut h = Operator::zeros(cfg.levels, cfg.levels);
    for k in 0..cfg.levels {
        h[(k, k)] = c(k as f64 * linear + cfg.anharmonic_shift(k), 0.0);
        if k > 0 {
            let v = half * (k as f64).sqrt();
            h[(k - 1, k)] = v;
            h[(k, k - 1)] = v.conj();
        }
    }
    h
}
