use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::drive::DriveSchedule;
use super::engineered::EngineeredPath;
use super::envelope::EnvelopeSpec;
use super::ramp::{Detuning, Ramp};
use super::spec::{PathSegment, PathSpec};
use super::target::GateSpec;
use crate::error::{Error, Result};

const POLE_TOL: f64 = 1e-9;

/// Which side of the azimuth the drive phase sits on: `φ − ξ = +π` or `−π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn offset(self) -> f64 {
        match self {
            Self::Plus => PI,
            Self::Minus => -PI,
        }
    }
}

/// How the dynamical phase is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetuningStrategy {
    /// Constant `Δ`; the dynamical phase vanishes at the final time.
    #[default]
    Constant,
    /// `Δ(t) = −Ω(t) tan χ`; the dynamical phase vanishes at every instant.
    Instantaneous,
}

/// Constant-latitude trajectory: `χ` fixed, `ξ` sweeping `azimuth_sweep` from
/// `azimuth_start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Latitude {
    pub polar: f64,
    pub azimuth_start: f64,
    pub azimuth_sweep: f64,
}

impl Latitude {
    pub fn new(polar: f64, azimuth_start: f64, azimuth_sweep: f64) -> Self {
        Self { polar, azimuth_start, azimuth_sweep }
    }

    /// Drive area `∫Ω dt = ξ₋ sin χ cos χ`.
    pub fn drive_area(&self) -> f64 {
        self.azimuth_sweep * self.polar.sin() * self.polar.cos()
    }

    /// Pulse area `S = ∫Ω dt / 2`.
    pub fn pulse_area(&self) -> f64 {
        0.5 * self.drive_area()
    }

    /// `Γ = ξ₋ cos χ / 2`, the value a dynamical-phase-free latitude path produces.
    pub fn gamma(&self) -> f64 {
        0.5 * self.azimuth_sweep * self.polar.cos()
    }

    /// `γ(τ) = (ξ₋/2)(cos χ − 1)`.
    pub fn overall_phase(&self) -> f64 {
        0.5 * self.azimuth_sweep * (self.polar.cos() - 1.0)
    }

    pub fn gate_spec(&self) -> GateSpec {
        GateSpec::latitude(self.gamma(), self.polar, self.azimuth_start, self.azimuth_sweep)
    }

    fn validate(&self) -> Result<()> {
        let (s, co) = self.polar.sin_cos();
        if !self.polar.is_finite() || !(self.polar > 0.0 && self.polar < PI) || s < POLE_TOL {
            return Err(Error::SingularPath(format!("polar angle {} is at a pole", self.polar)));
        }
        if co.abs() < POLE_TOL {
            return Err(Error::SingularPath("polar angle π/2 cannot cancel the dynamical phase".into()));
        }
        if self.azimuth_sweep == 0.0 || !self.azimuth_sweep.is_finite() {
            return Err(Error::Degenerate("azimuth sweep must be nonzero".into()));
        }
        if self.drive_area() <= 0.0 {
            return Err(Error::InvalidPath(format!(
                "azimuth sweep {} must share the sign of cos χ = {co}",
                self.azimuth_sweep
            )));
        }
        Ok(())
    }
}

/// Inverse-engineers the drive of a latitude path with `φ = ξ ± π`.
///
/// The envelope duration is set so that `∫Ω dt = ξ₋ sin χ cos χ`. With the constant
/// strategy `Δ = −tan χ ∫Ω dt / τ` and `φ(t) = ξ₀ ± π − Δt + cot χ ∫₀ᵗΩ`; with the
/// instantaneous strategy `Δ(t) = −Ω(t) tan χ` and `φ(t) = ξ₀ ± π + ∫₀ᵗΩ / (sin χ cos χ)`.
pub fn drive_from_latitude_path(
    latitude: Latitude,
    envelope: EnvelopeSpec,
    branch: Branch,
    strategy: DetuningStrategy,
) -> Result<EngineeredPath> {
    latitude.validate()?;
    let env = envelope.with_area(latitude.drive_area())?;
    let (s, co) = latitude.polar.sin_cos();
    let tan = s / co;
    let (detuning, azimuth) = match strategy {
        DetuningStrategy::Constant => {
            let delta = -tan * env.area() / env.duration;
            (Detuning::constant(delta), Ramp { start: latitude.azimuth_start, rate: -delta, gain: co / s })
        }
        DetuningStrategy::Instantaneous => (
            Detuning::envelope_locked(-tan),
            Ramp { start: latitude.azimuth_start, rate: 0.0, gain: 1.0 / (s * co) },
        ),
    };
    let segment = PathSegment { envelope: env, polar: Ramp::constant(latitude.polar), azimuth };
    let drive = DriveSchedule::new(env, detuning, azimuth.shifted(branch.offset()));
    EngineeredPath::new(PathSpec::new(vec![segment])?, vec![drive])
}
