use serde::{Deserialize, Serialize};

use super::envelope::Envelope;

/// Angle that moves with time and with the accumulated drive area:
/// `value(t) = start + rate·t + gain·∫₀ᵗΩ`.
///
/// Covers constant angles, linear phase ramps and the area-locked profiles of resonant
/// segments and latitude paths.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Ramp {
    pub start: f64,
    pub rate: f64,
    pub gain: f64,
}

impl Ramp {
    pub fn constant(value: f64) -> Self {
        Self { start: value, rate: 0.0, gain: 0.0 }
    }

    pub fn value(&self, env: &Envelope, t: f64) -> f64 {
        self.start + self.rate * t + self.gain * env.integral(t)
    }

    pub fn derivative(&self, env: &Envelope, t: f64) -> f64 {
        self.rate + self.gain * env.value(t)
    }

    pub fn second_derivative(&self, env: &Envelope, t: f64) -> f64 {
        self.gain * env.derivative(t)
    }

    pub fn shifted(mut self, by: f64) -> Self {
        self.start += by;
        self
    }
}

/// Detuning `Δ(t) = offset + gain·Ω(t)`; constant when `gain = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Detuning {
    pub offset: f64,
    pub gain: f64,
}

impl Detuning {
    pub fn constant(value: f64) -> Self {
        Self { offset: value, gain: 0.0 }
    }

    pub fn envelope_locked(gain: f64) -> Self {
        Self { offset: 0.0, gain }
    }

    pub fn is_constant(&self) -> bool {
        self.gain == 0.0
    }

    pub fn value(&self, env: &Envelope, t: f64) -> f64 {
        self.offset + self.gain * env.value(t)
    }

    /// `∫₀ᵗ Δ dt'`.
    pub fn integral(&self, env: &Envelope, t: f64) -> f64 {
        self.offset * t + self.gain * env.integral(t)
    }
}
