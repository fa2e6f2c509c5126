use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Envelope family of the Rabi frequency `Ω(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeShape {
    /// `Ω_m sin(πt/τ)`.
    Sine,
    /// `Ω_m`.
    Constant,
    /// `Ω_m sin²(πt/τ)`.
    SineSquared,
}

impl EnvelopeShape {
    pub const ALL: [EnvelopeShape; 3] = [Self::Sine, Self::Constant, Self::SineSquared];

    /// `(1/τ) ∫₀^τ Ω dt / Ω_m`.
    pub fn mean_factor(self) -> f64 {
        match self {
            Self::Sine => 2.0 / PI,
            Self::Constant => 1.0,
            Self::SineSquared => 0.5,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Self::Sine => "sine",
            Self::Constant => "constant",
            Self::SineSquared => "sine-squared",
        }
    }
}

impl fmt::Display for EnvelopeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Envelope family with its peak Rabi frequency; the duration follows from the area a
/// gate needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSpec {
    pub shape: EnvelopeShape,
    /// Peak Rabi frequency, rad/µs.
    pub peak: f64,
}

impl EnvelopeSpec {
    pub fn new(shape: EnvelopeShape, peak: f64) -> Self {
        Self { shape, peak }
    }

    pub fn sine(peak: f64) -> Self {
        Self::new(EnvelopeShape::Sine, peak)
    }

    pub fn constant(peak: f64) -> Self {
        Self::new(EnvelopeShape::Constant, peak)
    }

    /// Envelope of this family whose integral `∫Ω dt` equals `area`.
    pub fn with_area(&self, area: f64) -> Result<Envelope> {
        if !self.peak.is_finite() || self.peak <= 0.0 || !area.is_finite() || area <= 0.0 {
            return Err(Error::ZeroArea);
        }
        Ok(Envelope { shape: self.shape, peak: self.peak, duration: area / (self.peak * self.shape.mean_factor()) })
    }
}

/// Concrete envelope on `[0, duration]` with closed-form value, derivative and integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub shape: EnvelopeShape,
    pub peak: f64,
    pub duration: f64,
}

impl Envelope {
    pub fn value(&self, t: f64) -> f64 {
        let x = PI * t / self.duration;
        match self.shape {
            EnvelopeShape::Sine => self.peak * x.sin(),
            EnvelopeShape::Constant => self.peak,
            EnvelopeShape::SineSquared => self.peak * x.sin().powi(2),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let w = PI / self.duration;
        let x = w * t;
        match self.shape {
            EnvelopeShape::Sine => self.peak * w * x.cos(),
            EnvelopeShape::Constant => 0.0,
            EnvelopeShape::SineSquared => self.peak * w * (2.0 * x).sin(),
        }
    }

    /// `∫₀ᵗ Ω dt'`.
    pub fn integral(&self, t: f64) -> f64 {
        let tau = self.duration;
        let x = PI * t / tau;
        match self.shape {
            EnvelopeShape::Sine => self.peak * tau / PI * (1.0 - x.cos()),
            EnvelopeShape::Constant => self.peak * t,
            EnvelopeShape::SineSquared => self.peak * (0.5 * t - tau / (4.0 * PI) * (2.0 * x).sin()),
        }
    }

    /// `∫₀^τ Ω dt`.
    pub fn area(&self) -> f64 {
        self.peak * self.duration * self.shape.mean_factor()
    }
}
