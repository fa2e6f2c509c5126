use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::envelope::Envelope;
use super::ramp::Ramp;
use crate::error::{Error, Result};
use crate::linalg::{c, cis, Ket, Operator, Vector};

/// Boundary tolerance for continuity and pole checks.
const EDGE_TOL: f64 = 1e-9;
/// Samples per segment when checking `χ ∈ [0, π]`.
const RANGE_SAMPLES: usize = 257;

/// One smooth piece of a Bloch-sphere trajectory. The envelope is the segment's time
/// base: angle profiles may lock to its accumulated area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSegment {
    pub envelope: Envelope,
    /// Polar angle `χ(t)`.
    pub polar: Ramp,
    /// Azimuth `ξ(t)`.
    pub azimuth: Ramp,
}

impl PathSegment {
    pub fn duration(&self) -> f64 {
        self.envelope.duration
    }
    pub fn polar_at(&self, t: f64) -> f64 {
        self.polar.value(&self.envelope, t)
    }
    pub fn azimuth_at(&self, t: f64) -> f64 {
        self.azimuth.value(&self.envelope, t)
    }
    pub fn polar_rate(&self, t: f64) -> f64 {
        self.polar.derivative(&self.envelope, t)
    }
    pub fn azimuth_rate(&self, t: f64) -> f64 {
        self.azimuth.derivative(&self.envelope, t)
    }
}

/// Azimuth jump between consecutive segments, allowed only at a pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleJump {
    pub time: f64,
    pub polar: f64,
    pub azimuth_change: f64,
}

/// Piecewise trajectory `(χ(t), ξ(t))` of the dressed state `ψ₁`, with invariant scale μ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    segments: Vec<PathSegment>,
    mu: f64,
}

impl PathSpec {
    pub fn new(segments: Vec<PathSegment>) -> Result<Self> {
        Self::with_scale(segments, 1.0)
    }

    pub fn with_scale(segments: Vec<PathSegment>, mu: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidPath("path has no segments".into()));
        }
        if !mu.is_finite() || mu == 0.0 {
            return Err(Error::InvalidPath(format!("invariant scale {mu} must be finite and nonzero")));
        }
        for (i, seg) in segments.iter().enumerate() {
            if !seg.duration().is_finite() || seg.duration() <= 0.0 {
                return Err(Error::InvalidPath(format!("segment {i} has duration {}", seg.duration())));
            }
            for k in 0..RANGE_SAMPLES {
                let t = seg.duration() * k as f64 / (RANGE_SAMPLES - 1) as f64;
                let chi = seg.polar_at(t);
                if !(-EDGE_TOL..=PI + EDGE_TOL).contains(&chi) {
                    return Err(Error::InvalidPath(format!("segment {i}: polar angle {chi} outside [0, π]")));
                }
            }
        }
        for (i, pair) in segments.windows(2).enumerate() {
            let chi_end = pair[0].polar_at(pair[0].duration());
            let chi_next = pair[1].polar_at(0.0);
            if (chi_end - chi_next).abs() > EDGE_TOL {
                return Err(Error::InvalidPath(format!("polar angle jumps at boundary {i}")));
            }
            let jump = pair[1].azimuth_at(0.0) - pair[0].azimuth_at(pair[0].duration());
            if jump.abs() > EDGE_TOL && chi_end.sin().abs() > EDGE_TOL {
                return Err(Error::InvalidPath(format!("azimuth jumps away from a pole at boundary {i}")));
            }
        }
        Ok(Self { segments, mu })
    }

    pub fn segments(&self) -> &[PathSegment] {
        &self.segments
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(PathSegment::duration).sum()
    }

    /// Segment index and local time for global time `t`; boundaries belong to the
    /// earlier segment.
    pub fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let total = self.duration();
        if !(t >= -EDGE_TOL * total && t <= total * (1.0 + EDGE_TOL)) {
            return Err(Error::Domain { t, duration: total });
        }
        let mut start = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            if t <= start + seg.duration() || i + 1 == self.segments.len() {
                return Ok((i, (t - start).clamp(0.0, seg.duration())));
            }
            start += seg.duration();
        }
        unreachable!("non-empty path")
    }

    /// `(χ(t), ξ(t))`.
    pub fn angles(&self, t: f64) -> Result<(f64, f64)> {
        let (i, local) = self.locate(t)?;
        let seg = &self.segments[i];
        Ok((seg.polar_at(local), seg.azimuth_at(local)))
    }

    /// `(χ̇(t), ξ̇(t))`.
    pub fn rates(&self, t: f64) -> Result<(f64, f64)> {
        let (i, local) = self.locate(t)?;
        let seg = &self.segments[i];
        Ok((seg.polar_rate(local), seg.azimuth_rate(local)))
    }

    pub fn start_angles(&self) -> (f64, f64) {
        let s = &self.segments[0];
        (s.polar_at(0.0), s.azimuth_at(0.0))
    }

    pub fn end_angles(&self) -> (f64, f64) {
        let s = self.segments.last().expect("non-empty path");
        (s.polar_at(s.duration()), s.azimuth_at(s.duration()))
    }

    pub fn pole_jumps(&self) -> Vec<PoleJump> {
        let mut out = Vec::new();
        let mut time = 0.0;
        for pair in self.segments.windows(2) {
            time += pair[0].duration();
            let change = pair[1].azimuth_at(0.0) - pair[0].azimuth_at(pair[0].duration());
            if change != 0.0 {
                out.push(PoleJump { time, polar: pair[0].polar_at(pair[0].duration()), azimuth_change: change });
            }
        }
        out
    }
}

/// `ψ₁ = (cos χ/2, sin χ/2·e^{iξ})`, `ψ₂ = (sin χ/2·e^{−iξ}, −cos χ/2)`.
pub fn dressed_pair(polar: f64, azimuth: f64) -> (Ket, Ket) {
    let (s, co) = (0.5 * polar).sin_cos();
    let first = Vector::from_column_slice(&[c(co, 0.0), cis(azimuth) * s]);
    let second = Vector::from_column_slice(&[cis(-azimuth) * s, c(-co, 0.0)]);
    (Ket::normalized(first).expect("unit"), Ket::normalized(second).expect("unit"))
}

/// Dressed states of the path at time `t`.
pub fn dressed_states(path: &PathSpec, t: f64) -> Result<(Ket, Ket)> {
    let (polar, azimuth) = path.angles(t)?;
    Ok(dressed_pair(polar, azimuth))
}

/// Invariant `(μ/2)[[cos χ, sin χ e^{−iξ}], [sin χ e^{iξ}, −cos χ]]`.
pub fn build_invariant(path: &PathSpec, t: f64) -> Result<Operator> {
    let (polar, azimuth) = path.angles(t)?;
    let half = 0.5 * path.mu();
    let mut m = Operator::zeros(2, 2);
    m[(0, 0)] = c(half * polar.cos(), 0.0);
    m[(1, 1)] = c(-half * polar.cos(), 0.0);
    m[(1, 0)] = cis(azimuth) * (half * polar.sin());
    m[(0, 1)] = m[(1, 0)].conj();
    Ok(m)
}
