use std::sync::Arc;

use super::drive::DriveSchedule;
use super::spec::{dressed_pair, PathSpec};
use super::target::GateSpec;
use crate::error::{Error, Result};
use crate::propagate::{Piece, Schedule};
use crate::quadrature::{simpson, DEFAULT_NODES};

/// Overlaps below this make the endpoint phase undefined.
const OVERLAP_FLOOR: f64 = 1e-9;
/// `|cos χ|` below this makes the closed-form dynamical phase singular.
const EQUATOR_TOL: f64 = 1e-9;

/// A path together with the drive that realizes it, segment by segment.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineeredPath {
    path: PathSpec,
    drives: Vec<DriveSchedule>,
}

/// Phase bookkeeping of an engineered path (rad, unwrapped except where stated).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRecord {
    /// `γ(τ)`: dynamical plus the path (Berry-like) integral.
    pub overall: f64,
    pub dynamical: f64,
    /// Pancharatnam phase `γ_t − γ_d`.
    pub geometric: f64,
    /// `γ(τ) + arg⟨ψ₁(0)|ψ₁(τ)⟩`.
    pub total_relative: f64,
}

impl EngineeredPath {
    pub fn new(path: PathSpec, drives: Vec<DriveSchedule>) -> Result<Self> {
        if drives.len() != path.segments().len() {
            return Err(Error::InvalidPath(format!(
                "{} drive segments for {} path segments",
                drives.len(),
                path.segments().len()
            )));
        }
        for (i, (seg, drive)) in path.segments().iter().zip(&drives).enumerate() {
            let (a, b) = (seg.duration(), drive.duration());
            if (a - b).abs() > 1e-12 * a.max(b) {
                return Err(Error::InvalidPath(format!("segment {i}: path lasts {a}, drive lasts {b}")));
            }
        }
        Ok(Self { path, drives })
    }

    pub fn path(&self) -> &PathSpec {
        &self.path
    }

    pub fn drives(&self) -> &[DriveSchedule] {
        &self.drives
    }

    pub fn duration(&self) -> f64 {
        self.path.duration()
    }

    pub fn schedule(&self) -> Schedule {
        let pieces = self
            .drives
            .iter()
            .map(|d| Piece { duration: d.duration(), hamiltonian: Arc::new(*d) })
            .collect();
        Schedule::new(pieces).expect("validated drive segments")
    }

    /// Integrates `f(segment, local time)` over every segment.
    fn integrate<F: Fn(usize, f64) -> f64>(&self, f: F) -> f64 {
        self.drives
            .iter()
            .enumerate()
            .map(|(i, d)| simpson(|t| f(i, t), 0.0, d.duration(), DEFAULT_NODES))
            .sum()
    }

    /// `γ_d = −∫⟨ψ₁|H|ψ₁⟩ dt = −½∫(Ω sin χ cos(φ−ξ) − Δ cos χ) dt`.
    pub fn dynamical_phase(&self) -> f64 {
        let segs = self.path.segments();
        -0.5 * self.integrate(|i, t| {
            let (seg, d) = (&segs[i], &self.drives[i]);
            let chi = seg.polar_at(t);
            let rel = d.phase(t) - seg.azimuth_at(t);
            d.omega(t) * chi.sin() * rel.cos() - d.detuning(t) * chi.cos()
        })
    }

    /// `γ_d = ½∫(Δ + ξ̇ sin²χ)/cos χ dt`, valid only while the path stays off the equator.
    pub fn dynamical_phase_closed_form(&self) -> Result<f64> {
        let segs = self.path.segments();
        for (i, seg) in segs.iter().enumerate() {
            let mut sign = 0.0;
            for k in 0..DEFAULT_NODES {
                let t = seg.duration() * k as f64 / (DEFAULT_NODES - 1) as f64;
                let cos = seg.polar_at(t).cos();
                if cos.abs() < EQUATOR_TOL || (sign != 0.0 && cos.signum() != sign) {
                    return Err(Error::SingularPath(format!("segment {i} reaches the equator")));
                }
                sign = cos.signum();
            }
        }
        Ok(0.5 * self.integrate(|i, t| {
            let seg = &segs[i];
            let chi = seg.polar_at(t);
            (self.drives[i].detuning(t) + seg.azimuth_rate(t) * chi.sin().powi(2)) / chi.cos()
        }))
    }

    /// `−½∫(1 − cos χ) ξ̇ dt` plus the same weight on azimuth jumps at poles.
    pub fn path_phase(&self) -> f64 {
        let segs = self.path.segments();
        let smooth = -0.5 * self.integrate(|i, t| (1.0 - segs[i].polar_at(t).cos()) * segs[i].azimuth_rate(t));
        let jumps: f64 =
            self.path.pole_jumps().iter().map(|j| -0.5 * (1.0 - j.polar.cos()) * j.azimuth_change).sum();
        smooth + jumps
    }

    /// `γ(τ)`.
    pub fn overall_phase(&self) -> f64 {
        self.dynamical_phase() + self.path_phase()
    }

    /// `⟨ψ₁(0)|ψ₁(τ)⟩`.
    pub fn endpoint_overlap(&self) -> nalgebra::Complex<f64> {
        let (a0, b0) = self.path.start_angles();
        let (a1, b1) = self.path.end_angles();
        dressed_pair(a0, b0).0.inner(&dressed_pair(a1, b1).0)
    }

    /// `γ_t = γ(τ) + arg⟨ψ₁(0)|ψ₁(τ)⟩`.
    pub fn total_relative_phase(&self) -> Result<f64> {
        let overlap = self.endpoint_overlap();
        if overlap.norm() < OVERLAP_FLOOR {
            return Err(Error::UndefinedPhase { overlap: overlap.norm() });
        }
        Ok(self.overall_phase() + overlap.arg())
    }

    /// `γ_g = γ_t − γ_d`.
    pub fn pancharatnam_phase(&self) -> Result<f64> {
        Ok(self.total_relative_phase()? - self.dynamical_phase())
    }

    pub fn phases(&self) -> Result<PhaseRecord> {
        let dynamical = self.dynamical_phase();
        let overall = dynamical + self.path_phase();
        let overlap = self.endpoint_overlap();
        if overlap.norm() < OVERLAP_FLOOR {
            return Err(Error::UndefinedPhase { overlap: overlap.norm() });
        }
        let total_relative = overall + overlap.arg();
        Ok(PhaseRecord { overall, dynamical, geometric: total_relative - dynamical, total_relative })
    }

    /// Boundary data with `Γ = γ(τ) + ξ₋/2`.
    pub fn gate_spec(&self) -> GateSpec {
        let (polar_start, azimuth_start) = self.path.start_angles();
        let (polar_end, azimuth_end) = self.path.end_angles();
        GateSpec {
            gamma: self.overall_phase() + 0.5 * (azimuth_end - azimuth_start),
            polar_start,
            polar_end,
            azimuth_start,
            azimuth_end,
        }
    }
}

/// `Δ = −(1/τ)∫ξ̇ sin²χ dt`: the constant detuning that nulls the dynamical phase at τ.
pub fn constant_detuning(path: &PathSpec) -> f64 {
    let integral: f64 = path
        .segments()
        .iter()
        .map(|s| simpson(|t| s.azimuth_rate(t) * s.polar_at(t).sin().powi(2), 0.0, s.duration(), DEFAULT_NODES))
        .sum();
    -integral / path.duration()
}

/// `Δ(t) = −ξ̇ sin²χ`: the detuning that nulls the dynamical phase at every instant.
pub fn instantaneous_detuning(path: &PathSpec, t: f64) -> Result<f64> {
    let (chi, _) = path.angles(t)?;
    let (_, xi_rate) = path.rates(t)?;
    Ok(-xi_rate * chi.sin().powi(2))
}
