use serde::{Deserialize, Serialize};

use super::envelope::Envelope;
use super::ramp::{Detuning, Ramp};
use crate::linalg::{c, cis, Operator};
use crate::propagate::Hamiltonian;

/// Control fields of one drive segment: `Ω(t)`, `Δ(t)` and `φ(t)` over `[0, τ]`.
///
/// The two-level Hamiltonian is `½[[−Δ, Ωe^{−iφ}], [Ωe^{iφ}, Δ]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSchedule {
    pub envelope: Envelope,
    pub detuning: Detuning,
    pub phase: Ramp,
}

impl DriveSchedule {
    pub fn new(envelope: Envelope, detuning: Detuning, phase: Ramp) -> Self {
        Self { envelope, detuning, phase }
    }

    /// Resonant segment with constant phase.
    pub fn resonant(envelope: Envelope, phase: f64) -> Self {
        Self::new(envelope, Detuning::constant(0.0), Ramp::constant(phase))
    }

    pub fn duration(&self) -> f64 {
        self.envelope.duration
    }

    pub fn shape_id(&self) -> &'static str {
        self.envelope.shape.id()
    }

    pub fn omega(&self, t: f64) -> f64 {
        self.envelope.value(t)
    }

    pub fn omega_rate(&self, t: f64) -> f64 {
        self.envelope.derivative(t)
    }

    pub fn detuning(&self, t: f64) -> f64 {
        self.detuning.value(&self.envelope, t)
    }

    pub fn phase(&self, t: f64) -> f64 {
        self.phase.value(&self.envelope, t)
    }

    pub fn phase_rate(&self, t: f64) -> f64 {
        self.phase.derivative(&self.envelope, t)
    }

    /// Two-level Hamiltonian with detuning shifted by `detuning_shift` and drive amplitude
    /// scaled by `amplitude_scale`.
    pub fn hamiltonian_with(&self, t: f64, detuning_shift: f64, amplitude_scale: f64) -> Operator {
        let delta = self.detuning(t) + detuning_shift;
        let coupling = cis(self.phase(t)) * (0.5 * amplitude_scale * self.omega(t));
        let mut h = Operator::zeros(2, 2);
        h[(0, 0)] = c(-0.5 * delta, 0.0);
        h[(1, 1)] = c(0.5 * delta, 0.0);
        h[(1, 0)] = coupling;
        h[(0, 1)] = coupling.conj();
        h
    }
}

impl Hamiltonian for DriveSchedule {
    fn dim(&self) -> usize {
        2
    }
    fn at(&self, t: f64) -> Operator {
        self.hamiltonian_with(t, 0.0, 1.0)
    }
}
