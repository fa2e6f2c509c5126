use serde::{Deserialize, Serialize};

use crate::linalg::{c, cis, Operator};

/// Boundary data fixing a two-level gate: the phase parameter Γ and the start/end
/// Bloch angles of `ψ₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub gamma: f64,
    pub polar_start: f64,
    pub polar_end: f64,
    pub azimuth_start: f64,
    pub azimuth_end: f64,
}

impl GateSpec {
    /// Latitude path at polar angle `polar` sweeping `azimuth_sweep` from `azimuth_start`.
    pub fn latitude(gamma: f64, polar: f64, azimuth_start: f64, azimuth_sweep: f64) -> Self {
        Self {
            gamma,
            polar_start: polar,
            polar_end: polar,
            azimuth_start,
            azimuth_end: azimuth_start + azimuth_sweep,
        }
    }

    pub fn polar_difference(&self) -> f64 {
        self.polar_end - self.polar_start
    }
    pub fn polar_sum(&self) -> f64 {
        self.polar_end + self.polar_start
    }
    pub fn azimuth_difference(&self) -> f64 {
        self.azimuth_end - self.azimuth_start
    }
    pub fn azimuth_sum(&self) -> f64 {
        self.azimuth_end + self.azimuth_start
    }
}

/// `[[u₁, u₂], [−u₂*, u₁*]]` with
/// `u₁ = (cos Γ cos(χ₋/2) + i sin Γ cos(χ₊/2)) e^{−iξ₋/2}` and
/// `u₂ = (−cos Γ sin(χ₋/2) + i sin Γ sin(χ₊/2)) e^{−iξ₊/2}`.
pub fn target_unitary(spec: &GateSpec) -> Operator {
    let (sg, cg) = spec.gamma.sin_cos();
    let (sm, cm) = (0.5 * spec.polar_difference()).sin_cos();
    let (sp, cp) = (0.5 * spec.polar_sum()).sin_cos();
    let u1 = c(cg * cm, sg * cp) * cis(-0.5 * spec.azimuth_difference());
    let u2 = c(-cg * sm, sg * sp) * cis(-0.5 * spec.azimuth_sum());
    let mut u = Operator::zeros(2, 2);
    u[(0, 0)] = u1;
    u[(0, 1)] = u2;
    u[(1, 0)] = -u2.conj();
    u[(1, 1)] = u1.conj();
    u
}
