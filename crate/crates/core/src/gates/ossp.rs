use std::f64::consts::PI;

use super::{GateRecipe, NamedGate, Scheme};
use crate::error::{Error, Result};
use crate::path::{
    target_unitary, DriveSchedule, EngineeredPath, EnvelopeSpec, GateSpec, PathSegment, PathSpec, Ramp,
};

/// Orange-slice gate with geometric phase `geometric_phase` about the axis `(χ₀, ξ₀)`.
///
/// Three resonant segments: up the `ξ₀` meridian to the north pole (area `χ₀`), down the
/// `ξ₁ = ξ₀ + γ_g` meridian to the south pole (area `π`), back up the `ξ₀` meridian
/// (area `π − χ₀`). Zero-area segments are dropped. The phase `φ` jumps between segments.
pub fn ossp_gate(geometric_phase: f64, polar: f64, azimuth: f64, envelope: EnvelopeSpec) -> Result<GateRecipe> {
    if !(0.0..=PI).contains(&polar) {
        return Err(Error::InvalidPath(format!("polar angle {polar} outside [0, π]")));
    }
    let second = azimuth + geometric_phase;
    // (drive area, polar ramp start, polar gain, azimuth, drive phase)
    let legs = [
        (polar, polar, -1.0, azimuth, azimuth - 0.5 * PI),
        (PI, 0.0, 1.0, second, second + 0.5 * PI),
        (PI - polar, PI, -1.0, azimuth, azimuth - 0.5 * PI),
    ];
    let mut segments = Vec::new();
    let mut drives = Vec::new();
    for (area, polar_start, gain, xi, phi) in legs {
        if area <= 1e-12 {
            continue;
        }
        let env = envelope.with_area(area)?;
        segments.push(PathSegment {
            envelope: env,
            polar: Ramp { start: polar_start, rate: 0.0, gain },
            azimuth: Ramp::constant(xi),
        });
        drives.push(DriveSchedule::resonant(env, phi));
    }
    let engineered = EngineeredPath::new(PathSpec::new(segments)?, drives.clone())?;
    let spec = GateSpec {
        gamma: geometric_phase,
        polar_start: polar,
        polar_end: polar,
        azimuth_start: azimuth,
        azimuth_end: azimuth,
    };
    Ok(GateRecipe {
        scheme: Scheme::Ossp,
        label: format!("ossp({geometric_phase:.6},{polar:.6},{azimuth:.6})"),
        segments: drives,
        target: target_unitary(&spec),
        pulse_area: PI,
        rz_prefix: None,
        paths: vec![engineered],
        embedding: None,
    })
}

/// Hadamard (`γ_g = π/2`, `χ₀ = π/4`, `ξ₀ = 0`, target `iH`), Phase (`γ_g = −π/4`) and
/// π/8 (`γ_g = −π/8`) about the z axis.
pub fn ossp_named(gate: NamedGate, envelope: EnvelopeSpec) -> Result<GateRecipe> {
    let mut r = match gate {
        NamedGate::Hadamard => ossp_gate(0.5 * PI, 0.25 * PI, 0.0, envelope)?,
        NamedGate::Phase => ossp_gate(-0.25 * PI, 0.0, 0.0, envelope)?,
        NamedGate::PiEighth => ossp_gate(-0.125 * PI, 0.0, 0.0, envelope)?,
    };
    r.label = gate.id().to_string();
    Ok(r)
}
