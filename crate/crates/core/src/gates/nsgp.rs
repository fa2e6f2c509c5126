use std::f64::consts::{PI, SQRT_2, TAU};

use super::{Axis, GateRecipe, NamedGate, Scheme};
use crate::error::{Error, Result};
use crate::path::{drive_from_latitude_path, target_unitary, Branch, DetuningStrategy, EnvelopeSpec, Latitude};

fn recipe(label: String, latitude: Latitude, envelope: EnvelopeSpec, strategy: DetuningStrategy, rz_prefix: Option<f64>) -> Result<GateRecipe> {
    let engineered = drive_from_latitude_path(latitude, envelope, Branch::Plus, strategy)?;
    Ok(GateRecipe {
        scheme: Scheme::Nsgp,
        label,
        segments: engineered.drives().to_vec(),
        target: target_unitary(&latitude.gate_spec()),
        pulse_area: latitude.pulse_area(),
        rz_prefix,
        paths: vec![engineered],
        embedding: None,
    })
}

/// Latitude settings for a rotation by `angle` about `axis`.
///
/// x and y use `Γ = π/2` with `χ = θ/2` and `ξ₀ = π/2` (x) or `π` (y); the target is
/// `R_z(ξ₋ − π)·R_axis(θ)`. z uses `Γ = π`, `ξ₋ = θ + 2π`, `cos χ = 2π/ξ₋`.
fn rotation_latitude(axis: Axis, angle: f64) -> Result<(Latitude, Option<f64>)> {
    if !(angle > 0.0 && angle < TAU) {
        return Err(Error::SingularPath(format!("rotation angle {angle} outside (0, 2π)")));
    }
    match axis {
        Axis::X | Axis::Y => {
            let polar = 0.5 * angle;
            if (angle - PI).abs() < 1e-9 {
                return Err(Error::SingularPath("a π rotation about x or y needs χ = π/2".into()));
            }
            let start = if axis == Axis::X { 0.5 * PI } else { PI };
            let sweep = PI / polar.cos();
            Ok((Latitude::new(polar, start, sweep), Some(sweep - PI)))
        }
        Axis::Z => {
            let sweep = angle + TAU;
            Ok((Latitude::new((TAU / sweep).acos(), 0.0, sweep), None))
        }
    }
}

/// Single-segment latitude rotation with constant detuning.
pub fn nsgp_rotation(axis: Axis, angle: f64, envelope: EnvelopeSpec) -> Result<GateRecipe> {
    nsgp_rotation_with(axis, angle, envelope, DetuningStrategy::Constant)
}

pub fn nsgp_rotation_with(
    axis: Axis,
    angle: f64,
    envelope: EnvelopeSpec,
    strategy: DetuningStrategy,
) -> Result<GateRecipe> {
    let (latitude, prefix) = rotation_latitude(axis, angle)?;
    let name = match axis {
        Axis::X => "rx",
        Axis::Y => "ry",
        Axis::Z => "rz",
    };
    recipe(format!("{name}({angle:.6})"), latitude, envelope, strategy, prefix)
}

/// Hadamard-like (`χ = π/4`, `ξ₀ = 0`, `ξ₋ = √2π`), Phase and π/8 gates.
pub fn nsgp_named(gate: NamedGate, envelope: EnvelopeSpec) -> Result<GateRecipe> {
    nsgp_named_with(gate, envelope, DetuningStrategy::Constant)
}

/// Named latitude gate with the chosen detuning strategy.
pub fn nsgp_named_with(gate: NamedGate, envelope: EnvelopeSpec, strategy: DetuningStrategy) -> Result<GateRecipe> {
    let mut r = match gate {
        NamedGate::Hadamard => {
            let lat = Latitude::new(0.25 * PI, 0.0, SQRT_2 * PI);
            recipe(String::new(), lat, envelope, strategy, Some(SQRT_2 * PI))?
        }
        NamedGate::Phase => nsgp_rotation_with(Axis::Z, 0.5 * PI, envelope, strategy)?,
        NamedGate::PiEighth => nsgp_rotation_with(Axis::Z, 0.25 * PI, envelope, strategy)?,
    };
    r.label = gate.id().to_string();
    Ok(r)
}
