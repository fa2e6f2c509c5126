use std::f64::consts::PI;

use super::{ordered_product, Axis, GateRecipe, NamedGate, Scheme};
use crate::error::Result;
use crate::linalg::{c, cis, Operator};
use crate::path::{DriveSchedule, EnvelopeSpec};

/// `U_d(θ, φ) = [[cos θ/2, −i sin θ/2 e^{−iφ}], [−i sin θ/2 e^{iφ}, cos θ/2]]`.
pub fn dynamical_unitary(angle: f64, phase: f64) -> Operator {
    let (s, co) = (0.5 * angle).sin_cos();
    let mut u = Operator::zeros(2, 2);
    u[(0, 0)] = c(co, 0.0);
    u[(1, 1)] = c(co, 0.0);
    u[(0, 1)] = c(0.0, -s) * cis(-phase);
    u[(1, 0)] = c(0.0, -s) * cis(phase);
    u
}

/// Resonant pulses `(θ, φ)` in time order.
fn sequence(label: String, pulses: &[(f64, f64)], envelope: EnvelopeSpec) -> Result<GateRecipe> {
    let segments = pulses
        .iter()
        .map(|&(angle, phase)| Ok(DriveSchedule::resonant(envelope.with_area(angle)?, phase)))
        .collect::<Result<Vec<_>>>()?;
    let factors: Vec<Operator> = pulses.iter().map(|&(a, p)| dynamical_unitary(a, p)).collect();
    Ok(GateRecipe {
        scheme: Scheme::Dynamical,
        label,
        segments,
        target: ordered_product(&factors),
        pulse_area: pulses.iter().map(|p| 0.5 * p.0).sum(),
        rz_prefix: None,
        paths: Vec::new(),
        embedding: None,
    })
}

/// Single resonant pulse `U_d(θ, φ)`.
pub fn dynamical_gate(angle: f64, phase: f64, envelope: EnvelopeSpec) -> Result<GateRecipe> {
    sequence(format!("ud({angle:.6},{phase:.6})"), &[(angle, phase)], envelope)
}

/// `R_x = U_d(θ, 0)`, `R_y = U_d(θ, π/2)`, `R_z = U_d(π/2, π)·U_d(θ, −π/2)·U_d(π/2, 0)`.
pub fn dynamical_rotation(axis: Axis, angle: f64, envelope: EnvelopeSpec) -> Result<GateRecipe> {
    match axis {
        Axis::X => sequence(format!("rx({angle:.6})"), &[(angle, 0.0)], envelope),
        Axis::Y => sequence(format!("ry({angle:.6})"), &[(angle, 0.5 * PI)], envelope),
        Axis::Z => sequence(
            format!("rz({angle:.6})"),
            &[(0.5 * PI, 0.0), (angle, -0.5 * PI), (0.5 * PI, PI)],
            envelope,
        ),
    }
}

/// `H = U_d(π, π)·U_d(π/2, π/2)`; Phase and π/8 through the z composition.
pub fn dynamical_named(gate: NamedGate, envelope: EnvelopeSpec) -> Result<GateRecipe> {
    let mut r = match gate {
        NamedGate::Hadamard => sequence(String::new(), &[(0.5 * PI, 0.5 * PI), (PI, PI)], envelope)?,
        NamedGate::Phase => dynamical_rotation(Axis::Z, 0.5 * PI, envelope)?,
        NamedGate::PiEighth => dynamical_rotation(Axis::Z, 0.25 * PI, envelope)?,
    };
    r.label = gate.id().to_string();
    Ok(r)
}
