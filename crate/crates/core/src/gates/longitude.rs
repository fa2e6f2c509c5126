use std::f64::consts::PI;

use super::{ordered_product, Axis, GateRecipe, NamedGate, Scheme};
use crate::error::{Error, Result};
use crate::linalg::{c, cis, Operator};
use crate::path::{
    target_unitary, DriveSchedule, EngineeredPath, EnvelopeSpec, GateSpec, PathSegment, PathSpec, Ramp,
};

/// `U_n(χ₀, ξ₀) = [[cos χ₀, sin χ₀ e^{−iξ₀}], [−sin χ₀ e^{iξ₀}, cos χ₀]]`.
pub fn longitude_unitary(polar: f64, azimuth: f64) -> Operator {
    let (s, co) = polar.sin_cos();
    let mut u = Operator::zeros(2, 2);
    u[(0, 0)] = c(co, 0.0);
    u[(1, 1)] = c(co, 0.0);
    u[(0, 1)] = cis(-azimuth) * s;
    u[(1, 0)] = -cis(azimuth) * s;
    u
}

/// Path and drive of one `U_n(χ₀, ξ₀)`: down the `ξ₀` meridian to the south pole, then
/// back up the `ξ₀ + π` meridian. Both legs use `φ = ξ₀ + π/2`, `Δ = 0` and drive area
/// `π − χ₀`. The realized unitary is `−U_n`, i.e. `Γ = −π/2`, `ξ₋ = π`.
fn longitude_path(polar: f64, azimuth: f64, envelope: EnvelopeSpec) -> Result<EngineeredPath> {
    if !(0.0..PI).contains(&polar) {
        return Err(Error::InvalidPath(format!("polar angle {polar} outside [0, π)")));
    }
    let env = envelope.with_area(PI - polar)?;
    let phase = azimuth + 0.5 * PI;
    let segments = vec![
        PathSegment { envelope: env, polar: Ramp { start: polar, rate: 0.0, gain: 1.0 }, azimuth: Ramp::constant(azimuth) },
        PathSegment { envelope: env, polar: Ramp { start: PI, rate: 0.0, gain: -1.0 }, azimuth: Ramp::constant(azimuth + PI) },
    ];
    let drives = vec![DriveSchedule::resonant(env, phase); 2];
    EngineeredPath::new(PathSpec::new(segments)?, drives)
}

/// Elementary gates `U_n(χ₀, ξ₀)` in time order.
fn sequence(label: String, factors: &[(f64, f64)], envelope: EnvelopeSpec) -> Result<GateRecipe> {
    let paths = factors
        .iter()
        .map(|&(p, a)| longitude_path(p, a, envelope))
        .collect::<Result<Vec<_>>>()?;
    let targets: Vec<Operator> = factors
        .iter()
        .map(|&(p, a)| {
            target_unitary(&GateSpec {
                gamma: -0.5 * PI,
                polar_start: p,
                polar_end: p,
                azimuth_start: a,
                azimuth_end: a + PI,
            })
        })
        .collect();
    Ok(GateRecipe {
        scheme: Scheme::Longitude,
        label,
        segments: paths.iter().flat_map(|p| p.drives().iter().copied()).collect(),
        target: ordered_product(&targets),
        pulse_area: factors.iter().map(|&(p, _)| PI - p).sum(),
        rz_prefix: None,
        paths,
        embedding: None,
    })
}

/// Single noncyclic longitude gate `U_n(χ₀, ξ₀)` (realized as `−U_n`).
pub fn longitude_gate(polar: f64, azimuth: f64, envelope: EnvelopeSpec) -> Result<GateRecipe> {
    sequence(format!("un({polar:.6},{azimuth:.6})"), &[(polar, azimuth)], envelope)
}

/// `R_x = U_n(θ/2, π/2)`, `R_y = U_n(θ/2, π)`,
/// `R_z = U_n(π/4, −π/2)·U_n(θ/2, 0)·U_n(π/4, π/2)`.
pub fn longitude_rotation(axis: Axis, angle: f64, envelope: EnvelopeSpec) -> Result<GateRecipe> {
    let half = 0.5 * angle;
    let q = 0.25 * PI;
    match axis {
        Axis::X => sequence(format!("rx({angle:.6})"), &[(half, 0.5 * PI)], envelope),
        Axis::Y => sequence(format!("ry({angle:.6})"), &[(half, PI)], envelope),
        Axis::Z => sequence(format!("rz({angle:.6})"), &[(q, 0.5 * PI), (half, 0.0), (q, -0.5 * PI)], envelope),
    }
}

/// `H = U_n(π/2, π/2)·U_n(π/4, π)`; Phase and π/8 through the z composition.
pub fn longitude_named(gate: NamedGate, envelope: EnvelopeSpec) -> Result<GateRecipe> {
    let mut r = match gate {
        NamedGate::Hadamard => sequence(String::new(), &[(0.25 * PI, PI), (0.5 * PI, 0.5 * PI)], envelope)?,
        NamedGate::Phase => longitude_rotation(Axis::Z, 0.5 * PI, envelope)?,
        NamedGate::PiEighth => longitude_rotation(Axis::Z, 0.25 * PI, envelope)?,
    };
    r.label = gate.id().to_string();
    Ok(r)
}
