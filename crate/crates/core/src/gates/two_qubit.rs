use std::f64::consts::{PI, SQRT_2};

use super::{embed_block, GateRecipe, Scheme};
use crate::error::Result;
use crate::path::{drive_from_latitude_path, target_unitary, Branch, DetuningStrategy, EnvelopeSpec, Latitude};

/// Two-qubit indices `(|10⟩, |01⟩)` of the single-excitation block, with basis index
/// `2·q₁ + q₂`.
pub const SQRT_ISWAP_BLOCK: [usize; 2] = [2, 1];

/// Latitude of the √iSWAP-like gate: `χ = π/4`, `ξ₀ = −π/2`, `ξ₋ = √2π`, so `Γ = π/2`.
/// The block is `e^{−iξ′σ_z/2}·(1/√2)[[1, i], [i, 1]]` up to global phase, with
/// `ξ′ = (√2 − 1)π`, in the order of [`SQRT_ISWAP_BLOCK`].
pub fn sqrt_iswap_block() -> Latitude {
    Latitude::new(0.25 * PI, -0.5 * PI, SQRT_2 * PI)
}

/// √iSWAP-like gate driven through the effective two-level coupling. `envelope.peak` is
/// the effective coupling `g′` (use a constant envelope for the parametric scheme).
pub fn sqrt_iswap_spec(envelope: EnvelopeSpec) -> Result<GateRecipe> {
    let latitude = sqrt_iswap_block();
    let engineered = drive_from_latitude_path(latitude, envelope, Branch::Plus, DetuningStrategy::Constant)?;
    let block = target_unitary(&latitude.gate_spec());
    Ok(GateRecipe {
        scheme: Scheme::Nsgp,
        label: "sqrt-iswap".into(),
        segments: engineered.drives().to_vec(),
        target: embed_block(&block, SQRT_ISWAP_BLOCK, 4),
        pulse_area: latitude.pulse_area(),
        rz_prefix: Some((SQRT_2 - 1.0) * PI),
        paths: vec![engineered],
        embedding: Some(SQRT_ISWAP_BLOCK),
    })
}
