//! Pulse synthesis and simulation for noncyclic nonadiabatic geometric gates designed
//! through Lewis–Riesenfeld invariants.
//!
//! Units: time in µs, frequencies as angular frequencies in rad/µs, `ħ = 1`.

pub mod error;
pub mod gates;
pub mod linalg;
pub mod open_system;
pub mod path;
pub mod propagate;
pub mod quadrature;
pub mod transmon;

pub use error::{Error, Result};

/// Converts a frequency in MHz to an angular frequency in rad/µs.
pub fn mhz(f: f64) -> f64 {
    std::f64::consts::TAU * f
}

/// Converts an angular frequency in rad/µs to MHz.
pub fn to_mhz(omega: f64) -> f64 {
    omega / std::f64::consts::TAU
}
