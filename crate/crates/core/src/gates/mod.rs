//! Gate recipes for the four path families: latitude (NSGP), orange-slice (OSSP),
//! plain dynamical, and noncyclic longitude paths.

mod document;
mod dynamical;
mod longitude;
mod nsgp;
mod ossp;
mod two_qubit;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::path::{DriveSchedule, EngineeredPath};
use crate::propagate::{time_ordered_propagator, Piece, Schedule};
use crate::quadrature::{simpson, DEFAULT_NODES};

pub use document::{RecipeDocument, SampledSegment};
pub use dynamical::{dynamical_gate, dynamical_named, dynamical_rotation, dynamical_unitary};
pub use longitude::{longitude_gate, longitude_named, longitude_rotation, longitude_unitary};
pub use nsgp::{nsgp_named, nsgp_named_with, nsgp_rotation, nsgp_rotation_with};
pub use ossp::{ossp_gate, ossp_named};
pub use two_qubit::{sqrt_iswap_block, sqrt_iswap_spec, SQRT_ISWAP_BLOCK};

/// Path family a recipe belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Nsgp,
    Ossp,
    #[serde(rename = "dyn")]
    Dynamical,
    Longitude,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Self::Nsgp, Self::Ossp, Self::Dynamical, Self::Longitude];

    pub fn id(self) -> &'static str {
        match self {
            Self::Nsgp => "nsgp",
            Self::Ossp => "ossp",
            Self::Dynamical => "dyn",
            Self::Longitude => "longitude",
        }
    }

    /// Named gates the scheme can build.
    pub fn named(self, gate: NamedGate, envelope: crate::path::EnvelopeSpec) -> Result<GateRecipe> {
        match self {
            Self::Nsgp => nsgp_named(gate, envelope),
            Self::Ossp => ossp_named(gate, envelope),
            Self::Dynamical => dynamical_named(gate, envelope),
            Self::Longitude => longitude_named(gate, envelope),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.id() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme '{s}' (valid: nsgp, ossp, dyn, longitude)")))
    }
}

/// Standard single-qubit gates. For the latitude scheme `Hadamard` means the
/// Hadamard-like gate `R_z(√2π)·H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedGate {
    Hadamard,
    Phase,
    #[serde(rename = "pi8")]
    PiEighth,
}

impl NamedGate {
    pub const ALL: [NamedGate; 3] = [Self::Hadamard, Self::Phase, Self::PiEighth];

    pub fn id(self) -> &'static str {
        match self {
            Self::Hadamard => "hadamard",
            Self::Phase => "phase",
            Self::PiEighth => "pi8",
        }
    }
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for NamedGate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.id() == s)
            .ok_or_else(|| Error::Config(format!("unknown gate '{s}' (valid: hadamard, phase, pi8)")))
    }
}

/// Rotation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Everything needed to run and check one gate.
#[derive(Debug, Clone)]
pub struct GateRecipe {
    pub scheme: Scheme,
    pub label: String,
    /// Two-level drive segments, applied in order.
    pub segments: Vec<DriveSchedule>,
    /// Ideal gate; 2×2, or 4×4 for the coupled-qubit gate.
    pub target: Operator,
    /// Expected pulse area `S = Σ ∫Ω dt / 2` from the gate settings.
    pub pulse_area: f64,
    /// `R_z` angle left in front of the intended rotation, if any.
    pub rz_prefix: Option<f64>,
    /// Designed paths whose drives make up `segments`, when the scheme has them.
    pub paths: Vec<EngineeredPath>,
    /// Two-qubit indices `(e₀, e₁)` the two-level drive acts on, for 4×4 targets.
    pub embedding: Option<[usize; 2]>,
}

impl GateRecipe {
    pub fn duration(&self) -> f64 {
        self.segments.iter().map(DriveSchedule::duration).sum()
    }

    /// Two-level drive as a propagation schedule.
    pub fn schedule(&self) -> Schedule {
        let pieces =
            self.segments.iter().map(|d| Piece { duration: d.duration(), hamiltonian: Arc::new(*d) }).collect();
        Schedule::new(pieces).expect("recipe segments are non-empty")
    }

    /// Closed-system propagator of the two-level drive, embedded to the target size.
    pub fn simulate(&self, steps: usize) -> Result<Operator> {
        let block = time_ordered_propagator(&self.schedule(), steps)?;
        Ok(match self.embedding {
            None => block,
            Some(idx) => embed_block(&block, idx, self.target.nrows()),
        })
    }

    /// `R_z` prefix, composed so that `rz_correction()·target` is the intended rotation.
    pub fn rz_correction(&self) -> Option<Operator> {
        self.rz_prefix.map(|a| crate::linalg::rz(-a))
    }
}

/// Embeds a 2×2 block on indices `idx` of an identity of size `dim`.
pub fn embed_block(block: &Operator, idx: [usize; 2], dim: usize) -> Operator {
    let mut u = crate::linalg::identity(dim);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            u[(i, j)] = block[(a, b)];
        }
    }
    u
}

/// `S = Σ ∫Ω dt / 2` by quadrature.
pub fn pulse_area(recipe: &GateRecipe) -> f64 {
    recipe
        .segments
        .iter()
        .map(|d| 0.5 * simpson(|t| d.omega(t), 0.0, d.duration(), DEFAULT_NODES))
        .sum()
}

fn ordered_product(factors: &[Operator]) -> Operator {
    // factors[0] acts first.
    factors.iter().fold(crate::linalg::identity(factors[0].nrows()), |acc, f| f * acc)
}
