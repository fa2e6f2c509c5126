use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bessel::bessel_j;
use super::single::TransmonConfig;
use crate::error::{Error, Result};
use crate::gates::{sqrt_iswap_spec, GateRecipe};
use crate::linalg::{c, cis, kron, ladder_ops, phase_aligned_distance, Operator};
use crate::path::{DriveSchedule, Envelope, EnvelopeSpec, Ramp};
use crate::propagate::{time_ordered_propagator, Hamiltonian, Piece, Schedule};

/// Parametric coupling of two transmons: static coupling `g`, flux modulation
/// `F(t) = β sin(νt + ϕ(t))` of the first qubit, qubit detuning `Δ₁ = ω₁ − ω₂` and
/// effective detuning `Δ_L = ν − Δ₁`. Frequencies in rad/µs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplerConfig {
    pub coupling: f64,
    pub modulation_depth: f64,
    pub modulation_frequency: f64,
    pub qubit_detuning: f64,
    pub effective_detuning: f64,
}

impl CouplerConfig {
    /// Builds the coupler with `ν = Δ₁ + Δ_L`; logs a warning when `|Δ_L|` is not small
    /// against `ν` and `Δ₁`.
    pub fn new(coupling: f64, modulation_depth: f64, qubit_detuning: f64, effective_detuning: f64) -> Result<Self> {
        for (name, v) in [
            ("coupling", coupling),
            ("modulation depth", modulation_depth),
            ("qubit detuning", qubit_detuning),
            ("effective detuning", effective_detuning),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        let cfg = Self {
            coupling,
            modulation_depth,
            modulation_frequency: qubit_detuning + effective_detuning,
            qubit_detuning,
            effective_detuning,
        };
        if !cfg.is_well_separated() {
            log::warn!(
                "effective detuning {effective_detuning} is not small against ν = {} and Δ₁ = {qubit_detuning}",
                cfg.modulation_frequency
            );
        }
        Ok(cfg)
    }

    /// `|Δ_L| < 0.1·min(|ν|, |Δ₁|)`.
    pub fn is_well_separated(&self) -> bool {
        self.effective_detuning.abs() < 0.1 * self.modulation_frequency.abs().min(self.qubit_detuning.abs())
    }

    /// `g′ = 2g J₁(β)`.
    pub fn effective_coupling(&self) -> f64 {
        2.0 * self.coupling * bessel_j(1, self.modulation_depth)
    }
}

/// Flux phase ramp `ϕ(t)` on the time base of `envelope`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxPhase {
    pub ramp: Ramp,
    pub envelope: Envelope,
}

impl FluxPhase {
    pub fn value(&self, t: f64) -> f64 {
        self.ramp.value(&self.envelope, t)
    }
    pub fn rate(&self, t: f64) -> f64 {
        self.ramp.derivative(&self.envelope, t)
    }
}

/// `(F(t), Ḟ(t))` with `F = β sin(νt + ϕ)` and `Ḟ = β(ν + ϕ̇) cos(νt + ϕ)`.
pub fn parametric_flux(cfg: &CouplerConfig, phase: &FluxPhase, t: f64) -> (f64, f64) {
    let arg = cfg.modulation_frequency * t + phase.value(t);
    let beta = cfg.modulation_depth;
    (beta * arg.sin(), beta * (cfg.modulation_frequency + phase.rate(t)) * arg.cos())
}

/// Two coupled transmons in the frame `exp(i[ω₁t + F]N₁ + iω₂tN₂)`:
/// `Σ_m Σ_k −k(k−1)α_m/2 |k⟩_m⟨k| + g(e^{−i[Δ₁t + F]} b₁b₂† + h.c.)`.
/// Basis index is `levels₂·k₁ + k₂`.
#[derive(Clone)]
pub struct TwoTransmonModel {
    pub first: TransmonConfig,
    pub second: TransmonConfig,
    pub coupler: CouplerConfig,
    pub phase: FluxPhase,
    static_part: Operator,
    exchange: Operator,
}

impl TwoTransmonModel {
    pub fn new(first: TransmonConfig, second: TransmonConfig, coupler: CouplerConfig, phase: FluxPhase) -> Result<Self> {
        first.validate()?;
        second.validate()?;
        let (b1, _) = ladder_ops(first.levels, 0, 1)?;
        let (b2, _) = ladder_ops(second.levels, 0, 1)?;
        let diag = |cfg: &TransmonConfig| {
            Operator::from_diagonal(&nalgebra::DVector::from_fn(cfg.levels, |k, _| c(cfg.anharmonic_shift(k), 0.0)))
        };
        let static_part =
            kron(&diag(&first), &Operator::identity(second.levels, second.levels))
                + kron(&Operator::identity(first.levels, first.levels), &diag(&second));
        let exchange = kron(&b1, &b2.adjoint());
        Ok(Self { first, second, coupler, phase, static_part, exchange })
    }

    pub fn index(&self, k1: usize, k2: usize) -> usize {
        self.second.levels * k1 + k2
    }

    /// Indices of `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn computational_indices(&self) -> [usize; 4] {
        [self.index(0, 0), self.index(0, 1), self.index(1, 0), self.index(1, 1)]
    }

    pub fn number_operators(&self) -> (Operator, Operator) {
        let n = |levels: usize| Operator::from_diagonal(&nalgebra::DVector::from_fn(levels, |k, _| c(k as f64, 0.0)));
        let i1 = Operator::identity(self.first.levels, self.first.levels);
        let i2 = Operator::identity(self.second.levels, self.second.levels);
        (kron(&n(self.first.levels), &i2), kron(&i1, &n(self.second.levels)))
    }
}

impl Hamiltonian for TwoTransmonModel {
    fn dim(&self) -> usize {
        self.first.levels * self.second.levels
    }

    fn at(&self, t: f64) -> Operator {
        let (flux, _) = parametric_flux(&self.coupler, &self.phase, t);
        let w = cis(-(self.coupler.qubit_detuning * t + flux)) * self.coupler.coupling;
        let x = &self.exchange * w;
        &self.static_part + &x + x.adjoint()
    }
}

/// First-order Jacobi–Anger reduction of [`TwoTransmonModel`] in the interaction picture
/// of the anharmonic terms, keeping the resonant `J_{−1}` sideband:
/// `−gJ₁(β) e^{i(νt + ϕ − Δ₁t)} {|01⟩⟨10| + √2 e^{−iα₂t}|02⟩⟨11| + √2 e^{iα₁t}|11⟩⟨20|} + h.c.`,
/// returned on the full 9-dimensional space of two three-level transmons.
pub fn reduced_hamiltonian(
    coupler: &CouplerConfig,
    first_anharmonicity: f64,
    second_anharmonicity: f64,
    phase: &FluxPhase,
    t: f64,
) -> Operator {
    let idx = |k1: usize, k2: usize| 3 * k1 + k2;
    let lead = cis(coupler.modulation_frequency * t + phase.value(t) - coupler.qubit_detuning * t)
        * (-coupler.coupling * bessel_j(1, coupler.modulation_depth));
    let terms = [
        ((idx(0, 1), idx(1, 0)), lead),
        ((idx(0, 2), idx(1, 1)), lead * cis(-second_anharmonicity * t) * SQRT_2),
        ((idx(1, 1), idx(2, 0)), lead * cis(first_anharmonicity * t) * SQRT_2),
    ];
    let mut h = Operator::zeros(9, 9);
    for ((i, j), v) in terms {
        h[(i, j)] += v;
        h[(j, i)] += v.conj();
    }
    h
}

/// Effective two-level Hamiltonian `½[[−Δ_L, g′e^{−iφ}], [g′e^{iφ}, Δ_L]]` on
/// `(|10⟩, |01⟩)`, as a drive with constant envelope `g′`.
pub fn effective_two_level(coupler: &CouplerConfig, phase: Ramp, duration: f64) -> DriveSchedule {
    let envelope = Envelope {
        shape: crate::path::EnvelopeShape::Constant,
        peak: coupler.effective_coupling(),
        duration,
    };
    DriveSchedule::new(envelope, crate::path::Detuning::constant(coupler.effective_detuning), phase)
}

/// Relation between the effective drive phase `φ(t)` and the flux phase `ϕ(t)`:
/// `ϕ = sign·φ + π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseMapping {
    pub sign: i8,
}

impl PhaseMapping {
    /// `ϕ = φ + π`: the `J_{−1}` sideband carries `−gJ₁ e^{iϕ}`, which matches `g′/2 e^{iφ}`.
    pub const DIRECT: PhaseMapping = PhaseMapping { sign: 1 };
    pub const MIRRORED: PhaseMapping = PhaseMapping { sign: -1 };

    pub fn apply(&self, phase: Ramp) -> Ramp {
        let s = f64::from(self.sign);
        Ramp { start: s * phase.start + PI, rate: s * phase.rate, gain: s * phase.gain }
    }
}

/// √iSWAP-like gate realized by parametric modulation of the first transmon.
#[derive(Clone)]
pub struct ParametricGate {
    pub recipe: GateRecipe,
    pub coupler: CouplerConfig,
    pub first: TransmonConfig,
    pub second: TransmonConfig,
    pub mapping: PhaseMapping,
}

impl ParametricGate {
    /// Designs the gate: `g′ = 2gJ₁(β)` is the constant effective Rabi frequency and the
    /// latitude recipe fixes `Δ_L = −g′ tan χ`.
    pub fn design(
        first: TransmonConfig,
        second: TransmonConfig,
        coupling: f64,
        modulation_depth: f64,
        qubit_detuning: f64,
    ) -> Result<Self> {
        let g_eff = 2.0 * coupling * bessel_j(1, modulation_depth);
        let recipe = sqrt_iswap_spec(EnvelopeSpec::constant(g_eff))?;
        let drive = recipe.segments[0];
        let coupler = CouplerConfig::new(coupling, modulation_depth, qubit_detuning, drive.detuning.offset)?;
        Ok(Self { recipe, coupler, first, second, mapping: PhaseMapping::DIRECT })
    }

    pub fn drive(&self) -> &DriveSchedule {
        &self.recipe.segments[0]
    }

    pub fn duration(&self) -> f64 {
        self.drive().duration()
    }

    pub fn flux_phase(&self) -> FluxPhase {
        FluxPhase { ramp: self.mapping.apply(self.drive().phase), envelope: self.drive().envelope }
    }

    pub fn model(&self) -> Result<TwoTransmonModel> {
        TwoTransmonModel::new(self.first.clone(), self.second.clone(), self.coupler, self.flux_phase())
    }

    pub fn schedule(&self) -> Result<Schedule> {
        Schedule::new(vec![Piece { duration: self.duration(), hamiltonian: Arc::new(self.model()?) }])
    }

    /// `exp(iΔ_Lτ(N₁ − N₂)/2)`: maps the flux frame onto the frame of the effective
    /// two-level Hamiltonian at the end of the gate.
    pub fn effective_frame_correction(&self) -> Result<Operator> {
        let (n1, n2) = self.model()?.number_operators();
        let angle = 0.5 * self.coupler.effective_detuning * self.duration();
        Ok(Operator::from_diagonal(&(n1 - n2).diagonal().map(|k| cis(angle * k.re))))
    }

    /// `exp(i[F(τ) − F(0)]N₁)`: undoes the flux-dependent phase of the first qubit.
    pub fn flux_frame_correction(&self) -> Result<Operator> {
        let (n1, _) = self.model()?.number_operators();
        let phase = self.flux_phase();
        let delta = parametric_flux(&self.coupler, &phase, self.duration()).0 - parametric_flux(&self.coupler, &phase, 0.0).0;
        Ok(Operator::from_diagonal(&n1.diagonal().map(|k| cis(delta * k.re))))
    }

    /// Closed-system unitary of the full model restricted to the computational states,
    /// after the effective-frame correction.
    pub fn computational_block(&self, steps: usize) -> Result<Operator> {
        let u = self.effective_frame_correction()? * time_ordered_propagator(&self.schedule()?, steps)?;
        let idx = self.model()?.computational_indices();
        Ok(Operator::from_fn(4, 4, |i, j| u[(idx[i], idx[j])]))
    }

    /// Tries both phase mappings on the closed full model and keeps the one whose
    /// single-excitation block is closer to the target. Returns the two distances.
    pub fn calibrate(&mut self, steps: usize) -> Result<[f64; 2]> {
        let mut distances = [0.0; 2];
        let block_target = single_excitation(&self.recipe.target);
        for (slot, mapping) in [PhaseMapping::DIRECT, PhaseMapping::MIRRORED].into_iter().enumerate() {
            self.mapping = mapping;
            let block = single_excitation(&self.computational_block(steps)?);
            distances[slot] = phase_aligned_distance(&block, &block_target);
        }
        self.mapping = if distances[0] <= distances[1] { PhaseMapping::DIRECT } else { PhaseMapping::MIRRORED };
        Ok(distances)
    }
}

/// `{|01⟩, |10⟩}` block of a 4×4 operator in computational order.
fn single_excitation(u: &Operator) -> Operator {
    Operator::from_fn(2, 2, |i, j| u[(1 + i, 1 + j)])
}
