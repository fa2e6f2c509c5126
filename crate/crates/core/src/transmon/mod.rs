//! Transmon Hamiltonians: a single DRAG-driven transmon and two parametrically coupled
//! transmons.

mod bessel;
mod coupler;
mod single;

pub use bessel::bessel_j;
pub use coupler::{
    effective_two_level, parametric_flux, reduced_hamiltonian, CouplerConfig, FluxPhase, ParametricGate,
    PhaseMapping, TwoTransmonModel,
};
pub use single::{drag_pulse, transmon_hamiltonian, DragPulse, Frame, TransmonConfig, TransmonDrive};
