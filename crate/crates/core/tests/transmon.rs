mod common;

use std::f64::consts::{PI, SQRT_2, TAU};

use common::{assert_close, assert_matrix, assert_rel};
use geogate::gates::{nsgp_named, GateRecipe, NamedGate};
use geogate::linalg::{c, cis, phase_aligned_distance, Operator, Vector};
use geogate::open_system::two_qubit_gate_fidelity;
use geogate::path::{Detuning, DriveSchedule, Envelope, EnvelopeShape, EnvelopeSpec, Ramp};
use geogate::propagate::{time_ordered_propagator, Channel, FnHamiltonian, Hamiltonian, Schedule, DEFAULT_STEPS};
use geogate::transmon::{
    bessel_j, drag_pulse, parametric_flux, reduced_hamiltonian, transmon_hamiltonian, CouplerConfig, FluxPhase, Frame,
    ParametricGate, TransmonConfig, TransmonDrive, TwoTransmonModel,
};
use geogate::{mhz, Error};

const TWO_QUBIT_STEPS: usize = 16384;

fn qubit(alpha_mhz: f64) -> TransmonConfig {
    TransmonConfig::new(3, mhz(alpha_mhz)).unwrap()
}

fn hadamard_like(peak_mhz: f64) -> GateRecipe {
    nsgp_named(NamedGate::Hadamard, EnvelopeSpec::sine(mhz(peak_mhz))).unwrap()
}

fn paper_gate() -> ParametricGate {
    ParametricGate::design(qubit(220.0), qubit(180.0), mhz(8.0), 1.3, mhz(-345.0)).unwrap()
}

fn leakage(u: &Operator) -> f64 {
    u[(2, 0)].norm_sqr().max(u[(2, 1)].norm_sqr())
}

#[test]
fn drag_constant_pulse_is_unchanged() {
    let env = Envelope { shape: EnvelopeShape::Constant, peak: 3.0, duration: 1.0 };
    let d = DriveSchedule::new(env, Detuning::constant(0.0), Ramp::constant(0.4));
    let p = drag_pulse(&d, mhz(220.0)).unwrap();
    for t in [0.0, 0.3, 1.0] {
        assert_close((p.value(t) - c(3.0, 0.0)).norm(), 0.0, 1e-15, "Ω_D = Ω");
    }
}

#[test]
fn drag_sine_pulse_start() {
    let r = hadamard_like(30.0);
    let d = r.segments[0];
    let alpha = mhz(220.0);
    let p = drag_pulse(&d, alpha).unwrap();
    let expected = c(0.0, -mhz(30.0) * PI / (2.0 * alpha * d.duration()));
    assert_close((p.value(0.0) - expected).norm(), 0.0, 1e-9, "Ω_D(0)");
    // Full expression at an interior point, derivatives by centered differences.
    let t = 0.31 * d.duration();
    let h = d.duration() * 1e-6;
    let omega_dot = (d.omega(t + h) - d.omega(t - h)) / (2.0 * h);
    let phi_dot = (d.phase(t + h) - d.phase(t - h)) / (2.0 * h);
    let oracle = c(d.omega(t), 0.0) - c(d.omega(t) * phi_dot + d.detuning(t) * d.omega(t), omega_dot) / (2.0 * alpha);
    assert!((p.value(t) - oracle).norm() < 1e-6 * mhz(30.0));
    assert!(matches!(drag_pulse(&d, 0.0), Err(Error::Division(_))));
}

#[test]
fn drag_suppresses_leakage() {
    // Ω_m = 2π×30 MHz: no-DRAG leakage 3.1e-4, DRAG 7.3e-5.
    let r = hadamard_like(30.0);
    let run = |drag: bool| {
        let td = TransmonDrive::new(qubit(220.0), r.segments[0], drag, Frame::DriveRotating).unwrap();
        leakage(&time_ordered_propagator(&Schedule::single(td, r.duration()).unwrap(), DEFAULT_STEPS).unwrap())
    };
    let (with, without) = (run(true), run(false));
    assert!(with < 1e-4, "DRAG leakage {with:e}");
    assert!(without > 1e-4, "bare leakage {without:e}");
    assert!(without > 3.0 * with);
}

#[test]
fn two_level_truncation_matches_the_qubit_hamiltonian() {
    let r = hadamard_like(20.0);
    let d = r.segments[0];
    let td = TransmonDrive::new(TransmonConfig::new(2, mhz(220.0)).unwrap(), d, false, Frame::DriveRotating).unwrap();
    for k in 0..=8 {
        let t = d.duration() * k as f64 / 8.0;
        let shift = Operator::identity(2, 2) * c(0.5 * d.detuning(t), 0.0);
        assert_matrix(&transmon_hamiltonian(&td, t), &(d.at(t) + shift), 1e-12, "H + Δ/2·I");
    }
    let u2 = time_ordered_propagator(&Schedule::single(td, d.duration()).unwrap(), DEFAULT_STEPS).unwrap();
    let u = time_ordered_propagator(&r.schedule(), DEFAULT_STEPS).unwrap();
    assert!(phase_aligned_distance(&u2, &u) < 1e-10);
}

#[test]
fn undriven_three_level_diagonal() {
    let delta = mhz(-3.0);
    let alpha = mhz(220.0);
    let env = Envelope { shape: EnvelopeShape::Sine, peak: 0.0, duration: 0.1 };
    let d = DriveSchedule::new(env, Detuning::constant(delta), Ramp::constant(0.0));
    let td = TransmonDrive::new(qubit(220.0), d, true, Frame::DriveRotating).unwrap();
    let h = transmon_hamiltonian(&td, 0.05);
    let expect = Operator::from_diagonal(&Vector::from_vec(vec![c(0.0, 0.0), c(delta, 0.0), c(2.0 * delta - alpha, 0.0)]));
    assert_matrix(&h, &expect, 1e-12, "diag(0, Δ, 2Δ − α)");
    assert!(matches!(TransmonConfig::new(1, alpha), Err(Error::InvalidDimension(_))));
    assert!(matches!(TransmonConfig::new(3, 0.0), Err(Error::Config(_))));
}

#[test]
fn lab_frame_agrees_with_drive_frame() {
    let r = hadamard_like(44.0);
    let d = r.segments[0];
    let omega1 = mhz(5000.0);
    let rot = TransmonDrive::new(qubit(220.0), d, true, Frame::DriveRotating).unwrap();
    let lab = TransmonDrive::new(qubit(220.0), d, true, Frame::Lab { qubit_frequency: omega1 }).unwrap();
    let u_rot = time_ordered_propagator(&Schedule::single(rot.clone(), d.duration()).unwrap(), DEFAULT_STEPS).unwrap();
    let u_lab = time_ordered_propagator(&Schedule::single(lab.clone(), d.duration()).unwrap(), 1 << 20).unwrap();
    let theta = lab.carrier_phase(omega1, d.duration());
    let mapped = lab.frame_rotation(theta) * u_lab;
    assert_matrix(&mapped, &u_rot, 1e-6, "frame-mapped lab propagator");
    // Same fidelity against the qubit target in both frames.
    let fid = |u: &Operator| {
        let ch = Channel::from_unitary(u, &[0, 1]);
        geogate::open_system::gate_fidelity(&ch, &r.target, 1001).unwrap()
    };
    assert_close(fid(&mapped), fid(&u_rot), 1e-6, "fidelity");
}

#[test]
fn parametric_flux_examples() {
    let phase = FluxPhase {
        ramp: Ramp::constant(0.0),
        envelope: Envelope { shape: EnvelopeShape::Constant, peak: 1.0, duration: 0.05 },
    };
    let cfg = CouplerConfig::new(mhz(8.0), 0.0, mhz(-345.0), mhz(-8.0)).unwrap();
    assert_eq!(parametric_flux(&cfg, &phase, 0.013), (0.0, 0.0));
    let cfg = CouplerConfig::new(mhz(8.0), 1.3, mhz(-345.0), mhz(-8.0)).unwrap();
    let (f, fdot) = parametric_flux(&cfg, &phase, 0.0);
    assert_eq!(f, 0.0);
    assert_rel(fdot, 1.3 * cfg.modulation_frequency, 1e-15, "Ḟ(0) = βν");
    let peak = (0..20000).map(|k| parametric_flux(&cfg, &phase, 0.05 * k as f64 / 20000.0).0.abs()).fold(0.0, f64::max);
    assert_close(peak, 1.3, 1e-5, "peak |F|");
}

#[test]
fn coupler_derived_quantities() {
    let g = paper_gate();
    assert_close(geogate::to_mhz(g.coupler.effective_coupling()), 2.0 * 8.0 * 0.5220232474146604, 1e-9, "g′");
    assert_close(geogate::to_mhz(g.coupler.effective_coupling()), 8.35, 0.01, "g′ ≈ 8.35 MHz");
    let delta_l = geogate::to_mhz(g.coupler.effective_detuning);
    assert!((delta_l + 8.4).abs() <= 0.02 * 8.4, "Δ_L = {delta_l}");
    assert_close(delta_l, -geogate::to_mhz(g.coupler.effective_coupling()), 1e-9, "Δ_L = −g′ tan(π/4)");
    let tau = SQRT_2 * PI * 0.5 / g.coupler.effective_coupling();
    assert_rel(g.duration(), tau, 1e-12, "τ");
    assert_close(g.duration(), 0.042, 5e-4, "τ ≈ 0.042 µs");
    assert_rel(g.coupler.modulation_frequency, mhz(-345.0 - 8.35), 1e-3, "ν = Δ₁ + Δ_L");
    assert!(g.coupler.is_well_separated());
}

#[test]
fn uncoupled_transmons_are_stationary() {
    let g = paper_gate();
    let cfg = CouplerConfig::new(0.0, 1.3, mhz(-345.0), g.coupler.effective_detuning).unwrap();
    let model = TwoTransmonModel::new(qubit(220.0), qubit(180.0), cfg, g.flux_phase()).unwrap();
    let idx = model.computational_indices();
    let u = time_ordered_propagator(&Schedule::single(model, g.duration()).unwrap(), 2048).unwrap();
    for i in 0..9 {
        for j in 0..9 {
            if i != j {
                assert_eq!(u[(i, j)].norm(), 0.0);
            }
        }
    }
    for &k in &idx {
        assert_close(u[(k, k)].re, 1.0, 1e-12, "computational state");
    }
}

#[test]
fn unmodulated_exchange_is_off_resonant() {
    let g = paper_gate();
    let (coupling, detuning) = (mhz(8.0), mhz(-345.0));
    let cfg = CouplerConfig::new(coupling, 0.0, detuning, g.coupler.effective_detuning).unwrap();
    let model = TwoTransmonModel::new(qubit(220.0), qubit(180.0), cfg, g.flux_phase()).unwrap();
    let (from, to) = (model.index(0, 1), model.index(1, 0));
    let start = geogate::linalg::DensityMatrix::pure(&geogate::linalg::Ket::basis(9, from));
    let traj = geogate::propagate::lindblad_trajectory(&Schedule::single(model, 0.02).unwrap(), &start, &[], 8192, 8192)
        .unwrap();
    let peak = traj.iter().map(|(_, rho)| rho.population(to)).fold(0.0, f64::max);
    // Rabi oracle: coupling 2g at detuning Δ₁.
    let oracle = 4.0 * coupling * coupling / (4.0 * coupling * coupling + detuning * detuning);
    assert_rel(peak, oracle, 1e-3, "peak transfer");
    assert!(peak < 3e-3);
}

#[test]
fn reduced_hamiltonian_examples() {
    let g = paper_gate();
    let phase = g.flux_phase();
    let flat = CouplerConfig::new(mhz(8.0), 0.0, mhz(-345.0), mhz(-8.0)).unwrap();
    assert_eq!(geogate::linalg::max_abs(&reduced_hamiltonian(&flat, mhz(220.0), mhz(180.0), &phase, 0.01)), 0.0);
    let h = reduced_hamiltonian(&g.coupler, mhz(220.0), mhz(180.0), &phase, 0.013);
    assert_close(geogate::to_mhz(h[(1, 3)].norm()), 8.0 * 0.5220232474146604, 1e-9, "|⟨01|H|10⟩|");
    assert_close(geogate::to_mhz(h[(1, 3)].norm()), 4.17, 0.01, "≈ 4.17 MHz");
    assert!(geogate::linalg::hermiticity_error(&h) < 1e-15);
}

/// Jacobi–Anger expansion of the full exchange term kept to `|n| ≤ orders`, the first
/// order alone being the reduced model.
fn expanded_exchange(g: &ParametricGate, orders: i32) -> impl Fn(f64) -> Operator + Send + Sync + 'static {
    let coupler = g.coupler;
    let phase = g.flux_phase();
    let (a1, a2) = (g.first.anharmonicity, g.second.anharmonicity);
    let idx = move |k1: usize, k2: usize| 3 * k1 + k2;
    move |t| {
        let theta = coupler.modulation_frequency * t + phase.value(t);
        let mut sum = c(0.0, 0.0);
        for n in -orders..=orders {
            sum += cis(-(n as f64) * theta) * bessel_j(n, coupler.modulation_depth);
        }
        let lead = cis(-coupler.qubit_detuning * t) * sum * coupler.coupling;
        let mut h = Operator::zeros(9, 9);
        for (i, j, w) in [
            (idx(0, 1), idx(1, 0), lead),
            (idx(0, 2), idx(1, 1), lead * cis(-a2 * t) * SQRT_2),
            (idx(1, 1), idx(2, 0), lead * cis(a1 * t) * SQRT_2),
        ] {
            h[(i, j)] += w;
            h[(j, i)] += w.conj();
        }
        h
    }
}

fn single_excitation_block(u: &Operator) -> Operator {
    let idx = [1, 3];
    Operator::from_fn(2, 2, |i, j| u[(idx[i], idx[j])])
}

#[test]
fn reduced_model_tracks_the_full_model() {
    let g = paper_gate();
    let tau = g.duration();
    let full = time_ordered_propagator(&g.schedule().unwrap(), TWO_QUBIT_STEPS).unwrap();
    let (coupler, phase) = (g.coupler, g.flux_phase());
    let reduced = FnHamiltonian::new(9, move |t| reduced_hamiltonian(&coupler, mhz(220.0), mhz(180.0), &phase, t));
    let u_red = time_ordered_propagator(&Schedule::single(reduced, tau).unwrap(), TWO_QUBIT_STEPS).unwrap();
    // The interaction picture of the anharmonic terms is trivial on the single-excitation block.
    let first_order = (single_excitation_block(&full) - single_excitation_block(&u_red)).norm();
    assert!(first_order < 5e-2, "first-order residual {first_order:e}");
    // All orders of the expansion recover the full dynamics on that block.
    let expanded = FnHamiltonian::new(9, expanded_exchange(&g, 8));
    let u_all = time_ordered_propagator(&Schedule::single(expanded, tau).unwrap(), TWO_QUBIT_STEPS).unwrap();
    let all_orders = (single_excitation_block(&full) - single_excitation_block(&u_all)).norm();
    assert!(all_orders < 1e-6, "all-order residual {all_orders:e}");
    let only_first = FnHamiltonian::new(9, expanded_exchange(&g, 1));
    let u_first = time_ordered_propagator(&Schedule::single(only_first, tau).unwrap(), TWO_QUBIT_STEPS).unwrap();
    assert!(first_order > 1e-3 && (single_excitation_block(&u_first) - single_excitation_block(&full)).norm() < first_order);
}

#[test]
fn jacobi_anger_identity() {
    let beta = 1.3;
    let partial = |theta: f64, orders: i32| -> geogate::linalg::C64 {
        (-orders..=orders).map(|n| cis(n as f64 * theta) * bessel_j(n, beta)).sum()
    };
    // Truncation at |n| ≤ 8 leaves 2i Σ_{n≥9} J_n sin nθ for odd n, bounded by the tail sum.
    let tail: f64 = (9..40).map(|n| 2.0 * bessel_j(n, beta).abs()).sum();
    assert!(tail > 1e-8);
    for k in 0..64 {
        let theta = TAU * k as f64 / 64.0;
        let exact = cis(beta * theta.sin());
        assert!((partial(theta, 8) - exact).norm() <= tail + 1e-15);
        assert!((partial(theta, 10) - exact).norm() < 1e-8);
    }
}

#[test]
fn sqrt_iswap_full_model() {
    let mut g = paper_gate();
    let distances = g.calibrate(TWO_QUBIT_STEPS).unwrap();
    assert_eq!(g.mapping, geogate::transmon::PhaseMapping::DIRECT);
    assert!(distances[0] < 0.1 && distances[1] > 1.0, "{distances:?}");
    let u = time_ordered_propagator(&g.schedule().unwrap(), TWO_QUBIT_STEPS).unwrap();
    let model = g.model().unwrap();
    let idx = model.computational_indices();
    let corrected = g.effective_frame_correction().unwrap() * &u;
    let full = two_qubit_gate_fidelity(&Channel::from_unitary(&corrected, &idx), &g.recipe.target, (101, 101)).unwrap();
    // The effective two-level model realizes the target exactly.
    let eff = g.recipe.simulate(DEFAULT_STEPS).unwrap();
    let effective = two_qubit_gate_fidelity(&Channel::from_unitary(&eff, &[0, 1, 2, 3]), &g.recipe.target, (101, 101)).unwrap();
    assert_close(effective, 1.0, 1e-9, "effective model");
    assert!((full - effective).abs() < 3e-3, "full {full} vs effective {effective}");
    // Ensemble-averaged leakage out of the computational states.
    let mean_leak: f64 = idx
        .iter()
        .map(|&j| (0..9).filter(|i| !idx.contains(i)).map(|i| u[(i, j)].norm_sqr()).sum::<f64>())
        .sum::<f64>()
        / 4.0;
    assert!(mean_leak <= 2e-3, "leakage {mean_leak:e}");
}

#[test]
fn flux_frame_correction_changes_fidelity_as_predicted() {
    let g = paper_gate();
    let u = time_ordered_propagator(&g.schedule().unwrap(), TWO_QUBIT_STEPS).unwrap();
    let idx = g.model().unwrap().computational_indices();
    let w = g.effective_frame_correction().unwrap();
    let flux = g.flux_frame_correction().unwrap();
    let fid = |m: &Operator| two_qubit_gate_fidelity(&Channel::from_unitary(m, &idx), &g.recipe.target, (101, 101)).unwrap();
    let base = fid(&(&w * &u));
    let shifted = fid(&(&flux * &w * &u));
    // Oracle: the same diagonal phase applied to the exact target, averaged over the grid.
    let phase = g.flux_phase();
    let theta = parametric_flux(&g.coupler, &phase, g.duration()).0 - parametric_flux(&g.coupler, &phase, 0.0).0;
    let n = 101;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (TAU * i as f64 / (n - 1) as f64, TAU * j as f64 / (n - 1) as f64);
            let psi = Vector::from_vec(vec![
                c(a.cos() * b.cos(), 0.0),
                c(a.cos() * b.sin(), 0.0),
                c(a.sin() * b.cos(), 0.0),
                c(a.sin() * b.sin(), 0.0),
            ]);
            let out = &g.recipe.target * psi;
            let expect: geogate::linalg::C64 =
                out[0].norm_sqr() + out[1].norm_sqr() + (out[2].norm_sqr() + out[3].norm_sqr()) * cis(theta);
            acc += expect.norm_sqr();
        }
    }
    let predicted = acc / (n * n) as f64 - 1.0;
    assert!(((shifted - base) - predicted).abs() < 2e-2, "change {} vs predicted {predicted}", shifted - base);
    assert!(base > 0.99);
}
