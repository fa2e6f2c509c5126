use geogate::gates::{embed_block, SQRT_ISWAP_BLOCK};
use geogate::linalg::{c, cis, DensityMatrix, Ket, Operator, Vector};
use geogate::open_system::{state_fidelity, two_qubit_gate_fidelity, NoiseConfig};
use geogate::propagate::{channel_trajectory, propagator_trajectory, time_ordered_propagator, Channel};
use geogate::transmon::{ParametricGate, PhaseMapping, TransmonConfig};
use geogate::{mhz, to_mhz};

use super::Outcome;
use crate::config::ExperimentConfig;
use crate::error::{BenchError, Result};
use crate::report::SweepReport;

/// `exp(iΔ_L t (N₁ − N₂)/2)`: flux frame to effective frame at time `t`.
fn frame_at(gate: &ParametricGate, n1_minus_n2: &[f64], t: f64) -> Operator {
    let angle = 0.5 * gate.coupler.effective_detuning * t;
    Operator::from_diagonal(&Vector::from_iterator(n1_minus_n2.len(), n1_minus_n2.iter().map(|k| cis(angle * k))))
}

/// Places a computational-basis vector on the full register.
fn lift(v: &Vector, idx: &[usize; 4], dim: usize) -> Result<Ket> {
    let mut out = Vector::zeros(dim);
    for (i, &j) in idx.iter().enumerate() {
        out[j] = v[i];
    }
    Ok(Ket::new(out)?)
}

/// √iSWAP-like gate on two parametrically coupled transmons: calibration, closed-system
/// leakage, open-system gate fidelity and the time series from the configured state.
pub fn two_qubit(cfg: &ExperimentConfig, steps: usize) -> Result<Outcome> {
    let q = cfg.section(&cfg.two_qubit, "two_qubit", "two-qubit")?;
    let first = TransmonConfig::new(q.levels, mhz(q.anharmonicity_mhz[0]))?;
    let second = TransmonConfig::new(q.levels, mhz(q.anharmonicity_mhz[1]))?;
    let mut gate =
        ParametricGate::design(first, second, mhz(q.coupling_mhz), q.modulation_depth, mhz(q.qubit_detuning_mhz))?;
    let distances = gate.calibrate(steps)?;
    let model = gate.model()?;
    let idx = model.computational_indices();
    let dim = q.levels * q.levels;
    let schedule = gate.schedule()?;
    let target = gate.recipe.target.clone();
    let (n1, n2) = model.number_operators();
    let n_diff: Vec<f64> = (0..dim).map(|i| (n1[(i, i)] - n2[(i, i)]).re).collect();

    // Closed system.
    let u = time_ordered_propagator(&schedule, steps)?;
    let corrected = gate.effective_frame_correction()? * &u;
    let closed_fidelity =
        two_qubit_gate_fidelity(&Channel::from_unitary(&corrected, &idx), &target, (q.grid[0], q.grid[1]))?;
    let leak_from = |j: usize| (0..dim).filter(|i| !idx.contains(i)).map(|i| u[(i, j)].norm_sqr()).sum::<f64>();
    let mean_leakage = idx.iter().map(|&j| leak_from(j)).sum::<f64>() / 4.0;

    // Open system.
    let collapse = NoiseConfig::uniform(mhz(q.kappa_khz * 1e-3)).collapse_ops(q.levels, 2)?;
    let channels = channel_trajectory(&schedule, &collapse, &idx, steps, q.samples)?;
    let ideal = propagator_trajectory(&gate.recipe.schedule(), steps, q.samples)?;
    if channels.len() != ideal.len() || channels.iter().zip(&ideal).any(|(a, b)| (a.0 - b.0).abs() > 1e-12) {
        return Err(BenchError::Config("full and effective trajectories sampled at different times".into()));
    }
    let norm = q.initial.iter().map(|x| x * x).sum::<f64>().sqrt();
    let local0 = Vector::from_iterator(4, q.initial.iter().map(|x| c(x / norm, 0.0)));
    let rho0 = DensityMatrix::pure(&lift(&local0, &idx, dim)?);

    let mut report = SweepReport::new(
        &cfg.experiment,
        "two-qubit",
        &["t", "p00", "p01", "p10", "p11", "leakage", "state_fidelity", "gate_fidelity"],
        steps,
    );
    report.note(format!(
        "units: t in us; qubit_detuning_mhz = (omega1 - omega2)/2pi = {}; gate_fidelity on a {}x{} product grid",
        q.qubit_detuning_mhz, q.dynamics_grid[0], q.dynamics_grid[1]
    ));
    let mut p11 = Vec::with_capacity(channels.len());
    let mut last = None;
    for ((t, channel), (_, u_eff)) in channels.iter().zip(&ideal) {
        let w = frame_at(&gate, &n_diff, *t);
        let ideal4 = embed_block(u_eff, SQRT_ISWAP_BLOCK, 4);
        let rho = DensityMatrix::from_evolved(channel.apply(rho0.entries()));
        let pops: Vec<f64> = idx.iter().map(|&i| rho.population(i)).collect();
        let leakage = 1.0 - pops.iter().sum::<f64>();
        let expected = Ket::normalized(w.adjoint() * lift(&(&ideal4 * &local0), &idx, dim)?.amplitudes())?;
        let fs = state_fidelity(&rho, &expected);
        let framed = channel.then_unitary(&w);
        let fg = two_qubit_gate_fidelity(&framed, &ideal4, (q.dynamics_grid[0], q.dynamics_grid[1]))?;
        p11.push(pops[3]);
        let mut row = vec![(*t).into()];
        row.extend(pops.iter().map(|&p| p.into()));
        row.extend([leakage.into(), fs.into(), fg.into()]);
        report.push(row);
        last = Some((rho, framed));
    }
    let (final_rho, final_channel) = last.expect("trajectory has samples");
    let final_state = lift(&(&target * &local0), &idx, dim)?;
    let w_end = gate.effective_frame_correction()?;
    let final_rho = DensityMatrix::from_evolved(&w_end * final_rho.entries() * w_end.adjoint());

    report.set("mapping", if gate.mapping == PhaseMapping::DIRECT { "direct" } else { "mirrored" });
    report.set("calibration_distances", distances.to_vec());
    report.set("effective_coupling_mhz", to_mhz(gate.coupler.effective_coupling()));
    report.set("effective_detuning_mhz", to_mhz(gate.coupler.effective_detuning));
    report.set("modulation_frequency_mhz", to_mhz(gate.coupler.modulation_frequency));
    report.set("well_separated", gate.coupler.is_well_separated());
    report.set("duration_us", gate.duration());
    report.set("closed_gate_fidelity", closed_fidelity);
    report.set("closed_mean_leakage", mean_leakage);
    report.set("closed_leakage_from_11", leak_from(idx[3]));
    report.set("gate_fidelity", two_qubit_gate_fidelity(&final_channel, &target, (q.grid[0], q.grid[1]))?);
    report.set("final_state_fidelity", state_fidelity(&final_rho, &final_state));
    report.set("p11_oscillation", p11.iter().map(|p| (p - p11[0]).abs()).fold(0.0, f64::max));
    Ok(Outcome::new(report))
}
