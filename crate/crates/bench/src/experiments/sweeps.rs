use geogate::gates::{GateRecipe, NamedGate, Scheme};
use geogate::mhz;
use geogate::open_system::{errored_schedule, gate_fidelity, ErrorConfig, NoiseConfig};
use geogate::propagate::superoperator_propagator;
use rayon::ThreadPool;

use super::{build_recipe, key, par_map, Outcome};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::SweepReport;

/// Gate fidelity under decay and dephasing at the same rate `kappa` (rad/µs).
pub fn decoherence_fidelity(recipe: &GateRecipe, kappa: f64, steps: usize, grid_points: usize) -> Result<f64> {
    let collapse = NoiseConfig::uniform(kappa).collapse_ops(2, 1)?;
    let channel = superoperator_propagator(&recipe.schedule(), &collapse, steps)?;
    Ok(gate_fidelity(&channel, &recipe.target, grid_points)?)
}

/// Gate fidelity with systematic errors `err` on top of decoherence at rate `kappa`.
pub fn error_grid_fidelity(
    recipe: &GateRecipe,
    err: ErrorConfig,
    peak: f64,
    kappa: f64,
    steps: usize,
    grid_points: usize,
) -> Result<f64> {
    let collapse = NoiseConfig::uniform(kappa).collapse_ops(2, 1)?;
    let channel = superoperator_propagator(&errored_schedule(recipe, err, peak), &collapse, steps)?;
    Ok(gate_fidelity(&channel, &recipe.target, grid_points)?)
}

struct Entry {
    scheme: Scheme,
    gate: NamedGate,
    recipe: GateRecipe,
}

/// Recipes for every scheme and gate, schemes outermost.
fn recipe_table(schemes: &[Scheme], gates: &[NamedGate], cfg: &ExperimentConfig) -> Result<Vec<Entry>> {
    schemes
        .iter()
        .flat_map(|&s| gates.iter().map(move |&g| (s, g)))
        .map(|(scheme, gate)| Ok(Entry { scheme, gate, recipe: build_recipe(scheme, gate, &cfg.drive)? }))
        .collect()
}

fn is_ordered(upper: &[f64], lower: &[f64]) -> bool {
    upper.iter().zip(lower).all(|(u, l)| u >= l)
}

/// Fidelity against `κ₁ = κ₂ = κ` for every scheme and gate.
pub fn sweep_decoherence(cfg: &ExperimentConfig, steps: usize, pool: &ThreadPool) -> Result<Outcome> {
    let d = cfg.section(&cfg.decoherence, "decoherence", "sweep-decoherence")?;
    let peak = mhz(cfg.drive.peak_mhz);
    let recipes = recipe_table(&d.schemes, &d.gates, cfg)?;
    let kappas = d.kappa_over_peak.values();
    let jobs: Vec<(usize, f64)> = (0..recipes.len()).flat_map(|r| kappas.iter().map(move |&k| (r, k))).collect();
    let fids = par_map(pool, &jobs, |&(r, k)| decoherence_fidelity(&recipes[r].recipe, k * peak, steps, d.grid_points))?;

    let mut report =
        SweepReport::new(&cfg.experiment, "sweep-decoherence", &["scheme", "gate", "kappa_over_peak", "fidelity"], steps);
    report.axes.insert("kappa_over_peak".into(), kappas.clone());
    report.note(format!("envelope {}, peak {} MHz, kappa1 = kappa2", cfg.drive.envelope, cfg.drive.peak_mhz));
    for (&(r, k), &f) in jobs.iter().zip(&fids) {
        report.push(vec![recipes[r].scheme.id().into(), recipes[r].gate.id().into(), k.into(), f.into()]);
    }
    let curves: Vec<&[f64]> = fids.chunks(kappas.len()).collect();
    for (r, entry) in recipes.iter().enumerate() {
        let k = key(entry.scheme, entry.gate);
        report.set(format!("{k}.duration_times_peak"), entry.recipe.duration() * peak);
        report.set(format!("{k}.fidelity_at_max_kappa"), *curves[r].last().expect("at least 2 points"));
        report.set(format!("{k}.fidelity_at_min_kappa"), curves[r][0]);
    }
    // Orderings over κ > 0, recorded rather than assumed.
    let positive: Vec<usize> = (0..kappas.len()).filter(|&i| kappas[i] > 0.0).collect();
    let curve = |s: Scheme, g: NamedGate| -> Option<Vec<f64>> {
        let r = recipes.iter().position(|x| x.scheme == s && x.gate == g)?;
        Some(positive.iter().map(|&i| curves[r][i]).collect())
    };
    for &g in &d.gates {
        if let (Some(n), Some(dy), Some(o)) = (curve(Scheme::Nsgp, g), curve(Scheme::Dynamical, g), curve(Scheme::Ossp, g)) {
            report.set(format!("ordering.{g}.nsgp_ge_dyn_ge_ossp"), is_ordered(&n, &dy) && is_ordered(&dy, &o));
            report.set(format!("ordering.{g}.nsgp_ge_others"), is_ordered(&n, &dy) && is_ordered(&n, &o));
        }
    }
    Ok(Outcome::new(report))
}

/// Fidelity over the `(δ, ε)` grid at fixed decoherence for every scheme and gate.
pub fn sweep_error_grid(cfg: &ExperimentConfig, steps: usize, pool: &ThreadPool) -> Result<Outcome> {
    let e = cfg.section(&cfg.error_grid, "error_grid", "sweep-error-grid")?;
    let peak = mhz(cfg.drive.peak_mhz);
    let kappa = e.kappa_over_peak * peak;
    let recipes = recipe_table(&e.schemes, &e.gates, cfg)?;
    let deltas = e.detuning_drift.values();
    let epsilons = e.amplitude_error.values();
    let cells = deltas.len() * epsilons.len();
    let mut jobs: Vec<(usize, f64, f64)> = Vec::with_capacity(recipes.len() * cells);
    for r in 0..recipes.len() {
        for &dl in &deltas {
            jobs.extend(epsilons.iter().map(|&ep| (r, dl, ep)));
        }
    }
    let fids = par_map(pool, &jobs, |&(r, dl, ep)| {
        error_grid_fidelity(&recipes[r].recipe, ErrorConfig::new(dl, ep), peak, kappa, steps, e.grid_points)
    })?;
    let origins = par_map(pool, &recipes, |x| decoherence_fidelity(&x.recipe, kappa, steps, e.grid_points))?;

    let mut report = SweepReport::new(
        &cfg.experiment,
        "sweep-error-grid",
        &["scheme", "gate", "detuning_drift", "amplitude_error", "fidelity"],
        steps,
    );
    report.axes.insert("detuning_drift".into(), deltas.clone());
    report.axes.insert("amplitude_error".into(), epsilons.clone());
    report.note(format!(
        "envelope {}, peak {} MHz, kappa = {} peak; detuning_drift in units of the peak Rabi frequency",
        cfg.drive.envelope, cfg.drive.peak_mhz, e.kappa_over_peak
    ));
    for (&(r, dl, ep), &f) in jobs.iter().zip(&fids) {
        report.push(vec![recipes[r].scheme.id().into(), recipes[r].gate.id().into(), dl.into(), ep.into(), f.into()]);
    }
    let mut means = Vec::with_capacity(recipes.len());
    for (r, entry) in recipes.iter().enumerate() {
        let block = &fids[r * cells..(r + 1) * cells];
        let mean = block.iter().sum::<f64>() / cells as f64;
        let min = block.iter().copied().fold(f64::INFINITY, f64::min);
        let k = key(entry.scheme, entry.gate);
        report.set(format!("{k}.mean"), mean);
        report.set(format!("{k}.min"), min);
        report.set(format!("{k}.origin"), origins[r]);
        means.push((entry.scheme, entry.gate, mean));
    }
    for &g in &e.gates {
        let mean_of = |s: Scheme| means.iter().find(|m| m.0 == s && m.1 == g).map(|m| m.2);
        if let Some(n) = mean_of(Scheme::Nsgp) {
            for s in [Scheme::Ossp, Scheme::Dynamical, Scheme::Longitude] {
                if let Some(m) = mean_of(s) {
                    report.set(format!("ordering.{g}.nsgp_mean_ge_{s}"), n >= m);
                }
            }
        }
    }
    Ok(Outcome::new(report))
}
