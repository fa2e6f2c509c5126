use std::f64::consts::PI;

use geogate::gates::{pulse_area, RecipeDocument};
use geogate::linalg::phase_aligned_distance;
use geogate::quadrature::{simpson, DEFAULT_NODES};

use super::{build_recipe, Outcome};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::SweepReport;

/// Recipe JSON plus the sampled pulse. Segments are sampled on their own grids including
/// both ends, so a boundary time appears twice and phase jumps show between those rows.
pub fn synthesize(cfg: &ExperimentConfig, steps: usize) -> Result<Outcome> {
    let s = cfg.section(&cfg.synthesize, "synthesize", "synthesize")?;
    let recipe = build_recipe(s.scheme, s.gate, &cfg.drive)?;
    let per_segment = s.samples.div_ceil(recipe.segments.len()).max(2);
    let doc = RecipeDocument::from_recipe(&recipe, per_segment);

    let mut report = SweepReport::new(&cfg.experiment, "synthesize", &["segment", "t", "omega", "detuning", "phase"], steps);
    report.note("units: t in us; omega and detuning in rad/us; phase in rad");
    let mut start = 0.0;
    for (k, seg) in doc.segments.iter().enumerate() {
        for i in 0..seg.time.len() {
            report.push(vec![
                k.to_string().into(),
                (start + seg.time[i]).into(),
                seg.omega[i].into(),
                seg.detuning_samples[i].into(),
                seg.phase[i].into(),
            ]);
        }
        start += seg.duration;
    }

    let areas: Vec<f64> =
        recipe.segments.iter().map(|d| simpson(|t| d.omega(t), 0.0, d.duration(), DEFAULT_NODES)).collect();
    let simulated = recipe.simulate(steps)?;
    report.set("scheme", s.scheme.id());
    report.set("gate", s.gate.id());
    report.set("label", recipe.label.clone());
    report.set("envelope", cfg.drive.envelope.id());
    report.set("peak_mhz", cfg.drive.peak_mhz);
    report.set("duration_us", recipe.duration());
    report.set("segments", recipe.segments.len());
    report.set("segment_drive_areas", areas.clone());
    report.set("segment_drive_areas_over_pi", areas.iter().map(|a| a / PI).collect::<Vec<_>>());
    report.set("pulse_area", pulse_area(&recipe));
    report.set("pulse_area_over_pi", pulse_area(&recipe) / PI);
    report.set("design_pulse_area", recipe.pulse_area);
    report.set("rz_prefix", recipe.rz_prefix);
    report.set("closed_system_distance", phase_aligned_distance(&simulated, &recipe.target));

    let mut outcome = Outcome::new(report);
    outcome.artifacts.push((format!("{}.recipe.json", cfg.experiment), doc.to_json()?));
    Ok(outcome)
}
