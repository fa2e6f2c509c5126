use serde::{Deserialize, Serialize};

use super::GateRecipe;
use crate::path::DriveSchedule;
use crate::quadrature::uniform_nodes;

/// One drive segment with its closed-form parameters and sampled waveforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSegment {
    pub shape: String,
    pub duration: f64,
    pub drive: DriveSchedule,
    /// Present when the detuning is constant.
    pub detuning: Option<f64>,
    pub time: Vec<f64>,
    pub omega: Vec<f64>,
    pub detuning_samples: Vec<f64>,
    pub phase: Vec<f64>,
}

/// JSON interchange form of a recipe. Matrices are `[row][col] = [re, im]`; times in µs,
/// frequencies in rad/µs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecipeDocument {
    pub scheme: String,
    pub label: String,
    pub duration: f64,
    pub pulse_area: f64,
    pub rz_prefix: Option<f64>,
    pub embedding: Option<[usize; 2]>,
    pub target: Vec<Vec<[f64; 2]>>,
    pub segments: Vec<SampledSegment>,
}

impl RecipeDocument {
    /// Samples every segment at `samples_per_segment` uniform points including both ends.
    pub fn from_recipe(recipe: &GateRecipe, samples_per_segment: usize) -> Self {
        let segments = recipe
            .segments
            .iter()
            .map(|d| {
                let time: Vec<f64> = uniform_nodes(0.0, d.duration(), samples_per_segment).collect();
                SampledSegment {
                    shape: d.shape_id().to_string(),
                    duration: d.duration(),
                    drive: *d,
                    detuning: d.detuning.is_constant().then_some(d.detuning.offset),
                    omega: time.iter().map(|&t| d.omega(t)).collect(),
                    detuning_samples: time.iter().map(|&t| d.detuning(t)).collect(),
                    phase: time.iter().map(|&t| d.phase(t)).collect(),
                    time,
                }
            })
            .collect();
        let target = (0..recipe.target.nrows())
            .map(|i| (0..recipe.target.ncols()).map(|j| [recipe.target[(i, j)].re, recipe.target[(i, j)].im]).collect())
            .collect();
        Self {
            scheme: recipe.scheme.id().to_string(),
            label: recipe.label.clone(),
            duration: recipe.duration(),
            pulse_area: super::pulse_area(recipe),
            rz_prefix: recipe.rz_prefix,
            embedding: recipe.embedding,
            target,
            segments,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
