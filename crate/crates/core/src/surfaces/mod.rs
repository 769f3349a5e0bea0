//! Outcome-probability, EPV and uncertainty surfaces.
//!
//! Point evaluation mixes centre values with the fixed interpolation weights:
//! `P(s; x, y) = sum_k z_k(x, y) P_k(s)` and `EPV = sum_s P(s; x, y) points(s)`.

mod grid;
mod heatmap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::CentreSet;
use crate::mixture::OutcomeSimplex;
use crate::outcome::{NUM_OUTCOMES, POINTS};

pub use grid::{
    diff_grid, read_grid_csv, render_grid, render_surface, DiffGrid, DiffRow, GridRow, ModelSide,
    SurfaceGrid,
};
pub use heatmap::{
    density_histogram, write_density_csv, write_diff_pngs, write_grid_pngs, DensityBin,
};

/// How centre standard deviations are combined at a location.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SdFormula {
    /// `P_sd(s) = sqrt(sum_k z_k sd_k(s)^2)` and
    /// `EPV_sd = sqrt(sum_s P_sd(s)^2 points(s))`.
    #[default]
    Printed,
    /// Independent-error propagation: `sqrt(sum_k z_k^2 sd_k(s)^2)` and
    /// `sqrt(sum_s P_sd(s)^2 points(s)^2)`. Ignores covariances.
    Propagated,
}

impl SdFormula {
    pub fn as_str(self) -> &'static str {
        match self {
            SdFormula::Printed => "printed",
            SdFormula::Propagated => "propagated",
        }
    }
}

pub fn prob_at(
    centres: &CentreSet,
    mean: &[[f64; NUM_OUTCOMES]],
    x: f64,
    y: f64,
) -> Result<OutcomeSimplex> {
    let mut p = [0.0; NUM_OUTCOMES];
    for (k, w) in centres.support(x, y)?.iter() {
        for s in 0..NUM_OUTCOMES {
            p[s] += w * mean[k][s];
        }
    }
    Ok(OutcomeSimplex(p))
}

pub fn epv_at(centres: &CentreSet, mean: &[[f64; NUM_OUTCOMES]], x: f64, y: f64) -> Result<f64> {
    Ok(prob_at(centres, mean, x, y)?.epv())
}

pub fn prob_sd_at(
    centres: &CentreSet,
    std: &[[f64; NUM_OUTCOMES]],
    x: f64,
    y: f64,
    formula: SdFormula,
) -> Result<[f64; NUM_OUTCOMES]> {
    let mut v = [0.0; NUM_OUTCOMES];
    for (k, w) in centres.support(x, y)?.iter() {
        let w = match formula {
            SdFormula::Printed => w,
            SdFormula::Propagated => w * w,
        };
        for s in 0..NUM_OUTCOMES {
            v[s] += w * std[k][s] * std[k][s];
        }
    }
    Ok(v.map(f64::sqrt))
}

pub fn epv_sd_from_prob_sd(sd: &[f64; NUM_OUTCOMES], formula: SdFormula) -> f64 {
    sd.iter()
        .zip(POINTS)
        .map(|(s, pts)| match formula {
            SdFormula::Printed => s * s * pts,
            SdFormula::Propagated => s * s * pts * pts,
        })
        .sum::<f64>()
        .sqrt()
}

pub fn epv_sd_at(
    centres: &CentreSet,
    std: &[[f64; NUM_OUTCOMES]],
    x: f64,
    y: f64,
    formula: SdFormula,
) -> Result<f64> {
    Ok(epv_sd_from_prob_sd(
        &prob_sd_at(centres, std, x, y, formula)?,
        formula,
    ))
}
