//! Scores for spectral-coherence maps.
//!
//! - amplitude ratio `R(ε)`: mean of the map over the informative band in
//!   column `ε`, divided by the mean of the whole map;
//! - performance indicator `τ`: share of `Σ R(ε)` carried by the cyclic
//!   frequencies (multiples of the fault frequency);
//! - column profile `R'(ε)`: plain column means, for signals without
//!   periodicity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::spectral::ScMap;

const GRID_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsValue {
    pub eps: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimator: Option<EstimatorKind>,
    pub band: (f64, f64),
    pub fault_hz: f64,
    pub cyclic_eps: Vec<f64>,
    pub tau_gamma: f64,
    pub amp_ratio: Vec<EpsValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column_profile: Option<Vec<EpsValue>>,
}

impl MetricsReport {
    pub fn compute(map: &ScMap, band: (f64, f64), fault_hz: f64, with_profile: bool) -> Result<Self> {
        let ratios = amplitude_ratio(map, band)?;
        let cyclic = cyclic_frequencies(fault_hz, &map.eps_grid)?;
        let tau = performance_indicator(&ratios, &cyclic)?;
        Ok(Self {
            estimator: Some(map.estimator),
            band,
            fault_hz,
            cyclic_eps: cyclic,
            tau_gamma: tau,
            amp_ratio: ratios,
            column_profile: with_profile.then(|| column_mean_profile(map)),
        })
    }

    /// The `k` cyclic frequencies with the largest amplitude ratio, in
    /// decreasing order of `R`.
    pub fn top_eps(&self, k: usize) -> Vec<f64> {
        top_eps(&self.amp_ratio, k)
    }
}

/// Largest-`value` entries first; ties keep grid order.
pub fn top_eps(points: &[EpsValue], k: usize) -> Vec<f64> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| b.value.total_cmp(&a.value));
    sorted.into_iter().take(k).map(|p| p.eps).collect()
}

/// `max / mean` of a profile; 0 for an all-zero profile.
pub fn dispersion(points: &[EpsValue]) -> f64 {
    let mean = points.iter().map(|p| p.value).sum::<f64>() / points.len() as f64;
    let max = points.iter().map(|p| p.value).fold(f64::MIN, f64::max);
    if mean > 0.0 {
        max / mean
    } else {
        0.0
    }
}

fn grid_step(eps_grid: &[f64]) -> Option<f64> {
    eps_grid.windows(2).map(|w| w[1] - w[0]).reduce(f64::min)
}

/// Positive multiples of `fault_hz` matched to the nearest grid point within
/// half a grid step.
pub fn cyclic_frequencies(fault_hz: f64, eps_grid: &[f64]) -> Result<Vec<f64>> {
    if !(fault_hz > 0.0 && fault_hz.is_finite()) {
        return Err(Error::param("fault_hz", format!("must be positive, got {fault_hz}")));
    }
    let Some(&last) = eps_grid.last() else {
        return Ok(Vec::new());
    };
    let tol = grid_step(eps_grid).map_or(GRID_TOL, |s| s / 2.0 + GRID_TOL);
    let mut out: Vec<f64> = Vec::new();
    for m in 1u32.. {
        let target = m as f64 * fault_hz;
        if target > last + tol {
            break;
        }
        let nearest = eps_grid
            .iter()
            .copied()
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
            .expect("non-empty grid");
        if (nearest - target).abs() <= tol && out.last() != Some(&nearest) {
            out.push(nearest);
        }
    }
    Ok(out)
}

/// Band-to-map mean ratio for every ε column. The band is closed: bins with
/// centre frequency in `[lo, hi]` belong to it.
pub fn amplitude_ratio(m: &ScMap, band: (f64, f64)) -> Result<Vec<EpsValue>> {
    let (lo, hi) = band;
    let rows: Vec<usize> = m
        .f_grid
        .iter()
        .enumerate()
        .filter(|(_, &f)| lo <= f && f <= hi)
        .map(|(j, _)| j)
        .collect();
    if rows.is_empty() {
        return Err(Error::param("band", format!("[{lo}, {hi}] Hz contains no frequency bin")));
    }
    let overall = m.mean();
    if !(overall > 0.0) {
        return Err(Error::DegenerateInput("map is identically zero".into()));
    }
    Ok(m.eps_grid
        .iter()
        .enumerate()
        .map(|(col, &eps)| {
            let band_mean = rows.iter().map(|&j| m.values[[j, col]]).sum::<f64>() / rows.len() as f64;
            EpsValue { eps, value: band_mean / overall }
        })
        .collect())
}

/// Share of the total amplitude ratio carried by the cyclic frequencies.
pub fn performance_indicator(ratios: &[EpsValue], cyclic_eps: &[f64]) -> Result<f64> {
    if ratios.is_empty() {
        return Err(Error::InvalidInput("no amplitude ratios".into()));
    }
    let mut cyclic_sum = 0.0;
    for &eps in cyclic_eps {
        let point = ratios
            .iter()
            .find(|p| (p.eps - eps).abs() < GRID_TOL)
            .ok_or_else(|| Error::InvalidInput(format!("cyclic frequency {eps} Hz is not on the ratio grid")))?;
        cyclic_sum += point.value;
    }
    let total: f64 = ratios.iter().map(|p| p.value).sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateInput("amplitude ratios sum to zero".into()));
    }
    Ok(cyclic_sum / total)
}

/// Mean over all frequency bins of each ε column.
pub fn column_mean_profile(m: &ScMap) -> Vec<EpsValue> {
    let rows = m.values.nrows() as f64;
    m.eps_grid
        .iter()
        .enumerate()
        .map(|(col, &eps)| EpsValue { eps, value: m.values.column(col).sum() / rows })
        .collect()
}
