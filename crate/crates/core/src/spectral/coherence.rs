use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::stft::{check_map_input, SegmentDft};
use super::AcpConfig;
use crate::error::{Error, Result};
use crate::estimators::{estimate, kendall_rho_fast, EstimatorKind, PairedSample};
use crate::signal::Signal;

/// Bi-frequency coherence map `|γ(f, ε)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScMap {
    /// `[f bin, ε bin]`, finite and non-negative.
    pub values: Array2<f64>,
    pub f_grid: Vec<f64>,
    pub eps_grid: Vec<f64>,
    pub estimator: EstimatorKind,
    pub rescaled: bool,
    /// Cells forced to 0 because their statistic was undefined.
    pub degenerate_cells: usize,
}

impl ScMap {
    pub fn new(values: Array2<f64>, f_grid: Vec<f64>, eps_grid: Vec<f64>, estimator: EstimatorKind) -> Result<Self> {
        if values.dim() != (f_grid.len(), eps_grid.len()) {
            return Err(Error::InvalidInput(format!(
                "map of shape {:?} does not match grids {} x {}",
                values.dim(),
                f_grid.len(),
                eps_grid.len()
            )));
        }
        if values.is_empty() {
            return Err(Error::InvalidInput("empty map".into()));
        }
        if !values.iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(Error::InvalidInput("map cells must be finite and non-negative".into()));
        }
        Ok(Self { values, f_grid, eps_grid, estimator, rescaled: false, degenerate_cells: 0 })
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.mean().unwrap_or(0.0)
    }

    pub fn eps_index(&self, eps: f64) -> Option<usize> {
        self.eps_grid.iter().position(|&e| (e - eps).abs() < 1e-9)
    }
}

/// Divide every cell by the global maximum. All-zero maps are returned
/// unchanged (but flagged as rescaled).
pub fn rescale_map(mut m: ScMap) -> ScMap {
    let max = m.max();
    if max > 0.0 {
        m.values.mapv_inplace(|v| v / max);
    }
    m.rescaled = true;
    m
}

/// Rescaled spectral-coherence map for one estimator.
pub fn robust_spectral_coherence(x: &Signal, cfg: &AcpConfig, kind: &EstimatorKind) -> Result<ScMap> {
    robust_spectral_coherence_raw(x, cfg, kind).map(rescale_map)
}

/// Spectral-coherence map before the final rescaling.
pub fn robust_spectral_coherence_raw(x: &Signal, cfg: &AcpConfig, kind: &EstimatorKind) -> Result<ScMap> {
    let mut maps = coherence_maps(x, cfg, std::slice::from_ref(kind))?;
    Ok(maps.pop().expect("one map per estimator"))
}

/// Rescaled maps for several estimators sharing one pass of STFT slices.
pub fn robust_spectral_coherence_multi(x: &Signal, cfg: &AcpConfig, kinds: &[EstimatorKind]) -> Result<Vec<ScMap>> {
    Ok(coherence_maps(x, cfg, kinds)?.into_iter().map(rescale_map).collect())
}

enum Cell {
    Value(f64),
    Degenerate,
}

fn coherence_maps(x: &Signal, cfg: &AcpConfig, kinds: &[EstimatorKind]) -> Result<Vec<ScMap>> {
    check_map_input(x, cfg)?;
    for kind in kinds {
        kind.validate()?;
    }
    let k = cfg.segment_count(x.len());
    if k < 2 {
        return Err(Error::InvalidInput(format!("only {k} STFT segment(s); need at least 2")));
    }
    let dft = SegmentDft::new(cfg)?;
    let f_grid = cfg.f_grid(x.fs());
    let eps_grid = cfg.eps_grid();
    let bins = cfg.freq_bins();

    let mut values: Vec<Array2<f64>> = kinds.iter().map(|_| Array2::zeros((bins, eps_grid.len()))).collect();
    let mut degenerate = vec![0usize; kinds.len()];

    for (col, &eps) in eps_grid.iter().enumerate() {
        let xw = dft.slices(x.samples(), x.fs(), eps);
        let yw = dft.slices(x.samples(), x.fs(), -eps);
        for (m, kind) in kinds.iter().enumerate() {
            let cells: Vec<Cell> = (0..bins)
                .into_par_iter()
                .map(|j| {
                    let xr = xw.row(j);
                    let yr = yw.row(j);
                    cell(kind, yr.as_slice().expect("row-major"), xr.as_slice().expect("row-major"), cfg.fast_kendall)
                })
                .collect::<Result<_>>()?;
            for (j, c) in cells.into_iter().enumerate() {
                values[m][[j, col]] = match c {
                    Cell::Value(v) => v,
                    Cell::Degenerate => {
                        degenerate[m] += 1;
                        0.0
                    }
                };
            }
        }
    }

    kinds
        .iter()
        .zip(values)
        .zip(degenerate)
        .map(|((kind, v), deg)| {
            if deg > 0 {
                log::warn!("{kind}: {deg} degenerate cell(s) set to 0");
            }
            let mut map = ScMap::new(v, f_grid.clone(), eps_grid.clone(), *kind)?;
            map.degenerate_cells = deg;
            Ok(map)
        })
        .collect()
}

/// One map cell from the `Y_w` and `X_w` rows of a frequency bin. The
/// estimator conjugates its second argument, so the numerator targets
/// `E[Y conj(X)]`, i.e. content at `f + ε/2` against `f - ε/2`.
fn cell(kind: &EstimatorKind, y: &[Complex64], x: &[Complex64], fast_kendall: bool) -> Result<Cell> {
    let stat = |a: &[Complex64], b: &[Complex64]| -> Result<Option<Complex64>> {
        if fast_kendall && matches!(kind, EstimatorKind::Kendall) {
            return Ok(Some(crate::estimators::kendall::kendall_transform(kendall_rho_fast(a, b))));
        }
        match estimate(kind, &PairedSample::new(a, b)?) {
            Ok(v) => Ok(Some(v)),
            Err(Error::DegenerateInput(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let Some(s) = stat(y, x)? else {
        return Ok(Cell::Degenerate);
    };
    let numerator = s.norm_sqr();
    let value = if kind.self_normalizing() {
        numerator
    } else {
        let (Some(px), Some(py)) = (stat(x, x)?, stat(y, y)?) else {
            return Ok(Cell::Degenerate);
        };
        let denom = px.norm() * py.norm();
        if !(denom > 0.0) {
            return Ok(Cell::Degenerate);
        }
        numerator / denom
    };
    if value.is_finite() {
        Ok(Cell::Value(value))
    } else {
        Ok(Cell::Degenerate)
    }
}
