use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    /// Symmetric Hann taper.
    #[default]
    Hann,
}

impl WindowKind {
    pub fn coefficients(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            WindowKind::Hann => hann_window(n),
        }
    }
}

/// Symmetric Hann window, `0.5 (1 - cos(2π k / (n - 1)))`.
pub fn hann_window(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::param("n", format!("window length must be at least 2, got {n}")));
    }
    let denom = (n - 1) as f64;
    Ok((0..n).map(|k| 0.5 * (1.0 - (2.0 * PI * k as f64 / denom).cos())).collect())
}
