use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniformly sampled real-valued time series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    samples: Vec<f64>,
    fs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Signal {
    pub fn new(samples: Vec<f64>, fs: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("signal has no samples".into()));
        }
        if !(fs > 0.0 && fs.is_finite()) {
            return Err(Error::param("fs", format!("sampling rate must be positive and finite, got {fs}")));
        }
        Ok(Self { samples, fs, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; a signal holds at least one sample.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    /// Element-wise sum with another signal of the same rate and length.
    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.check_compatible(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(Signal { samples, fs: self.fs, label: self.label.clone() })
    }

    /// Element-wise difference `self - other`.
    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        self.check_compatible(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        Ok(Signal { samples, fs: self.fs, label: self.label.clone() })
    }

    /// Multiply every sample by `factor`.
    pub fn scaled(&self, factor: f64) -> Signal {
        Signal { samples: self.samples.iter().map(|v| v * factor).collect(), fs: self.fs, label: self.label.clone() }
    }

    fn check_compatible(&self, other: &Signal) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::InvalidInput(format!("length mismatch: {} vs {}", self.len(), other.len())));
        }
        if self.fs != other.fs {
            return Err(Error::InvalidInput(format!("sampling rate mismatch: {} vs {}", self.fs, other.fs)));
        }
        Ok(())
    }
}
