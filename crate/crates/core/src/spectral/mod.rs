//! Short-time Fourier analysis and the averaged-cyclic-periodogram spectral
//! coherence with a pluggable dependence estimator.

mod coherence;
mod stft;
mod window;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use coherence::{
    rescale_map, robust_spectral_coherence, robust_spectral_coherence_multi, robust_spectral_coherence_raw, ScMap,
};
pub use stft::{demodulated_spectral_slices, spectrogram, Spectrogram};
pub use window::{hann_window, WindowKind};

/// Parameters of the STFT and of the cyclic-frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcpConfig {
    pub nfft: usize,
    pub win_len: usize,
    #[serde(default)]
    pub window: WindowKind,
    pub nover: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    #[serde(default = "default_eps_step")]
    pub eps_step: f64,
    /// Evaluate Kendall cells with the single-precision SIMD pair kernel.
    #[serde(default = "default_true")]
    pub fast_kendall: bool,
}

fn default_eps_step() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

impl Default for AcpConfig {
    /// 512-point DFT, Hann window of 128 samples with 110 samples of
    /// overlap, cyclic frequencies 3..=100 Hz in 1 Hz steps.
    fn default() -> Self {
        Self {
            nfft: 512,
            win_len: 128,
            window: WindowKind::Hann,
            nover: 110,
            eps_min: 3.0,
            eps_max: 100.0,
            eps_step: 1.0,
            fast_kendall: true,
        }
    }
}

impl AcpConfig {
    pub fn hop(&self) -> usize {
        self.win_len - self.nover
    }

    /// Number of STFT segments, `floor((L - nover) / (n - nover))`.
    pub fn segment_count(&self, len: usize) -> usize {
        if len < self.win_len {
            return 0;
        }
        (len - self.nover) / self.hop()
    }

    /// Number of retained frequency bins, `0 ..= nfft / 2`.
    pub fn freq_bins(&self) -> usize {
        self.nfft / 2 + 1
    }

    pub fn f_grid(&self, fs: f64) -> Vec<f64> {
        (0..self.freq_bins()).map(|j| j as f64 * fs / self.nfft as f64).collect()
    }

    pub fn eps_grid(&self) -> Vec<f64> {
        let count = ((self.eps_max - self.eps_min) / self.eps_step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.eps_min + k as f64 * self.eps_step).collect()
    }

    /// Checks that do not depend on the signal.
    pub fn validate_stft(&self) -> Result<()> {
        if self.win_len < 2 {
            return Err(Error::param("win_len", format!("window length must be at least 2, got {}", self.win_len)));
        }
        if self.nover >= self.win_len {
            return Err(Error::param("nover", format!("overlap {} must be below the window length {}", self.nover, self.win_len)));
        }
        if self.win_len > self.nfft {
            return Err(Error::param("nfft", format!("nfft {} is shorter than the window {}", self.nfft, self.win_len)));
        }
        Ok(())
    }

    /// Full check against a sampling rate.
    pub fn validate(&self, fs: f64) -> Result<()> {
        self.validate_stft()?;
        if !(self.eps_step > 0.0 && self.eps_step.is_finite()) {
            return Err(Error::param("eps_step", format!("must be positive, got {}", self.eps_step)));
        }
        if !(self.eps_min >= 0.0 && self.eps_min <= self.eps_max) {
            return Err(Error::param("eps_min", format!("need 0 <= eps_min <= eps_max, got [{}, {}]", self.eps_min, self.eps_max)));
        }
        if self.eps_max > fs / 2.0 {
            return Err(Error::param("eps_max", format!("{} Hz exceeds Nyquist {} Hz", self.eps_max, fs / 2.0)));
        }
        Ok(())
    }

    /// Cyclic-frequency resolution requirement `fs / f_f > n`.
    pub fn check_fault_frequency(&self, fs: f64, fault_hz: f64) -> Result<()> {
        if !(fault_hz > 0.0) || fs / fault_hz <= self.win_len as f64 {
            return Err(Error::param(
                "fault_hz",
                format!("fs / f_f = {} must exceed the window length {}", fs / fault_hz, self.win_len),
            ));
        }
        Ok(())
    }
}
