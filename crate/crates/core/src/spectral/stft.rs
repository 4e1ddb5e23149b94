use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{s, Array2};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::AcpConfig;
use crate::error::{Error, Result};
use crate::signal::Signal;

/// Windowed, zero-padded DFT of every hop of a (possibly demodulated) signal.
pub(crate) struct SegmentDft {
    fft: Arc<dyn Fft<f64>>,
    window: Vec<f64>,
    nfft: usize,
    hop: usize,
}

impl SegmentDft {
    pub(crate) fn new(cfg: &AcpConfig) -> Result<Self> {
        cfg.validate_stft()?;
        let fft = FftPlanner::new().plan_fft_forward(cfg.nfft);
        Ok(Self { fft, window: cfg.window.coefficients(cfg.win_len)?, nfft: cfg.nfft, hop: cfg.hop() })
    }

    /// `nfft x K` matrix whose column `i` is the DFT of segment `i` of
    /// `x[t] exp(i π shift_hz t / fs)`, with `t` the global sample index.
    pub(crate) fn slices(&self, x: &[f64], fs: f64, shift_hz: f64) -> Array2<Complex64> {
        let n = self.window.len();
        let segments = if x.len() < n { 0 } else { (x.len() - (n - self.hop)) / self.hop };
        let rate = PI * shift_hz / fs;
        let mut out = Array2::<Complex64>::zeros((self.nfft, segments));
        let mut buf = vec![Complex64::new(0.0, 0.0); self.nfft];
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.fft.get_inplace_scratch_len()];
        for i in 0..segments {
            let start = i * self.hop;
            for (k, slot) in buf.iter_mut().enumerate() {
                *slot = if k < n {
                    let t = start + k;
                    let v = self.window[k] * x[t];
                    if shift_hz == 0.0 {
                        Complex64::new(v, 0.0)
                    } else {
                        Complex64::from_polar(v, rate * t as f64)
                    }
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            self.fft.process_with_scratch(&mut buf, &mut scratch);
            out.column_mut(i).iter_mut().zip(&buf).for_each(|(o, v)| *o = *v);
        }
        out
    }
}

fn check_signal(x: &Signal, cfg: &AcpConfig) -> Result<()> {
    cfg.validate_stft()?;
    if x.len() < cfg.win_len {
        return Err(Error::InvalidInput(format!(
            "signal of {} samples is shorter than one window of {}",
            x.len(),
            cfg.win_len
        )));
    }
    if !x.samples().iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("signal contains non-finite samples".into()));
    }
    Ok(())
}

/// Demodulated STFT slices `(X_w, Y_w)`, each `nfft x K`.
///
/// `X_w` is computed from `x exp(+i π ε t / fs)` and `Y_w` from
/// `x exp(-i π ε t / fs)`, so bin `f` of `X_w` carries the original content
/// at `f - ε/2` and bin `f` of `Y_w` the content at `f + ε/2`.
pub fn demodulated_spectral_slices(
    x: &Signal,
    eps: f64,
    cfg: &AcpConfig,
) -> Result<(Array2<Complex64>, Array2<Complex64>)> {
    check_signal(x, cfg)?;
    let dft = SegmentDft::new(cfg)?;
    Ok((dft.slices(x.samples(), x.fs(), eps), dft.slices(x.samples(), x.fs(), -eps)))
}

pub(crate) fn check_map_input(x: &Signal, cfg: &AcpConfig) -> Result<()> {
    check_signal(x, cfg)?;
    cfg.validate(x.fs())
}

/// STFT magnitudes for bins `0 ..= nfft/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    /// `[frequency bin, frame]`
    pub magnitudes: Array2<f64>,
    pub f_grid: Vec<f64>,
    /// Frame centres in seconds.
    pub t_grid: Vec<f64>,
    pub config: AcpConfig,
}

pub fn spectrogram(x: &Signal, cfg: &AcpConfig) -> Result<Spectrogram> {
    check_signal(x, cfg)?;
    let dft = SegmentDft::new(cfg)?;
    let full = dft.slices(x.samples(), x.fs(), 0.0);
    let bins = cfg.freq_bins();
    let magnitudes = full.slice(s![..bins, ..]).mapv(|z| z.norm());
    let frames = magnitudes.ncols();
    let t_grid = (0..frames)
        .map(|i| (i * cfg.hop()) as f64 / x.fs() + (cfg.win_len as f64 / 2.0) / x.fs())
        .collect();
    Ok(Spectrogram { magnitudes, f_grid: cfg.f_grid(x.fs()), t_grid, config: cfg.clone() })
}
