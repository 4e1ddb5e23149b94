//! Simulation of the additive fault model `X = s + Z`: a deterministic train
//! of decaying oscillations `s` plus i.i.d. heavy-tailed noise `Z`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, Exp1, Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Seed;
use crate::signal::Signal;

/// Parameters of the cyclic impulsive component.
///
/// Each impulse is `B sin(2π f_c τ) exp(-d τ)` for `τ ≥ 0`, with onsets at
/// `phase_offset_s + m / fault_hz`. Overlapping tails add.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpulseTrainSpec {
    pub amplitude: f64,
    pub carrier_hz: f64,
    /// Informative band `[lo, hi]`; only used to score maps.
    pub band_hz: (f64, f64),
    pub decay: f64,
    pub fault_hz: f64,
    #[serde(default)]
    pub phase_offset_s: f64,
}

impl Default for ImpulseTrainSpec {
    /// Simulation setup of the reference study: 30 Hz fault, 3.5–6.5 kHz
    /// band with the carrier at its midpoint, `B = 45`, `d = 3000`.
    fn default() -> Self {
        Self {
            amplitude: 45.0,
            carrier_hz: 5000.0,
            band_hz: (3500.0, 6500.0),
            decay: 3000.0,
            fault_hz: 30.0,
            phase_offset_s: 0.0,
        }
    }
}

impl ImpulseTrainSpec {
    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn period_s(&self) -> f64 {
        1.0 / self.fault_hz
    }

    pub fn validate_intrinsic(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be positive and finite, got {v}")))
            }
        };
        // B = 0 is allowed: it switches the component off.
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::param("amplitude", format!("must be non-negative, got {}", self.amplitude)));
        }
        positive("carrier_hz", self.carrier_hz)?;
        positive("decay", self.decay)?;
        positive("fault_hz", self.fault_hz)?;
        if !(self.phase_offset_s >= 0.0 && self.phase_offset_s.is_finite()) {
            return Err(Error::param("phase_offset_s", "must be non-negative"));
        }
        Ok(())
    }

    /// Check the band invariants against a concrete sampling rate.
    pub fn validate_for_rate(&self, fs: f64) -> Result<()> {
        self.validate_intrinsic()?;
        let (lo, hi) = self.band_hz;
        if !(lo >= 0.0 && lo < hi) {
            return Err(Error::param("band_hz", format!("need 0 <= lo < hi, got [{lo}, {hi}]")));
        }
        if hi > fs / 2.0 {
            return Err(Error::param("band_hz", format!("upper edge {hi} Hz exceeds Nyquist {} Hz", fs / 2.0)));
        }
        if !(lo <= self.carrier_hz && self.carrier_hz <= hi) {
            return Err(Error::param("carrier_hz", format!("{} Hz lies outside the band [{lo}, {hi}]", self.carrier_hz)));
        }
        Ok(())
    }

    /// Impulse onset times (seconds) falling inside `[0, length / fs)`.
    pub fn onsets(&self, length: usize, fs: f64) -> Vec<f64> {
        let duration = length as f64 / fs;
        (0u64..)
            .map(|m| self.phase_offset_s + m as f64 / self.fault_hz)
            .take_while(|&t| t < duration)
            .collect()
    }
}

/// Evaluate the impulse train on `length` samples at rate `fs`.
pub fn gen_impulse_train(spec: &ImpulseTrainSpec, length: usize, fs: f64) -> Result<Signal> {
    if length == 0 {
        return Err(Error::param("length", "must be at least 1"));
    }
    if !(fs > 0.0 && fs.is_finite()) {
        return Err(Error::param("fs", format!("must be positive, got {fs}")));
    }
    spec.validate_intrinsic()?;
    if fs / spec.fault_hz < 2.0 {
        return Err(Error::param("fault_hz", format!("fs / f_f = {} is below 2", fs / spec.fault_hz)));
    }

    let onsets = spec.onsets(length, fs);
    let omega = 2.0 * PI * spec.carrier_hz;
    let mut out = vec![0.0; length];
    if spec.amplitude == 0.0 {
        return Signal::new(out, fs);
    }
    for (k, v) in out.iter_mut().enumerate() {
        let t = k as f64 / fs;
        let mut acc = 0.0;
        for &tm in onsets.iter().take_while(|&&tm| tm <= t) {
            let tau = t - tm;
            acc += spec.amplitude * (omega * tau).sin() * (-spec.decay * tau).exp();
        }
        *v = acc;
    }
    Signal::new(out, fs)
}

/// Gaussian mixture `Z = ξ + A K` with `ξ ~ N(0, D²)`, `A ~ U(0, a)` and
/// `K ∈ {-1, 0, 1}` with probabilities `{p/2, 1-p, p/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mixture {
    pub a: f64,
    pub p: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

/// Student's t with `nu` degrees of freedom, scaled by `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudentT {
    pub nu: f64,
    pub delta: f64,
}

/// Symmetric α-stable law with characteristic function `exp(-σ^α |z|^α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaStable {
    pub alpha: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum NoiseModel {
    Mixture(Mixture),
    StudentT(StudentT),
    AlphaStable(AlphaStable),
}

impl NoiseModel {
    pub fn mixture(a: f64, p: f64, d: f64) -> Self {
        NoiseModel::Mixture(Mixture { a, p, d })
    }

    pub fn student_t(nu: f64, delta: f64) -> Self {
        NoiseModel::StudentT(StudentT { nu, delta })
    }

    pub fn alpha_stable(alpha: f64, sigma: f64) -> Self {
        NoiseModel::AlphaStable(AlphaStable { alpha, sigma })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::Mixture(m) => m.validate(),
            NoiseModel::StudentT(t) => t.validate(),
            NoiseModel::AlphaStable(s) => s.validate(),
        }
    }

    /// Draw `length` i.i.d. samples.
    pub fn sample(&self, length: usize, seed: Seed) -> Result<Vec<f64>> {
        match self {
            NoiseModel::Mixture(m) => sample_gaussian_mixture(m, length, seed),
            NoiseModel::StudentT(t) => sample_student_t(t, length, seed),
            NoiseModel::AlphaStable(s) => sample_alpha_stable(s, length, seed),
        }
    }
}

fn finite_nonneg(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be non-negative and finite, got {v}")))
    }
}

fn finite_pos(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {v}")))
    }
}

impl Mixture {
    pub fn validate(&self) -> Result<()> {
        finite_nonneg("a", self.a)?;
        finite_nonneg("D", self.d)?;
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::param("p", format!("must lie in [0, 1], got {}", self.p)));
        }
        Ok(())
    }

    pub fn variance(&self) -> f64 {
        self.d * self.d + self.p * self.a * self.a / 3.0
    }
}

impl StudentT {
    pub fn validate(&self) -> Result<()> {
        finite_pos("nu", self.nu)?;
        finite_pos("delta", self.delta)
    }

    /// Infinite for `nu <= 2`.
    pub fn variance(&self) -> f64 {
        if self.nu > 2.0 {
            self.delta * self.delta * self.nu / (self.nu - 2.0)
        } else {
            f64::INFINITY
        }
    }
}

impl AlphaStable {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::param("alpha", format!("must lie in (0, 2], got {}", self.alpha)));
        }
        finite_pos("sigma", self.sigma)
    }
}

/// The Gaussian part `ξ` is drawn from `seed` itself and the impulsive part
/// `A K` from `seed.derive("mixture-impulse", 0)`, so `p = 0` reproduces the
/// plain Gaussian stream exactly.
pub fn sample_gaussian_mixture(model: &Mixture, length: usize, seed: Seed) -> Result<Vec<f64>> {
    model.validate()?;
    let mut gauss = seed.rng();
    let mut imp = seed.derive("mixture-impulse", 0).rng();
    let half_p = model.p / 2.0;
    Ok((0..length)
        .map(|_| {
            let xi: f64 = gauss.sample(StandardNormal);
            let u: f64 = imp.random();
            let k = if u < half_p {
                -1.0
            } else if u < model.p {
                1.0
            } else {
                0.0
            };
            let mut z = model.d * xi;
            if k != 0.0 {
                let amp = model.a * imp.random::<f64>();
                z += amp * k;
            }
            z
        })
        .collect())
}

/// Normal over root-scaled chi-square, times `delta`.
pub fn sample_student_t(model: &StudentT, length: usize, seed: Seed) -> Result<Vec<f64>> {
    model.validate()?;
    let chi = ChiSquared::new(model.nu).map_err(|e| Error::param("nu", e.to_string()))?;
    let mut rng = seed.rng();
    Ok((0..length)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            let c = chi.sample(&mut rng);
            model.delta * z / (c / model.nu).sqrt()
        })
        .collect())
}

/// Chambers–Mallows–Stuck transform for the symmetric case.
pub fn sample_alpha_stable(model: &AlphaStable, length: usize, seed: Seed) -> Result<Vec<f64>> {
    model.validate()?;
    let mut rng = seed.rng();
    Ok((0..length)
        .map(|_| {
            let u: f64 = rng.sample(Open01);
            let w: f64 = rng.sample(Exp1);
            model.sigma * cms_standard(model.alpha, PI * (u - 0.5), w)
        })
        .collect())
}

/// Unit-scale symmetric stable variate from `v ~ U(-π/2, π/2)`, `w ~ Exp(1)`.
pub(crate) fn cms_standard(alpha: f64, v: f64, w: f64) -> f64 {
    if alpha == 1.0 {
        return v.tan();
    }
    let av = alpha * v;
    let cos_v = v.cos();
    (av.sin() / cos_v.powf(1.0 / alpha)) * ((v - av).cos() / w).powf((1.0 - alpha) / alpha)
}

/// `X = s + Z`.
pub fn synthesize(spec: &ImpulseTrainSpec, model: &NoiseModel, length: usize, fs: f64, seed: Seed) -> Result<Signal> {
    spec.validate_for_rate(fs)?;
    let train = gen_impulse_train(spec, length, fs)?;
    let noise = model.sample(length, seed)?;
    let samples = train.samples().iter().zip(&noise).map(|(s, z)| s + z).collect();
    Signal::new(samples, fs)
}

/// Add an impulse train at the signal's own rate and length.
pub fn inject_impulses(signal: &Signal, spec: &ImpulseTrainSpec) -> Result<Signal> {
    spec.validate_for_rate(signal.fs())?;
    let train = gen_impulse_train(spec, signal.len(), signal.fs())?;
    signal.add(&train)
}
