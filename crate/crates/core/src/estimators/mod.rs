//! Dependence estimators for paired complex samples.
//!
//! Every estimator takes two equal-length vectors `w1`, `w2` (treated as
//! zero-mean, no internal centering) and targets `E[w1 conj(w2)]` or its
//! normalised form. Real data embeds with zero imaginary parts, in which case
//! each estimator reduces to its classical real-valued definition.

pub(crate) mod kendall;
mod ranks;
mod trimmed;

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use kendall::kendall_rho_fast;
pub use kendall::{kendall_corr, kendall_rho, kendall_rho_reference};
pub use ranks::{centered_ranks, spearman_corr, spearman_rho};
pub use trimmed::{trimmed_cov, trimming_count};

/// Constant used to map Spearman's rho onto a Pearson correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpearmanTransform {
    /// `2 sin(π ρ / 6)`, exact for Gaussian data and equal to 1 at `ρ = 1`.
    #[default]
    Standard,
    /// `sin(2π ρ / 6)`, kept for reproduction studies.
    Printed,
}

/// Which estimator feeds the spectral-coherence numerator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimatorKind {
    #[serde(rename = "acvf")]
    SampleAcvf,
    #[serde(rename = "acf")]
    SampleAcf,
    Trimmed { c: f64 },
    Kendall,
    Spearman {
        #[serde(default)]
        transform: SpearmanTransform,
    },
    Ncv,
}

impl EstimatorKind {
    pub const IDS: [&'static str; 6] = ["acvf", "acf", "trimmed", "kendall", "spearman", "ncv"];

    pub fn spearman() -> Self {
        EstimatorKind::Spearman { transform: SpearmanTransform::Standard }
    }

    pub fn trimmed(c: f64) -> Result<Self> {
        let kind = EstimatorKind::Trimmed { c };
        kind.validate()?;
        Ok(kind)
    }

    /// Stable identifier used on the command line and in result files.
    pub fn id(&self) -> &'static str {
        match self {
            EstimatorKind::SampleAcvf => "acvf",
            EstimatorKind::SampleAcf => "acf",
            EstimatorKind::Trimmed { .. } => "trimmed",
            EstimatorKind::Kendall => "kendall",
            EstimatorKind::Spearman { .. } => "spearman",
            EstimatorKind::Ncv => "ncv",
        }
    }

    /// Whether the estimator already yields a correlation, so map cells need
    /// no zero-cycle power normalisation.
    pub fn self_normalizing(&self) -> bool {
        !matches!(self, EstimatorKind::SampleAcvf | EstimatorKind::Trimmed { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if let EstimatorKind::Trimmed { c } = *self {
            if !(0.0..0.5).contains(&c) {
                return Err(Error::param("c", format!("trimming constant must lie in [0, 0.5), got {c}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorKind::Trimmed { c } => write!(f, "trimmed:{c}"),
            EstimatorKind::Spearman { transform: SpearmanTransform::Printed } => write!(f, "spearman:printed"),
            other => f.write_str(other.id()),
        }
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    /// Accepts the bare identifiers plus `trimmed:<c>` and `spearman:printed`.
    /// A bare `trimmed` uses `c = 0.015`.
    fn from_str(s: &str) -> Result<Self> {
        let (id, arg) = match s.split_once(':') {
            Some((id, arg)) => (id.trim(), Some(arg.trim())),
            None => (s.trim(), None),
        };
        let kind = match (id, arg) {
            ("acvf", None) => EstimatorKind::SampleAcvf,
            ("acf", None) => EstimatorKind::SampleAcf,
            ("kendall", None) => EstimatorKind::Kendall,
            ("ncv", None) => EstimatorKind::Ncv,
            ("spearman", None | Some("standard")) => EstimatorKind::spearman(),
            ("spearman", Some("printed")) => EstimatorKind::Spearman { transform: SpearmanTransform::Printed },
            ("trimmed", None) => EstimatorKind::Trimmed { c: 0.015 },
            ("trimmed", Some(c)) => EstimatorKind::Trimmed {
                c: c.parse().map_err(|_| Error::param("c", format!("cannot parse trimming constant `{c}`")))?,
            },
            _ => {
                return Err(Error::param(
                    "estimator",
                    format!("unknown estimator `{s}`; expected one of {}", EstimatorKind::IDS.join(", ")),
                ))
            }
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// Two equal-length complex vectors, `N >= 2`, all entries finite.
#[derive(Debug, Clone)]
pub struct PairedSample<'a> {
    w1: Cow<'a, [Complex64]>,
    w2: Cow<'a, [Complex64]>,
}

impl<'a> PairedSample<'a> {
    pub fn new(w1: &'a [Complex64], w2: &'a [Complex64]) -> Result<Self> {
        Self::checked(Cow::Borrowed(w1), Cow::Borrowed(w2))
    }

    pub fn from_real(w1: &[f64], w2: &[f64]) -> Result<PairedSample<'static>> {
        let lift = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
        PairedSample::checked(Cow::Owned(lift(w1)), Cow::Owned(lift(w2)))
    }

    pub fn from_vecs(w1: Vec<Complex64>, w2: Vec<Complex64>) -> Result<PairedSample<'static>> {
        PairedSample::checked(Cow::Owned(w1), Cow::Owned(w2))
    }

    fn checked(w1: Cow<'a, [Complex64]>, w2: Cow<'a, [Complex64]>) -> Result<Self> {
        if w1.len() != w2.len() {
            return Err(Error::InvalidInput(format!("length mismatch: {} vs {}", w1.len(), w2.len())));
        }
        if w1.len() < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 observations, got {}", w1.len())));
        }
        if !w1.iter().chain(w2.iter()).all(|z| z.is_finite()) {
            return Err(Error::InvalidInput("non-finite observation".into()));
        }
        Ok(Self { w1, w2 })
    }

    pub fn w1(&self) -> &[Complex64] {
        &self.w1
    }

    pub fn w2(&self) -> &[Complex64] {
        &self.w2
    }

    pub fn len(&self) -> usize {
        self.w1.len()
    }

    /// Always false; construction requires two or more observations.
    pub fn is_empty(&self) -> bool {
        self.w1.is_empty()
    }

    /// True when both vectors have zero imaginary parts throughout.
    pub fn is_real(&self) -> bool {
        self.w1.iter().chain(self.w2.iter()).all(|z| z.im == 0.0)
    }

    /// The same pair with `w1` and `w2` swapped.
    pub fn swapped(&self) -> PairedSample<'_> {
        PairedSample { w1: Cow::Borrowed(&self.w2), w2: Cow::Borrowed(&self.w1) }
    }
}

/// Complex sign `z / |z|`, with `sgn(0) = 0`.
#[inline]
pub(crate) fn csgn(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z.unscale(r)
    }
}

/// Sample covariance `(1/N) Σ w1 conj(w2)`.
pub fn sample_cov(s: &PairedSample<'_>) -> Complex64 {
    let sum: Complex64 = s.w1.iter().zip(s.w2.iter()).map(|(a, b)| a * b.conj()).sum();
    sum / s.len() as f64
}

/// Sample correlation: covariance over `(1/N) sqrt(Σ|w1|² Σ|w2|²)`.
pub fn sample_corr(s: &PairedSample<'_>) -> Result<Complex64> {
    let e1: f64 = s.w1.iter().map(|z| z.norm_sqr()).sum();
    let e2: f64 = s.w2.iter().map(|z| z.norm_sqr()).sum();
    if e1 == 0.0 || e2 == 0.0 {
        return Err(Error::DegenerateInput("zero-energy vector in sample correlation".into()));
    }
    let n = s.len() as f64;
    Ok(sample_cov(s) / ((e1 * e2).sqrt() / n))
}

/// Sample normalised covariation `Σ w1 sgn(conj(w2)) / Σ|w2|`.
pub fn ncv(s: &PairedSample<'_>) -> Result<Complex64> {
    let denom: f64 = s.w2.iter().map(|z| z.norm()).sum();
    if denom == 0.0 {
        return Err(Error::DegenerateInput("all-zero second vector in NCV".into()));
    }
    let num: Complex64 = s.w1.iter().zip(s.w2.iter()).map(|(a, b)| a * csgn(b.conj())).sum();
    Ok(num / denom)
}

/// Dispatch to the estimator selected by `kind`.
pub fn estimate(kind: &EstimatorKind, s: &PairedSample<'_>) -> Result<Complex64> {
    match *kind {
        EstimatorKind::SampleAcvf => Ok(sample_cov(s)),
        EstimatorKind::SampleAcf => sample_corr(s),
        EstimatorKind::Trimmed { c } => trimmed_cov(s, c),
        EstimatorKind::Kendall => Ok(kendall_corr(s)),
        EstimatorKind::Spearman { transform } => spearman_corr(s, transform),
        EstimatorKind::Ncv => ncv(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kind_ids_round_trip() {
        for id in EstimatorKind::IDS {
            let kind: EstimatorKind = id.parse().unwrap();
            assert_eq!(kind.id(), id);
        }
        assert_eq!("trimmed:0.025".parse::<EstimatorKind>().unwrap(), EstimatorKind::Trimmed { c: 0.025 });
        assert!("trimmed:0.5".parse::<EstimatorKind>().is_err());
        assert!("median".parse::<EstimatorKind>().is_err());
        let printed: EstimatorKind = "spearman:printed".parse().unwrap();
        assert_eq!(printed.to_string(), "spearman:printed");
    }

    #[test]
    fn self_normalizing_flags() {
        assert!(!EstimatorKind::SampleAcvf.self_normalizing());
        assert!(!EstimatorKind::Trimmed { c: 0.1 }.self_normalizing());
        for kind in [EstimatorKind::SampleAcf, EstimatorKind::Kendall, EstimatorKind::spearman(), EstimatorKind::Ncv] {
            assert!(kind.self_normalizing());
        }
    }

    #[test]
    fn kind_serializes_with_stable_tag() {
        let json = serde_json::to_string(&EstimatorKind::Trimmed { c: 0.015 }).unwrap();
        assert_eq!(json, r#"{"kind":"trimmed","c":0.015}"#);
        assert_eq!(serde_json::to_string(&EstimatorKind::SampleAcvf).unwrap(), r#"{"kind":"acvf"}"#);
        let back: EstimatorKind = serde_json::from_str(r#"{"kind":"spearman"}"#).unwrap();
        assert_eq!(back, EstimatorKind::spearman());
    }

    #[test]
    fn sample_cov_trivial() {
        let s = PairedSample::from_real(&[1.0, -1.0], &[1.0, -1.0]).unwrap();
        assert_eq!(sample_cov(&s), c(1.0, 0.0));
        let s = PairedSample::from_real(&[1.0, -1.0], &[-1.0, 1.0]).unwrap();
        assert_eq!(sample_cov(&s), c(-1.0, 0.0));
    }

    #[test]
    fn sample_cov_conjugates_second_argument() {
        let w = [c(0.0, 1.0), c(0.0, -1.0)];
        let s = PairedSample::new(&w, &w).unwrap();
        assert_eq!(sample_cov(&s), c(1.0, 0.0));
    }

    #[test]
    fn sample_corr_trivial() {
        let w = [1.0, 3.0, -2.0];
        let neg: Vec<f64> = w.iter().map(|v| -v).collect();
        assert!((sample_corr(&PairedSample::from_real(&w, &w).unwrap()).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((sample_corr(&PairedSample::from_real(&w, &neg).unwrap()).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        let z = PairedSample::from_real(&w, &[0.0; 3]).unwrap();
        assert!(matches!(sample_corr(&z), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn ncv_examples() {
        let w = [1.0, -2.0, 0.5];
        let neg: Vec<f64> = w.iter().map(|v| -v).collect();
        assert_eq!(ncv(&PairedSample::from_real(&w, &w).unwrap()).unwrap(), c(1.0, 0.0));
        assert_eq!(ncv(&PairedSample::from_real(&w, &neg).unwrap()).unwrap(), c(-1.0, 0.0));
        let s = PairedSample::from_real(&[1.0, 2.0], &[-1.0, 2.0]).unwrap();
        assert!((ncv(&s).unwrap() - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let z = PairedSample::from_real(&w, &[0.0; 3]).unwrap();
        assert!(matches!(ncv(&z), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn paired_sample_validation() {
        assert!(PairedSample::from_real(&[1.0], &[1.0]).is_err());
        assert!(PairedSample::from_real(&[1.0, 2.0], &[1.0]).is_err());
        assert!(PairedSample::from_real(&[1.0, f64::NAN], &[1.0, 2.0]).is_err());
        assert!(PairedSample::from_real(&[1.0, 2.0], &[1.0, 2.0]).unwrap().is_real());
    }

    #[test]
    fn dispatch_matches_direct_calls() {
        let s = PairedSample::from_real(&[0.3, -1.2, 2.2, 0.1, -0.7], &[0.5, -0.2, 1.9, -0.4, -1.1]).unwrap();
        assert_eq!(estimate(&EstimatorKind::SampleAcvf, &s).unwrap(), sample_cov(&s));
        assert_eq!(estimate(&EstimatorKind::Trimmed { c: 0.0 }, &s).unwrap(), sample_cov(&s));
        assert_eq!(estimate(&EstimatorKind::SampleAcf, &s).unwrap(), sample_corr(&s).unwrap());
        assert_eq!(estimate(&EstimatorKind::Ncv, &s).unwrap(), ncv(&s).unwrap());
        let w = [0.3, -1.2, 2.2, 0.1];
        let same = PairedSample::from_real(&w, &w).unwrap();
        assert!((estimate(&EstimatorKind::Kendall, &same).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }
}
