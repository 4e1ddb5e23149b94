//! Robust spectral coherence for detecting second-order cyclostationarity in
//! heavy-tailed, impulsive signals.
//!
//! The crate is organised as a small pipeline:
//!
//! - [`synthesis`]: fault-impulse trains, heavy-tailed noise models and the
//!   additive signal model used for simulation studies.
//! - [`estimators`]: classical and robust dependence estimators (sample
//!   ACVF/ACF, trimmed, Kendall, Spearman, sample NCV) for complex vectors.
//! - [`spectral`]: STFT machinery and the averaged-cyclic-periodogram
//!   spectral coherence map with a pluggable estimator.
//! - [`metrics`]: amplitude ratio, performance indicator and column profile
//!   used to score maps.

pub mod error;
pub mod estimators;
pub mod metrics;
pub mod rng;
pub mod signal;
pub mod spectral;
pub mod synthesis;

pub use ndarray;

pub use error::{Error, Result};
pub use estimators::{estimate, EstimatorKind, PairedSample, SpearmanTransform};
pub use metrics::{amplitude_ratio, column_mean_profile, cyclic_frequencies, performance_indicator, EpsValue, MetricsReport};
pub use rng::Seed;
pub use signal::Signal;
pub use spectral::{robust_spectral_coherence, robust_spectral_coherence_multi, AcpConfig, ScMap, Spectrogram};
pub use synthesis::{ImpulseTrainSpec, NoiseModel};
