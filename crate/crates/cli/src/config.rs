//! Fully resolved run descriptions. Every output is accompanied by one of
//! these as a JSON sidecar, and [`crate::pipeline::execute`] regenerates the
//! outputs from it alone.

use std::path::{Path, PathBuf};

use cyclorobust::{AcpConfig, EstimatorKind, ImpulseTrainSpec, NoiseModel, Seed};
use serde::{Deserialize, Serialize};

use crate::io::SignalFormat;
use crate::render::RenderOptions;
use crate::sweep::SweepSpec;

pub const DEFAULT_FS: f64 = 25_000.0;
pub const DEFAULT_LENGTH: usize = 50_000;
pub const DEFAULT_BAND: (f64, f64) = (3500.0, 6500.0);
pub const DEFAULT_FAULT_HZ: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tool_version: String,
    #[serde(flatten)]
    pub stage: Stage,
}

impl RunConfig {
    pub fn new(stage: Stage) -> Self {
        Self { tool_version: env!("CARGO_PKG_VERSION").to_string(), stage }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Stage {
    Simulate(SimulateConfig),
    Inject(InjectConfig),
    Spectrogram(SpectrogramConfig),
    Scmap(ScmapConfig),
    Metrics(MetricsConfig),
    Sweep(SweepConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub path: PathBuf,
    pub format: SignalFormat,
    /// Sampling-rate override; required for CSV files without a header.
    #[serde(default)]
    pub fs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub fs: f64,
    pub length: usize,
    pub impulse: ImpulseTrainSpec,
    pub noise: NoiseModel,
    pub seed: Seed,
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectConfig {
    pub input: InputSpec,
    pub impulse: ImpulseTrainSpec,
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrogramConfig {
    pub input: InputSpec,
    pub acp: AcpConfig,
    #[serde(default)]
    pub band: Option<(f64, f64)>,
    pub output_png: PathBuf,
    #[serde(default)]
    pub output_csv: Option<PathBuf>,
    #[serde(default)]
    pub render: RenderOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScmapConfig {
    pub input: InputSpec,
    pub acp: AcpConfig,
    pub estimator: EstimatorKind,
    pub band: (f64, f64),
    pub fault_hz: f64,
    pub output_csv: PathBuf,
    #[serde(default)]
    pub output_png: Option<PathBuf>,
    #[serde(default)]
    pub render: RenderOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsConfig {
    pub map: PathBuf,
    /// Overrides the estimator named in the map file.
    #[serde(default)]
    pub estimator: Option<EstimatorKind>,
    pub band: (f64, f64),
    pub fault_hz: f64,
    #[serde(default)]
    pub profile: bool,
    pub output: PathBuf,
    #[serde(default)]
    pub curve: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub spec: SweepSpec,
    pub output_dir: PathBuf,
}

/// `map.csv` → `map.config.json`.
pub fn sidecar_path(primary: &Path) -> PathBuf {
    primary.with_extension("config.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar_path(Path::new("out/map.csv")), PathBuf::from("out/map.config.json"));
        assert_eq!(sidecar_path(Path::new("x")), PathBuf::from("x.config.json"));
    }

    #[test]
    fn json_round_trip() {
        let cfg = RunConfig::new(Stage::Scmap(ScmapConfig {
            input: InputSpec { path: "x.csv".into(), format: SignalFormat::Csv, fs: None },
            acp: AcpConfig::default(),
            estimator: EstimatorKind::Trimmed { c: 0.015 },
            band: DEFAULT_BAND,
            fault_hz: DEFAULT_FAULT_HZ,
            output_csv: "m.csv".into(),
            output_png: Some("m.png".into()),
            render: RenderOptions::default(),
        }));
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        assert!(text.contains("\"command\": \"scmap\""), "{text}");
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }
}
