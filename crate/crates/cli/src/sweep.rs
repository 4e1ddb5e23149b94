//! Parameter sweeps: for each swept value and replicate, build a signal,
//! compute one map per estimator and score it.
//!
//! Replicate `r` always draws its noise from `Seed::new(seed).derive("noise", r)`,
//! so every swept value sees the same random numbers and differences between
//! values are not blurred by sampling noise.

use std::fmt::Write as _;
use std::path::PathBuf;

use cyclorobust::metrics::{dispersion, MetricsReport};
use cyclorobust::synthesis::{inject_impulses, synthesize};
use cyclorobust::{robust_spectral_coherence_multi, AcpConfig, EstimatorKind, ImpulseTrainSpec, NoiseModel, Seed, Signal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{sidecar_path, InputSpec, RunConfig, Stage, SweepConfig};
use crate::error::{CliError, CliResult};
use crate::io::{write_atomic, write_json};
use crate::pipeline::{check_band, load_input};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "a")]
    MixtureA,
    #[serde(rename = "p")]
    MixtureP,
    #[serde(rename = "nu")]
    Nu,
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "sigma")]
    Sigma,
    #[serde(rename = "B")]
    Amplitude,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::MixtureA => "a",
            SweepParam::MixtureP => "p",
            SweepParam::Nu => "nu",
            SweepParam::Delta => "delta",
            SweepParam::Alpha => "alpha",
            SweepParam::Sigma => "sigma",
            SweepParam::Amplitude => "B",
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "a" => SweepParam::MixtureA,
            "p" => SweepParam::MixtureP,
            "nu" => SweepParam::Nu,
            "delta" => SweepParam::Delta,
            "alpha" => SweepParam::Alpha,
            "sigma" => SweepParam::Sigma,
            "B" | "b" => SweepParam::Amplitude,
            other => return Err(CliError::Usage(format!("unknown sweep parameter `{other}`; expected a, p, nu, delta, alpha, sigma or B"))),
        })
    }
}

/// Where the signals come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum SignalSource {
    Simulated { fs: f64, length: usize, noise: NoiseModel },
    /// Impulses added to a recording; only `B` can be swept.
    Recording { input: InputSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    #[serde(flatten)]
    pub source: SignalSource,
    pub impulse: ImpulseTrainSpec,
    pub acp: AcpConfig,
    pub band: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParam,
    pub values: Vec<f64>,
    pub estimators: Vec<EstimatorKind>,
    pub replicates: u64,
    /// Index of the first replicate; lets a single run be replayed.
    #[serde(default)]
    pub first_replicate: u64,
    pub seed: u64,
    pub baseline: Baseline,
    /// Concurrent runs; `None` uses every core.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        if self.values.is_empty() {
            return Err(CliError::Usage("sweep needs at least one value".into()));
        }
        if self.replicates == 0 {
            return Err(CliError::Usage("sweep needs at least one replicate".into()));
        }
        if self.estimators.is_empty() {
            return Err(CliError::Usage("sweep needs at least one estimator".into()));
        }
        for k in &self.estimators {
            k.validate()?;
        }
        if self.workers == Some(0) {
            return Err(CliError::Usage("workers must be at least 1".into()));
        }
        let fits = match (&self.baseline.source, self.parameter) {
            (_, SweepParam::Amplitude) => true,
            (SignalSource::Recording { .. }, _) => false,
            (SignalSource::Simulated { noise, .. }, p) => matches!(
                (noise, p),
                (NoiseModel::Mixture(_), SweepParam::MixtureA | SweepParam::MixtureP)
                    | (NoiseModel::StudentT(_), SweepParam::Nu | SweepParam::Delta)
                    | (NoiseModel::AlphaStable(_), SweepParam::Alpha | SweepParam::Sigma)
            ),
        };
        if !fits {
            return Err(CliError::Usage(format!(
                "parameter {} does not belong to the baseline signal source",
                self.parameter.name()
            )));
        }
        if let SignalSource::Simulated { fs, .. } = self.baseline.source {
            self.baseline.acp.validate(fs)?;
            self.baseline.acp.check_fault_frequency(fs, self.baseline.impulse.fault_hz)?;
            check_band(self.baseline.band, fs)?;
        }
        Ok(())
    }

    /// Baseline with the swept parameter set to `value`.
    pub fn apply(&self, value: f64) -> Baseline {
        let mut b = self.baseline.clone();
        match (&mut b.source, self.parameter) {
            (_, SweepParam::Amplitude) => b.impulse.amplitude = value,
            (SignalSource::Simulated { noise, .. }, p) => match (noise, p) {
                (NoiseModel::Mixture(m), SweepParam::MixtureA) => m.a = value,
                (NoiseModel::Mixture(m), SweepParam::MixtureP) => m.p = value,
                (NoiseModel::StudentT(t), SweepParam::Nu) => t.nu = value,
                (NoiseModel::StudentT(t), SweepParam::Delta) => t.delta = value,
                (NoiseModel::AlphaStable(s), SweepParam::Alpha) => s.alpha = value,
                (NoiseModel::AlphaStable(s), SweepParam::Sigma) => s.sigma = value,
                _ => unreachable!("checked by validate"),
            },
            (SignalSource::Recording { .. }, _) => unreachable!("checked by validate"),
        }
        b
    }

    pub fn noise_seed(&self, replicate: u64) -> Seed {
        Seed::new(self.seed).derive("noise", replicate)
    }

    /// The sweep reduced to one value and one replicate.
    pub fn single_run(&self, value: f64, replicate: u64) -> SweepSpec {
        SweepSpec { values: vec![value], replicates: 1, first_replicate: replicate, workers: Some(1), ..self.clone() }
    }
}

/// Score of one estimator on one signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub value: f64,
    pub replicate: u64,
    pub stream_id: u64,
    pub estimator: EstimatorKind,
    pub tau_gamma: Option<f64>,
    /// Three cyclic frequencies with the largest amplitude ratio.
    pub top_eps: Vec<f64>,
    /// `max / mean` of the column-mean profile.
    pub profile_dispersion: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub estimator: EstimatorKind,
    pub runs_ok: usize,
    pub runs_failed: usize,
    pub mean_tau: Option<f64>,
    pub std_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub parameter: SweepParam,
    pub runs: Vec<RunRecord>,
    pub rows: Vec<SweepRow>,
}

impl SweepOutcome {
    pub fn failed_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn total_runs(&self) -> usize {
        self.runs.len()
    }

    pub fn row(&self, value: f64, estimator: &EstimatorKind) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.value == value && &r.estimator == estimator)
    }

    pub fn records<'a>(&'a self, value: f64, estimator: &'a EstimatorKind) -> impl Iterator<Item = &'a RunRecord> + 'a {
        self.runs.iter().filter(move |r| r.value == value && &r.estimator == estimator)
    }
}

pub fn run_sweep(spec: &SweepSpec) -> CliResult<SweepOutcome> {
    spec.validate()?;
    let recording = match &spec.baseline.source {
        SignalSource::Recording { input } => Some(load_input(input)?),
        SignalSource::Simulated { .. } => None,
    };
    if let Some(x) = &recording {
        spec.baseline.acp.validate(x.fs())?;
        spec.baseline.acp.check_fault_frequency(x.fs(), spec.baseline.impulse.fault_hz)?;
        check_band(spec.baseline.band, x.fs())?;
    }
    let jobs: Vec<(f64, u64)> = spec
        .values
        .iter()
        .flat_map(|&v| (spec.first_replicate..spec.first_replicate + spec.replicates).map(move |r| (v, r)))
        .collect();

    let work = || -> Vec<Vec<RunRecord>> {
        jobs.par_iter().map(|&(v, r)| one_run(spec, recording.as_ref(), v, r)).collect()
    };
    let per_job = match spec.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?
            .install(work),
        None => work(),
    };
    let runs: Vec<RunRecord> = per_job.into_iter().flatten().collect();
    let rows = aggregate(spec, &runs);
    Ok(SweepOutcome { parameter: spec.parameter, runs, rows })
}

fn one_run(spec: &SweepSpec, recording: Option<&Signal>, value: f64, replicate: u64) -> Vec<RunRecord> {
    let seed = spec.noise_seed(replicate);
    let record = |kind: &EstimatorKind| RunRecord {
        value,
        replicate,
        stream_id: seed.stream_id,
        estimator: *kind,
        tau_gamma: None,
        top_eps: vec![],
        profile_dispersion: None,
        error: None,
    };
    let scored = (|| -> cyclorobust::Result<Vec<RunRecord>> {
        let b = spec.apply(value);
        let x = match (&b.source, recording) {
            (SignalSource::Simulated { fs, length, noise }, _) => synthesize(&b.impulse, noise, *length, *fs, seed)?,
            (SignalSource::Recording { .. }, Some(x)) => inject_impulses(x, &b.impulse)?,
            (SignalSource::Recording { .. }, None) => unreachable!("recording loaded before the runs"),
        };
        let maps = robust_spectral_coherence_multi(&x, &b.acp, &spec.estimators)?;
        maps.iter()
            .zip(&spec.estimators)
            .map(|(map, kind)| {
                let rep = MetricsReport::compute(map, b.band, b.impulse.fault_hz, true)?;
                let profile = rep.column_profile.as_deref().unwrap_or_default();
                Ok(RunRecord {
                    tau_gamma: Some(rep.tau_gamma),
                    top_eps: rep.top_eps(3),
                    profile_dispersion: Some(dispersion(profile)),
                    ..record(kind)
                })
            })
            .collect()
    })();
    match scored {
        Ok(records) => {
            log::info!("{}={value} replicate {replicate}: done", spec.parameter.name());
            records
        }
        Err(e) => {
            log::warn!("{}={value} replicate {replicate}: {e}", spec.parameter.name());
            spec.estimators.iter().map(|k| RunRecord { error: Some(e.to_string()), ..record(k) }).collect()
        }
    }
}

fn aggregate(spec: &SweepSpec, runs: &[RunRecord]) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for &value in &spec.values {
        for kind in &spec.estimators {
            let mine: Vec<&RunRecord> = runs.iter().filter(|r| r.value == value && &r.estimator == kind).collect();
            let taus: Vec<f64> = mine.iter().filter_map(|r| r.tau_gamma).collect();
            let n = taus.len();
            let mean = (n > 0).then(|| taus.iter().sum::<f64>() / n as f64);
            let std_err = match (mean, n) {
                (Some(m), n) if n > 1 => {
                    let var = taus.iter().map(|t| (t - m) * (t - m)).sum::<f64>() / (n - 1) as f64;
                    Some((var / n as f64).sqrt())
                }
                _ => None,
            };
            rows.push(SweepRow { value, estimator: *kind, runs_ok: n, runs_failed: mine.len() - n, mean_tau: mean, std_err });
        }
    }
    rows
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn summary_csv(outcome: &SweepOutcome) -> String {
    let mut out = String::from("parameter,value,estimator,runs_ok,runs_failed,mean_tau,std_err\n");
    for r in &outcome.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            outcome.parameter.name(),
            r.value,
            r.estimator,
            r.runs_ok,
            r.runs_failed,
            opt(r.mean_tau),
            opt(r.std_err)
        )
        .unwrap();
    }
    out
}

pub fn runs_csv(outcome: &SweepOutcome) -> String {
    let mut out = String::from("parameter,value,replicate,stream_id,estimator,tau_gamma,top_eps,profile_dispersion,error\n");
    for r in &outcome.runs {
        let top: Vec<String> = r.top_eps.iter().map(|e| e.to_string()).collect();
        let err = r.error.as_deref().unwrap_or("").replace(['"', '\n'], "'");
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},\"{}\"",
            outcome.parameter.name(),
            r.value,
            r.replicate,
            r.stream_id,
            r.estimator,
            opt(r.tau_gamma),
            top.join(";"),
            opt(r.profile_dispersion),
            err
        )
        .unwrap();
    }
    out
}

/// Write `summary.csv`, `runs.csv`, the sweep config and one replayable
/// config per run under `runs/`.
pub fn write_sweep(cfg: &SweepConfig, outcome: &SweepOutcome) -> CliResult<Vec<PathBuf>> {
    let dir = &cfg.output_dir;
    let summary = dir.join("summary.csv");
    let runs = dir.join("runs.csv");
    write_atomic(&summary, summary_csv(outcome).as_bytes())?;
    write_atomic(&runs, runs_csv(outcome).as_bytes())?;
    let mut files = vec![summary.clone(), runs];
    for (vi, &v) in cfg.spec.values.iter().enumerate() {
        for r in cfg.spec.first_replicate..cfg.spec.first_replicate + cfg.spec.replicates {
            let name = format!("v{vi:03}_r{r:03}");
            let single = SweepConfig { spec: cfg.spec.single_run(v, r), output_dir: dir.join("runs").join(&name) };
            let path = dir.join("runs").join(format!("{name}.config.json"));
            write_json(&RunConfig::new(Stage::Sweep(single)), &path)?;
            files.push(path);
        }
    }
    let side = sidecar_path(&summary);
    write_json(&RunConfig::new(Stage::Sweep(cfg.clone())), &side)?;
    files.push(side);
    Ok(files)
}
