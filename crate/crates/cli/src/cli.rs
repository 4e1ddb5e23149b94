//! Command-line parsing. Each subcommand resolves its flags into a
//! [`RunConfig`] and hands it to [`crate::pipeline::execute`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclorobust::{AcpConfig, EstimatorKind, ImpulseTrainSpec, NoiseModel, Seed};

use crate::config::{
    InjectConfig, InputSpec, MetricsConfig, RunConfig, ScmapConfig, SimulateConfig, SpectrogramConfig, Stage,
    SweepConfig, DEFAULT_FS, DEFAULT_LENGTH,
};
use crate::error::{CliError, CliResult};
use crate::io::{read_json, SignalFormat};
use crate::render::RenderOptions;
use crate::sweep::{Baseline, SignalSource, SweepParam, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "cyclorobust", version, about = "Robust spectral coherence for impulsive vibration signals")]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize impulses plus heavy-tailed noise.
    Simulate(SimulateArgs),
    /// Add an impulse train to a recorded signal.
    Inject(InjectArgs),
    /// Render the STFT magnitude of a signal.
    Spectrogram(SpectrogramArgs),
    /// Compute a spectral-coherence map.
    Scmap(ScmapArgs),
    /// Score a map: amplitude ratios and performance indicator.
    Metrics(MetricsArgs),
    /// Sweep a noise or impulse parameter and tabulate mean scores.
    Sweep(SweepArgs),
    /// Re-run a stage from a saved config sidecar.
    Replay {
        config: PathBuf,
    },
}

fn parse_band(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower edge `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper edge `{hi}`"))?;
    if !(lo < hi) {
        return Err(format!("lower edge {lo} must be below upper edge {hi}"));
    }
    Ok((lo, hi))
}

fn parse_estimator(s: &str) -> Result<EstimatorKind, String> {
    s.parse().map_err(|e: cyclorobust::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Signal format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<SignalFormat>,
    /// Sampling rate in Hz; required for CSV input without an `fs=` header.
    #[arg(long)]
    pub fs: Option<f64>,
}

impl InputArgs {
    fn resolve(&self) -> CliResult<InputSpec> {
        let format = match self.format {
            Some(f) => f,
            None => SignalFormat::from_path(&self.input)?,
        };
        if let Some(fs) = self.fs {
            if !(fs > 0.0 && fs.is_finite()) {
                return Err(CliError::Usage(format!("--fs must be positive, got {fs}")));
            }
        }
        Ok(InputSpec { path: self.input.clone(), format, fs: self.fs })
    }
}

#[derive(Debug, Args)]
pub struct StftArgs {
    #[arg(long, default_value_t = 512)]
    pub nfft: usize,
    /// Window length in samples.
    #[arg(long, default_value_t = 128)]
    pub win_len: usize,
    /// Overlap between consecutive windows in samples.
    #[arg(long, default_value_t = 110)]
    pub nover: usize,
    #[arg(long, default_value_t = 3.0)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub eps_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps_step: f64,
    /// Evaluate Kendall cells in double precision (slower).
    #[arg(long)]
    pub exact_kendall: bool,
}

impl StftArgs {
    fn resolve(&self) -> CliResult<AcpConfig> {
        let cfg = AcpConfig {
            nfft: self.nfft,
            win_len: self.win_len,
            nover: self.nover,
            eps_min: self.eps_min,
            eps_max: self.eps_max,
            eps_step: self.eps_step,
            fast_kendall: !self.exact_kendall,
            ..AcpConfig::default()
        };
        cfg.validate_stft()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct ImpulseArgs {
    /// Impulse amplitude B.
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Carrier frequency of each impulse in Hz.
    #[arg(long, default_value_t = 5000.0)]
    pub carrier: f64,
    /// Frequency band the impulses excite, LO:HI in Hz.
    #[arg(long, value_parser = parse_band, default_value = "3500:6500")]
    pub impulse_band: (f64, f64),
    /// Exponential decay rate of each impulse in 1/s.
    #[arg(long, default_value_t = 3000.0)]
    pub decay: f64,
    /// Impulse repetition rate in Hz.
    #[arg(long, default_value_t = 30.0)]
    pub fault_freq: f64,
    /// Time of the first impulse in seconds.
    #[arg(long, default_value_t = 0.0)]
    pub phase: f64,
}

impl ImpulseArgs {
    fn resolve(&self, default_amplitude: f64) -> CliResult<ImpulseTrainSpec> {
        let spec = ImpulseTrainSpec {
            amplitude: self.amplitude.unwrap_or(default_amplitude),
            carrier_hz: self.carrier,
            band_hz: self.impulse_band,
            decay: self.decay,
            fault_hz: self.fault_freq,
            phase_offset_s: self.phase,
        };
        spec.validate_intrinsic()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseKind {
    /// Gaussian mixture M(a, p, D).
    Mixture,
    /// Scaled Student's t T(nu, delta).
    StudentT,
    /// Symmetric alpha-stable S(alpha, sigma).
    AlphaStable,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[arg(long, value_enum, default_value_t = NoiseKind::AlphaStable)]
    pub noise: NoiseKind,
    /// Mixture impulse amplitude bound.
    #[arg(long, default_value_t = 300.0)]
    pub a: f64,
    /// Mixture impulse probability.
    #[arg(long, default_value_t = 0.001)]
    pub p: f64,
    /// Mixture Gaussian standard deviation.
    #[arg(long = "d", default_value_t = 8.0)]
    pub d: f64,
    /// Student's t degrees of freedom.
    #[arg(long, default_value_t = 2.0)]
    pub nu: f64,
    /// Student's t scale.
    #[arg(long, default_value_t = 3.0)]
    pub delta: f64,
    /// Stability index.
    #[arg(long, default_value_t = 1.7)]
    pub alpha: f64,
    /// Stable scale.
    #[arg(long, default_value_t = 3.0)]
    pub sigma: f64,
}

impl NoiseArgs {
    fn resolve(&self) -> CliResult<NoiseModel> {
        let model = match self.noise {
            NoiseKind::Mixture => NoiseModel::mixture(self.a, self.p, self.d),
            NoiseKind::StudentT => NoiseModel::student_t(self.nu, self.delta),
            NoiseKind::AlphaStable => NoiseModel::alpha_stable(self.alpha, self.sigma),
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long, default_value_t = 800)]
    pub width: u32,
    #[arg(long, default_value_t = 600)]
    pub height: u32,
}

impl RenderArgs {
    fn resolve(&self) -> RenderOptions {
        RenderOptions { width: self.width, height: self.height }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = DEFAULT_FS)]
    pub fs: f64,
    /// Number of samples.
    #[arg(long, default_value_t = DEFAULT_LENGTH)]
    pub length: usize,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub impulse: ImpulseArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct InjectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub impulse: ImpulseArgs,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrogramArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub stft: StftArgs,
    /// Informative band to mark, LO:HI in Hz.
    #[arg(long, value_parser = parse_band)]
    pub band: Option<(f64, f64)>,
    /// Output PNG.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also write the magnitudes as a CSV grid.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub render: RenderArgs,
}

#[derive(Debug, Args)]
pub struct ScmapArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub stft: StftArgs,
    /// acvf, acf, trimmed[:c], kendall, spearman[:printed] or ncv.
    #[arg(short, long, value_parser = parse_estimator, default_value = "acvf")]
    pub estimator: EstimatorKind,
    #[arg(long, value_parser = parse_band, default_value = "3500:6500")]
    pub band: (f64, f64),
    #[arg(long, default_value_t = 30.0)]
    pub fault_freq: f64,
    /// Output map CSV.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Heatmap path; defaults to the map path with a .png extension.
    #[arg(long)]
    pub png: Option<PathBuf>,
    #[arg(long, conflicts_with = "png")]
    pub no_png: bool,
    #[command(flatten)]
    pub render: RenderArgs,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Map CSV written by `scmap`.
    #[arg(short, long)]
    pub map: PathBuf,
    /// Override the estimator recorded in the map file.
    #[arg(short, long, value_parser = parse_estimator)]
    pub estimator: Option<EstimatorKind>,
    #[arg(long, value_parser = parse_band, default_value = "3500:6500")]
    pub band: (f64, f64),
    #[arg(long, default_value_t = 30.0)]
    pub fault_freq: f64,
    /// Include the column-mean profile.
    #[arg(long)]
    pub profile: bool,
    /// Output report JSON.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also write the amplitude-ratio curve as CSV.
    #[arg(long)]
    pub curve: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep specification JSON; replaces all other sweep flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// a, p, nu, delta, alpha, sigma or B.
    #[arg(long, required_unless_present = "spec")]
    pub param: Option<String>,
    #[arg(long, value_delimiter = ',', required_unless_present = "spec")]
    pub values: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = parse_estimator, default_value = "acvf,ncv,trimmed:0.015,trimmed:0.025,kendall,spearman")]
    pub estimators: Vec<EstimatorKind>,
    #[arg(long, default_value_t = 1)]
    pub replicates: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Concurrent runs; defaults to the number of cores.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Recording to inject impulses into instead of simulated noise.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<SignalFormat>,
    #[arg(long)]
    pub fs: Option<f64>,
    #[arg(long)]
    pub length: Option<usize>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub impulse: ImpulseArgs,
    #[command(flatten)]
    pub stft: StftArgs,
    #[arg(long, value_parser = parse_band, default_value = "3500:6500")]
    pub band: (f64, f64),
    /// Output directory.
    #[arg(short, long)]
    pub out: PathBuf,
}

impl SweepArgs {
    fn resolve(&self) -> CliResult<SweepSpec> {
        if let Some(path) = &self.spec {
            let mut spec: SweepSpec = read_json(path)?;
            if self.workers.is_some() {
                spec.workers = self.workers;
            }
            return Ok(spec);
        }
        let parameter: SweepParam = self.param.as_deref().unwrap_or_default().parse()?;
        let source = match &self.input {
            Some(path) => {
                let args = InputArgs { input: path.clone(), format: self.format, fs: self.fs };
                SignalSource::Recording { input: args.resolve()? }
            }
            None => SignalSource::Simulated {
                fs: self.fs.unwrap_or(DEFAULT_FS),
                length: self.length.unwrap_or(DEFAULT_LENGTH),
                noise: self.noise.resolve()?,
            },
        };
        let default_amplitude = if self.input.is_some() { 0.25 } else { 45.0 };
        Ok(SweepSpec {
            parameter,
            values: self.values.clone(),
            estimators: self.estimators.clone(),
            replicates: self.replicates,
            first_replicate: 0,
            seed: self.seed,
            baseline: Baseline {
                source,
                impulse: self.impulse.resolve(default_amplitude)?,
                acp: self.stft.resolve()?,
                band: self.band,
            },
            workers: self.workers,
        })
    }
}

/// Resolve parsed arguments into a run description.
pub fn resolve(command: &Command) -> CliResult<RunConfig> {
    let stage = match command {
        Command::Simulate(a) => {
            if !(a.fs > 0.0 && a.fs.is_finite()) {
                return Err(CliError::Usage(format!("--fs must be positive, got {}", a.fs)));
            }
            let impulse = a.impulse.resolve(45.0)?;
            impulse.validate_for_rate(a.fs)?;
            Stage::Simulate(SimulateConfig {
                fs: a.fs,
                length: a.length,
                impulse,
                noise: a.noise.resolve()?,
                seed: Seed::with_stream(a.seed, a.stream),
                output: a.output.clone(),
            })
        }
        Command::Inject(a) => Stage::Inject(InjectConfig {
            input: a.input.resolve()?,
            impulse: a.impulse.resolve(0.25)?,
            output: a.output.clone(),
        }),
        Command::Spectrogram(a) => Stage::Spectrogram(SpectrogramConfig {
            input: a.input.resolve()?,
            acp: a.stft.resolve()?,
            band: a.band,
            output_png: a.output.clone(),
            output_csv: a.csv.clone(),
            render: a.render.resolve(),
        }),
        Command::Scmap(a) => {
            let output_png = if a.no_png { None } else { Some(a.png.clone().unwrap_or_else(|| a.output.with_extension("png"))) };
            Stage::Scmap(ScmapConfig {
                input: a.input.resolve()?,
                acp: a.stft.resolve()?,
                estimator: a.estimator,
                band: a.band,
                fault_hz: a.fault_freq,
                output_csv: a.output.clone(),
                output_png,
                render: a.render.resolve(),
            })
        }
        Command::Metrics(a) => Stage::Metrics(MetricsConfig {
            map: a.map.clone(),
            estimator: a.estimator,
            band: a.band,
            fault_hz: a.fault_freq,
            profile: a.profile,
            output: a.output.clone(),
            curve: a.curve.clone(),
        }),
        Command::Sweep(a) => {
            let spec = a.resolve()?;
            spec.validate()?;
            Stage::Sweep(SweepConfig { spec, output_dir: a.out.clone() })
        }
        Command::Replay { config } => return load_config(config),
    };
    Ok(RunConfig::new(stage))
}

pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    read_json(path)
}
