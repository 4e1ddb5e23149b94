//! One function per pipeline stage. Each writes its outputs and the
//! resolved config sidecar.

use std::path::PathBuf;

use cyclorobust::metrics::MetricsReport;
use cyclorobust::spectral::spectrogram;
use cyclorobust::synthesis::{inject_impulses, synthesize};
use cyclorobust::{robust_spectral_coherence, Signal};

use crate::config::{
    sidecar_path, InjectConfig, InputSpec, MetricsConfig, RunConfig, ScmapConfig, SimulateConfig, SpectrogramConfig,
    Stage,
};
use crate::error::{CliError, CliResult};
use crate::io::{read_map, read_signal, write_grid, write_json, write_map, write_ratio_curve, write_report, write_signal};
use crate::render::{render_map, render_spectrogram, Overlay};
use crate::sweep::{run_sweep, write_sweep};

/// Paths written by a stage, sidecars included.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Written {
    pub files: Vec<PathBuf>,
}

pub fn execute(cfg: &RunConfig) -> CliResult<Written> {
    match &cfg.stage {
        Stage::Simulate(c) => simulate(c),
        Stage::Inject(c) => inject(c),
        Stage::Spectrogram(c) => spectrogram_stage(c),
        Stage::Scmap(c) => scmap(c),
        Stage::Metrics(c) => metrics(c),
        Stage::Sweep(c) => {
            let outcome = run_sweep(&c.spec)?;
            let files = write_sweep(c, &outcome)?;
            let failed = outcome.failed_runs();
            if failed > 0 {
                return Err(CliError::SweepFailures { failed, total: outcome.total_runs() });
            }
            Ok(Written { files })
        }
    }
}

fn finish(stage: Stage, primary: &std::path::Path, mut files: Vec<PathBuf>) -> CliResult<Written> {
    let side = sidecar_path(primary);
    write_json(&RunConfig::new(stage), &side)?;
    files.push(side);
    Ok(Written { files })
}

pub fn load_input(input: &InputSpec) -> CliResult<Signal> {
    read_signal(&input.path, input.format, input.fs)
}

fn simulate(c: &SimulateConfig) -> CliResult<Written> {
    let x = synthesize(&c.impulse, &c.noise, c.length, c.fs, c.seed)?;
    write_signal(&x, &c.output)?;
    finish(Stage::Simulate(c.clone()), &c.output, vec![c.output.clone()])
}

fn inject(c: &InjectConfig) -> CliResult<Written> {
    let x = load_input(&c.input)?;
    let y = inject_impulses(&x, &c.impulse)?;
    write_signal(&y, &c.output)?;
    finish(Stage::Inject(c.clone()), &c.output, vec![c.output.clone()])
}

fn spectrogram_stage(c: &SpectrogramConfig) -> CliResult<Written> {
    let x = load_input(&c.input)?;
    let sg = spectrogram(&x, &c.acp)?;
    let overlay = Overlay { band: c.band, columns: vec![] };
    render_spectrogram(&sg, &c.output_png, &overlay, c.render)?;
    let mut files = vec![c.output_png.clone()];
    if let Some(csv) = &c.output_csv {
        write_grid("f\\t", &sg.f_grid, &sg.t_grid, &sg.magnitudes, csv)?;
        files.push(csv.clone());
    }
    finish(Stage::Spectrogram(c.clone()), &c.output_png, files)
}

fn scmap(c: &ScmapConfig) -> CliResult<Written> {
    let x = load_input(&c.input)?;
    c.acp.validate(x.fs())?;
    c.acp.check_fault_frequency(x.fs(), c.fault_hz)?;
    check_band(c.band, x.fs())?;
    let map = robust_spectral_coherence(&x, &c.acp, &c.estimator)?;
    write_map(&map, &c.output_csv)?;
    let mut files = vec![c.output_csv.clone()];
    if let Some(png) = &c.output_png {
        let overlay = Overlay {
            band: Some(c.band),
            columns: cyclorobust::cyclic_frequencies(c.fault_hz, &map.eps_grid)?,
        };
        render_map(&map, png, &overlay, c.render)?;
        files.push(png.clone());
    }
    finish(Stage::Scmap(c.clone()), &c.output_csv, files)
}

fn metrics(c: &MetricsConfig) -> CliResult<Written> {
    let map = read_map(&c.map, c.estimator)?;
    let report = MetricsReport::compute(&map, c.band, c.fault_hz, c.profile)?;
    write_report(&report, &c.output)?;
    let mut files = vec![c.output.clone()];
    if let Some(curve) = &c.curve {
        write_ratio_curve(&report, curve)?;
        files.push(curve.clone());
    }
    finish(Stage::Metrics(c.clone()), &c.output, files)
}

/// The analysis band must be ordered and lie below Nyquist.
pub fn check_band(band: (f64, f64), fs: f64) -> CliResult<()> {
    let (lo, hi) = band;
    if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
        return Err(CliError::Usage(format!("band {lo}:{hi} must satisfy 0 <= lo < hi")));
    }
    if hi > fs / 2.0 {
        return Err(CliError::Usage(format!("band upper edge {hi} Hz exceeds Nyquist {} Hz", fs / 2.0)));
    }
    Ok(())
}
