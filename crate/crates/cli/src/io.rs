//! Signal, map and report files.
//!
//! Signals are CSV (`fs=<Hz>` header, one sample per line) or mono WAV.
//! Maps are CSV grids whose first row holds the cyclic frequencies and
//! whose first column holds the spectral frequencies; the corner cell names
//! the estimator. Floats are written in shortest round-trip form, so
//! reading a file back reproduces every value exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use cyclorobust::ndarray::Array2;
use cyclorobust::{EstimatorKind, MetricsReport, ScMap, Signal};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SignalFormat {
    Csv,
    Wav,
}

impl SignalFormat {
    pub fn from_path(path: &Path) -> CliResult<Self> {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("csv") | Some("txt") => Ok(SignalFormat::Csv),
            Some("wav") => Ok(SignalFormat::Wav),
            _ => Err(CliError::Usage(format!("cannot infer signal format of {}; use --format", path.display()))),
        }
    }
}

/// Write `bytes` to a temporary file next to `path`, then rename it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::format(path, e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::format(path, e.to_string()))
}

/// Read a signal. `fs` overrides the sampling rate and is required for CSV
/// files without an `fs=` header.
pub fn read_signal(path: &Path, format: SignalFormat, fs: Option<f64>) -> CliResult<Signal> {
    let signal = match format {
        SignalFormat::Csv => read_csv_signal(path, fs)?,
        SignalFormat::Wav => {
            let s = read_wav_signal(path)?;
            match fs {
                Some(rate) => Signal::new(s.into_samples(), rate)?,
                None => s,
            }
        }
    };
    Ok(signal.with_label(path.display().to_string()))
}

fn read_csv_signal(path: &Path, fs_override: Option<f64>) -> CliResult<Signal> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut header_fs = None;
    let mut samples = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("fs=") {
            if header_fs.is_some() || !samples.is_empty() {
                return Err(CliError::format(path, format!("line {}: unexpected fs= header", i + 1)));
            }
            let rate: f64 = rest
                .trim()
                .parse()
                .map_err(|_| CliError::format(path, format!("line {}: malformed header {line:?}", i + 1)))?;
            if !(rate.is_finite() && rate > 0.0) {
                return Err(CliError::format(path, format!("line {}: sampling rate must be positive", i + 1)));
            }
            header_fs = Some(rate);
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| CliError::format(path, format!("line {}: cannot parse {line:?} as a number", i + 1)))?;
        if !v.is_finite() {
            return Err(CliError::format(path, format!("line {}: non-finite value", i + 1)));
        }
        samples.push(v);
    }
    let rate = match (fs_override, header_fs) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Usage(format!("--fs {a} contradicts the header fs={b} in {}", path.display())))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => {
            return Err(CliError::Usage(format!("{} has no fs= header; pass --fs", path.display())));
        }
    };
    if samples.is_empty() {
        return Err(CliError::format(path, "no samples"));
    }
    Ok(Signal::new(samples, rate)?)
}

fn read_wav_signal(path: &Path) -> CliResult<Signal> {
    let reader = hound::WavReader::open(path).map_err(|e| CliError::format(path, e.to_string()))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(CliError::format(path, format!("{} channels; only mono WAV is supported", spec.channels)));
    }
    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, bits @ (16 | 24 | 32)) => {
            let scale = 1.0 / f64::from(1u32 << (bits - 1));
            reader
                .into_samples::<i32>()
                .enumerate()
                .map(|(i, s)| {
                    s.map(|v| f64::from(v) * scale)
                        .map_err(|e| CliError::format(path, format!("sample {i}: {e}")))
                })
                .collect::<CliResult<_>>()?
        }
        (hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .enumerate()
            .map(|(i, s)| match s {
                Ok(v) if v.is_finite() => Ok(f64::from(v)),
                Ok(_) => Err(CliError::format(path, format!("sample {i}: non-finite value"))),
                Err(e) => Err(CliError::format(path, format!("sample {i}: {e}"))),
            })
            .collect::<CliResult<_>>()?,
        (fmt, bits) => {
            return Err(CliError::format(path, format!("unsupported WAV encoding {fmt:?} {bits}-bit")));
        }
    };
    if samples.is_empty() {
        return Err(CliError::format(path, "no samples"));
    }
    Ok(Signal::new(samples, f64::from(spec.sample_rate))?)
}

pub fn write_signal(signal: &Signal, path: &Path) -> CliResult<()> {
    let mut out = String::with_capacity(signal.len() * 20);
    writeln!(out, "fs={}", signal.fs()).unwrap();
    for v in signal.samples() {
        writeln!(out, "{v}").unwrap();
    }
    write_atomic(path, out.as_bytes())
}

pub fn write_map(map: &ScMap, path: &Path) -> CliResult<()> {
    write_grid(&map.estimator.to_string(), &map.f_grid, &map.eps_grid, &map.values, path)
}

/// Generic labelled grid: `corner, x...` then `y, row...`.
pub fn write_grid(corner: &str, y_grid: &[f64], x_grid: &[f64], values: &Array2<f64>, path: &Path) -> CliResult<()> {
    let mut out = String::with_capacity(values.len() * 24);
    out.push_str(corner);
    for x in x_grid {
        write!(out, ",{x}").unwrap();
    }
    out.push('\n');
    for (y, row) in y_grid.iter().zip(values.rows()) {
        write!(out, "{y}").unwrap();
        for v in row {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Read a map written by [`write_map`]. The corner cell supplies the
/// estimator unless `kind` is given.
pub fn read_map(path: &Path, kind: Option<EstimatorKind>) -> CliResult<ScMap> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| CliError::format(path, "empty map file"))?;
    let mut cells = header.split(',');
    let corner = cells.next().unwrap_or_default().trim();
    let eps_grid = parse_row(cells, path, 1)?;
    let kind = match kind {
        Some(k) => k,
        None => corner
            .parse()
            .map_err(|_| CliError::format(path, format!("line 1: unknown estimator {corner:?}; pass --estimator")))?,
    };
    let mut f_grid = Vec::new();
    let mut flat = Vec::new();
    for (i, line) in lines {
        let row = parse_row(line.split(','), path, i + 1)?;
        if row.len() != eps_grid.len() + 1 {
            return Err(CliError::format(
                path,
                format!("line {}: {} cells, expected {}", i + 1, row.len(), eps_grid.len() + 1),
            ));
        }
        f_grid.push(row[0]);
        flat.extend_from_slice(&row[1..]);
    }
    let values = Array2::from_shape_vec((f_grid.len(), eps_grid.len()), flat)
        .map_err(|e| CliError::format(path, e.to_string()))?;
    let max = values.iter().copied().fold(0.0, f64::max);
    let mut map = ScMap::new(values, f_grid, eps_grid, kind).map_err(|e| CliError::format(path, e.to_string()))?;
    map.rescaled = max == 1.0;
    Ok(map)
}

fn parse_row<'a>(cells: impl Iterator<Item = &'a str>, path: &Path, line: usize) -> CliResult<Vec<f64>> {
    cells
        .map(|c| {
            let c = c.trim();
            match c.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::format(path, format!("line {line}: bad cell {c:?}"))),
            }
        })
        .collect()
}

pub fn write_report(report: &MetricsReport, path: &Path) -> CliResult<()> {
    write_json(report, path)
}

/// `eps,R_gamma[,R_prime]` table for plotting.
pub fn write_ratio_curve(report: &MetricsReport, path: &Path) -> CliResult<()> {
    let mut out = String::new();
    match &report.column_profile {
        Some(profile) => {
            out.push_str("eps,amp_ratio,column_mean\n");
            for (r, c) in report.amp_ratio.iter().zip(profile) {
                writeln!(out, "{},{},{}", r.eps, r.value, c.value).unwrap();
            }
        }
        None => {
            out.push_str("eps,amp_ratio\n");
            for r in &report.amp_ratio {
                writeln!(out, "{},{}", r.eps, r.value).unwrap();
            }
        }
    }
    write_atomic(path, out.as_bytes())
}
