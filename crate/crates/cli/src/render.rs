//! Minimal static heatmaps.
//!
//! The horizontal axis is the map's column grid (ε or time), the vertical
//! axis is frequency increasing upwards. Output is plain RGB PNG with the
//! encoder's fixed default settings, so equal inputs give equal bytes.

use std::io::Cursor;
use std::path::Path;

use cyclorobust::ndarray::Array2;
use cyclorobust::{ScMap, Spectrogram};
use image::{ImageFormat, Rgb, RgbImage};

use crate::error::{CliError, CliResult};
use crate::io::write_atomic;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self { width: 800, height: 600 }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overlay {
    /// Horizontal lines at these two row-axis values.
    pub band: Option<(f64, f64)>,
    /// Dashed vertical markers at these column-axis values.
    pub columns: Vec<f64>,
}

// Viridis sampled at nine evenly spaced points.
const VIRIDIS: [[f64; 3]; 9] = [
    [68.0, 1.0, 84.0],
    [71.0, 44.0, 122.0],
    [59.0, 81.0, 139.0],
    [44.0, 113.0, 142.0],
    [33.0, 144.0, 141.0],
    [39.0, 173.0, 129.0],
    [92.0, 200.0, 99.0],
    [170.0, 220.0, 50.0],
    [253.0, 231.0, 37.0],
];

const BAND_COLOUR: Rgb<u8> = Rgb([230, 30, 30]);
const MARKER_COLOUR: Rgb<u8> = Rgb([255, 255, 255]);

pub fn colormap(t: f64) -> Rgb<u8> {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let pos = t * (VIRIDIS.len() - 1) as f64;
    let i = (pos.floor() as usize).min(VIRIDIS.len() - 2);
    let w = pos - i as f64;
    let c = |k: usize| (VIRIDIS[i][k] * (1.0 - w) + VIRIDIS[i + 1][k] * w).round() as u8;
    Rgb([c(0), c(1), c(2)])
}

/// Draw a `[row, column]` matrix. Values are scaled linearly between the
/// matrix minimum and maximum.
pub fn render_matrix(
    values: &Array2<f64>,
    row_grid: &[f64],
    col_grid: &[f64],
    overlay: &Overlay,
    opts: RenderOptions,
) -> CliResult<RgbImage> {
    let (rows, cols) = values.dim();
    if rows == 0 || cols == 0 {
        return Err(CliError::Usage("cannot render an empty matrix".into()));
    }
    if row_grid.len() != rows || col_grid.len() != cols {
        return Err(CliError::Usage("grid lengths do not match the matrix".into()));
    }
    if opts.width == 0 || opts.height == 0 {
        return Err(CliError::Usage("image dimensions must be positive".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };

    let (w, h) = (opts.width, opts.height);
    let mut img = RgbImage::new(w, h);
    for py in 0..h {
        // Top pixel row shows the highest frequency.
        let r = rows - 1 - ((py as u64 * rows as u64) / h as u64) as usize;
        for px in 0..w {
            let c = ((px as u64 * cols as u64) / w as u64) as usize;
            img.put_pixel(px, py, colormap((values[[r, c]] - lo) / span));
        }
    }

    let to_y = |v: f64| axis_pixel(v, row_grid, h).map(|p| h - 1 - p);
    if let Some((a, b)) = overlay.band {
        for y in [a, b].into_iter().filter_map(to_y) {
            for x in 0..w {
                img.put_pixel(x, y, BAND_COLOUR);
            }
        }
    }
    for x in overlay.columns.iter().filter_map(|&v| axis_pixel(v, col_grid, w)) {
        for y in (0..h).filter(|y| (y / 6) % 2 == 0) {
            img.put_pixel(x, y, MARKER_COLOUR);
        }
    }
    Ok(img)
}

/// Pixel of a value on an axis drawn as equal-width cells, or `None` when
/// the value is outside the grid.
fn axis_pixel(v: f64, grid: &[f64], pixels: u32) -> Option<u32> {
    let (first, last) = (grid[0], grid[grid.len() - 1]);
    if grid.len() == 1 {
        return (v == first).then_some(pixels / 2);
    }
    let step = (last - first) / (grid.len() - 1) as f64;
    let frac = ((v - first) / step + 0.5) / grid.len() as f64;
    if !(0.0..=1.0).contains(&frac) {
        return None;
    }
    Some(((frac * pixels as f64) as u32).min(pixels - 1))
}

pub fn encode_png(img: &RgbImage) -> CliResult<Vec<u8>> {
    let mut buf = Cursor::new(Vec::new());
    img.write_to(&mut buf, ImageFormat::Png)
        .map_err(|e| CliError::Usage(format!("PNG encoding failed: {e}")))?;
    Ok(buf.into_inner())
}

pub fn render_map(map: &ScMap, path: &Path, overlay: &Overlay, opts: RenderOptions) -> CliResult<()> {
    let img = render_matrix(&map.values, &map.f_grid, &map.eps_grid, overlay, opts)?;
    write_atomic(path, &encode_png(&img)?)
}

/// Spectrogram magnitudes in decibels relative to the peak, floored at -80 dB.
pub fn render_spectrogram(sg: &Spectrogram, path: &Path, overlay: &Overlay, opts: RenderOptions) -> CliResult<()> {
    let peak = sg.magnitudes.iter().copied().fold(0.0, f64::max);
    let db = sg.magnitudes.mapv(|m| if peak > 0.0 { (20.0 * (m / peak).log10()).max(-80.0) } else { -80.0 });
    let img = render_matrix(&db, &sg.f_grid, &sg.t_grid, overlay, opts)?;
    write_atomic(path, &encode_png(&img)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(rows: usize, cols: usize) -> Array2<f64> {
        Array2::from_shape_fn((rows, cols), |(r, c)| (r * cols + c) as f64)
    }

    #[test]
    fn colormap_endpoints() {
        assert_eq!(colormap(0.0), Rgb([68, 1, 84]));
        assert_eq!(colormap(1.0), Rgb([253, 231, 37]));
        assert_eq!(colormap(f64::NAN), colormap(0.0));
    }

    #[test]
    fn colormap_brightens_monotonically() {
        let lum = |c: Rgb<u8>| 0.2126 * c[0] as f64 + 0.7152 * c[1] as f64 + 0.0722 * c[2] as f64;
        let l: Vec<f64> = (0..=100).map(|i| lum(colormap(i as f64 / 100.0))).collect();
        assert!(l.windows(2).all(|w| w[1] >= w[0] - 0.5));
    }

    #[test]
    fn dimensions_follow_options() {
        let f: Vec<f64> = (0..257).map(|j| j as f64 * 48.828125).collect();
        let e: Vec<f64> = (3..=100).map(f64::from).collect();
        let img = render_matrix(&ramp(257, 98), &f, &e, &Overlay::default(), RenderOptions { width: 640, height: 480 }).unwrap();
        assert_eq!(img.dimensions(), (640, 480));
    }

    #[test]
    fn band_lines_land_at_their_frequencies() {
        let f: Vec<f64> = (0..257).map(|j| j as f64 * 48.828125).collect();
        let e: Vec<f64> = (3..=100).map(f64::from).collect();
        let values = Array2::zeros((257, 98));
        let opts = RenderOptions { width: 98, height: 257 };
        let overlay = Overlay { band: Some((3500.0, 6500.0)), columns: vec![] };
        let img = render_matrix(&values, &f, &e, &overlay, opts).unwrap();
        let red_rows: Vec<u32> = (0..257).filter(|&y| *img.get_pixel(10, y) == BAND_COLOUR).collect();
        assert_eq!(red_rows.len(), 2);
        // One pixel per row: pixel row y shows bin 256 - y.
        let bins: Vec<f64> = red_rows.iter().map(|&y| f[256 - y as usize]).collect();
        assert!((bins[0] - 6500.0).abs() <= 48.828125 / 2.0 + 1e-9, "{bins:?}");
        assert!((bins[1] - 3500.0).abs() <= 48.828125 / 2.0 + 1e-9, "{bins:?}");
    }

    #[test]
    fn markers_are_dashed_and_in_place() {
        let f: Vec<f64> = (0..10).map(f64::from).collect();
        let e: Vec<f64> = (3..=100).map(f64::from).collect();
        let overlay = Overlay { band: None, columns: vec![30.0, 500.0] };
        let img = render_matrix(&Array2::zeros((10, 98)), &f, &e, &overlay, RenderOptions { width: 98, height: 60 }).unwrap();
        let marked: Vec<u32> = (0..98).filter(|&x| *img.get_pixel(x, 0) == MARKER_COLOUR).collect();
        assert_eq!(marked, vec![27]);
        assert_ne!(*img.get_pixel(27, 7), MARKER_COLOUR);
    }

    #[test]
    fn encoding_is_deterministic() {
        let f: Vec<f64> = (0..20).map(f64::from).collect();
        let e: Vec<f64> = (0..30).map(f64::from).collect();
        let a = encode_png(&render_matrix(&ramp(20, 30), &f, &e, &Overlay::default(), RenderOptions::default()).unwrap()).unwrap();
        let b = encode_png(&render_matrix(&ramp(20, 30), &f, &e, &Overlay::default(), RenderOptions::default()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(&a[1..4], b"PNG");
    }

    #[test]
    fn empty_matrix_is_rejected() {
        assert!(render_matrix(&Array2::zeros((0, 3)), &[], &[1.0, 2.0, 3.0], &Overlay::default(), RenderOptions::default()).is_err());
    }
}
