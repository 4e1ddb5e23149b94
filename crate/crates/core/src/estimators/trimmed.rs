use num_complex::Complex64;

use super::{sample_cov, PairedSample};
use crate::error::{Error, Result};

/// Number of observations trimmed from each tail, `floor(c N)`.
pub fn trimming_count(c: f64, n: usize) -> usize {
    (c * n as f64).floor() as usize
}

/// Trimmed covariance.
///
/// The complex product `w1 conj(w2)` is split into four real products
/// (`Re Re`, `Im Im`, `Re Im`, `Im Re`); each is trimmed independently by
/// discarding values not strictly between its `g`-th and `(N-g+1)`-th order
/// statistics, averaged over what remains, and the four means are recombined
/// as `(ReRe + ImIm) + (ImRe - ReIm) i`. With `g = 0` nothing is trimmed and
/// the result is exactly [`sample_cov`].
pub fn trimmed_cov(s: &PairedSample<'_>, c: f64) -> Result<Complex64> {
    if !(0.0..0.5).contains(&c) {
        return Err(Error::param("c", format!("trimming constant must lie in [0, 0.5), got {c}")));
    }
    let n = s.len();
    let g = trimming_count(c, n);
    if g == 0 {
        return Ok(sample_cov(s));
    }
    let mut products = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut component = |f: &dyn Fn(Complex64, Complex64) -> f64| -> Result<f64> {
        for ((p, a), b) in products.iter_mut().zip(s.w1()).zip(s.w2()) {
            *p = f(*a, *b);
        }
        trimmed_mean(&products, g, &mut scratch)
    };
    let rr = component(&|a, b| a.re * b.re)?;
    let ii = component(&|a, b| a.im * b.im)?;
    let ri = component(&|a, b| a.re * b.im)?;
    let ir = component(&|a, b| a.im * b.re)?;
    Ok(Complex64::new(rr + ii, ir - ri))
}

/// Mean of the values strictly between the `g`-th smallest and `g`-th largest
/// entries (1-based order statistics `g` and `N-g+1`), summed in input order.
/// A constant vector keeps its value even though strict trimming empties it.
pub(crate) fn trimmed_mean(values: &[f64], g: usize, scratch: &mut Vec<f64>) -> Result<f64> {
    let n = values.len();
    debug_assert!(g >= 1 && 2 * g <= n);
    scratch.clear();
    scratch.extend_from_slice(values);
    let (_, &mut lo, upper) = scratch.select_nth_unstable_by(g - 1, f64::total_cmp);
    // `upper` holds order statistics g+1..N, so statistic N-g+1 sits at N-2g.
    let (_, &mut hi, _) = upper.select_nth_unstable_by(n - 2 * g, f64::total_cmp);

    let mut sum = 0.0;
    let mut kept = 0usize;
    for &v in values {
        if lo < v && v < hi {
            sum += v;
            kept += 1;
        }
    }
    if kept > 0 {
        return Ok(sum / kept as f64);
    }
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        Ok(first)
    } else {
        Err(Error::DegenerateInput(format!("trimming with g = {g} removed all {n} observations")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_evaluated_example() {
        // w3 = (1, 4, 9, -10000); g = 1 drops the minimum and the maximum.
        let s = PairedSample::from_real(&[1.0, 2.0, 3.0, 100.0], &[1.0, 2.0, 3.0, -100.0]).unwrap();
        assert_eq!(trimmed_cov(&s, 0.25).unwrap(), Complex64::new(2.5, 0.0));
    }

    #[test]
    fn zero_trimming_is_sample_cov() {
        let w1 = [Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5), Complex64::new(-1.5, 0.25)];
        let w2 = [Complex64::new(1.3, 0.1), Complex64::new(-0.2, 0.9), Complex64::new(0.4, -0.6)];
        let s = PairedSample::new(&w1, &w2).unwrap();
        assert_eq!(trimmed_cov(&s, 0.0).unwrap(), sample_cov(&s));
    }

    #[test]
    fn ties_at_the_cut_are_dropped() {
        // Products (1, 1, 2, 3, 3): g = 1 keeps only values strictly inside (1, 3).
        let s = PairedSample::from_real(&[1.0, 1.0, 2.0, 3.0, 3.0], &[1.0; 5]).unwrap();
        assert_eq!(trimmed_cov(&s, 0.2).unwrap(), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn fully_trimmed_non_constant_is_degenerate() {
        let s = PairedSample::from_real(&[1.0, 1.0, 3.0, 3.0], &[1.0; 4]).unwrap();
        assert!(matches!(trimmed_cov(&s, 0.25), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn constant_products_survive() {
        let s = PairedSample::from_real(&[2.0; 6], &[1.5; 6]).unwrap();
        assert_eq!(trimmed_cov(&s, 0.4).unwrap(), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn rejects_bad_constant() {
        let s = PairedSample::from_real(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert!(trimmed_cov(&s, 0.5).is_err());
        assert!(trimmed_cov(&s, -0.1).is_err());
    }

    #[test]
    fn single_outlier_barely_moves_the_estimate() {
        let n = 1000;
        let w: Vec<f64> = (0..n).map(|k| ((k * 7919) % 1000) as f64 / 500.0 - 1.0).collect();
        let v: Vec<f64> = w.iter().enumerate().map(|(k, x)| 0.8 * x + 0.2 * ((k * 104_729) % 997) as f64 / 498.5 - 0.2).collect();
        let clean = PairedSample::from_real(&w, &v).unwrap();
        let mut w_out = w.clone();
        let mut v_out = v.clone();
        w_out[17] = 1e6;
        v_out[17] = 1e6;
        let dirty = PairedSample::from_real(&w_out, &v_out).unwrap();
        let before = trimmed_cov(&clean, 0.015).unwrap().re;
        let after = trimmed_cov(&dirty, 0.015).unwrap().re;
        assert!(((after - before) / before).abs() < 0.01, "{before} {after}");
        let shift = sample_cov(&dirty).re - sample_cov(&clean).re;
        assert!(shift > 1e8, "{shift}");
    }
}
