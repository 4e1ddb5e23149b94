use num_complex::Complex64;

use super::{sample_corr, PairedSample, SpearmanTransform};
use crate::error::Result;

/// Zero-mean ranks with average ranks on ties.
///
/// Entries comparing equal (including `-0.0` and `0.0`) share the mean of the
/// ranks they span; `(N + 1) / 2` is then subtracted from every rank.
pub fn centered_ranks(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut order: Vec<(f64, usize)> = x.iter().copied().zip(0..).collect();
    order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let center = (n as f64 + 1.0) / 2.0;
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && order[end].0 == order[start].0 {
            end += 1;
        }
        // 1-based ranks start+1 ..= end share their mean.
        let avg = (start + 1 + end) as f64 / 2.0;
        for &(_, idx) in &order[start..end] {
            ranks[idx] = avg - center;
        }
        start = end;
    }
    ranks
}

fn complex_ranks(w: &[Complex64]) -> Vec<Complex64> {
    let re: Vec<f64> = w.iter().map(|z| z.re).collect();
    let im: Vec<f64> = w.iter().map(|z| z.im).collect();
    centered_ranks(&re)
        .into_iter()
        .zip(centered_ranks(&im))
        .map(|(r, i)| Complex64::new(r, i))
        .collect()
}

/// Spearman's rho: sample correlation of the centred rank vectors, with real
/// and imaginary parts ranked separately for complex inputs.
pub fn spearman_rho(s: &PairedSample<'_>) -> Result<Complex64> {
    let r1 = complex_ranks(s.w1());
    let r2 = complex_ranks(s.w2());
    sample_corr(&PairedSample::from_vecs(r1, r2)?)
}

/// Spearman-based estimate of the Pearson correlation.
pub fn spearman_corr(s: &PairedSample<'_>, transform: SpearmanTransform) -> Result<Complex64> {
    let rho = spearman_rho(s)?;
    Ok(spearman_transform(rho, transform))
}

pub(crate) fn spearman_transform(rho: Complex64, transform: SpearmanTransform) -> Complex64 {
    use std::f64::consts::PI;
    match transform {
        SpearmanTransform::Standard => (rho * (PI / 6.0)).sin() * 2.0,
        SpearmanTransform::Printed => (rho * (PI / 3.0)).sin(),
    }
}
