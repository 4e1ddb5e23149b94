//! Definitional brute-force estimators, written independently of the
//! library: plain loops, full sorts and O(N²) scans.

#![allow(dead_code)]

use num_complex::Complex64;

pub fn cov(w1: &[Complex64], w2: &[Complex64]) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for i in 0..w1.len() {
        let (a, b) = (w1[i], w2[i]);
        re += a.re * b.re + a.im * b.im;
        im += a.im * b.re - a.re * b.im;
    }
    Complex64::new(re, im) / w1.len() as f64
}

pub fn corr(w1: &[Complex64], w2: &[Complex64]) -> Complex64 {
    let n = w1.len() as f64;
    let p1: f64 = w1.iter().map(|z| z.re * z.re + z.im * z.im).sum::<f64>() / n;
    let p2: f64 = w2.iter().map(|z| z.re * z.re + z.im * z.im).sum::<f64>() / n;
    cov(w1, w2) / (p1 * p2).sqrt()
}

/// Mean of the products strictly between the g-th smallest and g-th largest
/// order statistics. A constant product vector keeps its value.
fn trimmed_product_mean(p: &[f64], c: f64) -> f64 {
    let n = p.len();
    let g = (c * n as f64).floor() as usize;
    if g == 0 {
        return p.iter().sum::<f64>() / n as f64;
    }
    let mut sorted = p.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (lo, hi) = (sorted[g - 1], sorted[n - g]);
    let kept: Vec<f64> = p.iter().copied().filter(|&v| lo < v && v < hi).collect();
    if kept.is_empty() {
        assert!(sorted[0] == sorted[n - 1], "oracle: everything trimmed from a non-constant vector");
        return sorted[0];
    }
    kept.iter().sum::<f64>() / kept.len() as f64
}

pub fn trimmed(w1: &[Complex64], w2: &[Complex64], c: f64) -> Complex64 {
    if (c * w1.len() as f64).floor() == 0.0 {
        return cov(w1, w2);
    }
    let prod = |f: &dyn Fn(Complex64, Complex64) -> f64| -> Vec<f64> { w1.iter().zip(w2).map(|(&a, &b)| f(a, b)).collect() };
    let rr = trimmed_product_mean(&prod(&|a, b| a.re * b.re), c);
    let ii = trimmed_product_mean(&prod(&|a, b| a.im * b.im), c);
    let ri = trimmed_product_mean(&prod(&|a, b| a.re * b.im), c);
    let ir = trimmed_product_mean(&prod(&|a, b| a.im * b.re), c);
    Complex64::new(rr + ii, ir - ri)
}

fn sgn(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z / r
    }
}

pub fn kendall_rho(w1: &[Complex64], w2: &[Complex64]) -> Complex64 {
    let n = w1.len();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            s += sgn(w1[i] - w1[j]) * sgn((w2[i] - w2[j]).conj());
        }
    }
    s * (2.0 / (n as f64 * (n as f64 - 1.0)))
}

pub fn kendall(w1: &[Complex64], w2: &[Complex64]) -> Complex64 {
    (kendall_rho(w1, w2) * (std::f64::consts::PI / 2.0)).sin()
}

/// Average ranks minus their mean, by counting.
pub fn centered_ranks(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let below = x.iter().filter(|&&v| v < x[i]).count() as f64;
            let equal = x.iter().filter(|&&v| v == x[i]).count() as f64;
            below + (equal + 1.0) / 2.0 - (n as f64 + 1.0) / 2.0
        })
        .collect()
}

pub fn spearman_rho(w1: &[Complex64], w2: &[Complex64]) -> Complex64 {
    let ranks = |w: &[Complex64]| -> Vec<Complex64> {
        let re: Vec<f64> = w.iter().map(|z| z.re).collect();
        let im: Vec<f64> = w.iter().map(|z| z.im).collect();
        centered_ranks(&re).into_iter().zip(centered_ranks(&im)).map(|(a, b)| Complex64::new(a, b)).collect()
    };
    corr(&ranks(w1), &ranks(w2))
}

pub fn spearman(w1: &[Complex64], w2: &[Complex64]) -> Complex64 {
    (spearman_rho(w1, w2) * (std::f64::consts::PI / 6.0)).sin() * 2.0
}

/// Tie-free real Spearman through the squared rank differences.
pub fn spearman_rho_d2(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (centered_ranks(x), centered_ranks(y));
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

pub fn ncv(w1: &[Complex64], w2: &[Complex64]) -> Complex64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for i in 0..w1.len() {
        num += w1[i] * sgn(w2[i].conj());
        den += w2[i].norm();
    }
    num / den
}

pub fn real(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}
