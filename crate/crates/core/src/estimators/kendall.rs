//! Kendall's rank correlation for real and complex samples.
//!
//! The pair statistic is `sgn(w1_i - w1_j) conj(sgn(w2_i - w2_j))` with the
//! complex sign `z / |z|`, summed over `i < j` and scaled by `2 / (N (N-1))`.
//! For real data that is the classical concordant-minus-discordant count
//! (tau-a, ties contribute 0).

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{csgn, PairedSample};

#[inline]
fn pair_scale(n: usize) -> f64 {
    let n = n as f64;
    2.0 / (n * (n - 1.0))
}

/// Reference `O(N²)` enumeration over all pairs.
pub fn kendall_rho_reference(s: &PairedSample<'_>) -> Complex64 {
    let (w1, w2) = (s.w1(), s.w2());
    let n = w1.len();
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            sum += csgn(w1[i] - w1[j]) * csgn(w2[i] - w2[j]).conj();
        }
    }
    sum * pair_scale(n)
}

/// Kendall's rho. Real inputs use Knight's `O(N log N)` merge-sort count,
/// which yields the same integer pair sum as the reference enumeration.
pub fn kendall_rho(s: &PairedSample<'_>) -> Complex64 {
    if s.is_real() {
        let x: Vec<f64> = s.w1().iter().map(|z| z.re).collect();
        let y: Vec<f64> = s.w2().iter().map(|z| z.re).collect();
        Complex64::new(concordance_sum(&x, &y) as f64 * pair_scale(x.len()), 0.0)
    } else {
        kendall_rho_reference(s)
    }
}

/// Kendall-based estimate of the Pearson correlation, `sin(π ρ / 2)`.
pub fn kendall_corr(s: &PairedSample<'_>) -> Complex64 {
    kendall_transform(kendall_rho(s))
}

pub(crate) fn kendall_transform(rho: Complex64) -> Complex64 {
    (rho * (PI / 2.0)).sin()
}

/// Concordant minus discordant pairs, ties counting zero.
fn concordance_sum(x: &[f64], y: &[f64]) -> i64 {
    let n = x.len();
    let tie_pairs = |count: usize| (count * (count - 1) / 2) as i64;
    let eq = |a: f64, b: f64| a == b;

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| cmp(x[a], x[b]).then_with(|| cmp(y[a], y[b])));

    let mut x_ties = 0i64;
    let mut joint_ties = 0i64;
    let mut run_x = 1usize;
    let mut run_xy = 1usize;
    for k in 1..n {
        let (p, q) = (idx[k - 1], idx[k]);
        if eq(x[p], x[q]) {
            run_x += 1;
            if eq(y[p], y[q]) {
                run_xy += 1;
            } else {
                joint_ties += tie_pairs(run_xy);
                run_xy = 1;
            }
        } else {
            x_ties += tie_pairs(run_x);
            joint_ties += tie_pairs(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    x_ties += tie_pairs(run_x);
    joint_ties += tie_pairs(run_xy);

    let mut ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let mut buf = vec![0.0; n];
    let swaps = merge_count(&mut ys, &mut buf) as i64;

    let mut y_ties = 0i64;
    let mut run_y = 1usize;
    for k in 1..n {
        if eq(ys[k - 1], ys[k]) {
            run_y += 1;
        } else {
            y_ties += tie_pairs(run_y);
            run_y = 1;
        }
    }
    y_ties += tie_pairs(run_y);

    let total = tie_pairs(n);
    total - x_ties - y_ties + joint_ties - 2 * swaps
}

/// Ordering that treats `-0.0 == 0.0`; inputs are finite.
#[inline]
fn cmp(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// Stable merge sort counting strictly inverted pairs.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (left, right) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(left, bl) + merge_count(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Kendall's rho for complex vectors using a single-precision SIMD pair
/// kernel when the CPU supports one (AVX-512F or AVX2+FMA), falling back to
/// [`kendall_rho_reference`] otherwise.
///
/// Each vector is scaled by a power of two (the statistic is invariant to
/// positive scaling) and rounded to `f32`; each pair term is then a unit
/// complex number accurate to roughly `1e-7`, and partial sums are carried in
/// `f64`. Near-ties below single precision count as ties.
pub(crate) fn kendall_rho_fast(w1: &[Complex64], w2: &[Complex64]) -> Complex64 {
    let n = w1.len();
    debug_assert_eq!(n, w2.len());
    if n < 2 {
        return Complex64::new(0.0, 0.0);
    }
    match simd::pair_sum(w1, w2) {
        Some(sum) => sum * pair_scale(n),
        None => {
            let mut sum = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in i + 1..n {
                    sum += csgn(w1[i] - w1[j]) * csgn(w2[i] - w2[j]).conj();
                }
            }
            sum * pair_scale(n)
        }
    }
}

#[cfg(target_arch = "x86_64")]
mod simd {
    use num_complex::Complex64;
    use std::arch::x86_64::*;

    struct Soa {
        re: Vec<f32>,
        im: Vec<f32>,
    }

    fn to_soa(w: &[Complex64]) -> Soa {
        let peak = w.iter().fold(0.0f64, |m, z| m.max(z.re.abs()).max(z.im.abs()));
        // Power-of-two scale: exact in f64, brings every component into [-1, 1].
        let scale = if peak > 0.0 { (-(peak.log2().ceil())).exp2() } else { 1.0 };
        Soa {
            re: w.iter().map(|z| (z.re * scale) as f32).collect(),
            im: w.iter().map(|z| (z.im * scale) as f32).collect(),
        }
    }

    pub(super) fn pair_sum(w1: &[Complex64], w2: &[Complex64]) -> Option<Complex64> {
        if is_x86_feature_detected!("avx512f") {
            let (a, b) = (to_soa(w1), to_soa(w2));
            // SAFETY: feature checked above.
            Some(unsafe { pair_sum_avx512(&a, &b) })
        } else if is_x86_feature_detected!("avx2") && is_x86_feature_detected!("fma") {
            let (a, b) = (to_soa(w1), to_soa(w2));
            // SAFETY: features checked above.
            Some(unsafe { pair_sum_avx2(&a, &b) })
        } else {
            None
        }
    }

    #[inline(always)]
    fn tail(a: &Soa, b: &Soa, i: usize, from: usize) -> (f64, f64) {
        let (mut sr, mut si) = (0.0f64, 0.0f64);
        for k in from..a.re.len() {
            let d1r = (a.re[i] - a.re[k]) as f64;
            let d1i = (a.im[i] - a.im[k]) as f64;
            let d2r = (b.re[i] - b.re[k]) as f64;
            let d2i = (b.im[i] - b.im[k]) as f64;
            let q = (d1r * d1r + d1i * d1i) * (d2r * d2r + d2i * d2i);
            if q > f32::MIN_POSITIVE as f64 {
                let s = 1.0 / q.sqrt();
                sr += (d1r * d2r + d1i * d2i) * s;
                si += (d1i * d2r - d1r * d2i) * s;
            }
        }
        (sr, si)
    }

    #[target_feature(enable = "avx512f")]
    unsafe fn pair_sum_avx512(a: &Soa, b: &Soa) -> Complex64 {
        let n = a.re.len();
        let (ar, ai, br, bi) = (a.re.as_ptr(), a.im.as_ptr(), b.re.as_ptr(), b.im.as_ptr());
        let half = _mm512_set1_ps(0.5);
        let three_half = _mm512_set1_ps(1.5);
        let floor = _mm512_set1_ps(f32::MIN_POSITIVE);
        let (mut sr, mut si) = (0.0f64, 0.0f64);
        for i in 0..n {
            let xr = _mm512_set1_ps(a.re[i]);
            let xi = _mm512_set1_ps(a.im[i]);
            let yr = _mm512_set1_ps(b.re[i]);
            let yi = _mm512_set1_ps(b.im[i]);
            let mut accr = _mm512_setzero_ps();
            let mut acci = _mm512_setzero_ps();
            let mut k = i + 1;
            while k + 16 <= n {
                let d1r = _mm512_sub_ps(xr, _mm512_loadu_ps(ar.add(k)));
                let d1i = _mm512_sub_ps(xi, _mm512_loadu_ps(ai.add(k)));
                let d2r = _mm512_sub_ps(yr, _mm512_loadu_ps(br.add(k)));
                let d2i = _mm512_sub_ps(yi, _mm512_loadu_ps(bi.add(k)));
                let pr = _mm512_fmadd_ps(d1r, d2r, _mm512_mul_ps(d1i, d2i));
                let pi = _mm512_fmsub_ps(d1i, d2r, _mm512_mul_ps(d1r, d2i));
                let q1 = _mm512_fmadd_ps(d1r, d1r, _mm512_mul_ps(d1i, d1i));
                let q2 = _mm512_fmadd_ps(d2r, d2r, _mm512_mul_ps(d2i, d2i));
                let q = _mm512_mul_ps(q1, q2);
                let live = _mm512_cmp_ps_mask::<_CMP_GT_OQ>(q, floor);
                // rsqrt14 plus one Newton step: ~23 correct bits.
                let y0 = _mm512_maskz_rsqrt14_ps(live, q);
                let hq = _mm512_mul_ps(half, q);
                let y = _mm512_mul_ps(y0, _mm512_fnmadd_ps(hq, _mm512_mul_ps(y0, y0), three_half));
                accr = _mm512_fmadd_ps(pr, y, accr);
                acci = _mm512_fmadd_ps(pi, y, acci);
                k += 16;
            }
            sr += _mm512_reduce_add_ps(accr) as f64;
            si += _mm512_reduce_add_ps(acci) as f64;
            let (tr, ti) = tail(a, b, i, k);
            sr += tr;
            si += ti;
        }
        Complex64::new(sr, si)
    }

    #[target_feature(enable = "avx2,fma")]
    unsafe fn pair_sum_avx2(a: &Soa, b: &Soa) -> Complex64 {
        let n = a.re.len();
        let (ar, ai, br, bi) = (a.re.as_ptr(), a.im.as_ptr(), b.re.as_ptr(), b.im.as_ptr());
        let half = _mm256_set1_ps(0.5);
        let three_half = _mm256_set1_ps(1.5);
        let floor = _mm256_set1_ps(f32::MIN_POSITIVE);
        let (mut sr, mut si) = (0.0f64, 0.0f64);
        let mut lanes = [0.0f32; 8];
        for i in 0..n {
            let xr = _mm256_set1_ps(a.re[i]);
            let xi = _mm256_set1_ps(a.im[i]);
            let yr = _mm256_set1_ps(b.re[i]);
            let yi = _mm256_set1_ps(b.im[i]);
            let mut accr = _mm256_setzero_ps();
            let mut acci = _mm256_setzero_ps();
            let mut k = i + 1;
            while k + 8 <= n {
                let d1r = _mm256_sub_ps(xr, _mm256_loadu_ps(ar.add(k)));
                let d1i = _mm256_sub_ps(xi, _mm256_loadu_ps(ai.add(k)));
                let d2r = _mm256_sub_ps(yr, _mm256_loadu_ps(br.add(k)));
                let d2i = _mm256_sub_ps(yi, _mm256_loadu_ps(bi.add(k)));
                let pr = _mm256_fmadd_ps(d1r, d2r, _mm256_mul_ps(d1i, d2i));
                let pi = _mm256_fmsub_ps(d1i, d2r, _mm256_mul_ps(d1r, d2i));
                let q1 = _mm256_fmadd_ps(d1r, d1r, _mm256_mul_ps(d1i, d1i));
                let q2 = _mm256_fmadd_ps(d2r, d2r, _mm256_mul_ps(d2i, d2i));
                let q = _mm256_mul_ps(q1, q2);
                let live = _mm256_cmp_ps::<_CMP_GT_OQ>(q, floor);
                let y0 = _mm256_rsqrt_ps(q);
                let hq = _mm256_mul_ps(half, q);
                let y = _mm256_mul_ps(y0, _mm256_fnmadd_ps(hq, _mm256_mul_ps(y0, y0), three_half));
                let y = _mm256_and_ps(y, live);
                accr = _mm256_fmadd_ps(pr, y, accr);
                acci = _mm256_fmadd_ps(pi, y, acci);
                k += 8;
            }
            _mm256_storeu_ps(lanes.as_mut_ptr(), accr);
            sr += lanes.iter().map(|&v| v as f64).sum::<f64>();
            _mm256_storeu_ps(lanes.as_mut_ptr(), acci);
            si += lanes.iter().map(|&v| v as f64).sum::<f64>();
            let (tr, ti) = tail(a, b, i, k);
            sr += tr;
            si += ti;
        }
        Complex64::new(sr, si)
    }
}

#[cfg(not(target_arch = "x86_64"))]
mod simd {
    use num_complex::Complex64;

    pub(super) fn pair_sum(_: &[Complex64], _: &[Complex64]) -> Option<Complex64> {
        None
    }
}
