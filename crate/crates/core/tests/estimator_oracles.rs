mod support;

use cyclorobust::estimators::{
    kendall_corr, kendall_rho, ncv, sample_corr, sample_cov, spearman_corr, spearman_rho, trimmed_cov,
};
use cyclorobust::{estimate, EstimatorKind, PairedSample, SpearmanTransform};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::oracles;

const TOL: f64 = 1e-12;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

fn real_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, n)
}

fn real_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..120).prop_flat_map(|n| (real_vec(n), real_vec(n)))
}

fn complex_pair() -> impl Strategy<Value = (Vec<Complex64>, Vec<Complex64>)> {
    (2usize..80).prop_flat_map(|n| {
        let v = prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0).prop_map(|(a, b)| Complex64::new(a, b)), n);
        (v.clone(), v)
    })
}

/// Quantised values so ties are common.
fn tied_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..60).prop_flat_map(|n| {
        let v = prop::collection::vec((-3i32..=3).prop_map(f64::from), n);
        (v.clone(), v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn real_inputs_match_definitions((x, y) in real_pair(), c in 0.0f64..0.3) {
        let s = PairedSample::from_real(&x, &y).unwrap();
        let (a, b) = (oracles::real(&x), oracles::real(&y));
        prop_assert!(close(sample_cov(&s), oracles::cov(&a, &b), TOL));
        prop_assert!(close(sample_corr(&s).unwrap(), oracles::corr(&a, &b), TOL));
        prop_assert!(close(trimmed_cov(&s, c).unwrap(), oracles::trimmed(&a, &b, c), TOL));
        prop_assert!(close(kendall_corr(&s), oracles::kendall(&a, &b), TOL));
        prop_assert!(close(spearman_corr(&s, SpearmanTransform::Standard).unwrap(), oracles::spearman(&a, &b), TOL));
        prop_assert!(close(ncv(&s).unwrap(), oracles::ncv(&a, &b), TOL));
    }

    #[test]
    fn complex_inputs_match_definitions((x, y) in complex_pair(), c in 0.0f64..0.3) {
        let s = PairedSample::new(&x, &y).unwrap();
        prop_assert!(close(sample_cov(&s), oracles::cov(&x, &y), TOL));
        prop_assert!(close(sample_corr(&s).unwrap(), oracles::corr(&x, &y), TOL));
        prop_assert!(close(trimmed_cov(&s, c).unwrap(), oracles::trimmed(&x, &y, c), TOL));
        prop_assert!(close(kendall_rho(&s), oracles::kendall_rho(&x, &y), TOL));
        prop_assert!(close(kendall_corr(&s), oracles::kendall(&x, &y), TOL));
        prop_assert!(close(spearman_rho(&s).unwrap(), oracles::spearman_rho(&x, &y), TOL));
        prop_assert!(close(ncv(&s).unwrap(), oracles::ncv(&x, &y), TOL));
    }

    #[test]
    fn ties_match_definitions((x, y) in tied_pair()) {
        let s = PairedSample::from_real(&x, &y).unwrap();
        let (a, b) = (oracles::real(&x), oracles::real(&y));
        prop_assert!(close(kendall_rho(&s), oracles::kendall_rho(&a, &b), TOL));
        if let Ok(v) = spearman_rho(&s) {
            prop_assert!(close(v, oracles::spearman_rho(&a, &b), TOL));
        }
        if let Ok(v) = trimmed_cov(&s, 0.1) {
            prop_assert!(close(v, oracles::trimmed(&a, &b, 0.1), TOL));
        }
    }

    #[test]
    fn real_estimates_are_bounded((x, y) in real_pair()) {
        let s = PairedSample::from_real(&x, &y).unwrap();
        prop_assert!(sample_corr(&s).unwrap().norm() <= 1.0 + 1e-12);
        for v in [kendall_rho(&s), spearman_rho(&s).unwrap(), kendall_corr(&s), spearman_corr(&s, SpearmanTransform::Standard).unwrap()] {
            prop_assert!(v.im == 0.0 && v.re.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn rank_statistics_ignore_monotone_maps((x, y) in real_pair()) {
        let s = PairedSample::from_real(&x, &y).unwrap();
        let tx: Vec<f64> = x.iter().map(|v| v.powi(3) + 2.0 * v).collect();
        let ty: Vec<f64> = y.iter().map(|v| (v / 10.0).exp()).collect();
        let t = PairedSample::from_real(&tx, &ty).unwrap();
        prop_assert_eq!(kendall_rho(&s), kendall_rho(&t));
        prop_assert_eq!(spearman_rho(&s).unwrap(), spearman_rho(&t).unwrap());
    }

    #[test]
    fn conjugate_symmetry((x, y) in complex_pair()) {
        let s = PairedSample::new(&x, &y).unwrap();
        let t = PairedSample::new(&y, &x).unwrap();
        for kind in [EstimatorKind::SampleAcvf, EstimatorKind::SampleAcf, EstimatorKind::Trimmed { c: 0.05 }, EstimatorKind::Kendall, EstimatorKind::spearman()] {
            let a = estimate(&kind, &s).unwrap();
            let b = estimate(&kind, &t).unwrap();
            prop_assert!(close(a, b.conj(), 1e-12), "{kind}: {a} vs {b}");
        }
    }
}

#[test]
fn tie_free_spearman_equals_squared_difference_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let x: Vec<f64> = (0..10).map(|_| rng.random()).collect();
        let y: Vec<f64> = (0..10).map(|_| rng.random()).collect();
        let s = PairedSample::from_real(&x, &y).unwrap();
        assert!((spearman_rho(&s).unwrap().re - oracles::spearman_rho_d2(&x, &y)).abs() < 1e-12);
    }
}

#[test]
fn dispatch_agrees_with_direct_calls() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.random_range(2..40);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s = PairedSample::from_real(&x, &y).unwrap();
        assert!(close(estimate(&EstimatorKind::SampleAcf, &s).unwrap(), sample_corr(&s).unwrap(), 1e-12));
        assert_eq!(estimate(&EstimatorKind::Trimmed { c: 0.0 }, &s).unwrap(), estimate(&EstimatorKind::SampleAcvf, &s).unwrap());
    }
}

#[test]
fn one_outlier_barely_moves_robust_estimates() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let n = 1000;
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let y: Vec<f64> = x.iter().map(|v| v + rng.random_range(-0.5..0.5)).collect();
    let (mut xo, mut yo) = (x.clone(), y.clone());
    xo[17] = 1e6;
    yo[17] = 1e6;
    let s = PairedSample::from_real(&x, &y).unwrap();
    let o = PairedSample::from_real(&xo, &yo).unwrap();

    let dk = (kendall_rho(&s) - kendall_rho(&o)).norm();
    assert!(dk <= 4.0 / (n as f64 - 1.0), "{dk}");
    let (t0, t1) = (trimmed_cov(&s, 0.015).unwrap().re, trimmed_cov(&o, 0.015).unwrap().re);
    assert!(((t1 - t0) / t0).abs() < 0.01, "{t0} {t1}");
    let (c0, c1) = (sample_cov(&s).re, sample_cov(&o).re);
    assert!(c1 - c0 > 1e11 / n as f64 * 0.9, "{c0} {c1}");
}

/// Correlated standard normal pair via polar Box-Muller.
pub fn gaussian_pair(rng: &mut ChaCha8Rng, rho: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut normal = || loop {
        let (u, v): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    };
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let (a, b) = (normal(), normal());
        x.push(a);
        y.push(rho * a + (1.0 - rho * rho).sqrt() * b);
    }
    (x, y)
}

#[test]
fn sine_transforms_recover_gaussian_correlation() {
    for (k, rho) in [0.0, 0.5, 0.9].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
        let (x, y) = gaussian_pair(&mut rng, rho, 20_000);
        let s = PairedSample::from_real(&x, &y).unwrap();
        let m3 = kendall_corr(&s).re;
        let m4 = spearman_corr(&s, SpearmanTransform::Standard).unwrap().re;
        assert!((m3 - rho).abs() < 0.03, "rho {rho}: kendall {m3}");
        assert!((m4 - rho).abs() < 0.03, "rho {rho}: spearman {m4}");
    }
}

#[test]
fn printed_spearman_constant_falls_short_at_full_dependence() {
    let x: Vec<f64> = (0..20).map(f64::from).collect();
    let s = PairedSample::from_real(&x, &x).unwrap();
    let printed = spearman_corr(&s, SpearmanTransform::Printed).unwrap().re;
    assert!((printed - (std::f64::consts::PI / 3.0).sin()).abs() < 1e-12);
    assert!((spearman_corr(&s, SpearmanTransform::Standard).unwrap().re - 1.0).abs() < 1e-12);
}
