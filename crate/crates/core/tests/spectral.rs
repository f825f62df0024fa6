use std::f64::consts::PI;
use std::time::Instant;

use eecrit_core::spectral::*;

#[test]
fn semigroup_and_parseval() {
    for dim in [1, 2, 3] {
        let n = if dim == 3 { 16 } else { 64 };
        let f = band_limited(dim, n, n / 8, 7).unwrap();
        let a = fractional_laplacian(&fractional_laplacian(&f, 0.3).unwrap(), 0.5).unwrap();
        let b = fractional_laplacian(&f, 0.8).unwrap();
        let err = a.map2(&b, |x, y| x - y).unwrap().lp_norm(f64::INFINITY);
        assert!(
            err < 1e-9 * b.lp_norm(f64::INFINITY).max(1.0),
            "dim {dim}: {err}"
        );
        let (l2, sp) = (f.lp_norm(2.0), f.spectral_l2());
        assert!(
            (l2 - sp).abs() < 1e-10 * l2.max(1.0),
            "dim {dim}: {l2} vs {sp}"
        );
    }
}

#[test]
fn interpolation_single_mode_and_constant() {
    let phi = PeriodicField::from_fn(1, 512, |x| (7.0 * x[0]).cos()).unwrap();
    for g in [0.3, 0.7] {
        let r = interpolation_bound_ratio(&phi, g, 2.0).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-10);
    }
    let d = dilation_sweep(Experiment::Interpolation, &phi, &phi, 0.5, 2.0, &[1, 2, 4]).unwrap();
    assert!(d.ratios.iter().all(|r| (r - 1.0).abs() < 1e-10));
    let c = PeriodicField::constant(1, 64, 3.0).unwrap();
    let r = interpolation_bound_ratio(&c, 0.5, 2.0).unwrap();
    assert_eq!(r.ratio, 0.0);
    let d = dilation_sweep(Experiment::Interpolation, &phi, &phi, 0.5, 2.0, &[1]).unwrap();
    assert_eq!(d.max_over_min, 1.0);
}

#[test]
fn interpolation_cutoff_dilations() {
    let phi = periodic_cutoff(1, 4096, 0.8).unwrap();
    let d = dilation_sweep(Experiment::Interpolation, &phi, &phi, 0.7, 2.0, &[1, 2, 4]).unwrap();
    assert!(d.ratios.iter().all(|r| r.is_finite() && *r > 0.0));
    assert!(d.max_over_min <= 2.0, "{:?}", d);
}

#[test]
fn commutator_trivial_cases_and_bilinearity() {
    let n = 256;
    let u = band_limited(1, n, n / 8, 3).unwrap();
    let phi = band_limited(1, n, n / 8, 4).unwrap();
    let c = PeriodicField::constant(1, n, 2.0).unwrap();
    assert!(
        commutator_residual(&c, &phi, 0.5)
            .unwrap()
            .lp_norm(f64::INFINITY)
            < 1e-10
    );
    assert!(
        commutator_residual(&u, &c, 0.5)
            .unwrap()
            .lp_norm(f64::INFINITY)
            < 1e-10
    );
    assert_eq!(commutator_report(&u, &c, 0.5, 4.0).unwrap().ratio, 0.0);
    let u2 = band_limited(1, n, n / 8, 5).unwrap();
    let sum = u.map2(&u2, |a, b| a + b).unwrap();
    let lhs = commutator_residual(&sum, &phi, 0.6).unwrap();
    let r1 = commutator_residual(&u, &phi, 0.6).unwrap();
    let r2 = commutator_residual(&u2, &phi, 0.6).unwrap();
    let err = lhs
        .map2(&r1.map2(&r2, |a, b| a + b).unwrap(), |a, b| a - b)
        .unwrap()
        .lp_norm(f64::INFINITY);
    assert!(err < 1e-10, "{err}");
}

#[test]
fn commutator_closed_form() {
    let n = 4096;
    let u = PeriodicField::from_fn(1, n, |x| (3.0 * x[0]).cos()).unwrap();
    let phi = PeriodicField::from_fn(1, n, |x| (5.0 * x[0]).cos()).unwrap();
    let r = commutator_report(&u, &phi, 0.5, 4.0).unwrap();
    assert!((r.lhs - commutator_two_mode(3, 5, 0.5)).abs() < 1e-9);
    let expect = (PI
        * 0.25
        * ((8f64.sqrt() - 3f64.sqrt() - 5f64.sqrt()).powi(2)
            + (2f64.sqrt() - 3f64.sqrt() - 5f64.sqrt()).powi(2)))
    .sqrt();
    assert!((r.lhs - expect).abs() < 1e-9);
}

#[test]
fn commutator_dilation() {
    let n = 1024;
    let u = band_limited(1, n, 32, 11).unwrap();
    let phi = band_limited(1, n, 32, 12).unwrap();
    for p in [2.0, 4.0] {
        let d = dilation_sweep(Experiment::Commutator, &u, &phi, 0.5, p, &[1, 2]).unwrap();
        assert!(d.max_over_min <= 1.25, "{:?}", d);
    }
}

#[test]
fn corpus_stability() {
    let start = Instant::now();
    let cfg = CorpusConfig::default();
    for (exp, g, e) in documented_corpus() {
        let r = corpus_report(exp, &cfg, g, e).unwrap();
        println!(
            "{exp:?} gamma={g} exponent={e}: max {:.6} refined {:.6} change {:.2e}",
            r.max_ratio, r.refined_max_ratio, r.relative_change
        );
        assert!(r.stable, "{r:?}");
    }
    assert!(start.elapsed().as_secs_f64() < 120.0);
}
