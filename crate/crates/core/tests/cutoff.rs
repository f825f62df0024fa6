use eecrit_core::cutoff::*;
use eecrit_core::numeric::{int, rat, Rational};
use eecrit_core::Real;

fn sigma_for(frac: Rational, alpha: &Rational, s: &Rational, d: &Rational) -> Rational {
    frac * alpha / s - d
}

#[test]
fn nested_sweeps() {
    let d = rat(2, 3);
    let alpha = rat(13, 6);
    for s in [rat(4, 5), rat(3, 2)] {
        let sigma = sigma_for(rat(19, 20), &alpha, &s, &d);
        let r = lemma_conv_sweep(&d, &alpha, &sigma, &s, 12).unwrap();
        println!("s={s} 0.95: g={} {:?}", r.increment_growth, r.verdict);
        assert!(r.is_bounded());
        let sigma = sigma_for(rat(11, 10), &alpha, &s, &d);
        let r = lemma_conv_sweep(&d, &alpha, &sigma, &s, 12).unwrap();
        println!("s={s} 1.1: g={} {:?}", r.increment_growth, r.verdict);
        assert!(r.is_divergent());
    }
}

#[test]
fn disjoint_sharpness() {
    let d = rat(1, 2);
    let s = rat(1, 2);
    for (target, bounded) in [(rat(41, 20), false), (rat(19, 10), true), (int(2), true)] {
        let sigma = (target.clone() - &d) / &s;
        let r = sharpness_disjoint(&d, &sigma, &s, 12).unwrap();
        println!(
            "{target}: g={} {:?} last ratio {}",
            r.increment_growth,
            r.verdict,
            r.levels.last().unwrap().ratio
        );
        assert_eq!(r.is_bounded(), bounded, "{target}");
    }
}

#[test]
fn finite_cover_endpoint() {
    // d = 0, s sigma = alpha, s >= 1.
    for s in [int(1), rat(3, 2), int(2)] {
        let sigma = int(2) / &s;
        let r = lemma_conv_sweep(&int(0), &int(2), &sigma, &s, 12).unwrap();
        assert!(r.is_bounded(), "s = {s}: {:?}", r.verdict);
    }
    // At the endpoint with s < 1 the ratio grows like J^(1-s).
    let s = rat(1, 2);
    let r = lemma_conv_sweep(&int(0), &int(2), &int(4), &s, 12).unwrap();
    assert!(r.is_divergent(), "{:?}", r.verdict);
}

#[test]
fn single_cylinder_cutoff() {
    let cover = Cover::single(rat(1, 4), int(2));
    let grid = CutoffGrid {
        dim: 1,
        n: 401,
        nt: 201,
        x_range: (-1.0, 1.0),
        t_range: (-0.25, 0.25),
    };
    let f = build_cutoff(&cover, &grid, 1.0).unwrap();
    assert!(f.checks.passed, "{:?}", f.checks);
    let dx = grid.dx();
    let dt = grid.dt();
    for it in 0..grid.nt {
        let t = grid.t_range.0 + it as f64 * dt;
        for ix in 0..grid.n {
            let x = grid.x_range.0 + ix as f64 * dx;
            let v = f.phi[f.index(it, &[ix])];
            if x.abs() >= 1.9 * 0.25 || t.abs() >= 1.9 / 16.0 {
                assert_eq!(v, 1.0);
            }
            if x.abs() <= 1.1 * 0.25 && t.abs() <= 1.1 / 16.0 {
                assert_eq!(v, 0.0);
            }
        }
    }
}

#[test]
fn overlapping_cylinders_and_bounds() {
    let alpha = int(2);
    let mut a = Cover::single(rat(1, 4), alpha.clone());
    let mut b = Cover::single(rat(1, 8), alpha.clone()).entries.remove(0);
    b.space_center = 0.3;
    a.entries.push(b);
    let both = Cover::new(a.entries.clone(), alpha.clone(), int(0), Layout::Nested);
    let one = Cover::single(rat(1, 4), alpha);
    let grid = CutoffGrid {
        dim: 1,
        n: 801,
        nt: 401,
        x_range: (-0.8, 0.8),
        t_range: (-0.2, 0.2),
    };
    let f2 = build_cutoff(&both, &grid, 1.0).unwrap();
    let f1 = build_cutoff(&one, &grid, 1.0).unwrap();
    assert!(f2.checks.passed, "{:?}", f2.checks);
    assert!(f2.phi.iter().zip(&f1.phi).all(|(x, y)| x <= y));
    for a in [2.0, 3.0] {
        assert!(build_cutoff(&both, &grid, a).unwrap().checks.passed);
    }
}

#[test]
fn three_dimensional_cutoff() {
    let cover = Cover::single(rat(1, 2), int(2));
    let grid = CutoffGrid {
        dim: 3,
        n: 41,
        nt: 41,
        x_range: (-1.0, 1.0),
        t_range: (-0.5, 0.5),
    };
    let f = build_cutoff(&cover, &grid, 1.0).unwrap();
    assert!(f.checks.passed, "{:?}", f.checks);
    let coarse = CutoffGrid { n: 11, ..grid };
    assert!(build_cutoff(&cover, &coarse, 1.0).is_err());
}

#[test]
fn exact_integer_data() {
    let c = make_dyadic_cover(&int(1), 4, Layout::Nested, &int(2)).unwrap();
    assert!(matches!(
        lemma_conv_integral(&c, &int(1), &int(2)),
        Real::Exact(_)
    ));
    assert_eq!(c.recomputed_h(), c.h);
}
