use eecrit_core::criteria::baselines_exact;
use eecrit_core::criteria::closed_form::{optimal_line, xy_curve};
use eecrit_core::numeric::{int, rat};
use eecrit_core::region::boundary::{build_region, piece_residual};
use eecrit_core::region::closure::{interpolation_closure, lions_implicated, ClosureLattice};
use eecrit_core::region::compare::{compare_grids, compare_regions, evaluate_grid};
use eecrit_core::{
    constraint_family, final_verdict, ExponentPoint, Point, Rational, Real, RegionModel, Scenario,
    Source, Status,
};
use num::Zero;
use proptest::prelude::*;

/// The three conditions of the main theorem, read off directly.
fn main_theorem(x: &Rational, y: &Rational) -> bool {
    let half = rat(1, 2);
    let third = rat(1, 3);
    let branch1 = x + y <= half && y <= &third && x <= y;
    let branch2 = x + y < half && x <= &third && y < x;
    let branch3 = x > &third && int(7) * x - int(6) * x * x + int(2) * y < int(2);
    branch1 || branch2 || branch3
}

fn guaranteed(x: &Rational, y: &Rational, s: &Scenario) -> bool {
    final_verdict(&ExponentPoint::exact(x.clone(), y.clone()), s)
        .unwrap()
        .status
        == Status::Guaranteed
}

fn frac(max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den).prop_flat_map(|den| (0..=den).prop_map(move |num| rat(num, den)))
}

/// Points of one branch of the main theorem, a quarter of them on its
/// boundary equation.
fn branch(k: u8) -> impl Strategy<Value = (Rational, Rational)> {
    (frac(997), frac(997), any::<bool>(), any::<bool>()).prop_map(move |(s, t, edge, low)| {
        let third = rat(1, 3);
        let half = rat(1, 2);
        let on_edge = edge && low;
        match k {
            // x ≤ y ≤ 1/3
            0 => {
                let y = &s * &third;
                let x = &t * &y;
                if on_edge {
                    // x + y = 1/2 with 1/4 ≤ y ≤ 1/3
                    let y = rat(1, 4) + &s * rat(1, 12);
                    (&half - &y, y)
                } else {
                    (x, y)
                }
            }
            // y < x ≤ 1/3
            1 => {
                let x = &s * &third;
                let y = &t * &x * rat(999, 1000);
                if on_edge {
                    let x = rat(1, 4) + &s * rat(1, 12);
                    (x.clone(), &half - &x)
                } else {
                    (x, y)
                }
            }
            // x > 1/3, on or near the curve 7x - 6x² + 2y = 2
            _ => {
                let x = &third + (&s * rat(1, 6)).max(rat(1, 6000));
                if on_edge {
                    let y = (int(2) - int(7) * &x + int(6) * &x * &x) / int(2);
                    (x, y)
                } else {
                    (x, &t * &half)
                }
            }
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn main_theorem_branch_one((x, y) in branch(0)) {
        let s = Scenario::classical_slice(int(1));
        prop_assert_eq!(guaranteed(&x, &y, &s), main_theorem(&x, &y), "({}, {})", x, y);
    }

    #[test]
    fn main_theorem_branch_two((x, y) in branch(1)) {
        let s = Scenario::classical_slice(int(1));
        prop_assert_eq!(guaranteed(&x, &y, &s), main_theorem(&x, &y), "({}, {})", x, y);
    }

    #[test]
    fn main_theorem_branch_three((x, y) in branch(2)) {
        let s = Scenario::classical_slice(int(1));
        prop_assert_eq!(guaranteed(&x, &y, &s), main_theorem(&x, &y), "({}, {})", x, y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn regions_shrink_as_d_grows(x in frac(200), y in frac(200), a in 0i64..=60, b in 0i64..=60) {
        let (x, y) = (x / int(2), y / int(2));
        let (d1, d2) = (rat(a.min(b), 60), rat(a.max(b), 60));
        if guaranteed(&x, &y, &Scenario::classical_slice(d2.clone())) {
            prop_assert!(guaranteed(&x, &y, &Scenario::classical_slice(d1.clone())), "({}, {}) d1={} d2={}", x, y, d1, d2);
        }
    }

    #[test]
    fn classical_baselines_are_covered(x in frac(300), y in frac(300)) {
        let (x, y) = (x / int(2), y / int(2));
        if !baselines_exact(&Point::new(x.clone(), y.clone())).is_empty() {
            prop_assert!(guaranteed(&x, &y, &Scenario::classical_slice(int(1))), "({}, {})", x, y);
        }
    }
}

fn figure_scenarios() -> Vec<Scenario> {
    eecrit_core::region::figures::figures()
        .iter()
        .map(|f| f.scenario().unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exported_boundary_matches_verdicts(k in 0usize..11, x in frac(499), y in frac(499)) {
        use eecrit_core::region::boundary::BoundaryTest;
        let s = &figure_scenarios()[k];
        let (x, y) = (x / int(2), y / int(2));
        let rb = build_region(s).unwrap();
        let tol = if rb.approximate { 5e-3 } else { 1e-9 };
        let p = Point::new(x.clone(), y.clone()).to_f64();
        let t = rb.test_point(&p, tol);
        if !matches!(t, BoundaryTest::OnBoundary { .. }) {
            // The exported region leaves out the classical baselines.
            let v = final_verdict(&ExponentPoint::exact(x.clone(), y.clone()), s).unwrap();
            let own = v.status == Status::Guaranteed && matches!(v.source, Source::ThisPaper | Source::Interpolation);
            prop_assert_eq!(own, t == BoundaryTest::Inside, "{}: ({}, {})", s, x, y);
        }
    }
}

#[test]
fn lions_point_baselines() {
    let b = baselines_exact(&Point::new(rat(1, 4), rat(1, 4)));
    assert_eq!(b, vec![Source::Lions, Source::Shinbrot]);
}

#[test]
fn curve_pivots_and_start() {
    for d in [int(0), rat(1, 3), rat(1, 2), int(1), rat(3, 2), int(2)] {
        let q = xy_curve(&d, &int(1));
        assert!(q.eval(&Point::new(rat(1, 6), rat(1, 2))).is_zero());
        assert!(q.eval(&Point::new(rat(1, 2), int(0))).is_zero());
        let start = Point::new(rat(1, 3), (int(3) - &d) / (int(15) - int(3) * &d));
        assert!(q.eval(&start).is_zero());
        assert!(optimal_line(&d).slack(&start).is_zero());
    }
    for g in [rat(3, 5), rat(3, 4), rat(9, 10)] {
        for d in [int(0), rat(1, 2)] {
            let q = xy_curve(&d, &g);
            let lh_top = Point::new((int(3) - int(2) * &g) / int(6), rat(1, 2));
            assert!(q.eval(&lh_top).is_zero(), "gamma {g} d {d}");
            assert!(q.eval(&Point::new(rat(1, 2), int(0))).is_zero());
        }
    }
}

#[test]
fn general_case_collapses_to_lions() {
    let model = RegionModel::new(&Scenario::general(int(1), int(1)).unwrap()).unwrap();
    let lions = lions_implicated();
    let r = compare_regions(
        &|p: &ExponentPoint| model.contains(p),
        &|p: &ExponentPoint| lions.contains(p),
        201,
    )
    .unwrap();
    assert!(
        r.all_within_boundary_cells,
        "{} interior disagreements",
        r.interior_disagreements
    );
}

#[test]
fn vertex_equations_vanish() {
    let slice_ds = [
        int(0),
        rat(1, 3),
        rat(1, 2),
        rat(2, 3),
        int(1),
        rat(3, 2),
        int(2),
        rat(5, 2),
    ];
    let mut scenarios: Vec<Scenario> = slice_ds
        .iter()
        .cloned()
        .map(Scenario::classical_slice)
        .collect();
    scenarios.extend(
        [rat(1, 4), rat(1, 2), rat(3, 4), int(1)].map(|d| Scenario::general(int(1), d).unwrap()),
    );
    for s in scenarios {
        let rb = build_region(&s).unwrap();
        let family = s.forced_alpha().map(|a| constraint_family(&s, &a).unwrap());
        for v in &rb.vertices {
            let incident: Vec<_> = rb
                .pieces
                .iter()
                .filter(|p| p.start == v.point || p.end == v.point)
                .collect();
            assert!(!incident.is_empty(), "{s}: {} isolated", v.label);
            for piece in incident {
                assert!(
                    matches!(piece_residual(piece, &v.point), Real::Exact(ref r) if r.is_zero()),
                    "{s}: {} on {}",
                    v.label,
                    piece.id
                );
                let Some(fam) = &family else { continue };
                let ExponentPoint::Exact { x, y } = &v.point else {
                    panic!("{s}: inexact vertex {}", v.label)
                };
                let p = Point::new(x.clone(), y.clone());
                for id in &piece.constraints {
                    let on = fam
                        .constraints
                        .iter()
                        .filter(|c| c.id == *id)
                        .any(|c| c.slack(&p).is_zero());
                    assert!(on, "{s}: {} off {:?}", v.label, id);
                }
            }
        }
    }
}

#[test]
fn closure_is_idempotent() {
    let res = 101;
    let lattice = ClosureLattice {
        n_b: 25,
        n_theta: 25,
        tol: 1e-9,
    };
    for s in [
        Scenario::general(int(1), rat(1, 2)).unwrap(),
        Scenario::general(rat(4, 5), int(2)).unwrap(),
    ] {
        let model = RegionModel::new(&s).unwrap();
        let once = evaluate_grid(&|p: &ExponentPoint| model.contains(p), res);
        let twice_fn = interpolation_closure(
            move |p: &ExponentPoint| model.contains(p),
            &s.gamma,
            lattice,
        );
        let twice = evaluate_grid(&twice_fn, res);
        let r = compare_grids(&once, &twice);
        assert!(
            r.all_within_boundary_cells,
            "{s}: {} interior disagreements",
            r.interior_disagreements
        );
    }
}
