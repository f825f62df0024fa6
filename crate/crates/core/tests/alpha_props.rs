use std::cmp::Ordering;

use eecrit_core::alpha::{alpha_cdp, alpha_cf, optimal_alpha_classical, solve_x0};
use eecrit_core::numeric::{from_f64, int, rat, to_f64, Rational};
use proptest::prelude::*;

/// Rational `γ ∈ (3/4, 1)` and `d ∈ (5-4γ, 3)`.
fn envelope_params() -> impl Strategy<Value = (Rational, Rational)> {
    (1i64..100, 1i64..100).prop_map(|(a, b)| {
        let g = rat(3, 4) + rat(a, 400);
        let floor = int(5) - int(4) * &g;
        let d = &floor + (int(3) - &floor) * rat(b, 100);
        (g, d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cdp_endpoint_values((g, d) in envelope_params()) {
        prop_assert_eq!(alpha_cdp(&rat(1, 3), &d, &g).unwrap(), (int(5) - &d) / int(2));
        prop_assert_eq!(alpha_cdp(&rat(1, 2), &d, &g).unwrap(), int(4) * &g / (int(4) * &g - int(3)));
    }

    #[test]
    fn envelopes_cross_once_at_x0((g, d) in envelope_params(), t in 1i64..1000) {
        let x0 = solve_x0(&d, &g).unwrap();
        let hi = std::cmp::min(rat(1, 2), int(2) * &g / int(3));
        let at = |x: &Rational| (alpha_cdp(x, &d, &g).unwrap(), alpha_cf(x, &d, &g).unwrap());
        let x0r = x0.exact.clone().unwrap_or_else(|| from_f64(x0.value).unwrap());
        let (a, b) = at(&x0r);
        prop_assert!((to_f64(&a) - to_f64(&b)).abs() < 1e-10 * to_f64(&b).max(1.0));
        // At 1/3 the enstrophy curve sits below the envelope.
        let (a, b) = at(&rat(1, 3));
        prop_assert!(a < int(2) * &g && int(2) * &g < b);
        let x = &rat(1, 3) + (&hi - rat(1, 3)) * rat(t, 1000);
        let (a, b) = at(&x);
        match x0.cmp_x(&x) {
            Ordering::Less => prop_assert!(a < b, "x = {} before x0 = {}", x, x0.value),
            Ordering::Greater => prop_assert!(a > b, "x = {} past x0 = {}", x, x0.value),
            Ordering::Equal => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn classical_crossover(n in 1i64..200) {
        // d in (1, 3)
        let d = int(1) + rat(2 * n, 200);
        let x0 = solve_x0(&d, &int(1)).unwrap();
        prop_assert_eq!(x0.exact, Some((int(1) + int(3) * &d) / (int(6) + int(6) * &d)));
    }
}

#[test]
fn classical_optimum() {
    for d in [int(0), rat(1, 3), rat(1, 2), int(1)] {
        assert_eq!(optimal_alpha_classical(&d).unwrap(), (int(5) - &d) / int(2));
    }
    for d in [rat(3, 2), int(2), rat(5, 2)] {
        assert_eq!(optimal_alpha_classical(&d).unwrap(), int(2));
        assert_eq!(
            solve_x0(&d, &int(1)).unwrap().exact,
            Some((int(1) + int(3) * &d) / (int(6) + int(6) * &d))
        );
    }
    assert!(optimal_alpha_classical(&int(3)).is_err());
}
