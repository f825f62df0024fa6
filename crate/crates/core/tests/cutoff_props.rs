use eecrit_core::cutoff::{lemma_conv_integral, Cover, CoverEntry, Layout};
use eecrit_core::numeric::{int, pow_rational, rat, Rational};
use eecrit_core::Real;
use num::Zero;
use proptest::prelude::*;

fn entry(j: u32, alpha: u32, center: Rational) -> CoverEntry {
    let r = rat(1, 1 << j);
    CoverEntry {
        generation: j,
        radius: r.clone(),
        time_center: Real::Exact(center),
        half_width: Real::Exact(int(2) * pow_rational(&r, alpha)),
        space_center: 0.5,
    }
}

/// Splits the line at every endpoint and tests each piece's midpoint
/// against each interval.
fn brute_force(cover: &Cover, sigma: u32, s: u32) -> Rational {
    let iv: Vec<(Rational, Rational, Rational)> = cover
        .entries
        .iter()
        .map(|e| {
            let (c, w) = (
                e.time_center.exact().unwrap(),
                e.half_width.exact().unwrap(),
            );
            (c - w, c + w, pow_rational(&e.radius.recip(), sigma))
        })
        .collect();
    let mut cuts: Vec<Rational> = iv
        .iter()
        .flat_map(|(a, b, _)| [a.clone(), b.clone()])
        .collect();
    cuts.sort();
    cuts.dedup();
    let mut total = Rational::zero();
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let f: Rational = iv
            .iter()
            .filter(|(a, b, _)| a < &mid && &mid < b)
            .map(|(_, _, k)| k.clone())
            .sum();
        total += (&w[1] - &w[0]) * pow_rational(&f, s);
    }
    total
}

fn cover_strategy() -> impl Strategy<Value = (Vec<(u32, i64)>, u32)> {
    (prop::collection::vec((0u32..5, -16i64..16), 1..12), 1u32..3)
}

fn build(spec: &[(u32, i64)], alpha: u32) -> Cover {
    let entries = spec
        .iter()
        .map(|&(j, c)| entry(j, alpha, rat(c, 8)))
        .collect();
    Cover::new(entries, int(alpha as i64), int(1), Layout::Nested)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn integer_data_is_exact((spec, alpha) in cover_strategy(), sigma in 0u32..3, s in 1u32..4) {
        let cover = build(&spec, alpha);
        let got = lemma_conv_integral(&cover, &int(sigma as i64), &int(s as i64));
        prop_assert_eq!(got, Real::Exact(brute_force(&cover, sigma, s)));
    }

    #[test]
    fn adding_an_entry_never_decreases((spec, alpha) in cover_strategy(), extra in (0u32..5, -16i64..16), sigma in 0u32..3, s in 1u32..4) {
        let before = lemma_conv_integral(&build(&spec, alpha), &int(sigma as i64), &int(s as i64));
        let mut more = spec.clone();
        more.push(extra);
        let after = lemma_conv_integral(&build(&more, alpha), &int(sigma as i64), &int(s as i64));
        prop_assert!(after.exact().unwrap() >= before.exact().unwrap());
    }

    #[test]
    fn halving_radii_scales_by_power_of_two(n in 1usize..20, j in 0u32..6, an in 1i64..13, sn in 1i64..9, sigman in 0i64..9) {
        let alpha = rat(an, 4);
        let s = rat(sn, 4);
        let sigma = rat(sigman, 4);
        let one_gen = |j: u32| {
            let r = rat(1, 1 << j);
            let w = 2.0 * (1.0 / (1u64 << j) as f64).powf(an as f64 / 4.0);
            let e = CoverEntry { generation: j, radius: r, time_center: Real::Float(0.0), half_width: Real::Float(w), space_center: 0.5 };
            Cover::new(vec![e; n], alpha.clone(), int(0), Layout::Nested)
        };
        let a = lemma_conv_integral(&one_gen(j), &sigma, &s).to_f64();
        let b = lemma_conv_integral(&one_gen(j + 1), &sigma, &s).to_f64();
        let expected = 2f64.powf(-(an as f64 / 4.0 - (sigman * sn) as f64 / 16.0));
        prop_assert!((b / a / expected - 1.0).abs() < 1e-12, "{} vs {}", b / a, expected);
    }
}

#[test]
fn halving_is_exact_for_integer_data() {
    for (alpha, sigma, s) in [(2u32, 1u32, 1u32), (1, 2, 3), (2, 0, 2)] {
        let a = lemma_conv_integral(
            &build(&[(1, 0), (1, 0), (1, 0)], alpha),
            &int(sigma as i64),
            &int(s as i64),
        );
        let b = lemma_conv_integral(
            &build(&[(2, 0), (2, 0), (2, 0)], alpha),
            &int(sigma as i64),
            &int(s as i64),
        );
        let e = sigma as i64 * s as i64 - alpha as i64;
        let factor = if e >= 0 { int(1 << e) } else { rat(1, 1 << -e) };
        assert_eq!(b.exact().unwrap(), &(a.exact().unwrap() * factor));
    }
}
