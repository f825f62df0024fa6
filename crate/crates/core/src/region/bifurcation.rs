//! Thresholds in `d` where the fractional space-time diagram changes shape.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{format_rational, int, rat, rational_sqrt, to_f64, Rational, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub id: String,
    pub formula: String,
    pub value: Real,
    pub description: String,
    /// Position in the order the transitions are narrated (0-based).
    pub narrative_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BifurcationList {
    #[serde(with = "crate::numeric::serde_rational")]
    pub gamma: Rational,
    /// Sorted by value.
    pub thresholds: Vec<Threshold>,
    /// Pairs whose computed order contradicts the narrated one.
    pub anomalies: Vec<String>,
}

/// `a + b √r`, exact when `r` is a rational square.
fn surd(a: Rational, b: Rational, r: Rational) -> Real {
    match rational_sqrt(&r) {
        Some(s) => Real::Exact(a + b * s),
        None => Real::Float(to_f64(&a) + to_f64(&b) * to_f64(&r).sqrt()),
    }
}

pub fn bifurcation_thresholds(gamma: &Rational) -> Result<BifurcationList> {
    let g = gamma;
    if g <= &int(0) || g >= &int(1) {
        return Err(Error::OutOfDomain(format!(
            "bifurcation thresholds need 0 < gamma < 1, got {}",
            format_rational(g)
        )));
    }
    let one = int(1);
    let listed: Vec<(&str, &str, Real, &str)> = vec![
        (
            "dp_interpolation_vanishes",
            "2γ-1",
            Real::Exact(int(2) * g - &one),
            "the region obtained for p < 3 by interpolation disappears",
        ),
        (
            "fg_lower_cuts_dp",
            "(5+γ-√(9γ²-18γ+25))/2",
            surd(
                (int(5) + g) / int(2),
                rat(-1, 2),
                int(9) * g * g - int(18) * g + int(25),
            ),
            "the lower FG-line cuts into both DP-lines",
        ),
        (
            "fg_lower_dominates",
            "(5γ-4γ²)/(3-2γ)",
            Real::Exact((int(5) * g - int(4) * g * g) / (int(3) - int(2) * g)),
            "the lower FG-line is more stringent than the lower DP-line below the bisectrice",
        ),
        (
            "fg_upper_dominates",
            "1",
            Real::Exact(one.clone()),
            "the upper FG-line becomes more stringent than the upper DP-line",
        ),
        (
            "fg_limiting_everywhere",
            "2γ+1-2√(3γ²-3γ+1)",
            surd(
                int(2) * g + &one,
                int(-2),
                int(3) * g * g - int(3) * g + &one,
            ),
            "the FG restrictions are limiting everywhere",
        ),
        (
            "lions_point_on_fg",
            "2-γ",
            Real::Exact(int(2) - g),
            "the Lions point lies on the lower FG segment",
        ),
        (
            "below_bisectrice_vanishes",
            "γ(5-4γ)",
            Real::Exact(g * (int(5) - int(4) * g)),
            "the new region below the bisectrice disappears",
        ),
        (
            "absorbed_by_lions",
            "(2-γ)/γ",
            Real::Exact((int(2) - g) / g),
            "the new region disappears into the Lions region",
        ),
    ];
    let mut thresholds: Vec<Threshold> = listed
        .into_iter()
        .enumerate()
        .map(|(k, (id, formula, value, description))| Threshold {
            id: id.into(),
            formula: formula.into(),
            value,
            description: description.into(),
            narrative_rank: k,
        })
        .collect();
    let mut anomalies = vec![];
    for (i, a) in thresholds.iter().enumerate() {
        for b in &thresholds[i + 1..] {
            if a.value.to_f64() > b.value.to_f64() + 1e-12 {
                anomalies.push(format!(
                    "{} = {:.6} is narrated before {} = {:.6}",
                    a.formula,
                    a.value.to_f64(),
                    b.formula,
                    b.value.to_f64()
                ));
            }
        }
    }
    thresholds.sort_by(|a, b| {
        a.value
            .to_f64()
            .total_cmp(&b.value.to_f64())
            .then(a.narrative_rank.cmp(&b.narrative_rank))
    });
    Ok(BifurcationList {
        gamma: g.clone(),
        thresholds,
        anomalies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(list: &BifurcationList, id: &str) -> f64 {
        list.thresholds
            .iter()
            .find(|t| t.id == id)
            .unwrap()
            .value
            .to_f64()
    }

    #[test]
    fn gamma_four_fifths() {
        let l = bifurcation_thresholds(&rat(4, 5)).unwrap();
        assert!((value(&l, "dp_interpolation_vanishes") - 0.6).abs() < 1e-12);
        assert!((value(&l, "fg_lower_cuts_dp") - 0.5 * (5.8 - 16.36f64.sqrt())).abs() < 1e-12);
        assert!((value(&l, "fg_lower_dominates") - 1.44 / 1.4).abs() < 1e-12);
        assert!(l
            .anomalies
            .iter()
            .any(|a| a.starts_with("(5γ-4γ²)/(3-2γ)") && a.contains("before 1 ")));
        let v: Vec<f64> = l.thresholds.iter().map(|t| t.value.to_f64()).collect();
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn out_of_range() {
        assert!(bifurcation_thresholds(&int(1)).is_err());
        assert!(bifurcation_thresholds(&int(0)).is_err());
    }
}
