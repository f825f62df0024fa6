//! Optimization over the temporal covering exponent α: closed-form optima,
//! the fractional crossover `x₀`, the exact feasible α set at a point, and a
//! grid-sweep oracle.

use std::cmp::Ordering;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::criteria::closed_form::RegionModel;
use crate::criteria::family::{check_family, slice_family_raw, CompiledFamily};
use crate::criteria::{verdict_with_model, Source, Status};
use crate::error::{Error, Result};
use crate::numeric::{
    format_rational, int, rat, serde_rational, to_f64, Field, QuadRoot, Rational,
};
use crate::point::{ExponentPoint, Point};
use crate::scenario::{Scenario, SingularityKind};

fn check_d(d: &Rational) -> Result<()> {
    if d.is_negative() || d >= &int(3) {
        return Err(Error::OutOfDomain(format!(
            "d must lie in [0,3), got {}",
            format_rational(d)
        )));
    }
    Ok(())
}

/// `(5-d)/2` for `d ≤ 1`, `2` above.
pub fn optimal_alpha_classical(d: &Rational) -> Result<Rational> {
    check_d(d)?;
    Ok(if d <= &int(1) {
        (int(5) - d) / int(2)
    } else {
        int(2)
    })
}

fn check_envelope_range(d: &Rational, gamma: &Rational) -> Result<()> {
    if gamma <= &rat(1, 2) || gamma > &int(1) {
        return Err(Error::OutOfDomain(format!(
            "gamma must lie in (1/2, 1], got {}",
            format_rational(gamma)
        )));
    }
    let floor = int(5) - int(4) * gamma;
    if d <= &floor || d >= &int(3) {
        return Err(Error::OutOfDomain(format!(
            "d must lie in (5-4*gamma, 3) = ({}, 3), got {}",
            format_rational(&floor),
            format_rational(d)
        )));
    }
    Ok(())
}

fn check_x(x: &Rational) -> Result<()> {
    if x.is_negative() || x > &rat(1, 2) {
        return Err(Error::OutOfDomain(format!(
            "x must lie in [0,1/2], got {}",
            format_rational(x)
        )));
    }
    Ok(())
}

/// Optimal α where the `C` and `F + G` lines meet.
pub fn alpha_cf(x: &Rational, d: &Rational, gamma: &Rational) -> Result<Rational> {
    check_x(x)?;
    check_envelope_range(d, gamma)?;
    Ok((int(3) - d) * (int(1) - gamma) * (int(1) - int(2) * x) + int(2) * gamma)
}

/// `3[(3-d)(2γ-1) - 2]`, shared by `α_CDP` and the crossover quadratic.
fn k_const(d: &Rational, gamma: &Rational) -> Rational {
    int(3) * ((int(3) - d) * (int(2) * gamma - int(1)) - int(2))
}

/// α along the curve where the `C` line meets the enstrophy-based `D + P` line.
pub fn alpha_cdp(x: &Rational, d: &Rational, gamma: &Rational) -> Result<Rational> {
    check_d(d)?;
    if gamma <= &rat(1, 2) || gamma > &int(1) {
        return Err(Error::OutOfDomain(format!(
            "gamma must lie in (1/2, 1], got {}",
            format_rational(gamma)
        )));
    }
    if x < &rat(1, 3) || x > &rat(1, 2) {
        return Err(Error::OutOfDomain(format!(
            "x must lie in [1/3, 1/2], got {}",
            format_rational(x)
        )));
    }
    let den = int(2) * (int(2) * gamma - int(3) * x);
    if !den.is_positive() {
        return Err(Error::OutOfDomain(format!(
            "x = {} reaches the enstrophy limit x < 2*gamma/3 (p >= 3/(2*gamma))",
            format_rational(x)
        )));
    }
    Ok((k_const(d, gamma) * (int(1) - int(2) * x) + int(4) * gamma) / den)
}

/// Crossover abscissa `x₀` where `α_CDP = α_CF`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    pub value: f64,
    /// Present when the root is rational.
    #[serde(with = "crate::numeric::serde_rational_opt")]
    pub exact: Option<Rational>,
    /// Quadratic `a x² + b x + c` whose root this is.
    #[serde(with = "crate::numeric::serde_rational_vec")]
    pub quadratic: Vec<Rational>,
    pub larger_root: bool,
    /// Both roots fall in the bracket; the smaller one is returned.
    pub ambiguous: bool,
    #[serde(with = "crate::numeric::serde_rational_vec")]
    pub bracket: Vec<Rational>,
}

impl Crossover {
    pub fn root(&self) -> QuadRoot {
        QuadRoot {
            a: self.quadratic[0].clone(),
            b: self.quadratic[1].clone(),
            c: self.quadratic[2].clone(),
            larger: self.larger_root,
        }
    }

    /// Exact comparison of `x` with `x₀`.
    pub fn cmp_x(&self, x: &Rational) -> Ordering {
        self.root().cmp_at(x)
    }
}

/// Solve `α_CDP(x) = α_CF(x)` in `(1/3, min(1/2, 2γ/3))`.
pub fn solve_x0(d: &Rational, gamma: &Rational) -> Result<Crossover> {
    check_envelope_range(d, gamma)?;
    let g = gamma;
    let a_ = (int(3) - d) * (int(1) - g);
    let k = k_const(d, g);
    let qa = int(12) * &a_;
    let qb = int(2) * &k - int(8) * g * &a_ - int(6) * &a_ - int(12) * g;
    let qc = int(4) * g * &a_ + int(8) * g * g - &k - int(4) * g;
    let lo = rat(1, 3);
    let hi = std::cmp::min(rat(1, 2), int(2) * g / int(3));
    let in_bracket =
        |r: &QuadRoot| r.cmp_at(&lo) == Ordering::Less && r.cmp_at(&hi) == Ordering::Greater;
    let mut found = Vec::new();
    if qa.is_zero() {
        let r = QuadRoot {
            a: qa.clone(),
            b: qb.clone(),
            c: qc.clone(),
            larger: false,
        };
        if !qb.is_zero() && in_bracket(&r) {
            found.push(r);
        }
    } else {
        let disc = &qb * &qb - int(4) * &qa * &qc;
        if !disc.is_negative() {
            for larger in [false, true] {
                let r = QuadRoot {
                    a: qa.clone(),
                    b: qb.clone(),
                    c: qc.clone(),
                    larger,
                };
                if in_bracket(&r) && !(disc.is_zero() && larger) {
                    found.push(r);
                }
            }
        }
    }
    let bracket = vec![lo, hi];
    match found.len() {
        0 => Err(Error::NoRoot(format!(
            "({}, {}) for d = {}, gamma = {}",
            format_rational(&bracket[0]),
            format_rational(&bracket[1]),
            format_rational(d),
            format_rational(g)
        ))),
        n => {
            let r = found.remove(0);
            Ok(Crossover {
                value: r.value(),
                exact: r.exact(),
                quadratic: vec![qa, qb, qc],
                larger_root: r.larger,
                ambiguous: n > 1,
                bracket,
            })
        }
    }
}

/// Feasible α set at a point: an interval, because every slice slack is
/// affine in α.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaInterval {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    pub lo_closed: bool,
    #[serde(with = "crate::numeric::serde_rational_opt")]
    pub hi: Option<Rational>,
    pub hi_closed: bool,
}

impl AlphaInterval {
    pub fn contains(&self, a: &Rational) -> bool {
        let lo_ok = if self.lo_closed {
            a >= &self.lo
        } else {
            a > &self.lo
        };
        let hi_ok = match &self.hi {
            None => true,
            Some(h) if self.hi_closed => a <= h,
            Some(h) => a < h,
        };
        lo_ok && hi_ok
    }

    /// A representative α in the set.
    pub fn witness(&self) -> Rational {
        match &self.hi {
            Some(h) if h == &self.lo => h.clone(),
            Some(h) => (&self.lo + h) / int(2),
            None if self.lo_closed && self.lo.is_positive() => self.lo.clone(),
            None => &self.lo + int(1),
        }
    }
}

/// Exact set of α > 0 at which the point passes the one-slice family.
pub fn feasible_alpha(s: &Scenario, p: &Point<Rational>) -> Option<AlphaInterval> {
    let f1 = slice_family_raw(s, &int(1));
    let f2 = slice_family_raw(s, &int(2));
    let terms: std::collections::BTreeSet<_> = f1.iter().map(|c| c.term).collect();
    let mut covered = std::collections::BTreeSet::new();
    let mut iv = AlphaInterval {
        lo: Rational::zero(),
        lo_closed: false,
        hi: None,
        hi_closed: false,
    };
    for (c1, c2) in f1.iter().zip(&f2) {
        if !c1.applies(p) {
            continue;
        }
        covered.insert(c1.term);
        let s1 = c1.slack(p);
        let m = c2.slack(p) - &s1;
        let b = &s1 - &m;
        // Need b + m α > 0 (strict) or ≥ 0.
        let closed = !c1.strict;
        match m.sign() {
            Ordering::Equal => {
                if !crate::constraint::satisfied(b.sign(), c1.strict) {
                    return None;
                }
            }
            Ordering::Greater => {
                let bound = -&b / &m;
                match bound.cmp(&iv.lo) {
                    Ordering::Greater => {
                        iv.lo = bound;
                        iv.lo_closed = closed;
                    }
                    Ordering::Equal => iv.lo_closed &= closed,
                    Ordering::Less => {}
                }
            }
            Ordering::Less => {
                let bound = -&b / &m;
                match &iv.hi {
                    Some(h) if &bound > h => {}
                    Some(h) if &bound == h => iv.hi_closed &= closed,
                    _ => {
                        iv.hi = Some(bound);
                        iv.hi_closed = closed;
                    }
                }
            }
        }
    }
    if covered != terms {
        return None;
    }
    let nonempty = match &iv.hi {
        None => true,
        Some(h) => h > &iv.lo || (h == &iv.lo && iv.lo_closed && iv.hi_closed),
    };
    nonempty.then_some(iv)
}

/// α values swept by the oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaGrid {
    pub values: Vec<f64>,
}

impl AlphaGrid {
    /// 0.05 to 8 in steps of 0.005, hitting every multiple of 1/200 exactly.
    pub fn standard() -> Self {
        AlphaGrid {
            values: (0..=1590).map(|k| (10 + k) as f64 / 200.0).collect(),
        }
    }

    /// The standard grid continued geometrically to 2000, for regions whose
    /// optimal α diverges near the enstrophy limit.
    pub fn extended() -> Self {
        let mut values = Self::standard().values;
        let mut a = 8.0f64;
        while a < 2000.0 {
            a *= 1.01;
            values.push(a);
        }
        AlphaGrid { values }
    }

    pub fn cap(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaSweepReport {
    pub point: ExponentPoint,
    pub grid: Vec<f64>,
    /// Per grid value, whether the point itself passes.
    pub admissible_set: Vec<bool>,
    pub best_alpha: Option<f64>,
    /// Found only through a landing point toward the Leray–Hopf segment.
    pub interpolation_witness: Option<SweepLanding>,
    pub oracle_guaranteed: bool,
    pub closed_form_guaranteed: bool,
    pub agreement: bool,
    /// The feasible set reaches the top of the grid.
    pub cap_reached: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepLanding {
    pub landing: ExponentPoint,
    pub theta: f64,
    pub alpha: f64,
}

impl AlphaSweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,satisfied\n");
        for (a, s) in self.grid.iter().zip(&self.admissible_set) {
            out.push_str(&format!("{a},{s}\n"));
        }
        out
    }
}

/// Float oracle for "some α works, possibly after interpolating toward the
/// Leray–Hopf segment". Points without a direct α are tested through
/// landing points on segments toward the segment.
pub struct SweepOracle {
    family: CompiledFamily,
    grid: Vec<f64>,
    lh: Vec<Point<f64>>,
    thetas: Vec<f64>,
}

impl SweepOracle {
    pub fn new(s: &Scenario, grid: &AlphaGrid) -> Result<Self> {
        if s.kind != SingularityKind::Slice {
            return Err(Error::InvalidArgument(
                "the α sweep applies to one-slice scenarios only".into(),
            ));
        }
        let family = CompiledFamily::new(s)?;
        let top = Point::new(to_f64(&s.leray_hopf_top_x()), 0.5);
        let bottom = Point::new(0.5, 0.0);
        let lh = (0..=4)
            .map(|k| bottom.lerp(&top, &(k as f64 / 4.0)))
            .collect();
        let thetas = (1..32).map(|j| j as f64 / 32.0).collect();
        Ok(SweepOracle {
            family,
            grid: grid.values.clone(),
            lh,
            thetas,
        })
    }

    /// First grid α at which the point passes directly.
    pub fn direct(&self, x: f64, y: f64) -> Option<f64> {
        self.family.active(x, y)?.first_on(&self.grid)
    }

    pub fn landing(&self, x: f64, y: f64) -> Option<SweepLanding> {
        let p = Point::new(x, y);
        for b in &self.lh {
            for t in &self.thetas {
                let q = p.lerp(b, t);
                if let Some(a) = self.direct(q.x, q.y) {
                    return Some(SweepLanding {
                        landing: ExponentPoint::float(q.x, q.y),
                        theta: *t,
                        alpha: a,
                    });
                }
            }
        }
        None
    }

    pub fn admissible(&self, x: f64, y: f64) -> bool {
        if self.direct(x, y).is_some() {
            return true;
        }
        self.landing(x, y).is_some()
    }

    pub fn admissible_set(&self, x: f64, y: f64) -> Vec<bool> {
        match self.family.active(x, y) {
            Some(act) => self.grid.iter().map(|a| act.satisfied(*a)).collect(),
            None => vec![false; self.grid.len()],
        }
    }
}

/// Prebuilt oracle and closed-form model for repeated sweeps.
pub struct BruteforceContext {
    pub scenario: Scenario,
    oracle: SweepOracle,
    model: RegionModel,
}

impl BruteforceContext {
    pub fn new(s: &Scenario, grid: &AlphaGrid) -> Result<Self> {
        s.validate()?;
        Ok(BruteforceContext {
            scenario: s.clone(),
            oracle: SweepOracle::new(s, grid)?,
            model: RegionModel::new(s)?,
        })
    }

    pub fn report(&self, pt: &ExponentPoint) -> Result<AlphaSweepReport> {
        pt.validate()?;
        let oracle = &self.oracle;
        let p = pt.to_f64();
        let admissible_set = oracle.admissible_set(p.x, p.y);
        let best_alpha = oracle.direct(p.x, p.y);
        let interpolation_witness = match best_alpha {
            Some(_) => None,
            None => oracle.landing(p.x, p.y),
        };
        let oracle_guaranteed = best_alpha.is_some() || interpolation_witness.is_some();
        let v = verdict_with_model(&self.model, pt)?;
        let closed_form_guaranteed = v.status == Status::Guaranteed
            && matches!(v.source, Source::ThisPaper | Source::Interpolation);
        Ok(AlphaSweepReport {
            point: pt.clone(),
            grid: oracle.grid.clone(),
            cap_reached: admissible_set.last().copied().unwrap_or(false),
            admissible_set,
            best_alpha,
            interpolation_witness,
            oracle_guaranteed,
            closed_form_guaranteed,
            agreement: oracle_guaranteed == closed_form_guaranteed,
        })
    }
}

/// Sweep α over the grid at one point and compare with the closed form.
pub fn exists_alpha_bruteforce(
    pt: &ExponentPoint,
    s: &Scenario,
    grid: &AlphaGrid,
) -> Result<AlphaSweepReport> {
    pt.validate()?;
    BruteforceContext::new(s, grid)?.report(pt)
}

/// Closed form against the sweep oracle on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub scenario: Scenario,
    pub alpha_cap: f64,
    /// Grid points where the feasible α set reaches the cap.
    pub cap_reached: usize,
    /// `a` is the closed form, `b` the oracle.
    pub comparison: crate::region::compare::DiscrepancyReport,
}

impl OracleReport {
    /// Every disagreement sits within one cell of the closed-form boundary.
    pub fn passed(&self) -> bool {
        self.comparison.off_boundary_a == 0
    }
}

pub fn oracle_grid(s: &Scenario, resolution: usize, grid: &AlphaGrid) -> Result<OracleReport> {
    use crate::region::compare::{compare_grids, grid_point};
    if resolution < 11 {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least 11, got {resolution}"
        )));
    }
    let ctx = BruteforceContext::new(s, grid)?;
    let mut a = vec![vec![false; resolution]; resolution];
    let mut b = vec![vec![false; resolution]; resolution];
    let mut cap_reached = 0;
    for j in 0..resolution {
        for i in 0..resolution {
            let r = ctx.report(&grid_point(i, j, resolution))?;
            a[j][i] = r.closed_form_guaranteed;
            b[j][i] = r.oracle_guaranteed;
            cap_reached += r.cap_reached as usize;
        }
    }
    Ok(OracleReport {
        scenario: s.clone(),
        alpha_cap: grid.cap(),
        cap_reached,
        comparison: compare_grids(&a, &b),
    })
}

/// Check that a witness α really passes (exact), returning the binding ids.
pub fn verify_alpha(
    s: &Scenario,
    p: &Point<Rational>,
    alpha: &Rational,
) -> Option<Vec<crate::constraint::ConstraintId>> {
    let fam = slice_family_raw(s, alpha);
    let chk = check_family(&fam, p);
    chk.satisfied.then_some(chk.binding)
}
