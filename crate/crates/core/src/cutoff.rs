//! Covers by cylinders, the cutoff built from them, and the convolution-type
//! integral bound over the union of their time intervals.

use std::fmt::Write as _;

use num::{BigInt, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    format_rational, int, is_integer, pow_rational, rat, to_f64, CompensatedSum, Rational, Real,
};

/// Radial profile: 1 on `|s| < 1.1`, 0 on `|s| > 1.9`, quintic smoothstep
/// in between.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffProfile {
    pub plateau: f64,
    pub support: f64,
}

impl Default for CutoffProfile {
    fn default() -> Self {
        CutoffProfile {
            plateau: 1.1,
            support: 1.9,
        }
    }
}

impl CutoffProfile {
    fn u(&self, s: f64) -> f64 {
        ((s.abs() - self.plateau) / (self.support - self.plateau)).clamp(0.0, 1.0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let u = self.u(s);
        1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    }

    pub fn deriv(&self, s: f64) -> f64 {
        let u = self.u(s);
        let w = self.support - self.plateau;
        -30.0 * u * u * (1.0 - u) * (1.0 - u) / w * s.signum()
    }

    /// `sup |ψ'|`, attained at the middle of the transition.
    pub fn deriv_bound(&self) -> f64 {
        15.0 / 8.0 / (self.support - self.plateau)
    }

    /// `sup |ψ''|`.
    pub fn second_deriv_bound(&self) -> f64 {
        // S''(u) = 60u(1-u)(1-2u) peaks at u = (3 - √3)/6.
        let u = (3.0 - 3f64.sqrt()) / 6.0;
        let w = self.support - self.plateau;
        60.0 * u * (1.0 - u) * (1.0 - 2.0 * u) / (w * w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// All intervals centred at `t = 0`.
    Nested,
    /// Doubled intervals packed side by side from the origin.
    Disjoint,
}

impl std::str::FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nested" => Ok(Layout::Nested),
            "disjoint" => Ok(Layout::Disjoint),
            other => Err(Error::InvalidArgument(format!(
                "unknown layout `{other}` (nested or disjoint)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverEntry {
    pub generation: u32,
    #[serde(with = "crate::numeric::serde_rational")]
    pub radius: Rational,
    pub time_center: Real,
    /// Half-length `2 r^α` of the interval `I_i`.
    pub half_width: Real,
    /// Spatial centre along the first axis.
    pub space_center: f64,
}

impl CoverEntry {
    pub fn interval(&self) -> (f64, f64) {
        let (c, w) = (self.time_center.to_f64(), self.half_width.to_f64());
        (c - w, c + w)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub entries: Vec<CoverEntry>,
    #[serde(with = "crate::numeric::serde_rational")]
    pub alpha: Rational,
    #[serde(with = "crate::numeric::serde_rational")]
    pub d: Rational,
    pub layout: Layout,
    /// `Σ r_i^d`.
    pub h: Real,
}

pub const DEFAULT_COVER_CAP: usize = 1_000_000;

/// `r^e` for a dyadic or other rational radius; exact for integer `e`.
fn rpow(r: &Rational, e: &Rational) -> Real {
    if is_integer(e) {
        let n = e.numer().to_i64().unwrap_or(0);
        let v = if n >= 0 {
            pow_rational(r, n as u32)
        } else {
            pow_rational(&r.recip(), (-n) as u32)
        };
        Real::Exact(v)
    } else {
        Real::Float(to_f64(r).powf(to_f64(e)))
    }
}

fn add(a: &Real, b: &Real) -> Real {
    match (a, b) {
        (Real::Exact(x), Real::Exact(y)) => Real::Exact(x + y),
        _ => Real::Float(a.to_f64() + b.to_f64()),
    }
}

fn scale(a: &Real, k: i64) -> Real {
    match a {
        Real::Exact(x) => Real::Exact(x * int(k)),
        Real::Float(v) => Real::Float(v * k as f64),
    }
}

/// `⌈2^{j d}⌉` exactly.
pub fn dyadic_count(j: u32, d: &Rational) -> u64 {
    let (p, q) = (d.numer().clone(), d.denom().clone());
    let q = q.to_u32().expect("small denominator");
    let target = BigInt::from(2).pow((BigInt::from(j) * &p).to_u32().expect("small exponent"));
    let guess = 2f64.powf(j as f64 * to_f64(d)).ceil() as u64;
    let ok = |n: u64| BigInt::from(n).pow(q) >= target;
    let mut n = guess.saturating_sub(2).max(1);
    while !ok(n) {
        n += 1;
    }
    while n > 1 && ok(n - 1) {
        n -= 1;
    }
    n
}

impl Cover {
    pub fn new(entries: Vec<CoverEntry>, alpha: Rational, d: Rational, layout: Layout) -> Self {
        let h = Self::sum_h(&entries, &d);
        Cover {
            entries,
            alpha,
            d,
            layout,
            h,
        }
    }

    fn sum_h(entries: &[CoverEntry], d: &Rational) -> Real {
        let mut h = if is_integer(d) {
            Real::Exact(Rational::zero())
        } else {
            Real::Float(0.0)
        };
        let mut acc = CompensatedSum::default();
        for e in entries {
            match rpow(&e.radius, d) {
                Real::Exact(v) => h = add(&h, &Real::Exact(v)),
                Real::Float(v) => acc.add(v),
            }
        }
        match h {
            Real::Exact(_) => h,
            Real::Float(_) => Real::Float(acc.value()),
        }
    }

    /// One cylinder centred at the origin.
    pub fn single(radius: Rational, alpha: Rational) -> Self {
        let half_width = scale(&rpow(&radius, &alpha), 2);
        let time_center = if half_width.exact().is_some() {
            Real::Exact(Rational::zero())
        } else {
            Real::Float(0.0)
        };
        let e = CoverEntry {
            generation: 0,
            radius,
            time_center,
            half_width,
            space_center: 0.0,
        };
        Cover::new(vec![e], alpha, int(0), Layout::Nested)
    }

    /// Recompute `H` from the entries.
    pub fn recomputed_h(&self) -> Real {
        Self::sum_h(&self.entries, &self.d)
    }

    /// Doubled intervals `2 I_i` pairwise disjoint, by a sweep.
    pub fn doubled_disjoint(&self) -> bool {
        let mut iv: Vec<(f64, f64)> = self
            .entries
            .iter()
            .map(|e| {
                let (c, w) = (e.time_center.to_f64(), e.half_width.to_f64());
                (c - 2.0 * w, c + 2.0 * w)
            })
            .collect();
        iv.sort_by(|a, b| a.0.total_cmp(&b.0));
        iv.windows(2)
            .all(|w| w[0].1 <= w[1].0 * (1.0 + 1e-15) + 1e-300)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numerical(e.to_string()))
    }
}

/// Generations `1..=J`, generation `j` holding `⌈2^{jd}⌉` radii `2^{-j}`.
pub fn make_dyadic_cover(
    d: &Rational,
    generations: u32,
    layout: Layout,
    alpha: &Rational,
) -> Result<Cover> {
    make_dyadic_cover_capped(d, generations, layout, alpha, DEFAULT_COVER_CAP)
}

pub fn make_dyadic_cover_capped(
    d: &Rational,
    generations: u32,
    layout: Layout,
    alpha: &Rational,
    cap: usize,
) -> Result<Cover> {
    if generations < 1 {
        return Err(Error::InvalidArgument(
            "need at least one generation".into(),
        ));
    }
    if d.is_negative() || d >= &int(3) {
        return Err(Error::OutOfDomain(format!(
            "d must lie in [0,3), got {}",
            format_rational(d)
        )));
    }
    if !alpha.is_positive() {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    let total: u64 = (1..=generations).map(|j| dyadic_count(j, d)).sum();
    if total as usize > cap {
        return Err(Error::InvalidArgument(format!(
            "cover would hold {total} entries, above the cap {cap}"
        )));
    }
    let mut entries = Vec::with_capacity(total as usize);
    let exact_t = is_integer(alpha);
    let zero = if exact_t {
        Real::Exact(Rational::zero())
    } else {
        Real::Float(0.0)
    };
    // Right end of the last doubled interval.
    let mut edge = zero.clone();
    for j in 1..=generations {
        let r = rat(1, 1i64 << j);
        let n = dyadic_count(j, d);
        let half_width = scale(&rpow(&r, alpha), 2);
        for k in 0..n {
            let time_center = match layout {
                Layout::Nested => zero.clone(),
                Layout::Disjoint => {
                    let c = add(&edge, &scale(&half_width, 2));
                    edge = add(&c, &scale(&half_width, 2));
                    c
                }
            };
            entries.push(CoverEntry {
                generation: j,
                radius: r.clone(),
                time_center,
                half_width: half_width.clone(),
                space_center: (k as f64 + 0.5) / n as f64,
            });
        }
    }
    Ok(Cover::new(entries, alpha.clone(), d.clone(), layout))
}

fn power_exact(v: &Rational, s: &Rational) -> Option<Rational> {
    if !is_integer(s) || s.is_negative() {
        return None;
    }
    Some(pow_rational(v, s.numer().to_u32()?))
}

fn integral_exact(cover: &Cover, sigma: &Rational, s: &Rational) -> Option<Rational> {
    let mut events: Vec<(Rational, Rational, i32)> = Vec::with_capacity(2 * cover.entries.len());
    for e in &cover.entries {
        let (Real::Exact(c), Real::Exact(w)) = (&e.time_center, &e.half_width) else {
            return None;
        };
        let Real::Exact(weight) = rpow(&e.radius, &-sigma.clone()) else {
            return None;
        };
        events.push((c - w, weight.clone(), 1));
        events.push((c + w, -weight, -1));
    }
    events.sort_by(|a, b| a.0.cmp(&b.0));
    let mut total = Rational::zero();
    let mut sum = Rational::zero();
    let mut active = 0;
    for k in 0..events.len() {
        sum += &events[k].1;
        active += events[k].2;
        if let Some(next) = events.get(k + 1) {
            let len = &next.0 - &events[k].0;
            if active > 0 && len.is_positive() {
                total += len * power_exact(&sum, s)?;
            }
        }
    }
    Some(total)
}

fn integral_f64(cover: &Cover, sigma: f64, s: f64) -> f64 {
    let mut events: Vec<(f64, f64, i32)> = Vec::with_capacity(2 * cover.entries.len());
    for e in &cover.entries {
        let (lo, hi) = e.interval();
        let weight = to_f64(&e.radius).powf(-sigma);
        events.push((lo, weight, 1));
        events.push((hi, -weight, -1));
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.2.cmp(&a.2)));
    let mut total = CompensatedSum::default();
    let mut sum = CompensatedSum::default();
    let mut active = 0;
    for k in 0..events.len() {
        sum.add(events[k].1);
        active += events[k].2;
        if let Some(next) = events.get(k + 1) {
            let len = next.0 - events[k].0;
            if active > 0 && len > 0.0 {
                total.add(len * sum.value().max(0.0).powf(s));
            }
        }
    }
    total.value()
}

/// `∫ (Σ_i r_i^{-σ} χ_{I_i}(t))^s dt`, exact for integer `σ`, `s` and
/// integer `α`.
pub fn lemma_conv_integral(cover: &Cover, sigma: &Rational, s: &Rational) -> Real {
    match integral_exact(cover, sigma, s) {
        Some(v) => Real::Exact(v),
        None => Real::Float(integral_f64(cover, to_f64(sigma), to_f64(s))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvLevel {
    pub generations: u32,
    pub entries: usize,
    pub integral: Real,
    pub h: Real,
    /// `H` raised to the normalization exponent.
    pub h_norm: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConvVerdict {
    Bounded,
    Divergent { growth: f64 },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvSweepReport {
    #[serde(with = "crate::numeric::serde_rational")]
    pub d: Rational,
    #[serde(with = "crate::numeric::serde_rational")]
    pub alpha: Rational,
    #[serde(with = "crate::numeric::serde_rational")]
    pub sigma: Rational,
    #[serde(with = "crate::numeric::serde_rational")]
    pub s: Rational,
    pub layout: Layout,
    /// Ratios are `integral / H^normalization`.
    #[serde(with = "crate::numeric::serde_rational")]
    pub normalization: Rational,
    pub levels: Vec<ConvLevel>,
    /// Geometric-mean growth of the per-generation increments over the
    /// second half of the sweep.
    pub increment_growth: f64,
    pub verdict: ConvVerdict,
    pub rule: String,
}

/// Increment growth at or above this is divergence.
pub const GROWTH_DIVERGENT: f64 = 1.02;
/// Increment growth at or below this is convergence.
pub const GROWTH_BOUNDED: f64 = 0.98;
/// Borderline sweeps are bounded when the ratio grows by at most this
/// factor over the second half.
pub const BORDERLINE_RATIO: f64 = 1.05;

pub const VERDICT_RULE: &str =
    "g = (dI_J / dI_{J/2})^(1/(J - J/2)) with dI the per-generation increment of the integral; \
divergent if g >= 1.02, bounded if g <= 0.98; otherwise bounded iff ratio(J) <= 1.05 ratio(J/2)";

impl ConvSweepReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("J,integral,H^s,ratio\n");
        for l in &self.levels {
            let _ = writeln!(
                s,
                "{},{},{:e},{:e}",
                l.generations,
                real_text(&l.integral),
                l.h_norm,
                l.ratio
            );
        }
        s
    }

    pub fn is_bounded(&self) -> bool {
        self.verdict == ConvVerdict::Bounded
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self.verdict, ConvVerdict::Divergent { .. })
    }
}

fn real_text(r: &Real) -> String {
    match r {
        Real::Exact(v) => format_rational(v),
        Real::Float(v) => format!("{v:e}"),
    }
}

fn classify(levels: &[ConvLevel]) -> (f64, ConvVerdict) {
    let n = levels.len();
    if n < 4 {
        return (
            f64::NAN,
            ConvVerdict::Inconclusive {
                reason: "need at least 4 generations".into(),
            },
        );
    }
    let val = |k: usize| levels[k].integral.to_f64();
    let inc = |k: usize| if k == 0 { val(0) } else { val(k) - val(k - 1) };
    let half = n.div_ceil(2) - 1;
    let (a, b) = (inc(half), inc(n - 1));
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return (
            f64::NAN,
            ConvVerdict::Inconclusive {
                reason: "nonpositive increments".into(),
            },
        );
    }
    let g = (b / a).powf(1.0 / (n - 1 - half) as f64);
    let verdict = if g >= GROWTH_DIVERGENT {
        ConvVerdict::Divergent { growth: g }
    } else if g <= GROWTH_BOUNDED
        || levels[n - 1].ratio <= BORDERLINE_RATIO * levels[half].ratio
    {
        ConvVerdict::Bounded
    } else {
        ConvVerdict::Divergent {
            growth: levels[n - 1].ratio / levels[half].ratio,
        }
    };
    (g, verdict)
}

fn sweep(
    d: &Rational,
    alpha: &Rational,
    sigma: &Rational,
    s: &Rational,
    j_max: u32,
    layout: Layout,
    normalization: Rational,
) -> Result<ConvSweepReport> {
    for (name, v) in [("alpha", alpha), ("sigma", sigma), ("s", s)] {
        if !v.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "{name} must be positive, got {}",
                format_rational(v)
            )));
        }
    }
    let mut levels = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let cover = make_dyadic_cover(d, j, layout, alpha)?;
        let integral = lemma_conv_integral(&cover, sigma, s);
        let h_norm = cover.h.to_f64().powf(to_f64(&normalization));
        levels.push(ConvLevel {
            generations: j,
            entries: cover.entries.len(),
            ratio: integral.to_f64() / h_norm,
            integral,
            h: cover.h,
            h_norm,
        });
    }
    let (increment_growth, verdict) = classify(&levels);
    Ok(ConvSweepReport {
        d: d.clone(),
        alpha: alpha.clone(),
        sigma: sigma.clone(),
        s: s.clone(),
        layout,
        normalization,
        levels,
        increment_growth,
        verdict,
        rule: VERDICT_RULE.into(),
    })
}

/// Nested dyadic covers for `J = 1..=J_max`, ratios against `H^s`.
pub fn lemma_conv_sweep(
    d: &Rational,
    alpha: &Rational,
    sigma: &Rational,
    s: &Rational,
    j_max: u32,
) -> Result<ConvSweepReport> {
    sweep(d, alpha, sigma, s, j_max, Layout::Nested, s.clone())
}

/// Disjoint intervals at `α = 2`, ratios against `H`.
pub fn sharpness_disjoint(
    d: &Rational,
    sigma: &Rational,
    s: &Rational,
    j_max: u32,
) -> Result<ConvSweepReport> {
    if s >= &int(1) {
        return Err(Error::OutOfDomain(
            "the disjoint sharpness example needs s < 1".into(),
        ));
    }
    if !d.is_positive() || d > &int(1) {
        return Err(Error::OutOfDomain(
            "the disjoint sharpness example needs d in (0,1]".into(),
        ));
    }
    sweep(d, &int(2), sigma, s, j_max, Layout::Disjoint, int(1))
}

/// Space-time sampling lattice for [`build_cutoff`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffGrid {
    /// Spatial dimension, 1 to 3.
    pub dim: usize,
    /// Samples per spatial axis.
    pub n: usize,
    pub nt: usize,
    pub x_range: (f64, f64),
    pub t_range: (f64, f64),
}

impl CutoffGrid {
    /// Grid covering the cover's cylinders with `n` samples per axis.
    pub fn around(cover: &Cover, dim: usize, n: usize, nt: usize) -> Self {
        let rmax = cover
            .entries
            .iter()
            .map(|e| to_f64(&e.radius))
            .fold(0.0, f64::max);
        let (mut x0, mut x1, mut t0, mut t1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for e in &cover.entries {
            x0 = x0.min(e.space_center);
            x1 = x1.max(e.space_center);
            let (lo, hi) = e.interval();
            t0 = t0.min(lo);
            t1 = t1.max(hi);
        }
        let pad = 2.0 * rmax;
        CutoffGrid {
            dim,
            n,
            nt,
            x_range: (x0 - pad, x1 + pad),
            t_range: (t0, t1),
        }
    }

    pub fn dx(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / (self.n - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        (self.t_range.1 - self.t_range.0) / (self.nt - 1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffChecks {
    /// Largest excess of a difference quotient over the mean-value bound
    /// from the pieces; nonpositive when the check passes.
    pub max_derivative_excess: f64,
    /// `max_t ∫|∇φ|^a / (K_x Σ r_i^{n-a} χ_{I_i}(t))`.
    pub space_bound_ratio: f64,
    /// `max_t ∫|∂_t φ|^a / (K_t Σ r_i^{n-αa} χ_{I_i}(t))`.
    pub time_bound_ratio: f64,
    pub constant_space: f64,
    pub constant_time: f64,
    pub passed: bool,
}

/// Samples of `φ = 1 - sup_i φ_i` with `φ_i = ψ(|x - x_i|/r_i) ψ(t/r_i^α)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffField {
    pub grid: CutoffGrid,
    /// Indexed `[t][x_1..x_dim]`, last axis fastest.
    pub phi: Vec<f64>,
    pub dt: Vec<f64>,
    pub grad: Vec<f64>,
    pub exponent_a: f64,
    pub checks: CutoffChecks,
}

struct Piece {
    r: f64,
    rt: f64,
    cx: f64,
    ct: f64,
}

fn unit_ball(dim: usize, r: f64) -> f64 {
    match dim {
        1 => 2.0 * r,
        2 => std::f64::consts::PI * r * r,
        _ => 4.0 / 3.0 * std::f64::consts::PI * r * r * r,
    }
}

impl CutoffField {
    pub fn index(&self, it: usize, ix: &[usize]) -> usize {
        ix.iter().fold(it, |acc, &i| acc * self.grid.n + i)
    }
}

/// Sample the cutoff of a cover and check its derivative bounds with
/// exponent `a`.
pub fn build_cutoff(cover: &Cover, grid: &CutoffGrid, a: f64) -> Result<CutoffField> {
    if !(1..=3).contains(&grid.dim) || grid.n < 2 || grid.nt < 2 {
        return Err(Error::InvalidArgument(
            "grid needs dim in 1..=3 and at least 2 samples per axis".into(),
        ));
    }
    let profile = CutoffProfile::default();
    let alpha = to_f64(&cover.alpha);
    let pieces: Vec<Piece> = cover
        .entries
        .iter()
        .map(|e| {
            let r = to_f64(&e.radius);
            Piece {
                r,
                rt: r.powf(alpha),
                cx: e.space_center,
                ct: e.time_center.to_f64(),
            }
        })
        .collect();
    let rmin = pieces.iter().map(|p| p.r).fold(f64::INFINITY, f64::min);
    let rt_min = pieces.iter().map(|p| p.rt).fold(f64::INFINITY, f64::min);
    let (dx, dt) = (grid.dx(), grid.dt());
    if rmin < 8.0 * dx || rt_min < 8.0 * dt {
        return Err(Error::InvalidArgument(format!(
            "resolution too coarse: the smallest radius must span at least 8 cells (r = {rmin}, dx = {dx}, r^alpha = {rt_min}, dt = {dt})"
        )));
    }
    let spatial = grid.n.pow(grid.dim as u32);
    let total = spatial * grid.nt;
    if total > 50_000_000 {
        return Err(Error::InvalidArgument(format!(
            "grid of {total} samples is too large"
        )));
    }
    let coord = |k: usize| grid.x_range.0 + k as f64 * dx;
    let time = |k: usize| grid.t_range.0 + k as f64 * dt;
    let axes = |mut s: usize| {
        let mut ix = [0usize; 3];
        for k in (0..grid.dim).rev() {
            ix[k] = s % grid.n;
            s /= grid.n;
        }
        ix
    };
    let mut phi = vec![0.0; total];
    let mut dphi_t = vec![0.0; total];
    let mut grad = vec![0.0; total];
    // Pointwise sup over pieces of |∂_t φ_i| and |∇φ_i|.
    let mut sup_t = vec![0.0; total];
    let mut sup_x = vec![0.0; total];
    for it in 0..grid.nt {
        let t = time(it);
        for sp in 0..spatial {
            let ix = axes(sp);
            let (mut best, mut bt, mut bx, mut st, mut sx) = (0.0f64, 0.0, 0.0, 0.0f64, 0.0f64);
            for p in &pieces {
                let tau = (t - p.ct) / p.rt;
                if tau.abs() >= profile.support {
                    continue;
                }
                let mut rho2 = 0.0;
                for (k, &i) in ix.iter().enumerate().take(grid.dim) {
                    let c = if k == 0 { p.cx } else { 0.0 };
                    rho2 += (coord(i) - c).powi(2);
                }
                let rho = rho2.sqrt() / p.r;
                if rho >= profile.support {
                    continue;
                }
                let (ps, pt) = (profile.eval(rho), profile.eval(tau));
                let v = ps * pt;
                let gt = (ps * profile.deriv(tau) / p.rt).abs();
                let gx = (profile.deriv(rho) / p.r * pt).abs();
                st = st.max(gt);
                sx = sx.max(gx);
                if v > best {
                    (best, bt, bx) = (v, gt, gx);
                }
            }
            let k = it * spatial + sp;
            phi[k] = 1.0 - best;
            dphi_t[k] = bt;
            grad[k] = bx;
            sup_t[k] = st;
            sup_x[k] = sx;
        }
    }
    // Difference quotients against the mean-value bound.
    let c2 = profile.second_deriv_bound();
    let c1 = profile.deriv_bound();
    // Hessian bounds of the pieces; the radial term uses |x - x_i| >= 1.1 r_i.
    let lip_x = (c2 + (grid.dim as f64 - 1.0) * c1 / profile.plateau) / (rmin * rmin);
    let lip_t = c2 / (rt_min * rt_min);
    let mut excess = f64::NEG_INFINITY;
    for it in 0..grid.nt {
        for sp in 0..spatial {
            let k = it * spatial + sp;
            if it + 1 < grid.nt {
                let q = (phi[k + spatial] - phi[k]).abs() / dt;
                excess = excess.max(q - sup_t[k].max(sup_t[k + spatial]) - lip_t * dt);
            }
            let ix = axes(sp);
            let mut stride = 1;
            for ax in (0..grid.dim).rev() {
                if ix[ax] + 1 < grid.n {
                    let q = (phi[k + stride] - phi[k]).abs() / dx;
                    excess = excess.max(q - sup_x[k].max(sup_x[k + stride]) - lip_x * dx);
                }
                stride *= grid.n;
            }
        }
    }
    // Integral bounds per time sample; the annulus and ball measures are
    // widened by one cell diagonal for the lattice.
    let n = grid.dim as f64;
    let diag = dx * n.sqrt();
    let cell = dx.powi(grid.dim as i32);
    let mut space_ratio = 0.0f64;
    let mut time_ratio = 0.0f64;
    let ca = c1.powf(a);
    for it in 0..grid.nt {
        let t = time(it);
        let (mut lhs_x, mut lhs_t) = (CompensatedSum::default(), CompensatedSum::default());
        for sp in 0..spatial {
            let k = it * spatial + sp;
            lhs_x.add(grad[k].powf(a) * cell);
            lhs_t.add(dphi_t[k].powf(a) * cell);
        }
        let (mut rhs_x, mut rhs_t) = (0.0, 0.0);
        for p in &pieces {
            if (t - p.ct).abs() >= 2.0 * p.rt {
                continue;
            }
            let ann = unit_ball(grid.dim, 1.9 * p.r + diag)
                - unit_ball(grid.dim, (1.1 * p.r - diag).max(0.0));
            rhs_x += ca * p.r.powf(-a) * ann;
            rhs_t += ca * p.rt.powf(-a) * unit_ball(grid.dim, 1.9 * p.r + diag);
        }
        let ratio = |l: f64, r: f64| {
            if l <= 0.0 {
                0.0
            } else if r > 0.0 {
                l / r
            } else {
                f64::INFINITY
            }
        };
        space_ratio = space_ratio.max(ratio(lhs_x.value(), rhs_x));
        time_ratio = time_ratio.max(ratio(lhs_t.value(), rhs_t));
    }
    let checks = CutoffChecks {
        max_derivative_excess: excess,
        space_bound_ratio: space_ratio,
        time_bound_ratio: time_ratio,
        constant_space: ca * unit_ball(grid.dim, 1.9) - ca * unit_ball(grid.dim, 1.1),
        constant_time: ca * unit_ball(grid.dim, 1.9),
        passed: excess <= 1e-9 && space_ratio <= 1.0 && time_ratio <= 1.0,
    };
    Ok(CutoffField {
        grid: grid.clone(),
        phi,
        dt: dphi_t,
        grad,
        exponent_a: a,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_shape() {
        let p = CutoffProfile::default();
        assert_eq!(p.eval(1.05), 1.0);
        assert_eq!(p.eval(-1.95), 0.0);
        assert!((p.eval(1.5) - 0.5).abs() < 1e-15);
        assert!((p.deriv(1.5).abs() - p.deriv_bound()).abs() < 1e-12);
        assert!(p.deriv_bound() <= 2.0 / 0.8 * 15.0 / 8.0);
    }

    #[test]
    fn dyadic_counts() {
        assert_eq!(dyadic_count(2, &int(1)), 4);
        assert_eq!(dyadic_count(3, &rat(2, 3)), 4);
        assert_eq!(dyadic_count(1, &rat(1, 2)), 2);
        assert_eq!(dyadic_count(5, &int(0)), 1);
    }

    #[test]
    fn hand_examples() {
        let c = Cover::single(rat(1, 2), int(2));
        assert_eq!(
            lemma_conv_integral(&c, &int(1), &int(2)),
            Real::Exact(int(4))
        );
        let c = make_dyadic_cover(&int(0), 2, Layout::Nested, &int(2)).unwrap();
        assert_eq!(
            lemma_conv_integral(&c, &int(1), &int(1)),
            Real::Exact(int(3))
        );
        assert_eq!(
            lemma_conv_integral(&c, &int(1), &int(0)),
            Real::Exact(int(1))
        );
    }

    #[test]
    fn cover_examples() {
        let c = make_dyadic_cover(&int(0), 3, Layout::Nested, &int(2)).unwrap();
        let radii: Vec<Rational> = c.entries.iter().map(|e| e.radius.clone()).collect();
        assert_eq!(radii, vec![rat(1, 2), rat(1, 4), rat(1, 8)]);
        assert_eq!(c.h, Real::Exact(int(3)));
        let c = make_dyadic_cover(&int(1), 2, Layout::Nested, &int(2)).unwrap();
        assert_eq!(c.h, Real::Exact(int(2)));
        let c = make_dyadic_cover(&rat(2, 3), 4, Layout::Disjoint, &int(2)).unwrap();
        assert!(c.doubled_disjoint());
        assert!(make_dyadic_cover_capped(&int(2), 12, Layout::Nested, &int(2), 1000).is_err());
    }
}
