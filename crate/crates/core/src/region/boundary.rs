//! Explicit region boundaries with labelled vertices.
//!
//! Slice regions and the classical space-time region are the part of the
//! square under an upper graph made of segments and curve arcs. The
//! fractional space-time regions are sampled column by column.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::alpha::solve_x0;
use crate::constraint::{ConstraintId, Quadratic};
use crate::criteria::closed_form::{curve_x_end, xy_curve, CaseLabel, RegionModel};
use crate::error::Result;
use crate::numeric::{int, rat, Rational, Real};
use crate::point::{ExponentPoint, Point};
use crate::scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    Segment,
    Arc,
    /// Part of the top edge `q = 2` of the square.
    Edge,
    Vertical,
    /// Sampled boundary of an approximate region.
    Polyline,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPiece {
    pub id: String,
    pub kind: PieceKind,
    pub constraints: Vec<ConstraintId>,
    pub start: ExponentPoint,
    pub end: ExponentPoint,
    /// Curve for arcs; the region lies where it is positive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<Quadratic<Rational>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<ExponentPoint>,
    /// Points on the piece are excluded.
    pub strict: bool,
    /// Lower rather than upper boundary (sampled regions only).
    #[serde(default)]
    pub lower: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub label: String,
    pub point: ExponentPoint,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionBoundary {
    pub scenario: Scenario,
    pub case: CaseLabel,
    pub pieces: Vec<BoundaryPiece>,
    pub vertices: Vec<Vertex>,
    /// Right end of the region and whether it is excluded.
    pub x_max: Real,
    pub x_max_strict: bool,
    /// Sampled rather than closed-form.
    pub approximate: bool,
    pub notes: Vec<String>,
}

/// Where a point sits relative to an exported boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryTest {
    Inside,
    Outside,
    /// Within tolerance of a piece; `included` follows its strictness.
    OnBoundary {
        included: bool,
    },
}

fn ep(x: Rational, y: Rational) -> ExponentPoint {
    ExponentPoint::exact(x, y)
}

fn real_of(p: &ExponentPoint) -> (Real, Real) {
    match p {
        ExponentPoint::Exact { x, y } => (Real::Exact(x.clone()), Real::Exact(y.clone())),
        ExponentPoint::Float { x, y } => (Real::Float(*x), Real::Float(*y)),
    }
}

fn segment(
    id: &str,
    ids: &[ConstraintId],
    a: ExponentPoint,
    b: ExponentPoint,
    strict: bool,
) -> BoundaryPiece {
    BoundaryPiece {
        id: id.into(),
        kind: PieceKind::Segment,
        constraints: ids.to_vec(),
        start: a,
        end: b,
        curve: None,
        samples: vec![],
        strict,
        lower: false,
    }
}

fn with_kind(mut p: BoundaryPiece, kind: PieceKind) -> BoundaryPiece {
    p.kind = kind;
    p
}

fn arc(
    id: &str,
    curve: &Quadratic<Rational>,
    a: ExponentPoint,
    b: ExponentPoint,
    strict: bool,
) -> BoundaryPiece {
    BoundaryPiece {
        id: id.into(),
        kind: PieceKind::Arc,
        constraints: vec![ConstraintId::Curve],
        start: a,
        end: b,
        curve: Some(curve.clone()),
        samples: vec![],
        strict,
        lower: false,
    }
}

fn vertex(p: &ExponentPoint, provenance: &str) -> Vertex {
    Vertex {
        label: space_name(p),
        point: p.clone(),
        provenance: provenance.into(),
    }
}

fn exponent_text(r: &Real) -> String {
    match r {
        Real::Exact(v) if v.is_zero() => "inf".into(),
        Real::Exact(v) => {
            let p = v.recip();
            if p.denom().is_one() {
                p.numer().to_string()
            } else {
                format!("{{{}/{}}}", p.numer(), p.denom())
            }
        }
        Real::Float(v) if *v == 0.0 => "inf".into(),
        Real::Float(v) => format!("{{{:.6}}}", 1.0 / v),
    }
}

/// `L^q L^p` name of a point, time exponent first.
pub fn space_name(p: &ExponentPoint) -> String {
    let (x, y) = real_of(p);
    format!("L^{} L^{}", exponent_text(&y), exponent_text(&x))
}

/// Upper graph for the slice cases whose low part is the line
/// `2(3-d)x + (5-d)y ⋈ 3-d`.
fn low_d_pieces(s: &Scenario, case: CaseLabel, rb: &mut RegionBoundary) {
    let d = &s.d;
    let three_d = int(3) - d;
    let strict = !s.all_nonstrict();
    let y_line = |x: &Rational| &three_d * (int(1) - int(2) * x) / (int(5) - d);
    let ids = [ConstraintId::C, ConstraintId::DP];
    let mut start = ep(Rational::zero(), y_line(&Rational::zero()));
    if y_line(&Rational::zero()) > rat(1, 2) {
        let xt = (int(1) - d) / (int(4) * &three_d);
        let top = ep(xt, rat(1, 2));
        rb.pieces.push(with_kind(
            segment(
                "top",
                &[],
                ep(Rational::zero(), rat(1, 2)),
                top.clone(),
                false,
            ),
            PieceKind::Edge,
        ));
        rb.vertices
            .push(vertex(&top, "optimal C/DP line meets q = 2"));
        start = top;
    } else {
        rb.vertices
            .push(vertex(&start, "optimal C/DP line meets p = inf"));
    }
    let b = (&three_d) / (int(11) - int(3) * d);
    let bis = ep(b.clone(), b);
    let third = rat(1, 3);
    let curve_start = ep(third.clone(), y_line(&third));
    rb.pieces
        .push(segment("cdp_upper", &ids, start, bis.clone(), false));
    rb.pieces.push(segment(
        "cdp_lower",
        &ids,
        bis.clone(),
        curve_start.clone(),
        strict,
    ));
    rb.vertices.push(vertex(
        &bis,
        "bisectrice point separating the closed and open parts",
    ));
    rb.vertices
        .push(vertex(&curve_start, "curve start at p = 3"));
    if case == CaseLabel::SliceLowDissipation {
        let foot = ep(third.clone(), Rational::zero());
        rb.pieces.push(with_kind(
            segment("p3", &[ConstraintId::DP], curve_start, foot.clone(), false),
            PieceKind::Vertical,
        ));
        rb.vertices.push(vertex(&foot, "p = 3 on q = inf"));
        rb.x_max = Real::Exact(third);
        rb.x_max_strict = false;
        rb.notes
            .push("no criterion for p < 3 when gamma <= 1/2".into());
        return;
    }
    if curve_slope_increasing(s) {
        rb.pieces.clear();
        rb.vertices.clear();
        limit_chord_pieces(s, rb);
        return;
    }
    let curve = xy_curve(d, &s.gamma);
    let x_end = curve_x_end(&s.gamma);
    let end = ep(x_end.clone(), Rational::zero());
    rb.pieces
        .push(arc("curve", &curve, curve_start, end.clone(), strict));
    rb.vertices.push(vertex(&end, "curve end on q = inf"));
    rb.x_max = Real::Exact(x_end);
    rb.x_max_strict = true;
}

/// The chord slope `y / (1/2 - x)` along the curve `Q = 0` increases with
/// `x`, so the whole arc lies under its limiting chord at `L^∞L²`.
fn curve_slope_increasing(s: &Scenario) -> bool {
    let (c, dd) = curve_coefficients(s);
    int(4) * &c * &s.gamma > dd && curve_x_end(&s.gamma) == rat(1, 2)
}

/// `C` and `D` with `Q(x, y) = Q(x, 0) + y (6Cx - D)`.
fn curve_coefficients(s: &Scenario) -> (Rational, Rational) {
    let (g, d) = (&s.gamma, &s.d);
    let two_g1 = int(2) * g - int(1);
    (
        int(6) * g - int(5) - &two_g1 * d,
        int(22) * g - int(15) - int(3) * &two_g1 * d,
    )
}

/// Limit of the chord slope at `x = 1/2`.
fn curve_end_slope(s: &Scenario) -> Rational {
    let (c, dd) = curve_coefficients(s);
    int(2) * (int(3) - &s.d) * (int(2) * &s.gamma - rat(3, 2)) / (dd - int(3) * c)
}

/// Closure toward `L^∞L²` when the arc steepens toward it: the part of the
/// square strictly under the limiting chord.
fn limit_chord_pieces(s: &Scenario, rb: &mut RegionBoundary) {
    let half = rat(1, 2);
    let start = chord_start(&Real::Exact(curve_end_slope(s)));
    push_top(&start, &mut rb.pieces);
    rb.pieces.push(segment(
        "chord",
        &[ConstraintId::Curve],
        start.clone(),
        ep(half.clone(), Rational::zero()),
        true,
    ));
    rb.vertices
        .push(vertex(&start, "limiting chord of the curve meets the edge"));
    rb.vertices.push(vertex(
        &ep(half.clone(), Rational::zero()),
        "energy class endpoint",
    ));
    rb.x_max = Real::Exact(half);
    rb.x_max_strict = true;
    rb.notes.push("the curve steepens toward L^inf L^2; interpolation with the energy class fills the part under its limiting chord".into());
}

/// Where the line of slope `-m` through `L^∞L²` leaves the square on the
/// left or top edge.
fn chord_start(m: &Real) -> ExponentPoint {
    let half = rat(1, 2);
    match m {
        Real::Exact(m) if m * &half > half => ep(&half - &half / m, half.clone()),
        Real::Exact(m) => ep(Rational::zero(), m * &half),
        Real::Float(m) if m * 0.5 > 0.5 => ExponentPoint::float(0.5 - 0.5 / m, 0.5),
        Real::Float(m) => ExponentPoint::float(0.0, m * 0.5),
    }
}

fn push_top(start: &ExponentPoint, pieces: &mut Vec<BoundaryPiece>) {
    let p = start.to_f64();
    if p.y == 0.5 && p.x > 0.0 {
        pieces.push(with_kind(
            segment(
                "top",
                &[],
                ep(Rational::zero(), rat(1, 2)),
                start.clone(),
                false,
            ),
            PieceKind::Edge,
        ));
    }
}

/// High-d slice regions: the segment from the left edge toward `L^∞L²`
/// through the corner with the curve, then the curve.
fn high_d_pieces(s: &Scenario, case: CaseLabel, rb: &mut RegionBoundary) -> Result<()> {
    let d = &s.d;
    let three_d = int(3) - d;
    let half = rat(1, 2);
    let curve = xy_curve(d, &s.gamma);
    let x_end = curve_x_end(&s.gamma);
    let cross = solve_x0(d, &std::cmp::min(s.gamma.clone(), int(1)))?;
    let corner = match &cross.exact {
        Some(x0) => ep(x0.clone(), curve.y_at(x0).expect("curve is a graph")),
        None => {
            let x0 = cross.value;
            ExponentPoint::float(
                x0,
                curve.to_field::<f64>().y_at(&x0).expect("curve is a graph"),
            )
        }
    };
    let c = corner.to_f64();
    let slope_corner = c.y / (0.5 - c.x);
    let classical = case == CaseLabel::SliceClassicalHighD;
    let (ids, chord_id): (&[ConstraintId], _) = if classical {
        (&[ConstraintId::C, ConstraintId::F], "cf")
    } else {
        (&[ConstraintId::CfEnvelope], "chord")
    };
    if !classical && curve_slope_increasing(s) {
        limit_chord_pieces(s, rb);
        return Ok(());
    }
    // Left end of the chord through the corner and L^∞L².
    let slope = match &corner {
        ExponentPoint::Exact { x, y } => Real::Exact(y / (&half - x)),
        ExponentPoint::Float { .. } => Real::Float(slope_corner),
    };
    let start = chord_start(&slope);
    push_top(&start, &mut rb.pieces);
    rb.vertices
        .push(vertex(&start, "chord toward L^inf L^2 meets the edge"));
    if classical {
        let bx = &three_d / (int(2) * (int(5) - d));
        let bis = ep(bx.clone(), bx);
        let den = int(6) + int(2) * d;
        let seg = ep((int(1) + d) / &den, &three_d / &den);
        rb.pieces
            .push(segment("cf_upper", ids, start, bis.clone(), false));
        rb.pieces
            .push(segment("cf_lower", ids, bis.clone(), seg.clone(), true));
        rb.pieces.push(segment(
            "cf_lower_right",
            ids,
            seg.clone(),
            corner.clone(),
            true,
        ));
        rb.vertices.push(vertex(
            &bis,
            "bisectrice point separating the closed and open parts",
        ));
        rb.vertices.push(vertex(
            &seg,
            "C/F line meets the segment [L^4 L^4, L^inf L^3]",
        ));
    } else {
        rb.pieces
            .push(segment(chord_id, ids, start, corner.clone(), true));
        rb.notes.push(
            "left of the curve corner the interpolation closure toward L^inf L^2 lies above the C/FG envelope; the boundary is the chord"
                .into(),
        );
    }
    rb.vertices
        .push(vertex(&corner, "curve start at the crossover x0"));
    let end = ep(x_end.clone(), Rational::zero());
    rb.pieces
        .push(arc("curve", &curve, corner, end.clone(), true));
    rb.vertices.push(vertex(&end, "curve end on q = inf"));
    rb.x_max = Real::Exact(x_end);
    rb.x_max_strict = true;
    Ok(())
}

/// Space-time classical region: four closed half-planes on their cones.
fn general_classical_pieces(s: &Scenario, rb: &mut RegionBoundary) {
    let d = &s.d;
    let three_d = int(3) - d;
    let third = rat(1, 3);
    let half = rat(1, 2);
    let v_top = ep((int(1) - d) / (int(4) * &three_d), half.clone());
    let v_a = ep((int(2) - d) / (int(3) * &three_d), third.clone());
    let b = (int(4) - d) / (int(15) - int(3) * d);
    let v_bis = ep(b.clone(), b);
    let v_c = ep(third.clone(), (int(1) - d) / (int(3) * (int(2) - d)));
    let x_inf = (int(5) - int(2) * d) / (int(3) * (int(4) - d));
    let v_inf = ep(x_inf.clone(), Rational::zero());
    if v_top.to_f64().x > 0.0 {
        rb.pieces.push(with_kind(
            segment("top", &[], ep(Rational::zero(), half), v_top.clone(), false),
            PieceKind::Edge,
        ));
    }
    rb.pieces.push(segment(
        "gen_a",
        &[ConstraintId::GenA],
        v_top.clone(),
        v_a.clone(),
        false,
    ));
    rb.pieces.push(segment(
        "gen_b",
        &[ConstraintId::GenB],
        v_a.clone(),
        v_bis.clone(),
        false,
    ));
    rb.pieces.push(segment(
        "gen_c",
        &[ConstraintId::GenC],
        v_bis.clone(),
        v_c.clone(),
        false,
    ));
    if v_c != v_inf {
        rb.pieces.push(segment(
            "gen_d",
            &[ConstraintId::GenD],
            v_c.clone(),
            v_inf.clone(),
            false,
        ));
    }
    rb.vertices.push(vertex(&v_top, "(a) meets q = 2"));
    rb.vertices.push(vertex(&v_a, "(a) meets (b) at q = 3"));
    rb.vertices
        .push(vertex(&v_bis, "(b) meets (c) on the bisectrice"));
    rb.vertices.push(vertex(&v_c, "(c) meets (d) at p = 3"));
    rb.vertices.push(vertex(&v_inf, "(d) meets q = inf"));
    rb.notes.push(format!(
        "q = inf vertex derived from (d): p = 3(4-d)/(5-2d) = {}; the printed form L^inf L^((5-2d)/(12-3d)) gives p < 1",
        exponent_text(&Real::Exact(x_inf.clone()))
    ));
    rb.notes
        .push("all four space-time boundaries are printed as nonstrict and kept so".into());
    rb.x_max = Real::Exact(x_inf);
    rb.x_max_strict = false;
}

/// Column samples of the fractional space-time region.
fn sampled_pieces(model: &RegionModel, columns: usize, rb: &mut RegionBoundary) {
    let inside = |x: f64, y: f64| model.classify_f64(&Point::new(x, y)).inside;
    let levels = 256;
    let mut upper = vec![];
    let mut lower = vec![];
    let mut x_max = 0.0f64;
    for i in 0..=columns {
        let x = 0.5 * i as f64 / columns as f64;
        let seed = (0..=levels)
            .map(|k| 0.5 * k as f64 / levels as f64)
            .find(|y| inside(x, *y));
        let Some(seed) = seed else { continue };
        let bisect = |mut a: f64, mut b: f64| {
            // a inside, b outside
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if inside(x, m) {
                    a = m;
                } else {
                    b = m;
                }
            }
            a
        };
        let lo = if inside(x, 0.0) {
            0.0
        } else {
            bisect(seed, 0.0)
        };
        let hi = if inside(x, 0.5) {
            0.5
        } else {
            bisect(seed, 0.5)
        };
        upper.push(ExponentPoint::float(x, hi));
        lower.push(ExponentPoint::float(x, lo));
        x_max = x;
    }
    if upper.is_empty() {
        rb.notes
            .push("the region is empty at this resolution".into());
        return;
    }
    let mk = |id: &str, pts: Vec<ExponentPoint>, is_lower: bool| BoundaryPiece {
        id: id.into(),
        kind: PieceKind::Polyline,
        constraints: vec![],
        start: pts[0].clone(),
        end: pts[pts.len() - 1].clone(),
        curve: None,
        samples: pts,
        strict: false,
        lower: is_lower,
    };
    rb.pieces.push(mk("upper", upper, false));
    rb.pieces.push(mk("lower", lower, true));
    rb.x_max = Real::Float(x_max);
    rb.x_max_strict = false;
    rb.approximate = true;
    rb.notes.push(format!(
        "sampled on {} columns with bisection to 1e-15; strictness not resolved",
        columns + 1
    ));
}

/// Closed-form boundary of a scenario's region.
pub fn build_region(s: &Scenario) -> Result<RegionBoundary> {
    build_region_with(s, 400)
}

/// As [`build_region`], with the column count for sampled regions.
pub fn build_region_with(s: &Scenario, columns: usize) -> Result<RegionBoundary> {
    s.validate()?;
    let case = CaseLabel::of(s);
    let mut rb = RegionBoundary {
        scenario: s.clone(),
        case,
        pieces: vec![],
        vertices: vec![],
        x_max: Real::Exact(rat(1, 2)),
        x_max_strict: true,
        approximate: false,
        notes: vec![],
    };
    match case {
        CaseLabel::SliceClassicalHighD | CaseLabel::SliceFractionalHighD => {
            high_d_pieces(s, case, &mut rb)?
        }
        CaseLabel::GeneralClassical => general_classical_pieces(s, &mut rb),
        CaseLabel::GeneralFractional => {
            let model = RegionModel::new(s)?;
            sampled_pieces(&model, columns, &mut rb);
            if s.d > int(2) * &s.gamma {
                rb.notes.push("requires H_d(S)=0".into());
            }
        }
        _ => low_d_pieces(s, case, &mut rb),
    }
    Ok(rb)
}

fn lerp_y(a: &Point<f64>, b: &Point<f64>, x: f64) -> f64 {
    if (b.x - a.x).abs() < 1e-300 {
        return a.y.max(b.y);
    }
    a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)
}

fn polyline_y(samples: &[ExponentPoint], x: f64) -> Option<f64> {
    let pts: Vec<Point<f64>> = samples.iter().map(|p| p.to_f64()).collect();
    pts.windows(2)
        .find(|w| w[0].x <= x && x <= w[1].x)
        .map(|w| lerp_y(&w[0], &w[1], x))
}

impl BoundaryPiece {
    /// Height of the piece above `x`, when it covers `x`.
    pub fn y_at(&self, x: f64) -> Option<f64> {
        let (a, b) = (self.start.to_f64(), self.end.to_f64());
        let (lo, hi) = if a.x <= b.x { (a.x, b.x) } else { (b.x, a.x) };
        if x < lo - 1e-15 || x > hi + 1e-15 {
            return None;
        }
        match self.kind {
            PieceKind::Segment | PieceKind::Edge => Some(lerp_y(&a, &b, x)),
            PieceKind::Vertical => Some(a.y.max(b.y)),
            PieceKind::Arc => self
                .curve
                .as_ref()
                .and_then(|c| c.to_field::<f64>().y_at(&x)),
            PieceKind::Polyline => polyline_y(&self.samples, x),
        }
    }

    /// Points along the piece; arcs get `n` samples.
    pub fn sample(&self, n: usize) -> Vec<Point<f64>> {
        match self.kind {
            PieceKind::Arc => {
                let (a, b) = (self.start.to_f64(), self.end.to_f64());
                let c = self
                    .curve
                    .as_ref()
                    .expect("arc has a curve")
                    .to_field::<f64>();
                (0..n)
                    .map(|k| {
                        let x = a.x + (b.x - a.x) * k as f64 / (n - 1).max(1) as f64;
                        Point::new(x, c.y_at(&x).unwrap_or(f64::NAN))
                    })
                    .collect()
            }
            PieceKind::Polyline => self.samples.iter().map(|p| p.to_f64()).collect(),
            _ => vec![self.start.to_f64(), self.end.to_f64()],
        }
    }
}

impl RegionBoundary {
    /// Upper and lower envelopes at `x` with the strictness of the
    /// governing pieces.
    fn envelope(&self, x: f64) -> Option<((f64, bool), (f64, bool))> {
        let mut top: Option<(f64, bool)> = None;
        let mut bottom = (0.0, false);
        for p in &self.pieces {
            if p.kind == PieceKind::Vertical {
                continue;
            }
            let Some(y) = p.y_at(x) else { continue };
            if p.lower {
                bottom = (y, p.strict);
            } else {
                top = Some(match top {
                    // At shared endpoints prefer the included piece.
                    Some((t, s)) if (t - y).abs() <= 1e-12 => (t.max(y), s && p.strict),
                    Some((t, s)) if t > y => (t, s),
                    _ => (y, p.strict),
                });
            }
        }
        top.map(|t| (t, bottom))
    }

    /// Classify a point against the exported boundary.
    pub fn test_point(&self, p: &Point<f64>, tol: f64) -> BoundaryTest {
        let x_max = self.x_max.to_f64();
        if p.x > x_max + tol {
            return BoundaryTest::Outside;
        }
        let Some(((top, top_strict), (bottom, bottom_strict))) = self.envelope(p.x.min(x_max))
        else {
            return BoundaryTest::Outside;
        };
        if (p.x - x_max).abs() <= tol {
            let vertical = self.pieces.iter().any(|q| q.kind == PieceKind::Vertical);
            if p.y <= top + tol && (vertical || self.x_max_strict) {
                return BoundaryTest::OnBoundary {
                    included: !self.x_max_strict,
                };
            }
        }
        if (p.y - top).abs() <= tol {
            return BoundaryTest::OnBoundary {
                included: !top_strict,
            };
        }
        if bottom > 0.0 && (p.y - bottom).abs() <= tol {
            return BoundaryTest::OnBoundary {
                included: !bottom_strict,
            };
        }
        if p.y < top && p.y >= bottom {
            BoundaryTest::Inside
        } else {
            BoundaryTest::Outside
        }
    }

    /// Membership decided from the boundary alone.
    pub fn contains(&self, p: &Point<f64>, tol: f64) -> bool {
        match self.test_point(p, tol) {
            BoundaryTest::Inside => true,
            BoundaryTest::Outside => false,
            BoundaryTest::OnBoundary { included } => included,
        }
    }
}

/// Residual of a boundary equation at a vertex, exact when possible.
pub fn piece_residual(piece: &BoundaryPiece, p: &ExponentPoint) -> Real {
    match (&piece.curve, p) {
        (Some(c), ExponentPoint::Exact { x, y }) => {
            Real::Exact(c.eval(&Point::new(x.clone(), y.clone())))
        }
        (Some(c), ExponentPoint::Float { .. }) => {
            Real::Float(c.to_field::<f64>().eval(&p.to_f64()))
        }
        (None, _) => match (&piece.start, &piece.end, p) {
            (
                ExponentPoint::Exact { x: ax, y: ay },
                ExponentPoint::Exact { x: bx, y: by },
                ExponentPoint::Exact { x, y },
            ) => Real::Exact((bx - ax) * (y - ay) - (by - ay) * (x - ax)),
            _ => {
                let (a, b, q) = (piece.start.to_f64(), piece.end.to_f64(), p.to_f64());
                Real::Float((b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x))
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vx(rb: &RegionBoundary) -> Vec<ExponentPoint> {
        rb.vertices.iter().map(|v| v.point.clone()).collect()
    }

    #[test]
    fn classical_vertices() {
        let rb = build_region(&Scenario::classical_slice(int(1))).unwrap();
        assert!(vx(&rb).contains(&ExponentPoint::ratio(1, 4, 1, 4)));
        let rb = build_region(&Scenario::classical_slice(int(0))).unwrap();
        assert!(vx(&rb).contains(&ExponentPoint::ratio(3, 11, 3, 11)));
        let lions = rb
            .vertices
            .iter()
            .find(|v| v.point == ExponentPoint::ratio(3, 11, 3, 11))
            .unwrap();
        assert_eq!(lions.label, "L^{11/3} L^{11/3}");
        let rb = build_region(&Scenario::classical_slice(int(2))).unwrap();
        assert!(vx(&rb).contains(&ExponentPoint::ratio(3, 10, 1, 10)));
        assert!(vx(&rb).contains(&ExponentPoint::ratio(7, 18, 1, 18)));
    }

    #[test]
    fn general_vertices() {
        let rb = build_region(&Scenario::general(int(1), rat(1, 2)).unwrap()).unwrap();
        let v = vx(&rb);
        assert!(v.contains(&ExponentPoint::ratio(1, 5, 1, 3)));
        assert!(v.contains(&ExponentPoint::ratio(7, 27, 7, 27)));
        assert!(v.contains(&ExponentPoint::ratio(8, 21, 0, 1)));
    }

    #[test]
    fn adjacent_pieces_share_endpoints() {
        for s in [
            Scenario::classical_slice(rat(1, 2)),
            Scenario::classical_slice(rat(5, 2)),
            Scenario::slice(rat(9, 10), int(2)).unwrap(),
            Scenario::slice(rat(2, 5), rat(1, 2)).unwrap(),
        ] {
            let rb = build_region(&s).unwrap();
            for w in rb.pieces.windows(2) {
                assert_eq!(w[0].end, w[1].start, "{s}");
            }
        }
    }
}
