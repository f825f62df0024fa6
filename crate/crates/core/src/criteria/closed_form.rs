//! Closed-form optimized regions, one evaluator per case.

use std::cmp::Ordering;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::constraint::{satisfied, ConstraintId, ConstraintSpec, Linear, Quadratic, Term};
use crate::criteria::family::{constraint_family, slice_family_raw};
use crate::error::Result;
use crate::geometry::ConvexPiece;
use crate::numeric::{int, rat, Field, Rational};
use crate::point::{ExponentPoint, Point};
use crate::region::closure::ClosureModel;
use crate::scenario::{Scenario, SingularityKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseLabel {
    /// γ = 1, d ≤ 1.
    SliceClassicalLowD,
    /// γ = 1, 1 < d < 3.
    SliceClassicalHighD,
    /// 1/2 < γ < 1, d ≤ 5 - 4γ.
    SliceFractionalLowD,
    /// 1/2 < γ < 1, 5 - 4γ < d < 3.
    SliceFractionalHighD,
    /// γ ≤ 1/2.
    SliceLowDissipation,
    /// γ > 1 with d = 0.
    SliceSuperDissipative,
    GeneralClassical,
    GeneralFractional,
}

impl CaseLabel {
    pub fn of(s: &Scenario) -> CaseLabel {
        let g = &s.gamma;
        if s.kind == SingularityKind::General && !s.d.is_zero() {
            return if g.is_one() {
                CaseLabel::GeneralClassical
            } else {
                CaseLabel::GeneralFractional
            };
        }
        if g > &int(1) {
            CaseLabel::SliceSuperDissipative
        } else if g.is_one() {
            if s.d <= int(1) {
                CaseLabel::SliceClassicalLowD
            } else {
                CaseLabel::SliceClassicalHighD
            }
        } else if g <= &rat(1, 2) {
            CaseLabel::SliceLowDissipation
        } else if s.d <= int(5) - int(4) * g {
            CaseLabel::SliceFractionalLowD
        } else {
            CaseLabel::SliceFractionalHighD
        }
    }

    pub fn is_high_d(&self) -> bool {
        matches!(
            self,
            CaseLabel::SliceClassicalHighD | CaseLabel::SliceFractionalHighD
        )
    }
}

/// `2(3-d)x + (5-d)y ⋈ 3-d`: the `C` and `D+P` lines at α = (5-d)/2.
pub fn optimal_line(d: &Rational) -> Linear<Rational> {
    Linear::new(int(2) * (int(3) - d), int(5) - d, int(3) - d)
}

/// `(3-d)x + 2y ⋈ (3-d)/2`: the `C` line at α = 2.
pub fn c_line_alpha2(d: &Rational) -> Linear<Rational> {
    Linear::new(int(3) - d, int(2), (int(3) - d) / int(2))
}

/// Curve where the `C` line meets the enstrophy-based flux line; the region
/// lies where it is positive. At γ = 1 this is the classical curve.
pub fn xy_curve(d: &Rational, gamma: &Rational) -> Quadratic<Rational> {
    let g = gamma;
    let three_d = int(3) - d;
    let two_g1 = int(2) * g - int(1);
    Quadratic {
        xx: int(6) * &three_d,
        xy: int(6) * (int(6) * g - int(5) - &two_g1 * d),
        yy: Rational::zero(),
        x: -(int(4) * g + int(3)) * &three_d,
        y: -(int(22) * g - int(15) - int(3) * &two_g1 * d),
        c: int(2) * g * &three_d,
    }
}

/// Compatibility of the `C` and `F + G` constraints over α.
pub fn cf_envelope(d: &Rational, gamma: &Rational) -> Quadratic<Rational> {
    let g = gamma;
    let three_d = int(3) - d;
    Quadratic {
        xx: Rational::zero(),
        xy: int(4) * (int(1) - g) * &three_d,
        yy: Rational::zero(),
        x: int(-2) * &three_d,
        y: int(-2) * (&three_d + (d - int(1)) * g),
        c: three_d,
    }
}

/// Right end of the curve branch: `min(1/2, 2γ/3)`.
pub fn curve_x_end(gamma: &Rational) -> Rational {
    std::cmp::min(rat(1, 2), int(2) * gamma / int(3))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub inside: bool,
    pub on_boundary: bool,
    /// Boundary constraints with zero slack at the point.
    pub governing: Vec<ConstraintId>,
    /// The point sits on a boundary that is not included.
    pub strict_boundary: bool,
}

struct Condition<F> {
    ids: &'static [ConstraintId],
    slack: F,
    strict: bool,
}

fn combine<F: Field>(conds: Vec<Condition<F>>) -> Membership {
    let signs: Vec<Ordering> = conds.iter().map(|c| c.slack.sign()).collect();
    let inside = conds
        .iter()
        .zip(&signs)
        .all(|(c, s)| satisfied(*s, c.strict));
    let closure = signs.iter().all(|s| *s != Ordering::Less);
    let zero: Vec<&Condition<F>> = conds
        .iter()
        .zip(&signs)
        .filter(|(_, s)| **s == Ordering::Equal)
        .map(|(c, _)| c)
        .collect();
    let on_boundary = closure && !zero.is_empty();
    let mut governing: Vec<ConstraintId> =
        zero.iter().flat_map(|c| c.ids.iter().copied()).collect();
    governing.sort();
    governing.dedup();
    Membership {
        inside,
        on_boundary,
        governing,
        strict_boundary: on_boundary && zero.iter().any(|c| c.strict),
    }
}

/// Evaluator for the one-slice cases.
#[derive(Clone, Debug)]
pub(crate) struct SliceModel<F> {
    case: CaseLabel,
    strict: bool,
    line: Linear<F>,
    envelope: Quadratic<F>,
    curve: Quadratic<F>,
    third: F,
    x_end: F,
}

const C_DP: &[ConstraintId] = &[ConstraintId::C, ConstraintId::DP];
const C_F: &[ConstraintId] = &[ConstraintId::C, ConstraintId::F];
const ENVELOPE: &[ConstraintId] = &[ConstraintId::CfEnvelope];
const CURVE: &[ConstraintId] = &[ConstraintId::Curve];
const ENSTROPHY: &[ConstraintId] = &[ConstraintId::DpEnstrophy];
const DP: &[ConstraintId] = &[ConstraintId::DP];

impl<F: Field> SliceModel<F> {
    pub(crate) fn new(s: &Scenario, case: CaseLabel) -> Self {
        let d = &s.d;
        SliceModel {
            case,
            strict: !s.all_nonstrict(),
            line: optimal_line(d).to_field(),
            envelope: cf_envelope(d, &std::cmp::min(s.gamma.clone(), int(1))).to_field(),
            curve: xy_curve(d, &s.gamma).to_field(),
            third: F::from_rational(&rat(1, 3)),
            x_end: F::from_rational(&curve_x_end(&s.gamma)),
        }
    }

    pub(crate) fn classify(&self, p: &Point<F>) -> Membership {
        let below_diag = p.x.cmp_tol(&p.y) == Ordering::Greater;
        let past_third = p.x.cmp_tol(&self.third) == Ordering::Greater;
        let mut conds = Vec::new();
        if self.case.is_high_d() {
            let (ids, strict) = match self.case {
                CaseLabel::SliceClassicalHighD => (C_F, below_diag),
                _ => (ENVELOPE, true),
            };
            conds.push(Condition {
                ids,
                slack: self.envelope.eval(p),
                strict,
            });
        } else if !past_third {
            conds.push(Condition {
                ids: C_DP,
                slack: self.line.slack(p),
                strict: self.strict && below_diag,
            });
            if self.case == CaseLabel::SliceLowDissipation {
                conds.push(Condition {
                    ids: DP,
                    slack: self.third.clone() - p.x.clone(),
                    strict: false,
                });
            }
        }
        if past_third {
            if self.case == CaseLabel::SliceLowDissipation {
                conds.push(Condition {
                    ids: DP,
                    slack: self.third.clone() - p.x.clone(),
                    strict: false,
                });
            } else {
                conds.push(Condition {
                    ids: CURVE,
                    slack: self.curve.eval(p),
                    strict: self.strict,
                });
                conds.push(Condition {
                    ids: ENSTROPHY,
                    slack: self.x_end.clone() - p.x.clone(),
                    strict: true,
                });
            }
        }
        combine(conds)
    }
}

impl<F: Field> SliceModel<F> {
    /// A point of the region on the segment from `p` to `L^∞L²`.
    ///
    /// Along that segment every boundary function either vanishes at
    /// `L^∞L²` (and is then `(1/2 - x)` times a function linear in `x`) or
    /// is linear in `x` itself, so the admissible abscissae form finitely
    /// many intervals whose ends are roots of those linear functions.
    pub(crate) fn ray_landing(&self, p: &Point<F>) -> Option<Point<F>> {
        let half = F::from_rational(&rat(1, 2));
        if p.x.cmp_tol(&half) != Ordering::Less {
            return None;
        }
        let b0 = Point::new(half.clone(), F::zero_f());
        let at = |t: &F| {
            p.lerp(
                &b0,
                &((t.clone() - p.x.clone()) / (half.clone() - p.x.clone())),
            )
        };
        let values = |q: &Point<F>| {
            vec![
                self.line.slack(q),
                self.envelope.eval(q),
                self.curve.eval(q),
                self.third.clone() - q.x.clone(),
                self.x_end.clone() - q.x.clone(),
                q.y.clone() - q.x.clone(),
            ]
        };
        let vanish: Vec<bool> = values(&b0).iter().map(|v| v.is_zero_tol()).collect();
        let reduced = |t: &F| -> Vec<F> {
            let w = half.clone() - t.clone();
            values(&at(t))
                .into_iter()
                .zip(&vanish)
                .map(|(v, z)| if *z { v / w.clone() } else { v })
                .collect()
        };
        let (x1, x2) = (p.x.clone(), (p.x.clone() + half.clone()) / F::from_int(2));
        let (g1, g2) = (reduced(&x1), reduced(&x2));
        let in_range =
            |t: &F| t.cmp_tol(&p.x) != Ordering::Less && t.cmp_tol(&half) == Ordering::Less;
        let mut cand = vec![x1.clone(), self.third.clone()];
        for (a, b) in g1.iter().zip(&g2) {
            let slope = b.clone() - a.clone();
            if !slope.is_zero_tol() {
                cand.push(x1.clone() - a.clone() * (x2.clone() - x1.clone()) / slope);
            }
        }
        cand.retain(|t| in_range(t));
        cand.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        cand.dedup_by(|a, b| a.cmp_tol(b) == Ordering::Equal);
        let mut ends = cand.clone();
        ends.push(half.clone());
        let mids: Vec<F> = ends
            .windows(2)
            .map(|w| (w[0].clone() + w[1].clone()) / F::from_int(2))
            .collect();
        cand.into_iter()
            .chain(mids)
            .map(|t| at(&t))
            .find(|q| self.classify(q).inside)
    }
}

/// Add the points reached by interpolation toward `L^∞L²`.
fn with_ray(m: Membership, landing: impl FnOnce() -> bool) -> Membership {
    if m.inside || !landing() {
        return m;
    }
    Membership {
        inside: true,
        on_boundary: false,
        governing: vec![],
        strict_boundary: false,
    }
}

/// Membership evaluator for a scenario's optimized region.
#[derive(Clone, Debug)]
pub struct RegionModel {
    pub scenario: Scenario,
    pub case: CaseLabel,
    kind: ModelKind,
}

#[derive(Clone, Debug)]
enum ModelKind {
    Slice(Box<(SliceModel<Rational>, SliceModel<f64>)>),
    Closure(Box<ClosureModel>),
}

/// Convex pieces of a space-time family: one per choice of applicable
/// branch for every term.
pub(crate) fn family_pieces(
    family: &[ConstraintSpec],
) -> Vec<(ConvexPiece<Rational>, Vec<ConstraintId>)> {
    let mut terms: Vec<Term> = family.iter().map(|c| c.term).collect();
    terms.sort();
    terms.dedup();
    let groups: Vec<Vec<&ConstraintSpec>> = terms
        .iter()
        .map(|t| family.iter().filter(|c| c.term == *t).collect())
        .collect();
    let mut out = vec![(Vec::new(), Vec::new())];
    for group in &groups {
        let mut next = Vec::new();
        for (bounds, ids) in &out {
            for c in group {
                let mut b: Vec<_> = bounds.clone();
                b.extend(c.cone.iter().cloned());
                b.push(crate::constraint::HalfPlane {
                    line: c.linear().expect("linear family").clone(),
                    strict: c.strict,
                });
                let mut i: Vec<ConstraintId> = ids.clone();
                i.push(c.id);
                next.push((b, i));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(b, i)| (ConvexPiece::new(b), i))
        .collect()
}

impl RegionModel {
    pub fn new(s: &Scenario) -> Result<Self> {
        s.validate()?;
        let case = CaseLabel::of(s);
        let kind = match case {
            CaseLabel::GeneralClassical | CaseLabel::GeneralFractional => {
                let fam = constraint_family(s, &s.forced_alpha().expect("general"))?;
                let pieces = family_pieces(&fam.constraints)
                    .into_iter()
                    .map(|(p, _)| p)
                    .collect();
                ModelKind::Closure(Box::new(ClosureModel::new(pieces, &s.gamma)))
            }
            _ => ModelKind::Slice(Box::new((
                SliceModel::new(s, case),
                SliceModel::new(s, case),
            ))),
        };
        Ok(RegionModel {
            scenario: s.clone(),
            case,
            kind,
        })
    }

    pub fn classify_exact(&self, p: &Point<Rational>) -> Membership {
        match &self.kind {
            ModelKind::Slice(m) => with_ray(m.0.classify(p), || m.0.ray_landing(p).is_some()),
            ModelKind::Closure(c) => self.closure_membership(c.classify_exact(p), p),
        }
    }

    pub fn classify_f64(&self, p: &Point<f64>) -> Membership {
        match &self.kind {
            ModelKind::Slice(m) => with_ray(m.1.classify(p), || m.1.ray_landing(p).is_some()),
            ModelKind::Closure(c) => self.closure_membership(c.classify_f64(p), p),
        }
    }

    fn closure_membership<F: Field>(&self, m: crate::geometry::Meet, p: &Point<F>) -> Membership {
        use crate::geometry::Meet;
        let on_boundary = m == Meet::Degenerate;
        let governing = if on_boundary {
            self.zero_slack_ids(p)
        } else {
            vec![]
        };
        Membership {
            inside: m != Meet::Empty,
            on_boundary,
            governing,
            strict_boundary: false,
        }
    }

    fn zero_slack_ids<F: Field>(&self, p: &Point<F>) -> Vec<ConstraintId> {
        let alpha = self.scenario.forced_alpha().unwrap_or_else(|| int(2));
        let fam = match self.scenario.kind {
            SingularityKind::General => constraint_family(&self.scenario, &alpha)
                .map(|f| f.constraints)
                .unwrap_or_default(),
            SingularityKind::Slice => slice_family_raw(&self.scenario, &alpha),
        };
        let mut ids: Vec<ConstraintId> = fam
            .iter()
            .filter(|c| c.applies(p) && c.slack(p).is_zero_tol())
            .map(|c| c.id)
            .collect();
        ids.sort();
        ids.dedup();
        ids
    }

    pub fn classify(&self, pt: &ExponentPoint) -> Membership {
        match pt {
            ExponentPoint::Exact { .. } => self.classify_exact(&pt.to_exact()),
            ExponentPoint::Float { .. } => self.classify_f64(&pt.to_f64()),
        }
    }

    pub fn contains(&self, pt: &ExponentPoint) -> bool {
        self.classify(pt).inside
    }

    /// Exact landing point of the slice region toward `L^∞L²`.
    pub(crate) fn slice_landing(&self, p: &Point<Rational>) -> Option<Point<Rational>> {
        match &self.kind {
            ModelKind::Slice(m) => m.0.ray_landing(p),
            ModelKind::Closure(_) => None,
        }
    }

    pub(crate) fn closure(&self) -> Option<&ClosureModel> {
        match &self.kind {
            ModelKind::Closure(c) => Some(c),
            ModelKind::Slice(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_passes_through_pivots() {
        for d in [int(0), rat(1, 3), rat(1, 2), int(1), rat(3, 2), int(2)] {
            let q = xy_curve(&d, &int(1));
            assert!(q.eval(&Point::new(rat(1, 6), rat(1, 2))).is_zero());
            assert!(q.eval(&Point::new(rat(1, 2), int(0))).is_zero());
            let start = Point::new(rat(1, 3), (int(3) - &d) / (int(15) - int(3) * &d));
            assert!(q.eval(&start).is_zero());
            assert!(optimal_line(&d).slack(&start).is_zero());
        }
    }

    #[test]
    fn case_dispatch() {
        let c = |g: Rational, d: Rational| CaseLabel::of(&Scenario::slice(g, d).unwrap());
        assert_eq!(c(int(1), int(1)), CaseLabel::SliceClassicalLowD);
        assert_eq!(c(int(1), rat(3, 2)), CaseLabel::SliceClassicalHighD);
        assert_eq!(c(rat(9, 10), rat(7, 5)), CaseLabel::SliceFractionalLowD);
        assert_eq!(c(rat(9, 10), rat(3, 2)), CaseLabel::SliceFractionalHighD);
        assert_eq!(c(rat(1, 2), int(1)), CaseLabel::SliceLowDissipation);
        assert_eq!(c(rat(3, 2), int(0)), CaseLabel::SliceSuperDissipative);
    }

    #[test]
    fn lions_point_on_closed_boundary() {
        let m = RegionModel::new(&Scenario::classical_slice(int(1))).unwrap();
        let v = m.classify_exact(&Point::new(rat(1, 4), rat(1, 4)));
        assert!(v.inside && v.on_boundary && !v.strict_boundary);
        let w = m.classify_exact(&Point::new(rat(3, 10), rat(1, 5)));
        assert!(!w.inside && w.on_boundary && w.strict_boundary);
    }
}
