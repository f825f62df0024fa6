//! Per-α constraint families and the pointwise check at a fixed α.

use std::collections::BTreeSet;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::constraint::{ConstraintId, ConstraintSpec, Form, HalfPlane, Linear, Term};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, int, rat, Field, Rational};
use crate::point::{ExponentPoint, Point};
use crate::scenario::{Scenario, SingularityKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintFamily {
    pub constraints: Vec<ConstraintSpec>,
    /// The α actually used (forced in the space-time case).
    #[serde(with = "crate::numeric::serde_rational")]
    pub alpha: Rational,
    pub warnings: Vec<String>,
}

impl ConstraintFamily {
    pub fn terms(&self) -> BTreeSet<Term> {
        self.constraints.iter().map(|c| c.term).collect()
    }
}

// Cones. `y ≥ x` is the closed side p ≥ q of the bisectrice.

pub(crate) fn above_diagonal() -> HalfPlane<Rational> {
    HalfPlane::le(int(1), int(-1), int(0))
}

pub(crate) fn below_diagonal() -> HalfPlane<Rational> {
    above_diagonal().complement()
}

pub(crate) fn x_at_most(v: Rational) -> HalfPlane<Rational> {
    HalfPlane::le(int(1), int(0), v)
}

pub(crate) fn y_at_most(v: Rational) -> HalfPlane<Rational> {
    HalfPlane::le(int(0), int(1), v)
}

/// `y - γx ≥ (1-γ)/2`, the side of the split line containing `L^2 L^2`.
pub(crate) fn above_fg_split(gamma: &Rational) -> HalfPlane<Rational> {
    HalfPlane::le(gamma.clone(), int(-1), -(int(1) - gamma) / int(2))
}

fn spec(
    id: ConstraintId,
    term: Term,
    line: Linear<Rational>,
    strict: bool,
    cone: Vec<HalfPlane<Rational>>,
) -> ConstraintSpec {
    ConstraintSpec {
        id,
        term,
        form: Form::Linear(line),
        strict,
        cone,
    }
}

/// The one-slice family at α, without the α > 0 check (the float sweep
/// compiles the family by evaluating it at two values of α).
pub(crate) fn slice_family_raw(s: &Scenario, alpha: &Rational) -> Vec<ConstraintSpec> {
    let d = &s.d;
    let g = &s.gamma;
    let three_d = int(3) - d;
    let strict = !s.all_nonstrict();
    let third = rat(1, 3);
    let mut out = Vec::new();

    let c_line = Linear::new(three_d.clone(), alpha.clone(), &three_d / int(2));
    out.push(spec(
        ConstraintId::C,
        Term::TimeDerivative,
        c_line.clone(),
        false,
        vec![above_diagonal()],
    ));
    out.push(spec(
        ConstraintId::C,
        Term::TimeDerivative,
        c_line,
        strict,
        vec![below_diagonal()],
    ));

    let dp_line = Linear::new(
        three_d.clone(),
        alpha.clone(),
        (int(2) + alpha - d) / int(3),
    );
    out.push(spec(
        ConstraintId::DP,
        Term::Flux,
        dp_line.clone(),
        false,
        vec![above_diagonal(), y_at_most(third.clone())],
    ));
    out.push(spec(
        ConstraintId::DP,
        Term::Flux,
        dp_line,
        strict,
        vec![below_diagonal(), x_at_most(third.clone())],
    ));

    if g > &rat(1, 2) {
        let enstrophy = Linear::new(
            int(2) + alpha,
            (int(2) * g - int(1)) * alpha,
            (int(3) - int(2) * g + int(2) * alpha * g) / int(3),
        );
        let mut cone = vec![x_at_most(third.clone()).complement(), y_at_most(third)];
        if g < &rat(3, 4) {
            // Hölder needs p ≥ 3/(2γ).
            cone.push(x_at_most(int(2) * g / int(3)));
        }
        out.push(spec(
            ConstraintId::DpEnstrophy,
            Term::Flux,
            enstrophy,
            strict,
            cone,
        ));
    }

    let fg_line = Linear::new(
        &three_d * g,
        alpha.clone(),
        (&three_d * g + alpha - int(2) * g) / int(2),
    );
    if g.is_one() {
        out.push(spec(
            ConstraintId::F,
            Term::Viscous,
            fg_line.clone(),
            false,
            vec![above_diagonal()],
        ));
        out.push(spec(
            ConstraintId::F,
            Term::Viscous,
            fg_line,
            strict,
            vec![below_diagonal()],
        ));
    } else {
        let split = above_fg_split(g);
        out.push(spec(
            ConstraintId::FgUpper,
            Term::Viscous,
            fg_line.clone(),
            false,
            vec![split.clone()],
        ));
        out.push(spec(
            ConstraintId::FgLower,
            Term::Viscous,
            fg_line,
            strict,
            vec![split.complement()],
        ));
    }
    out
}

fn general_family(s: &Scenario) -> Vec<ConstraintSpec> {
    let d = &s.d;
    let g = &s.gamma;
    let three_d = int(3) - d;
    let third = rat(1, 3);
    if g.is_one() {
        // Four half-planes, all closed, on cones that agree on overlaps.
        let t = Term::Combined;
        return vec![
            spec(
                ConstraintId::GenA,
                t,
                Linear::new(int(2) * &three_d, int(5) - d, three_d.clone()),
                false,
                vec![
                    x_at_most(third.clone()),
                    y_at_most(third.clone()).complement_closed(),
                ],
            ),
            spec(
                ConstraintId::GenB,
                t,
                Linear::new(three_d.clone(), int(2), (int(4) - d) / int(3)),
                false,
                vec![above_diagonal(), y_at_most(third.clone())],
            ),
            spec(
                ConstraintId::GenC,
                t,
                Linear::new(int(3), int(2) - d, (int(4) - d) / int(3)),
                false,
                vec![below_diagonal().closure(), x_at_most(third.clone())],
            ),
            spec(
                ConstraintId::GenD,
                t,
                Linear::new(int(4) - d, int(2) - d, (int(5) - int(2) * d) / int(3)),
                false,
                vec![
                    x_at_most(third.clone()).complement_closed(),
                    y_at_most(third),
                ],
            ),
        ];
    }
    let two_g = int(2) * g;
    let c_upper = Linear::new(three_d.clone(), two_g.clone(), &three_d / int(2));
    let c_lower = Linear::new(int(3), &two_g - d, &three_d / int(2));
    let dp_rhs = (int(2) + &two_g - d) / int(3);
    let dp_upper = Linear::new(three_d.clone(), two_g.clone(), dp_rhs.clone());
    let dp_lower = Linear::new(int(3), &two_g - d, dp_rhs);
    let fg_top = Linear::new(three_d.clone(), int(2), &three_d / int(2));
    let fg_bottom = Linear::new(int(3) * g, &two_g - d, (int(3) * g - d) / int(2));
    let split = above_fg_split(g);
    vec![
        spec(
            ConstraintId::C,
            Term::TimeDerivative,
            c_upper,
            false,
            vec![above_diagonal()],
        ),
        spec(
            ConstraintId::C,
            Term::TimeDerivative,
            c_lower,
            false,
            vec![below_diagonal()],
        ),
        spec(
            ConstraintId::DP,
            Term::Flux,
            dp_upper,
            false,
            vec![above_diagonal(), y_at_most(third.clone())],
        ),
        spec(
            ConstraintId::DP,
            Term::Flux,
            dp_lower,
            false,
            vec![below_diagonal(), x_at_most(third)],
        ),
        spec(
            ConstraintId::FgUpper,
            Term::Viscous,
            fg_top,
            false,
            vec![split.clone()],
        ),
        spec(
            ConstraintId::FgLower,
            Term::Viscous,
            fg_bottom,
            false,
            vec![split.complement()],
        ),
    ]
}

impl HalfPlane<Rational> {
    /// Complement with the boundary line kept (used for cones that overlap
    /// on their shared edge).
    pub(crate) fn complement_closed(&self) -> Self {
        HalfPlane {
            line: self.line.scale(&int(-1)),
            strict: false,
        }
    }

    pub(crate) fn closure(&self) -> Self {
        HalfPlane {
            line: self.line.clone(),
            strict: false,
        }
    }
}

/// Every constraint the scenario's terms impose at this α.
pub fn constraint_family(s: &Scenario, alpha: &Rational) -> Result<ConstraintFamily> {
    s.validate()?;
    if !alpha.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "alpha must be positive, got {}",
            format_rational(alpha)
        )));
    }
    match s.kind {
        SingularityKind::Slice => Ok(ConstraintFamily {
            constraints: slice_family_raw(s, alpha),
            alpha: alpha.clone(),
            warnings: vec![],
        }),
        SingularityKind::General if s.d.is_zero() => {
            // A finite singular set: same criteria as the one-slice case.
            Ok(ConstraintFamily {
                constraints: slice_family_raw(s, alpha),
                alpha: alpha.clone(),
                warnings: vec![
                    "d = 0: the space-time criteria reduce to the one-slice family".into(),
                ],
            })
        }
        SingularityKind::General => {
            let forced = s.forced_alpha().expect("general scenario");
            let mut warnings = vec![];
            if &forced != alpha {
                warnings.push(format!(
                    "alpha is fixed to {} by parabolic scaling; the requested {} is ignored",
                    format_rational(&forced),
                    format_rational(alpha)
                ));
            }
            Ok(ConstraintFamily {
                constraints: general_family(s),
                alpha: forced,
                warnings,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaCheck {
    pub satisfied: bool,
    pub binding: Vec<ConstraintId>,
    /// Terms with no applicable constraint at the point.
    pub uncovered: Vec<Term>,
    pub violated: Vec<ConstraintId>,
}

pub(crate) fn check_family<F: Field>(family: &[ConstraintSpec], p: &Point<F>) -> AlphaCheck {
    let terms: BTreeSet<Term> = family.iter().map(|c| c.term).collect();
    let mut covered = BTreeSet::new();
    let mut binding = BTreeSet::new();
    let mut violated = BTreeSet::new();
    for c in family.iter().filter(|c| c.applies(p)) {
        covered.insert(c.term);
        let slack = c.slack(p);
        if slack.is_zero_tol() {
            binding.insert(c.id);
        }
        if !c.satisfied(p) {
            violated.insert(c.id);
        }
    }
    let uncovered: Vec<Term> = terms.difference(&covered).copied().collect();
    AlphaCheck {
        satisfied: uncovered.is_empty() && violated.is_empty(),
        binding: binding.into_iter().collect(),
        uncovered,
        violated: violated.into_iter().collect(),
    }
}

/// Whether the point passes every applicable constraint at this α.
pub fn check_at_alpha(pt: &ExponentPoint, s: &Scenario, alpha: &Rational) -> Result<AlphaCheck> {
    pt.validate()?;
    let fam = constraint_family(s, alpha)?;
    Ok(match pt {
        ExponentPoint::Exact { .. } => check_family(&fam.constraints, &pt.to_exact()),
        ExponentPoint::Float { .. } => check_family(&fam.constraints, &pt.to_f64()),
    })
}

/// A slice family with every slack affine in α, compiled to floats for
/// dense α sweeps.
#[derive(Clone, Debug)]
pub struct CompiledFamily {
    rows: Vec<CompiledRow>,
    n_terms: usize,
}

#[derive(Clone, Debug)]
struct CompiledRow {
    term: usize,
    /// slack = base·(x, y, 1) + α·slope·(x, y, 1)
    base: [f64; 3],
    slope: [f64; 3],
    strict: bool,
    cone: Vec<([f64; 3], bool)>,
}

fn lin_coeffs(l: &Linear<Rational>) -> [f64; 3] {
    let f = |r: &Rational| crate::numeric::to_f64(r);
    [-f(&l.a), -f(&l.b), f(&l.c)]
}

impl CompiledFamily {
    pub fn new(s: &Scenario) -> Result<Self> {
        s.validate()?;
        if s.kind != SingularityKind::Slice {
            return Err(Error::InvalidArgument(
                "the α sweep applies to one-slice scenarios only".into(),
            ));
        }
        let f1 = slice_family_raw(s, &int(1));
        let f2 = slice_family_raw(s, &int(2));
        let terms: Vec<Term> = f1
            .iter()
            .map(|c| c.term)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let rows = f1
            .iter()
            .zip(&f2)
            .map(|(a, b)| {
                let la = lin_coeffs(a.linear().expect("slice families are linear"));
                let lb = lin_coeffs(b.linear().expect("slice families are linear"));
                let slope = [lb[0] - la[0], lb[1] - la[1], lb[2] - la[2]];
                let base = [la[0] - slope[0], la[1] - slope[1], la[2] - slope[2]];
                CompiledRow {
                    term: terms.iter().position(|t| *t == a.term).unwrap(),
                    base,
                    slope,
                    strict: a.strict,
                    cone: a
                        .cone
                        .iter()
                        .map(|h| (lin_coeffs(&h.line), h.strict))
                        .collect(),
                }
            })
            .collect();
        Ok(CompiledFamily {
            rows,
            n_terms: terms.len(),
        })
    }

    /// Constraints applicable at `(x, y)`, as (term, base slack, slope, strict).
    pub fn active(&self, x: f64, y: f64) -> Option<ActiveSet> {
        let mut covered = vec![false; self.n_terms];
        let mut rows = Vec::new();
        for r in &self.rows {
            let inside = r.cone.iter().all(|(c, strict)| {
                crate::constraint::satisfied((c[0] * x + c[1] * y + c[2]).sign(), *strict)
            });
            if inside {
                covered[r.term] = true;
                let b = r.base[0] * x + r.base[1] * y + r.base[2];
                let m = r.slope[0] * x + r.slope[1] * y + r.slope[2];
                rows.push((b, m, r.strict));
            }
        }
        if covered.iter().all(|c| *c) {
            Some(ActiveSet { rows })
        } else {
            None
        }
    }
}

/// The applicable constraints at one point, ready for an α scan.
#[derive(Clone, Debug)]
pub struct ActiveSet {
    rows: Vec<(f64, f64, bool)>,
}

impl ActiveSet {
    pub fn satisfied(&self, alpha: f64) -> bool {
        self.rows
            .iter()
            .all(|&(b, m, strict)| crate::constraint::satisfied((b + alpha * m).sign(), strict))
    }

    /// First value of an ascending grid at which every row passes. The
    /// feasible set is an interval, so only its ends need locating.
    pub fn first_on(&self, grid: &[f64]) -> Option<f64> {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for &(b, m, _) in &self.rows {
            if m > 0.0 {
                lo = lo.max((-b - 2.0 * crate::numeric::FLOAT_TOL) / m);
            } else if m < 0.0 {
                hi = hi.min((-b - 2.0 * crate::numeric::FLOAT_TOL) / m);
            }
        }
        let start = grid.partition_point(|a| *a < lo);
        grid[start..]
            .iter()
            .take_while(|a| **a <= hi)
            .copied()
            .find(|a| self.satisfied(*a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lines_of(fam: &ConstraintFamily, id: ConstraintId) -> Vec<Linear<Rational>> {
        fam.constraints
            .iter()
            .filter(|c| c.id == id)
            .map(|c| c.linear().unwrap().clone())
            .collect()
    }

    #[test]
    fn coincident_lines_at_optimal_alpha_d0() {
        let s = Scenario::classical_slice(int(0));
        let fam = constraint_family(&s, &rat(5, 2)).unwrap();
        let c = &lines_of(&fam, ConstraintId::C)[0];
        let dp = &lines_of(&fam, ConstraintId::DP)[0];
        assert_eq!(c, &Linear::new(int(3), rat(5, 2), rat(3, 2)));
        assert_eq!(c, dp);
        assert!(fam.constraints.iter().all(|c| !c.strict));
    }

    #[test]
    fn three_lines_coincide_at_d1() {
        let s = Scenario::classical_slice(int(1));
        let fam = constraint_family(&s, &int(2)).unwrap();
        let c = &lines_of(&fam, ConstraintId::C)[0];
        assert_eq!(c, &Linear::new(int(2), int(2), int(1)));
        assert_eq!(c, &lines_of(&fam, ConstraintId::DP)[0]);
        assert_eq!(c, &lines_of(&fam, ConstraintId::F)[0]);
        let chk = check_at_alpha(&ExponentPoint::ratio(1, 4, 1, 4), &s, &int(2)).unwrap();
        assert!(chk.satisfied);
        assert_eq!(
            chk.binding,
            vec![ConstraintId::C, ConstraintId::F, ConstraintId::DP]
        );
    }

    #[test]
    fn general_b_plane() {
        let s = Scenario::general(int(1), int(1)).unwrap();
        let fam = constraint_family(&s, &int(7)).unwrap();
        assert_eq!(fam.alpha, int(2));
        assert_eq!(fam.warnings.len(), 1);
        let b = &lines_of(&fam, ConstraintId::GenB)[0];
        assert_eq!(b, &Linear::new(int(2), int(2), int(1)));
    }

    #[test]
    fn corners() {
        for s in [
            Scenario::classical_slice(int(1)),
            Scenario::slice(rat(9, 10), rat(1, 2)).unwrap(),
        ] {
            let c = check_at_alpha(&ExponentPoint::ratio(1, 2, 1, 2), &s, &rat(5, 2)).unwrap();
            assert!(!c.satisfied);
        }
        let s = Scenario::classical_slice(int(2));
        assert!(
            check_at_alpha(&ExponentPoint::ratio(0, 1, 0, 1), &s, &int(2))
                .unwrap()
                .satisfied
        );
    }

    #[test]
    fn compiled_matches_exact() {
        let s = Scenario::slice(rat(13, 20), rat(1, 2)).unwrap();
        let comp = CompiledFamily::new(&s).unwrap();
        for (xn, yn) in [(10, 40), (70, 20), (90, 5), (40, 40), (30, 75)] {
            let pt = ExponentPoint::ratio(xn, 200, yn, 200);
            let p = pt.to_f64();
            for a in [rat(1, 2), int(2), rat(9, 4), int(4)] {
                let exact = check_at_alpha(&pt, &s, &a).unwrap().satisfied;
                let fast = comp
                    .active(p.x, p.y)
                    .map(|act| act.satisfied(crate::numeric::to_f64(&a)))
                    .unwrap_or(false);
                assert_eq!(exact, fast, "{pt} alpha {a}");
            }
        }
    }
}
