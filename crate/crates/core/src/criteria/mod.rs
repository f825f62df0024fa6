//! Verdicts: the closed-form criteria, their witnesses and the classical
//! baselines.

pub mod closed_form;
pub mod family;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::alpha::{feasible_alpha, verify_alpha, AlphaInterval};
use crate::constraint::ConstraintId;
use crate::criteria::closed_form::{CaseLabel, Membership, RegionModel};
use crate::criteria::family::{check_family, constraint_family};
use crate::error::{Error, Result};
use crate::numeric::{int, rat, serde_rational, serde_rational_opt, serde_rational_vec, Rational};
use crate::point::{Exponent, ExponentPoint, Point};
use crate::region::closure::leray_hopf_segment;
use crate::scenario::{Scenario, SingularityKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Guaranteed,
    NotCovered,
    OutOfDomain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    ThisPaper,
    Lions,
    Serrin,
    Shinbrot,
    Interpolation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A single α passing every applicable constraint.
    Alpha {
        #[serde(with = "serde_rational")]
        alpha: Rational,
        feasible: AlphaInterval,
    },
    /// The point interpolates between a Leray–Hopf space and a core point.
    Interpolation {
        leray_hopf_point: ExponentPoint,
        core_point: ExponentPoint,
        #[serde(with = "serde_rational")]
        theta: Rational,
        #[serde(with = "serde_rational_opt", default)]
        alpha: Option<Rational>,
    },
    /// A concrete space `L^q_t L^p_x`; `q` may be taken anywhere in the
    /// open interval `q_range`.
    ExponentPair {
        p: Exponent,
        q: Exponent,
        #[serde(with = "serde_rational_vec")]
        q_range: Vec<Rational>,
    },
    Mechanism {
        description: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub source: Source,
    pub binding: Vec<ConstraintId>,
    pub on_boundary: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_note: Option<String>,
    pub witness: Option<Witness>,
    pub caveats: Vec<String>,
    /// Classical criteria that also cover the point.
    pub baselines: Vec<Source>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseLabel>,
}

impl Verdict {
    fn out_of_domain(msg: String) -> Self {
        Verdict {
            status: Status::OutOfDomain,
            source: Source::ThisPaper,
            binding: vec![],
            on_boundary: false,
            boundary_note: None,
            witness: None,
            caveats: vec![msg],
            baselines: vec![],
            case: None,
        }
    }

    pub fn is_guaranteed(&self) -> bool {
        self.status == Status::Guaranteed
    }
}

/// Classical criteria covering a point: Lions `L⁴L⁴`, Serrin
/// `3/p + 2/q ≤ 1`, Shinbrot `2/p + 2/q ≤ 1` with `p ≥ 4`.
pub fn baselines_exact(p: &Point<Rational>) -> Vec<Source> {
    let quarter = rat(1, 4);
    let mut out = vec![];
    if p.x == quarter && p.y == quarter {
        out.push(Source::Lions);
    }
    if int(3) * &p.x + int(2) * &p.y <= int(1) {
        out.push(Source::Serrin);
    }
    if &p.x + &p.y <= rat(1, 2) && p.x <= quarter {
        out.push(Source::Shinbrot);
    }
    out
}

pub fn baselines_f64(p: &Point<f64>) -> Vec<Source> {
    let tol = crate::numeric::FLOAT_TOL;
    let mut out = vec![];
    if (p.x - 0.25).abs() <= tol && (p.y - 0.25).abs() <= tol {
        out.push(Source::Lions);
    }
    if 3.0 * p.x + 2.0 * p.y <= 1.0 + tol {
        out.push(Source::Serrin);
    }
    if p.x + p.y <= 0.5 + tol && p.x <= 0.25 + tol {
        out.push(Source::Shinbrot);
    }
    out
}

/// Baselines only speak about the classical equations.
pub fn baselines(pt: &ExponentPoint, s: &Scenario) -> Vec<Source> {
    if !s.gamma.is_one() {
        return vec![];
    }
    match pt {
        ExponentPoint::Exact { .. } => baselines_exact(&pt.to_exact()),
        ExponentPoint::Float { .. } => baselines_f64(&pt.to_f64()),
    }
}

/// Points of the Leray–Hopf segment used for slice landing searches.
fn landing_targets(gamma: &Rational) -> Vec<Point<Rational>> {
    let [a, b] = leray_hopf_segment(gamma);
    (0..=4).map(|j| a.lerp(&b, &rat(j, 4))).collect()
}

fn slice_witness(
    model: &RegionModel,
    s: &Scenario,
    p: &Point<Rational>,
) -> Option<(Witness, Vec<ConstraintId>)> {
    if let Some(iv) = feasible_alpha(s, p) {
        let alpha = iv.witness();
        let binding = verify_alpha(s, p, &alpha).unwrap_or_default();
        return Some((
            Witness::Alpha {
                alpha,
                feasible: iv,
            },
            binding,
        ));
    }
    let b0 = leray_hopf_segment(&s.gamma)[0].clone();
    if let Some(c) = model.slice_landing(p).filter(|c| c != p) {
        if let Some(iv) = feasible_alpha(s, &c) {
            let theta = (&c.x - &p.x) / (&b0.x - &p.x);
            let w = Witness::Interpolation {
                leray_hopf_point: b0.into(),
                core_point: c.into(),
                theta,
                alpha: Some(iv.witness()),
            };
            return Some((w, vec![]));
        }
    }
    for b in landing_targets(&s.gamma) {
        for k in 1..32 {
            let theta = rat(k, 32);
            let c = p.lerp(&b, &theta);
            if let Some(iv) = feasible_alpha(s, &c) {
                let w = Witness::Interpolation {
                    leray_hopf_point: b.clone().into(),
                    core_point: c.into(),
                    theta,
                    alpha: Some(iv.witness()),
                };
                return Some((w, vec![]));
            }
        }
    }
    None
}

fn general_witness(
    model: &RegionModel,
    s: &Scenario,
    p: &Point<Rational>,
) -> Option<(Witness, Vec<ConstraintId>)> {
    let alpha = s.forced_alpha().expect("general scenario");
    let closure = model.closure()?;
    if closure.in_core(p) {
        let fam = constraint_family(s, &alpha).ok()?;
        let mut binding = check_family(&fam.constraints, p).binding;
        // Lines through the point count even off their own cone: at a
        // vertex of the collapsed region both neighbours are active.
        binding.extend(
            fam.constraints
                .iter()
                .filter(|c| c.slack(p).is_zero())
                .map(|c| c.id),
        );
        let feasible = AlphaInterval {
            lo: alpha.clone(),
            lo_closed: true,
            hi: Some(alpha.clone()),
            hi_closed: true,
        };
        return Some((Witness::Alpha { alpha, feasible }, binding));
    }
    closure.witness(p).map(|w| {
        (
            Witness::Interpolation {
                leray_hopf_point: w.leray_hopf_point,
                core_point: w.core_point,
                theta: w.theta,
                alpha: Some(alpha),
            },
            vec![],
        )
    })
}

/// The optimized criterion at a point, with witness and baselines.
pub fn final_verdict(pt: &ExponentPoint, s: &Scenario) -> Result<Verdict> {
    s.validate()?;
    if let Err(Error::OutOfDomain(msg)) = pt.validate() {
        return Ok(Verdict::out_of_domain(msg));
    }
    let model = RegionModel::new(s)?;
    verdict_with_model(&model, pt)
}

/// As [`final_verdict`], reusing a prebuilt region model.
pub fn verdict_with_model(model: &RegionModel, pt: &ExponentPoint) -> Result<Verdict> {
    let s = &model.scenario;
    if let Err(Error::OutOfDomain(msg)) = pt.validate() {
        return Ok(Verdict::out_of_domain(msg));
    }
    let m: Membership = model.classify(pt);
    let p = pt.to_exact();
    let baselines = baselines(pt, s);
    let mut caveats = vec![];
    if model.case == CaseLabel::GeneralFractional && s.d > int(2) * &s.gamma {
        caveats.push("requires H_d(S)=0".to_string());
    }
    if s.kind == SingularityKind::General && s.d.is_zero() {
        caveats.push("d = 0: the space-time criteria reduce to the one-slice family".to_string());
    }
    let mut binding = m.governing.clone();
    let (status, source, witness) = if m.inside {
        let found = match model.case {
            CaseLabel::GeneralClassical | CaseLabel::GeneralFractional => {
                general_witness(model, s, &p)
            }
            _ => slice_witness(model, s, &p),
        };
        match found {
            Some((w, b)) => {
                binding.extend(b);
                let src = if matches!(w, Witness::Interpolation { .. }) {
                    Source::Interpolation
                } else {
                    Source::ThisPaper
                };
                (Status::Guaranteed, src, Some(w))
            }
            None => (
                Status::Guaranteed,
                Source::ThisPaper,
                Some(Witness::Mechanism {
                    description: format!("inside the optimized region ({:?})", model.case),
                }),
            ),
        }
    } else if let Some(b) = baselines.first() {
        (Status::Guaranteed, *b, None)
    } else {
        (Status::NotCovered, Source::ThisPaper, None)
    };
    binding.sort();
    binding.dedup();
    let boundary_note = m.on_boundary.then(|| {
        if m.strict_boundary {
            "on a strict boundary (excluded)".to_string()
        } else {
            "on a nonstrict boundary (included)".to_string()
        }
    });
    Ok(Verdict {
        status,
        source,
        binding,
        on_boundary: m.on_boundary,
        boundary_note,
        witness,
        caveats,
        baselines,
        case: Some(model.case),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeIKind {
    InSpace,
    InTime,
}

impl std::str::FromStr for TypeIKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in_space" | "in-space" | "space" => Ok(TypeIKind::InSpace),
            "in_time" | "in-time" | "time" => Ok(TypeIKind::InTime),
            _ => Err(Error::Parse(format!(
                "unknown Type-I kind '{s}' (use in_space or in_time)"
            ))),
        }
    }
}

/// Energy equality under Type-I blowup. In time, `u ∈ L^r L^∞` for every
/// `r < 2`, which meets the criterion at `x = 0` once `r > (5-d)/(3-d)`.
pub fn type_i_verdict(kind: TypeIKind, d: &Rational) -> Result<Verdict> {
    if d < &Rational::zero() || d >= &int(3) {
        return Err(Error::OutOfDomain(format!(
            "d must lie in [0,3), got {}",
            crate::numeric::format_rational(d)
        )));
    }
    let mut v = Verdict {
        status: Status::Guaranteed,
        source: Source::ThisPaper,
        binding: vec![],
        on_boundary: false,
        boundary_note: None,
        witness: None,
        caveats: vec![],
        baselines: vec![],
        case: None,
    };
    match kind {
        TypeIKind::InSpace => {
            v.witness = Some(Witness::Mechanism {
                description: "interpolation between the energy class and the Type-I Besov bound"
                    .into(),
            });
        }
        TypeIKind::InTime => {
            let lo = (int(5) - d) / (int(3) - d);
            let hi = int(2);
            if d < &Rational::one() {
                let q = (&lo + &hi) / int(2);
                v.witness = Some(Witness::ExponentPair {
                    p: Exponent::Infinite,
                    q: Exponent::Finite(q),
                    q_range: vec![lo, hi],
                });
            } else {
                v.status = Status::NotCovered;
                v.caveats.push(format!(
                    "(5-d)/(3-d) = {} leaves no r < 2",
                    crate::numeric::format_rational(&lo)
                ));
            }
        }
    }
    Ok(v)
}
