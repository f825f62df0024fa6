//! Linear and quadratic constraints on the exponent square, with cones of
//! applicability and strictness flags.

use std::cmp::Ordering;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numeric::{format_rational, parse_rational, Field, Rational};
use crate::point::Point;

/// `a x + b y ⋈ c`; the slack is `c - a x - b y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Linear<F> {
    pub a: F,
    pub b: F,
    pub c: F,
}

impl<F: Field> Linear<F> {
    pub fn new(a: F, b: F, c: F) -> Self {
        Linear { a, b, c }
    }

    pub fn slack(&self, p: &Point<F>) -> F {
        self.c.clone() - self.a.clone() * p.x.clone() - self.b.clone() * p.y.clone()
    }

    /// `y` on the line at abscissa `x` (requires `b != 0`).
    pub fn y_at(&self, x: &F) -> F {
        (self.c.clone() - self.a.clone() * x.clone()) / self.b.clone()
    }

    /// `x` on the line at ordinate `y` (requires `a != 0`).
    pub fn x_at(&self, y: &F) -> F {
        (self.c.clone() - self.b.clone() * y.clone()) / self.a.clone()
    }

    pub fn scale(&self, k: &F) -> Self {
        Linear {
            a: self.a.clone() * k.clone(),
            b: self.b.clone() * k.clone(),
            c: self.c.clone() * k.clone(),
        }
    }
}

impl Linear<Rational> {
    pub fn to_field<F: Field>(&self) -> Linear<F> {
        Linear {
            a: F::from_rational(&self.a),
            b: F::from_rational(&self.b),
            c: F::from_rational(&self.c),
        }
    }

    /// Intersection point of two lines, if they are not parallel.
    pub fn intersect(&self, other: &Self) -> Option<Point<Rational>> {
        let det = &self.a * &other.b - &self.b * &other.a;
        if det == Rational::from_integer(0.into()) {
            return None;
        }
        let x = (&self.c * &other.b - &self.b * &other.c) / &det;
        let y = (&self.a * &other.c - &self.c * &other.a) / &det;
        Some(Point { x, y })
    }
}

/// `xx x² + xy x y + yy y² + x x + y y + c`, satisfied where positive.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratic<F> {
    pub xx: F,
    pub xy: F,
    pub yy: F,
    pub x: F,
    pub y: F,
    pub c: F,
}

impl<F: Field> Quadratic<F> {
    pub fn eval(&self, p: &Point<F>) -> F {
        let (x, y) = (p.x.clone(), p.y.clone());
        self.xx.clone() * x.clone() * x.clone()
            + self.xy.clone() * x.clone() * y.clone()
            + self.yy.clone() * y.clone() * y.clone()
            + self.x.clone() * x
            + self.y.clone() * y
            + self.c.clone()
    }

    /// For curves without a `y²` term: the `y` solving `Q(x, y) = 0`.
    pub fn y_at(&self, x: &F) -> Option<F> {
        if self.yy.sign() != Ordering::Equal {
            return None;
        }
        let x = x.clone();
        let lin = self.xy.clone() * x.clone() + self.y.clone();
        if lin.sign() == Ordering::Equal {
            return None;
        }
        let rest = self.xx.clone() * x.clone() * x.clone() + self.x.clone() * x + self.c.clone();
        Some(-rest / lin)
    }
}

impl Quadratic<Rational> {
    pub fn to_field<F: Field>(&self) -> Quadratic<F> {
        Quadratic {
            xx: F::from_rational(&self.xx),
            xy: F::from_rational(&self.xy),
            yy: F::from_rational(&self.yy),
            x: F::from_rational(&self.x),
            y: F::from_rational(&self.y),
            c: F::from_rational(&self.c),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Quadratic {
            xx: &self.xx * k,
            xy: &self.xy * k,
            yy: &self.yy * k,
            x: &self.x * k,
            y: &self.y * k,
            c: &self.c * k,
        }
    }
}

/// Closed (`strict = false`) or open half-plane `a x + b y ≤ c`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfPlane<F> {
    pub line: Linear<F>,
    pub strict: bool,
}

impl<F: Field> HalfPlane<F> {
    pub fn le(a: F, b: F, c: F) -> Self {
        HalfPlane {
            line: Linear::new(a, b, c),
            strict: false,
        }
    }

    pub fn lt(a: F, b: F, c: F) -> Self {
        HalfPlane {
            line: Linear::new(a, b, c),
            strict: true,
        }
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        satisfied(self.line.slack(p).sign(), self.strict)
    }

    /// The complementary open or closed half-plane.
    pub fn complement(&self) -> Self {
        HalfPlane {
            line: self.line.scale(&F::from_int(-1)),
            strict: !self.strict,
        }
    }
}

impl HalfPlane<Rational> {
    pub fn to_field<F: Field>(&self) -> HalfPlane<F> {
        HalfPlane {
            line: self.line.to_field(),
            strict: self.strict,
        }
    }
}

pub fn satisfied(slack_sign: Ordering, strict: bool) -> bool {
    match slack_sign {
        Ordering::Greater => true,
        Ordering::Equal => !strict,
        Ordering::Less => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstraintId {
    C,
    F,
    DP,
    #[serde(rename = "DP_ENSTROPHY")]
    DpEnstrophy,
    #[serde(rename = "FG_UPPER")]
    FgUpper,
    #[serde(rename = "FG_LOWER")]
    FgLower,
    #[serde(rename = "CURVE")]
    Curve,
    #[serde(rename = "CF_ENVELOPE")]
    CfEnvelope,
    #[serde(rename = "GEN_A")]
    GenA,
    #[serde(rename = "GEN_B")]
    GenB,
    #[serde(rename = "GEN_C")]
    GenC,
    #[serde(rename = "GEN_D")]
    GenD,
}

impl ConstraintId {
    pub fn name(&self) -> &'static str {
        match self {
            ConstraintId::C => "C",
            ConstraintId::F => "F",
            ConstraintId::DP => "DP",
            ConstraintId::DpEnstrophy => "DP_ENSTROPHY",
            ConstraintId::FgUpper => "FG_UPPER",
            ConstraintId::FgLower => "FG_LOWER",
            ConstraintId::Curve => "CURVE",
            ConstraintId::CfEnvelope => "CF_ENVELOPE",
            ConstraintId::GenA => "GEN_A",
            ConstraintId::GenB => "GEN_B",
            ConstraintId::GenC => "GEN_C",
            ConstraintId::GenD => "GEN_D",
        }
    }
}

/// Term of the local energy balance a constraint controls. A point passes
/// at a given α only if every term has an applicable, satisfied constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    /// Time-derivative term.
    TimeDerivative,
    /// Cubic and pressure flux `D + 2P`.
    Flux,
    /// Viscous cross term `F` (plus the commutator `G` when fractional).
    Viscous,
    /// All terms at once, as in the space-time criteria.
    Combined,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Form {
    Linear(Linear<Rational>),
    Quadratic(Quadratic<Rational>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub id: ConstraintId,
    pub term: Term,
    pub form: Form,
    pub strict: bool,
    /// Conjunction of half-planes on which the constraint applies.
    pub cone: Vec<HalfPlane<Rational>>,
}

impl ConstraintSpec {
    pub fn applies<F: Field>(&self, p: &Point<F>) -> bool {
        self.cone.iter().all(|h| h.to_field::<F>().contains(p))
    }

    pub fn slack<F: Field>(&self, p: &Point<F>) -> F {
        match &self.form {
            Form::Linear(l) => l.to_field::<F>().slack(p),
            Form::Quadratic(q) => q.to_field::<F>().eval(p),
        }
    }

    pub fn satisfied<F: Field>(&self, p: &Point<F>) -> bool {
        satisfied(self.slack(p).sign(), self.strict)
    }

    pub fn linear(&self) -> Option<&Linear<Rational>> {
        match &self.form {
            Form::Linear(l) => Some(l),
            Form::Quadratic(_) => None,
        }
    }
}

// Serialization: rationals as "num/den" strings.

#[derive(Serialize, Deserialize)]
struct LinearRepr {
    a: String,
    b: String,
    c: String,
}

impl Serialize for Linear<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LinearRepr {
            a: format_rational(&self.a),
            b: format_rational(&self.b),
            c: format_rational(&self.c),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Linear<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = LinearRepr::deserialize(d)?;
        let p = |s: &str| parse_rational(s).map_err(serde::de::Error::custom);
        Ok(Linear {
            a: p(&r.a)?,
            b: p(&r.b)?,
            c: p(&r.c)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct QuadraticRepr {
    xx: String,
    xy: String,
    yy: String,
    x: String,
    y: String,
    c: String,
}

impl Serialize for Quadratic<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadraticRepr {
            xx: format_rational(&self.xx),
            xy: format_rational(&self.xy),
            yy: format_rational(&self.yy),
            x: format_rational(&self.x),
            y: format_rational(&self.y),
            c: format_rational(&self.c),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quadratic<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = QuadraticRepr::deserialize(d)?;
        let p = |s: &str| parse_rational(s).map_err(serde::de::Error::custom);
        Ok(Quadratic {
            xx: p(&r.xx)?,
            xy: p(&r.xy)?,
            yy: p(&r.yy)?,
            x: p(&r.x)?,
            y: p(&r.y)?,
            c: p(&r.c)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct HalfPlaneRepr {
    #[serde(flatten)]
    line: Linear<Rational>,
    strict: bool,
}

impl Serialize for HalfPlane<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HalfPlaneRepr {
            line: self.line.clone(),
            strict: self.strict,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HalfPlane<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = HalfPlaneRepr::deserialize(d)?;
        Ok(HalfPlane {
            line: r.line,
            strict: r.strict,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum FormRepr {
    Linear(Linear<Rational>),
    Quadratic(Quadratic<Rational>),
}

impl Serialize for Form {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Form::Linear(l) => FormRepr::Linear(l.clone()).serialize(s),
            Form::Quadratic(q) => FormRepr::Quadratic(q.clone()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Form {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match FormRepr::deserialize(d)? {
            FormRepr::Linear(l) => Form::Linear(l),
            FormRepr::Quadratic(q) => Form::Quadratic(q),
        })
    }
}
