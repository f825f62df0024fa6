//! Points of the exponent square `x = 1/p`, `y = 1/q`, both in `[0, 1/2]`.

use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    self, format_rational, from_f64, parse_rational, rat, serde_rational, Field, Rational,
};

/// A Lebesgue exponent in `[1, ∞]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Exponent {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Inf" | "∞" => Ok(Exponent::Infinite),
            other => Ok(Exponent::Finite(parse_rational(other)?)),
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> Result<Rational> {
        match self {
            Exponent::Infinite => Ok(Rational::zero()),
            Exponent::Finite(p) if p.is_positive() => Ok(p.recip()),
            Exponent::Finite(p) => Err(Error::OutOfDomain(format!(
                "exponent {} is not positive",
                format_rational(p)
            ))),
        }
    }

    pub fn from_reciprocal(x: &Rational) -> Self {
        if x.is_zero() {
            Exponent::Infinite
        } else {
            Exponent::Finite(x.recip())
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinite => write!(f, "inf"),
            Exponent::Finite(p) if p.denom().is_one() => write!(f, "{}", p.numer()),
            Exponent::Finite(p) => write!(f, "{}", format_rational(p)),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Infinite => s.serialize_str("inf"),
            Exponent::Finite(p) => s.serialize_str(&format_rational(p)),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Exponent::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Plain coordinate pair used by the evaluators.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<F> {
    pub x: F,
    pub y: F,
}

impl<F: Field> Point<F> {
    pub fn new(x: F, y: F) -> Self {
        Point { x, y }
    }

    /// `(1 - t) self + t other`.
    pub fn lerp(&self, other: &Self, t: &F) -> Self {
        let one = F::from_int(1);
        Point {
            x: (one.clone() - t.clone()) * self.x.clone() + t.clone() * other.x.clone(),
            y: (one - t.clone()) * self.y.clone() + t.clone() * other.y.clone(),
        }
    }
}

impl Point<Rational> {
    pub fn to_f64(&self) -> Point<f64> {
        Point {
            x: numeric::to_f64(&self.x),
            y: numeric::to_f64(&self.y),
        }
    }
}

/// A point of the exponent square, carried exactly or as floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentPoint {
    Exact {
        #[serde(with = "serde_rational")]
        x: Rational,
        #[serde(with = "serde_rational")]
        y: Rational,
    },
    Float {
        x: f64,
        y: f64,
    },
}

impl ExponentPoint {
    pub fn exact(x: Rational, y: Rational) -> Self {
        ExponentPoint::Exact { x, y }
    }

    pub fn ratio(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        ExponentPoint::Exact {
            x: rat(xn, xd),
            y: rat(yn, yd),
        }
    }

    pub fn float(x: f64, y: f64) -> Self {
        ExponentPoint::Float { x, y }
    }

    /// Point for the space `L^q_t L^p_x`, given as `(p, q)`.
    pub fn from_exponents(p: &Exponent, q: &Exponent) -> Result<Self> {
        let pt = ExponentPoint::Exact {
            x: p.reciprocal()?,
            y: q.reciprocal()?,
        };
        pt.validate()?;
        Ok(pt)
    }

    pub fn validate(&self) -> Result<()> {
        let half = rat(1, 2);
        let ok = match self {
            ExponentPoint::Exact { x, y } => {
                !x.is_negative() && !y.is_negative() && *x <= half && *y <= half
            }
            ExponentPoint::Float { x, y } => {
                x.is_finite() && y.is_finite() && (0.0..=0.5).contains(x) && (0.0..=0.5).contains(y)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfDomain(format!(
                "{self} is outside the square [0,1/2]^2 (p, q must be >= 2)"
            )))
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ExponentPoint::Exact { .. })
    }

    pub fn to_f64(&self) -> Point<f64> {
        match self {
            ExponentPoint::Exact { x, y } => Point {
                x: numeric::to_f64(x),
                y: numeric::to_f64(y),
            },
            ExponentPoint::Float { x, y } => Point { x: *x, y: *y },
        }
    }

    /// Exact coordinates; floats are converted without rounding.
    pub fn to_exact(&self) -> Point<Rational> {
        match self {
            ExponentPoint::Exact { x, y } => Point {
                x: x.clone(),
                y: y.clone(),
            },
            ExponentPoint::Float { x, y } => Point {
                x: from_f64(*x).unwrap_or_default(),
                y: from_f64(*y).unwrap_or_default(),
            },
        }
    }

    pub fn p(&self) -> Exponent {
        Exponent::from_reciprocal(&self.to_exact().x)
    }

    pub fn q(&self) -> Exponent {
        Exponent::from_reciprocal(&self.to_exact().y)
    }
}

impl fmt::Display for ExponentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentPoint::Exact { x, y } => {
                write!(f, "(x={}, y={})", format_rational(x), format_rational(y))
            }
            ExponentPoint::Float { x, y } => write!(f, "(x={x}, y={y})"),
        }
    }
}

impl From<Point<Rational>> for ExponentPoint {
    fn from(p: Point<Rational>) -> Self {
        ExponentPoint::Exact { x: p.x, y: p.y }
    }
}

impl From<Point<f64>> for ExponentPoint {
    fn from(p: Point<f64>) -> Self {
        ExponentPoint::Float { x: p.x, y: p.y }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_map_to_reciprocals() {
        let pt = ExponentPoint::from_exponents(
            &Exponent::parse("4").unwrap(),
            &Exponent::parse("inf").unwrap(),
        )
        .unwrap();
        assert_eq!(pt, ExponentPoint::ratio(1, 4, 0, 1));
        assert!(ExponentPoint::from_exponents(
            &Exponent::parse("3/2").unwrap(),
            &Exponent::parse("4").unwrap()
        )
        .is_err());
        assert_eq!(Exponent::from_reciprocal(&rat(2, 5)).to_string(), "5/2");
    }

    #[test]
    fn json_round_trip() {
        let pt = ExponentPoint::ratio(2, 5, 1, 13);
        let s = serde_json::to_string(&pt).unwrap();
        assert_eq!(s, r#"{"x":"2/5","y":"1/13"}"#);
        assert_eq!(serde_json::from_str::<ExponentPoint>(&s).unwrap(), pt);
        let f = ExponentPoint::float(0.1, 0.2);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<ExponentPoint>(&s).unwrap(), f);
    }
}
