//! Exact rationals, the scalar abstraction shared by exact and float paths,
//! and a few helpers for quadratic roots.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Rational = BigRational;

/// Values with magnitude at or below this count as zero in float mode.
pub const FLOAT_TOL: f64 = 1e-12;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float.
pub fn from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// `"num/den"`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `a/b`, integers and plain decimals such as `0.85`. Scientific
/// notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if ip.is_empty() && fp.is_empty() {
            return Err(bad());
        }
        let digits = format!("{ip}{fp}");
        let n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let d = num::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(format_rational).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_rational_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(format_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// A real value that is exact when it can be.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Exact(Rational),
    Float(f64),
}

impl Real {
    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => to_f64(r),
            Real::Float(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Float(_) => None,
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Real::Exact(r) => s.serialize_str(&format_rational(r)),
            Real::Float(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            F(f64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => parse_rational(&s)
                .map(Real::Exact)
                .map_err(serde::de::Error::custom),
            Raw::F(v) => Ok(Real::Float(v)),
        }
    }
}

/// Arithmetic shared by the exact and the float evaluation paths.
pub trait Field:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
    fn from_int(n: i64) -> Self;
    /// Sign with the float tolerance applied in float mode.
    fn sign(&self) -> Ordering;
    fn as_f64(&self) -> f64;
    fn is_exact() -> bool;

    fn zero_f() -> Self {
        Self::from_int(0)
    }
    fn is_zero_tol(&self) -> bool {
        self.sign() == Ordering::Equal
    }
    /// Tolerant comparison.
    fn cmp_tol(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl Field for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_int(n: i64) -> Self {
        int(n)
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn as_f64(&self) -> f64 {
        to_f64(self)
    }
    fn is_exact() -> bool {
        true
    }
}

impl Field for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn sign(&self) -> Ordering {
        if *self > FLOAT_TOL {
            Ordering::Greater
        } else if *self < -FLOAT_TOL {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
}

/// One root of `a t^2 + b t + c = 0`, kept symbolically so that exact
/// comparisons stay exact even when the root is irrational.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadRoot {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    /// `false` picks the smaller root, `true` the larger one.
    pub larger: bool,
}

impl QuadRoot {
    pub fn discriminant(&self) -> Rational {
        &self.b * &self.b - int(4) * &self.a * &self.c
    }

    pub fn value(&self) -> f64 {
        let (a, b, c) = (to_f64(&self.a), to_f64(&self.b), to_f64(&self.c));
        if self.a.is_zero() {
            return -c / b;
        }
        let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
        // Stable form: avoid cancellation between -b and the root.
        let q = -0.5 * (b + b.signum() * disc);
        let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        if self.larger {
            hi
        } else {
            lo
        }
    }

    /// Rational root when the discriminant is a perfect square (or the
    /// equation is linear).
    pub fn exact(&self) -> Option<Rational> {
        if self.a.is_zero() {
            if self.b.is_zero() {
                return None;
            }
            return Some(-&self.c / &self.b);
        }
        let disc = self.discriminant();
        if disc.is_negative() {
            return None;
        }
        let sq = rational_sqrt(&disc)?;
        let two_a = int(2) * &self.a;
        let r1 = (-&self.b - &sq) / &two_a;
        let r2 = (-&self.b + &sq) / &two_a;
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        Some(if self.larger { hi } else { lo })
    }

    /// Exact comparison of `t` against the root.
    pub fn cmp_at(&self, t: &Rational) -> Ordering {
        if let Some(r) = self.exact() {
            return t.cmp(&r);
        }
        // Irrational root: a != 0 and disc > 0 (not a perfect square).
        let (a, b, c) = if self.a.is_negative() {
            (-&self.a, -&self.b, -&self.c)
        } else {
            (self.a.clone(), self.b.clone(), self.c.clone())
        };
        let p = &a * t * t + &b * t + &c;
        let vertex = -&b / (int(2) * &a);
        // Between the roots p < 0; outside p > 0. p is never zero here.
        if p.is_negative() {
            if self.larger {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if *t < vertex {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// `base^e` for a rational base and a nonnegative integer exponent.
pub fn pow_rational(base: &Rational, e: u32) -> Rational {
    num::pow(base.clone(), e as usize)
}

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("5/2").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("0.85").unwrap(), rat(17, 20));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&int(2)), "2/1");
    }

    #[test]
    fn quad_root_exact_and_symbolic() {
        // t^2 - 2 = 0
        let r = QuadRoot {
            a: int(1),
            b: int(0),
            c: int(-2),
            larger: true,
        };
        assert!(r.exact().is_none());
        assert!((r.value() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.cmp_at(&rat(141, 100)), Ordering::Less);
        assert_eq!(r.cmp_at(&rat(142, 100)), Ordering::Greater);
        let lo = QuadRoot {
            larger: false,
            ..r.clone()
        };
        assert_eq!(lo.cmp_at(&rat(-142, 100)), Ordering::Less);
        assert_eq!(lo.cmp_at(&int(0)), Ordering::Greater);
        // 4t^2 - 1 = 0, rational roots
        let h = QuadRoot {
            a: int(4),
            b: int(0),
            c: int(-1),
            larger: true,
        };
        assert_eq!(h.exact(), Some(rat(1, 2)));
        assert_eq!(h.cmp_at(&rat(1, 2)), Ordering::Equal);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        s.add(1.0);
        s.add(-1e16);
        assert_eq!(s.value(), 1.0);
    }
}
