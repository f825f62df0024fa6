//! Dissipation power, singular-set kind and dimension.

use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{format_rational, int, rat, serde_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularityKind {
    /// Singular set contained in one time slice.
    Slice,
    /// Space-time singular set measured in parabolic dimension.
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
    pub kind: SingularityKind,
    #[serde(with = "serde_rational")]
    pub d: Rational,
    /// The singular set has zero (not merely finite) `d`-dimensional measure.
    #[serde(default)]
    pub measure_zero: bool,
}

impl Scenario {
    pub fn new(gamma: Rational, kind: SingularityKind, d: Rational) -> Result<Self> {
        let s = Scenario {
            gamma,
            kind,
            d,
            measure_zero: false,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn slice(gamma: Rational, d: Rational) -> Result<Self> {
        Self::new(gamma, SingularityKind::Slice, d)
    }

    pub fn general(gamma: Rational, d: Rational) -> Result<Self> {
        Self::new(gamma, SingularityKind::General, d)
    }

    /// Classical (`γ = 1`) one-slice scenario.
    pub fn classical_slice(d: Rational) -> Self {
        Self::slice(int(1), d).expect("classical slice scenario with d in [0,3)")
    }

    pub fn with_measure_zero(mut self, flag: bool) -> Self {
        self.measure_zero = flag;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_positive() {
            return Err(Error::OutOfDomain(format!(
                "gamma must be positive, got {}",
                format_rational(&self.gamma)
            )));
        }
        if self.d.is_negative() || self.d >= int(3) {
            return Err(Error::OutOfDomain(format!(
                "d must lie in [0,3), got {}",
                format_rational(&self.d)
            )));
        }
        if self.gamma > int(1) && !(self.kind == SingularityKind::Slice && self.d.is_zero()) {
            return Err(Error::OutOfDomain(
                "gamma > 1 is only covered for a slice singular set with d = 0".into(),
            ));
        }
        if self.kind == SingularityKind::General && self.gamma.is_one() && self.d > int(1) {
            return Err(Error::OutOfDomain(
                "general singular sets with gamma = 1 need d <= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn is_classical(&self) -> bool {
        self.gamma.is_one()
    }

    pub fn is_slice(&self) -> bool {
        self.kind == SingularityKind::Slice
    }

    /// Boundaries are all included when the singular set is finite.
    pub fn all_nonstrict(&self) -> bool {
        self.d.is_zero()
    }

    /// Temporal covering exponent forced by scaling in the space-time case.
    pub fn forced_alpha(&self) -> Option<Rational> {
        match self.kind {
            SingularityKind::Slice => None,
            SingularityKind::General => Some(int(2) * &self.gamma),
        }
    }

    /// Upper end `(3 - 2γ)/6` of the Leray–Hopf segment at `y = 1/2`.
    pub fn leray_hopf_top_x(&self) -> Rational {
        (int(3) - int(2) * &self.gamma) / int(6)
    }

    pub fn half() -> Rational {
        rat(1, 2)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            SingularityKind::Slice => "slice",
            SingularityKind::General => "general",
        };
        write!(
            f,
            "{kind}(gamma={}, d={})",
            format_rational(&self.gamma),
            format_rational(&self.d)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_rules() {
        assert!(Scenario::slice(rat(3, 2), int(0)).is_ok());
        assert!(Scenario::slice(rat(3, 2), rat(1, 2)).is_err());
        assert!(Scenario::general(int(1), rat(3, 2)).is_err());
        assert!(Scenario::general(rat(9, 10), rat(5, 2)).is_ok());
        assert!(Scenario::slice(int(1), int(3)).is_err());
        assert!(Scenario::slice(int(0), int(0)).is_err());
    }

    #[test]
    fn json_keeps_rationals() {
        let s = Scenario::slice(rat(17, 20), rat(2, 3)).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"17/20\""));
        assert_eq!(serde_json::from_str::<Scenario>(&j).unwrap(), s);
    }
}
