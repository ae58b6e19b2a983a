use std::fmt;
use std::str::FromStr;

use crate::error::{DomainKind, Error, Result};

/// Selects a member of the power-mean family.
///
/// `Finite` never holds zero; the `p -> 0` limit is the separate
/// [`Exponent::GeometricLimit`] and the two infinite limits dispatch to the
/// max/min operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    GeometricLimit,
    PosInfinity,
    NegInfinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p == 0.0 {
            return Err(DomainKind::ZeroExponent.into());
        }
        if !p.is_finite() {
            return Err(DomainKind::NonFinite.into());
        }
        Ok(Exponent::Finite(p))
    }

    /// The numeric exponent when finite.
    pub fn as_finite(&self) -> Option<f64> {
        match *self {
            Exponent::Finite(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match *self {
            Exponent::Finite(p) => p < 0.0,
            Exponent::NegInfinity => true,
            _ => false,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::GeometricLimit => f.write_str("geo"),
            Exponent::PosInfinity => f.write_str("inf"),
            Exponent::NegInfinity => f.write_str("-inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "max" => Ok(Exponent::PosInfinity),
            "-inf" | "min" => Ok(Exponent::NegInfinity),
            "geo" => Ok(Exponent::GeometricLimit),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid exponent `{other}`")))?;
                if p == 0.0 {
                    return Err(Error::Parse(
                        "p = 0 is excluded from the family; use `geo` for the geometric-mean limit"
                            .into(),
                    ));
                }
                if p.is_infinite() {
                    return Ok(if p > 0.0 {
                        Exponent::PosInfinity
                    } else {
                        Exponent::NegInfinity
                    });
                }
                Exponent::finite(p)
            }
        }
    }
}
