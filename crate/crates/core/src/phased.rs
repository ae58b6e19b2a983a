//! Complex scalars that remember their branch.
//!
//! A [`PhasedComplex`] is stored as `(ln r, θ)` with `θ` left unreduced, i.e.
//! it is a chosen value of the complex logarithm. Raising to a real power is
//! then a plain scaling of both fields, so `(z^p)^(1/p)` lands back on the
//! same branch it started from, and very large or very small magnitudes (the
//! `X^(1/p)` of a combination with `p` near zero) stay representable.
//!
//! Sums have no branch to preserve: [`PhasedComplex::add`] goes through
//! Cartesian form and returns the principal phase in `(-π, π]`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;

use crate::error::{DomainKind, Result};

#[derive(Clone, Copy, PartialEq)]
pub struct PhasedComplex {
    log_amplitude: f64,
    phase: f64,
}

impl PhasedComplex {
    /// Canonical zero: amplitude 0, phase 0.
    pub const ZERO: Self = Self {
        log_amplitude: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub const ONE: Self = Self {
        log_amplitude: 0.0,
        phase: 0.0,
    };

    /// Builds `amplitude · e^{i·phase}`.
    ///
    /// Panics if `amplitude` is negative or NaN; use [`PhasedComplex::try_new`]
    /// for untrusted input.
    pub fn new(amplitude: f64, phase: f64) -> Self {
        Self::try_new(amplitude, phase).expect("amplitude must be nonnegative")
    }

    pub fn try_new(amplitude: f64, phase: f64) -> Result<Self> {
        if amplitude.is_nan() || phase.is_nan() {
            return Err(DomainKind::NonFinite.into());
        }
        if amplitude < 0.0 {
            return Err(DomainKind::NegativeInput.into());
        }
        if amplitude == 0.0 {
            return Ok(Self::ZERO);
        }
        Ok(Self {
            log_amplitude: amplitude.ln(),
            phase,
        })
    }

    /// Builds `e^{log_amplitude + i·phase}` directly from the logarithm.
    pub fn from_log(log_amplitude: f64, phase: f64) -> Self {
        if log_amplitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                log_amplitude,
                phase,
            }
        }
    }

    /// A real number; negatives get phase π.
    pub fn from_real(x: f64) -> Self {
        if x < 0.0 {
            Self::new(-x, PI)
        } else {
            Self::new(x, 0.0)
        }
    }

    /// Principal-valued conversion from Cartesian coordinates.
    pub fn from_cartesian(re: f64, im: f64) -> Self {
        let r = re.hypot(im);
        if r == 0.0 {
            return Self::ZERO;
        }
        let mut theta = im.atan2(re);
        if theta == -PI {
            theta = PI;
        }
        Self {
            log_amplitude: r.ln(),
            phase: theta,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::from_cartesian(z.re, z.im)
    }

    pub fn amplitude(&self) -> f64 {
        self.log_amplitude.exp()
    }

    pub fn log_amplitude(&self) -> f64 {
        self.log_amplitude
    }

    /// The stored (unreduced) phase in radians.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn is_zero(&self) -> bool {
        self.log_amplitude == f64::NEG_INFINITY
    }

    /// The real value when the phase is exactly zero (or the value is zero).
    pub fn as_nonnegative_real(&self) -> Option<f64> {
        (self.phase == 0.0).then(|| self.amplitude())
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.amplitude(), self.phase)
        }
    }

    /// `z^q = (r^q, q·θ)`; zero to a nonpositive power is a pole.
    pub fn pow(self, q: f64) -> Result<Self> {
        if self.is_zero() {
            return if q > 0.0 {
                Ok(Self::ZERO)
            } else {
                Err(DomainKind::ZeroToNonpositivePower.into())
            };
        }
        Ok(Self {
            log_amplitude: self.log_amplitude * q,
            phase: self.phase * q,
        })
    }

    /// Same value with the phase reduced to `(-π, π]`.
    pub fn principal(self) -> Self {
        if self.is_zero() {
            return self;
        }
        let mut theta = self.phase.rem_euclid(TAU);
        if theta > PI {
            theta -= TAU;
        }
        Self {
            log_amplitude: self.log_amplitude,
            phase: theta,
        }
    }

    /// Adds `delta` radians to the phase. Zero stays canonical.
    pub fn rotate(self, delta: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        Self {
            log_amplitude: self.log_amplitude,
            phase: self.phase + delta,
        }
    }

    /// Multiplies by a real scalar (negative scalars add π to the phase).
    pub fn scale(self, s: f64) -> Self {
        self * Self::from_real(s)
    }

    /// Complex sum. The result carries the principal phase unless one of the
    /// operands is zero, in which case the other is returned untouched.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        Self::from_complex(self.to_complex() + other.to_complex())
    }

    /// `self / other`, or `None` when `other` is zero.
    pub fn checked_div(self, other: Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::ZERO);
        }
        Some(Self {
            log_amplitude: self.log_amplitude - other.log_amplitude,
            phase: self.phase - other.phase,
        })
    }
}

impl Default for PhasedComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Mul for PhasedComplex {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self {
            log_amplitude: self.log_amplitude + rhs.log_amplitude,
            phase: self.phase + rhs.phase,
        }
    }
}

impl Neg for PhasedComplex {
    type Output = Self;

    fn neg(self) -> Self {
        self.rotate(PI)
    }
}

impl From<f64> for PhasedComplex {
    fn from(x: f64) -> Self {
        Self::from_real(x)
    }
}

impl fmt::Debug for PhasedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}∠{})", self.amplitude(), self.phase)
    }
}

impl fmt::Display for PhasedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase == 0.0 {
            write!(f, "{}", self.amplitude())
        } else {
            write!(f, "{}·e^(i{})", self.amplitude(), self.phase)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn cartesian_examples() {
        let one = PhasedComplex::from_cartesian(1.0, 0.0);
        assert_eq!((one.amplitude(), one.phase()), (1.0, 0.0));
        let zero = PhasedComplex::from_cartesian(0.0, 0.0);
        assert_eq!((zero.amplitude(), zero.phase()), (0.0, 0.0));
        let minus = PhasedComplex::from_cartesian(-1.0, 0.0);
        assert_eq!((minus.amplitude(), minus.phase()), (1.0, PI));
        // -0.0 imaginary part must not flip to -π
        let minus = PhasedComplex::from_cartesian(-1.0, -0.0);
        assert_eq!(minus.phase(), PI);
    }

    #[test]
    fn zero_is_canonical() {
        assert_eq!(PhasedComplex::new(0.0, 3.0), PhasedComplex::ZERO);
        assert_eq!(PhasedComplex::ZERO.rotate(1.0).phase(), 0.0);
        assert_eq!(
            PhasedComplex::new(2.0, 1.0) * PhasedComplex::ZERO,
            PhasedComplex::ZERO
        );
    }

    #[test]
    fn pow_keeps_branch() {
        let z = PhasedComplex::new(1.0, PI).pow(2.0).unwrap();
        assert_eq!(z.amplitude(), 1.0);
        assert_eq!(z.phase(), 2.0 * PI);
        assert_ne!(z, PhasedComplex::ONE);

        let r = PhasedComplex::new(4.0, 0.0).pow(0.5).unwrap();
        assert_relative_eq!(r.amplitude(), 2.0, max_relative = 1e-15);
        assert_eq!(r.phase(), 0.0);
    }

    #[test]
    fn pow_pole_at_zero() {
        assert!(matches!(
            PhasedComplex::ZERO.pow(-1.0),
            Err(Error::Domain(DomainKind::ZeroToNonpositivePower))
        ));
        assert!(PhasedComplex::ZERO.pow(0.0).is_err());
        assert_eq!(PhasedComplex::ZERO.pow(3.0).unwrap(), PhasedComplex::ZERO);
    }

    #[test]
    fn negative_amplitude_rejected() {
        assert!(PhasedComplex::try_new(-1.0, 0.0).is_err());
        assert!(PhasedComplex::try_new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn add_and_principal() {
        let i = PhasedComplex::new(1.0, PI / 2.0);
        let s = i.add(PhasedComplex::ONE);
        assert_relative_eq!(s.amplitude(), 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(s.phase(), PI / 4.0, max_relative = 1e-15);
        // cancellation
        let c = PhasedComplex::ONE.add(-PhasedComplex::ONE);
        assert!(c.amplitude() < 1e-15);
        // zero operand returns the other unchanged, branch included
        let w = PhasedComplex::new(3.0, 5.0 * PI);
        assert_eq!(w.add(PhasedComplex::ZERO), w);
        assert_relative_eq!(w.principal().phase(), PI, max_relative = 1e-12);
        assert_relative_eq!(
            PhasedComplex::new(1.0, -PI).principal().phase(),
            PI,
            max_relative = 1e-15
        );
    }

    #[test]
    fn division() {
        let q = PhasedComplex::new(2.0, PI)
            .checked_div(PhasedComplex::new(2.0, PI))
            .unwrap();
        assert_eq!((q.amplitude(), q.phase()), (1.0, 0.0));
        assert!(PhasedComplex::ONE
            .checked_div(PhasedComplex::ZERO)
            .is_none());
    }

    fn nonzero() -> impl Strategy<Value = PhasedComplex> {
        (-20.0f64..20.0, -50.0f64..50.0).prop_map(|(l, t)| PhasedComplex::from_log(l, t))
    }

    fn exponent() -> impl Strategy<Value = f64> {
        prop_oneof![-8.0f64..-0.05, 0.05f64..8.0]
    }

    proptest! {
        // The round trip goes through q and fl(1/q), so the fields agree to
        // rounding of two products rather than bit for bit.
        #[test]
        fn pow_round_trip(z in nonzero(), q in exponent()) {
            let back = z.pow(q).unwrap().pow(1.0 / q).unwrap();
            prop_assert!((back.log_amplitude() - z.log_amplitude()).abs()
                <= 4.0 * f64::EPSILON * z.log_amplitude().abs().max(1.0));
            prop_assert!((back.phase() - z.phase()).abs()
                <= 4.0 * f64::EPSILON * z.phase().abs().max(1.0));
        }

        #[test]
        fn pow_round_trip_exact_for_powers_of_two(z in nonzero(), k in -6i32..6) {
            let q = 2f64.powi(k);
            prop_assert_eq!(z.pow(q).unwrap().pow(1.0 / q).unwrap(), z);
        }

        #[test]
        fn cartesian_round_trip(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            let z = PhasedComplex::from_cartesian(re, im).to_complex();
            let tol = 1e-12 * re.hypot(im).max(1e-300);
            prop_assert!((z.re - re).abs() <= tol && (z.im - im).abs() <= tol);
        }
    }
}
