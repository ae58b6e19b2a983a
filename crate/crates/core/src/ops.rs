//! The combination operator `H_p`, its projection and inverse, and the
//! limit operators the family tends to as `p -> 0` and `p -> ±∞`.

use std::f64::consts::PI;

use crate::accumulator::HMAccumulator;
use crate::element::HMElement;
use crate::error::{DomainKind, Error, Result};
use crate::exponent::Exponent;
use crate::phased::PhasedComplex;

/// `H_p(v0, v1) = ((x0ᵖ + x1ᵖ)^{1/p}, (a0ᵖ + a1ᵖ)^{1/p})`.
///
/// Defined as accumulate-then-extract, so it agrees with [`hm_nary`] by
/// construction and is symmetric in its operands bit for bit.
pub fn hm_combine(p: f64, v0: &HMElement, v1: &HMElement) -> Result<HMElement> {
    HMAccumulator::new(p)?.with(v0)?.with(v1)?.extract()
}

/// `H_p` over any number of elements; the empty combination is the identity.
pub fn hm_nary(p: f64, vs: &[HMElement]) -> Result<HMElement> {
    let mut acc = HMAccumulator::new(p)?;
    acc.extend(vs)?;
    acc.extract()
}

/// Projection `x / a`.
pub fn project(v: &HMElement) -> Result<PhasedComplex> {
    v.project()
}

/// Scalar multiplication `b·(x, a)`.
pub fn hm_scalar_mul(b: PhasedComplex, v: &HMElement) -> HMElement {
    v.scale(b)
}

/// The `n`-th inverse of `v` under `H_p`: both components rotated by
/// `(2n+1)π/p`, so that their `p`-th powers are negated.
pub fn hm_inverse(v: &HMElement, p: f64, n: u32) -> Result<HMElement> {
    if p == 0.0 {
        return Err(DomainKind::ZeroExponent.into());
    }
    let shift = f64::from(2 * n + 1) * PI / p;
    Ok(HMElement::new(v.x.rotate(shift), v.a.rotate(shift)))
}

fn check_weighted(xs: &[f64], weights: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(DomainKind::EmptyInput.into());
    }
    if xs.len() != weights.len() {
        return Err(DomainKind::LengthMismatch.into());
    }
    if weights.iter().any(|w| *w <= 0.0 || !w.is_finite()) {
        return Err(DomainKind::NonPositiveInput.into());
    }
    Ok(())
}

/// `∏ xᵢ^{wᵢ / Σw}`; weights enter linearly, not raised to any power.
pub fn geometric_mean(xs: &[f64], weights: &[f64]) -> Result<f64> {
    check_weighted(xs, weights)?;
    if xs.iter().any(|x| *x <= 0.0 || !x.is_finite()) {
        return Err(DomainKind::NonPositiveInput.into());
    }
    let total: f64 = weights.iter().sum();
    let log_mean: f64 = xs.iter().zip(weights).map(|(x, w)| w * x.ln()).sum::<f64>() / total;
    Ok(log_mean.exp())
}

fn check_nonnegative(xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| x.is_nan()) {
        return Err(DomainKind::NonFinite.into());
    }
    if xs.iter().any(|x| *x < 0.0) {
        return Err(DomainKind::NegativeInput.into());
    }
    Ok(())
}

/// Index of the winning tap under `better`, first one on ties.
pub(crate) fn arg_best<F>(scores: impl Iterator<Item = f64>, better: F) -> Option<(usize, f64)>
where
    F: Fn(f64, f64) -> bool,
{
    scores.enumerate().fold(None, |best, (i, s)| match best {
        Some((_, b)) if !better(s, b) => best,
        _ => Some((i, s)),
    })
}

fn max_weight(weights: &[f64]) -> f64 {
    weights.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// `max(wᵢ·xᵢ) / max(wᵢ)`, the `p -> +∞` limit.
pub fn hm_max(xs: &[f64], weights: &[f64]) -> Result<f64> {
    check_weighted(xs, weights)?;
    check_nonnegative(xs)?;
    let (_, best) = arg_best(xs.iter().zip(weights).map(|(x, w)| x * w), |s, b| s > b)
        .ok_or(Error::Domain(DomainKind::EmptyInput))?;
    Ok(best / max_weight(weights))
}

/// `min(wᵢ·xᵢ) / max(wᵢ)`, the `p -> -∞` limit.
pub fn hm_min(xs: &[f64], weights: &[f64]) -> Result<f64> {
    check_weighted(xs, weights)?;
    check_nonnegative(xs)?;
    let (_, best) = arg_best(xs.iter().zip(weights).map(|(x, w)| x * w), |s, b| s < b)
        .ok_or(Error::Domain(DomainKind::EmptyInput))?;
    Ok(best / max_weight(weights))
}

/// Closed forms of the projected combination for `p = 1` (weighted mean)
/// and `p = -1` (harmonic form), evaluated directly rather than through the
/// accumulator. Inputs are premultiplied points with positive-real parts.
pub fn classical_check(p: f64, v0: &HMElement, v1: &HMElement) -> Result<PhasedComplex> {
    let real = |z: PhasedComplex| -> Result<f64> {
        match z.as_nonnegative_real() {
            Some(r) if r > 0.0 => Ok(r),
            _ => Err(DomainKind::NonPositiveInput.into()),
        }
    };
    let (a0, a1) = (real(v0.a)?, real(v1.a)?);
    let (x0, x1) = (real(v0.x)? / a0, real(v1.x)? / a1);
    let value = if p == 1.0 {
        (a0 * x0 + a1 * x1) / (a0 + a1)
    } else if p == -1.0 {
        (a0 + a1) / (a0 * x0 + a1 * x1) * x0 * x1
    } else {
        return Err(Error::UnsupportedExponent(Exponent::Finite(p)));
    };
    Ok(PhasedComplex::from_real(value))
}

/// Projected combination of nonnegative real values with positive weights
/// for any member of the family, including the symbolic limits.
pub fn weighted_mean(p: Exponent, xs: &[f64], weights: &[f64]) -> Result<f64> {
    match p {
        Exponent::Finite(p) => {
            check_weighted(xs, weights)?;
            check_nonnegative(xs)?;
            let mut acc = HMAccumulator::new(p)?;
            for (&x, &w) in xs.iter().zip(weights) {
                acc.add(&HMElement::real(x * w, w))?;
            }
            let v = acc.project()?;
            Ok(v.amplitude())
        }
        Exponent::GeometricLimit => geometric_mean(xs, weights),
        Exponent::PosInfinity => hm_max(xs, weights),
        Exponent::NegInfinity => hm_min(xs, weights),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(value: f64, weight: f64) -> HMElement {
        HMElement::weighted_point(
            PhasedComplex::from_real(value),
            PhasedComplex::from_real(weight),
        )
    }

    #[test]
    fn combine_weighted_average() {
        let v = hm_combine(1.0, &HMElement::real(6.0, 2.0), &HMElement::real(6.0, 1.0)).unwrap();
        assert_relative_eq!(v.x.amplitude(), 12.0, max_relative = 1e-15);
        assert_relative_eq!(v.a.amplitude(), 3.0, max_relative = 1e-15);
        assert_relative_eq!(v.project().unwrap().amplitude(), 4.0, max_relative = 1e-15);
    }

    #[test]
    fn combine_with_inverse_is_identity() {
        let v = HMElement::real(1.0, 1.0);
        let inv = hm_inverse(&v, 1.0, 0).unwrap();
        let acc = HMAccumulator::new(1.0)
            .unwrap()
            .with(&v)
            .unwrap()
            .with(&inv)
            .unwrap();
        assert!(acc.x_sum().norm() < 1e-15 && acc.a_sum().norm() < 1e-15);
        let r = hm_combine(1.0, &v, &inv).unwrap();
        assert!(r.x.amplitude() < 1e-15 && r.a.amplitude() < 1e-15);
    }

    #[test]
    fn harmonic_mean() {
        let v = hm_combine(-1.0, &HMElement::real(2.0, 1.0), &HMElement::real(4.0, 1.0)).unwrap();
        assert_relative_eq!(
            v.project().unwrap().amplitude(),
            8.0 / 3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn nary_edge_cases() {
        assert_eq!(hm_nary(2.0, &[]).unwrap(), HMElement::IDENTITY);
        let v = HMElement::new(PhasedComplex::new(0.3, 7.0), PhasedComplex::new(2.0, -1.0));
        assert_eq!(hm_nary(-3.0, &[v]).unwrap(), v);
        assert_eq!(hm_combine(-3.0, &v, &HMElement::IDENTITY).unwrap(), v);
    }

    #[test]
    fn scalar_mul_examples() {
        let v = hm_scalar_mul(PhasedComplex::new(2.0, 0.0), &HMElement::real(3.0, 1.0));
        assert_relative_eq!(v.x.amplitude(), 6.0, max_relative = 1e-15);
        assert_relative_eq!(v.a.amplitude(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(v.project().unwrap().amplitude(), 3.0, max_relative = 1e-15);

        let v = hm_scalar_mul(PhasedComplex::new(1.0, PI), &HMElement::real(1.0, 0.0));
        assert_eq!((v.x.amplitude(), v.x.phase()), (1.0, PI));
        assert!(v.a.is_zero());

        let v = hm_scalar_mul(PhasedComplex::ZERO, &HMElement::real(5.0, 2.0));
        assert_eq!(v, HMElement::IDENTITY);
    }

    #[test]
    fn inverse_examples() {
        let v = HMElement::real(1.0, 1.0);
        let inv = hm_inverse(&v, 1.0, 0).unwrap();
        assert_eq!((inv.x.phase(), inv.a.phase()), (PI, PI));
        let c = inv.x.to_complex();
        assert_relative_eq!(c.re, -1.0, max_relative = 1e-15);

        let inv2 = hm_inverse(&v, 2.0, 0).unwrap();
        assert_eq!(inv2.x.phase(), PI / 2.0);
        let acc = HMAccumulator::new(2.0)
            .unwrap()
            .with(&v)
            .unwrap()
            .with(&inv2)
            .unwrap();
        assert!(acc.x_sum().norm() < 1e-15 && acc.a_sum().norm() < 1e-15);

        // applying the inverse twice rotates by 2π/p: a full turn once powered
        let p = 3.0;
        let twice = hm_inverse(&hm_inverse(&v, p, 0).unwrap(), p, 0).unwrap();
        assert_relative_eq!(twice.x.phase(), 2.0 * PI / p, max_relative = 1e-15);
        let powered = twice.x.pow(p).unwrap().to_complex();
        assert_relative_eq!(powered.re, 1.0, max_relative = 1e-14);
        assert!(powered.im.abs() < 1e-14);
    }

    #[test]
    fn geometric_examples() {
        assert_relative_eq!(
            geometric_mean(&[4.0, 9.0], &[1.0, 1.0]).unwrap(),
            6.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            geometric_mean(&[2.0], &[5.0]).unwrap(),
            2.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            geometric_mean(&[2.0, 8.0], &[3.0, 1.0]).unwrap(),
            2.828_427_124_746_19,
            max_relative = 1e-14
        );
        assert!(geometric_mean(&[0.0, 1.0], &[1.0, 1.0]).is_err());
        assert!(geometric_mean(&[1.0], &[-1.0]).is_err());
        assert!(geometric_mean(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn max_min_examples() {
        assert_eq!(hm_max(&[0.2, 0.9], &[1.0, 1.0]).unwrap(), 0.9);
        assert_eq!(hm_min(&[0.2, 0.9], &[1.0, 1.0]).unwrap(), 0.2);
        assert_eq!(hm_max(&[1.0, 2.0], &[3.0, 1.0]).unwrap(), 1.0);
        assert_eq!(hm_max(&[5.0], &[2.0]).unwrap(), 5.0);
        assert_eq!(hm_min(&[5.0], &[2.0]).unwrap(), 5.0);
        assert!(hm_max(&[-1.0], &[1.0]).is_err());
        assert!(hm_min(&[], &[]).is_err());
    }

    #[test]
    fn classical_examples() {
        let r = classical_check(1.0, &pt(3.0, 2.0), &pt(6.0, 1.0)).unwrap();
        assert_relative_eq!(r.amplitude(), 4.0, max_relative = 1e-15);
        let r = classical_check(-1.0, &pt(2.0, 1.0), &pt(4.0, 1.0)).unwrap();
        assert_relative_eq!(r.amplitude(), 8.0 / 3.0, max_relative = 1e-15);
        let r = classical_check(-1.0, &pt(0.7, 0.2), &pt(0.7, 5.0)).unwrap();
        assert_relative_eq!(r.amplitude(), 0.7, max_relative = 1e-15);
        assert!(matches!(
            classical_check(2.0, &pt(1.0, 1.0), &pt(1.0, 1.0)),
            Err(Error::UnsupportedExponent(_))
        ));
    }

    #[test]
    fn weighted_mean_dispatch() {
        let xs = [4.0, 9.0];
        let ws = [1.0, 1.0];
        assert_eq!(weighted_mean(Exponent::PosInfinity, &xs, &ws).unwrap(), 9.0);
        assert_eq!(weighted_mean(Exponent::NegInfinity, &xs, &ws).unwrap(), 4.0);
        assert_relative_eq!(
            weighted_mean(Exponent::GeometricLimit, &xs, &ws).unwrap(),
            6.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            weighted_mean(Exponent::Finite(1.0), &xs, &ws).unwrap(),
            6.5,
            max_relative = 1e-15
        );
    }
}
