//! Order-independent running sums for the combination operator.
//!
//! Combining elements at exponent `p` only needs `Σ xᵢᵖ` and `Σ aᵢᵖ`; the
//! outer `1/p` root is applied once at the end. Keeping the sums in
//! Cartesian form makes grouping irrelevant up to floating-point addition
//! order, and lets partial reductions from different workers be merged.

use num_complex::Complex64;

use crate::element::HMElement;
use crate::error::{DomainKind, Error, Result};
use crate::phased::PhasedComplex;

#[derive(Debug, Clone, PartialEq)]
pub struct HMAccumulator {
    p: f64,
    x_sum: Complex64,
    a_sum: Complex64,
    count: usize,
    // The lone contributing element while count == 1, so that a single
    // element extracts back to itself with its branch intact.
    single: Option<HMElement>,
}

fn power_term(z: PhasedComplex, p: f64) -> Result<Complex64> {
    if z.is_zero() {
        return if p > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(DomainKind::ZeroToNonpositivePower.into())
        };
    }
    Ok(z.pow(p)?.to_complex())
}

fn root(sum: Complex64, p: f64) -> Result<PhasedComplex> {
    if sum.re == 0.0 && sum.im == 0.0 {
        return Ok(PhasedComplex::ZERO);
    }
    PhasedComplex::from_complex(sum).pow(1.0 / p)
}

impl HMAccumulator {
    pub fn new(p: f64) -> Result<Self> {
        if p == 0.0 {
            return Err(DomainKind::ZeroExponent.into());
        }
        if !p.is_finite() {
            return Err(DomainKind::NonFinite.into());
        }
        Ok(Self {
            p,
            x_sum: Complex64::new(0.0, 0.0),
            a_sum: Complex64::new(0.0, 0.0),
            count: 0,
            single: None,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Running `Σ xᵢᵖ`.
    pub fn x_sum(&self) -> Complex64 {
        self.x_sum
    }

    /// Running `Σ aᵢᵖ`.
    pub fn a_sum(&self) -> Complex64 {
        self.a_sum
    }

    /// Number of non-identity elements added so far.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Adds one element. The identity is skipped outright; any other element
    /// with an exactly-zero component contributes `0` for that component when
    /// `p > 0` and is a pole when `p < 0`.
    pub fn add(&mut self, v: &HMElement) -> Result<()> {
        if v.is_identity() {
            return Ok(());
        }
        let xt = power_term(v.x, self.p)?;
        let at = power_term(v.a, self.p)?;
        self.x_sum += xt;
        self.a_sum += at;
        self.count += 1;
        self.single = if self.count == 1 { Some(*v) } else { None };
        Ok(())
    }

    /// Builder-style [`HMAccumulator::add`].
    pub fn with(mut self, v: &HMElement) -> Result<Self> {
        self.add(v)?;
        Ok(self)
    }

    pub fn extend<'a, I>(&mut self, items: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a HMElement>,
    {
        for v in items {
            self.add(v)?;
        }
        Ok(())
    }

    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::MismatchedExponent {
                left: self.p,
                right: other.p,
            });
        }
        if other.count == 0 {
            return Ok(self.clone());
        }
        if self.count == 0 {
            return Ok(other.clone());
        }
        Ok(Self {
            p: self.p,
            x_sum: self.x_sum + other.x_sum,
            a_sum: self.a_sum + other.a_sum,
            count: self.count + other.count,
            single: None,
        })
    }

    /// Applies the outer `1/p` root to both sums (principal branch).
    pub fn extract(&self) -> Result<HMElement> {
        if let Some(v) = self.single {
            return Ok(v);
        }
        Ok(HMElement::new(
            root(self.x_sum, self.p)?,
            root(self.a_sum, self.p)?,
        ))
    }

    /// Projection of the extracted element.
    pub fn project(&self) -> Result<PhasedComplex> {
        self.extract()?.project()
    }
}
