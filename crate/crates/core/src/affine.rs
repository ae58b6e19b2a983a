//! The `p = 1` algebra on real projective points: weighted sums, lines
//! through two points, and the exactly-determined light-fitting solvers whose
//! coefficients may come out negative.

use crate::element::{Color, HMElement};
use crate::error::{Error, Result};
use crate::phased::PhasedComplex;

/// `|Σw|` and `|1 + s|` below this are treated as points at infinity.
pub const DEGENERATE_EPS: f64 = 1e-12;

/// A real point `(weight·value, weight)`; `value` holds the unweighted channels.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePoint {
    pub value: Vec<f64>,
    pub weight: f64,
}

impl AffinePoint {
    pub fn new(value: Vec<f64>, weight: f64) -> Self {
        Self { value, weight }
    }

    /// Premultiplied coordinates `w·value`.
    pub fn coefficients(&self) -> Vec<f64> {
        self.value.iter().map(|v| v * self.weight).collect()
    }

    /// `p = 1` addition of premultiplied coordinates.
    ///
    /// Returns the raw pair because the sum may be a vector (weight 0).
    pub fn add(&self, other: &AffinePoint) -> Result<(Vec<f64>, f64)> {
        check_len(&self.value, &other.value)?;
        let coeffs = self
            .coefficients()
            .iter()
            .zip(other.coefficients())
            .map(|(a, b)| a + b)
            .collect();
        Ok((coeffs, self.weight + other.weight))
    }

    /// The additive inverse `(-w·value, -w)`.
    pub fn negated(&self) -> AffinePoint {
        AffinePoint::new(self.value.clone(), -self.weight)
    }

    /// As a projective color with the weight shared across channels.
    pub fn to_color(&self) -> Color {
        let w = PhasedComplex::from_real(self.weight);
        Color::new(
            self.coefficients()
                .into_iter()
                .map(|x| HMElement::new(PhasedComplex::from_real(x), w))
                .collect(),
        )
    }
}

fn check_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {} channels",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// `(Σ wᵢ·valueᵢ) / Σ wᵢ`.
pub fn sum_project(points: &[AffinePoint]) -> Result<Vec<f64>> {
    let first = points.first().ok_or(Error::DegenerateWeight(0.0))?;
    let k = first.value.len();
    let mut acc = vec![0.0; k];
    let mut total = 0.0;
    for pt in points {
        check_len(&first.value, &pt.value)?;
        for (a, x) in acc.iter_mut().zip(pt.coefficients()) {
            *a += x;
        }
        total += pt.weight;
    }
    if total.abs() < DEGENERATE_EPS {
        return Err(Error::DegenerateWeight(total));
    }
    Ok(acc.into_iter().map(|a| a / total).collect())
}

/// The barycentric coefficients `wᵢ / Σw` implied by [`sum_project`].
pub fn partition_coefficients(weights: &[f64]) -> Result<Vec<f64>> {
    let total: f64 = weights.iter().sum();
    if total.abs() < DEGENERATE_EPS {
        return Err(Error::DegenerateWeight(total));
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

/// Projection of `(x0, 1) + s1·(x1, 1)`: `x0 + s1/(1+s1)·(x1 - x0)`.
///
/// `s1 >= 0` stays on the segment, negative `s1` extrapolates, and `s1 = -1`
/// is the point at infinity.
pub fn line_point(x0: &[f64], x1: &[f64], s1: f64) -> Result<Vec<f64>> {
    check_len(x0, x1)?;
    let denom = 1.0 + s1;
    if denom.abs() < DEGENERATE_EPS {
        return Err(Error::DegenerateWeight(denom));
    }
    let t = s1 / denom;
    Ok(x0.iter().zip(x1).map(|(a, b)| a + t * (b - a)).collect())
}

/// `c = a + t·b` for Boolean `t`: `a = c0`, `b = c1 - c0`.
pub fn solve_linear_light(c0: &[f64], c1: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_len(c0, c1)?;
    let b = c1.iter().zip(c0).map(|(x, y)| x - y).collect();
    Ok((c0.to_vec(), b))
}

/// `c(t0, t1) = c00 + t1·dt1 + t0·dt0 + t0·t1·dt0t1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearModel {
    pub c00: Vec<f64>,
    pub dt1: Vec<f64>,
    pub dt0: Vec<f64>,
    pub dt0t1: Vec<f64>,
}

/// Fits the bilinear model through the four Boolean-corner colors `c_{t0 t1}`.
pub fn solve_bilinear_lights(
    c00: &[f64],
    c01: &[f64],
    c10: &[f64],
    c11: &[f64],
) -> Result<BilinearModel> {
    check_len(c00, c01)?;
    check_len(c00, c10)?;
    check_len(c00, c11)?;
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
    let dt0t1 = (0..c00.len())
        .map(|i| c11[i] - c10[i] - c01[i] + c00[i])
        .collect();
    Ok(BilinearModel {
        c00: c00.to_vec(),
        dt1: diff(c01, c00),
        dt0: diff(c10, c00),
        dt0t1,
    })
}

/// Polynomial form. Values of `t` outside `[0, 1]` extrapolate.
pub fn eval_bilinear(model: &BilinearModel, t0: f64, t1: f64) -> Vec<f64> {
    (0..model.c00.len())
        .map(|i| model.c00[i] + t1 * model.dt1[i] + t0 * model.dt0[i] + t0 * t1 * model.dt0t1[i])
        .collect()
}

/// Barycentric form `(1-t0)(1-t1)c00 + (1-t0)t1·c01 + t0(1-t1)c10 + t0·t1·c11`.
pub fn eval_bilinear_barycentric(
    c00: &[f64],
    c01: &[f64],
    c10: &[f64],
    c11: &[f64],
    t0: f64,
    t1: f64,
) -> Vec<f64> {
    (0..c00.len())
        .map(|i| {
            (1.0 - t0) * (1.0 - t1) * c00[i]
                + (1.0 - t0) * t1 * c01[i]
                + t0 * (1.0 - t1) * c10[i]
                + t0 * t1 * c11[i]
        })
        .collect()
}
