use crate::error::{Error, Result};
use crate::phased::PhasedComplex;

/// The four kinds of projective color element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    /// `(0, 0)`, neutral for every combination.
    Identity,
    /// `(x, 0)`: combines additively, models lights.
    Vector,
    /// `(0, a)`: attenuates or phase-shifts a vector it is combined with.
    Material,
    /// `(x, a)`: projects to the color `x / a`.
    Point,
}

/// A single channel of a projective color: coefficient `x` and weight `a`.
///
/// `x` is stored already multiplied by the weight, so the point with value
/// `c` and weight `w` is `(w·c, w)`; see [`HMElement::weighted_point`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HMElement {
    pub x: PhasedComplex,
    pub a: PhasedComplex,
}

impl HMElement {
    pub const IDENTITY: Self = Self {
        x: PhasedComplex::ZERO,
        a: PhasedComplex::ZERO,
    };

    pub fn new(x: PhasedComplex, a: PhasedComplex) -> Self {
        Self { x, a }
    }

    /// Positive-real shorthand for `(x, a)`.
    pub fn real(x: f64, a: f64) -> Self {
        Self::new(PhasedComplex::from_real(x), PhasedComplex::from_real(a))
    }

    /// `(weight·value, weight)`.
    pub fn weighted_point(value: PhasedComplex, weight: PhasedComplex) -> Self {
        Self::new(value * weight, weight)
    }

    pub fn vector(x: PhasedComplex) -> Self {
        Self::new(x, PhasedComplex::ZERO)
    }

    pub fn material(a: PhasedComplex) -> Self {
        Self::new(PhasedComplex::ZERO, a)
    }

    pub fn kind(&self) -> ElementKind {
        match (self.x.is_zero(), self.a.is_zero()) {
            (true, true) => ElementKind::Identity,
            (false, true) => ElementKind::Vector,
            (true, false) => ElementKind::Material,
            (false, false) => ElementKind::Point,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.kind() == ElementKind::Identity
    }

    /// The observable color `x / a`.
    pub fn project(&self) -> Result<PhasedComplex> {
        self.x
            .checked_div(self.a)
            .ok_or(Error::VectorHasNoProjection)
    }

    /// Scalar multiplication `b·(x, a) = (b·x, b·a)`; leaves the projection unchanged.
    pub fn scale(&self, b: PhasedComplex) -> Self {
        Self::new(b * self.x, b * self.a)
    }
}

/// A multi-channel color: one [`HMElement`] per channel.
///
/// Channel frequencies are carried as labels only; every operation acts on
/// each channel independently.
#[derive(Debug, Clone, PartialEq)]
pub struct Color {
    channels: Vec<HMElement>,
    frequencies: Vec<Option<f64>>,
}

impl Color {
    pub fn new(channels: Vec<HMElement>) -> Self {
        assert!(!channels.is_empty(), "a color needs at least one channel");
        let frequencies = vec![None; channels.len()];
        Self {
            channels,
            frequencies,
        }
    }

    /// Straight RGB point with a shared weight.
    pub fn rgb(values: [f64; 3], weight: f64) -> Self {
        let w = PhasedComplex::from_real(weight);
        Self::new(
            values
                .iter()
                .map(|&v| HMElement::weighted_point(PhasedComplex::from_real(v), w))
                .collect(),
        )
    }

    pub fn with_frequencies(mut self, frequencies: Vec<f64>) -> Self {
        assert_eq!(frequencies.len(), self.channels.len());
        self.frequencies = frequencies.into_iter().map(Some).collect();
        self
    }

    pub fn channels(&self) -> &[HMElement] {
        &self.channels
    }

    pub fn frequency(&self, channel: usize) -> Option<f64> {
        self.frequencies[channel]
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Applies `f` to every channel, keeping the channel count and labels.
    pub fn map_channels<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&HMElement) -> Result<HMElement>,
    {
        let channels = self.channels.iter().map(&mut f).collect::<Result<_>>()?;
        Ok(Self {
            channels,
            frequencies: self.frequencies.clone(),
        })
    }

    /// Channel-wise pairing of two colors with the same channel count.
    pub fn zip_channels<F>(&self, other: &Color, mut f: F) -> Result<Self>
    where
        F: FnMut(&HMElement, &HMElement) -> Result<HMElement>,
    {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} channels",
                self.len(),
                other.len()
            )));
        }
        let channels = self
            .channels
            .iter()
            .zip(&other.channels)
            .map(|(l, r)| f(l, r))
            .collect::<Result<_>>()?;
        Ok(Self {
            channels,
            frequencies: self.frequencies.clone(),
        })
    }

    pub fn project(&self) -> Result<Vec<PhasedComplex>> {
        self.channels.iter().map(HMElement::project).collect()
    }
}
