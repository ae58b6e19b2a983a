use std::io;

use thiserror::Error;

use crate::exponent::Exponent;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Reasons a value falls outside the domain of an operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// `0^q` with `q <= 0`: a pole, e.g. the harmonic mean of zero.
    ZeroToNonpositivePower,
    /// An operator restricted to strictly positive reals received something else.
    NonPositiveInput,
    /// An operator restricted to nonnegative reals received a negative value.
    NegativeInput,
    /// An operator restricted to zero-phase values received a phased one.
    PhasedInput,
    /// The exponent `p = 0` is excluded from the combination family.
    ZeroExponent,
    /// A reduction over an empty list that has no neutral value.
    EmptyInput,
    /// Paired lists (values and weights) of different lengths.
    LengthMismatch,
    /// A value that is not finite (NaN or infinite) where a finite one is required.
    NonFinite,
}

impl std::fmt::Display for DomainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DomainKind::ZeroToNonpositivePower => "zero raised to a nonpositive power",
            DomainKind::NonPositiveInput => "input must be strictly positive",
            DomainKind::NegativeInput => "input must be nonnegative",
            DomainKind::PhasedInput => "input must have zero phase",
            DomainKind::ZeroExponent => "exponent p = 0 is not allowed",
            DomainKind::EmptyInput => "input list is empty",
            DomainKind::LengthMismatch => "values and weights differ in length",
            DomainKind::NonFinite => "input must be finite",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(DomainKind),

    #[error("accumulators have different exponents ({left} vs {right})")]
    MismatchedExponent { left: f64, right: f64 },

    #[error("a vector element (a = 0) has no projection")]
    VectorHasNoProjection,

    #[error("exponent {0} is not supported here")]
    UnsupportedExponent(Exponent),

    #[error("weights sum to (nearly) zero: {0}")]
    DegenerateWeight(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("material matrices act on vector elements only (a = 0)")]
    NotAVector,

    #[error("invalid material matrix: {0}")]
    InvalidMatrix(String),

    #[error("unknown light preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),
}

impl From<DomainKind> for Error {
    fn from(kind: DomainKind) -> Self {
        Error::Domain(kind)
    }
}
