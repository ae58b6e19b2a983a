//! Hölder-Minkowski colors.
//!
//! Colors are projective pairs `(x, a)` of complex numbers per channel,
//! combined with the power-mean operator
//! `H_p(v0, v1) = ((x0ᵖ + x1ᵖ)^{1/p}, (a0ᵖ + a1ᵖ)^{1/p})`, which is commutative
//! and associative for every real `p ≠ 0` and projects (`x / a`) to a
//! weighted power mean. `p = 1` is the ordinary weighted average, `p = -1` a
//! harmonic form, and the limits `p -> 0, ±∞` give the geometric mean,
//! maximum and minimum.
//!
//! Besides the algebra the crate carries three applications: nonlinear image
//! filtering ([`filter`]), phase-aware compositing ([`compositing`]) and
//! multi-light diffuse shading ([`shading`]), plus the p = 1 affine toolkit
//! ([`affine`]) and the property suites behind `hmcolor verify` ([`verify`]).

pub mod accumulator;
pub mod affine;
pub mod combiner;
pub mod compositing;
pub mod element;
pub mod error;
pub mod exponent;
pub mod filter;
pub mod imageio;
pub mod ops;
pub mod phased;
pub mod shading;
pub mod verify;

pub use accumulator::HMAccumulator;
pub use combiner::{Combiner, CombinerOptions, CombinerRegistry, Sample};
pub use element::{Color, ElementKind, HMElement};
pub use error::{DomainKind, Error, Result};
pub use exponent::Exponent;
pub use imageio::PhasedImage;
pub use ops::{
    classical_check, geometric_mean, hm_combine, hm_inverse, hm_max, hm_min, hm_nary,
    hm_scalar_mul, project,
};
pub use phased::PhasedComplex;
