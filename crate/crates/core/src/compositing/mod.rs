//! Combining whole images: the associative (but order-dependent) `over`
//! reference, phase-aware addition, generalized compositing with a pluggable
//! blend function, and channel-coupling material matrices.

mod blend;
mod layer;
mod matrix;

pub use blend::{
    Add, BlendFunction, BlendRegistry, HolderMinkowskiBlend, Maximum, Minimum, Multiply,
};
pub use layer::{
    add_phase_composite, add_phase_pixel, generalized_composite, generalized_pixel, over,
    over_pixel, Layer, WeightSource,
};
pub use matrix::{attenuate, MaterialMatrix};
