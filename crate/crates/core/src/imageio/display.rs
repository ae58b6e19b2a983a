use std::str::FromStr;

use super::image::PhasedImage;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BitDepth {
    #[default]
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn levels(self) -> u32 {
        match self {
            BitDepth::Eight => 255,
            BitDepth::Sixteen => 65535,
        }
    }
}

/// How amplitudes are brought into the displayable `[0, 1]` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisplayMode {
    /// Saturate at 0 and 1.
    #[default]
    Clamp,
    /// Divide by the image maximum (all-zero images stay zero).
    Normalize,
    /// Amplitude is already `|z|`; same as `Clamp`.
    Magnitude,
}

impl FromStr for DisplayMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "clamp" => Ok(DisplayMode::Clamp),
            "normalize" => Ok(DisplayMode::Normalize),
            "magnitude" => Ok(DisplayMode::Magnitude),
            other => Err(Error::Parse(format!("unknown display mode `{other}`"))),
        }
    }
}

/// `v ∈ [0, 1]` to an integer level, rounding half to even.
pub fn quantize(v: f64, depth: BitDepth) -> u16 {
    let levels = f64::from(depth.levels());
    (v.clamp(0.0, 1.0) * levels).round_ties_even() as u16
}

pub fn dequantize(q: u16, depth: BitDepth) -> f32 {
    (f64::from(q) / f64::from(depth.levels())) as f32
}

/// Tone-maps the amplitude plane to integer levels.
pub fn tone_map(img: &PhasedImage, mode: DisplayMode, depth: BitDepth) -> Vec<u16> {
    let amp = img.amplitude();
    match mode {
        DisplayMode::Clamp | DisplayMode::Magnitude => {
            amp.iter().map(|&a| quantize(f64::from(a), depth)).collect()
        }
        DisplayMode::Normalize => {
            let max = amp.iter().copied().fold(0f32, f32::max);
            if max > 0.0 && max.is_finite() {
                amp.iter()
                    .map(|&a| quantize(f64::from(a) / f64::from(max), depth))
                    .collect()
            } else {
                vec![0; amp.len()]
            }
        }
    }
}

/// An 8-bit rendering of the amplitude plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplayImage {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<u8>,
}

pub fn to_display(img: &PhasedImage, mode: DisplayMode) -> DisplayImage {
    DisplayImage {
        width: img.width(),
        height: img.height(),
        channels: img.channels(),
        data: tone_map(img, mode, BitDepth::Eight)
            .into_iter()
            .map(|q| q as u8)
            .collect(),
    }
}
