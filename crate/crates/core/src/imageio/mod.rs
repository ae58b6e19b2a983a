//! Complex images on disk as an amplitude file plus an optional phase file.
//!
//! Files for one image share a stem: `<stem>.amp.png` (or `.amp.pfm`),
//! `<stem>.phase.png` (or `.phase.pfm`) and an optional weight/alpha plane
//! `<stem>.w.pfm`. Phase pixel values `v ∈ [0, 1]` stand for `θ = 2πv`, so a
//! white phase image is a full turn.

mod display;
mod image;
pub mod pfm;

use std::f64::consts::TAU;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use ::image::{DynamicImage, ImageBuffer, Luma, Rgb};

pub use self::display::{
    dequantize, quantize, to_display, tone_map, BitDepth, DisplayImage, DisplayMode,
};
pub use self::image::{FloatPlane, PhasedImage};
use crate::error::{Error, Result};

/// On-disk encoding for a plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Png(BitDepth),
    Pfm,
}

impl FileFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FileFormat::Png(_) => "png",
            FileFormat::Pfm => "pfm",
        }
    }

    fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("png") => Ok(FileFormat::Png(BitDepth::Eight)),
            Some("pfm") => Ok(FileFormat::Pfm),
            _ => Err(Error::Parse(format!(
                "unsupported image file `{}` (expected .png or .pfm)",
                path.display()
            ))),
        }
    }
}

impl std::str::FromStr for FileFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "png" | "png8" => Ok(FileFormat::Png(BitDepth::Eight)),
            "png16" => Ok(FileFormat::Png(BitDepth::Sixteen)),
            "pfm" => Ok(FileFormat::Pfm),
            other => Err(Error::Parse(format!("unknown file format `{other}`"))),
        }
    }
}

/// Reads a PNG as values in `[0, 1]` (8-bit: `v/255`, 16-bit: `v/65535`).
/// An alpha channel, if present, is dropped.
pub fn read_png(path: &Path) -> Result<(FloatPlane, BitDepth)> {
    let img = ::image::open(path)?;
    let (width, height) = (img.width() as usize, img.height() as usize);
    let (channels, depth, data): (usize, BitDepth, Vec<f32>) = match img {
        DynamicImage::ImageLuma8(b) => (1, BitDepth::Eight, to_unit(b.as_raw(), BitDepth::Eight)),
        DynamicImage::ImageLumaA8(_) => {
            let b = img.to_luma8();
            (1, BitDepth::Eight, to_unit(b.as_raw(), BitDepth::Eight))
        }
        DynamicImage::ImageRgb8(b) => (3, BitDepth::Eight, to_unit(b.as_raw(), BitDepth::Eight)),
        DynamicImage::ImageRgba8(_) => {
            let b = img.to_rgb8();
            (3, BitDepth::Eight, to_unit(b.as_raw(), BitDepth::Eight))
        }
        DynamicImage::ImageLuma16(b) => {
            (1, BitDepth::Sixteen, to_unit(b.as_raw(), BitDepth::Sixteen))
        }
        DynamicImage::ImageLumaA16(_) => {
            let b = img.to_luma16();
            (1, BitDepth::Sixteen, to_unit(b.as_raw(), BitDepth::Sixteen))
        }
        DynamicImage::ImageRgb16(b) => {
            (3, BitDepth::Sixteen, to_unit(b.as_raw(), BitDepth::Sixteen))
        }
        _ => {
            let b = img.to_rgb16();
            (3, BitDepth::Sixteen, to_unit(b.as_raw(), BitDepth::Sixteen))
        }
    };
    Ok((
        FloatPlane {
            width,
            height,
            channels,
            data,
        },
        depth,
    ))
}

fn to_unit<T: Copy + Into<u16>>(raw: &[T], depth: BitDepth) -> Vec<f32> {
    raw.iter().map(|&v| dequantize(v.into(), depth)).collect()
}

/// Writes already-quantized levels as a 1- or 3-channel PNG.
pub fn write_png(
    path: &Path,
    width: usize,
    height: usize,
    channels: usize,
    levels: &[u16],
    depth: BitDepth,
) -> Result<()> {
    let (w, h) = (width as u32, height as u32);
    let bad =
        || Error::DimensionMismatch(format!("PNG output needs 1 or 3 channels, not {channels}"));
    match (channels, depth) {
        (1, BitDepth::Eight) => {
            let raw = levels.iter().map(|&v| v as u8).collect();
            ImageBuffer::<Luma<u8>, Vec<u8>>::from_raw(w, h, raw)
                .ok_or_else(bad)?
                .save(path)?
        }
        (3, BitDepth::Eight) => {
            let raw = levels.iter().map(|&v| v as u8).collect();
            ImageBuffer::<Rgb<u8>, Vec<u8>>::from_raw(w, h, raw)
                .ok_or_else(bad)?
                .save(path)?
        }
        (1, BitDepth::Sixteen) => {
            ImageBuffer::<Luma<u16>, Vec<u16>>::from_raw(w, h, levels.to_vec())
                .ok_or_else(bad)?
                .save(path)?
        }
        (3, BitDepth::Sixteen) => {
            ImageBuffer::<Rgb<u16>, Vec<u16>>::from_raw(w, h, levels.to_vec())
                .ok_or_else(bad)?
                .save(path)?
        }
        _ => return Err(bad()),
    }
    Ok(())
}

/// Reads a plane in `[0, 1]` (PNG) or raw floats (PFM).
pub fn read_plane(path: &Path) -> Result<FloatPlane> {
    match FileFormat::from_path(path)? {
        FileFormat::Png(_) => Ok(read_png(path)?.0),
        FileFormat::Pfm => pfm::read_pfm(path),
    }
}

/// Loads an amplitude file and, optionally, a phase file of the same shape.
pub fn load_phased(amp_path: &Path, phase_path: Option<&Path>) -> Result<PhasedImage> {
    let amp = read_plane(amp_path)?;
    let phase = match phase_path {
        Some(p) => {
            let ph = read_plane(p)?;
            if (ph.width, ph.height, ph.channels) != (amp.width, amp.height, amp.channels) {
                return Err(Error::DimensionMismatch(format!(
                    "phase {}x{}x{} vs amplitude {}x{}x{}",
                    ph.width, ph.height, ph.channels, amp.width, amp.height, amp.channels
                )));
            }
            ph.data
                .iter()
                .map(|&v| (TAU * f64::from(v)) as f32)
                .collect()
        }
        None => vec![0.0; amp.data.len()],
    };
    PhasedImage::from_planes(amp.width, amp.height, amp.channels, amp.data, phase)
}

/// Fraction of a turn in `[0, 1)`.
fn wrapped_turns(theta: f32) -> f64 {
    let t = f64::from(theta).rem_euclid(TAU) / TAU;
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SaveOptions {
    /// Bit depth for PNG files (ignored by PFM).
    pub depth: BitDepth,
    /// Tone map for PNG amplitude files; PFM amplitudes are written raw.
    pub display: DisplayMode,
}

/// Writes the amplitude plane and, when `phase_path` is given, the phase
/// plane as `(θ mod 2π) / 2π`. Formats follow the file extensions.
pub fn save_phased(
    img: &PhasedImage,
    amp_path: &Path,
    phase_path: Option<&Path>,
    opts: SaveOptions,
) -> Result<()> {
    let (w, h, k) = (img.width(), img.height(), img.channels());
    match FileFormat::from_path(amp_path)? {
        FileFormat::Png(_) => write_png(
            amp_path,
            w,
            h,
            k,
            &tone_map(img, opts.display, opts.depth),
            opts.depth,
        )?,
        FileFormat::Pfm => pfm::write_pfm(
            amp_path,
            &FloatPlane {
                width: w,
                height: h,
                channels: k,
                data: img.amplitude().to_vec(),
            },
        )?,
    }
    if let Some(path) = phase_path {
        let turns: Vec<f64> = img.phase().iter().map(|&t| wrapped_turns(t)).collect();
        match FileFormat::from_path(path)? {
            FileFormat::Png(_) => {
                let levels: Vec<u16> = turns.iter().map(|&t| quantize(t, opts.depth)).collect();
                write_png(path, w, h, k, &levels, opts.depth)?
            }
            FileFormat::Pfm => pfm::write_pfm(
                path,
                &FloatPlane {
                    width: w,
                    height: h,
                    channels: k,
                    data: turns.iter().map(|&t| t as f32).collect(),
                },
            )?,
        }
    }
    Ok(())
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// The files belonging to one image stem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemFiles {
    pub amplitude: PathBuf,
    pub phase: Option<PathBuf>,
    pub weights: Option<PathBuf>,
}

impl StemFiles {
    /// Paths for writing `stem` in `format`.
    pub fn for_output(stem: &Path, format: FileFormat, with_phase: bool) -> Self {
        let ext = format.extension();
        Self {
            amplitude: with_suffix(stem, &format!(".amp.{ext}")),
            phase: with_phase.then(|| with_suffix(stem, &format!(".phase.{ext}"))),
            weights: None,
        }
    }

    /// Locates existing files for `stem`, preferring PNG over PFM.
    pub fn discover(stem: &Path) -> Result<Self> {
        let find = |kind: &str| {
            ["png", "pfm"]
                .iter()
                .map(|ext| with_suffix(stem, &format!(".{kind}.{ext}")))
                .find(|p| p.is_file())
        };
        let amplitude = find("amp").ok_or_else(|| {
            Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("no {}.amp.png or .amp.pfm", stem.display()),
            ))
        })?;
        let weights = Some(with_suffix(stem, ".w.pfm")).filter(|p| p.is_file());
        Ok(Self {
            amplitude,
            phase: find("phase"),
            weights,
        })
    }
}

/// Loads a stem: the phased image plus its weight plane if one exists.
pub fn load_stem(stem: &Path) -> Result<(PhasedImage, Option<FloatPlane>)> {
    let files = StemFiles::discover(stem)?;
    let img = load_phased(&files.amplitude, files.phase.as_deref())?;
    let weights = match files.weights {
        Some(p) => {
            let w = pfm::read_pfm(&p)?;
            if (w.width, w.height) != (img.width(), img.height()) {
                return Err(Error::DimensionMismatch(format!(
                    "weight plane {}x{} vs image {}x{}",
                    w.width,
                    w.height,
                    img.width(),
                    img.height()
                )));
            }
            Some(w)
        }
        None => None,
    };
    Ok((img, weights))
}

/// Writes `<stem>.amp.*`, plus `<stem>.phase.*` when the image has any phase.
pub fn save_stem(
    img: &PhasedImage,
    stem: &Path,
    format: FileFormat,
    display: DisplayMode,
) -> Result<StemFiles> {
    let files = StemFiles::for_output(stem, format, img.has_phase());
    let depth = match format {
        FileFormat::Png(d) => d,
        FileFormat::Pfm => BitDepth::Eight,
    };
    save_phased(
        img,
        &files.amplitude,
        files.phase.as_deref(),
        SaveOptions { depth, display },
    )?;
    Ok(files)
}

/// Writes a weight/alpha plane as `<stem>.w.pfm`.
pub fn save_weights(plane: &FloatPlane, stem: &Path) -> Result<PathBuf> {
    let path = with_suffix(stem, ".w.pfm");
    pfm::write_pfm(&path, plane)?;
    Ok(path)
}
