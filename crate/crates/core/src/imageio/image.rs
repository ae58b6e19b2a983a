use crate::error::{DomainKind, Error, Result};
use crate::phased::PhasedComplex;

/// A complex-valued image held as two planes: amplitude `r` and phase `θ`.
///
/// Samples are interleaved per pixel (`(y·width + x)·channels + c`).
/// Amplitudes are nonnegative; a missing phase source means all zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasedImage {
    width: usize,
    height: usize,
    channels: usize,
    amplitude: Vec<f32>,
    phase: Vec<f32>,
}

impl PhasedImage {
    pub fn zeros(width: usize, height: usize, channels: usize) -> Self {
        assert!(width > 0 && height > 0 && channels > 0, "empty image");
        let n = width * height * channels;
        Self {
            width,
            height,
            channels,
            amplitude: vec![0.0; n],
            phase: vec![0.0; n],
        }
    }

    pub fn from_planes(
        width: usize,
        height: usize,
        channels: usize,
        amplitude: Vec<f32>,
        phase: Vec<f32>,
    ) -> Result<Self> {
        if width == 0 || height == 0 || channels == 0 {
            return Err(Error::DimensionMismatch("empty image".into()));
        }
        let n = width * height * channels;
        if amplitude.len() != n || phase.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} samples, got {} amplitude / {} phase",
                amplitude.len(),
                phase.len()
            )));
        }
        if amplitude.iter().any(|a| a.is_nan() || *a < 0.0) {
            return Err(DomainKind::NegativeInput.into());
        }
        Ok(Self {
            width,
            height,
            channels,
            amplitude,
            phase,
        })
    }

    pub fn from_amplitude(
        width: usize,
        height: usize,
        channels: usize,
        amplitude: Vec<f32>,
    ) -> Result<Self> {
        let n = amplitude.len();
        Self::from_planes(width, height, channels, amplitude, vec![0.0; n])
    }

    /// Fills every pixel from `f(x, y, c)`.
    pub fn from_fn<F>(width: usize, height: usize, channels: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize, usize) -> PhasedComplex,
    {
        let mut img = Self::zeros(width, height, channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    img.set(x, y, c, f(x, y, c));
                }
            }
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn amplitude(&self) -> &[f32] {
        &self.amplitude
    }

    pub fn phase(&self) -> &[f32] {
        &self.phase
    }

    pub fn has_phase(&self) -> bool {
        self.phase.iter().any(|&t| t != 0.0)
    }

    pub fn same_shape(&self, other: &PhasedImage) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    pub(crate) fn check_shape(&self, other: &PhasedImage) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{}x{}x{} vs {}x{}x{}",
                self.width, self.height, self.channels, other.width, other.height, other.channels
            )))
        }
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        (y * self.width + x) * self.channels + c
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> PhasedComplex {
        let i = self.index(x, y, c);
        PhasedComplex::new(f64::from(self.amplitude[i]), f64::from(self.phase[i]))
    }

    /// Samples with coordinates clamped to the image edge.
    pub fn get_clamped(&self, x: isize, y: isize, c: usize) -> PhasedComplex {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.get(cx, cy, c)
    }

    pub fn set(&mut self, x: usize, y: usize, c: usize, z: PhasedComplex) {
        let i = self.index(x, y, c);
        self.amplitude[i] = z.amplitude() as f32;
        self.phase[i] = z.phase() as f32;
    }

    /// Applies `f` to every sample.
    pub fn try_map<F>(&self, mut f: F) -> Result<PhasedImage>
    where
        F: FnMut(usize, usize, usize, PhasedComplex) -> Result<PhasedComplex>,
    {
        let mut out = PhasedImage::zeros(self.width, self.height, self.channels);
        for y in 0..self.height {
            for x in 0..self.width {
                for c in 0..self.channels {
                    out.set(x, y, c, f(x, y, c, self.get(x, y, c))?);
                }
            }
        }
        Ok(out)
    }
}

/// A plain float plane, used for weight/alpha maps.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPlane {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<f32>,
}

impl FloatPlane {
    pub fn filled(width: usize, height: usize, channels: usize, value: f32) -> Self {
        Self {
            width,
            height,
            channels,
            data: vec![value; width * height * channels],
        }
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f32 {
        self.data[(y * self.width + x) * self.channels + c]
    }
}
