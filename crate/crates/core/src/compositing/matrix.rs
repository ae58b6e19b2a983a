use std::str::FromStr;

use num_complex::Complex64;

use crate::element::HMElement;
use crate::error::{Error, Result};
use crate::imageio::PhasedImage;
use crate::ops::hm_combine;
use crate::phased::PhasedComplex;

/// A linear map between the channels of a vector pixel, valid only under H₁.
///
/// The projective form has one extra row and column for alpha; the first `K`
/// entries of its last row must be exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialMatrix {
    channels: usize,
    projective: bool,
    entries: Vec<Complex64>,
}

impl MaterialMatrix {
    /// A `K×K` matrix from row-major entries.
    pub fn new(channels: usize, entries: Vec<Complex64>) -> Result<Self> {
        if channels == 0 || entries.len() != channels * channels {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for {channels} channels, got {}",
                channels * channels,
                entries.len()
            )));
        }
        Ok(Self {
            channels,
            projective: false,
            entries,
        })
    }

    /// A `(K+1)×(K+1)` matrix; the last row must start with `K` zeros.
    pub fn projective(channels: usize, entries: Vec<Complex64>) -> Result<Self> {
        let n = channels + 1;
        if channels == 0 || entries.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a projective matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries[channels * n..channels * n + channels]
            .iter()
            .any(|b| *b != Complex64::new(0.0, 0.0))
        {
            return Err(Error::InvalidMatrix(
                "last row must be zero outside the alpha column".into(),
            ));
        }
        Ok(Self {
            channels,
            projective: true,
            entries,
        })
    }

    pub fn identity(channels: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); channels * channels];
        for i in 0..channels {
            entries[i * channels + i] = Complex64::new(1.0, 0.0);
        }
        Self {
            channels,
            projective: false,
            entries,
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    fn size(&self) -> usize {
        self.channels + usize::from(self.projective)
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.size() + col]
    }

    /// `self · rhs`: applying the product equals applying `rhs` first.
    pub fn compose(&self, rhs: &MaterialMatrix) -> Result<MaterialMatrix> {
        if self.channels != rhs.channels || self.projective != rhs.projective {
            return Err(Error::DimensionMismatch(
                "matrices have different shapes".into(),
            ));
        }
        let n = self.size();
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (0..n).map(|k| self.entry(i, k) * rhs.entry(k, j)).sum();
            }
        }
        Ok(Self {
            channels: self.channels,
            projective: self.projective,
            entries,
        })
    }

    fn multiply(&self, input: &[Complex64]) -> Vec<Complex64> {
        let n = self.size();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j) * input[j]).sum())
            .collect()
    }

    fn coefficients(&self, pixel: &[HMElement]) -> Result<Vec<Complex64>> {
        if pixel.len() != self.channels {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} channels, pixel {}",
                self.channels,
                pixel.len()
            )));
        }
        pixel
            .iter()
            .map(|v| {
                if v.a.is_zero() {
                    Ok(v.x.to_complex())
                } else {
                    Err(Error::NotAVector)
                }
            })
            .collect()
    }

    /// `x'_u = Σ_v b_uv·x_v` over a pixel of vectors. A projective matrix
    /// sees alpha 1.
    pub fn apply(&self, pixel: &[HMElement]) -> Result<Vec<HMElement>> {
        Ok(self.apply_with_alpha(pixel, 1.0)?.0)
    }

    /// Like [`apply`](Self::apply), also transforming `alpha` through the
    /// extra row of a projective matrix. A square matrix leaves it alone.
    pub fn apply_with_alpha(
        &self,
        pixel: &[HMElement],
        alpha: f64,
    ) -> Result<(Vec<HMElement>, f64)> {
        let mut input = self.coefficients(pixel)?;
        if self.projective {
            input.push(Complex64::new(alpha, 0.0));
        }
        let mut out = self.multiply(&input);
        let alpha = if self.projective {
            out.pop().map_or(alpha, |z| z.re)
        } else {
            alpha
        };
        let out = out
            .into_iter()
            .map(|z| HMElement::vector(PhasedComplex::from_complex(z)))
            .collect();
        Ok((out, alpha))
    }

    /// Applies the matrix to every pixel of an image, read as vectors.
    pub fn apply_image(&self, img: &PhasedImage) -> Result<PhasedImage> {
        if img.channels() != self.channels {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} channels, image {}",
                self.channels,
                img.channels()
            )));
        }
        let mut out = img.clone();
        for y in 0..img.height() {
            for x in 0..img.width() {
                let px: Vec<_> = (0..self.channels)
                    .map(|c| HMElement::vector(img.get(x, y, c)))
                    .collect();
                for (c, v) in self.apply(&px)?.into_iter().enumerate() {
                    out.set(x, y, c, v.x);
                }
            }
        }
        Ok(out)
    }
}

/// Text form: a line with `K`, then `K` (or `K+1` for the projective form)
/// rows of `re,im` entries separated by whitespace.
impl FromStr for MaterialMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let k: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the channel count".into()))?;
        let rows: Vec<Vec<Complex64>> = lines
            .map(|line| {
                line.split_whitespace()
                    .map(parse_entry)
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let n = rows.len();
        if n != k && n != k + 1 {
            return Err(Error::InvalidMatrix(format!("{n} rows for {k} channels")));
        }
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "row has {} entries, expected {n}",
                row.len()
            )));
        }
        let entries = rows.into_iter().flatten().collect();
        if n == k {
            Self::new(k, entries)
        } else {
            Self::projective(k, entries)
        }
    }
}

fn parse_entry(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad matrix entry `{s}`, expected re,im"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(
        re.parse().map_err(|_| bad())?,
        im.parse().map_err(|_| bad())?,
    ))
}

/// Combines a light vector with the material `(0, a_term)` under H₁; the
/// projection is `c / a_term`.
pub fn attenuate(light: &HMElement, a_term: PhasedComplex) -> Result<HMElement> {
    if !light.a.is_zero() {
        return Err(Error::NotAVector);
    }
    hm_combine(1.0, light, &HMElement::material(a_term))
}
