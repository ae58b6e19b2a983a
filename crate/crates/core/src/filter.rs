//! Power-mean convolution and its morphological limits.
//!
//! Each output sample is a [`Combiner`] applied to the kernel-weighted
//! neighborhood, so the classical blur (`p = 1`), dilation (`p -> ∞`) and
//! erosion (`p -> -∞`) are the same loop with different strategies. Samples
//! outside the image are clamped to the edge, and zero-weight taps are left
//! out of the neighborhood.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::combiner::{Combiner, HolderMinkowski, Maximum, Minimum, Sample, DEFAULT_LIFT};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::imageio::PhasedImage;
use crate::phased::PhasedComplex;

/// A `(2n+1) × (2m+1)` table of nonnegative weights.
///
/// Weight `(i, j)` applies to the pixel at offset `(i - n, j - m)` from the
/// center, i.e. `n` is the horizontal half-extent and `m` the vertical one.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    n: usize,
    m: usize,
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(n: usize, m: usize, weights: Vec<f64>) -> Result<Self> {
        let expected = (2 * n + 1) * (2 * m + 1);
        if weights.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "kernel {}x{} needs {expected} weights, got {}",
                2 * n + 1,
                2 * m + 1,
                weights.len()
            )));
        }
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::Parse(
                "kernel weights must be finite and nonnegative".into(),
            ));
        }
        if !weights.iter().any(|w| *w > 0.0) {
            return Err(Error::DegenerateWeight(0.0));
        }
        Ok(Self { n, m, weights })
    }

    pub fn half_extents(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * (2 * self.m + 1) + j]
    }

    /// `(dx, dy, w)` for every tap with positive weight, row-major in `(i, j)`.
    pub fn taps(&self) -> impl Iterator<Item = (isize, isize, f64)> + '_ {
        let cols = 2 * self.m + 1;
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(move |(k, &w)| {
                let (i, j) = (k / cols, k % cols);
                (
                    i as isize - self.n as isize,
                    j as isize - self.m as isize,
                    w,
                )
            })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        fs::read_to_string(path)?.parse()
    }
}

/// All-ones `(2n+1) × (2n+1)` kernel.
pub fn box_kernel(n: usize) -> Kernel {
    let side = 2 * n + 1;
    Kernel {
        n,
        m: n,
        weights: vec![1.0; side * side],
    }
}

/// Text form: a first line `n m`, then `2n+1` rows of `2m+1` weights.
/// `box:N` is accepted as shorthand for [`box_kernel`].
impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(n) = s.trim().strip_prefix("box:") {
            let n = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad box size `{n}`")))?;
            return Ok(box_kernel(n));
        }
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty kernel".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad kernel header `{header}`")))
            })
            .collect::<Result<_>>()?;
        let [n, m] = dims[..] else {
            return Err(Error::Parse(format!(
                "kernel header needs `n m`, got `{header}`"
            )));
        };
        let mut weights = Vec::with_capacity((2 * n + 1) * (2 * m + 1));
        let mut rows = 0;
        for line in lines {
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Parse(format!("bad kernel weight `{t}`")))
                })
                .collect::<Result<_>>()?;
            if row.len() != 2 * m + 1 {
                return Err(Error::Parse(format!(
                    "kernel row {} has {} entries, expected {}",
                    rows + 1,
                    row.len(),
                    2 * m + 1
                )));
            }
            weights.extend(row);
            rows += 1;
        }
        if rows != 2 * n + 1 {
            return Err(Error::Parse(format!(
                "kernel has {rows} rows, expected {}",
                2 * n + 1
            )));
        }
        Kernel::new(n, m, weights)
    }
}

/// The combined value for one output sample, in full precision.
pub fn filter_sample(
    img: &PhasedImage,
    kernel: &Kernel,
    combiner: &dyn Combiner,
    x: usize,
    y: usize,
    c: usize,
) -> Result<PhasedComplex> {
    let mut buf = Vec::new();
    gather(img, kernel, x, y, c, &mut buf);
    combiner.combine(&buf)
}

fn gather(img: &PhasedImage, kernel: &Kernel, x: usize, y: usize, c: usize, buf: &mut Vec<Sample>) {
    buf.clear();
    buf.extend(
        kernel.taps().map(|(dx, dy, w)| {
            Sample::new(img.get_clamped(x as isize + dx, y as isize + dy, c), w)
        }),
    );
}

/// Runs `combiner` over every neighborhood.
pub fn filter_with(
    img: &PhasedImage,
    kernel: &Kernel,
    combiner: &dyn Combiner,
) -> Result<PhasedImage> {
    let mut out = PhasedImage::zeros(img.width(), img.height(), img.channels());
    let mut buf = Vec::new();
    for y in 0..img.height() {
        for x in 0..img.width() {
            for c in 0..img.channels() {
                gather(img, kernel, x, y, c, &mut buf);
                out.set(x, y, c, combiner.combine(&buf)?);
            }
        }
    }
    Ok(out)
}

/// `c' = (Σ wᵖ cᵖ / Σ wᵖ)^{1/p}`; for `p < 0`, amplitudes below `1e-6` are
/// lifted to `1e-6` first.
pub fn hm_filter(img: &PhasedImage, kernel: &Kernel, p: f64) -> Result<PhasedImage> {
    let combiner = HolderMinkowski::new(p)?.with_lift(Some(DEFAULT_LIFT));
    filter_with(img, kernel, &combiner)
}

/// `c' = max(w·c) / max(w)`.
pub fn dilate(img: &PhasedImage, kernel: &Kernel) -> PhasedImage {
    filter_with(img, kernel, &Maximum).expect("kernels always have a positive tap")
}

/// `c' = min(w·c) / max(w)`.
pub fn erode(img: &PhasedImage, kernel: &Kernel) -> PhasedImage {
    filter_with(img, kernel, &Minimum).expect("kernels always have a positive tap")
}

/// One step of a [`pipeline`].
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub kernel: Kernel,
    pub exponent: Exponent,
}

impl Stage {
    pub fn new(kernel: Kernel, exponent: Exponent) -> Self {
        Self { kernel, exponent }
    }
}

/// Applies the stages left to right; infinite exponents dilate or erode.
pub fn pipeline(img: &PhasedImage, stages: &[Stage]) -> Result<PhasedImage> {
    let mut cur = img.clone();
    for stage in stages {
        cur = match stage.exponent {
            Exponent::Finite(p) => hm_filter(&cur, &stage.kernel, p)?,
            Exponent::PosInfinity => dilate(&cur, &stage.kernel),
            Exponent::NegInfinity => erode(&cur, &stage.kernel),
            Exponent::GeometricLimit => return Err(Error::UnsupportedExponent(stage.exponent)),
        };
    }
    Ok(cur)
}
