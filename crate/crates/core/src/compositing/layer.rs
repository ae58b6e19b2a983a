use super::blend::BlendFunction;
use crate::error::{Error, Result};
use crate::imageio::{FloatPlane, PhasedImage};
use crate::phased::PhasedComplex;

/// An image with coverage: premultiplied color `α·x`, a shared alpha plane,
/// and optional per-channel weights for the averaging blends.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub color: PhasedImage,
    pub alpha: Vec<f32>,
    pub weights: Option<FloatPlane>,
}

impl Layer {
    pub fn opaque(color: PhasedImage) -> Self {
        let n = color.width() * color.height();
        Self {
            color,
            alpha: vec![1.0; n],
            weights: None,
        }
    }

    /// Premultiplies a straight-color image by `alpha`.
    pub fn from_straight(straight: &PhasedImage, alpha: Vec<f32>) -> Result<Self> {
        let n = straight.width() * straight.height();
        if alpha.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "alpha has {} values, image {n} pixels",
                alpha.len()
            )));
        }
        let color = straight
            .try_map(|x, y, _, z| Ok(z.scale(f64::from(alpha[y * straight.width() + x]))))?;
        Ok(Self {
            color,
            alpha,
            weights: None,
        })
    }

    /// Builds a layer from a loaded image and its optional `.w.pfm` plane:
    /// a 1-channel plane is the alpha, a K-channel plane supplies per-channel
    /// weights (alpha is then their mean).
    pub fn from_planes(straight: &PhasedImage, plane: Option<FloatPlane>) -> Result<Self> {
        let Some(plane) = plane else {
            return Ok(Self::opaque(straight.clone()));
        };
        let (w, h, k) = (straight.width(), straight.height(), straight.channels());
        if (plane.width, plane.height) != (w, h) {
            return Err(Error::DimensionMismatch(
                "weight plane size differs from image".into(),
            ));
        }
        if plane.channels == 1 {
            return Self::from_straight(straight, plane.data);
        }
        if plane.channels != k {
            return Err(Error::DimensionMismatch(format!(
                "weight plane has {} channels, image {k}",
                plane.channels
            )));
        }
        let alpha = plane
            .data
            .chunks_exact(k)
            .map(|px| px.iter().sum::<f32>() / k as f32)
            .collect();
        let mut layer = Self::from_straight(straight, alpha)?;
        layer.weights = Some(plane);
        Ok(layer)
    }

    pub fn alpha_at(&self, x: usize, y: usize) -> f64 {
        f64::from(self.alpha[y * self.color.width() + x])
    }

    /// Straight (unpremultiplied) color; zero where alpha is zero.
    pub fn straight(&self) -> PhasedImage {
        let w = self.color.width();
        self.color
            .try_map(|x, y, _, z| {
                let a = f64::from(self.alpha[y * w + x]);
                Ok(if a == 0.0 {
                    PhasedComplex::ZERO
                } else {
                    z.scale(1.0 / a)
                })
            })
            .expect("unpremultiplying cannot fail")
    }

    fn check(&self, other: &Layer) -> Result<()> {
        self.color.check_shape(&other.color)
    }
}

/// Premultiplied over for one sample: `(P1 + (1-α1)·P0, α1 + (1-α1)·α0)`.
pub fn over_pixel(
    fg: PhasedComplex,
    fg_alpha: f64,
    bg: PhasedComplex,
    bg_alpha: f64,
) -> (PhasedComplex, f64) {
    let keep = 1.0 - fg_alpha;
    (fg.add(bg.scale(keep)), fg_alpha + keep * bg_alpha)
}

/// `fg` over `bg`. Associative, not commutative.
pub fn over(fg: &Layer, bg: &Layer) -> Result<Layer> {
    fg.check(bg)?;
    let w = fg.color.width();
    let mut alpha = vec![0f32; fg.alpha.len()];
    let color = fg.color.try_map(|x, y, c, p1| {
        let (p, a) = over_pixel(
            p1,
            fg.alpha_at(x, y),
            bg.color.get(x, y, c),
            bg.alpha_at(x, y),
        );
        alpha[y * w + x] = a as f32;
        Ok(p)
    })?;
    Ok(Layer {
        color,
        alpha,
        weights: None,
    })
}

/// `weight·(z0 + z1)` in Cartesian form, principal phase.
pub fn add_phase_pixel(z0: PhasedComplex, z1: PhasedComplex, weight: f64) -> PhasedComplex {
    PhasedComplex::from_complex((z0.to_complex() + z1.to_complex()) * weight)
}

/// Per-sample [`add_phase_pixel`]: interference of two phased images.
pub fn add_phase_composite(
    img0: &PhasedImage,
    img1: &PhasedImage,
    weight: f64,
) -> Result<PhasedImage> {
    img0.check_shape(img1)?;
    img0.try_map(|x, y, c, z0| Ok(add_phase_pixel(z0, img1.get(x, y, c), weight)))
}

/// Where the averaging blends take their weights from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightSource {
    /// Each layer's alpha is the weight for every channel.
    #[default]
    SharedAlpha,
    /// Each layer's per-channel weight plane.
    PerChannel,
}

/// `(α1·F(x1, x0) + (1-α1)·P0, α1 + (1-α1)·α0)` for one sample; `x1`, `x0`
/// are straight colors and `P0` is the premultiplied background.
#[allow(clippy::too_many_arguments)]
pub fn generalized_pixel(
    f: &dyn BlendFunction,
    fg: PhasedComplex,
    fg_alpha: f64,
    fg_weight: f64,
    bg: PhasedComplex,
    bg_alpha: f64,
    bg_weight: f64,
) -> Result<(PhasedComplex, f64)> {
    let straight_bg = if bg_alpha == 0.0 {
        PhasedComplex::ZERO
    } else {
        bg.scale(1.0 / bg_alpha)
    };
    let straight_fg = if fg_alpha == 0.0 {
        PhasedComplex::ZERO
    } else {
        fg.scale(1.0 / fg_alpha)
    };
    let blended = f.blend(straight_fg, fg_weight, straight_bg, bg_weight)?;
    let keep = 1.0 - fg_alpha;
    Ok((
        blended.scale(fg_alpha).add(bg.scale(keep)),
        fg_alpha + keep * bg_alpha,
    ))
}

/// Generalized compositing with blend function `f`.
pub fn generalized_composite(
    f: &dyn BlendFunction,
    fg: &Layer,
    bg: &Layer,
    weights: WeightSource,
) -> Result<Layer> {
    fg.check(bg)?;
    let planes = match weights {
        WeightSource::SharedAlpha => None,
        WeightSource::PerChannel => match (&fg.weights, &bg.weights) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => {
                return Err(Error::DimensionMismatch(
                    "per-channel weights requested but a layer has no weight plane".into(),
                ))
            }
        },
    };
    let w = fg.color.width();
    let mut alpha = vec![0f32; fg.alpha.len()];
    let color = fg.color.try_map(|x, y, c, p1| {
        let (a1, a0) = (fg.alpha_at(x, y), bg.alpha_at(x, y));
        let (w1, w0) = match planes {
            None => (a1, a0),
            Some((pf, pb)) => (f64::from(pf.get(x, y, c)), f64::from(pb.get(x, y, c))),
        };
        let (p, a) = generalized_pixel(f, p1, a1, w1, bg.color.get(x, y, c), a0, w0)?;
        alpha[y * w + x] = a as f32;
        Ok(p)
    })?;
    Ok(Layer {
        color,
        alpha,
        weights: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compositing::blend::{Add, BlendRegistry, HolderMinkowskiBlend, Maximum};
    use std::f64::consts::PI;

    fn layer(values: &[f32], alpha: &[f32]) -> Layer {
        let img = PhasedImage::from_amplitude(values.len(), 1, 1, values.to_vec()).unwrap();
        Layer::from_straight(&img, alpha.to_vec()).unwrap()
    }

    #[test]
    fn opaque_and_transparent_over() {
        let fg = layer(&[0.2, 0.7], &[1.0, 1.0]);
        let bg = layer(&[0.9, 0.1], &[0.5, 1.0]);
        let out = over(&fg, &bg).unwrap();
        assert_eq!(out.color, fg.color);
        assert_eq!(out.alpha, fg.alpha);

        let clear = layer(&[0.0, 0.0], &[0.0, 0.0]);
        let out = over(&clear, &bg).unwrap();
        assert_eq!(out.color, bg.color);
        assert_eq!(out.alpha, bg.alpha);
    }

    #[test]
    fn over_is_not_commutative() {
        let a = layer(&[1.0], &[0.5]);
        let b = layer(&[0.0], &[1.0]);
        let ab = over(&a, &b).unwrap();
        let ba = over(&b, &a).unwrap();
        assert!((ab.color.amplitude()[0] - 0.5).abs() < 1e-7);
        assert_eq!(ba.color.amplitude()[0], 0.0);
    }

    #[test]
    fn interference() {
        let one = PhasedComplex::ONE;
        assert!((add_phase_pixel(one, one, 0.5).amplitude() - 1.0).abs() < 1e-15);
        assert!(add_phase_pixel(one, PhasedComplex::new(1.0, PI), 0.5).amplitude() < 1e-15);
        let img0 = PhasedImage::from_planes(1, 1, 1, vec![1.0], vec![0.0]).unwrap();
        let img1 = PhasedImage::from_planes(2, 1, 1, vec![1.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert!(add_phase_composite(&img0, &img1, 0.5).is_err());
    }

    #[test]
    fn generalized_examples() {
        let fg = layer(&[0.5], &[1.0]);
        let bg = layer(&[0.9], &[1.0]);
        let add = generalized_composite(&Add, &fg, &bg, WeightSource::SharedAlpha).unwrap();
        assert!((add.color.amplitude()[0] - 1.4).abs() < 1e-6);
        let hm1 = HolderMinkowskiBlend::new(1.0).unwrap();
        let avg = generalized_composite(&hm1, &fg, &bg, WeightSource::SharedAlpha).unwrap();
        assert!((avg.color.amplitude()[0] - 0.7).abs() < 1e-6);
        let hm = HolderMinkowskiBlend::new(-1.0).unwrap();
        let harm = generalized_composite(&hm, &fg, &bg, WeightSource::SharedAlpha).unwrap();
        assert!((harm.color.amplitude()[0] - 0.642_857_1).abs() < 1e-6);
        assert!(generalized_composite(&hm, &fg, &bg, WeightSource::PerChannel).is_err());
    }

    #[test]
    fn generalized_max_rejects_phase() {
        let img = PhasedImage::from_planes(1, 1, 1, vec![0.5], vec![1.0]).unwrap();
        let fg = Layer::opaque(img);
        let bg = layer(&[0.9], &[1.0]);
        assert!(generalized_composite(&Maximum, &fg, &bg, WeightSource::SharedAlpha).is_err());
    }

    #[test]
    fn per_channel_weights() {
        let img = PhasedImage::from_amplitude(1, 1, 3, vec![0.2, 0.4, 0.6]).unwrap();
        let fg_plane = FloatPlane {
            width: 1,
            height: 1,
            channels: 3,
            data: vec![1.0, 1.0, 1.0],
        };
        let bg_plane = FloatPlane {
            width: 1,
            height: 1,
            channels: 3,
            data: vec![1.0, 3.0, 0.0],
        };
        let fg = Layer::from_planes(&img, Some(fg_plane)).unwrap();
        let bg_img = PhasedImage::from_amplitude(1, 1, 3, vec![1.0, 1.0, 1.0]).unwrap();
        let bg = Layer::from_planes(&bg_img, Some(bg_plane)).unwrap();
        assert!((bg.alpha[0] - 4.0 / 3.0).abs() < 1e-6);
        let hm = BlendRegistry::default().resolve("hm:1").unwrap();
        let out = generalized_composite(hm.as_ref(), &fg, &bg, WeightSource::PerChannel).unwrap();
        let a = out.color.amplitude();
        assert!((a[0] - 0.6).abs() < 1e-6);
        assert!((a[1] - (0.4 + 3.0) / 4.0).abs() < 1e-6);
        assert!((a[2] - 0.6).abs() < 1e-6);
    }

    #[test]
    fn over_pixel_is_associative() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let mut px = || {
                (
                    PhasedComplex::new(rng.gen_range(0.0..1.0), rng.gen_range(-PI..PI)),
                    rng.gen_range(0.0..1.0),
                )
            };
            let ((a, aa), (b, ba), (c, ca)) = (px(), px(), px());
            let (ab, aba) = over_pixel(a.scale(aa), aa, b.scale(ba), ba);
            let (left, la) = over_pixel(ab, aba, c.scale(ca), ca);
            let (bc, bca) = over_pixel(b.scale(ba), ba, c.scale(ca), ca);
            let (right, ra) = over_pixel(a.scale(aa), aa, bc, bca);
            assert!((left.to_complex() - right.to_complex()).norm() < 1e-12);
            assert!((la - ra).abs() < 1e-12);
        }
    }

    #[test]
    fn add_phase_laws() {
        let z = |r: f64, t: f64| PhasedComplex::new(r, t);
        let (a, b) = (z(0.3, 1.1), z(0.8, -2.5));
        assert_eq!(add_phase_pixel(a, b, 0.5), add_phase_pixel(b, a, 0.5));
        // dyadic zero-phase inputs keep every partial sum exact
        let (x, y, w) = (z(0.25, 0.0), z(0.5, 0.0), z(0.125, 0.0));
        let left = add_phase_pixel(add_phase_pixel(x, y, 1.0), w, 1.0);
        let right = add_phase_pixel(x, add_phase_pixel(y, w, 1.0), 1.0);
        assert_eq!(left, right);
        let (c, d) = (z(0.37, 0.0), z(0.91, 0.0));
        assert!((add_phase_pixel(c, d, 0.5).amplitude() - 0.5 * (0.37 + 0.91)).abs() < 1e-12);
    }

    #[test]
    fn hm_blend_stays_between_inputs() {
        let (lo, hi) = (
            PhasedComplex::from_real(0.2),
            PhasedComplex::from_real(0.85),
        );
        for p in [-3.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0] {
            let f = HolderMinkowskiBlend::new(p).unwrap();
            let (v, a) = generalized_pixel(&f, hi, 1.0, 1.0, lo, 1.0, 1.0).unwrap();
            assert_eq!(a, 1.0);
            assert!(
                v.amplitude() >= 0.2 - 1e-12 && v.amplitude() <= 0.85 + 1e-12,
                "p={p}"
            );
        }
    }

    #[test]
    fn straight_round_trip() {
        let l = layer(&[0.5, 0.25], &[0.5, 0.0]);
        let s = l.straight();
        assert!((s.amplitude()[0] - 0.5).abs() < 1e-7);
        assert_eq!(s.amplitude()[1], 0.0);
        assert!(Layer::from_straight(&s, vec![1.0]).is_err());
    }
}
