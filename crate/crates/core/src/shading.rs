//! Diffuse shading of a unit sphere under several point lights, with the
//! per-light terms `max(n·l, 0)` combined by H_p instead of summed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::combiner::{Combiner, CombinerOptions, CombinerRegistry, Sample, DEFAULT_LIFT};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::imageio::PhasedImage;
use crate::phased::PhasedComplex;

pub type Vec3 = [f64; 3];

/// Distance of preset lights from the sphere center.
pub const DEFAULT_RADIUS: f64 = 3.0;

/// Samples in [`terminator_profile`].
pub const PROFILE_SAMPLES: usize = 512;

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(v: Vec3) -> Vec3 {
    let n = dot(v, v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointLight {
    pub position: Vec3,
    pub intensity: Vec<f64>,
}

impl PointLight {
    pub fn new(position: Vec3, intensity: Vec<f64>) -> Result<Self> {
        if intensity.is_empty() || intensity.iter().any(|i| i.is_nan() || *i < 0.0) {
            return Err(Error::Parse(format!(
                "light intensity must be nonnegative, got {intensity:?}"
            )));
        }
        Ok(Self {
            position,
            intensity,
        })
    }

    /// Unit intensity, one channel.
    pub fn white(position: Vec3) -> Self {
        Self {
            position,
            intensity: vec![1.0],
        }
    }

    /// `max(n·l̂, 0)` at surface point `point` with normal `normal`.
    pub fn diffuse(&self, point: Vec3, normal: Vec3) -> f64 {
        let to_light = normalize([
            self.position[0] - point[0],
            self.position[1] - point[1],
            self.position[2] - point[2],
        ]);
        dot(normal, to_light).max(0.0)
    }
}

/// Light directions of a named preset, before scaling to the radius.
fn preset_directions(name: &str) -> Result<Vec<Vec3>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match name {
        "tetrahedron" => vec![
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ],
        "octahedron" => vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ],
        "grid3x3" => {
            let mut dirs = Vec::with_capacity(9);
            for j in [1.0, 0.0, -1.0] {
                for i in [-1.0, 0.0, 1.0] {
                    dirs.push([i, j, 1.0]);
                }
            }
            dirs
        }
        "pair" => vec![[h, 0.0, h], [-h, 0.0, h]],
        _ => return Err(Error::UnknownPreset(name.to_string())),
    })
}

pub const PRESETS: [&str; 4] = ["tetrahedron", "octahedron", "grid3x3", "pair"];

/// Unit-intensity lights at the preset's vertices, `radius` from the origin.
pub fn light_preset(name: &str, radius: f64) -> Result<Vec<PointLight>> {
    Ok(preset_directions(name)?
        .into_iter()
        .map(|d| {
            let d = normalize(d);
            PointLight::white([d[0] * radius, d[1] * radius, d[2] * radius])
        })
        .collect())
}

/// A unit sphere at the origin seen by an orthographic camera looking down
/// `-z`, rendered at `size × size`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    lights: Vec<PointLight>,
    weights: Vec<f64>,
    size: usize,
}

impl Scene {
    pub fn new(lights: Vec<PointLight>, size: usize) -> Result<Self> {
        let weights = vec![1.0; lights.len()];
        Self::with_weights(lights, weights, size)
    }

    pub fn with_weights(lights: Vec<PointLight>, weights: Vec<f64>, size: usize) -> Result<Self> {
        let Some(first) = lights.first() else {
            return Err(Error::Parse("a scene needs at least one light".into()));
        };
        let k = first.intensity.len();
        if lights.iter().any(|l| l.intensity.len() != k) {
            return Err(Error::DimensionMismatch(
                "lights have different channel counts".into(),
            ));
        }
        if weights.len() != lights.len() || weights.iter().any(|w| w.is_nan() || *w <= 0.0) {
            return Err(Error::Parse("need one positive weight per light".into()));
        }
        if size == 0 {
            return Err(Error::Parse("image size must be positive".into()));
        }
        Ok(Self {
            lights,
            weights,
            size,
        })
    }

    pub fn preset(name: &str, size: usize) -> Result<Self> {
        Self::new(light_preset(name, DEFAULT_RADIUS)?, size)
    }

    pub fn lights(&self) -> &[PointLight] {
        &self.lights
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn channels(&self) -> usize {
        self.lights[0].intensity.len()
    }

    /// The sphere point under pixel `(x, y)`, if any. Pixel centers span
    /// `[-1, 1]` with `+y` up.
    pub fn surface_point(&self, x: usize, y: usize) -> Option<Vec3> {
        let n = self.size as f64;
        let u = 2.0 * (x as f64 + 0.5) / n - 1.0;
        let v = 1.0 - 2.0 * (y as f64 + 0.5) / n;
        let r2 = u * u + v * v;
        (r2 <= 1.0).then(|| [u, v, (1.0 - r2).sqrt()])
    }

    /// Combined shade of one surface point, per channel.
    pub fn shade_point(&self, point: Vec3, combiner: &dyn Combiner) -> Result<Vec<f64>> {
        let terms: Vec<f64> = self
            .lights
            .iter()
            .map(|l| l.diffuse(point, point))
            .collect();
        let mut samples = Vec::with_capacity(terms.len());
        (0..self.channels())
            .map(|c| {
                samples.clear();
                samples.extend(
                    self.lights
                        .iter()
                        .zip(&terms)
                        .zip(&self.weights)
                        .map(|((l, d), w)| Sample::real(d * l.intensity[c], *w)),
                );
                Ok(combiner.combine(&samples)?.amplitude())
            })
            .collect()
    }
}

fn shading_combiner(p: Exponent, lift: bool) -> Result<Box<dyn Combiner>> {
    if p == Exponent::GeometricLimit {
        return Err(Error::UnsupportedExponent(p));
    }
    let opts = CombinerOptions {
        lift: lift.then_some(DEFAULT_LIFT),
    };
    CombinerRegistry::default().for_exponent(p, &opts)
}

/// Renders the scene with the per-light diffuse terms combined at exponent
/// `p`. Background pixels are zero. For `p < 0` a light facing away gives a
/// zero term and a domain error unless `lift` raises it to `1e-6`.
pub fn shade_diffuse(scene: &Scene, p: Exponent, lift: bool) -> Result<PhasedImage> {
    let combiner = shading_combiner(p, lift)?;
    let mut img = PhasedImage::zeros(scene.size, scene.size, scene.channels());
    for y in 0..scene.size {
        for x in 0..scene.size {
            let Some(point) = scene.surface_point(x, y) else {
                continue;
            };
            for (c, v) in scene
                .shade_point(point, combiner.as_ref())?
                .into_iter()
                .enumerate()
            {
                img.set(x, y, c, PhasedComplex::from_real(v));
            }
        }
    }
    Ok(img)
}

/// `(cosθ + 1) / 2`.
pub fn half_lambert(cos_theta: f64) -> f64 {
    (cos_theta + 1.0) / 2.0
}

/// `(((cosθ+1)ᵖ + 1)^{1/p} − 1) / ((2ᵖ + 1)^{1/p} − 1)`, which tends to
/// `max(cosθ, 0)` as `p` grows.
pub fn max_approx(cos_theta: f64, p: f64) -> f64 {
    let num = ((cos_theta + 1.0).powf(p) + 1.0).powf(1.0 / p) - 1.0;
    let den = (2f64.powf(p) + 1.0).powf(1.0 / p) - 1.0;
    num / den
}

/// Linear opacity ramp: 1 at `-width`, 0.5 on the boundary, 0 at `+width`.
pub fn shadow_ramp(signed_distance: f64, width: f64) -> f64 {
    (0.5 - signed_distance / width).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub angle: f64,
    pub terms: [f64; 2],
    pub shade: f64,
}

/// Shade along the great circle `y = 0` from `φ = -π/2` to `π/2` under the
/// `pair` preset, equal weights.
pub fn terminator_profile(p: Exponent, samples: usize) -> Result<Vec<ProfileSample>> {
    let scene = Scene::preset("pair", 1)?;
    let combiner = shading_combiner(p, true)?;
    (0..samples)
        .map(|k| {
            let angle = if samples > 1 {
                -std::f64::consts::FRAC_PI_2
                    + std::f64::consts::PI * k as f64 / (samples - 1) as f64
            } else {
                0.0
            };
            let point = [angle.sin(), 0.0, angle.cos()];
            let terms = [
                scene.lights[0].diffuse(point, point),
                scene.lights[1].diffuse(point, point),
            ];
            let shade = scene.shade_point(point, combiner.as_ref())?[0];
            Ok(ProfileSample {
                angle,
                terms,
                shade,
            })
        })
        .collect()
}

/// Index of the first sample where the first light's term becomes zero or
/// stops being zero.
pub fn terminator_index(profile: &[ProfileSample]) -> Option<usize> {
    (1..profile.len()).find(|&k| (profile[k - 1].terms[0] == 0.0) != (profile[k].terms[0] == 0.0))
}

/// Largest `|s[k+1] − 2s[k] + s[k−1]|` for `k` within `window` of `center`.
pub fn max_second_difference(profile: &[ProfileSample], center: usize, window: usize) -> f64 {
    let lo = center.saturating_sub(window).max(1);
    let hi = (center + window).min(profile.len().saturating_sub(1));
    (lo..hi)
        .map(|k| (profile[k + 1].shade - 2.0 * profile[k].shade + profile[k - 1].shade).abs())
        .fold(0.0, f64::max)
}

pub fn profile_csv(profile: &[ProfileSample]) -> String {
    let mut out = String::from("index,angle,d0,d1,shade\n");
    for (i, s) in profile.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{}",
            s.angle, s.terms[0], s.terms[1], s.shade
        );
    }
    out
}

/// Scene description read from `key = value` lines.
///
/// Keys: `size`, `preset`, `radius`, `p`, `lift` (true/false), `intensity`
/// (comma-separated channels, all lights), `intensity.<i>` and `weight.<i>`
/// for light `i`. `#` starts a comment.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub size: usize,
    pub preset: String,
    pub radius: f64,
    pub exponent: Option<Exponent>,
    pub lift: bool,
    pub intensity: Option<Vec<f64>>,
    pub light_intensity: BTreeMap<usize, Vec<f64>>,
    pub light_weight: BTreeMap<usize, f64>,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            size: 256,
            preset: "tetrahedron".into(),
            radius: DEFAULT_RADIUS,
            exponent: None,
            lift: false,
            intensity: None,
            light_intensity: BTreeMap::new(),
            light_weight: BTreeMap::new(),
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("bad value `{value}` for `{key}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value.split(',').map(|v| parse_num(key, v.trim())).collect()
}

impl FromStr for SceneConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for line in s.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Parse(format!("expected key = value, got `{line}`")))?;
            match key {
                "size" => cfg.size = parse_num(key, value)?,
                "preset" => cfg.preset = value.to_string(),
                "radius" => cfg.radius = parse_num(key, value)?,
                "p" => cfg.exponent = Some(value.parse()?),
                "lift" => cfg.lift = parse_num(key, value)?,
                "intensity" => cfg.intensity = Some(parse_list(key, value)?),
                _ => {
                    let (kind, index) = key
                        .split_once('.')
                        .ok_or_else(|| Error::Parse(format!("unknown scene key `{key}`")))?;
                    let index: usize = parse_num(key, index)?;
                    match kind {
                        "intensity" => {
                            cfg.light_intensity.insert(index, parse_list(key, value)?);
                        }
                        "weight" => {
                            cfg.light_weight.insert(index, parse_num(key, value)?);
                        }
                        _ => return Err(Error::Parse(format!("unknown scene key `{key}`"))),
                    }
                }
            }
        }
        Ok(cfg)
    }
}

impl SceneConfig {
    pub fn to_scene(&self) -> Result<Scene> {
        let mut lights = light_preset(&self.preset, self.radius)?;
        let n = lights.len();
        if let Some(&i) = self
            .light_intensity
            .keys()
            .chain(self.light_weight.keys())
            .find(|&&i| i >= n)
        {
            return Err(Error::Parse(format!(
                "light index {i} out of range for {n} lights"
            )));
        }
        for (i, light) in lights.iter_mut().enumerate() {
            if let Some(v) = self.light_intensity.get(&i).or(self.intensity.as_ref()) {
                *light = PointLight::new(light.position, v.clone())?;
            }
        }
        let weights = (0..n)
            .map(|i| self.light_weight.get(&i).copied().unwrap_or(1.0))
            .collect();
        Scene::with_weights(lights, weights, self.size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_sizes() {
        for (name, n) in [
            ("tetrahedron", 4),
            ("octahedron", 6),
            ("grid3x3", 9),
            ("pair", 2),
        ] {
            let lights = light_preset(name, 3.0).unwrap();
            assert_eq!(lights.len(), n);
            for l in &lights {
                assert!((dot(l.position, l.position).sqrt() - 3.0).abs() < 1e-12);
            }
        }
        assert!(matches!(
            light_preset("cube", 3.0),
            Err(Error::UnknownPreset(_))
        ));
    }

    #[test]
    fn head_on_light_is_idempotent() {
        let scene = Scene::new(vec![PointLight::white([0.0, 0.0, 3.0])], 1).unwrap();
        for p in ["1", "2", "-1", "0.5", "inf", "-inf"] {
            let img = shade_diffuse(&scene, p.parse().unwrap(), false).unwrap();
            assert!((img.amplitude()[0] - 1.0).abs() < 1e-6, "p={p}");
        }
    }

    #[test]
    fn two_light_examples() {
        let s = [Sample::real(0.6, 1.0), Sample::real(0.8, 1.0)];
        let c = shading_combiner(Exponent::Finite(2.0), false).unwrap();
        assert!((c.combine(&s).unwrap().amplitude() - 0.5f64.sqrt()).abs() < 1e-12);
        let s = [Sample::real(0.2, 1.0), Sample::real(0.9, 1.0)];
        let c = shading_combiner(Exponent::PosInfinity, false).unwrap();
        assert_eq!(c.combine(&s).unwrap().amplitude(), 0.9);
    }

    #[test]
    fn arithmetic_mean_at_p1() {
        let scene = Scene::preset("octahedron", 16).unwrap();
        let combiner = shading_combiner(Exponent::Finite(1.0), false).unwrap();
        for y in 0..16 {
            for x in 0..16 {
                let Some(pt) = scene.surface_point(x, y) else {
                    continue;
                };
                let mean = scene
                    .lights()
                    .iter()
                    .map(|l| l.diffuse(pt, pt))
                    .sum::<f64>()
                    / 6.0;
                let shade = scene.shade_point(pt, combiner.as_ref()).unwrap()[0];
                assert!((shade - mean).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn negative_p_needs_lift() {
        let scene = Scene::preset("octahedron", 8).unwrap();
        assert!(shade_diffuse(&scene, Exponent::Finite(-1.0), false).is_err());
        assert!(shade_diffuse(&scene, Exponent::Finite(-1.0), true).is_ok());
        assert!(shade_diffuse(&scene, Exponent::GeometricLimit, true).is_err());
    }

    #[test]
    fn background_is_zero() {
        let img = shade_diffuse(
            &Scene::preset("tetrahedron", 8).unwrap(),
            Exponent::Finite(2.0),
            false,
        )
        .unwrap();
        assert_eq!(img.get(0, 0, 0).amplitude(), 0.0);
    }

    #[test]
    fn scalar_formulas() {
        assert_eq!(half_lambert(0.0), 0.5);
        assert_eq!(half_lambert(-1.0), 0.0);
        assert_eq!(half_lambert(1.0), 1.0);
        for p in [1.0, 2.0, 7.5, 32.0] {
            assert!(max_approx(-1.0, p).abs() < 1e-12);
            assert!((max_approx(1.0, p) - 1.0).abs() < 1e-12);
        }
        assert!((max_approx(0.0, 1.0) - 0.5).abs() < 1e-12);
        assert!(max_approx(0.0, 32.0) <= 0.05);
        assert_eq!(shadow_ramp(-2.0, 2.0), 1.0);
        assert_eq!(shadow_ramp(2.0, 2.0), 0.0);
        assert_eq!(shadow_ramp(0.0, 2.0), 0.5);
    }

    #[test]
    fn profile_matches_oracle() {
        let p1 = terminator_profile(Exponent::Finite(1.0), PROFILE_SAMPLES).unwrap();
        let p2 = terminator_profile(Exponent::Finite(2.0), PROFILE_SAMPLES).unwrap();
        let t = terminator_index(&p1).unwrap();
        assert_eq!(t, 184);
        assert!((max_second_difference(&p1, t, 16) - 0.002965609597822272).abs() < 1e-12);
        assert!((max_second_difference(&p2, t, 16) - 4.96704106124346e-05).abs() < 1e-12);
        assert!(profile_csv(&p1[..2]).starts_with("index,angle,d0,d1,shade\n0,"));
    }

    #[test]
    fn config_round_trip() {
        let cfg: SceneConfig = "size = 4\npreset = pair # two lights\nradius=5\np = -inf\nlift = true\nintensity = 1,0.5,0.25\nweight.1 = 2\nintensity.0 = 0,0,1\n"
            .parse()
            .unwrap();
        assert_eq!(cfg.exponent, Some(Exponent::NegInfinity));
        let scene = cfg.to_scene().unwrap();
        assert_eq!(scene.size(), 4);
        assert_eq!(scene.channels(), 3);
        assert_eq!(scene.weights(), [1.0, 2.0]);
        assert_eq!(scene.lights()[0].intensity, [0.0, 0.0, 1.0]);
        assert_eq!(scene.lights()[1].intensity, [1.0, 0.5, 0.25]);
        assert!("weight.5 = 1"
            .parse::<SceneConfig>()
            .unwrap()
            .to_scene()
            .is_err());
        assert!("colour = red".parse::<SceneConfig>().is_err());
        assert!("p = 0".parse::<SceneConfig>().is_err());
    }
}
