//! Seeded property suites over the algebra, the affine toolkit and the
//! filters. Every suite draws from its own ChaCha stream, so a report depends
//! only on the seed and the case count.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::accumulator::HMAccumulator;
use crate::affine::{line_point, partition_coefficients, sum_project, AffinePoint};
use crate::element::HMElement;
use crate::exponent::Exponent;
use crate::filter::{dilate, erode, hm_filter, Kernel};
use crate::imageio::PhasedImage;
use crate::ops::{classical_check, hm_combine, hm_inverse, weighted_mean};
use crate::phased::PhasedComplex;

/// Exponents every algebraic law is checked at.
pub const LAW_EXPONENTS: [f64; 7] = [-3.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0];

/// Relative tolerance for associativity and scale invariance.
pub const LAW_TOLERANCE: f64 = 1e-10;

/// Slack on the averaging and monotonicity bounds.
pub const BOUND_SLACK: f64 = 1e-12;

/// Relative tolerance for inverse residuals and closed forms.
pub const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {} cases {}", self.seed, self.cases)?;
        for s in &self.suites {
            let status = if s.passed() { "PASS" } else { "FAIL" };
            write!(
                f,
                "{status} {:<28} {:>8} checks {:>6} failures",
                s.name, s.checks, s.failures
            )?;
            if let Some(d) = &s.first_failure {
                write!(f, "  first: {d}")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all suites passed"
            } else {
                "some suites failed"
            }
        )
    }
}

type SuiteFn = fn(&mut ChaCha8Rng, usize, &mut SuiteReport);

/// `(name, body)` for every suite, in report order.
pub const SUITES: [(&str, SuiteFn); 12] = [
    ("weak-averaging", weak_averaging),
    ("associativity", associativity),
    ("scale-invariance", scale_invariance),
    ("monotonicity", monotonicity),
    ("identity", identity),
    ("inverse", inverse),
    ("partition-of-unity", partition_of_unity),
    ("line-through-two-points", line_through_two_points),
    ("addition-associativity", addition_associativity),
    ("closed-forms", closed_forms),
    ("limit-consistency", limit_consistency),
    ("filter-oracle", filter_oracle),
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(n, _)| *n)
}

/// Runs one suite by name with `cases` random cases (per exponent for the
/// algebraic laws).
pub fn run_suite(name: &str, seed: u64, cases: usize) -> Option<SuiteReport> {
    let (index, (name, body)) = SUITES.iter().enumerate().find(|(_, (n, _))| *n == name)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut report = SuiteReport::new(name);
    body(&mut rng, cases, &mut report);
    Some(report)
}

pub fn run_all(seed: u64, cases: usize) -> VerifyReport {
    let suites = suite_names()
        .map(|n| run_suite(n, seed, cases).expect("listed suite"))
        .collect();
    VerifyReport {
        seed,
        cases,
        suites,
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

fn component(rng: &mut ChaCha8Rng) -> f64 {
    log_uniform(rng, 1e-3, 1e3)
}

/// A positive-real point with both parts in `[1e-3, 1e3]`.
fn point(rng: &mut ChaCha8Rng) -> HMElement {
    HMElement::real(component(rng), component(rng))
}

fn rel_close(a: PhasedComplex, b: PhasedComplex, tol: f64) -> bool {
    let (a, b) = (a.to_complex(), b.to_complex());
    (a - b).norm() <= tol * a.norm().max(b.norm())
}

fn ratio(v: &HMElement) -> f64 {
    v.x.amplitude() / v.a.amplitude()
}

fn projected(p: f64, vs: &[&HMElement]) -> crate::Result<PhasedComplex> {
    let mut acc = HMAccumulator::new(p)?;
    for v in vs {
        acc.add(v)?;
    }
    acc.project()
}

fn weak_averaging(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    for &p in &LAW_EXPONENTS {
        for _ in 0..cases {
            let (v0, v1) = (point(rng), point(rng));
            let (lo, hi) = (ratio(&v0).min(ratio(&v1)), ratio(&v0).max(ratio(&v1)));
            let c = hm_combine(p, &v0, &v1).and_then(|v| v.project());
            let ok = matches!(&c, Ok(c) if c.amplitude() >= lo * (1.0 - BOUND_SLACK)
                && c.amplitude() <= hi * (1.0 + BOUND_SLACK)
                && c.phase().abs() <= BOUND_SLACK);
            r.check(ok, || format!("p={p} {v0:?} {v1:?} -> {c:?}"));
        }
    }
}

fn associativity(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    for &p in &LAW_EXPONENTS {
        for _ in 0..cases {
            let (v0, v1, v2) = (point(rng), point(rng), point(rng));
            let left = hm_combine(p, &v0, &v1)
                .and_then(|l| hm_combine(p, &l, &v2))
                .and_then(|v| v.project());
            let right = hm_combine(p, &v1, &v2)
                .and_then(|l| hm_combine(p, &v0, &l))
                .and_then(|v| v.project());
            let swapped = hm_combine(p, &v1, &v0)
                .and_then(|l| hm_combine(p, &v2, &l))
                .and_then(|v| v.project());
            let ok = match (&left, &right, &swapped) {
                (Ok(a), Ok(b), Ok(c)) => {
                    rel_close(*a, *b, LAW_TOLERANCE) && rel_close(*a, *c, LAW_TOLERANCE)
                }
                _ => false,
            };
            r.check(ok, || {
                format!("p={p}: {left:?} vs {right:?} vs {swapped:?}")
            });
        }
    }
}

fn scale_invariance(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    for &p in &LAW_EXPONENTS {
        for _ in 0..cases {
            let (v0, v1) = (point(rng), point(rng));
            let s = log_uniform(rng, 1e-3, 1e3);
            let scaled = |v: &HMElement| HMElement::new(v.x.scale(s), v.a);
            let base = projected(p, &[&v0, &v1]);
            let moved = projected(p, &[&scaled(&v0), &scaled(&v1)]);
            let ok = match (&base, &moved) {
                (Ok(b), Ok(m)) => rel_close(b.scale(s), *m, LAW_TOLERANCE),
                _ => false,
            };
            r.check(ok, || format!("p={p} s={s}: {base:?} {moved:?}"));
        }
    }
}

fn monotonicity(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    for &p in &LAW_EXPONENTS {
        for _ in 0..cases {
            let v0 = point(rng);
            let a1 = component(rng);
            let (z0, z1) = (component(rng), component(rng));
            let (z0, z1) = (z0.min(z1), z0.max(z1));
            let f =
                |z: f64| projected(p, &[&v0, &HMElement::real(a1 * z, a1)]).map(|c| c.amplitude());
            let ok = matches!((f(z0), f(z1)), (Ok(lo), Ok(hi)) if hi >= lo * (1.0 - BOUND_SLACK));
            r.check(ok, || format!("p={p} z0={z0} z1={z1}"));
        }
    }
}

fn identity(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    for &p in &LAW_EXPONENTS {
        for _ in 0..cases {
            let v = point(rng);
            let right = hm_combine(p, &v, &HMElement::IDENTITY);
            let left = hm_combine(p, &HMElement::IDENTITY, &v);
            let ok = matches!((&right, &left), (Ok(a), Ok(b)) if *a == v && *b == v);
            r.check(ok, || format!("p={p} {v:?} -> {right:?}"));
        }
    }
}

fn inverse(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    for &p in &LAW_EXPONENTS {
        for _ in 0..cases {
            let v = point(rng);
            for n in 0..3 {
                let residual = hm_inverse(&v, p, n)
                    .and_then(|inv| HMAccumulator::new(p)?.with(&v)?.with(&inv));
                let ok = match &residual {
                    Ok(acc) => {
                        let (xs, as_) = (v.x.pow(p), v.a.pow(p));
                        match (xs, as_) {
                            (Ok(xs), Ok(as_)) => {
                                acc.x_sum().norm() <= EXACT_TOLERANCE * xs.amplitude()
                                    && acc.a_sum().norm() <= EXACT_TOLERANCE * as_.amplitude()
                            }
                            _ => false,
                        }
                    }
                    Err(_) => false,
                };
                r.check(ok, || format!("p={p} n={n} {v:?}"));
            }
        }
    }
}

fn partition_of_unity(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    for _ in 0..cases {
        let k = rng.gen_range(1..8);
        let weights: Vec<f64> = (0..k).map(|_| component(rng)).collect();
        let values: Vec<f64> = (0..k).map(|_| rng.gen_range(-100.0..100.0)).collect();
        let Ok(coeffs) = partition_coefficients(&weights) else {
            r.check(false, || format!("{weights:?} rejected"));
            continue;
        };
        let in_range = coeffs.iter().all(|c| (0.0..=1.0).contains(c));
        let sums_to_one = (coeffs.iter().sum::<f64>() - 1.0).abs() <= EXACT_TOLERANCE;
        let points: Vec<_> = values
            .iter()
            .zip(&weights)
            .map(|(v, w)| AffinePoint::new(vec![*v], *w))
            .collect();
        let mixed: f64 = coeffs.iter().zip(&values).map(|(c, v)| c * v).sum();
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let agrees = matches!(sum_project(&points), Ok(v) if (v[0] - mixed).abs() <= EXACT_TOLERANCE * scale);
        r.check(in_range && sums_to_one && agrees, || {
            format!("weights {weights:?}")
        });
    }
}

fn line_through_two_points(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    for _ in 0..cases {
        let x0 = rng.gen_range(-100.0..100.0);
        let x1 = rng.gen_range(-100.0..100.0);
        let mut s1: f64 = rng.gen_range(-5.0..5.0);
        if (1.0 + s1).abs() < 1e-3 {
            s1 = 0.0;
        }
        let direct = line_point(&[x0], &[x1], s1);
        let summed = sum_project(&[
            AffinePoint::new(vec![x0], 1.0),
            AffinePoint::new(vec![x1], s1),
        ]);
        let ok = match (&direct, &summed) {
            (Ok(d), Ok(s)) => {
                let scale = x0.abs().max(x1.abs()).max(1.0) * (1.0 + 1.0 / (1.0 + s1).abs());
                let on_segment =
                    s1 < 0.0 || (d[0] >= x0.min(x1) - 1e-9 && d[0] <= x0.max(x1) + 1e-9);
                (d[0] - s[0]).abs() <= 1e-12 * scale && on_segment
            }
            _ => false,
        };
        r.check(ok, || {
            format!("x0={x0} x1={x1} s1={s1}: {direct:?} {summed:?}")
        });
    }
}

fn addition_associativity(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    let int_point = |rng: &mut ChaCha8Rng| {
        let v = (0..3)
            .map(|_| f64::from(rng.gen_range(-255..=255)))
            .collect();
        AffinePoint::new(v, f64::from(rng.gen_range(-8..=8)))
    };
    let add = |a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)| {
        (
            a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect::<Vec<_>>(),
            a.1 + b.1,
        )
    };
    for _ in 0..cases {
        let (p0, p1, p2) = (int_point(rng), int_point(rng), int_point(rng));
        let raw = |p: &AffinePoint| (p.coefficients(), p.weight);
        let (Ok(s01), Ok(s12), Ok(s10)) = (p0.add(&p1), p1.add(&p2), p1.add(&p0)) else {
            r.check(false, || "length mismatch".into());
            continue;
        };
        let left = add(&s01, &raw(&p2));
        let right = add(&raw(&p0), &s12);
        let inverse = p0.add(&p0.negated());
        let cancels = matches!(inverse, Ok((c, w)) if w == 0.0 && c.iter().all(|x| *x == 0.0));
        r.check(left == right && s01 == s10 && cancels, || {
            format!("{p0:?} {p1:?} {p2:?}")
        });
    }
}

fn closed_forms(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    for _ in 0..cases {
        let (v0, v1) = (point(rng), point(rng));
        for p in [1.0, -1.0] {
            let via_hm = hm_combine(p, &v0, &v1).and_then(|v| v.project());
            let closed = classical_check(p, &v0, &v1);
            let ok =
                matches!((&via_hm, &closed), (Ok(a), Ok(b)) if rel_close(*a, *b, EXACT_TOLERANCE));
            r.check(ok, || {
                format!("p={p} {v0:?} {v1:?}: {via_hm:?} vs {closed:?}")
            });
        }
    }
    if cases > 0 {
        let geo = weighted_mean(Exponent::Finite(1e-4), &[4.0, 9.0], &[1.0, 1.0]);
        r.check(matches!(geo, Ok(g) if (g - 6.0).abs() <= 1e-3), || {
            format!("p=1e-4 on 4, 9 gave {geo:?}")
        });
    }
}

fn limit_consistency(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    let grid = [-64.0, -8.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 8.0, 64.0];
    for _ in 0..cases {
        let k = rng.gen_range(2..4);
        let xs: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
        let ws = vec![1.0; k];
        let means: Vec<f64> = grid
            .iter()
            .filter_map(|&p| weighted_mean(Exponent::Finite(p), &xs, &ws).ok())
            .collect();
        let geo = weighted_mean(Exponent::GeometricLimit, &xs, &ws);
        let (max, min) = (
            weighted_mean(Exponent::PosInfinity, &xs, &ws),
            weighted_mean(Exponent::NegInfinity, &xs, &ws),
        );
        let ok = match (geo, max, min) {
            (Ok(geo), Ok(max), Ok(min)) if means.len() == grid.len() => {
                let slack = |v: f64| v * BOUND_SLACK;
                means.windows(2).all(|w| w[1] >= w[0] - slack(w[0]))
                    && means[4] <= geo + slack(geo)
                    && geo <= means[5] + slack(geo)
                    && (means[grid.len() - 1] - max).abs() <= 2e-2
                    && (means[0] - min).abs() <= 2e-2
                    && min <= means[0] + slack(min)
                    && means[grid.len() - 1] <= max + slack(max)
            }
            _ => false,
        };
        r.check(ok, || format!("{xs:?}: {means:?}"));
    }
}

fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> PhasedImage {
    PhasedImage::from_fn(w, h, 1, |_, _, _| {
        PhasedComplex::from_real(f64::from(rng.gen_range(0.1f32..1.0)))
    })
}

fn random_kernel(rng: &mut ChaCha8Rng) -> Kernel {
    let (n, m) = (rng.gen_range(0..3), rng.gen_range(0..3));
    let mut weights: Vec<f64> = (0..(2 * n + 1) * (2 * m + 1))
        .map(|_| {
            if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen_range(0.0..1.0)
            }
        })
        .collect();
    let center = n * (2 * m + 1) + m;
    weights[center] = weights[center].max(0.5);
    Kernel::new(n, m, weights).expect("positive center tap")
}

/// Neighborhood taps `(value, weight)` around `(x, y)`, clamped to the edge.
fn neighborhood(img: &PhasedImage, k: &Kernel, x: usize, y: usize) -> Vec<(f64, f64)> {
    let (n, m) = k.half_extents();
    let mut taps = Vec::new();
    for i in 0..=2 * n {
        for j in 0..=2 * m {
            let w = k.weight(i, j);
            if w > 0.0 {
                let sx = (x + i).saturating_sub(n).min(img.width() - 1);
                let sy = (y + j).saturating_sub(m).min(img.height() - 1);
                taps.push((f64::from(img.amplitude()[img.index(sx, sy, 0)]), w));
            }
        }
    }
    taps
}

fn filter_oracle(rng: &mut ChaCha8Rng, cases: usize, r: &mut SuiteReport) {
    for _ in 0..cases {
        let (w, h) = (rng.gen_range(1..9), rng.gen_range(1..9));
        let img = random_image(rng, w, h);
        let kernel = random_kernel(rng);
        let (dil, ero) = (dilate(&img, &kernel), erode(&img, &kernel));
        let blur = hm_filter(&img, &kernel, 1.0);
        let mut ok = blur.is_ok();
        for y in 0..h {
            for x in 0..w {
                let taps = neighborhood(&img, &kernel, x, y);
                let max_w = taps.iter().map(|t| t.1).fold(0.0, f64::max);
                let hi = taps
                    .iter()
                    .map(|(v, w)| v * w)
                    .fold(f64::NEG_INFINITY, f64::max)
                    / max_w;
                let lo = taps
                    .iter()
                    .map(|(v, w)| v * w)
                    .fold(f64::INFINITY, f64::min)
                    / max_w;
                let mean = taps.iter().map(|(v, w)| v * w).sum::<f64>()
                    / taps.iter().map(|t| t.1).sum::<f64>();
                let i = img.index(x, y, 0);
                ok &= dil.amplitude()[i] == hi as f32;
                ok &= ero.amplitude()[i] == lo as f32;
                if let Ok(b) = &blur {
                    ok &= (f64::from(b.amplitude()[i]) - mean).abs() <= 1e-6 * mean;
                }
            }
        }
        r.check(ok, || format!("{w}x{h} image, kernel {kernel:?}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_small() {
        let report = run_all(1, 40);
        assert!(report.passed(), "{report}");
        assert_eq!(report.suites.len(), SUITES.len());
    }

    #[test]
    fn zero_cases_is_vacuous() {
        let report = run_all(9, 0);
        assert!(report.passed());
        assert!(report.suites.iter().all(|s| s.checks == 0));
    }

    #[test]
    fn deterministic() {
        assert_eq!(run_all(42, 10).to_string(), run_all(42, 10).to_string());
        assert!(run_suite("no-such-suite", 0, 1).is_none());
    }

    #[test]
    fn failures_are_reported() {
        let mut r = SuiteReport::new("demo");
        r.check(true, || unreachable!());
        r.check(false, || "first".into());
        r.check(false, || "second".into());
        assert_eq!((r.checks, r.failures), (3, 2));
        assert_eq!(r.first_failure.as_deref(), Some("first"));
        let report = VerifyReport {
            seed: 0,
            cases: 1,
            suites: vec![r],
        };
        assert!(!report.passed());
        assert!(report.to_string().contains("FAIL demo"));
    }
}
