//! Weighted reductions as interchangeable strategies.
//!
//! Every member of the power-mean family (finite `p`, the geometric limit,
//! and the max/min limits) reduces a neighborhood of weighted samples to one
//! value. Filters, shading and compositing take a `&dyn Combiner` and do not
//! care which one they were handed; [`CombinerRegistry`] builds them by name
//! so front ends can select one at runtime.

use std::collections::BTreeMap;
use std::fmt;

use crate::accumulator::HMAccumulator;
use crate::element::HMElement;
use crate::error::{DomainKind, Error, Result};
use crate::exponent::Exponent;
use crate::ops::{arg_best, geometric_mean};
use crate::phased::PhasedComplex;

/// Amplitudes below this are raised to it before a negative power.
pub const DEFAULT_LIFT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: PhasedComplex,
    pub weight: f64,
}

impl Sample {
    pub fn new(value: PhasedComplex, weight: f64) -> Self {
        Self { value, weight }
    }

    pub fn real(value: f64, weight: f64) -> Self {
        Self::new(PhasedComplex::from_real(value), weight)
    }
}

pub trait Combiner: Send + Sync + fmt::Debug {
    /// Registry spelling of this strategy, e.g. `hm:2` or `max`.
    fn name(&self) -> String;

    fn exponent(&self) -> Exponent;

    /// Reduces the samples with strictly positive weight; the rest are ignored.
    fn combine(&self, samples: &[Sample]) -> Result<PhasedComplex>;
}

fn positive(samples: &[Sample]) -> impl Iterator<Item = &Sample> {
    samples.iter().filter(|s| s.weight > 0.0)
}

/// `(Σ wᵖ cᵖ / Σ wᵖ)^{1/p}` through the projective accumulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderMinkowski {
    p: f64,
    lift: Option<f64>,
}

impl HolderMinkowski {
    pub fn new(p: f64) -> Result<Self> {
        Exponent::finite(p)?;
        Ok(Self { p, lift: None })
    }

    /// Lift amplitudes below `floor` to `floor` when `p < 0`.
    pub fn with_lift(mut self, floor: Option<f64>) -> Self {
        self.lift = floor;
        self
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    fn prepare(&self, v: PhasedComplex) -> PhasedComplex {
        match self.lift {
            Some(floor) if self.p < 0.0 && v.amplitude() < floor => {
                PhasedComplex::new(floor, if v.is_zero() { 0.0 } else { v.phase() })
            }
            _ => v,
        }
    }
}

impl Combiner for HolderMinkowski {
    fn name(&self) -> String {
        format!("hm:{}", self.p)
    }

    fn exponent(&self) -> Exponent {
        Exponent::Finite(self.p)
    }

    fn combine(&self, samples: &[Sample]) -> Result<PhasedComplex> {
        let mut acc = HMAccumulator::new(self.p)?;
        for s in positive(samples) {
            let w = PhasedComplex::from_real(s.weight);
            acc.add(&HMElement::weighted_point(self.prepare(s.value), w))?;
        }
        if acc.count() == 0 {
            return Err(DomainKind::EmptyInput.into());
        }
        acc.project()
    }
}

fn extreme<F>(samples: &[Sample], better: F) -> Result<PhasedComplex>
where
    F: Fn(f64, f64) -> bool,
{
    let taps: Vec<&Sample> = positive(samples).collect();
    if taps.iter().any(|s| s.value.amplitude().is_nan()) {
        return Err(DomainKind::NonFinite.into());
    }
    let (winner, best) = arg_best(taps.iter().map(|s| s.weight * s.value.amplitude()), better)
        .ok_or(Error::Domain(DomainKind::EmptyInput))?;
    let max_w = taps
        .iter()
        .map(|s| s.weight)
        .fold(f64::NEG_INFINITY, f64::max);
    let phase = taps[winner].value.phase();
    Ok(PhasedComplex::new(best / max_w, phase))
}

/// `max(w·|c|) / max(w)`; the winning tap's phase is carried, first tap wins ties.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Maximum;

impl Combiner for Maximum {
    fn name(&self) -> String {
        "max".into()
    }

    fn exponent(&self) -> Exponent {
        Exponent::PosInfinity
    }

    fn combine(&self, samples: &[Sample]) -> Result<PhasedComplex> {
        extreme(samples, |s, b| s > b)
    }
}

/// `min(w·|c|) / max(w)`; phase handling as for [`Maximum`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Minimum;

impl Combiner for Minimum {
    fn name(&self) -> String {
        "min".into()
    }

    fn exponent(&self) -> Exponent {
        Exponent::NegInfinity
    }

    fn combine(&self, samples: &[Sample]) -> Result<PhasedComplex> {
        extreme(samples, |s, b| s < b)
    }
}

/// Weighted geometric mean; positive zero-phase samples only.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Geometric;

impl Combiner for Geometric {
    fn name(&self) -> String {
        "geo".into()
    }

    fn exponent(&self) -> Exponent {
        Exponent::GeometricLimit
    }

    fn combine(&self, samples: &[Sample]) -> Result<PhasedComplex> {
        let mut xs = Vec::new();
        let mut ws = Vec::new();
        for s in positive(samples) {
            xs.push(
                s.value
                    .as_nonnegative_real()
                    .ok_or(Error::Domain(DomainKind::PhasedInput))?,
            );
            ws.push(s.weight);
        }
        geometric_mean(&xs, &ws).map(PhasedComplex::from_real)
    }
}

/// Options shared by every factory.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CombinerOptions {
    /// Amplitude floor applied before negative powers; `None` lets zeros pole.
    pub lift: Option<f64>,
}

pub type CombinerFactory =
    Box<dyn Fn(Option<&str>, &CombinerOptions) -> Result<Box<dyn Combiner>> + Send + Sync>;

/// Name → factory table for [`Combiner`]s.
///
/// A spec is `name` or `name:arg`. A bare number is shorthand for `hm:<number>`,
/// and the exponent tokens `inf`, `-inf` and `geo` map to `max`, `min` and `geo`.
pub struct CombinerRegistry {
    factories: BTreeMap<String, CombinerFactory>,
}

impl CombinerRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(Option<&str>, &CombinerOptions) -> Result<Box<dyn Combiner>> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Box::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn resolve(&self, spec: &str, options: &CombinerOptions) -> Result<Box<dyn Combiner>> {
        let spec = spec.trim();
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => match spec {
                "inf" | "+inf" => ("max", None),
                "-inf" => ("min", None),
                s if s.parse::<f64>().is_ok() => ("hm", Some(s)),
                s => (s, None),
            },
        };
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownStrategy(spec.to_string()))?;
        factory(arg, options)
    }

    pub fn for_exponent(
        &self,
        p: Exponent,
        options: &CombinerOptions,
    ) -> Result<Box<dyn Combiner>> {
        let spec = match p {
            Exponent::Finite(p) => format!("hm:{p}"),
            Exponent::GeometricLimit => "geo".into(),
            Exponent::PosInfinity => "max".into(),
            Exponent::NegInfinity => "min".into(),
        };
        self.resolve(&spec, options)
    }
}

impl Default for CombinerRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register("hm", |arg, opts| {
            let arg =
                arg.ok_or_else(|| Error::Parse("`hm` needs an exponent, e.g. hm:2".into()))?;
            match arg.parse::<Exponent>()? {
                Exponent::Finite(p) => Ok(Box::new(HolderMinkowski::new(p)?.with_lift(opts.lift))),
                other => Err(Error::UnsupportedExponent(other)),
            }
        });
        reg.register("max", |_, _| Ok(Box::new(Maximum)));
        reg.register("min", |_, _| Ok(Box::new(Minimum)));
        reg.register("geo", |_, _| Ok(Box::new(Geometric)));
        reg
    }
}

impl fmt::Debug for CombinerRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factories.keys()).finish()
    }
}
