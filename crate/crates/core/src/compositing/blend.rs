use std::collections::BTreeMap;
use std::fmt;

use crate::combiner::{Combiner, HolderMinkowski, Sample};
use crate::error::{DomainKind, Error, Result};
use crate::exponent::Exponent;
use crate::phased::PhasedComplex;

/// The `F(x1, x0)` of a generalized composite.
///
/// Weights are only consulted by the averaging blends; the others ignore them.
pub trait BlendFunction: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn blend(
        &self,
        fg: PhasedComplex,
        fg_weight: f64,
        bg: PhasedComplex,
        bg_weight: f64,
    ) -> Result<PhasedComplex>;
}

/// `x1 + x0`; may leave the display range.
#[derive(Debug, Clone, Copy, Default)]
pub struct Add;

impl BlendFunction for Add {
    fn name(&self) -> String {
        "add".into()
    }

    fn blend(&self, fg: PhasedComplex, _: f64, bg: PhasedComplex, _: f64) -> Result<PhasedComplex> {
        Ok(fg.add(bg))
    }
}

/// `x1 · x0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Multiply;

impl BlendFunction for Multiply {
    fn name(&self) -> String {
        "mul".into()
    }

    fn blend(&self, fg: PhasedComplex, _: f64, bg: PhasedComplex, _: f64) -> Result<PhasedComplex> {
        Ok(fg * bg)
    }
}

fn real_pair(fg: PhasedComplex, bg: PhasedComplex) -> Result<(f64, f64)> {
    match (fg.as_nonnegative_real(), bg.as_nonnegative_real()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(DomainKind::PhasedInput.into()),
    }
}

/// `max(x1, x0)` on zero-phase inputs.
#[derive(Debug, Clone, Copy, Default)]
pub struct Maximum;

impl BlendFunction for Maximum {
    fn name(&self) -> String {
        "max".into()
    }

    fn blend(&self, fg: PhasedComplex, _: f64, bg: PhasedComplex, _: f64) -> Result<PhasedComplex> {
        let (a, b) = real_pair(fg, bg)?;
        Ok(if a >= b { fg } else { bg })
    }
}

/// `min(x1, x0)` on zero-phase inputs.
#[derive(Debug, Clone, Copy, Default)]
pub struct Minimum;

impl BlendFunction for Minimum {
    fn name(&self) -> String {
        "min".into()
    }

    fn blend(&self, fg: PhasedComplex, _: f64, bg: PhasedComplex, _: f64) -> Result<PhasedComplex> {
        let (a, b) = real_pair(fg, bg)?;
        Ok(if a <= b { fg } else { bg })
    }
}

/// The projected power mean of the two colors under their weights; `hm:1`
/// stands in for addition and `hm:-1` for multiplication without leaving
/// the input range.
#[derive(Debug, Clone, Copy)]
pub struct HolderMinkowskiBlend(HolderMinkowski);

impl HolderMinkowskiBlend {
    pub fn new(p: f64) -> Result<Self> {
        Ok(Self(HolderMinkowski::new(p)?))
    }
}

impl BlendFunction for HolderMinkowskiBlend {
    fn name(&self) -> String {
        self.0.name()
    }

    fn blend(
        &self,
        fg: PhasedComplex,
        fg_weight: f64,
        bg: PhasedComplex,
        bg_weight: f64,
    ) -> Result<PhasedComplex> {
        if fg_weight <= 0.0 && bg_weight <= 0.0 {
            return Ok(PhasedComplex::ZERO);
        }
        self.0
            .combine(&[Sample::new(fg, fg_weight), Sample::new(bg, bg_weight)])
    }
}

pub type BlendFactory = Box<dyn Fn(Option<&str>) -> Result<Box<dyn BlendFunction>> + Send + Sync>;

/// Name → factory table for [`BlendFunction`]s (`add`, `mul`, `max`, `min`, `hm:<p>`).
pub struct BlendRegistry {
    factories: BTreeMap<String, BlendFactory>,
}

impl BlendRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(Option<&str>) -> Result<Box<dyn BlendFunction>> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Box::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn resolve(&self, spec: &str) -> Result<Box<dyn BlendFunction>> {
        let (name, arg) = match spec.trim().split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec.trim(), None),
        };
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownStrategy(spec.to_string()))?;
        factory(arg)
    }
}

impl Default for BlendRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register("add", |_| Ok(Box::new(Add)));
        reg.register("mul", |_| Ok(Box::new(Multiply)));
        reg.register("max", |_| Ok(Box::new(Maximum)));
        reg.register("min", |_| Ok(Box::new(Minimum)));
        reg.register("hm", |arg| {
            let arg =
                arg.ok_or_else(|| Error::Parse("`hm` needs an exponent, e.g. hm:-1".into()))?;
            match arg.parse::<Exponent>()? {
                Exponent::Finite(p) => Ok(Box::new(HolderMinkowskiBlend::new(p)?)),
                other => Err(Error::UnsupportedExponent(other)),
            }
        });
        reg
    }
}

impl fmt::Debug for BlendRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factories.keys()).finish()
    }
}
