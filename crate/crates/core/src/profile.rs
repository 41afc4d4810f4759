//! One-dimensional multiplier profiles `m`.

use crate::error::{LabError, Result};
use crate::sampled::SampledFunction;
use std::fmt;
use std::sync::Arc;

/// A bounded real profile `m`, used as `m(|xi|)` on the Euclidean side and as
/// `m(<xi, eta>)` on the sphere.
#[derive(Clone)]
pub enum Profile {
    Constant(f64),
    /// Indicator of `[0, 1]`: the ball multiplier.
    Ball,
    /// Indicator of `[0, t0)`.
    Step(f64),
    /// `m(t) = t`.
    Linear,
    /// Linear interpolation of samples, held constant beyond the ends.
    Tabulated(SampledFunction),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant(c) => write!(f, "Constant({c})"),
            Profile::Ball => write!(f, "Ball"),
            Profile::Step(t) => write!(f, "Step({t})"),
            Profile::Linear => write!(f, "Linear"),
            Profile::Tabulated(s) => write!(f, "Tabulated({} samples)", s.len()),
            Profile::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Profile {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Profile::Custom(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Ball => {
                if (0.0..=1.0).contains(&t) {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Step(t0) => {
                if t >= 0.0 && t < *t0 {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Linear => t,
            Profile::Tabulated(s) => {
                let tc = t.clamp(s.start(), s.end());
                s.eval(tc).re
            }
            Profile::Custom(f) => f(t),
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Profile::Constant(c) => Some(*c),
            _ => None,
        }
    }

    /// Points where the profile may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile::Ball => vec![0.0, 1.0],
            Profile::Step(t0) => vec![0.0, *t0],
            _ => Vec::new(),
        }
    }

    /// Parses `ball`, `step[:t0]`, `const:c`, `linear` or `file:path.csv`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let num = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| LabError::invalid(format!("profile {spec:?} needs a value")))?
                .parse::<f64>()
                .map_err(|e| LabError::invalid(format!("profile {spec:?}: {e}")))
        };
        match head {
            "ball" => Ok(Profile::Ball),
            "step" => Ok(Profile::Step(match arg {
                Some(_) => num(arg)?,
                None => 1.0,
            })),
            "const" => Ok(Profile::Constant(num(arg)?)),
            "one" => Ok(Profile::Constant(1.0)),
            "linear" => Ok(Profile::Linear),
            "file" => {
                let path = arg.ok_or_else(|| LabError::invalid("file: needs a path"))?;
                let f = std::fs::File::open(path)?;
                let s = SampledFunction::read_csv(f)?;
                if !s.is_real() {
                    return Err(LabError::invalid("profile samples must be real"));
                }
                Ok(Profile::Tabulated(s))
            }
            _ => Err(LabError::invalid(format!("unknown profile {spec:?}"))),
        }
    }
}
