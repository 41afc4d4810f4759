//! Models for the compression functional `δ -> 𝔣(δ)`.

use crate::besicovitch::FCurve;
use crate::error::{LabError, Result};
use serde::{Deserialize, Serialize};

/// Measured curve, stored as `(ln δ, ε)` sorted by increasing `δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tabulated {
    log_delta: Vec<f64>,
    epsilon: Vec<f64>,
    /// `C` in the tail model `C / |ln δ|`.
    tail_c: f64,
}

impl Tabulated {
    pub fn from_curve(curve: &FCurve) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = curve
            .points
            .iter()
            .map(|p| (p.delta, p.epsilon))
            .filter(|(d, e)| *d > 0.0 && *d < 1.0 && *e > 0.0)
            .collect();
        if pts.is_empty() {
            return Err(LabError::invalid("tabulated model needs at least one point with 0 < δ < 1"));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| a.0 == b.0);
        let xs: Vec<f64> = pts.iter().map(|(d, _)| 1.0 / d.ln().abs()).collect();
        let sxy: f64 = xs.iter().zip(&pts).map(|(x, (_, e))| x * e).sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        Ok(Tabulated {
            log_delta: pts.iter().map(|(d, _)| d.ln()).collect(),
            epsilon: pts.iter().map(|(_, e)| e.min(1.0)).collect(),
            tail_c: sxy / sxx,
        })
    }

    pub fn delta_min(&self) -> f64 {
        self.log_delta[0].exp()
    }

    pub fn delta_max(&self) -> f64 {
        self.log_delta[self.log_delta.len() - 1].exp()
    }

    pub fn tail_c(&self) -> f64 {
        self.tail_c
    }

    fn eval(&self, delta: f64) -> f64 {
        let l = delta.ln();
        let n = self.log_delta.len();
        if l < self.log_delta[0] {
            return (self.tail_c / l.abs()).min(1.0);
        }
        if l >= self.log_delta[n - 1] {
            return self.epsilon[n - 1];
        }
        let i = self.log_delta.partition_point(|&x| x <= l) - 1;
        let t = (l - self.log_delta[i]) / (self.log_delta[i + 1] - self.log_delta[i]);
        self.epsilon[i] * (1.0 - t) + self.epsilon[i + 1] * t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FModel {
    /// `min(1, |ln δ|^-a)`.
    LogPower(f64),
    /// `δ^e`.
    Power(f64),
    Tabulated(Tabulated),
}

impl FModel {
    pub fn tabulated(curve: &FCurve) -> Result<Self> {
        Ok(FModel::Tabulated(Tabulated::from_curve(curve)?))
    }

    /// `log:a`, `pow:e` or `file:curve.csv`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
        let num = || -> Result<f64> {
            let v: f64 = arg.parse().map_err(|_| LabError::invalid(format!("bad model parameter in {spec:?}")))?;
            if !(v > 0.0) || !v.is_finite() {
                return Err(LabError::invalid(format!("model parameter must be positive in {spec:?}")));
            }
            Ok(v)
        };
        match kind {
            "log" => Ok(FModel::LogPower(num()?)),
            "pow" | "power" => Ok(FModel::Power(num()?)),
            "file" => {
                let f = std::fs::File::open(arg)?;
                FModel::tabulated(&FCurve::read_csv(f)?)
            }
            _ => Err(LabError::invalid(format!("unknown model {spec:?}; expected log:a, pow:e or file:path"))),
        }
    }

    /// Model value, clamped to `(0, 1]`; `δ >= 1` maps to 1.
    pub fn eval(&self, delta: f64) -> f64 {
        if delta >= 1.0 {
            return 1.0;
        }
        match self {
            FModel::LogPower(a) => delta.ln().abs().powf(-a).min(1.0),
            FModel::Power(e) => delta.powf(*e).min(1.0),
            FModel::Tabulated(t) => t.eval(delta),
        }
    }

    /// True when `eval(δ)` relies on the tail model rather than data.
    pub fn extrapolates(&self, delta: f64) -> bool {
        match self {
            FModel::Tabulated(t) => delta < t.delta_min() * (1.0 - 1e-12),
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FModel::LogPower(a) => format!("log:{a}"),
            FModel::Power(e) => format!("pow:{e}"),
            FModel::Tabulated(t) => format!("tabulated[{} points]", t.log_delta.len()),
        }
    }
}

/// `|1/p - 1/2|`.
pub fn lp_exponent(p: f64) -> Result<f64> {
    if !(p > 1.0) || p.is_nan() {
        return Err(LabError::invalid(format!("p = {p} must lie in (1, ∞)")));
    }
    Ok((1.0 / p - 0.5).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::besicovitch::FPoint;

    #[test]
    fn models() {
        let m = FModel::LogPower(1.0);
        assert_eq!(m.eval(0.9), 1.0);
        assert!((m.eval((-4.0f64).exp()) - 0.25).abs() < 1e-15);
        assert!((FModel::Power(0.5).eval(0.25) - 0.5).abs() < 1e-15);
        assert_eq!(FModel::parse("log:2").unwrap(), FModel::LogPower(2.0));
        assert!(FModel::parse("log:-1").is_err());
        assert!(FModel::parse("cubic:1").is_err());
        assert!((lp_exponent(4.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(lp_exponent(1.0).is_err());
    }

    #[test]
    fn tabulated_interpolates_and_extrapolates() {
        let pts = (4..8)
            .map(|k| {
                let d = 2f64.powi(-k);
                FPoint { k: k as u32, delta: d, epsilon: 1.0 / d.ln().abs(), err: 0.0, certificate: true }
            })
            .collect();
        let c = FCurve { points: pts, fit: None, flags: vec![] };
        let m = FModel::tabulated(&c).unwrap();
        let d = 2f64.powi(-10);
        assert!(m.extrapolates(d));
        assert!((m.eval(d) - 1.0 / d.ln().abs()).abs() < 1e-12);
        assert!(!m.extrapolates(2f64.powi(-5)));
        assert!((m.eval(2f64.powi(-5)) - 1.0 / (5.0 * 2f64.ln())).abs() < 1e-12);
    }
}
