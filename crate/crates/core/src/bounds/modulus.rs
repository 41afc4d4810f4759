//! Moduli of continuity `∫_0^u 𝔣(δ)^q / δ dδ + (power term)` and integrability.

use super::fmodel::{lp_exponent, FModel};
use crate::error::{LabError, Result};
use crate::quadrature::adaptive_simpson;
use crate::report::{BoundReport, FLAG_EXTRAPOLATED, FLAG_INFINITE, FLAG_TRUNCATED};
use serde::{Deserialize, Serialize};

pub const QUAD_TOL: f64 = 1e-10;
pub const CONVERGES: &str = "CONVERGES";
pub const DIVERGES: &str = "DIVERGES";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weight {
    None,
    /// `log|log δ|`.
    LogLog,
}

impl Weight {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Weight::None),
            "loglog" => Ok(Weight::LogLog),
            _ => Err(LabError::invalid(format!("unknown weight {s:?}"))),
        }
    }

    fn at(self, t: f64) -> f64 {
        match self {
            Weight::None => 1.0,
            Weight::LogLog => t.ln(),
        }
    }
}

/// Symbolic verdict for model forms; `None` for tabulated data.
pub fn model_converges(fd: &FModel, q: f64) -> Option<bool> {
    match fd {
        FModel::LogPower(a) => Some(a * q > 1.0),
        FModel::Power(e) => Some(e * q > 0.0),
        FModel::Tabulated(_) => None,
    }
}

/// `∫_{t0}^∞ fd(e^{-t})^q w(t) dt` for a model known to converge; `(value, error)`.
fn model_tail_integral(fd: &FModel, q: f64, t0: f64, w: Weight) -> (f64, f64) {
    let g = |t: f64| fd.eval((-t).exp()).powf(q) * w.at(t);
    let (t_end, tail) = match *fd {
        FModel::LogPower(a) => {
            let s = a * q;
            let t_end = t0.max(1.0) * 64.0;
            let tail = match w {
                Weight::None => t_end.powf(1.0 - s) / (s - 1.0),
                Weight::LogLog => {
                    t_end.powf(1.0 - s) * (t_end.ln() / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0)))
                }
            };
            (t_end, tail)
        }
        FModel::Power(e) => {
            let c = e * q;
            let t_end = t0 + 60.0 / c;
            let tail = (-c * t_end).exp() / c * (w.at(t_end).abs() + 1.0 / (c * t_end));
            (t_end, tail)
        }
        FModel::Tabulated(_) => unreachable!("tabulated models are integrated over their data range"),
    };
    // split at t = 1 where the log-power clamp has a kink
    let mut cuts = vec![t0];
    if t0 < 1.0 && t_end > 1.0 {
        cuts.push(1.0);
    }
    cuts.push(t_end);
    let mut value = tail;
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let r = adaptive_simpson(&g, w[0], w[1], QUAD_TOL);
        value += r.value;
        err += r.error;
    }
    (value, err + tail.abs() * 1e-6)
}

/// Result of `∫_0^u fd(δ)^q / δ dδ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIntegral {
    pub value: f64,
    pub error: f64,
    pub truncated: bool,
    pub extrapolated: bool,
}

/// `∫_0^u fd(δ)^q / δ dδ`; infinite when the model diverges. Tabulated
/// models are integrated over their data range only (`truncated`).
pub fn log_integral(fd: &FModel, q: f64, u: f64) -> LogIntegral {
    // δ in [1, u] contributes ln u with fd = 1
    let above = if u > 1.0 { u.ln() } else { 0.0 };
    let t0 = -u.min(1.0).ln();
    match fd {
        FModel::Tabulated(tab) => {
            let t_max = -tab.delta_min().ln();
            if t0 >= t_max {
                return LogIntegral { value: f64::INFINITY, error: 0.0, truncated: false, extrapolated: true };
            }
            let g = |t: f64| fd.eval((-t).exp()).powf(q);
            let r = adaptive_simpson(&g, t0, t_max, QUAD_TOL);
            LogIntegral { value: r.value + above, error: r.error, truncated: true, extrapolated: false }
        }
        _ => {
            if model_converges(fd, q) != Some(true) {
                return LogIntegral { value: f64::INFINITY, error: 0.0, truncated: false, extrapolated: false };
            }
            let (v, e) = model_tail_integral(fd, q, t0, Weight::None);
            LogIntegral { value: v + above, error: e, truncated: false, extrapolated: false }
        }
    }
}

fn finish(mut r: BoundReport, li: &LogIntegral, power: f64) -> BoundReport {
    r.set_quantity("integral", li.value);
    r.set_quantity("integral_error", li.error);
    r.set_quantity("power_term", power);
    if li.truncated {
        r.flag(FLAG_TRUNCATED);
    }
    if li.extrapolated {
        r.flag(FLAG_EXTRAPOLATED);
    }
    r
}

/// `‖T‖ (∫_0^{gap^{1/4}} 𝔣(δ)^q / δ dδ + gap^{1/4})`.
pub fn modulus_bound_euclidean(fd: &FModel, p: f64, gap: f64, norm_t: f64) -> Result<BoundReport> {
    let q = lp_exponent(p)?;
    if q == 0.0 {
        return Err(LabError::invalid("p = 2 is excluded"));
    }
    if !(gap > 0.0 && gap < 1.0) {
        return Err(LabError::invalid(format!("gap {gap} must lie in (0, 1)")));
    }
    let u = gap.powf(0.25);
    let li = log_integral(fd, q, u);
    let r = BoundReport::new(
        "modulus_bound_euclidean",
        norm_t * (li.value + u),
        &["modulus of continuity from level bounds", "integral of f(δ)^|1/p-1/2| / δ up to gap^(1/4)"],
    )
    .param("fd", fd.describe())
    .param("p", p)
    .param("gap", gap)
    .param("norm_T", norm_t)
    .with_error(norm_t * li.error);
    Ok(finish(r, &li, u))
}

/// `∫_0^{|s-t|^{1/3}} 𝔣(δ)^q / δ dδ + |s-t|^{1/9} (|sin s|^{-1/3} + |sin t|^{-1/3})`.
pub fn modulus_bound_spherical(fd: &FModel, p: f64, s: f64, t: f64) -> Result<BoundReport> {
    let q = lp_exponent(p)?;
    if q == 0.0 {
        return Err(LabError::invalid("p = 2 is excluded"));
    }
    if s == t {
        return Err(LabError::invalid("s and t must differ"));
    }
    let (ss, st) = (s.sin().abs(), t.sin().abs());
    if ss == 0.0 || st == 0.0 {
        return Err(LabError::invalid("sin s and sin t must be nonzero"));
    }
    let gap = (s - t).abs();
    let li = log_integral(fd, q, gap.cbrt());
    let power = gap.powf(1.0 / 9.0) * (ss.powf(-1.0 / 3.0) + st.powf(-1.0 / 3.0));
    let r = BoundReport::new(
        "modulus_bound_spherical",
        li.value + power,
        &["spherical modulus of continuity from level bounds", "integral of f(δ)^|1/p-1/2| / δ up to |s-t|^(1/3)"],
    )
    .param("fd", fd.describe())
    .param("p", p)
    .param("s", s)
    .param("t", t)
    .with_error(li.error);
    Ok(finish(r, &li, power))
}

/// Upper end `e^{-e}` of the test integral, where `log|log δ| = 1`.
pub fn integrability_cutoff() -> f64 {
    (-std::f64::consts::E).exp()
}

/// Decides convergence of `∫_0 𝔣(δ)^q w(δ) / δ dδ`.
///
/// Model forms are decided exactly. Tabulated curves fit `ε ≈ c |log δ|^{-a}`
/// on their data and apply the model rule; the verdict is flagged EXTRAPOLATED.
pub fn integrability_test(fd: &FModel, p: f64, weight: Weight) -> Result<BoundReport> {
    let q = lp_exponent(p)?;
    if q == 0.0 {
        return Err(LabError::invalid("p = 2 is excluded"));
    }
    let t0 = std::f64::consts::E;
    let (verdict, value, err, fitted_a) = match fd {
        FModel::Tabulated(tab) => {
            let t_max = -tab.delta_min().ln();
            let t_min = -tab.delta_max().ln();
            let pts: Vec<(f64, f64)> = (0..=32)
                .map(|i| t_min + (t_max - t_min) * i as f64 / 32.0)
                .map(|t| (t.ln(), fd.eval((-t).exp()).ln()))
                .collect();
            let a = if t_max > t_min {
                let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
                let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
                -crate::filterbank::zygmund::slope(&xs, &ys)
            } else {
                1.0
            };
            let g = |t: f64| fd.eval((-t).exp()).powf(q) * weight.at(t);
            let lo = t0.min(t_max);
            let partial = adaptive_simpson(&g, lo, t_max.max(lo), QUAD_TOL);
            (a * q > 1.0, partial.value, partial.error, Some(a))
        }
        _ => {
            let c = model_converges(fd, q).unwrap_or(false);
            if c {
                let (v, e) = model_tail_integral(fd, q, t0, weight);
                (true, v, e, None)
            } else {
                (false, f64::INFINITY, 0.0, None)
            }
        }
    };
    let tabulated = fitted_a.is_some();
    let mut r = BoundReport::new(
        "integrability_test",
        if verdict || tabulated { value } else { f64::INFINITY },
        &["integrability of f(δ)^|1/p-1/2| w(δ) / δ at 0", "substitution t = log(1/δ)"],
    )
    .param("fd", fd.describe())
    .param("p", p)
    .param("weight", weight)
    .param("upper_delta", integrability_cutoff())
    .with_error(err);
    r.flag(if verdict { CONVERGES } else { DIVERGES });
    r.set_quantity("exponent", q);
    if let Some(a) = fitted_a {
        r.set_quantity("fitted_log_exponent", a);
        r.set_quantity("partial_integral", value);
        r.flag(FLAG_EXTRAPOLATED);
        r.flag(FLAG_TRUNCATED);
    }
    if !verdict && !tabulated {
        r.flag(FLAG_INFINITE);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_closed_form() {
        // ∫_0^u δ^{qe-1} dδ = u^{qe} / (qe)
        let fd = FModel::Power(2.0);
        let gap = 1e-3f64;
        let r = modulus_bound_euclidean(&fd, 4.0, gap, 1.0).unwrap();
        let u = gap.powf(0.25);
        let want = u.powf(0.5) / 0.5 + u;
        assert!((r.value() - want).abs() < 1e-8, "{} vs {want}", r.value());
    }

    #[test]
    fn log_power_divergence_and_convergence() {
        let r = modulus_bound_euclidean(&FModel::LogPower(1.0), 4.0, 0.01, 1.0).unwrap();
        assert!(r.is_infinite() && r.has_flag(FLAG_INFINITE));
        let r = modulus_bound_euclidean(&FModel::LogPower(8.0), 4.0, 0.01, 1.0).unwrap();
        // t^{-2} from t0 = ln(1/u): ∫ = 1/t0
        let t0 = -(0.01f64.powf(0.25)).ln();
        assert!((r.quantity("integral").unwrap() - 1.0 / t0).abs() < 1e-7);
    }

    #[test]
    fn integrability_rules() {
        let d = integrability_test(&FModel::LogPower(1.0), 4.0, Weight::None).unwrap();
        assert!(d.has_flag(DIVERGES));
        let c = integrability_test(&FModel::Power(0.1), 3.0, Weight::LogLog).unwrap();
        assert!(c.has_flag(CONVERGES) && c.value().is_finite());
        for w in [Weight::None, Weight::LogLog] {
            let r = integrability_test(&FModel::LogPower(8.0), 4.0, w).unwrap();
            assert!(r.has_flag(CONVERGES) && r.value() > 0.0);
        }
        // ∫_e^∞ t^{-2} dt = 1/e
        let r = integrability_test(&FModel::LogPower(8.0), 4.0, Weight::None).unwrap();
        assert!((r.value() - (-1.0f64).exp()).abs() < 1e-8);
        assert!(integrability_test(&FModel::Power(1.0), 2.0, Weight::None).is_err());
    }

    #[test]
    fn spherical_vanishes_as_gap_closes() {
        let fd = FModel::Power(1.0);
        let a = modulus_bound_spherical(&fd, 4.0, 1.0, 1.0 + 1e-3).unwrap().value();
        let b = modulus_bound_spherical(&fd, 4.0, 1.0, 1.0 + 1e-9).unwrap().value();
        assert!(b < 0.5 * a);
        assert!(modulus_bound_spherical(&fd, 4.0, 0.0, 1.0).is_err());
    }
}
