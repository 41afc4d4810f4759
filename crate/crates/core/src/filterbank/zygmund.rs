//! Zygmund modulus, its Littlewood-Paley majorant and the b⁰ classifier.

use super::bank::{lp_sup_norms, FilterBank};
use crate::error::{LabError, Result};
use crate::report::BoundReport;
use crate::sampled::SampledFunction;

/// Bernstein constant valid for spectra inside `[-2r, 2r]`: `‖g'‖ ≤ 4π r ‖g‖`.
pub const BERNSTEIN_C: f64 = 4.0 * std::f64::consts::PI;

/// `sup_x |F(x+h) + F(x-h) - 2F(x)| / h` over grid points `x` with both
/// neighbours inside the sampled range (linear interpolation off grid).
pub fn zygmund_modulus(f: &SampledFunction, h: f64) -> Result<f64> {
    if !(h >= 2.0 * f.spacing() * (1.0 - 1e-12)) {
        return Err(LabError::invalid(format!(
            "step {h} is below twice the grid spacing {}",
            f.spacing()
        )));
    }
    let lo = f.start() + h;
    let hi = f.end() - h;
    let v = f.values();
    let ratio = h / f.spacing();
    let whole = (ratio - ratio.round()).abs() < 1e-9;
    let mut sup = 0.0f64;
    for i in 0..f.len() {
        let x = f.x(i);
        if x < lo - 1e-12 * h || x > hi + 1e-12 * h {
            continue;
        }
        let (a, b) = if whole {
            let s = ratio.round() as usize;
            (v[i + s], v[i - s])
        } else {
            (f.eval(x + h), f.eval(x - h))
        };
        sup = sup.max((a + b - v[i] * 2.0).norm());
    }
    Ok(sup / h)
}

/// Same as [`zygmund_modulus`] for periodic samples (wrapping around).
pub fn zygmund_modulus_periodic(f: &SampledFunction, h: f64) -> Result<f64> {
    if !(h >= 2.0 * f.spacing() * (1.0 - 1e-12)) {
        return Err(LabError::invalid("step below twice the grid spacing"));
    }
    let n = f.len();
    let v = f.values();
    let u = h / f.spacing();
    let s = u.floor() as usize;
    let t = u - s as f64;
    let at = |i: isize| v[i.rem_euclid(n as isize) as usize];
    let mut sup = 0.0f64;
    for i in 0..n as isize {
        let fwd = at(i + s as isize) * (1.0 - t) + at(i + s as isize + 1) * t;
        let back = at(i - s as isize) * (1.0 - t) + at(i - s as isize - 1) * t;
        sup = sup.max((fwd + back - v[i as usize] * 2.0).norm());
    }
    Ok(sup / h)
}

/// `Σ_n min(4/h, h C² 2^{2n}) s_n`: the Littlewood-Paley majorant of the
/// Zygmund quotient when `s_n = ‖W_n * F‖_∞`.
pub fn modulus_from_lp(sup_norms: &[f64], h: f64, c: f64) -> f64 {
    sup_norms
        .iter()
        .enumerate()
        .map(|(n, s)| (4.0 / h).min(h * c * c * 4f64.powi(n as i32)) * s)
        .sum()
}

pub const CONSISTENT_B0: &str = "CONSISTENT_B0";
pub const INCONSISTENT: &str = "INCONSISTENT";

/// Least-squares slope of `y` against `x`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Levels from which the trend statistics are taken.
pub const TREND_START: u32 = 4;
/// Tail minimum over maximum at or above which the norms count as bounded below.
pub const FLOOR_FRACTION: f64 = 0.5;

/// Trend statistics of `‖W_n * f‖_∞` plus the Zygmund quotients of the
/// primitive at `h = 2^-j`. Finite data never proves membership; the flag
/// only says whether the data look like a `b⁰` function.
pub fn classify_b0(f: &SampledFunction, bank: &FilterBank) -> Result<BoundReport> {
    let norms = lp_sup_norms(f, bank)?;
    let n_top = bank.levels();
    let start = if n_top >= TREND_START + 2 { TREND_START } else { 1 };
    let ns: Vec<f64> = (start..=n_top).map(|n| n as f64).collect();
    let tail: Vec<f64> = (start..=n_top).map(|n| norms[n as usize]).collect();
    let logs: Vec<f64> = tail.iter().map(|s| s.max(1e-300).log2()).collect();
    let fitted = slope(&ns, &logs);
    let tail_max = tail.iter().cloned().fold(0.0, f64::max);
    let tail_min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let floor_ratio = if tail_max > 0.0 { tail_min / tail_max } else { 0.0 };
    let verdict = if tail_max == 0.0 || (floor_ratio < FLOOR_FRACTION && fitted < 0.0) {
        CONSISTENT_B0
    } else {
        INCONSISTENT
    };
    // dual view: Zygmund quotient of the primitive
    let prim = f.primitive();
    let mut zyg = Vec::new();
    let mut hs = Vec::new();
    for j in 1..=n_top {
        let h = 2f64.powi(-(j as i32));
        if h < 2.0 * f.spacing() || 2.0 * h >= f.end() - f.start() {
            continue;
        }
        hs.push(h);
        zyg.push(zygmund_modulus(&prim, h)?);
    }
    let mut r = BoundReport::new(
        "classify_b0",
        fitted,
        &["trend of sup norms of Littlewood-Paley pieces", "Zygmund quotient of the primitive"],
    )
    .param("levels", n_top)
    .param("trend_start", start);
    r.flag(verdict);
    r.set_series("sup_norms", &norms);
    r.set_series("zygmund_h", &hs);
    r.set_series("zygmund_quotient", &zyg);
    r.set_quantity("slope_log2", fitted);
    r.set_quantity("floor_ratio", floor_ratio);
    Ok(r)
}
