//! Level-wise bounds `inf_δ 𝔣(δ)^q + (scale term)` for Littlewood-Paley pieces.

use super::fmodel::{lp_exponent, FModel};
use super::infimum::{grid_infimum, GRID_POINTS};
use crate::error::{LabError, Result};
use crate::report::{BoundReport, FLAG_DEGENERATE, FLAG_EXTRAPOLATED};
use std::f64::consts::LN_2;

/// Lower end of the δ-grid at level `n`: far below the balancing scale `2^{-n/2}`.
pub fn grid_floor(n: u32) -> f64 {
    (1e-8f64.ln()).min(-3.0 * std::f64::consts::LN_10 - 0.5 * n as f64 * LN_2).max(-700.0).exp()
}

/// `inf_δ fd(δ)^q + 1/(2^n δ²)` over `points` grid samples of `[floor, 1]`.
pub fn euclidean_level(fd: &FModel, q: f64, n: u32, points: usize) -> (f64, f64) {
    let f = |d: f64| fd.eval(d).powf(q) + (-(n as f64 * LN_2) - 2.0 * d.ln()).exp();
    grid_infimum(&f, grid_floor(n), 1.0, points)
}

/// `inf_δ fd(δ)^q + (δ² 2^n sin θ)^{-1/3}`.
pub fn spherical_level(fd: &FModel, q: f64, n: u32, sin_theta: f64, points: usize) -> (f64, f64) {
    let f = |d: f64| {
        fd.eval(d).powf(q) + (-(2.0 * d.ln() + n as f64 * LN_2 + sin_theta.ln()) / 3.0).exp()
    };
    grid_infimum(&f, grid_floor(n), 1.0, points)
}

fn exponent_or_degenerate(p: f64) -> Result<(f64, bool)> {
    let q = lp_exponent(p)?;
    Ok((q, q == 0.0))
}

pub fn wn_bound_euclidean(fd: &FModel, p: f64, n: u32, norm_t: f64, c_d: f64) -> Result<BoundReport> {
    let (q, degenerate) = exponent_or_degenerate(p)?;
    let (inf, argmin) = euclidean_level(fd, q, n, GRID_POINTS);
    let mut r = BoundReport::new(
        "wn_bound_euclidean",
        c_d * norm_t * inf,
        &["level bound f(δ)^|1/p-1/2| + 1/(2^n δ^2)", "grid infimum over δ"],
    )
    .param("fd", fd.describe())
    .param("p", p)
    .param("n", n)
    .param("norm_T", norm_t)
    .param("C_d", c_d)
    .with_error(c_d * norm_t * inf * 1e-3);
    r.set_quantity("argmin_delta", argmin);
    r.set_quantity("exponent", q);
    if degenerate {
        r.flag(FLAG_DEGENERATE);
    }
    if fd.extrapolates(argmin) {
        r.flag(FLAG_EXTRAPOLATED);
    }
    if *fd == FModel::LogPower(1.0) && n >= 1 {
        let simplified = norm_t * (n as f64).powf(-q);
        r.set_quantity("simplified", simplified);
        r.set_quantity("simplified_ratio", r.value() / simplified);
    }
    Ok(r)
}

pub fn wn_bound_spherical(
    fd: &FModel,
    p: f64,
    n: u32,
    theta: f64,
    norm_ms: f64,
    c_d: f64,
) -> Result<BoundReport> {
    let (q, degenerate) = exponent_or_degenerate(p)?;
    let s = theta.sin();
    if !(theta > 0.0 && theta < std::f64::consts::PI) || !(s > 0.0) {
        return Err(LabError::invalid(format!("θ = {theta} must lie strictly inside (0, π)")));
    }
    let (inf, argmin) = spherical_level(fd, q, n, s, GRID_POINTS);
    let mut r = BoundReport::new(
        "wn_bound_spherical",
        c_d * norm_ms * inf,
        &["level bound f(δ)^|1/p-1/2| + (δ^2 2^n sin θ)^(-1/3)", "grid infimum over δ"],
    )
    .param("fd", fd.describe())
    .param("p", p)
    .param("n", n)
    .param("theta", theta)
    .param("norm_MS", norm_ms)
    .param("C_d", c_d)
    .with_error(c_d * norm_ms * inf * 1e-3);
    r.set_quantity("argmin_delta", argmin);
    r.set_quantity("exponent", q);
    if degenerate {
        r.flag(FLAG_DEGENERATE);
    }
    if fd.extrapolates(argmin) {
        r.flag(FLAG_EXTRAPOLATED);
    }
    if n >= 1 {
        let simplified = norm_ms * (n as f64 + s.ln()).max(1.0).powf(-q);
        r.set_quantity("simplified", simplified);
        r.set_quantity("simplified_ratio", r.value() / simplified);
    }
    Ok(r)
}

/// Largest level summed before a geometric tail estimate takes over.
pub const HOLDER_MAX_LEVEL: u32 = 4000;

/// `Σ_n min(1, 2^n gap) c_n` with `c_n` the Euclidean level infima (unit
/// constants), for each gap. The level sequence is shared across gaps.
pub fn holder_modulus(fd: &FModel, p: f64, gaps: &[f64]) -> Result<Vec<f64>> {
    let q = lp_exponent(p)?;
    if q == 0.0 {
        return Err(LabError::invalid("p = 2 gives no decay; the modulus is not defined"));
    }
    if let Some(g) = gaps.iter().find(|g| !(**g > 0.0 && **g < 1.0)) {
        return Err(LabError::invalid(format!("gap {g} must lie in (0, 1)")));
    }
    let gmin = gaps.iter().cloned().fold(1.0, f64::min);
    let mut c = Vec::new();
    let mut total = 0.0;
    for n in 0..=HOLDER_MAX_LEVEL {
        let (v, _) = euclidean_level(fd, q, n, GRID_POINTS);
        c.push(v);
        total += v;
        if (n as f64) * LN_2 > -gmin.ln() && v < 1e-15 * total {
            break;
        }
    }
    let len = c.len();
    let ratio = if len >= 2 { (c[len - 1] / c[len - 2]).min(1.0 - 1e-12) } else { 0.0 };
    let tail = c[len - 1] * ratio / (1.0 - ratio);
    Ok(gaps
        .iter()
        .map(|&g| {
            c.iter()
                .enumerate()
                .map(|(n, v)| (g * 2f64.powi(n as i32)).min(1.0) * v)
                .sum::<f64>()
                + tail
        })
        .collect())
}

/// Predicted Hölder exponent for `fd = δ^ε`: `ε|p-2| / (4p + ε|p-2|)`.
pub fn holder_exponent(eps: f64, p: f64) -> f64 {
    let a = eps * (p - 2.0).abs();
    a / (4.0 * p + a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::infimum::infimum_bound;

    #[test]
    fn p2_degenerate() {
        let r = wn_bound_euclidean(&FModel::LogPower(1.0), 2.0, 3, 1.0, 1.0).unwrap();
        assert!(r.has_flag(FLAG_DEGENERATE));
        assert!((r.value() - 1.125).abs() < 1e-12);
    }

    #[test]
    fn power_matches_infimum_formula() {
        for n in [4u32, 10, 20] {
            let r = wn_bound_euclidean(&FModel::Power(1.0), 4.0, n, 1.0, 1.0).unwrap();
            let i = infimum_bound(0.25, 2.0, 2f64.powi(n as i32)).unwrap();
            assert!((r.value() - i.grid_min).abs() < 1e-6 * i.grid_min, "{n}");
        }
    }

    #[test]
    fn monotone_in_n() {
        let fd = FModel::LogPower(1.0);
        let mut last = f64::INFINITY;
        for n in 0..30 {
            let v = wn_bound_euclidean(&fd, 4.0, n, 1.0, 1.0).unwrap().value();
            assert!(v <= last + 1e-15);
            last = v;
            let s = wn_bound_spherical(&fd, 4.0, n, std::f64::consts::FRAC_PI_2, 1.0, 1.0).unwrap();
            assert!(s.value() > 0.0);
        }
        assert!(wn_bound_spherical(&fd, 4.0, 3, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn refinement_stable() {
        let fd = FModel::LogPower(1.0);
        let (a, _) = spherical_level(&fd, 0.25, 8, 1.0, GRID_POINTS);
        let (b, _) = spherical_level(&fd, 0.25, 8, 1.0, 10 * GRID_POINTS);
        assert!((a - b).abs() < 0.01 * b);
    }
}
