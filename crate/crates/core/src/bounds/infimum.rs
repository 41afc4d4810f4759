//! Infima of `δ^α + 1/(A δ^β)` and relatives over `δ ∈ (0, 1)`.

use crate::error::{LabError, Result};
use serde::Serialize;

pub const GRID_POINTS: usize = 2048;
pub const REFINE_POINTS: usize = 256;

/// Minimum of `f` over `points` log-spaced samples of `[lo, hi]`, then one
/// pass of `REFINE_POINTS` samples between the neighbours of the best point.
pub fn grid_infimum(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let (a, b) = (lo.ln(), hi.ln());
    let at = |i: usize, n: usize, a: f64, b: f64| (a + (b - a) * i as f64 / (n - 1) as f64).exp();
    let mut best = (f64::INFINITY, hi);
    let mut best_i = points - 1;
    for i in 0..points {
        let d = at(i, points, a, b);
        let v = f(d);
        if v < best.0 {
            best = (v, d);
            best_i = i;
        }
    }
    let step = (b - a) / (points - 1) as f64;
    let ra = (a + step * (best_i as f64 - 1.0)).max(a);
    let rb = (a + step * (best_i as f64 + 1.0)).min(b);
    for i in 0..REFINE_POINTS {
        let d = at(i, REFINE_POINTS, ra, rb);
        let v = f(d);
        if v < best.0 {
            best = (v, d);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Infimum {
    pub closed_form: f64,
    pub grid_min: f64,
    pub argmin: f64,
    /// Objective at `δ = A^{-1/(α+β)}`.
    pub at_prescribed: f64,
    pub prescribed: f64,
}

fn check(alpha: f64, beta: f64, a: f64) -> Result<()> {
    if !(alpha > 0.0) || !(beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(LabError::invalid(format!("exponents must be positive (α = {alpha}, β = {beta})")));
    }
    if !(a >= 1.0) || !a.is_finite() {
        return Err(LabError::invalid(format!("A = {a} must be at least 1")));
    }
    Ok(())
}

/// `δ^α + 1/(A δ^β)` evaluated in log form so huge `A` stays finite.
pub fn objective(alpha: f64, beta: f64, a: f64, delta: f64) -> f64 {
    let l = delta.ln();
    (alpha * l).exp() + (-(a.ln()) - beta * l).exp()
}

/// Closed form `2 A^{-α/(α+β)}` next to a dense grid minimum.
pub fn infimum_bound(alpha: f64, beta: f64, a: f64) -> Result<Infimum> {
    check(alpha, beta, a)?;
    let prescribed = a.powf(-1.0 / (alpha + beta));
    let closed_form = 2.0 * a.powf(-alpha / (alpha + beta));
    let f = |d: f64| objective(alpha, beta, a, d);
    let lo = (prescribed.ln() - 30.0).max(-700.0).exp();
    let (grid_min, argmin) = grid_infimum(&f, lo, 1.0, 10_000);
    Ok(Infimum { closed_form, grid_min, argmin, at_prescribed: f(prescribed), prescribed })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogInfimum {
    pub value: f64,
    pub argmin: f64,
    pub prescribed: f64,
    pub at_prescribed: f64,
    /// `value · log(1+A)^α`, bounded in `A`.
    pub normalized: f64,
}

/// `inf_{0<δ<1} |log δ|^{-α} + 1/(A δ^β)`.
pub fn infimum_bound_log(alpha: f64, beta: f64, a: f64) -> Result<LogInfimum> {
    check(alpha, beta, a)?;
    let f = |d: f64| d.ln().abs().powf(-alpha) + (-(a.ln()) - beta * d.ln()).exp();
    let prescribed = (a.powf(-1.0 / beta) * (1.0 + a).ln().powf(alpha / beta)).min(0.5);
    let at_prescribed = f(prescribed);
    // δ = e^{-t}; the grid runs over t in [1e-6, 700]
    let g = |t: f64| f((-t).exp());
    let (gm, t) = grid_infimum(&g, 1e-6, 700.0, 10_000);
    let (value, argmin) = if gm <= at_prescribed { (gm, (-t).exp()) } else { (at_prescribed, prescribed) };
    Ok(LogInfimum { value, argmin, prescribed, at_prescribed, normalized: value * (1.0 + a).ln().powf(alpha) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_case() {
        let r = infimum_bound(1.0, 1.0, 4.0).unwrap();
        assert!((r.closed_form - 1.0).abs() < 1e-15);
        assert!((r.prescribed - 0.5).abs() < 1e-15);
        assert!((r.grid_min - 1.0).abs() < 1e-9);
        assert!(r.grid_min <= r.closed_form * (1.0 + 1e-9));
    }

    #[test]
    fn prescribed_point_attains_closed_form() {
        let r = infimum_bound(1.0, 2.0, 1.0).unwrap();
        assert!((r.prescribed - 1.0).abs() < 1e-15);
        assert!((r.at_prescribed - 2.0).abs() < 1e-12);
        assert!(infimum_bound(0.0, 1.0, 2.0).is_err());
        assert!(infimum_bound(1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn log_variant() {
        let r = infimum_bound_log(1.0, 1.0, std::f64::consts::E - 1.0).unwrap();
        assert!(r.value <= r.at_prescribed);
        let big = infimum_bound_log(1.0, 1.0, 1e12).unwrap();
        assert!(big.normalized < 3.0 && big.normalized > 0.1, "{big:?}");
    }
}
