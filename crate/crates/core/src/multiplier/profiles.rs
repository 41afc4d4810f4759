//! The one-dimensional profiles `f`, `g`, `ρ` behind the tube test functions.

use crate::bump::{interval_bump, interval_bump_deriv, unit_bump};
use crate::error::{LabError, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Nodes per unit length for the trapezoid rule on smooth bumps.
const NODES: usize = 2048;

/// Smooth bumps with `f` on `(-1, 0)`, `g` on the window shifted by `-1`
/// and `ρ` on `(-1, 1)` normalised to `‖ρ‖₂ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profiles {
    /// Support of `g`; the default `(1, 2)` matches the `(2, 3)` translate window.
    pub g_support: (f64, f64),
    rho_scale: f64,
}

impl Default for Profiles {
    fn default() -> Self {
        Profiles::for_window((2.0, 3.0)).expect("default window is valid")
    }
}

/// `∫ φ` over `[a, b]` by the trapezoid rule; exact to high order for
/// functions vanishing to all orders at both ends.
pub fn trapezoid(phi: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (phi(a) + phi(b));
    for k in 1..n {
        s += phi(a + k as f64 * h);
    }
    s * h
}

fn trapezoid_c(phi: impl Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    let mut s = (phi(a) + phi(b)) * 0.5;
    for k in 1..n {
        s += phi(a + k as f64 * h);
    }
    s * h
}

fn nodes(a: f64, b: f64) -> usize {
    ((b - a) * NODES as f64).ceil().max(64.0) as usize
}

impl Profiles {
    /// Profiles for tubes whose translate occupies `[a, b]` along the axis.
    pub fn for_window(window: (f64, f64)) -> Result<Self> {
        let (a, b) = window;
        if !(a >= 1.0 && b > a) || !b.is_finite() {
            return Err(LabError::invalid(format!("window {window:?} must satisfy 1 <= a < b")));
        }
        let n2 = trapezoid(|y| unit_bump(y).powi(2), -1.0, 1.0, nodes(-1.0, 1.0));
        Ok(Profiles { g_support: (a - 1.0, b - 1.0), rho_scale: 1.0 / n2.sqrt() })
    }

    pub fn f(&self, x: f64) -> f64 {
        interval_bump(x, -1.0, 0.0)
    }

    pub fn f_deriv(&self, x: f64) -> f64 {
        interval_bump_deriv(x, -1.0, 0.0)
    }

    pub fn g(&self, x: f64) -> f64 {
        interval_bump(x, self.g_support.0, self.g_support.1)
    }

    pub fn rho(&self, y: f64) -> f64 {
        self.rho_scale * unit_bump(y)
    }

    /// `‖f‖_p`.
    pub fn f_norm(&self, p: f64) -> f64 {
        lp(|x| self.f(x), (-1.0, 0.0), p)
    }

    pub fn g_norm(&self, p: f64) -> f64 {
        lp(|x| self.g(x), self.g_support, p)
    }

    pub fn rho_norm(&self, p: f64) -> f64 {
        lp(|y| self.rho(y), (-1.0, 1.0), p)
    }

    pub fn f_hat(&self, xi: f64) -> Complex64 {
        fourier(|x| self.f(x), (-1.0, 0.0), xi)
    }

    pub fn g_hat(&self, xi: f64) -> Complex64 {
        fourier(|x| self.g(x), self.g_support, xi)
    }

    pub fn rho_hat(&self, xi: f64) -> Complex64 {
        fourier(|y| self.rho(y), (-1.0, 1.0), xi)
    }

    /// `ĥ = f̂ · conj(ĝ)` for `h = f ∗ g*`.
    pub fn h_hat(&self, xi: f64) -> Complex64 {
        self.f_hat(xi) * self.g_hat(xi).conj()
    }

    /// `h(x) = ∫ f(y) g(y - x) dy`, supported in `(-1 - g_hi, -g_lo)`.
    pub fn h(&self, x: f64) -> f64 {
        let (lo, hi) = (-1.0f64.max(self.g_support.0 + x), 0.0f64.min(self.g_support.1 + x));
        if lo >= hi {
            return 0.0;
        }
        trapezoid(|y| self.f(y) * self.g(y - x), lo, hi, nodes(lo, hi))
    }

    /// Support of `h`.
    pub fn h_support(&self) -> (f64, f64) {
        (-1.0 - self.g_support.1, -self.g_support.0)
    }
}

fn lp(phi: impl Fn(f64) -> f64, (a, b): (f64, f64), p: f64) -> f64 {
    if p.is_infinite() {
        return (0..=4096).map(|k| phi(a + (b - a) * k as f64 / 4096.0).abs()).fold(0.0, f64::max);
    }
    trapezoid(|x| phi(x).abs().powf(p), a, b, nodes(a, b)).powf(1.0 / p)
}

fn fourier(phi: impl Fn(f64) -> f64, (a, b): (f64, f64), xi: f64) -> Complex64 {
    // enough nodes per oscillation as well as per unit length
    let n = nodes(a, b).max(((b - a) * xi.abs() * 64.0).ceil() as usize);
    trapezoid_c(|x| Complex64::from_polar(phi(x), -2.0 * PI * x * xi), a, b, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_is_normalised() {
        let p = Profiles::default();
        assert!((p.rho_norm(2.0) - 1.0).abs() < 1e-9);
        assert_eq!(p.f(-1.0), 0.0);
        assert_eq!(p.g(2.0), 0.0);
        assert!(p.g(1.5) > 0.3);
    }

    #[test]
    fn h_hat_is_product() {
        let p = Profiles::default();
        let (a, b) = p.h_support();
        for xi in [0.0, 0.37, -1.3, 2.9] {
            let direct = trapezoid_c(|x| Complex64::from_polar(p.h(x), -2.0 * PI * x * xi), a, b, 1024);
            let prod = p.h_hat(xi);
            assert!((direct - prod).norm() < 1e-9, "xi={xi}: {direct} vs {prod}");
        }
    }

    #[test]
    fn plancherel_for_f() {
        let p = Profiles::default();
        let spec = trapezoid(|x| p.f_hat(x).norm_sqr(), -40.0, 40.0, 8000);
        assert!((spec - p.f_norm(2.0).powi(2)).abs() < 1e-9);
    }
}
