//! `T f_j` in the frame of its own tube.
//!
//! Rotations and translations commute with `ξ ↦ m(|u + ξ/r|)` once `u`
//! turns with the tube, so `T_j f_j = F_0 ∘ U_j^{-1}` where `F_0` is the
//! field of a single tube lying along the first axis. `F_0` lives on a
//! long, thin periodic grid sized to the tube rather than to the family.

use super::field::{apply_multiplier_with, DirectionalSymbol, GridField2D, Symbol, SymbolMode};
use super::profiles::Profiles;
use super::testfn::{conjugate, f_local, g_local};
use crate::error::{LabError, Result};
use crate::profile::Profile;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Midpoint subdivisions per frequency cell where the symbol jumps.
pub const SYMBOL_OVERSAMPLE: usize = 16;

/// Shape of the canonical grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalSpec {
    /// Points along the axis.
    pub ns: usize,
    /// Points across the axis.
    pub nt: usize,
    /// Axial period.
    pub ls: f64,
    /// Axial start of the grid.
    pub s0: f64,
    /// Transverse period in units of δ.
    pub width: f64,
}

impl CanonicalSpec {
    /// `2 grid × grid/2` points over an axial period of 32 and a width of 32δ.
    pub fn for_grid(grid: usize) -> Result<Self> {
        if !grid.is_power_of_two() || grid < 64 {
            return Err(LabError::invalid(format!("grid {grid} must be a power of two ≥ 64")));
        }
        Ok(CanonicalSpec { ns: 2 * grid, nt: grid / 2, ls: 32.0, s0: -14.5, width: 32.0 })
    }
}

/// `F_0 = T_0 f_0` and `g_0` for the tube `[0, 1] × [-δ, δ]` along the first axis.
#[derive(Debug, Clone)]
pub struct CanonicalField {
    pub spec: CanonicalSpec,
    pub delta: f64,
    pub p: f64,
    pub r: f64,
    pub tf: GridField2D,
    pub f: GridField2D,
    pub g: GridField2D,
}

impl CanonicalField {
    pub fn build(
        spec: CanonicalSpec,
        delta: f64,
        window: (f64, f64),
        p: f64,
        m: &Profile,
        r: f64,
    ) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(LabError::invalid(format!("δ = {delta} must lie in (0, 1)")));
        }
        if spec.s0 > -2.0 || spec.s0 + spec.ls < window.1 + 2.0 {
            return Err(LabError::DomainTooSmall(format!(
                "axial range [{}, {}] does not hold the tube and its translate with room 2",
                spec.s0,
                spec.s0 + spec.ls
            )));
        }
        if spec.width < 8.0 {
            return Err(LabError::DomainTooSmall(format!("width {}δ is below 8δ", spec.width)));
        }
        let w = spec.width * delta;
        let origin = [spec.s0, -0.5 * w];
        let extent = [spec.ls, w];
        let shape = [spec.ns, spec.nt];
        let (hs, ht) = (spec.ls / spec.ns as f64, w / spec.nt as f64);
        if ht > 0.25 * delta || hs > 0.125 {
            return Err(LabError::ResolutionTooCoarse(format!(
                "canonical spacing ({hs:.3e}, {ht:.3e}) too coarse for δ = {delta:.3e}"
            )));
        }
        let pr = Profiles::for_window(window)?;
        let q = conjugate(p);
        let f = GridField2D::from_fn(origin, extent, shape, |s, t| {
            Complex64::new(f_local(&pr, delta, p, s, t), 0.0)
        })?;
        let g = GridField2D::from_fn(origin, extent, shape, |s, t| {
            Complex64::new(g_local(&pr, delta, q, s, t), 0.0)
        })?;
        let sym = DirectionalSymbol::new([1.0, 0.0], r, m.clone(), SymbolMode::ScaledRadial)?;
        let tf = apply_multiplier_with(&f, &Symbol::Directional(&sym), SYMBOL_OVERSAMPLE)?;
        Ok(CanonicalField { spec, delta, p, r, tf, f, g })
    }

    /// `∫ F_0 conj(g_0)` on the canonical grid.
    pub fn pairing(&self) -> Complex64 {
        self.tf.inner(&self.g).expect("fields share the canonical grid")
    }

    /// Half the transverse period.
    pub fn half_width(&self) -> f64 {
        0.5 * self.spec.width * self.delta
    }

    /// Grid indices and weights of the nodes with `s ∈ [lo, hi]` and `|t| ≤ δ`.
    pub fn nodes_in(&self, lo: f64, hi: f64) -> (Vec<(usize, usize)>, f64) {
        let [hs, ht] = self.tf.spacing();
        let [s0, t0] = self.tf.origin();
        let mut out = Vec::new();
        let i0 = ((lo - s0) / hs).ceil().max(0.0) as usize;
        let i1 = (((hi - s0) / hs).floor() as usize).min(self.spec.ns - 1);
        let j0 = ((-self.delta - t0) / ht).ceil().max(0.0) as usize;
        let j1 = (((self.delta - t0) / ht).floor() as usize).min(self.spec.nt - 1);
        for j in j0..=j1 {
            for i in i0..=i1 {
                out.push((i, j));
            }
        }
        (out, hs * ht)
    }

    /// Bilinear value of `F_0` at local `(s, t)`; zero off the grid window.
    #[inline]
    pub fn eval(&self, s: f64, t: f64) -> Complex64 {
        let [hs, ht] = self.tf.spacing();
        let [s0, t0] = self.tf.origin();
        let u = (s - s0) / hs;
        let v = (t - t0) / ht;
        let (ns, nt) = (self.spec.ns, self.spec.nt);
        if !(u >= 0.0 && v >= 0.0) || u > (ns - 1) as f64 || v > (nt - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = (u as usize).min(ns - 2);
        let j = (v as usize).min(nt - 2);
        let a = u - i as f64;
        let b = v - j as f64;
        let d = self.tf.data();
        let row0 = j * ns;
        let row1 = row0 + ns;
        (d[row0 + i] * (1.0 - a) + d[row0 + i + 1] * a) * (1.0 - b)
            + (d[row1 + i] * (1.0 - a) + d[row1 + i + 1] * a) * b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// `∬ m(√((1 + x/r)² + y²/(δr)²)) ĥ(x) |ρ̂(y)|² dx dy` for a smooth `m`.
    fn continuum(m: &dyn Fn(f64) -> f64, r: f64, delta: f64) -> Complex64 {
        let pr = Profiles::default();
        let xs = 1200;
        let (xa, xb) = (-30.0, 30.0);
        let hx = (xb - xa) / xs as f64;
        let rho: Vec<(f64, f64)> = (0..=2000)
            .map(|k| {
                let y = -10.0 + k as f64 * 0.01;
                (y, pr.rho_hat(y).norm_sqr())
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=xs {
            let x = xa + k as f64 * hx;
            let inner: f64 = rho
                .iter()
                .map(|&(y, w)| w * m(((1.0 + x / r).powi(2) + (y / (delta * r)).powi(2)).sqrt()))
                .sum::<f64>()
                * 0.01;
            acc += pr.h_hat(x) * inner;
        }
        acc * hx
    }

    /// The ball case: `∫ ĥ(x) Φ(x) dx` with `Φ(x)` the mass of `|ρ̂|²` on
    /// `|y| ≤ δr √(1 - (1 + x/r)²)`, integrated in `u = √(-x)`.
    fn ball_continuum(r: f64, delta: f64) -> Complex64 {
        let pr = Profiles::default();
        let (hy, n) = (2e-3, 20000);
        let mut cum = vec![0.0; n + 1];
        let mut prev = pr.rho_hat(0.0).norm_sqr();
        for k in 1..=n {
            let v = pr.rho_hat(k as f64 * hy).norm_sqr();
            cum[k] = cum[k - 1] + 0.5 * (prev + v) * hy;
            prev = v;
        }
        let phi = |x: f64| {
            let a = 1.0 - (1.0 + x / r).powi(2);
            if a <= 0.0 {
                return 0.0;
            }
            let u = (delta * r * a.sqrt() / hy).min(n as f64 - 1.0);
            let i = u as usize;
            let t = u - i as f64;
            2.0 * (cum[i] * (1.0 - t) + cum[i + 1] * t)
        };
        let (umax, nu) = (40f64.sqrt(), 8000);
        let hu = umax / nu as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=nu {
            let u = k as f64 * hu;
            let w = if k == nu { 0.5 } else { 1.0 };
            acc += pr.h_hat(-u * u) * phi(-u * u) * (2.0 * u * w);
        }
        acc * hu
    }

    #[test]
    fn smooth_symbol_matches_continuum() {
        let (r, delta) = (16.0, 0.05);
        let m = |t: f64| (-((t - 1.0) * 40.0).powi(2)).exp() * (3.0 * PI * t).cos();
        let prof = Profile::custom(m);
        let spec = CanonicalSpec::for_grid(1024).unwrap();
        let cf = CanonicalField::build(spec, delta, (2.0, 3.0), 4.0 / 3.0, &prof, r).unwrap();
        let want = continuum(&m, r, delta);
        let got = cf.pairing();
        assert!(want.norm() > 1e-5);
        assert!((got - want).norm() < 2e-5 * want.norm(), "{got} vs {want}");
    }

    #[test]
    fn ball_symbol_near_continuum() {
        let (r, delta) = (4096.0, 0.05);
        let spec = CanonicalSpec::for_grid(512).unwrap();
        let cf = CanonicalField::build(spec, delta, (2.0, 3.0), 4.0 / 3.0, &Profile::Ball, r).unwrap();
        let want = ball_continuum(r, delta);
        let got = cf.pairing();
        assert!((got - want).norm() < 0.02 * want.norm(), "{got} vs {want}");
    }

    #[test]
    fn identity_symbol_pairs_to_zero_and_eval_interpolates() {
        let spec = CanonicalSpec::for_grid(512).unwrap();
        let cf = CanonicalField::build(spec, 0.1, (2.0, 3.0), 1.5, &Profile::Constant(1.0), 8.0).unwrap();
        assert!(cf.pairing().norm() < 1e-12);
        let [s, t] = cf.tf.point(40, 30);
        assert!((cf.eval(s, t) - cf.tf.get(40, 30)).norm() < 1e-12);
        assert_eq!(cf.eval(100.0, 0.0), Complex64::new(0.0, 0.0));
    }
}
