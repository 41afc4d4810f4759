//! Spectral application of the filter bank to sampled functions.

use super::window::{partition_residual, support, w_n};
use crate::error::{LabError, Result};
use crate::sampled::SampledFunction;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Sampling grid a bank is built for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub len: usize,
    pub spacing: f64,
    /// Periodic samples are transformed as they are; otherwise the grid is
    /// zero padded to at least twice its length.
    pub periodic: bool,
}

impl GridSpec {
    pub fn of(f: &SampledFunction, periodic: bool) -> Self {
        GridSpec { len: f.len(), spacing: f.spacing(), periodic }
    }

    pub fn fft_len(&self) -> usize {
        if self.periodic {
            self.len
        } else {
            (2 * self.len).next_power_of_two()
        }
    }

    pub fn nyquist(&self) -> f64 {
        0.5 / self.spacing
    }
}

#[derive(Debug, Clone)]
pub struct FilterBank {
    levels: u32,
    grid: GridSpec,
    residual: f64,
}

pub const PARTITION_TOL: f64 = 1e-10;

/// Builds a bank with levels `0..=levels` for the given grid and checks the
/// partition of unity on the grid's frequencies up to `2^levels`.
pub fn build_filterbank(levels: u32, grid: GridSpec) -> Result<FilterBank> {
    if levels < 1 {
        return Err(LabError::invalid("need at least one level"));
    }
    if grid.len < 2 || !(grid.spacing > 0.0) {
        return Err(LabError::invalid("grid needs two or more samples and positive spacing"));
    }
    let top = 2f64.powi(levels as i32);
    let m = grid.fft_len();
    let df = 1.0 / (m as f64 * grid.spacing);
    let count = ((top / df).floor() as usize).min(m / 2).min(1 << 16);
    let step = (top / df / count.max(1) as f64).max(1.0);
    let residual =
        partition_residual(levels, (0..=count).map(|i| (i as f64 * step * df).min(top)));
    if residual > PARTITION_TOL {
        return Err(LabError::ConstructionFailed(format!(
            "partition of unity residual {residual:e} exceeds {PARTITION_TOL:e}"
        )));
    }
    Ok(FilterBank { levels, grid, residual })
}

impl FilterBank {
    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Spectral multiplier of level `n` at frequency `xi`.
    pub fn multiplier(&self, n: u32, xi: f64) -> f64 {
        w_n(n, xi)
    }

    fn check(&self, f: &SampledFunction) -> Result<()> {
        if f.len() != self.grid.len || (f.spacing() - self.grid.spacing).abs() > 1e-12 * self.grid.spacing {
            return Err(LabError::invalid("function grid does not match the filter bank"));
        }
        let top = 2f64.powi(self.levels as i32);
        if top > self.grid.nyquist() * (1.0 + 1e-12) {
            return Err(LabError::BandExceeded(format!(
                "level frequency {top} exceeds the Nyquist frequency {}",
                self.grid.nyquist()
            )));
        }
        Ok(())
    }

    /// Calls `visit(n, samples)` with `W_n * f` on the original grid for each
    /// level, reusing one buffer. With `derivative` the spectral derivative
    /// of each level is passed as well.
    pub fn for_each_level(
        &self,
        f: &SampledFunction,
        derivative: bool,
        mut visit: impl FnMut(u32, &[Complex64], Option<&[Complex64]>),
    ) -> Result<()> {
        self.check(f)?;
        let m = self.grid.fft_len();
        let h = self.grid.spacing;
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        let mut spec = vec![Complex64::new(0.0, 0.0); m];
        spec[..f.len()].copy_from_slice(f.values());
        fwd.process(&mut spec);
        let df = 1.0 / (m as f64 * h);
        let freq = |i: usize| if i <= m / 2 { i as f64 * df } else { (i as f64 - m as f64) * df };
        let scale = 1.0 / m as f64;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let mut dbuf = if derivative { vec![Complex64::new(0.0, 0.0); m] } else { Vec::new() };
        for n in 0..=self.levels {
            let (_, hi) = support(n);
            buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            if derivative {
                dbuf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            }
            let kmax = ((hi / df).ceil() as usize).min(m / 2);
            let mut touch = |i: usize| {
                let xi = freq(i);
                let wv = w_n(n, xi);
                if wv != 0.0 {
                    buf[i] = spec[i] * (wv * scale);
                    if derivative {
                        dbuf[i] = buf[i] * Complex64::new(0.0, 2.0 * PI * xi);
                    }
                }
            };
            for i in 0..=kmax {
                touch(i);
            }
            for i in (m - kmax).max(kmax + 1)..m {
                touch(i);
            }
            inv.process(&mut buf);
            if derivative {
                inv.process(&mut dbuf);
                visit(n, &buf[..f.len()], Some(&dbuf[..f.len()]));
            } else {
                visit(n, &buf[..f.len()], None);
            }
        }
        Ok(())
    }
}

/// `W_n * f` for `n = 0..=N`.
pub fn lp_coefficients(f: &SampledFunction, bank: &FilterBank) -> Result<Vec<SampledFunction>> {
    let mut out = Vec::with_capacity(bank.levels() as usize + 1);
    bank.for_each_level(f, false, |_, v, _| {
        out.push(SampledFunction::new(f.start(), f.spacing(), v.to_vec()));
    })?;
    out.into_iter().collect()
}

/// `||W_n * f||_∞` for `n = 0..=N` without keeping the levels.
pub fn lp_sup_norms(f: &SampledFunction, bank: &FilterBank) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(bank.levels() as usize + 1);
    bank.for_each_level(f, false, |_, v, _| {
        out.push(v.iter().fold(0.0f64, |a, z| a.max(z.norm())));
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic(n: usize, f: impl Fn(f64) -> Complex64) -> SampledFunction {
        SampledFunction::from_complex_fn(0.0, 1.0 / n as f64, n, f).unwrap()
    }

    #[test]
    fn constant_lives_in_level_zero() {
        let f = periodic(256, |_| Complex64::new(1.0, 0.0));
        let bank = build_filterbank(6, GridSpec::of(&f, true)).unwrap();
        let c = lp_coefficients(&f, &bank).unwrap();
        assert!(c[0].values().iter().all(|z| (z - 1.0).norm() < 1e-12));
        for lvl in &c[1..] {
            assert!(lvl.sup_norm() < 1e-12);
        }
    }

    #[test]
    fn pure_tone_is_diagonal() {
        let xi0 = 24.0;
        let f = periodic(512, |x| Complex64::from_polar(1.0, 2.0 * PI * xi0 * x));
        let bank = build_filterbank(7, GridSpec::of(&f, true)).unwrap();
        let c = lp_coefficients(&f, &bank).unwrap();
        for (n, lvl) in c.iter().enumerate() {
            let want = w_n(n as u32, xi0);
            for (a, b) in lvl.values().iter().zip(f.values()) {
                assert!((a - b * want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn band_checked() {
        let f = periodic(64, |_| Complex64::new(0.0, 0.0));
        let bank = build_filterbank(6, GridSpec::of(&f, true)).unwrap();
        assert!(matches!(lp_coefficients(&f, &bank), Err(LabError::BandExceeded(_))));
    }

    #[test]
    fn reconstruction_of_band_limited_input() {
        let f = periodic(256, |x| Complex64::new((2.0 * PI * 3.0 * x).cos() + 0.5 * (2.0 * PI * 40.0 * x).sin(), 0.0));
        let bank = build_filterbank(7, GridSpec::of(&f, true)).unwrap();
        let c = lp_coefficients(&f, &bank).unwrap();
        for i in 0..f.len() {
            let s: Complex64 = c.iter().map(|l| l.values()[i]).sum();
            assert!((s - f.values()[i]).norm() < 1e-12);
        }
    }
}
