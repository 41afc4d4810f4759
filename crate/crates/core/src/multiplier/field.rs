//! Periodic 2-D sample fields and spectral multipliers on them.

use crate::error::{LabError, Result};
use crate::profile::Profile;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

/// Samples of a function on the periodic rectangle
/// `[x0, x0 + lx) × [y0, y0 + ly)`, stored row by row (`y` outer).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField2D {
    x0: f64,
    y0: f64,
    lx: f64,
    ly: f64,
    nx: usize,
    ny: usize,
    data: Vec<Complex64>,
}

impl GridField2D {
    pub fn zeros(origin: [f64; 2], extent: [f64; 2], shape: [usize; 2]) -> Result<Self> {
        let [nx, ny] = shape;
        if !nx.is_power_of_two() || !ny.is_power_of_two() || nx < 2 || ny < 2 {
            return Err(LabError::invalid(format!("grid shape {nx}×{ny} must be powers of two")));
        }
        if !(extent[0] > 0.0 && extent[1] > 0.0) {
            return Err(LabError::invalid("grid extent must be positive"));
        }
        Ok(GridField2D {
            x0: origin[0],
            y0: origin[1],
            lx: extent[0],
            ly: extent[1],
            nx,
            ny,
            data: vec![Complex64::new(0.0, 0.0); nx * ny],
        })
    }

    /// Square `n × n` grid of side `l` centred at `centre`.
    pub fn square(centre: [f64; 2], l: f64, n: usize) -> Result<Self> {
        Self::zeros([centre[0] - 0.5 * l, centre[1] - 0.5 * l], [l, l], [n, n])
    }

    pub fn from_fn(
        origin: [f64; 2],
        extent: [f64; 2],
        shape: [usize; 2],
        f: impl Fn(f64, f64) -> Complex64 + Sync,
    ) -> Result<Self> {
        let mut g = Self::zeros(origin, extent, shape)?;
        g.fill(f);
        Ok(g)
    }

    pub fn fill(&mut self, f: impl Fn(f64, f64) -> Complex64 + Sync) {
        let (nx, hx, hy, x0, y0) = (self.nx, self.lx / self.nx as f64, self.ly / self.ny as f64, self.x0, self.y0);
        self.data.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
            let y = y0 + j as f64 * hy;
            for (i, v) in row.iter_mut().enumerate() {
                *v = f(x0 + i as f64 * hx, y);
            }
        });
    }

    /// A field on the same grid with new values.
    pub fn like(&self, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != self.data.len() {
            return Err(LabError::invalid("data length does not match the grid"));
        }
        Ok(GridField2D { data, ..*self })
    }

    pub fn same_grid(&self, o: &GridField2D) -> bool {
        self.nx == o.nx && self.ny == o.ny && self.x0 == o.x0 && self.y0 == o.y0 && self.lx == o.lx && self.ly == o.ly
    }

    pub fn shape(&self) -> [usize; 2] {
        [self.nx, self.ny]
    }

    pub fn extent(&self) -> [f64; 2] {
        [self.lx, self.ly]
    }

    pub fn origin(&self) -> [f64; 2] {
        [self.x0, self.y0]
    }

    pub fn spacing(&self) -> [f64; 2] {
        [self.lx / self.nx as f64, self.ly / self.ny as f64]
    }

    pub fn cell_area(&self) -> f64 {
        let [hx, hy] = self.spacing();
        hx * hy
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        let [hx, hy] = self.spacing();
        [self.x0 + i as f64 * hx, self.y0 + j as f64 * hy]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.nx + i]
    }

    /// `(Σ |v|^p h_x h_y)^{1/p}`; `p = ∞` gives the largest modulus.
    pub fn norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
        }
        let s: f64 = self.data.par_iter().map(|v| v.norm().powf(p)).sum();
        (s * self.cell_area()).powf(1.0 / p)
    }

    /// `∫ a conj(b)`.
    pub fn inner(&self, o: &GridField2D) -> Result<Complex64> {
        if !self.same_grid(o) {
            return Err(LabError::invalid("fields live on different grids"));
        }
        let s: Complex64 = self.data.par_iter().zip(&o.data).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.cell_area())
    }

    /// Signed frequency `k / L` of FFT index `k` along an axis of `n` points.
    pub fn frequency(k: usize, n: usize, l: f64) -> f64 {
        let s = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
        s / l
    }

    /// Unnormalised forward transform (`inverse = false`) or its inverse
    /// scaled by `1 / (nx ny)`.
    pub fn fft(&mut self, inverse: bool) {
        fft2(&mut self.data, self.nx, self.ny, inverse);
    }
}

/// In-place 2-D FFT of row-major data (`nx` columns, `ny` rows).
pub fn fft2(data: &mut [Complex64], nx: usize, ny: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let (px, py) = if inverse {
        (planner.plan_fft_inverse(nx), planner.plan_fft_inverse(ny))
    } else {
        (planner.plan_fft_forward(nx), planner.plan_fft_forward(ny))
    };
    data.par_chunks_mut(nx).for_each(|row| px.process(row));
    let mut t = vec![Complex64::new(0.0, 0.0); nx * ny];
    transpose(data, &mut t, nx, ny);
    t.par_chunks_mut(ny).for_each(|col| py.process(col));
    transpose(&t, data, ny, nx);
    if inverse {
        let s = 1.0 / (nx * ny) as f64;
        data.par_iter_mut().for_each(|v| *v *= s);
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], nx: usize, ny: usize) {
    const B: usize = 32;
    dst.par_chunks_mut(ny * B.min(nx)).enumerate().for_each(|(bi, block)| {
        let i0 = bi * B;
        let rows = block.len() / ny;
        for j in 0..ny {
            for di in 0..rows {
                block[di * ny + j] = src[j * nx + i0 + di];
            }
        }
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymbolMode {
    /// `m(<ξ, u>)`.
    Directional,
    /// `m(|u + ξ/r|)`.
    ScaledRadial,
}

#[derive(Debug, Clone)]
pub struct DirectionalSymbol {
    pub direction: [f64; 2],
    pub r: f64,
    pub profile: Profile,
    pub mode: SymbolMode,
}

impl DirectionalSymbol {
    pub fn new(direction: [f64; 2], r: f64, profile: Profile, mode: SymbolMode) -> Result<Self> {
        let n = direction[0].hypot(direction[1]);
        if !(n > 0.0) || !n.is_finite() {
            return Err(LabError::invalid("symbol direction must be nonzero"));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(LabError::invalid(format!("scale r = {r} must be positive")));
        }
        Ok(DirectionalSymbol { direction: [direction[0] / n, direction[1] / n], r, profile, mode })
    }

    pub fn eval(&self, xi: [f64; 2]) -> f64 {
        let [ux, uy] = self.direction;
        match self.mode {
            SymbolMode::Directional => self.profile.eval(xi[0] * ux + xi[1] * uy),
            SymbolMode::ScaledRadial => {
                self.profile.eval((ux + xi[0] / self.r).hypot(uy + xi[1] / self.r))
            }
        }
    }
}

/// A Fourier multiplier symbol on the plane.
pub enum Symbol<'a> {
    Directional(&'a DirectionalSymbol),
    /// `m(|ξ|)`.
    Radial(&'a Profile),
    Custom(&'a (dyn Fn([f64; 2]) -> Complex64 + Sync)),
}

impl Symbol<'_> {
    pub fn eval(&self, xi: [f64; 2]) -> Complex64 {
        match self {
            Symbol::Directional(s) => Complex64::new(s.eval(xi), 0.0),
            Symbol::Radial(m) => Complex64::new(m.eval(xi[0].hypot(xi[1])), 0.0),
            Symbol::Custom(f) => f(xi),
        }
    }
}

/// `F^{-1}(σ · F f)` on the periodic grid.
pub fn apply_multiplier(f: &GridField2D, sym: &Symbol) -> Result<GridField2D> {
    apply_multiplier_with(f, sym, 1)
}

/// A cell counts as straddling a jump of the symbol when a corner value
/// differs from the centre value by more than this fraction of the largest
/// symbol value on the grid.
pub const JUMP_FRACTION: f64 = 0.25;

/// As [`apply_multiplier`], but with `oversample > 1` the symbol is averaged
/// over each frequency cell that straddles a jump, using an
/// `oversample × oversample` midpoint rule.
pub fn apply_multiplier_with(f: &GridField2D, sym: &Symbol, oversample: usize) -> Result<GridField2D> {
    if oversample == 0 {
        return Err(LabError::invalid("oversample must be at least 1"));
    }
    let (nx, ny, lx, ly) = (f.nx, f.ny, f.lx, f.ly);
    let mut sigma = vec![Complex64::new(0.0, 0.0); nx * ny];
    sigma.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        let eta = GridField2D::frequency(j, ny, ly);
        for (i, v) in row.iter_mut().enumerate() {
            *v = sym.eval([GridField2D::frequency(i, nx, lx), eta]);
        }
    });
    if sigma.par_iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
        return Err(LabError::invalid("symbol is not finite on the grid frequencies"));
    }
    if oversample > 1 {
        let top = sigma.par_iter().map(|s| s.norm()).reduce(|| 0.0, f64::max);
        let (dx, dy) = (1.0 / lx, 1.0 / ly);
        let k = oversample as f64;
        sigma.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
            let eta = GridField2D::frequency(j, ny, ly);
            for (i, v) in row.iter_mut().enumerate() {
                let xi = GridField2D::frequency(i, nx, lx);
                let corners = [(-0.5, -0.5), (0.5, -0.5), (-0.5, 0.5), (0.5, 0.5)];
                let jumps = corners.iter().any(|&(a, b)| {
                    let full = (sym.eval([xi + a * dx, eta + b * dy]) - *v).norm();
                    if full <= JUMP_FRACTION * top {
                        return false;
                    }
                    // a jump keeps all or nothing of its size at half the offset
                    let half = (sym.eval([xi + 0.5 * a * dx, eta + 0.5 * b * dy]) - *v).norm() / full;
                    !(0.1..=0.9).contains(&half)
                });
                if jumps {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for bj in 0..oversample {
                        let e = eta + ((bj as f64 + 0.5) / k - 0.5) * dy;
                        for ai in 0..oversample {
                            acc += sym.eval([xi + ((ai as f64 + 0.5) / k - 0.5) * dx, e]);
                        }
                    }
                    *v = acc / (k * k);
                }
            }
        });
    }
    let mut g = f.clone();
    g.fft(false);
    g.data.par_iter_mut().zip(&sigma).for_each(|(v, s)| *v *= s);
    g.fft(true);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gauss(s: f64) -> impl Fn(f64, f64) -> Complex64 + Sync {
        move |x, y| Complex64::new((-(x * x + y * y) / (2.0 * s * s)).exp(), 0.0)
    }

    #[test]
    fn identity_and_shift() {
        let f = GridField2D::from_fn([-4.0, -4.0], [8.0, 8.0], [64, 64], gauss(0.5)).unwrap();
        let one = Profile::Constant(1.0);
        let g = apply_multiplier(&f, &Symbol::Radial(&one)).unwrap();
        for (a, b) in f.data().iter().zip(g.data()) {
            assert!((a - b).norm() < 1e-12);
        }
        let a = [0.5, -0.5];
        let shift = move |xi: [f64; 2]| Complex64::from_polar(1.0, -2.0 * PI * (a[0] * xi[0] + a[1] * xi[1]));
        let g = apply_multiplier(&f, &Symbol::Custom(&shift)).unwrap();
        let want = GridField2D::from_fn([-4.0, -4.0], [8.0, 8.0], [64, 64], |x, y| gauss(0.5)(x - a[0], y - a[1]))
            .unwrap();
        let err = g.data().iter().zip(want.data()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn gaussian_symbol_composes_variances() {
        // e^{-2π²t|ξ|²} convolves with the heat kernel of variance t
        let s0 = 0.4f64;
        let t = 0.09f64;
        let f = GridField2D::from_fn([-6.0, -6.0], [12.0, 12.0], [128, 128], gauss(s0)).unwrap();
        let m = Profile::custom(move |r| (-2.0 * PI * PI * t * r * r).exp());
        let g = apply_multiplier(&f, &Symbol::Radial(&m)).unwrap();
        let s2 = s0 * s0 + t;
        let amp = s0 * s0 / s2;
        let want = GridField2D::from_fn([-6.0, -6.0], [12.0, 12.0], [128, 128], |x, y| {
            gauss(s2.sqrt())(x, y) * amp
        })
        .unwrap();
        for (a, b) in g.data().iter().zip(want.data()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn parseval_and_contraction() {
        let f = GridField2D::from_fn([0.0, 0.0], [2.0, 1.0], [32, 16], |x, y| {
            Complex64::new((3.0 * x).sin() + y, x * y)
        })
        .unwrap();
        let mut g = f.clone();
        g.fft(false);
        let e1: f64 = f.data().iter().map(|v| v.norm_sqr()).sum();
        let e2: f64 = g.data().iter().map(|v| v.norm_sqr()).sum::<f64>() / (32.0 * 16.0);
        assert!((e1 - e2).abs() < 1e-9 * e1);
        let ball = Profile::Ball;
        let h = apply_multiplier(&f, &Symbol::Radial(&ball)).unwrap();
        assert!(h.norm(2.0) <= f.norm(2.0) * (1.0 + 1e-9));
        let nan = Profile::Constant(f64::NAN);
        assert!(apply_multiplier(&f, &Symbol::Radial(&nan)).is_err());
    }
}
