//! Tube test functions on a world grid and the pairing they feed.

use super::field::{apply_multiplier, DirectionalSymbol, GridField2D, Symbol, SymbolMode};
use super::profiles::Profiles;
use crate::error::{LabError, Result};
use crate::geometry::{Tube, TubeFamily};
use crate::profile::Profile;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Room required around the family on the world grid.
pub const GRID_MARGIN: f64 = 4.0;

/// Largest grid spacing allowed, as a fraction of the tube width.
pub const MAX_SPACING_FRACTION: f64 = 0.25;

/// `f_j` supported in the tube and `g_j` in its translate.
#[derive(Debug, Clone)]
pub struct TestFunctionPair {
    pub f: GridField2D,
    pub g: GridField2D,
}

/// Conjugate exponent.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Square grid of side `8 × diameter` centred on the family.
pub fn world_grid(family: &TubeFamily, n: usize) -> Result<GridField2D> {
    let (lo, hi) = family_box(family);
    let diam = (hi[0] - lo[0]).hypot(hi[1] - lo[1]);
    GridField2D::square([0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])], 8.0 * diam, n)
}

/// Bounding box of the tubes together with their translates.
pub fn family_box(family: &TubeFamily) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for t in family.tubes().iter().chain(family.translates().iter()) {
        for c in t.corners() {
            for k in 0..2 {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
        }
    }
    (lo, hi)
}

fn check_grid(family: &TubeFamily, grid: &GridField2D) -> Result<()> {
    if family.dim() != 2 {
        return Err(LabError::invalid("test functions are built in the plane only"));
    }
    let (lo, hi) = family_box(family);
    let o = grid.origin();
    let e = grid.extent();
    for k in 0..2 {
        let room = (lo[k] - o[k]).min(o[k] + e[k] - hi[k]);
        if e[k] < hi[k] - lo[k] + GRID_MARGIN || room < 0.5 * GRID_MARGIN {
            return Err(LabError::DomainTooSmall(format!(
                "family spans [{:.3}, {:.3}] on axis {k}; grid [{:.3}, {:.3}] leaves less than {} on a side",
                lo[k],
                hi[k],
                o[k],
                o[k] + e[k],
                0.5 * GRID_MARGIN
            )));
        }
    }
    let h = grid.spacing()[0].max(grid.spacing()[1]);
    if h > MAX_SPACING_FRACTION * family.delta() {
        return Err(LabError::ResolutionTooCoarse(format!(
            "grid spacing {h:.3e} exceeds δ/4 = {:.3e}",
            MAX_SPACING_FRACTION * family.delta()
        )));
    }
    Ok(())
}

/// `δ^{-1/p} f(s - 1) ρ(t/δ)` in the local coordinates of `tube`.
pub fn f_local(pr: &Profiles, delta: f64, p: f64, s: f64, t: f64) -> f64 {
    delta.powf(-1.0 / p) * pr.f(s - 1.0) * pr.rho(t / delta)
}

/// `δ^{-1/q} g(s - 1) ρ(t/δ)`.
pub fn g_local(pr: &Profiles, delta: f64, q: f64, s: f64, t: f64) -> f64 {
    delta.powf(-1.0 / q) * pr.g(s - 1.0) * pr.rho(t / delta)
}

fn tube_field(
    grid: &GridField2D,
    tube: &Tube,
    local: impl Fn(f64, f64) -> f64 + Sync,
) -> Result<GridField2D> {
    let mut out = grid.clone();
    out.fill(|x, y| {
        let (s, t) = tube.local2(x, y);
        Complex64::new(local(s, t), 0.0)
    });
    Ok(out)
}

/// One pair `(f_j, g_j)` per tube on the grid of `template`.
pub fn build_test_functions(
    family: &TubeFamily,
    p: f64,
    template: &GridField2D,
) -> Result<Vec<TestFunctionPair>> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(LabError::invalid(format!("p = {p} must lie in (1, ∞)")));
    }
    check_grid(family, template)?;
    let q = conjugate(p);
    let delta = family.delta();
    family
        .tubes()
        .par_iter()
        .map(|tube| {
            let pr = Profiles::for_window(tube.window())?;
            Ok(TestFunctionPair {
                f: tube_field(template, tube, |s, t| f_local(&pr, delta, p, s, t))?,
                g: tube_field(template, tube, |s, t| g_local(&pr, delta, q, s, t))?,
            })
        })
        .collect()
}

/// `(Σ |F_j|²)^{1/2}` pointwise.
pub fn square_function(fields: &[GridField2D]) -> Result<GridField2D> {
    let first = fields.first().ok_or_else(|| LabError::invalid("no fields given"))?;
    if fields.iter().any(|f| !f.same_grid(first)) {
        return Err(LabError::invalid("fields live on different grids"));
    }
    let n = first.data().len();
    let data: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| Complex64::new(fields.iter().map(|f| f.data()[i].norm_sqr()).sum::<f64>().sqrt(), 0.0))
        .collect();
    first.like(data)
}

/// Symbols `m(|u_j + ξ/r|)` for each tube direction.
pub fn tube_symbols(family: &TubeFamily, m: &Profile, r: f64) -> Result<Vec<DirectionalSymbol>> {
    family
        .tubes()
        .iter()
        .map(|t| {
            let u = t.direction();
            DirectionalSymbol::new([u[0], u[1]], r, m.clone(), SymbolMode::ScaledRadial)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub per_j: Vec<Complex64>,
    pub mean: Complex64,
    /// `max_j |per_j - mean|`.
    pub spread: f64,
}

impl Pairing {
    pub fn from_values(per_j: Vec<Complex64>) -> Self {
        let n = per_j.len().max(1) as f64;
        let mean = per_j.iter().sum::<Complex64>() / n;
        let spread = per_j.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
        Pairing { per_j, mean, spread }
    }

    pub fn total(&self) -> Complex64 {
        self.per_j.iter().sum()
    }
}

/// `∫ (T_j f_j) conj(g_j)` for every `j`.
pub fn kakeya_pairing(pairs: &[TestFunctionPair], syms: &[DirectionalSymbol]) -> Result<Pairing> {
    if pairs.len() != syms.len() {
        return Err(LabError::invalid(format!(
            "{} test pairs but {} symbols",
            pairs.len(),
            syms.len()
        )));
    }
    let per_j = pairs
        .par_iter()
        .zip(syms)
        .map(|(pair, sym)| {
            let tf = apply_multiplier(&pair.f, &Symbol::Directional(sym))?;
            tf.inner(&pair.g)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Pairing::from_values(per_j))
}
