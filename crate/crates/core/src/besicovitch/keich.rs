//! Perron-tree (Keich) tube families.
//!
//! Tube `j` has slope `s_j = σ j / N` against the vertical, written in binary
//! as `s = σ Σ b_i 2^{-i}`. Its axis is the line `x = Σ_i b_i σ 2^{-i} (y - p_i)`
//! with pivot heights `p_1 < ... < p_k`: at height `p_i` the `i`-th digit stops
//! mattering, so the tubes bunch together one digit at a time.

use crate::error::{LabError, Result};
use crate::geometry::measures::certificate_of;
use crate::geometry::tube::{make_tube, translate_tube, Tube, DEFAULT_WINDOW};
use crate::geometry::{FamilyMeta, TubeFamily};

/// Layout knobs for [`keich_family_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeichLayout {
    /// Slope range `σ`; directions span `[0, atan σ)` from the vertical.
    pub sigma: f64,
    /// Height of the pivot band as a fraction of the shortest tube height.
    pub pivot_band: f64,
    /// Width as a multiple of the safe width from the gap estimate.
    pub width_factor: f64,
}

impl Default for KeichLayout {
    fn default() -> Self {
        KeichLayout { sigma: 0.5, pivot_band: 1.0, width_factor: 0.9 }
    }
}

/// Number of axial shifts tried per offending tube during repair.
const REPAIR_STEPS: i32 = 4;

pub fn keich_family(k: u32, window: (f64, f64)) -> Result<TubeFamily> {
    keich_family_with(k, window, KeichLayout::default())
}

/// Pivot heights for `k` digits, spread evenly over a band centred at 0.
pub fn pivots(k: u32, band: f64) -> Vec<f64> {
    (1..=k).map(|i| band * ((i as f64 - 0.5) / k as f64 - 0.5)).collect()
}

/// Horizontal offset of slope `j / N` at height `y`.
fn axis_x(j: usize, k: u32, sigma: f64, piv: &[f64], y: f64) -> f64 {
    let mut x = 0.0;
    for i in 1..=k {
        if (j >> (k - i)) & 1 == 1 {
            x += sigma * (0.5f64).powi(i as i32) * (y - piv[i as usize - 1]);
        }
    }
    x
}

pub fn keich_family_with(k: u32, window: (f64, f64), layout: KeichLayout) -> Result<TubeFamily> {
    if !(2..=14).contains(&k) {
        return Err(LabError::invalid(format!("k must lie in [2, 14], got {k}")));
    }
    let (a, b) = window;
    if !(a < b) {
        return Err(LabError::invalid("window needs a < b"));
    }
    if a <= 1.0 {
        return Err(LabError::invalid("translates must start beyond the tube: need a > 1"));
    }
    let n = 1usize << k;
    let sigma = layout.sigma;
    let cos_min = 1.0 / (1.0 + sigma * sigma).sqrt();
    let band = layout.pivot_band * cos_min;
    let piv = pivots(k, band);
    // Lines of different slope are at least σ/N·(y - p_max) apart above the
    // pivots; translates start at height (a - 1/2) cos φ.
    let clearance = (a - 0.5) * cos_min - piv[k as usize - 1];
    if clearance <= 0.0 {
        return Err(LabError::ConstructionFailed(format!(
            "window start {a} does not clear the pivot band"
        )));
    }
    let delta = (layout.width_factor * 0.5 * clearance * cos_min * sigma / n as f64).min(0.5);
    let mut tubes = Vec::with_capacity(n);
    for j in 0..n {
        let s = sigma * j as f64 / n as f64;
        let norm = (1.0 + s * s).sqrt();
        let dir = [s / norm, 1.0 / norm];
        let mid = [axis_x(j, k, sigma, &piv, 0.0), 0.0];
        let origin = [mid[0] - 0.5 * dir[0], mid[1] - 0.5 * dir[1]];
        tubes.push(make_tube(2, &origin, &dir, delta, window)?);
    }
    let repaired = repair(&mut tubes)?;
    let mut meta = FamilyMeta { name: format!("keich-k{k}"), ..Default::default() };
    meta.params.insert("k".into(), k.into());
    meta.params.insert("sigma".into(), sigma.into());
    meta.params.insert("pivot_band".into(), layout.pivot_band.into());
    meta.params.insert("width_factor".into(), layout.width_factor.into());
    meta.params.insert("repaired_tubes".into(), repaired.into());
    TubeFamily::new(tubes, meta)
}

/// Slides tubes whose translates collide along their own axis by up to
/// `4δ`. Returns how many tubes were moved.
pub(crate) fn repair(tubes: &mut [Tube]) -> Result<usize> {
    let mut cert = certificate_of(&tubes.iter().map(translate_tube).collect::<Vec<_>>());
    if cert.passed {
        return Ok(0);
    }
    let delta = tubes[0].delta();
    let mut moved = 0;
    let mut budget = 4 * tubes.len();
    while let Some(&(_, j)) = cert.offending.first() {
        if budget == 0 {
            break;
        }
        budget -= 1;
        let base = tubes[j].clone();
        let mut fixed = false;
        'shift: for step in 1..=REPAIR_STEPS {
            for sign in [1.0, -1.0] {
                let cand = base.slid(sign * step as f64 * delta);
                let cand_tr = translate_tube(&cand);
                let clash = tubes.iter().enumerate().any(|(i, t)| {
                    i != j
                        && !crate::geometry::tubes_disjoint(&translate_tube(t), &cand_tr)
                            .unwrap_or(false)
                });
                if !clash {
                    tubes[j] = cand;
                    fixed = true;
                    break 'shift;
                }
            }
        }
        if !fixed {
            return Err(LabError::ConstructionFailed(format!(
                "tube {j} still collides after shifting up to {REPAIR_STEPS} widths; {} offending pairs",
                cert.offending.len()
            )));
        }
        moved += 1;
        cert = certificate_of(&tubes.iter().map(translate_tube).collect::<Vec<_>>());
    }
    if !cert.passed {
        return Err(LabError::ConstructionFailed(format!(
            "repair budget exhausted with {} offending pairs",
            cert.offending.len()
        )));
    }
    Ok(moved)
}

pub fn default_window() -> (f64, f64) {
    DEFAULT_WINDOW
}
