//! Littlewood-Paley pieces of `θ -> m(cos θ)` on the circle.

use crate::error::{LabError, Result};
use crate::filterbank::{lp_coefficients, FilterBank, GridSpec};
use crate::profile::Profile;
use crate::sampled::SampledFunction;
use std::f64::consts::TAU;

/// Periodic grid of `len` points on `[0, 2π)`.
pub fn theta_grid(len: usize) -> GridSpec {
    GridSpec { len, spacing: TAU / len as f64, periodic: true }
}

/// `θ -> m(cos θ)` sampled on the bank's grid, which must be periodic with
/// period `2π`.
pub fn cos_composition(m: &Profile, grid: &GridSpec) -> Result<SampledFunction> {
    if !grid.periodic || ((grid.len as f64 * grid.spacing) - TAU).abs() > 1e-9 {
        return Err(LabError::invalid("the θ-grid must be periodic with period 2π"));
    }
    let vals: Vec<f64> = (0..grid.len).map(|i| m.eval((i as f64 * grid.spacing).cos())).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(LabError::invalid("profile is not finite on (-1, 1)"));
    }
    SampledFunction::from_real(0.0, grid.spacing, &vals)
}

/// `W_n * (m ∘ cos)` for `n = 0..=N`.
pub fn spherical_lp(m: &Profile, bank: &FilterBank) -> Result<Vec<SampledFunction>> {
    let f = cos_composition(m, &bank.grid())?;
    lp_coefficients(&f, bank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::build_filterbank;

    #[test]
    fn linear_profile_lives_in_level_zero() {
        let bank = build_filterbank(6, theta_grid(4096)).unwrap();
        let lv = spherical_lp(&Profile::Linear, &bank).unwrap();
        for (n, l) in lv.iter().enumerate().skip(1) {
            assert!(l.sup_norm() < 1e-12, "level {n}");
        }
        assert!((lv[0].values()[0].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_period() {
        let g = GridSpec { len: 100, spacing: 0.1, periodic: true };
        assert!(cos_composition(&Profile::Linear, &g).is_err());
    }
}
