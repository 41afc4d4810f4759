//! Dyadic Hardy-Littlewood maximal function and envelope checks.

use super::bank::FilterBank;
use crate::error::{LabError, Result};
use crate::report::BoundReport;
use crate::sampled::SampledFunction;
use num_complex::Complex64;

fn nonnegative(f: &SampledFunction) -> Result<Vec<f64>> {
    f.values()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            if z.im != 0.0 || z.re < 0.0 {
                Err(LabError::invalid(format!("maximal function needs f >= 0; sample {i} is {z}")))
            } else {
                Ok(z.re)
            }
        })
        .collect()
}

fn dyadic_radii(n: usize) -> Vec<usize> {
    let mut r = vec![0usize];
    let mut m = 1usize;
    while m < n {
        r.push(m);
        m *= 2;
    }
    r.push(n);
    r
}

/// `Mf(x_i) = max_m (1/(2m+1)) Σ_{|j-i|<=m} f_j` over `m ∈ {0, 1, 2, 4, ...}`,
/// with `f` extended by zero outside the grid.
pub fn maximal_function(f: &SampledFunction) -> Result<SampledFunction> {
    let v = nonnegative(f)?;
    let n = v.len();
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + v[i];
    }
    let radii = dyadic_radii(n);
    let out: Vec<f64> = (0..n)
        .map(|i| {
            radii
                .iter()
                .map(|&m| {
                    let a = i.saturating_sub(m);
                    let b = (i + m + 1).min(n);
                    (prefix[b] - prefix[a]) / (2 * m + 1) as f64
                })
                .fold(v[i], f64::max)
        })
        .collect();
    SampledFunction::from_real(f.start(), f.spacing(), &out)
}

/// Periodic version: windows wrap around the grid, radii up to half a period.
pub fn maximal_function_periodic(f: &SampledFunction) -> Result<SampledFunction> {
    let v = nonnegative(f)?;
    let n = v.len();
    let mut prefix = vec![0.0; 3 * n + 1];
    for i in 0..3 * n {
        prefix[i + 1] = prefix[i] + v[i % n];
    }
    let radii: Vec<usize> = dyadic_radii(n / 2).into_iter().filter(|&m| 2 * m < n).collect();
    let out: Vec<f64> = (0..n)
        .map(|i| {
            radii
                .iter()
                .map(|&m| {
                    let c = i + n;
                    (prefix[c + m + 1] - prefix[c - m]) / (2 * m + 1) as f64
                })
                .fold(v[i], f64::max)
        })
        .collect();
    SampledFunction::from_real(f.start(), f.spacing(), &out)
}

/// Smallest constants with `|W_n * F| <= C G_{2^n}` and
/// `|(W_n * F)'| <= 2^n D G_{2^n}` on the grid, per level.
///
/// `envelope(r, x)` must be positive.
pub fn envelope_check(
    f: &SampledFunction,
    bank: &FilterBank,
    envelope: &dyn Fn(f64, f64) -> f64,
) -> Result<BoundReport> {
    let mut cs = Vec::new();
    let mut ds = Vec::new();
    let mut bern = Vec::new();
    let mut bad = None;
    bank.for_each_level(f, true, |n, lvl, der| {
        let r = 2f64.powi(n as i32);
        let der = der.expect("derivative requested");
        let mut c = 0.0f64;
        let mut d = 0.0f64;
        let mut sup = 0.0f64;
        let mut dsup = 0.0f64;
        for i in 0..lvl.len() {
            let g = envelope(r, f.x(i));
            if !(g > 0.0) {
                bad = Some(i);
            }
            c = c.max(lvl[i].norm() / g);
            d = d.max(der[i].norm() / (r * g));
            sup = sup.max(lvl[i].norm());
            dsup = dsup.max(der[i].norm());
        }
        cs.push(c);
        ds.push(d);
        bern.push(if sup > 0.0 { dsup / (r * sup) } else { f64::NAN });
    })?;
    if let Some(i) = bad {
        return Err(LabError::invalid(format!("envelope not positive at sample {i}")));
    }
    let cmax = cs.iter().cloned().fold(0.0, f64::max);
    let dmax = ds.iter().cloned().fold(0.0, f64::max);
    let mut rep = BoundReport::new(
        "envelope_check",
        cmax.max(dmax),
        &["pointwise envelope of Littlewood-Paley pieces", "Bernstein derivative bound"],
    )
    .param("levels", bank.levels());
    rep.set_series("value_constant", &cs);
    rep.set_series("derivative_constant", &ds);
    rep.set_series("bernstein_ratio", &bern);
    rep.set_quantity("value_constant_max", cmax);
    rep.set_quantity("derivative_constant_max", dmax);
    Ok(rep)
}

/// Convenience: a spike of unit mass at the sample nearest `x0`.
pub fn spike(start: f64, spacing: f64, n: usize, x0: f64) -> Result<SampledFunction> {
    let i = ((x0 - start) / spacing).round() as usize;
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[i] = Complex64::new(1.0 / spacing, 0.0);
    SampledFunction::new(start, spacing, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_fixed_periodically() {
        let f = SampledFunction::from_fn(0.0, 0.01, 100, |_| 1.0).unwrap();
        let m = maximal_function_periodic(&f).unwrap();
        assert!(m.values().iter().all(|z| (z.re - 1.0).abs() < 1e-12));
        // with zero extension the centre still sees averages of one
        let m = maximal_function(&f).unwrap();
        assert!(m.values().iter().all(|z| (z.re - 1.0).abs() < 1e-12));
    }

    #[test]
    fn dominates_and_rejects_negative() {
        let f = SampledFunction::from_fn(0.0, 0.01, 300, |x| (7.0 * x).sin().abs()).unwrap();
        let m = maximal_function(&f).unwrap();
        for (a, b) in m.values().iter().zip(f.values()) {
            assert!(a.re >= b.re);
        }
        let g = SampledFunction::from_fn(0.0, 0.01, 10, |x| x - 0.05).unwrap();
        assert!(maximal_function(&g).is_err());
    }

    #[test]
    fn spike_decays_like_inverse_distance() {
        let h = 1e-3;
        let f = spike(-1.0, h, 2001, 0.0).unwrap();
        let m = maximal_function(&f).unwrap();
        for &x in &[0.05, 0.1, 0.3, -0.2] {
            let i = ((x + 1.0) / h).round() as usize;
            let v = m.values()[i].re;
            let want = 1.0 / (2.0 * x.abs());
            assert!(v <= want * 1.01 && v >= want / 2.2, "{x}: {v} vs {want}");
        }
    }
}
