//! Numerical check of the change of variable
//! `√((1 + x/r₁)² + |y|²/r₂²) ≈ exp(x/r₁)` inside a multiplier profile.

use super::profiles::Profiles;
use crate::error::{LabError, Result};
use crate::profile::Profile;
use crate::report::BoundReport;
use crate::sampled::SampledFunction;
use num_complex::Complex64;
use rayon::prelude::*;

/// Simpson panels per sample cell in the coarse pass; the fine pass doubles it.
pub const COV_PANELS: usize = 2;

/// `A` and `B` for one panel count.
struct Pass {
    a: Complex64,
    b: Complex64,
}

/// `∫ F(x) m(τ(x)) dx` with `F` linear between its samples, by composite
/// Simpson on every sample cell after splitting at the `cuts`.
fn integrate(f: &SampledFunction, m: &Profile, tau: impl Fn(f64) -> f64, cuts: &[f64], panels: usize) -> Complex64 {
    let h = f.spacing();
    let v = f.values();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut piece = |a: f64, b: f64, i: usize| {
        let x0 = f.x(i);
        let lin = |x: f64| {
            let t = (x - x0) / h;
            v[i] * (1.0 - t) + v[i + 1] * t
        };
        let w = (b - a) / panels as f64;
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..panels {
            let lo = a + k as f64 * w;
            let hi = lo + w;
            let mid = 0.5 * (lo + hi);
            // evaluate just inside the ends so a cut belongs to one side only
            let e = 1e-12 * w;
            s += (lin(lo) * m.eval(tau(lo + e)) + lin(mid) * m.eval(tau(mid)) * 4.0 + lin(hi) * m.eval(tau(hi - e)))
                * (w / 6.0);
        }
        acc += s;
    };
    let mut c = 0;
    for i in 0..f.len() - 1 {
        let (a, b) = (f.x(i), f.x(i + 1));
        while c < cuts.len() && cuts[c] <= a {
            c += 1;
        }
        let mut lo = a;
        let mut k = c;
        while k < cuts.len() && cuts[k] < b {
            piece(lo, cuts[k], i);
            lo = cuts[k];
            k += 1;
        }
        piece(lo, b, i);
    }
    acc
}

fn pass(
    f: &SampledFunction,
    g: &SampledFunction,
    m: &Profile,
    breaks: &[f64],
    (r1, r2): (f64, f64),
    panels: usize,
) -> Pass {
    let mut bcuts: Vec<f64> = breaks.iter().filter(|&&t| t > 0.0).map(|t| r1 * t.ln()).collect();
    bcuts.sort_by(f64::total_cmp);
    let bcore = integrate(f, m, |x| (x / r1).exp(), &bcuts, panels);
    let n = g.len();
    let parts: Vec<(Complex64, Complex64)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let y = g.x(j);
            let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 } * g.spacing();
            let wg = g.values()[j] * w;
            if wg == Complex64::new(0.0, 0.0) {
                return (wg, wg);
            }
            let c = (y / r2) * (y / r2);
            // τ is increasing on x > -r1, so each break is crossed once there
            let mut cuts: Vec<f64> = breaks
                .iter()
                .filter(|&&t| t * t > c)
                .map(|t| r1 * ((t * t - c).sqrt() - 1.0))
                .collect();
            cuts.sort_by(f64::total_cmp);
            let inner = integrate(f, m, |x| ((1.0 + x / r1).powi(2) + c).sqrt(), &cuts, panels);
            (wg * inner, wg * bcore)
        })
        .collect();
    let mut a = Complex64::new(0.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    for (pa, pb) in parts {
        a += pa;
        b += pb;
    }
    Pass { a, b }
}

/// `‖F‖₁`, `‖x F‖₁`, `‖F′‖₁`, `‖x F′‖₁` and `‖x² F′‖₁` of a sampled function,
/// derivatives by differences of neighbouring samples.
pub fn derivative_norms(f: &SampledFunction) -> [f64; 5] {
    let v = f.values();
    let h = f.spacing();
    let mut out = [0.0; 5];
    for (i, z) in v.iter().enumerate() {
        let x = f.x(i);
        out[0] += z.norm() * h;
        out[1] += x.abs() * z.norm() * h;
    }
    for i in 0..v.len().saturating_sub(1) {
        let d = (v[i + 1] - v[i]).norm();
        let x = f.start() + (i as f64 + 0.5) * h;
        out[2] += d;
        out[3] += x.abs() * d;
        out[4] += x * x * d;
    }
    out
}

/// Jumps of `m` are taken from [`Profile::breakpoints`]; use
/// [`change_of_variable_check_with`] for profiles that jump elsewhere.
///
/// Compares `A = ∬ F(x) G(y) m(√((1 + x/r₁)² + y²/r₂²))` with
/// `B = ∫ F(x) m(exp(x/r₁)) ∫ G` against the budget
/// `‖(1 + y²) G‖₁ (r₁/r₂² ‖F′‖₁ + ‖x² F′‖₁ / r₁)`.
pub fn change_of_variable_check(
    f: &SampledFunction,
    g: &SampledFunction,
    m: &Profile,
    r1: f64,
    r2: f64,
) -> Result<BoundReport> {
    change_of_variable_check_with(f, g, m, &m.breakpoints(), r1, r2)
}

/// [`change_of_variable_check`] with the jump points of `m` given explicitly.
pub fn change_of_variable_check_with(
    f: &SampledFunction,
    g: &SampledFunction,
    m: &Profile,
    breaks: &[f64],
    r1: f64,
    r2: f64,
) -> Result<BoundReport> {
    if !(r2 >= 1.0 && r1 >= r2) || !r1.is_finite() {
        return Err(LabError::invalid(format!("need r1 ≥ r2 ≥ 1, got r1 = {r1}, r2 = {r2}")));
    }
    if f.len() < 3 || g.len() < 3 {
        return Err(LabError::invalid("F and G need at least three samples"));
    }
    if f.start() <= -r1 {
        return Err(LabError::invalid("F must be sampled inside x > -r1"));
    }
    let fn_ = derivative_norms(f);
    let coarse = pass(f, g, m, breaks, (r1, r2), COV_PANELS);
    let fine = pass(f, g, m, breaks, (r1, r2), 2 * COV_PANELS);
    let diff = (fine.a - fine.b).norm();
    let error = ((fine.a - coarse.a) - (fine.b - coarse.b)).norm();
    let gw: f64 = (0..g.len()).map(|j| (1.0 + g.x(j).powi(2)) * g.values()[j].norm()).sum::<f64>() * g.spacing();
    let budget = gw * (r1 / (r2 * r2) * fn_[2] + fn_[4] / r1);
    if error > 0.05 * diff + 1e-9 * budget {
        return Err(LabError::AccuracyFailure(format!(
            "|A - B| = {diff:.3e} resolved only to {error:.3e} (budget {budget:.3e})"
        )));
    }
    let ratio = if budget > 0.0 { diff / budget } else { 0.0 };
    let mut rep = BoundReport::new(
        "change_of_variable_ratio",
        ratio,
        &["|A - B| over ‖(1 + y²) G‖₁ (r₁/r₂² ‖F′‖₁ + ‖x² F′‖₁ / r₁)"],
    )
    .with_error(error / budget.max(f64::MIN_POSITIVE))
    .param("r1", r1)
    .param("r2", r2)
    .param("profile", format!("{m:?}"));
    rep.set_quantity("a_re", fine.a.re);
    rep.set_quantity("a_im", fine.a.im);
    rep.set_quantity("b_re", fine.b.re);
    rep.set_quantity("b_im", fine.b.im);
    rep.set_quantity("difference", diff);
    rep.set_quantity("budget", budget);
    rep.set_quantity("g_weighted_l1", gw);
    rep.set_quantity("f_l1", fn_[0]);
    rep.set_quantity("xf_l1", fn_[1]);
    rep.set_quantity("df_l1", fn_[2]);
    rep.set_quantity("x_df_l1", fn_[3]);
    rep.set_quantity("x2_df_l1", fn_[4]);
    rep.set_quantity("quadrature_error", error);
    Ok(rep)
}

/// `F = ĥ` and `G = |ρ̂|²` sampled on `[-40, 40]` and `[-30, 30]`.
pub fn default_inputs(spacing: f64) -> Result<(SampledFunction, SampledFunction)> {
    let pr = Profiles::default();
    let nf = (80.0 / spacing).round() as usize + 1;
    let ng = (60.0 / spacing).round() as usize + 1;
    let f = SampledFunction::from_complex_fn(-40.0, spacing, nf, |x| pr.h_hat(x))?;
    let g = SampledFunction::from_fn(-30.0, spacing, ng, |y| pr.rho_hat(y).norm_sqr())?;
    Ok((f, g))
}

/// The two helper inequalities `‖xF‖₁ ≤ ½‖x²F′‖₁` and `‖F‖₁ ≤ ‖xF′‖₁`,
/// by the trapezoid rule with `n` panels on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelperCheck {
    pub x_f: f64,
    pub half_x2_df: f64,
    pub f: f64,
    pub x_df: f64,
}

impl HelperCheck {
    pub fn holds(&self, rel: f64) -> bool {
        self.x_f <= self.half_x2_df * (1.0 + rel) && self.f <= self.x_df * (1.0 + rel)
    }
}

pub fn helper_inequalities(
    f: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    n: usize,
) -> HelperCheck {
    use super::profiles::trapezoid;
    HelperCheck {
        x_f: trapezoid(|x| (x * f(x)).abs(), lo, hi, n),
        half_x2_df: 0.5 * trapezoid(|x| (x * x * df(x)).abs(), lo, hi, n),
        f: trapezoid(|x| f(x).abs(), lo, hi, n),
        x_df: trapezoid(|x| (x * df(x)).abs(), lo, hi, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_profile_gives_zero() {
        let (f, g) = default_inputs(0.1).unwrap();
        let rep = change_of_variable_check(&f, &g, &Profile::Constant(1.0), 1e4, 1e2).unwrap();
        assert_eq!(rep.quantity("difference").unwrap(), 0.0);
        assert_eq!(rep.value(), 0.0);
    }

    #[test]
    fn linear_profile_is_within_budget() {
        let (f, g) = default_inputs(0.1).unwrap();
        let m = Profile::custom(|t| t * crate::bump::plateau(4.0 * (t - 1.0)));
        let a = change_of_variable_check(&f, &g, &m, 1e4, 1e2).unwrap().value();
        let b = change_of_variable_check(&f, &g, &m, 1e6, 1e3).unwrap().value();
        assert!(a < 1.0 && b < 1.0, "{a} {b}");
    }

    #[test]
    fn rejects_bad_scales() {
        let (f, g) = default_inputs(0.5).unwrap();
        assert!(change_of_variable_check(&f, &g, &Profile::Ball, 10.0, 20.0).is_err());
        assert!(change_of_variable_check(&f, &g, &Profile::Ball, 10.0, 0.5).is_err());
    }

    #[test]
    fn helper_inequalities_on_gaussian_mixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let terms: Vec<(f64, f64, f64)> = (0..3)
                .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-3.0..3.0), rng.random_range(0.3..2.0)))
                .collect();
            let t2 = terms.clone();
            let f = move |x: f64| terms.iter().map(|&(a, c, s)| a * (-(x - c).powi(2) / (2.0 * s * s)).exp()).sum();
            let df = move |x: f64| {
                t2.iter().map(|&(a, c, s)| -a * (x - c) / (s * s) * (-(x - c).powi(2) / (2.0 * s * s)).exp()).sum()
            };
            let h = helper_inequalities(&f, &df, -30.0, 30.0, 60000);
            assert!(h.holds(1e-9), "{h:?}");
        }
    }
}
