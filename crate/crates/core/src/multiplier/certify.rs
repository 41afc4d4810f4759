//! Certified lower bounds for the square-function constant of a radial
//! multiplier from a tube family.
//!
//! The chain is
//! `|Σ_j ∫ T_j f_j conj(g_j)| ≤ ∫ S_T G ≤ ‖S_T‖_{L_p(E)} ‖G‖_q`,
//! `‖S_T‖_p ≤ S ‖F‖_p` and
//! `‖F‖_p ‖G‖_q ≤ |U|^{1/p-1/2} ‖F‖₂ ‖G‖_q = N (2ε)^{1/p-1/2} ‖f‖₂ ‖g‖_q ‖ρ‖_q`,
//! where `S_T = (Σ|T_j f_j|²)^{1/2}`, `F = (Σ|f_j|²)^{1/2}`,
//! `G = (Σ|g_j|²)^{1/2}`, `E` is the union of the translates (which carries
//! `G`) and `U` the union of the tubes. The middle step is the only one not
//! checked numerically, so `LHS / K` is a lower bound on `S`.

use super::canonical::{CanonicalField, CanonicalSpec};
use super::profiles::Profiles;
use super::raster::raster_norms;
use super::testfn::{conjugate, f_local, Pairing};
use crate::error::{LabError, Result};
use crate::geometry::translate_certificate;
use crate::geometry::TubeFamily;
use crate::profile::Profile;
use crate::report::{BoundReport, FLAG_CERTIFIED};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifySettings {
    /// Canonical grid size (see [`CanonicalSpec::for_grid`]).
    pub grid: usize,
    /// World raster spacing as a fraction of δ.
    pub raster_fraction: f64,
}

impl Default for CertifySettings {
    fn default() -> Self {
        CertifySettings { grid: 2048, raster_fraction: 1.0 / 16.0 }
    }
}

/// Per-tube results of the node sums over the translates.
#[derive(Debug, Clone, Copy, Default)]
struct NodeSums {
    pairing: Complex64,
    /// `∫ S_T |G|`.
    cs: f64,
    /// `∫ S_T^p`.
    sp: f64,
    /// `∫ |G|^q`.
    gq: f64,
}

fn check_inputs(family: &TubeFamily, p: f64, r: f64) -> Result<()> {
    if family.dim() != 2 {
        return Err(LabError::invalid("certification is planar only"));
    }
    if !(p > 1.0 && p < 2.0) {
        return Err(LabError::invalid(format!("p = {p} must lie in (1, 2); use the conjugate exponent")));
    }
    if !(r >= 1.0) || !r.is_finite() {
        return Err(LabError::invalid(format!("r = {r} must be at least 1")));
    }
    let w = family.window();
    if family.tubes().iter().any(|t| t.window() != w) {
        return Err(LabError::invalid("all tubes must share one translate window"));
    }
    let cert = translate_certificate(family);
    if !cert.passed {
        return Err(LabError::ConstraintViolation {
            message: format!("{} translate pairs overlap; refusing to certify", cert.offending.len()),
            pairs: cert.offending,
        });
    }
    Ok(())
}

/// Runs the chain for the radial multiplier with profile `m` at scale `r`.
pub fn certify_lower_bound(
    family: &TubeFamily,
    m: &Profile,
    p: f64,
    r: f64,
    settings: &CertifySettings,
) -> Result<BoundReport> {
    check_inputs(family, p, r)?;
    if !(settings.raster_fraction > 0.0 && settings.raster_fraction <= 0.25) {
        return Err(LabError::invalid("raster fraction must lie in (0, 1/4]"));
    }
    let q = conjugate(p);
    let delta = family.delta();
    let window = family.window();
    let n = family.len();
    let cf = CanonicalField::build(CanonicalSpec::for_grid(settings.grid)?, delta, window, p, m, r)?;
    let (nodes, w) = cf.nodes_in(window.0, window.1);
    let half = cf.half_width();
    let (s_lo, s_hi) = (cf.spec.s0, cf.spec.s0 + cf.spec.ls);
    let tubes = family.tubes();

    let sums: Vec<NodeSums> = tubes
        .par_iter()
        .enumerate()
        .map(|(j, tube)| {
            let o = tube.origin();
            let v = tube.direction();
            let mut acc = NodeSums::default();
            for &(i, k) in &nodes {
                let g0 = cf.g.get(i, k).re;
                if g0 == 0.0 {
                    continue;
                }
                let own = cf.tf.get(i, k);
                let [s, t] = cf.tf.point(i, k);
                let x = o[0] + s * v[0] - t * v[1];
                let y = o[1] + s * v[1] + t * v[0];
                let mut sq = own.norm_sqr();
                for (l, other) in tubes.iter().enumerate() {
                    if l == j {
                        continue;
                    }
                    let (s2, t2) = other.local2(x, y);
                    if t2.abs() < half && s2 > s_lo && s2 < s_hi {
                        sq += cf.eval(s2, t2).norm_sqr();
                    }
                }
                let st = sq.sqrt();
                acc.pairing += own * g0 * w;
                acc.cs += st * g0.abs() * w;
                acc.sp += st.powf(p) * w;
                acc.gq += g0.abs().powf(q) * w;
            }
            acc
        })
        .collect();

    let pairing = Pairing::from_values(sums.iter().map(|s| s.pairing).collect());
    let lhs = pairing.total().norm();
    let cs: f64 = sums.iter().map(|s| s.cs).sum();
    let st_p = sums.iter().map(|s| s.sp).sum::<f64>().powf(1.0 / p);
    let g_q = sums.iter().map(|s| s.gq).sum::<f64>().powf(1.0 / q);
    let holder = st_p * g_q;

    let pr = Profiles::for_window(window)?;
    let h = settings.raster_fraction * delta;
    let rn = raster_norms(tubes, h, p, |_, s, t| f_local(&pr, delta, p, s, t));
    let union = rn.measure(h);
    let f_p = rn.norm_p(p);
    let f_2 = rn.norm_2();
    let product = f_p * g_q;
    let expo = 1.0 / p - 0.5;
    let k_disc = union.powf(expo) * f_2 * g_q;
    let eps = union / family.total_measure();
    let c = 2.0;
    let k_formula =
        n as f64 * (c * eps).powf(expo) * pr.f_norm(2.0) * pr.g_norm(q) * pr.rho_norm(q);

    let bound = lhs / k_formula;
    let square_ratio = holder / product;
    let mut rep = BoundReport::new(
        "certified_square_function_lower_bound",
        bound,
        &[
            "|Σ_j ∫ T_j f_j conj(g_j)| over N (2ε)^{1/p-1/2} ‖f‖₂ ‖g‖_q ‖ρ‖_q",
            "Cauchy-Schwarz in j, then Hölder on the union of translates",
            "Hölder on the union of tubes with ε measured on the world lattice",
            "the square-function constant bounds the multiplier norm from below (analytic step)",
        ],
    )
    .param("p", p)
    .param("r", r)
    .param("delta", delta)
    .param("tubes", n)
    .param("window", window)
    .param("family", &family.meta().name)
    .param("profile", format!("{m:?}"))
    .param("settings", settings)
    .param("canonical", cf.spec);
    let spectral = cf.pairing();
    rep.set_quantity("lhs", lhs);
    rep.set_quantity("pairing_re", pairing.mean.re);
    rep.set_quantity("pairing_im", pairing.mean.im);
    rep.set_quantity("pairing_spectral_re", spectral.re);
    rep.set_quantity("pairing_spectral_im", spectral.im);
    rep.set_quantity("spread", pairing.spread);
    rep.set_quantity("spread_scaled", pairing.spread * r * delta * delta);
    rep.set_quantity("r_delta_sq", r * delta * delta);
    rep.set_quantity("cauchy_schwarz", cs);
    rep.set_quantity("square_norm_restricted", st_p);
    rep.set_quantity("g_norm_q", g_q);
    rep.set_quantity("holder", holder);
    rep.set_quantity("f_norm_p", f_p);
    rep.set_quantity("f_norm_2", f_2);
    rep.set_quantity("product", product);
    rep.set_quantity("square_ratio", square_ratio);
    rep.set_quantity("union_measure", union);
    rep.set_quantity("epsilon", eps);
    rep.set_quantity("kakeya_discrete", k_disc);
    rep.set_quantity("kakeya_formula", k_formula);
    rep.set_quantity("slack_cauchy_schwarz", rel_slack(lhs, cs));
    rep.set_quantity("slack_holder", rel_slack(cs, holder));
    rep.set_quantity("slack_kakeya", rel_slack(product, k_disc));
    rep.set_quantity("slack_formula", rel_slack(k_disc, k_formula));
    rep.set_quantity("slack_square_step", rel_slack(bound, square_ratio));
    rep.set_quantity("raster_spacing", h);
    let min_slack = ["slack_cauchy_schwarz", "slack_holder", "slack_kakeya", "slack_formula"]
        .iter()
        .map(|k| rep.quantity(k).unwrap_or(f64::NAN))
        .fold(f64::INFINITY, f64::min);
    rep.set_quantity("min_slack", min_slack);
    rep.set_series("per_j_re", &pairing.per_j.iter().map(|v| v.re).collect::<Vec<_>>());
    rep.set_series("per_j_im", &pairing.per_j.iter().map(|v| v.im).collect::<Vec<_>>());
    rep.flag(FLAG_CERTIFIED);
    Ok(rep.with_error((pairing.total() - spectral * n as f64).norm() / k_formula))
}

/// `(big - small) / big`, zero when both vanish.
pub fn rel_slack(small: f64, big: f64) -> f64 {
    if big == 0.0 && small == 0.0 {
        0.0
    } else {
        (big - small) / big.abs()
    }
}
