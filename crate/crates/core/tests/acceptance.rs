//! Quantitative acceptance checks, one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the verdict lines are
//! always printed; the process fails if any criterion fails.

use kakeya_core::besicovitch::{f_curve, keich_family, CurveMode};
use kakeya_core::bounds::{
    holder_exponent, holder_modulus, infimum_bound, integrability_test, objective, FModel, Weight,
    CONVERGES, DIVERGES,
};
use kakeya_core::bump::interval_bump;
use kakeya_core::filterbank::zygmund::slope;
use kakeya_core::filterbank::{
    build_filterbank, classify_b0, lp_sup_norms, modulus_from_lp, partition_residual, w_n,
    zygmund_modulus_periodic, GridSpec, BERNSTEIN_C, CONSISTENT_B0, INCONSISTENT,
};
use kakeya_core::geometry::tube::DEFAULT_WINDOW;
use kakeya_core::multiplier::{
    certify_lower_bound, change_of_variable_check, change_of_variable_check_with, default_inputs,
    helper_inequalities, CertifySettings,
};
use kakeya_core::spherical::{msp_lower_bound, psi_distortion_check, ReflectedPoleConfig, SphereSample, WarmStart};
use kakeya_core::{Profile, SampledFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

/// Bound on `spread · r · δ²` recorded from runs at grid 2048; every
/// tube is evaluated on the same canonical nodes, so the spread is
/// rounding noise.
const SPREAD_FIXTURE: f64 = 1e-12;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn c1_partition_of_unity() -> Outcome {
    let t = Instant::now();
    let top = 2f64.powi(12);
    let xs = (0..=400_000).map(|i| -top + 2.0 * top * i as f64 / 400_000.0);
    let res = partition_residual(12, xs);
    // a periodic grid whose frequencies reach 2^12
    let bank = build_filterbank(12, GridSpec { len: 1 << 14, spacing: 1.0 / (1 << 14) as f64, periodic: true });
    let el = t.elapsed();
    let ok = res <= 1e-10 && bank.as_ref().map(|b| b.residual() <= 1e-10).unwrap_or(false) && within(el, 1.0);
    outcome(ok, format!("residual {res:.2e}, bank {:?}, {:.2?}", bank.map(|b| b.residual()), el))
}

fn c2_keich_curve() -> Outcome {
    let t = Instant::now();
    let curve = match f_curve(&[4, 5, 6, 7, 8, 9], CurveMode::Keich, 16.0) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let el = t.elapsed();
    let eps: Vec<f64> = curve.points.iter().map(|p| p.epsilon).collect();
    let decreasing = eps.windows(2).all(|w| w[1] < w[0]);
    let certified = curve.points.iter().all(|p| p.certificate);
    let fit = curve.fit.as_ref().expect("six points give a fit");
    let worst = curve
        .points
        .iter()
        .zip(&fit.residuals)
        .filter(|(p, _)| p.k >= 6)
        .map(|(_, r)| r.abs())
        .fold(0.0, f64::max);
    let ok = decreasing && certified && worst < 0.2 && within(el, 60.0);
    outcome(
        ok,
        format!("eps {eps:.4?}, C = {:.4}, worst residual (k>=6) {worst:.3}, certified {certified}, {el:.2?}", fit.c),
    )
}

fn c3_infimum_formula() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_grid = f64::NEG_INFINITY;
    let mut worst_eq = 0.0f64;
    for _ in 0..100 {
        let alpha = rng.random_range(0.05..4.0);
        let beta = rng.random_range(0.05..4.0);
        let a = 10f64.powf(rng.random_range(0.0..6.0));
        let inf = match infimum_bound(alpha, beta, a) {
            Ok(i) => i,
            Err(e) => return outcome(false, format!("{e}")),
        };
        worst_grid = worst_grid.max(inf.grid_min / inf.closed_form - 1.0);
        let at = objective(alpha, beta, a, a.powf(-1.0 / (alpha + beta)));
        worst_eq = worst_eq.max((at - inf.closed_form).abs() / inf.closed_form);
    }
    let el = t.elapsed();
    let ok = worst_grid <= 1e-9 && worst_eq <= 1e-6 && within(el, 1.0);
    outcome(ok, format!("max grid/closed - 1 = {worst_grid:.2e}, max equality gap {worst_eq:.2e}, {el:.2?}"))
}

fn c4_certifier_chain() -> Outcome {
    let t = Instant::now();
    let settings = CertifySettings::default();
    let r = 4096.0;
    let mut bounds = Vec::new();
    let mut chain_ok = true;
    let mut spread_ok = true;
    let mut lines = Vec::new();
    for k in [4u32, 6, 8] {
        let fam = match keich_family(k, DEFAULT_WINDOW) {
            Ok(f) => f,
            Err(e) => return outcome(false, format!("k={k}: {e}")),
        };
        let rep = match certify_lower_bound(&fam, &Profile::Ball, 4.0 / 3.0, r, &settings) {
            Ok(rep) => rep,
            Err(e) => return outcome(false, format!("k={k}: {e}")),
        };
        let slack = rep.quantity("min_slack").unwrap();
        let spread = rep.quantity("spread_scaled").unwrap();
        chain_ok &= slack >= -1e-6;
        spread_ok &= spread <= SPREAD_FIXTURE;
        bounds.push(rep.value());
        lines.push(format!(
            "k={k} bound {:.4e} min slack {slack:.1e} spread*r*delta^2 {spread:.1e} r*delta^2 {:.3e}",
            rep.value(),
            rep.quantity("r_delta_sq").unwrap()
        ));
    }
    let monotone = bounds.windows(2).all(|w| w[1] >= w[0] * 0.95);
    let el = t.elapsed();
    let ok = chain_ok && spread_ok && monotone && within(el, 300.0);
    outcome(
        ok,
        format!(
            "chain {chain_ok}, spread {spread_ok}, non-decreasing in k {monotone}; {}; {el:.2?}",
            lines.join("; ")
        ),
    )
}

fn c5_zygmund_bridge() -> Outcome {
    let t = Instant::now();
    let len = 1usize << 14;
    let h = 1.0 / len as f64;
    let levels = 12;
    let bank = match build_filterbank(levels, GridSpec { len, spacing: h, periodic: true }) {
        Ok(b) => b,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = f64::NEG_INFINITY;
    let mut coeff_gap = 0.0f64;
    for _ in 0..10 {
        // trigonometric polynomials on the unit circle with known spectra
        let terms: Vec<(f64, f64, f64)> = (0..6)
            .map(|_| {
                let xi = rng.random_range(1..1500) as f64;
                let amp = rng.random_range(-1.0..1.0) / xi.sqrt();
                (xi, amp, rng.random_range(0.0..2.0 * PI))
            })
            .collect();
        let f = SampledFunction::from_fn(0.0, h, len, |x| {
            terms.iter().map(|&(xi, a, ph)| a * (2.0 * PI * xi * x + ph).cos()).sum()
        })
        .unwrap();
        let known: Vec<f64> = (0..=levels)
            .map(|n| terms.iter().map(|&(xi, a, _)| w_n(n, xi) * a.abs()).sum())
            .collect();
        let measured = lp_sup_norms(&f, &bank).unwrap();
        for (m, k) in measured.iter().zip(&known) {
            coeff_gap = coeff_gap.max(m - k);
        }
        for j in 2..=12 {
            let step = 2f64.powi(-j);
            let direct = zygmund_modulus_periodic(&f, step).unwrap();
            let bound = modulus_from_lp(&known, step, BERNSTEIN_C);
            worst = worst.max(direct / bound - 1.0);
        }
    }
    let el = t.elapsed();
    let ok = worst <= 0.05 && coeff_gap <= 1e-9;
    outcome(ok, format!("max direct/majorant - 1 = {worst:.3}, measured-known coefficient excess {coeff_gap:.1e}, {el:.2?}"))
}

fn c6_b0_classification() -> Outcome {
    let t = Instant::now();
    let h = 2f64.powi(-21);
    let n = 1usize << 22;
    let osc = SampledFunction::from_fn(-1.0 + 0.5 * h, h, n, |x| {
        let a = x.abs();
        let b = interval_bump(x, -0.5, 0.5);
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        a.ln().abs().ln().sin() * b
    })
    .unwrap();
    let ind = SampledFunction::from_fn(-1.0, h, n, |x| if x > 0.0 && x < 1.0 { 1.0 } else { 0.0 }).unwrap();
    let bank = build_filterbank(20, GridSpec::of(&osc, true)).unwrap();
    let ro = classify_b0(&osc, &bank).unwrap();
    let ri = classify_b0(&ind, &bank).unwrap();
    let el = t.elapsed();
    let ok = ri.has_flag(INCONSISTENT) && ro.has_flag(CONSISTENT_B0) && ro.value() < 0.0;
    outcome(
        ok,
        format!(
            "indicator {:?} floor {:.3}; oscillator {:?} slope {:.4}; {el:.2?}",
            ri.flags,
            ri.quantity("floor_ratio").unwrap_or(f64::NAN),
            ro.flags,
            ro.value()
        ),
    )
}

fn c7_change_of_variable() -> Outcome {
    let t = Instant::now();
    // finer than 0.04 so the fine and coarse quadrature passes agree
    let (f, g) = default_inputs(0.03).unwrap();
    let one = change_of_variable_check(&f, &g, &Profile::Constant(1.0), 1e4, 1e2).unwrap();
    let exact_zero = one.value() == 0.0;
    let mut spreads = Vec::new();
    for seed in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: f64 = rng.random_range(-1.0..1.0);
        let b: f64 = if a > 0.0 { a - rng.random_range(0.5..1.0) } else { a + rng.random_range(0.5..1.0) };
        let c: f64 = rng.random_range(-0.3..0.3);
        let ph: f64 = rng.random_range(0.0..2.0 * PI);
        let m = Profile::custom(move |t| if t <= 1.0 { a } else { b } + c * (7.0 * t + ph).sin());
        let ratios: Vec<f64> = [(1e3, 1e3f64.sqrt()), (1e4, 1e2), (1e6, 1e3)]
            .iter()
            .map(|&(r1, r2)| change_of_variable_check_with(&f, &g, &m, &[1.0], r1, r2).unwrap().value())
            .collect();
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        spreads.push(hi / lo);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let mut helpers = 0;
    for _ in 0..20 {
        let terms: Vec<(f64, f64, f64)> = (0..3)
            .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-3.0..3.0), rng.random_range(0.3..2.0)))
            .collect();
        let t2 = terms.clone();
        let ff = move |x: f64| terms.iter().map(|&(a, c, s)| a * (-(x - c).powi(2) / (2.0 * s * s)).exp()).sum();
        let df = move |x: f64| {
            t2.iter().map(|&(a, c, s)| -a * (x - c) / (s * s) * (-(x - c).powi(2) / (2.0 * s * s)).exp()).sum()
        };
        if helper_inequalities(&ff, &df, -30.0, 30.0, 60_000).holds(1e-9) {
            helpers += 1;
        }
    }
    let el = t.elapsed();
    let ok = exact_zero && spreads.iter().all(|&s| s < 2.0) && helpers == 20;
    outcome(
        ok,
        format!("m = 1 ratio {}, max/min per profile {spreads:.3?}, helpers {helpers}/20, {el:.2?}", one.value()),
    )
}

fn c8_spherical_distortion() -> Outcome {
    let t = Instant::now();
    let mut k1 = Vec::new();
    let mut k2 = Vec::new();
    let mut k2_fixed = Vec::new();
    for r in [1e3, 1e4, 1e6] {
        for theta in [0.3, FRAC_PI_2, 2.8] {
            let cfg = ReflectedPoleConfig::new(theta, r, 2).unwrap();
            // the constants are suprema over the whole admissible ball |x|, |y| <= r/10
            let rep = psi_distortion_check(&cfg, 10_000, r / 10.0, 8).unwrap();
            k1.push(rep.quantity("K1").unwrap());
            k2.push(rep.quantity("K2").unwrap());
            let fixed = psi_distortion_check(&cfg, 1_000, 10.0, 8).unwrap();
            k2_fixed.push(fixed.quantity("K2").unwrap());
        }
    }
    let ratio = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min);
    let (a, b) = (ratio(&k1), ratio(&k2));
    let el = t.elapsed();
    let ok = a < 4.0 && b < 4.0 && k1.iter().chain(&k2).all(|v| v.is_finite()) && within(el, 10.0);
    outcome(
        ok,
        format!(
            "K1 max/min {a:.3}, K2 max/min {b:.3} (radius 10 only: K2 max/min {:.0}), {el:.2?}",
            ratio(&k2_fixed)
        ),
    )
}

fn c9_schur_sanity() -> Outcome {
    let t = Instant::now();
    let pts = SphereSample::fibonacci(40).unwrap();
    let mut one_gap = 0.0f64;
    for p in [1.0, 4.0 / 3.0, 2.0, 3.0, 4.0, f64::INFINITY] {
        let r = msp_lower_bound(&Profile::Constant(1.0), &pts, p, 8, 1, 1.0, None).unwrap();
        one_gap = one_gap.max((r.report.value() - 1.0).abs());
    }
    let m = Profile::custom(|t| (3.0 * t).cos() * 0.8 + if t < 0.2 { 0.5 } else { 0.0 });
    let r2 = msp_lower_bound(&m, &pts, 2.0, 64, 2, 1.0, None).unwrap();
    let sup = r2.report.quantity("symbol_sup").unwrap();
    let p2_ok = r2.report.value() <= sup + 1e-9 && r2.report.quantity("random_best").unwrap() <= sup + 1e-9;
    let mut nested = 0;
    for seed in 0..10u64 {
        let big = SphereSample::random(2, 200, seed).unwrap();
        let small = big.prefix(50).unwrap();
        let rs = msp_lower_bound(&Profile::Ball, &small, 4.0, 4, seed, 1.0, None).unwrap();
        let rb = msp_lower_bound(&Profile::Ball, &big, 4.0, 4, seed, 1.0, Some(&WarmStart(rs.best.clone()))).unwrap();
        if rs.report.value() <= rb.report.value() + 1e-9 {
            nested += 1;
        }
    }
    let el = t.elapsed();
    let ok = one_gap <= 1e-9 && p2_ok && nested == 10;
    outcome(
        ok,
        format!("|m=1 bound - 1| {one_gap:.1e}, p=2 best {:.4} vs sup {sup:.4}, nested {nested}/10, {el:.2?}", r2.report.value()),
    )
}

fn c10_integrability() -> Outcome {
    let t = Instant::now();
    let div = integrability_test(&FModel::LogPower(1.0), 4.0, Weight::None).unwrap();
    let conv = [0.25, 1.0, 2.0]
        .iter()
        .all(|&e| integrability_test(&FModel::Power(e), 4.0, Weight::None).unwrap().has_flag(CONVERGES));
    let gaps: Vec<f64> = (0..=16).map(|i| 10f64.powf(-6.0 + 4.0 * i as f64 / 16.0)).collect();
    let xs: Vec<f64> = gaps.iter().map(|g| g.ln()).collect();
    let mut worst = 0.0f64;
    for (eps, p) in [(1.0, 4.0), (0.5, 1.5), (2.0, 4.0 / 3.0), (0.3, 6.0)] {
        let v = holder_modulus(&FModel::Power(eps), p, &gaps).unwrap();
        let ys: Vec<f64> = v.iter().map(|g| g.ln()).collect();
        let a = holder_exponent(eps, p);
        worst = worst.max((slope(&xs, &ys) - a).abs() / a);
    }
    let el = t.elapsed();
    let ok = div.has_flag(DIVERGES) && conv && worst < 0.05;
    outcome(ok, format!("log:1 {:?}, power converges {conv}, worst slope error {worst:.4}, {el:.2?}", div.flags))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("partition of unity", c1_partition_of_unity),
        ("Keich compression curve", c2_keich_curve),
        ("infimum formula", c3_infimum_formula),
        ("certifier chain", c4_certifier_chain),
        ("Zygmund bridge", c5_zygmund_bridge),
        ("b0 classification", c6_b0_classification),
        ("change of variable", c7_change_of_variable),
        ("spherical distortion", c8_spherical_distortion),
        ("Schur sanity", c9_schur_sanity),
        ("integrability", c10_integrability),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let o = run();
        println!("criterion {id:2} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
