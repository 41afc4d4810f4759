use kakeya_core::bounds::{infimum_bound, modulus_bound_euclidean, FModel};
use kakeya_core::filterbank::{build_filterbank, lp_coefficients, maximal_function, GridSpec};
use kakeya_core::geometry::{
    compression_ratio, relaxed_score, translate_certificate, tube2, tubes_disjoint, union_measure,
};
use kakeya_core::spherical::{msp_lower_bound, schatten_norm, ReflectedPoleConfig, SphereSample};
use kakeya_core::{BoundReport, Profile, SampledFunction, TubeFamily};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn planar_tube() -> impl Strategy<Value = ([f64; 2], f64, f64)> {
    ((-2.0..2.0f64, -2.0..2.0f64), 0.0..std::f64::consts::TAU, 0.02..0.2f64)
        .prop_map(|((x, y), a, d)| ([x, y], a, d))
}

fn family(delta: f64, tubes: &[([f64; 2], f64)]) -> TubeFamily {
    let ts = tubes.iter().map(|&(o, a)| tube2(o, [a.cos(), a.sin()], delta).unwrap()).collect();
    TubeFamily::named(ts, "random").unwrap()
}

fn small_family() -> impl Strategy<Value = TubeFamily> {
    (0.05..0.15f64, prop::collection::vec(((-1.0..1.0f64, -1.0..1.0f64), 0.0..std::f64::consts::PI), 1..5))
        .prop_map(|(d, v)| family(d, &v.into_iter().map(|((x, y), a)| ([x, y], a)).collect::<Vec<_>>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tube_measure_and_disjointness((o, a, d) in planar_tube(), (o2, a2, _) in planar_tube()) {
        let t = tube2(o, [a.cos(), a.sin()], d).unwrap();
        let u = tube2(o2, [a2.cos(), a2.sin()], d).unwrap();
        prop_assert!((t.measure() - 2.0 * d).abs() <= 1e-15);
        prop_assert!(!tubes_disjoint(&t, &t).unwrap());
        prop_assert_eq!(tubes_disjoint(&t, &u).unwrap(), tubes_disjoint(&u, &t).unwrap());
    }

    #[test]
    fn infimum_closed_form_dominates_grid(alpha in 0.1..3.0f64, beta in 0.1..3.0f64, la in 0.0..40.0f64) {
        let inf = infimum_bound(alpha, beta, la.exp()).unwrap();
        prop_assert!(inf.grid_min <= inf.closed_form * (1.0 + 1e-12));
    }

    #[test]
    fn modulus_is_monotone_in_gap(eps in 0.2..2.0f64, p in 1.1..1.9f64, g in -6.0..-1.0f64) {
        let fd = FModel::Power(eps);
        let small = modulus_bound_euclidean(&fd, p, 10f64.powf(g), 1.0).unwrap();
        let big = modulus_bound_euclidean(&fd, p, 10f64.powf(g + 0.5), 1.0).unwrap();
        prop_assert!(small.value() <= big.value() + small.error() + big.error());
    }

    #[test]
    fn psi_is_antisymmetric(theta in 0.2..2.9f64, lr in 3.0..6.0f64, x in prop::array::uniform2(-5.0..5.0f64), y in prop::array::uniform2(-5.0..5.0f64)) {
        let cfg = ReflectedPoleConfig::new(theta, 10f64.powf(lr), 2).unwrap();
        let a = cfg.psi(&x, &y).unwrap();
        let b = cfg.psi(&[-y[0], -y[1]], &[-x[0], -x[1]]).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn schatten_two_is_frobenius(n in 1usize..8, seed in any::<u64>()) {
        let mut s = seed;
        let m = DMatrix::from_fn(n, n, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        });
        let fro = m.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((schatten_norm(&m, 2.0).unwrap() - fro).abs() <= 1e-9 * fro.max(1e-300));
    }

    #[test]
    fn report_round_trips(value in -1e300..1e300f64, err in 0.0..1e10f64, q in prop::collection::vec(-1e6..1e6f64, 0..4), infinite in any::<bool>()) {
        let mut r = BoundReport::new("prop", if infinite { f64::INFINITY } else { value }, &["generated"])
            .with_error(err)
            .param("k", 3);
        r.set_series("s", &q);
        for (i, v) in q.iter().enumerate() {
            r.set_quantity(&format!("q{i}"), *v);
        }
        let back: BoundReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn maximal_function_is_monotone(f in prop::collection::vec(0.0..1.0f64, 8..64), bump in prop::collection::vec(0.0..1.0f64, 64)) {
        let g: Vec<f64> = f.iter().zip(&bump).map(|(a, b)| a + b).collect();
        let mf = maximal_function(&SampledFunction::from_real(0.0, 0.1, &f).unwrap()).unwrap().re();
        let mg = maximal_function(&SampledFunction::from_real(0.0, 0.1, &g).unwrap()).unwrap().re();
        prop_assert!(mf.iter().zip(&mg).all(|(a, b)| *a <= b + 1e-12));
    }

    #[test]
    fn lp_coefficients_are_linear(alpha in -3.0..3.0f64, f in prop::collection::vec(-1.0..1.0f64, 64), g in prop::collection::vec(-1.0..1.0f64, 64)) {
        let sf = SampledFunction::from_real(0.0, 1.0 / 64.0, &f).unwrap();
        let sg = SampledFunction::from_real(0.0, 1.0 / 64.0, &g).unwrap();
        let mix: Vec<f64> = f.iter().zip(&g).map(|(a, b)| alpha * a + b).collect();
        let sm = SampledFunction::from_real(0.0, 1.0 / 64.0, &mix).unwrap();
        let bank = build_filterbank(4, GridSpec::of(&sf, false)).unwrap();
        let (cf, cg, cm) = (
            lp_coefficients(&sf, &bank).unwrap(),
            lp_coefficients(&sg, &bank).unwrap(),
            lp_coefficients(&sm, &bank).unwrap(),
        );
        let scale = 1.0 + alpha.abs();
        for ((a, b), m) in cf.iter().zip(&cg).zip(&cm) {
            for ((x, y), z) in a.values().iter().zip(b.values()).zip(m.values()) {
                let want: Complex64 = alpha * x + y;
                prop_assert!((want - z).norm() <= 1e-9 * scale);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn union_measure_is_sandwiched(fam in small_family()) {
        let h = fam.delta() / 8.0;
        let (u, err) = union_measure(&fam, h).unwrap();
        let biggest = fam.tubes().iter().map(|t| t.measure()).fold(0.0, f64::max);
        prop_assert!(u <= fam.total_measure() + err);
        prop_assert!(u >= biggest - err);
    }

    #[test]
    fn compression_ratio_is_rigid_motion_invariant(fam in small_family(), angle in 0.0..std::f64::consts::TAU, sx in -5.0..5.0f64, sy in -5.0..5.0f64) {
        let h = fam.delta() / 8.0;
        let a = compression_ratio(&fam, h, false).unwrap();
        let b = compression_ratio(&fam.rigid_motion(angle, [sx, sy]).unwrap(), h, false).unwrap();
        prop_assert!(a.value() > 0.0 && a.value() <= 1.0 + a.error());
        prop_assert!((a.value() - b.value()).abs() <= 2.0 * a.error().max(b.error()));
    }

    #[test]
    fn relaxed_score_matches_ratio_for_certified_families(delta in 0.05..0.15f64, jitter in prop::collection::vec((-0.3..0.3f64, -0.2..0.2f64), 1..5)) {
        // near-vertical tubes in separate columns keep all translates apart
        let tubes: Vec<([f64; 2], f64)> = jitter
            .iter()
            .enumerate()
            .map(|(i, &(dx, da))| ([2.0 * i as f64 + dx, 0.0], std::f64::consts::FRAC_PI_2 + da))
            .collect();
        let fam = family(delta, &tubes);
        prop_assume!(translate_certificate(&fam).passed);
        let h = delta / 8.0;
        let c = compression_ratio(&fam, h, true).unwrap();
        let r = relaxed_score(&fam, h).unwrap();
        prop_assert!((c.value() - r.value()).abs() <= c.error() + r.error() + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn schur_ratio_at_two_is_bounded_by_symbol(seed in any::<u64>(), c in -1.0..1.0f64) {
        let pts = SphereSample::random(2, 12, seed).unwrap();
        let m = Profile::custom(move |t| (c * 4.0 * t).sin());
        let r = msp_lower_bound(&m, &pts, 2.0, 8, seed, 0.0, None).unwrap();
        prop_assert!(r.report.value() <= r.report.quantity("symbol_sup").unwrap() + 1e-9);
    }
}
