use kakeya_core::besicovitch::keich_family;
use kakeya_core::multiplier::{certify_lower_bound, relaxed_gain_check, CertifySettings};
use kakeya_core::{BoundReport, Profile};

fn certify(fam: &kakeya_core::TubeFamily, grid: usize) -> BoundReport {
    let s = CertifySettings { grid, ..CertifySettings::default() };
    certify_lower_bound(fam, &Profile::Ball, 4.0 / 3.0, 256.0, &s).unwrap()
}

fn agree(a: &BoundReport, b: &BoundReport) -> (f64, f64) {
    let rel = (a.value() - b.value()).abs() / a.value().abs().max(b.value().abs());
    let budget = 0.02 + (a.error() + b.error()) / a.value().abs().max(b.value().abs());
    (rel, budget)
}

#[test]
fn certified_bound_survives_rigid_motion() {
    let fam = keich_family(4, (2.0, 3.0)).unwrap();
    let base = certify(&fam, 512);
    assert!(base.value() > 0.0);
    for (angle, shift) in [(0.7, [3.0, -1.5]), (2.9, [-10.0, 4.0])] {
        let moved = certify(&fam.rigid_motion(angle, shift).unwrap(), 512);
        let (rel, budget) = agree(&base, &moved);
        assert!(rel <= budget, "angle {angle}: {} vs {} ({rel:.2e})", base.value(), moved.value());
    }
}

#[test]
fn certified_bound_survives_grid_doubling() {
    let fam = keich_family(4, (2.0, 3.0)).unwrap();
    let coarse = certify(&fam, 512);
    let fine = certify(&fam, 1024);
    let (rel, budget) = agree(&coarse, &fine);
    assert!(rel <= budget, "{} vs {} ({rel:.2e})", coarse.value(), fine.value());
}

#[test]
fn relaxed_constant_interpolates_between_endpoints() {
    let fam = keich_family(3, (2.0, 3.0)).unwrap();
    let c = |p: f64| relaxed_gain_check(&fam, p, 1.0 / 16.0).unwrap().value();
    let (lo, mid, hi) = (c(4.0 / 3.0), c(1.5), c(2.0));
    let (a, b) = (lo.min(hi), lo.max(hi));
    assert!(mid >= a * (1.0 - 1e-6) && mid <= b * (1.0 + 1e-6), "{lo} {mid} {hi}");
}
