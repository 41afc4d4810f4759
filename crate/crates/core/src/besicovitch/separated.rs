//! Families with one tube per direction of a maximal δ-separated set.

use super::keich::pivots;
use crate::error::{LabError, Result};
use crate::geometry::tube::{make_tube, DEFAULT_WINDOW};
use crate::geometry::{FamilyMeta, TubeFamily};
use std::f64::consts::FRAC_PI_4;

/// Angular range covered, measured from the vertical.
pub const ARC: f64 = FRAC_PI_4;

/// Greedy maximal δ-separated angles `0, δ, 2δ, ...` in `[0, ARC]`.
pub fn separated_angles(delta: f64) -> Vec<f64> {
    let m = (ARC / delta).floor() as usize;
    (0..=m).map(|i| i as f64 * delta).collect()
}

/// Tubes in the directions of [`separated_angles`], placed by the same
/// digit rule as the Perron-tree family. No disjointness is asked for.
pub fn separated_direction_family(delta: f64) -> Result<TubeFamily> {
    if !(delta > 2f64.powi(-14) && delta < 0.25 + 1e-15) {
        return Err(LabError::invalid(format!("width must lie in (2^-14, 1/4), got {delta}")));
    }
    let angles = separated_angles(delta);
    let k = ((1.0 / delta).log2().ceil() as u32).max(1);
    let piv = pivots(k, ARC.cos());
    let mut tubes = Vec::with_capacity(angles.len());
    for &th in &angles {
        let s = th.tan();
        let dir = [th.sin(), th.cos()];
        // binary digits of the slope, k of them
        let mut x = 0.0;
        let mut rest = s;
        for (i, p) in piv.iter().enumerate() {
            let w = 0.5f64.powi(i as i32 + 1);
            if rest >= w {
                rest -= w;
                x -= w * p;
            }
        }
        let origin = [x - 0.5 * dir[0], -0.5 * dir[1]];
        tubes.push(make_tube(2, &origin, &dir, delta, DEFAULT_WINDOW)?);
    }
    let mut meta = FamilyMeta { name: "separated".into(), ..Default::default() };
    meta.params.insert("directions".into(), tubes.len().into());
    TubeFamily::new(tubes, meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_width_has_four_directions() {
        let f = separated_direction_family(0.25).unwrap();
        assert!(f.len() >= 4);
        let a = separated_angles(0.25);
        for w in a.windows(2) {
            assert!(w[1] - w[0] >= 0.25 - 1e-12);
        }
    }

    #[test]
    fn total_measure_is_order_one() {
        let f = separated_direction_family(2f64.powi(-6)).unwrap();
        let s = f.total_measure();
        assert!((0.5..=4.0).contains(&s), "{s}");
    }

    #[test]
    fn maximal() {
        let d = 0.03;
        let a = separated_angles(d);
        for i in 0..=1000 {
            let th = ARC * i as f64 / 1000.0;
            assert!(a.iter().any(|&x| (x - th).abs() < d), "{th} uncovered");
        }
    }
}
