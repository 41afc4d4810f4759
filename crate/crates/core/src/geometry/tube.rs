//! A single δ-tube: the image of `[0, 1] x B(0, δ)` under a rigid motion.

use crate::error::{LabError, Result};
use serde::{Deserialize, Serialize};

/// Penetration depth below which two tubes still count as disjoint.
pub const TAU_GEOM: f64 = 1e-9;

pub const DEFAULT_WINDOW: (f64, f64) = (2.0, 3.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tube {
    d: usize,
    origin: Vec<f64>,
    direction: Vec<f64>,
    delta: f64,
    window: (f64, f64),
    /// Axial length; 1 for tubes, `b - a` for translates.
    length: f64,
}

/// Volume of the unit ball in `R^k`.
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * std::f64::consts::PI / k as f64,
    }
}

pub fn make_tube(
    d: usize,
    origin: &[f64],
    direction: &[f64],
    delta: f64,
    window: (f64, f64),
) -> Result<Tube> {
    if d < 2 {
        return Err(LabError::invalid(format!("dimension must be at least 2, got {d}")));
    }
    if origin.len() != d || direction.len() != d {
        return Err(LabError::invalid("origin and direction must have d coordinates"));
    }
    if origin.iter().chain(direction).any(|v| !v.is_finite()) {
        return Err(LabError::invalid("non-finite coordinate"));
    }
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(LabError::invalid("direction must be nonzero"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(LabError::invalid(format!("width must lie in (0,1), got {delta}")));
    }
    if !(window.0 < window.1) || !window.0.is_finite() || !window.1.is_finite() {
        return Err(LabError::invalid(format!("window needs a < b, got {window:?}")));
    }
    Ok(Tube {
        d,
        origin: origin.to_vec(),
        direction: direction.iter().map(|v| v / norm).collect(),
        delta,
        window,
        length: 1.0,
    })
}

/// Planar tube with the default window.
pub fn tube2(origin: [f64; 2], direction: [f64; 2], delta: f64) -> Result<Tube> {
    make_tube(2, &origin, &direction, delta, DEFAULT_WINDOW)
}

impl Tube {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn measure(&self) -> f64 {
        unit_ball_volume(self.d - 1) * self.delta.powi(self.d as i32 - 1) * self.length
    }

    pub(crate) fn set_direction(&mut self, dir: &[f64]) {
        self.direction = dir.to_vec();
    }

    /// Same tube with a different axial length.
    pub fn with_length(&self, length: f64) -> Tube {
        Tube { length, ..self.clone() }
    }

    /// Same tube with origin moved by `shift` along the axis.
    pub fn slid(&self, shift: f64) -> Tube {
        let origin = self
            .origin
            .iter()
            .zip(&self.direction)
            .map(|(o, v)| o + shift * v)
            .collect();
        Tube { origin, ..self.clone() }
    }

    /// Perimeter of the planar rectangle (0 outside d = 2).
    pub fn perimeter(&self) -> f64 {
        if self.d == 2 {
            2.0 * self.length + 4.0 * self.delta
        } else {
            0.0
        }
    }

    /// Corners of the planar rectangle in counter-clockwise order.
    pub fn corners(&self) -> [[f64; 2]; 4] {
        debug_assert_eq!(self.d, 2);
        let (ox, oy) = (self.origin[0], self.origin[1]);
        let (vx, vy) = (self.direction[0], self.direction[1]);
        let (nx, ny) = (-vy * self.delta, vx * self.delta);
        let (ex, ey) = (ox + vx * self.length, oy + vy * self.length);
        [[ox - nx, oy - ny], [ex - nx, ey - ny], [ex + nx, ey + ny], [ox + nx, oy + ny]]
    }

    /// Local coordinates `(s, t)`: axial position from the origin and signed
    /// perpendicular offset (planar only).
    #[inline]
    pub fn local2(&self, x: f64, y: f64) -> (f64, f64) {
        let dx = x - self.origin[0];
        let dy = y - self.origin[1];
        let (vx, vy) = (self.direction[0], self.direction[1]);
        (dx * vx + dy * vy, -dx * vy + dy * vx)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        let mut s = 0.0;
        let mut r2 = 0.0;
        let diff: Vec<f64> = p.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        for (d, v) in diff.iter().zip(&self.direction) {
            s += d * v;
        }
        for (d, v) in diff.iter().zip(&self.direction) {
            let perp = d - s * v;
            r2 += perp * perp;
        }
        (0.0..=self.length).contains(&s) && r2 <= self.delta * self.delta
    }

    /// Axis-aligned bounding box as `(min, max)` per coordinate.
    pub fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = Vec::with_capacity(self.d);
        let mut hi = Vec::with_capacity(self.d);
        for i in 0..self.d {
            let a = self.origin[i];
            let b = a + self.length * self.direction[i];
            // cross-section radius projected on axis i
            let r = self.delta * (1.0 - self.direction[i] * self.direction[i]).max(0.0).sqrt();
            lo.push(a.min(b) - r);
            hi.push(a.max(b) + r);
        }
        (lo, hi)
    }
}

/// The tube occupying the image of `[a, b] x B(0, δ)` along the same axis.
pub fn translate_tube(t: &Tube) -> Tube {
    let (a, b) = t.window;
    let mut out = t.slid(a);
    out.length = b - a;
    out
}

fn project(corners: &[[f64; 2]; 4], ax: [f64; 2]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for c in corners {
        let v = c[0] * ax[0] + c[1] * ax[1];
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Smallest overlap of the projections onto the four candidate separating
/// axes; a value `<= TAU_GEOM` means the rectangles are disjoint.
pub fn penetration_depth(t1: &Tube, t2: &Tube) -> f64 {
    let c1 = t1.corners();
    let c2 = t2.corners();
    let axes = [
        [t1.direction[0], t1.direction[1]],
        [-t1.direction[1], t1.direction[0]],
        [t2.direction[0], t2.direction[1]],
        [-t2.direction[1], t2.direction[0]],
    ];
    let mut depth = f64::INFINITY;
    for ax in axes {
        let (a0, a1) = project(&c1, ax);
        let (b0, b1) = project(&c2, ax);
        depth = depth.min(a1.min(b1) - a0.max(b0));
    }
    depth
}

/// Whether the interiors of two tubes are disjoint.
///
/// Planar tubes use an exact separating-axis test. In higher dimension the
/// answer comes from sampling points of each tube (see [`disjointness_is_sampled`]).
pub fn tubes_disjoint(t1: &Tube, t2: &Tube) -> Result<bool> {
    if t1.d != t2.d {
        return Err(LabError::invalid("tubes of different dimension"));
    }
    if t1.d == 2 {
        return Ok(penetration_depth(t1, t2) <= TAU_GEOM);
    }
    Ok(!sampled_overlap(t1, t2) && !sampled_overlap(t2, t1))
}

pub fn disjointness_is_sampled(d: usize) -> bool {
    d > 2
}

/// Does some sample point of the shrunken `a` lie in `b`?
fn sampled_overlap(a: &Tube, b: &Tube) -> bool {
    let d = a.d;
    // orthonormal frame completing the axis, by Gram-Schmidt on basis vectors
    let mut frame: Vec<Vec<f64>> = vec![a.direction.clone()];
    for e in 0..d {
        let mut v = vec![0.0; d];
        v[e] = 1.0;
        for f in &frame {
            let dot: f64 = v.iter().zip(f).map(|(x, y)| x * y).sum();
            for (vi, fi) in v.iter_mut().zip(f) {
                *vi -= dot * fi;
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            frame.push(v.iter().map(|x| x / n).collect());
        }
        if frame.len() == d {
            break;
        }
    }
    let shrink = 1.0 - 1e-6;
    let axial = 64;
    let radial = 4;
    let angular = 16;
    let mut p = vec![0.0; d];
    for i in 0..=axial {
        let s = a.length * (i as f64 / axial as f64 * shrink + 0.5 * (1.0 - shrink));
        for j in 0..=radial {
            let rad = a.delta * shrink * j as f64 / radial as f64;
            let dirs = if j == 0 { 1 } else { angular };
            for k in 0..dirs {
                // sweep through the perpendicular frame vectors pairwise
                let ang = 2.0 * std::f64::consts::PI * k as f64 / angular as f64;
                let m = frame.len() - 1;
                let e1 = 1 + (k % m);
                let e2 = 1 + ((k + 1) % m);
                for c in 0..d {
                    p[c] = a.origin[c]
                        + s * frame[0][c]
                        + rad * (ang.cos() * frame[e1][c] + ang.sin() * frame[e2][c]);
                }
                if b.contains(&p) {
                    return true;
                }
            }
        }
    }
    false
}
