//! Reflected-pole geometry: `V_θ`, the distortion `ψ_r` and the symbol `m̃_r`.

use crate::error::{LabError, Result};
use crate::profile::Profile;
use crate::report::BoundReport;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct ReflectedPoleConfig {
    theta: f64,
    r: f64,
    d: usize,
}

impl ReflectedPoleConfig {
    pub fn new(theta: f64, r: f64, d: usize) -> Result<Self> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(LabError::invalid(format!("θ = {theta} must lie in (0, π)")));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(LabError::invalid(format!("r = {r} must be positive")));
        }
        if d < 2 {
            return Err(LabError::invalid("dimension must be at least 2"));
        }
        Ok(ReflectedPoleConfig { theta, r, d })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// The `(d+1) × (d+1)` reflection: identity on the first `d-1`
    /// coordinates, `[[-cos θ, -sin θ], [-sin θ, cos θ]]` on the last two.
    ///
    /// With `+sin θ` off the diagonal the distortion would approximate
    /// `y_d - x_d`; this sign makes `ψ ≈ x_d - y_d`.
    pub fn v_matrix(&self) -> DMatrix<f64> {
        let n = self.d + 1;
        let mut v = DMatrix::identity(n, n);
        let (s, c) = self.theta.sin_cos();
        v[(n - 2, n - 2)] = -c;
        v[(n - 2, n - 1)] = -s;
        v[(n - 1, n - 2)] = -s;
        v[(n - 1, n - 1)] = c;
        v
    }

    fn apply_v(&self, z: &mut [f64]) {
        let n = z.len();
        let (s, c) = self.theta.sin_cos();
        let (a, b) = (z[n - 2], z[n - 1]);
        z[n - 2] = -c * a - s * b;
        z[n - 1] = -s * a + c * b;
    }

    /// `u = (e + sign·x/r)/|e + sign·x/r|` and `u - e`, the latter without cancellation.
    fn pole(&self, x: &[f64], sign: f64) -> (Vec<f64>, Vec<f64>) {
        let d = self.d;
        let s2: f64 = x.iter().map(|v| (v / self.r).powi(2)).sum();
        let norm = (1.0 + s2).sqrt();
        let mut u = vec![0.0; d + 1];
        let mut du = vec![0.0; d + 1];
        for i in 0..d {
            u[i] = sign * x[i] / self.r / norm;
            du[i] = u[i];
        }
        u[d] = 1.0 / norm;
        du[d] = -s2 / (norm * (1.0 + norm));
        (u, du)
    }

    /// `⟨a, b⟩ - cos θ` and the angle between `a` and `b`.
    fn pair(&self, x: &[f64], y: &[f64]) -> Result<(f64, f64, Vec<f64>, Vec<f64>)> {
        if x.len() != self.d || y.len() != self.d {
            return Err(LabError::invalid(format!("points must have {} coordinates", self.d)));
        }
        let (a, da) = self.pole(x, 1.0);
        let (mut b, mut db) = self.pole(y, -1.0);
        self.apply_v(&mut b);
        self.apply_v(&mut db);
        // <a,b> - <e, V e> = <a - e, b> + <e, V(b~ - e)>
        let delta: f64 = da.iter().zip(&b).map(|(p, q)| p * q).sum::<f64>() + db[self.d];
        let diff: f64 = a.iter().zip(&b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
        let sum: f64 = a.iter().zip(&b).map(|(p, q)| (p + q) * (p + q)).sum::<f64>().sqrt();
        if diff < 1e-12 || sum < 1e-12 {
            return Err(LabError::Singularity("the two poles are parallel".into()));
        }
        Ok((delta, 2.0 * diff.atan2(sum), a, b))
    }

    /// `r (arccos⟨a, b⟩ - θ)` with `a = (e + x/r)/|·|`, `b = V_θ (e - y/r)/|·|`.
    pub fn psi(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let (delta, beta, _, _) = self.pair(x, y)?;
        // cos β - cos θ = -2 sin((β+θ)/2) sin((β-θ)/2)
        let half = -delta / (2.0 * ((beta + self.theta) / 2.0).sin());
        Ok(2.0 * self.r * half.clamp(-1.0, 1.0).asin())
    }

    /// `m(⟨a, b⟩)`.
    pub fn m_tilde(&self, m: &Profile, x: &[f64], y: &[f64]) -> Result<f64> {
        let (delta, _, _, _) = self.pair(x, y)?;
        Ok(m.eval(self.theta.cos() + delta))
    }
}

fn ball_point(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> Vec<f64> {
    let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let rad = radius * rng.random::<f64>().powf(1.0 / d as f64);
    g.iter().map(|v| v / n * rad).collect()
}

/// Largest observed `|ψ - (x_d - y_d)| r sin θ / (|x|² + |y|²)` (K₁) and
/// `|∂ψ/∂x_d - 1| r sin θ / (|x| + |y|)` (K₂) over random points in the ball.
pub fn psi_distortion_check(cfg: &ReflectedPoleConfig, samples: usize, radius: f64, seed: u64) -> Result<BoundReport> {
    if !(radius > 0.0) || radius > cfg.r / 10.0 {
        return Err(LabError::invalid(format!("radius {radius} must lie in (0, r/10]")));
    }
    if samples == 0 {
        return Err(LabError::invalid("need at least one sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(Vec<f64>, Vec<f64>)> =
        (0..samples).map(|_| (ball_point(&mut rng, cfg.d, radius), ball_point(&mut rng, cfg.d, radius))).collect();
    let h = 1e-4 * radius;
    let d = cfg.d;
    let scale = cfg.r * cfg.theta.sin();
    let ks: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|(x, y)| -> Result<(f64, f64)> {
            let nx = x.iter().map(|v| v * v).sum::<f64>();
            let ny = y.iter().map(|v| v * v).sum::<f64>();
            let psi = cfg.psi(x, y)?;
            let k1 = if nx + ny > 0.0 { (psi - (x[d - 1] - y[d - 1])).abs() * scale / (nx + ny) } else { 0.0 };
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[d - 1] += h;
            xm[d - 1] -= h;
            let grad = (cfg.psi(&xp, y)? - cfg.psi(&xm, y)?) / (2.0 * h);
            let lin = nx.sqrt() + ny.sqrt();
            let k2 = if lin > 0.0 { (grad - 1.0).abs() * scale / lin } else { 0.0 };
            Ok((k1, k2))
        })
        .collect::<Result<_>>()?;
    let k1 = ks.iter().map(|k| k.0).fold(0.0, f64::max);
    let k2 = ks.iter().map(|k| k.1).fold(0.0, f64::max);
    let mut rep = BoundReport::new(
        "psi_distortion_check",
        k1.max(k2),
        &["distortion of the reflected-pole angle", "central differences in x_d"],
    )
    .param("theta", cfg.theta)
    .param("r", cfg.r)
    .param("d", cfg.d)
    .param("samples", samples)
    .param("radius", radius)
    .param("seed", seed)
    .param("step", h);
    rep.set_quantity("K1", k1);
    rep.set_quantity("K2", k2);
    Ok(rep)
}
