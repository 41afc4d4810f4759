//! Sampled Schur multipliers `A -> [m(<ξ_i, ξ_j>) A_ij]` and Schatten norms.

use crate::error::{LabError, Result};
use crate::profile::Profile;
use crate::report::{BoundReport, FLAG_SAMPLED};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Minimum angular distance between sampled points and between a point and
/// the antipode of another.
pub const MIN_SEPARATION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SphereSample {
    d: usize,
    points: Vec<Vec<f64>>,
    gram: DMatrix<f64>,
}

fn angle(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let sum = a.iter().zip(b).map(|(p, q)| (p + q) * (p + q)).sum::<f64>().sqrt();
    2.0 * diff.atan2(sum)
}

impl SphereSample {
    /// Points on the unit sphere of `R^{d+1}`; rejects near duplicates and
    /// near antipodes.
    pub fn from_points(d: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(LabError::invalid("sample needs at least one point"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != d + 1 {
                return Err(LabError::invalid(format!("point {i} must have {} coordinates", d + 1)));
            }
            let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            if (n - 1.0).abs() > 1e-12 {
                return Err(LabError::invalid(format!("point {i} is not a unit vector (norm {n})")));
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                let a = angle(&points[i], &points[j]);
                if !(MIN_SEPARATION..=std::f64::consts::PI - MIN_SEPARATION).contains(&a) {
                    return Err(LabError::invalid(format!("points {j} and {i} are coincident or antipodal")));
                }
            }
        }
        let n = points.len();
        let gram = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                1.0
            } else {
                points[i].iter().zip(&points[j]).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0)
            }
        });
        Ok(SphereSample { d, points, gram })
    }

    /// Fibonacci lattice on the 2-sphere.
    pub fn fibonacci(n: usize) -> Result<Self> {
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        let pts = (0..n)
            .map(|i| {
                let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
                let rho = (1.0 - z * z).sqrt();
                let phi = golden * i as f64;
                let v = [rho * phi.cos(), rho * phi.sin(), z];
                let s = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                v.iter().map(|a| a / s).collect()
            })
            .collect();
        SphereSample::from_points(2, pts)
    }

    /// Uniform points on the `d`-sphere; too-close draws are redrawn.
    pub fn random(d: usize, n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n);
        while pts.len() < n {
            let g: Vec<f64> = (0..=d).map(|_| rng.sample(StandardNormal)).collect();
            let s = g.iter().map(|a| a * a).sum::<f64>().sqrt();
            if s == 0.0 {
                continue;
            }
            let p: Vec<f64> = g.iter().map(|a| a / s).collect();
            let ok = pts.iter().all(|q| {
                let a = angle(&p, q);
                (MIN_SEPARATION..=std::f64::consts::PI - MIN_SEPARATION).contains(&a)
            });
            if ok {
                pts.push(p);
            }
        }
        SphereSample::from_points(d, pts)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// The first `k` points.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(LabError::invalid(format!("prefix length {k} out of range")));
        }
        Ok(SphereSample { d: self.d, points: self.points[..k].to_vec(), gram: self.gram.view((0, 0), (k, k)).into() })
    }
}

/// `ℓ_p` norm of the singular values; `p = ∞` gives the largest one.
pub fn schatten_norm(m: &DMatrix<f64>, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(LabError::invalid(format!("Schatten exponent {p} must be at least 1")));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(LabError::invalid("matrix has non-finite entries"));
    }
    if m.is_empty() {
        return Ok(0.0);
    }
    Ok(lp_norm(m.singular_values().as_slice(), p))
}

fn lp_norm(s: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return s.iter().cloned().fold(0.0, f64::max);
    }
    let top = s.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    top * s.iter().map(|v| (v / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Symbol matrix `M_ij = m(<ξ_i, ξ_j>)` with `M_ii = diagonal`.
pub fn symbol_matrix(m: &Profile, pts: &SphereSample, diagonal: f64) -> DMatrix<f64> {
    let g = pts.gram();
    DMatrix::from_fn(g.nrows(), g.ncols(), |i, j| if i == j { diagonal } else { m.eval(g[(i, j)]) })
}

/// Entrywise product `M ∘ A`; the diagonal multiplier is user supplied
/// because `m(1)` lies outside the domain of `m`.
pub fn schur_apply(m: &Profile, pts: &SphereSample, a: &DMatrix<f64>, diagonal: f64) -> Result<DMatrix<f64>> {
    if a.nrows() != pts.len() || a.ncols() != pts.len() {
        return Err(LabError::invalid(format!(
            "matrix is {}×{} but the sample has {} points",
            a.nrows(),
            a.ncols(),
            pts.len()
        )));
    }
    Ok(symbol_matrix(m, pts, diagonal).component_mul(a))
}

/// Maximum iterations of the duality refinement.
pub const POWER_ITERS: usize = 50;

/// Element of the dual ball norming `b = U Σ V^T`: `U Σ^{p-1} V^T / ‖b‖_p^{p-1}`.
/// Also returns its `q`-norm computed from the weights, which is 1 up to rounding.
fn dual_element(svd: nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>, p: f64) -> Option<(DMatrix<f64>, f64)> {
    let s = svd.singular_values.as_slice();
    let norm = lp_norm(s, p);
    if norm == 0.0 {
        return None;
    }
    let w: Vec<f64> = s.iter().map(|v| (v / norm).powf(p - 1.0)).collect();
    let dual_norm = lp_norm(&w, p / (p - 1.0));
    let u = svd.u?;
    let vt = svd.v_t?;
    let w = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(w));
    Some((u * w * vt, dual_norm))
}

/// Alternating duality iteration for `sup ‖M∘A‖_p / ‖A‖_p`, started at `a`.
/// Returns the best ratio seen with its matrix.
pub fn refine(symbol: &DMatrix<f64>, a: &DMatrix<f64>, p: f64) -> (f64, DMatrix<f64>) {
    let den = lp_norm(a.singular_values().as_slice(), p);
    if den == 0.0 {
        return (0.0, a.clone());
    }
    if !(p > 1.0 && p.is_finite()) {
        let num = lp_norm(symbol.component_mul(a).singular_values().as_slice(), p);
        return (num / den, a.clone());
    }
    let q = p / (p - 1.0);
    // the SVD of M∘x gives both the ratio at x and the next dual step
    let mut y = symbol.component_mul(a).svd(true, true);
    let mut best = (lp_norm(y.singular_values.as_slice(), p) / den, a.clone());
    for _ in 0..POWER_ITERS {
        let Some((d, _)) = dual_element(y, p) else { break };
        // the Schur map is self-adjoint for a symmetric real symbol
        let Some((next, next_norm)) = dual_element(symbol.component_mul(&d).svd(true, true), q) else { break };
        y = symbol.component_mul(&next).svd(true, true);
        let r = lp_norm(y.singular_values.as_slice(), p) / next_norm;
        let gain = r - best.0;
        if r > best.0 {
            best = (r, next);
        }
        if gain.abs() <= 1e-12 * best.0.max(1e-300) {
            break;
        }
    }
    best
}

/// Warm start for nested samples: the best matrix from a sample whose
/// points are the first `k` points of the current one.
#[derive(Debug, Clone)]
pub struct WarmStart(pub DMatrix<f64>);

#[derive(Debug, Clone)]
pub struct MspResult {
    pub report: BoundReport,
    pub best: DMatrix<f64>,
}

fn trial_matrix(n: usize, seed: u64, trial: usize) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

/// Lower bound on the Schur multiplier norm of `m` on `S_p` over the sample.
///
/// Each trial draws a Gaussian matrix from its own stream, so trial `i` is
/// the same for every trial count. Each new record is refined by the
/// duality iteration; the result is non-decreasing in `trials`.
pub fn msp_lower_bound(
    m: &Profile,
    pts: &SphereSample,
    p: f64,
    trials: usize,
    seed: u64,
    diagonal: f64,
    warm: Option<&WarmStart>,
) -> Result<MspResult> {
    if trials == 0 {
        return Err(LabError::invalid("need at least one trial"));
    }
    if !(p >= 1.0) {
        return Err(LabError::invalid(format!("p = {p} must be at least 1")));
    }
    let n = pts.len();
    let symbol = symbol_matrix(m, pts, diagonal);
    if symbol.iter().any(|v| !v.is_finite()) {
        return Err(LabError::invalid("symbol has non-finite values on the sample"));
    }
    let ratios: Vec<(f64, DMatrix<f64>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let a = trial_matrix(n, seed, t);
            let den = lp_norm(a.singular_values().as_slice(), p);
            let num = lp_norm(symbol.component_mul(&a).singular_values().as_slice(), p);
            (num / den, a)
        })
        .collect();
    let mut random_best = 0.0f64;
    let mut best = (0.0f64, DMatrix::zeros(n, n));
    let mut records = 0usize;
    for (r, a) in ratios {
        if r > random_best {
            random_best = r;
            records += 1;
            let refined = refine(&symbol, &a, p);
            if refined.0 > best.0 {
                best = refined;
            }
        }
    }
    let mut warm_value = None;
    if let Some(WarmStart(w)) = warm {
        let k = w.nrows();
        if k > n || w.ncols() != k {
            return Err(LabError::invalid("warm start does not fit inside the sample"));
        }
        let mut padded = DMatrix::zeros(n, n);
        padded.view_mut((0, 0), (k, k)).copy_from(w);
        let refined = refine(&symbol, &padded, p);
        warm_value = Some(refined.0);
        if refined.0 > best.0 {
            best = refined;
        }
    }
    let mut report = BoundReport::new(
        "msp_lower_bound",
        best.0,
        &["Schur norm on the sample lower-bounds the norm on the sphere", "random trials with duality refinement"],
    )
    .param("p", p)
    .param("points", n)
    .param("trials", trials)
    .param("seed", seed)
    .param("diagonal", diagonal);
    report.flag(FLAG_SAMPLED);
    report.set_quantity("random_best", random_best);
    report.set_quantity("refined_records", records as f64);
    report.set_quantity("symbol_sup", symbol.amax());
    if let Some(w) = warm_value {
        report.set_quantity("warm_start", w);
    }
    Ok(MspResult { report, best: best.1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schatten_examples() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 4.0]));
        assert!((schatten_norm(&d, 2.0).unwrap() - 5.0).abs() < 1e-12);
        assert!((schatten_norm(&d, f64::INFINITY).unwrap() - 4.0).abs() < 1e-12);
        let id = DMatrix::<f64>::identity(9, 9);
        assert!((schatten_norm(&id, 2.0).unwrap() - 3.0).abs() < 1e-12);
        assert!((schatten_norm(&id, 1.0).unwrap() - 9.0).abs() < 1e-12);
        assert!(schatten_norm(&id, 0.5).is_err());
    }

    #[test]
    fn sampling() {
        let s = SphereSample::fibonacci(100).unwrap();
        assert_eq!(s.len(), 100);
        assert!((s.gram() - s.gram().transpose()).amax() == 0.0);
        let r = SphereSample::random(3, 40, 7).unwrap();
        assert_eq!(r, SphereSample::random(3, 40, 7).unwrap());
        assert_eq!(r.prefix(10).unwrap().gram(), &r.gram().view((0, 0), (10, 10)).clone_owned());
        let dup = vec![vec![1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0]];
        assert!(SphereSample::from_points(2, dup).is_err());
    }

    #[test]
    fn schur_basics() {
        let s = SphereSample::fibonacci(12).unwrap();
        let a = trial_matrix(12, 1, 0);
        let same = schur_apply(&Profile::Constant(1.0), &s, &a, 1.0).unwrap();
        assert_eq!(same, a);
        let diag = schur_apply(&Profile::Constant(0.0), &s, &a, 1.0).unwrap();
        assert_eq!(diag, DMatrix::from_diagonal(&a.diagonal()));
        assert!(schur_apply(&Profile::Linear, &s, &DMatrix::zeros(3, 3), 1.0).is_err());
    }

    #[test]
    fn constant_symbols() {
        let s = SphereSample::fibonacci(30).unwrap();
        for p in [1.0, 1.5, 2.0, 4.0] {
            let r = msp_lower_bound(&Profile::Constant(1.0), &s, p, 4, 0, 1.0, None).unwrap();
            assert!((r.report.value() - 1.0).abs() < 1e-9, "{p}");
            let r = msp_lower_bound(&Profile::Constant(-0.5), &s, p, 4, 0, -0.5, None).unwrap();
            assert!((r.report.value() - 0.5).abs() < 1e-9, "{p}");
        }
    }

    #[test]
    fn nested_and_trial_monotone() {
        let big = SphereSample::random(2, 40, 3).unwrap();
        let small = big.prefix(15).unwrap();
        let m = Profile::Step(0.2);
        let a = msp_lower_bound(&m, &small, 4.0, 6, 9, 1.0, None).unwrap();
        let b = msp_lower_bound(&m, &big, 4.0, 6, 9, 1.0, Some(&WarmStart(a.best.clone()))).unwrap();
        assert!(b.report.value() >= a.report.value() - 1e-9);
        let more = msp_lower_bound(&m, &small, 4.0, 12, 9, 1.0, None).unwrap();
        assert!(more.report.value() >= a.report.value() - 1e-12);
    }
}
