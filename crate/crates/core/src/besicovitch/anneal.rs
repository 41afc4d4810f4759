//! Simulated annealing over tube positions and directions.

use super::keich::repair;
use crate::error::{LabError, Result};
use crate::geometry::measures::{certificate_of, union_measure_of};
use crate::geometry::tube::{make_tube, translate_tube, tubes_disjoint, Tube, DEFAULT_WINDOW};
use crate::geometry::{FamilyMeta, TubeFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    pub t0: f64,
    pub cooling: f64,
    /// Raster cells per width when scoring.
    pub subdivisions: f64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule { t0: 0.05, cooling: 0.999, subdivisions: 5.0 }
    }
}

/// `n` parallel vertical tubes three widths apart: a feasible start at ε = 1.
pub fn parallel_start(n: usize, delta: f64) -> Result<Vec<Tube>> {
    (0..n)
        .map(|i| make_tube(2, &[3.0 * delta * i as f64, 0.0], &[0.0, 1.0], delta, DEFAULT_WINDOW))
        .collect()
}

pub fn optimize_family(n: usize, delta: f64, seed: u64, iters: usize) -> Result<TubeFamily> {
    if n < 2 {
        return Err(LabError::invalid("need at least two tubes"));
    }
    if iters < 1 {
        return Err(LabError::invalid("need at least one iteration"));
    }
    let start = parallel_start(n, delta)?;
    let mut fam = optimize_from(start, seed, iters, AnnealSchedule::default())?;
    let meta = fam.meta_mut();
    meta.name = "annealed".into();
    meta.params.insert("n".into(), n.into());
    meta.params.insert("delta".into(), delta.into());
    meta.params.insert("iters".into(), iters.into());
    Ok(fam)
}

fn score(tubes: &[Tube], h: f64) -> f64 {
    let total: f64 = tubes.iter().map(|t| t.measure()).sum();
    union_measure_of(tubes, tubes[0].delta(), h).map(|(u, _)| u / total).unwrap_or(f64::INFINITY)
}

/// Anneals from a given family; the best family seen is returned, so the
/// result never scores worse than `start`.
pub fn optimize_from(
    mut start: Vec<Tube>,
    seed: u64,
    iters: usize,
    sched: AnnealSchedule,
) -> Result<TubeFamily> {
    if start.is_empty() || start[0].dim() != 2 {
        return Err(LabError::invalid("annealing works on non-empty planar families"));
    }
    let delta = start[0].delta();
    let window = start[0].window();
    if !certificate_of(&start.iter().map(translate_tube).collect::<Vec<_>>()).passed {
        repair(&mut start).map_err(|e| {
            LabError::ConstructionFailed(format!("infeasible start for annealing: {e}"))
        })?;
    }
    let h = delta / sched.subdivisions;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = Normal::new(0.0, delta).expect("positive deviation");
    let mut cur = start.clone();
    let mut cur_tr: Vec<Tube> = cur.iter().map(translate_tube).collect();
    let mut cur_score = score(&cur, h);
    let mut best = cur.clone();
    let mut best_score = cur_score;
    let mut temp = sched.t0;
    let mut accepted = 0usize;
    for _ in 0..iters {
        let j = rng.random_range(0..cur.len());
        let t = &cur[j];
        let cand = if rng.random_bool(0.5) {
            let o = [t.origin()[0] + jitter.sample(&mut rng), t.origin()[1] + jitter.sample(&mut rng)];
            make_tube(2, &o, t.direction(), delta, window)?
        } else {
            // rotate about the tube midpoint
            let ang = t.direction()[1].atan2(t.direction()[0]) + jitter.sample(&mut rng);
            let dir = [ang.cos(), ang.sin()];
            let mid = [t.origin()[0] + 0.5 * t.direction()[0], t.origin()[1] + 0.5 * t.direction()[1]];
            make_tube(2, &[mid[0] - 0.5 * dir[0], mid[1] - 0.5 * dir[1]], &dir, delta, window)?
        };
        let cand_tr = translate_tube(&cand);
        let feasible = cur_tr
            .iter()
            .enumerate()
            .all(|(i, tr)| i == j || tubes_disjoint(tr, &cand_tr).unwrap_or(false));
        temp *= sched.cooling;
        if !feasible {
            continue;
        }
        let old = std::mem::replace(&mut cur[j], cand);
        let s = score(&cur, h);
        let accept = s <= cur_score || rng.random::<f64>() < (-(s - cur_score) / temp.max(1e-300)).exp();
        if accept {
            cur_tr[j] = cand_tr;
            cur_score = s;
            accepted += 1;
            if s < best_score {
                best_score = s;
                best = cur.clone();
            }
        } else {
            cur[j] = old;
        }
    }
    let mut meta = FamilyMeta { name: "annealed".into(), seed: Some(seed), ..Default::default() };
    meta.params.insert("best_score".into(), best_score.into());
    meta.params.insert("accepted".into(), accepted.into());
    TubeFamily::new(best, meta)
}
