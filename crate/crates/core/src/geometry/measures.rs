//! Union measure, compression ratio and the translate-disjointness certificate.

use super::family::TubeFamily;
use super::polygon::intersection_area;
use super::raster::covered_cells;
use super::tube::{tubes_disjoint, Tube};
use crate::error::{LabError, Result};
use crate::report::{BoundReport, FLAG_CERTIFIED, FLAG_SAMPLED, FLAG_UNCERTIFIED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monte-Carlo sample count for `d > 2`.
const MC_SAMPLES: usize = 200_000;

/// Rasterised measure of the union and a two-sided error bound.
///
/// In the plane the error bound is `h` times the total perimeter. In higher
/// dimension the value is a Monte-Carlo estimate and the bound is one
/// standard error.
pub fn union_measure(family: &TubeFamily, h: f64) -> Result<(f64, f64)> {
    union_measure_of(family.tubes(), family.delta(), h)
}

pub fn union_measure_of(tubes: &[Tube], delta: f64, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) || h >= delta / 4.0 {
        return Err(LabError::ResolutionTooCoarse(format!(
            "cell size {h} must be below width/4 = {}",
            delta / 4.0
        )));
    }
    if tubes[0].dim() != 2 {
        return Ok(monte_carlo_union(tubes, 0));
    }
    let cells = covered_cells(tubes, h);
    let perimeter: f64 = tubes.iter().map(|t| t.perimeter()).sum();
    Ok((cells as f64 * h * h, h * perimeter))
}

fn monte_carlo_union(tubes: &[Tube], seed: u64) -> (f64, f64) {
    let d = tubes[0].dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for t in tubes {
        let (a, b) = t.bbox();
        for i in 0..d {
            lo[i] = lo[i].min(a[i]);
            hi[i] = hi[i].max(b[i]);
        }
    }
    let vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = vec![0.0; d];
    let mut hits = 0usize;
    for _ in 0..MC_SAMPLES {
        for i in 0..d {
            p[i] = rng.random_range(lo[i]..hi[i]);
        }
        if tubes.iter().any(|t| t.contains(&p)) {
            hits += 1;
        }
    }
    let frac = hits as f64 / MC_SAMPLES as f64;
    (vol * frac, vol * (frac * (1.0 - frac) / MC_SAMPLES as f64).sqrt())
}

/// Candidate pairs whose bounding boxes overlap (sweep and prune on x).
pub fn overlapping_bbox_pairs(tubes: &[Tube]) -> Vec<(usize, usize)> {
    let boxes: Vec<(Vec<f64>, Vec<f64>)> = tubes.iter().map(|t| t.bbox()).collect();
    let mut order: Vec<usize> = (0..tubes.len()).collect();
    order.sort_by(|&a, &b| boxes[a].0[0].total_cmp(&boxes[b].0[0]));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if boxes[j].0[0] > boxes[i].1[0] {
                break;
            }
            let overlap = (1..boxes[i].0.len())
                .all(|c| boxes[j].0[c] <= boxes[i].1[c] && boxes[i].0[c] <= boxes[j].1[c]);
            if overlap {
                out.push((i.min(j), i.max(j)));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Result of checking that the translated tubes are pairwise disjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub passed: bool,
    pub offending: Vec<(usize, usize)>,
    pub sampled: bool,
}

pub fn translate_certificate(family: &TubeFamily) -> Certificate {
    certificate_of(&family.translates())
}

pub fn certificate_of(tubes: &[Tube]) -> Certificate {
    let offending: Vec<(usize, usize)> = overlapping_bbox_pairs(tubes)
        .into_iter()
        .filter(|&(i, j)| !tubes_disjoint(&tubes[i], &tubes[j]).unwrap_or(false))
        .collect();
    Certificate {
        passed: offending.is_empty(),
        offending,
        sampled: tubes[0].dim() > 2,
    }
}

/// `ε = |∪R_j| / Σ|R_j|`, an upper-bound witness for the compression functional.
pub fn compression_ratio(family: &TubeFamily, h: f64, enforce_disjoint: bool) -> Result<BoundReport> {
    let cert = translate_certificate(family);
    if enforce_disjoint && !cert.passed {
        let shown: Vec<String> =
            cert.offending.iter().take(20).map(|(i, j)| format!("({i},{j})")).collect();
        return Err(LabError::ConstraintViolation {
            message: format!(
                "{} translate pairs overlap: {}{}",
                cert.offending.len(),
                shown.join(" "),
                if cert.offending.len() > 20 { " ..." } else { "" }
            ),
            pairs: cert.offending,
        });
    }
    let (u, err) = union_measure(family, h)?;
    let total = family.total_measure();
    let mut r = BoundReport::new("compression_ratio", u / total, &["union / sum of tube measures"])
        .with_error(err / total)
        .param("family", &family.meta().name)
        .param("tubes", family.len())
        .param("delta", family.delta())
        .param("resolution", h);
    r.set_quantity("union_measure", u);
    r.set_quantity("sum_measure", total);
    r.flag(if cert.passed { FLAG_CERTIFIED } else { FLAG_UNCERTIFIED });
    if cert.sampled || family.dim() > 2 {
        r.flag(FLAG_SAMPLED);
    }
    r.set_quantity("offending_pairs", cert.offending.len() as f64);
    Ok(r)
}

/// `Σ_{i,j} |R̄_i ∩ R̄_j|` over ordered pairs, diagonal included.
pub fn translate_overlap_sum(family: &TubeFamily) -> Result<f64> {
    if family.dim() != 2 {
        return Err(LabError::invalid("exact overlap sums are planar only"));
    }
    let tr = family.translates();
    let diag: f64 = tr.iter().map(|t| t.measure()).sum();
    let off: f64 = overlapping_bbox_pairs(&tr)
        .into_iter()
        .map(|(i, j)| intersection_area(&tr[i].corners(), &tr[j].corners()))
        .sum();
    Ok(diag + 2.0 * off)
}

/// The relaxed score: union ratio times the translate overlap ratio.
pub fn relaxed_score(family: &TubeFamily, h: f64) -> Result<BoundReport> {
    if family.dim() != 2 {
        return Err(LabError::invalid("relaxed_score is planar only"));
    }
    let (u, err) = union_measure(family, h)?;
    let total = family.total_measure();
    let overlap = translate_overlap_sum(family)?;
    let ratio = u / total;
    let factor = overlap / total;
    let mut r = BoundReport::new(
        "relaxed_score",
        ratio * factor,
        &["union / sum of tube measures", "sum of pairwise translate overlaps / sum of measures"],
    )
    .with_error(err / total * factor)
    .param("resolution", h)
    .param("tubes", family.len());
    r.set_quantity("union_ratio", ratio);
    r.set_quantity("overlap_factor", factor);
    Ok(r)
}
