//! Cell-centre rasterisation of convex quadrilaterals, one row at a time.
//!
//! Cell `(i, j)` has centre `((i + 1/2) h, (j + 1/2) h)`; the lattice is
//! anchored at the world origin so results do not depend on the bounding box.

use super::polygon::Pt;
use super::tube::Tube;
use crate::error::{LabError, Result};
use rayon::prelude::*;

const ROWS_PER_CHUNK: i64 = 64;

/// Inclusive column range of the cells of quad `item` whose centres lie in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub item: usize,
    pub lo: i64,
    pub hi: i64,
}

pub struct Row<'a> {
    pub index: i64,
    pub y: f64,
    pub spans: &'a [Span],
}

struct Quad {
    pts: [Pt; 4],
    ymin: f64,
    ymax: f64,
}

fn quad_of(pts: [Pt; 4]) -> Quad {
    let ymin = pts.iter().fold(f64::INFINITY, |m, p| m.min(p[1]));
    let ymax = pts.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p[1]));
    Quad { pts, ymin, ymax }
}

fn x_range(q: &Quad, y: f64) -> Option<(f64, f64)> {
    if y < q.ymin || y > q.ymax {
        return None;
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..4 {
        let p = q.pts[k];
        let r = q.pts[(k + 1) % 4];
        let (y0, y1) = (p[1].min(r[1]), p[1].max(r[1]));
        if y < y0 || y > y1 {
            continue;
        }
        if r[1] == p[1] {
            lo = lo.min(p[0].min(r[0]));
            hi = hi.max(p[0].max(r[0]));
        } else {
            let t = (y - p[1]) / (r[1] - p[1]);
            let x = p[0] + t * (r[0] - p[0]);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    if lo <= hi {
        Some((lo, hi))
    } else {
        None
    }
}

/// Runs `visit` on every row crossing any of the quads.
///
/// Rows are grouped into chunks that may run in parallel; each chunk folds
/// into its own accumulator and the accumulators come back in row order.
pub fn scan_rows<A, I, V>(quads: &[[Pt; 4]], h: f64, identity: I, visit: V) -> Vec<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &Row) + Sync,
{
    if quads.is_empty() {
        return Vec::new();
    }
    let qs: Vec<Quad> = quads.iter().map(|&p| quad_of(p)).collect();
    let row_of_lo = |y: f64| (y / h - 0.5).ceil() as i64;
    let row_of_hi = |y: f64| (y / h - 0.5).floor() as i64;
    let jmin = qs.iter().map(|q| row_of_lo(q.ymin)).min().unwrap();
    let jmax = qs.iter().map(|q| row_of_hi(q.ymax)).max().unwrap();
    if jmax < jmin {
        return Vec::new();
    }
    let nchunks = ((jmax - jmin) / ROWS_PER_CHUNK + 1) as usize;
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); nchunks];
    for (i, q) in qs.iter().enumerate() {
        let a = row_of_lo(q.ymin);
        let b = row_of_hi(q.ymax);
        if b < a {
            continue;
        }
        let ca = ((a - jmin) / ROWS_PER_CHUNK) as usize;
        let cb = ((b - jmin) / ROWS_PER_CHUNK) as usize;
        for bucket in &mut buckets[ca..=cb] {
            bucket.push(i);
        }
    }
    buckets
        .par_iter()
        .enumerate()
        .map(|(c, items)| {
            let mut acc = identity();
            let mut spans = Vec::new();
            let r0 = jmin + c as i64 * ROWS_PER_CHUNK;
            let r1 = (r0 + ROWS_PER_CHUNK - 1).min(jmax);
            for j in r0..=r1 {
                let y = (j as f64 + 0.5) * h;
                spans.clear();
                for &i in items {
                    if let Some((xl, xr)) = x_range(&qs[i], y) {
                        let lo = (xl / h - 0.5).ceil() as i64;
                        let hi = (xr / h - 0.5).floor() as i64;
                        if lo <= hi {
                            spans.push(Span { item: i, lo, hi });
                        }
                    }
                }
                if !spans.is_empty() {
                    visit(&mut acc, &Row { index: j, y, spans: &spans });
                }
            }
            acc
        })
        .collect()
}

/// Number of distinct cells covered by the spans of one row.
pub fn union_cells(spans: &[Span]) -> u64 {
    let mut iv: Vec<(i64, i64)> = spans.iter().map(|s| (s.lo, s.hi)).collect();
    iv.sort_unstable();
    let mut count = 0u64;
    let mut cur: Option<(i64, i64)> = None;
    for (lo, hi) in iv {
        match cur {
            Some((a, b)) if lo <= b + 1 => cur = Some((a, b.max(hi))),
            Some((a, b)) => {
                count += (b - a + 1) as u64;
                cur = Some((lo, hi));
            }
            None => cur = Some((lo, hi)),
        }
    }
    if let Some((a, b)) = cur {
        count += (b - a + 1) as u64;
    }
    count
}

pub fn tube_quads(tubes: &[Tube]) -> Vec<[Pt; 4]> {
    tubes.iter().map(|t| t.corners()).collect()
}

/// Number of cells whose centre lies in the union of the tubes.
pub fn covered_cells(tubes: &[Tube], h: f64) -> u64 {
    scan_rows(&tube_quads(tubes), h, || 0u64, |acc, row| *acc += union_cells(row.spans))
        .into_iter()
        .sum()
}

/// Occupancy bitmask over an axis-aligned box.
#[derive(Debug, Clone)]
pub struct RasterGrid {
    h: f64,
    col0: i64,
    row0: i64,
    cols: usize,
    rows: usize,
    bits: Vec<u64>,
}

impl RasterGrid {
    const MAX_CELLS: usize = 1 << 30;

    /// Grid of cells whose centres lie in `[lo, hi]`.
    pub fn new(lo: [f64; 2], hi: [f64; 2], h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(LabError::invalid("resolution must be positive"));
        }
        let col0 = (lo[0] / h - 0.5).floor() as i64;
        let row0 = (lo[1] / h - 0.5).floor() as i64;
        let cols = ((hi[0] / h - 0.5).ceil() as i64 - col0 + 1).max(1) as usize;
        let rows = ((hi[1] / h - 0.5).ceil() as i64 - row0 + 1).max(1) as usize;
        if cols.saturating_mul(rows) > Self::MAX_CELLS {
            return Err(LabError::ResolutionTooCoarse(format!(
                "{cols}x{rows} cells exceed the bitmask budget"
            )));
        }
        Ok(RasterGrid { h, col0, row0, cols, rows, bits: vec![0; (cols * rows).div_ceil(64)] })
    }

    pub fn resolution(&self) -> f64 {
        1.0 / self.h
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.cols, self.rows)
    }

    /// Marks every cell centre covered by a tube; tubes must lie in the box.
    pub fn fill(&mut self, tubes: &[Tube]) -> Result<()> {
        let rows: Vec<Vec<(i64, i64, i64)>> = scan_rows(&tube_quads(tubes), self.h, Vec::new, |acc, row| {
            for s in row.spans {
                acc.push((row.index, s.lo, s.hi));
            }
        });
        for (j, lo, hi) in rows.into_iter().flatten() {
            let r = j - self.row0;
            let (c0, c1) = (lo - self.col0, hi - self.col0);
            if r < 0 || r >= self.rows as i64 || c0 < 0 || c1 >= self.cols as i64 {
                return Err(LabError::DomainTooSmall("tube leaves the raster box".into()));
            }
            for c in c0..=c1 {
                let k = r as usize * self.cols + c as usize;
                self.bits[k / 64] |= 1u64 << (k % 64);
            }
        }
        Ok(())
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        let k = row * self.cols + col;
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tube::tube2;

    #[test]
    fn axis_aligned_square_cell_count() {
        // tube [0,1] x [-0.1, 0.1] at h = 0.01: 100 columns by 20 rows
        let t = tube2([0.0, 0.0], [1.0, 0.0], 0.1).unwrap();
        assert_eq!(covered_cells(std::slice::from_ref(&t), 0.01), 2000);
        let mut g = RasterGrid::new([-0.5, -0.5], [1.5, 0.5], 0.01).unwrap();
        g.fill(&[t]).unwrap();
        assert_eq!(g.count(), 2000);
    }

    #[test]
    fn span_union() {
        let s = |lo, hi| Span { item: 0, lo, hi };
        assert_eq!(union_cells(&[s(0, 4), s(3, 9), s(20, 20)]), 11);
        assert_eq!(union_cells(&[s(0, 4), s(5, 5)]), 6);
    }

    #[test]
    fn bitmask_agrees_with_span_count() {
        let a = tube2([0.0, 0.0], [1.0, 0.4], 0.05).unwrap();
        let b = tube2([0.2, 0.3], [0.7, -1.0], 0.05).unwrap();
        let h = 0.005;
        let mut g = RasterGrid::new([-1.0, -1.0], [2.0, 2.0], h).unwrap();
        g.fill(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(g.count(), covered_cells(&[a, b], h));
    }
}
