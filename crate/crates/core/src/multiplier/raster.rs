//! Square-function norms of tube-supported functions on the world lattice.

use crate::geometry::raster::{scan_rows, tube_quads};
use crate::geometry::Tube;

/// Lattice sums over the cells whose centres lie in some tube.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RasterNorms {
    /// Cells covered by at least one tube.
    pub cells: u64,
    /// `Σ (Σ_j |v_j|²)^{p/2} h²`.
    pub sum_p: f64,
    /// `Σ Σ_j |v_j|² h²`.
    pub sum_2: f64,
    /// `Σ n² h²` with `n` the number of tubes covering the cell.
    pub count_sq: f64,
    /// Largest `(Σ_j |v_j|²)^{1/2}` over the cells.
    pub sup: f64,
}

impl RasterNorms {
    pub fn measure(&self, h: f64) -> f64 {
        self.cells as f64 * h * h
    }

    pub fn norm_p(&self, p: f64) -> f64 {
        self.sum_p.powf(1.0 / p)
    }

    pub fn norm_2(&self) -> f64 {
        self.sum_2.sqrt()
    }
}

/// Evaluates `value(j, s, t)` (in the local coordinates of tube `j`) at every
/// covered cell centre and aggregates `(Σ_j |value|²)^{1/2}`.
pub fn raster_norms(
    tubes: &[Tube],
    h: f64,
    p: f64,
    value: impl Fn(usize, f64, f64) -> f64 + Sync,
) -> RasterNorms {
    let quads = tube_quads(tubes);
    let h2 = h * h;
    let parts = scan_rows(
        &quads,
        h,
        || (RasterNorms::default(), Vec::<(i64, f64)>::new()),
        |(acc, buf), row| {
            buf.clear();
            for sp in row.spans {
                let tube = &tubes[sp.item];
                for c in sp.lo..=sp.hi {
                    let x = (c as f64 + 0.5) * h;
                    let (s, t) = tube.local2(x, row.y);
                    let v = value(sp.item, s, t);
                    buf.push((c, v * v));
                }
            }
            buf.sort_unstable_by_key(|e| e.0);
            let mut k = 0;
            while k < buf.len() {
                let c = buf[k].0;
                let mut sq = 0.0;
                let mut n = 0.0;
                while k < buf.len() && buf[k].0 == c {
                    sq += buf[k].1;
                    n += 1.0;
                    k += 1;
                }
                acc.cells += 1;
                acc.sum_2 += sq * h2;
                acc.sum_p += sq.powf(0.5 * p) * h2;
                acc.count_sq += n * n * h2;
                acc.sup = acc.sup.max(sq.sqrt());
            }
        },
    );
    parts.into_iter().map(|(a, _)| a).fold(RasterNorms::default(), |mut t, a| {
            t.cells += a.cells;
            t.sum_p += a.sum_p;
            t.sum_2 += a.sum_2;
            t.count_sq += a.count_sq;
            t.sup = t.sup.max(a.sup);
            t
        })
}
