//! Littlewood-Paley windows.
//!
//! `w_0 = χ` and `w(x) = χ(x) - χ(2x)` where `χ` is 1 on `[-1, 1]` and
//! vanishes outside `(-2, 2)`. Then `w_n(x) = w(x / 2^n)` and the partial sum
//! `w_0 + w_1 + ... + w_N` telescopes to `χ(x / 2^N)`.

use crate::bump::plateau;

#[inline]
pub fn w0(x: f64) -> f64 {
    plateau(x)
}

#[inline]
pub fn w(x: f64) -> f64 {
    plateau(x) - plateau(2.0 * x)
}

/// Window of level `n` (`n = 0` is the low-pass window).
#[inline]
pub fn w_n(n: u32, x: f64) -> f64 {
    if n == 0 {
        w0(x)
    } else {
        w(x.abs() / 2f64.powi(n as i32))
    }
}

/// Frequency interval outside which `w_n` vanishes.
pub fn support(n: u32) -> (f64, f64) {
    if n == 0 {
        (0.0, 2.0)
    } else {
        (2f64.powi(n as i32 - 1), 2f64.powi(n as i32 + 1))
    }
}

/// `sup |w_0 + ... + w_N - 1|` over the given points, which should lie in `|x| <= 2^N`.
pub fn partition_residual(levels: u32, xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut worst = 0.0f64;
    for x in xs {
        let mut s = 0.0;
        for n in 0..=levels {
            let (lo, hi) = support(n);
            if x.abs() < hi && (n == 0 || x.abs() > lo) {
                s += w_n(n, x);
            }
        }
        worst = worst.max((s - 1.0).abs());
    }
    worst
}
