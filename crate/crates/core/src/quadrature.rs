//! Adaptive Simpson quadrature.

/// Value, error estimate and whether the tolerance was met everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Quad {
    if a == b {
        return Quad { value: 0.0, error: 0.0, converged: true };
    }
    let fa = f(a);
    let fb = f(b);
    let mut q = Quad { value: 0.0, error: 0.0, converged: true };
    // Seed with a few panels so narrow features are not skipped.
    let panels = 8;
    let h = (b - a) / panels as f64;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let hi = lo + h;
        let flo = if k == 0 { fa } else { f(lo) };
        let fhi = if k == panels - 1 { fb } else { f(hi) };
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        let s = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        recurse(f, lo, hi, flo, fmid, fhi, s, tol / panels as f64, MAX_DEPTH, &mut q);
    }
    q
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    q: &mut Quad,
) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || !delta.is_finite() {
        q.value += left + right;
        q.error += delta.abs();
        q.converged = false;
        return;
    }
    if delta.abs() <= 15.0 * tol || (b - a).abs() < 1e-300 {
        q.value += left + right + delta / 15.0;
        q.error += delta.abs() / 15.0;
        return;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, q);
    recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, q);
}
