//! Smooth bump primitives built from `exp(-1/x)`.

/// `exp(-1/x)` for `x > 0`, zero otherwise.
#[inline]
pub fn psi(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `t <= 0`, 1 for `t >= 1`.
#[inline]
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = psi(t);
        a / (a + psi(1.0 - t))
    }
}

/// Plateau function: 1 on `[-1, 1]`, 0 outside `(-2, 2)`.
#[inline]
pub fn plateau(x: f64) -> f64 {
    smooth_step(2.0 - x.abs())
}

/// Standard bump `exp(-1/(1-u^2))` on `(-1, 1)`, unnormalised.
#[inline]
pub fn unit_bump(u: f64) -> f64 {
    let s = 1.0 - u * u;
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Bump supported on `(a, b)` with peak value `e^{-1}` at the midpoint.
#[inline]
pub fn interval_bump(x: f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    unit_bump((x - c) / hw)
}

/// Derivative of `interval_bump` in `x`.
#[inline]
pub fn interval_bump_deriv(x: f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let u = (x - c) / hw;
    let s = 1.0 - u * u;
    if s > 0.0 {
        // d/du exp(-1/s) = exp(-1/s) * (-2u / s^2)
        (-1.0 / s).exp() * (-2.0 * u / (s * s)) / hw
    } else {
        0.0
    }
}
