//! Tolerances and rounding helpers shared by the analytic modules.
//!
//! Most quantities here are rationals such as `alpha * (l + 1)` evaluated in
//! binary floating point, so `0.3 * 10.0` lands a hair above or below 3. The
//! guarded rounding functions snap values within a relative band of an integer
//! onto that integer before rounding.

/// Absolute tolerance for comparing resistances and potentials.
pub const TOL: f64 = 1e-9;

/// Relative guard band used by [`ceil_guarded`] and [`floor_guarded`].
pub const ROUND_GUARD: f64 = 1e-9;

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= ROUND_GUARD * r.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// `ceil(x)` with near-integers snapped first.
pub fn ceil_guarded(x: f64) -> i64 {
    snap(x).ceil() as i64
}

/// `floor(x)` with near-integers snapped first.
pub fn floor_guarded(x: f64) -> i64 {
    snap(x).floor() as i64
}

/// `[z]_+`.
pub fn pos(z: f64) -> f64 {
    z.max(0.0)
}

pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

/// Smallest admissible y-segment length, `ceil((2 + alpha) / (1 - alpha))`.
pub fn min_y_length(alpha: f64) -> usize {
    ceil_guarded((2.0 + alpha) / (1.0 - alpha)) as usize
}

/// Best rational approximation `p / q` of `x` with `q <= max_den`
/// (continued-fraction convergents).
pub fn rational_approx(x: f64, max_den: u64) -> (i64, u64) {
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1u64, 1i64, 0u64);
    loop {
        let a = v.floor();
        let p2 = a as i64 * p1 + p0;
        let q2 = a as u64 * q1 + q0;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac < 1e-12 {
            break;
        }
        v = 1.0 / frac;
        if !v.is_finite() {
            break;
        }
    }
    if q1 == 0 {
        return (sign * x.abs().round() as i64, 1);
    }
    (sign * p1, q1)
}
