//! Small log-space helpers shared by the bound and tightness code.

/// `ln(e^x - e^-x)` for `x > 0`, without overflow for large `x`.
pub fn ln_two_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln()
}

/// `ln((e^x + 1)^2 / (e^x - 1))` for `x > 0`.
pub fn ln_blanket_prefactor(x: f64) -> f64 {
    x + 2.0 * (-x).exp().ln_1p() - (-(-x).exp_m1()).ln()
}

/// `(e^x - 1) / (e^x + 1)`.
pub fn tanh_half(x: f64) -> f64 {
    (0.5 * x).tanh()
}

/// Bisection on a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of opposite
/// sign. Runs until the midpoint no longer separates the endpoints, so the
/// result is as close to the crossing as `f64` allows.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    let mut f_hi = f_hi;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    if f_lo.abs() <= f_hi.abs() {
        lo
    } else {
        hi
    }
}
