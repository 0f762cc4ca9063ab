//! The two-case (ε, δ) blanket bound for shuffled k-RR reports.
//!
//! Case 1 holds when `e^-ε₀ <= tanh²(ε/2) / (e^ε₀ - e^-ε₀)²`, Case 2 otherwise.
//! The bound is
//!
//! ```text
//! δ(ε) = (e^ε + 1)² (e^ε₀ - e^-ε₀)² / (4 n (e^ε - 1)) · exp(-C n E)
//! ```
//!
//! with `E = e^-ε₀` in Case 1 and `E = tanh²(ε/2) / (e^ε₀ - e^-ε₀)²` in Case 2.
//! Everything is evaluated in log space; realistic instances give δ far below
//! the smallest positive `f64`.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{bisect, ln_blanket_prefactor, ln_two_sinh, tanh_half};
use crate::params::{ShuffleParams, BLANKET_C};

/// Number of scan points used to bracket a crossing in [`epsilon_for_delta`].
pub const INVERSION_SCAN_POINTS: usize = 1024;
/// Tolerance on `ln δ(ε) - ln δ_target` for [`epsilon_for_delta`].
pub const INVERSION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Case1,
    Case2,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::Case1 => f.write_str("Case1"),
            CaseTag::Case2 => f.write_str("Case2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaBound {
    pub case: CaseTag,
    pub ln_delta: f64,
    /// `min(exp(ln_delta), 1)`.
    pub delta_clamped: f64,
    pub epsilon: f64,
}

/// Both sides of the case inequality: `(e^-ε₀, tanh²(ε/2) / (e^ε₀ - e^-ε₀)²)`.
pub fn case_sides(epsilon0: f64, epsilon: f64) -> (f64, f64) {
    let lhs = (-epsilon0).exp();
    let ratio = tanh_half(epsilon) * (-ln_two_sinh(epsilon0)).exp();
    (lhs, ratio * ratio)
}

pub fn select_case(epsilon0: f64, epsilon: f64) -> Result<CaseTag> {
    if !(epsilon0 > 0.0 && epsilon > 0.0) {
        return Err(Error::NonPositiveInput { epsilon0, epsilon });
    }
    let (lhs, rhs) = case_sides(epsilon0, epsilon);
    Ok(if lhs <= rhs {
        CaseTag::Case1
    } else {
        CaseTag::Case2
    })
}

/// `ln δ` for a given case branch, regardless of which case actually holds.
///
/// Exposed so the two branches can be compared at the case boundary; use
/// [`delta_bound`] for the bound itself.
pub fn ln_delta_branch(epsilon0: f64, n: u64, epsilon: f64, case: CaseTag) -> f64 {
    let exponent = match case {
        CaseTag::Case1 => (-epsilon0).exp(),
        CaseTag::Case2 => case_sides(epsilon0, epsilon).1,
    };
    let n = n as f64;
    ln_blanket_prefactor(epsilon) + 2.0 * ln_two_sinh(epsilon0)
        - (4.0 * n).ln()
        - BLANKET_C * n * exponent
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveEpsilon(epsilon))
    }
}

pub fn delta_bound(params: &ShuffleParams, epsilon: f64) -> Result<DeltaBound> {
    params.validate()?;
    check_epsilon(epsilon)?;
    let case = select_case(params.epsilon0, epsilon)?;
    let ln_delta = ln_delta_branch(params.epsilon0, params.n, epsilon, case);
    Ok(DeltaBound {
        case,
        ln_delta,
        delta_clamped: ln_delta.exp().min(1.0),
        epsilon,
    })
}

/// Finds ε in `[lo, hi]` with `ln δ(ε) = ln delta_target` within
/// [`INVERSION_TOLERANCE`].
///
/// `ln δ(ε)` is not monotone in ε, so the interval is scanned on
/// [`INVERSION_SCAN_POINTS`] points and the first sign change is refined by
/// bisection. Returns `Ok(None)` when the scan sees no crossing.
pub fn epsilon_for_delta(
    params: &ShuffleParams,
    delta_target: f64,
    lo: f64,
    hi: f64,
) -> Result<Option<f64>> {
    params.validate()?;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::BadInterval { lo, hi });
    }
    if !(delta_target > 0.0 && delta_target < 1.0) {
        return Err(Error::BadDeltaTarget(delta_target));
    }
    let ln_target = delta_target.ln();
    let gap = |eps: f64| {
        let case = if (-params.epsilon0).exp() <= case_sides(params.epsilon0, eps).1 {
            CaseTag::Case1
        } else {
            CaseTag::Case2
        };
        ln_delta_branch(params.epsilon0, params.n, eps, case) - ln_target
    };

    let step = (hi - lo) / (INVERSION_SCAN_POINTS - 1) as f64;
    let point = |i: usize| {
        if i + 1 == INVERSION_SCAN_POINTS {
            hi
        } else {
            lo + step * i as f64
        }
    };
    let mut prev_eps = point(0);
    let mut prev_gap = gap(prev_eps);
    if prev_gap.abs() <= INVERSION_TOLERANCE {
        return Ok(Some(prev_eps));
    }
    for i in 1..INVERSION_SCAN_POINTS {
        let eps = point(i);
        let g = gap(eps);
        if g.abs() <= INVERSION_TOLERANCE {
            return Ok(Some(eps));
        }
        if (g < 0.0) != (prev_gap < 0.0) {
            return Ok(Some(bisect(gap, prev_eps, eps)));
        }
        prev_eps = eps;
        prev_gap = g;
    }
    Ok(None)
}
