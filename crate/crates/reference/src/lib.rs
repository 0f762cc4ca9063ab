//! Multiple-precision evaluation of the blanket constants and δ bound.
//!
//! Everything is computed straight from the textbook definitions at 256 bits
//! (about 77 decimal digits), with no log-space rewriting, so the results
//! serve as an independent reference for the `f64` implementation.

use astro_float_num::{BigFloat, Consts, Radix, RoundingMode};

const PRECISION: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

/// κ₁..κ₅ rounded to `f64` after high-precision evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceKappas {
    pub ln_kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    /// `None` when the artanh argument is not below 1.
    pub kappa4: Option<f64>,
    pub kappa5: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceBound {
    pub case1: bool,
    pub ln_delta: f64,
}

struct Ctx {
    cc: Consts,
}

impl Ctx {
    fn new() -> Self {
        Ctx {
            cc: Consts::new().expect("constant cache"),
        }
    }

    fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, PRECISION)
    }

    fn int(&self, x: u64) -> BigFloat {
        BigFloat::from_u64(x, PRECISION)
    }

    fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(PRECISION, RM, &mut self.cc)
    }

    fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PRECISION, RM, &mut self.cc)
    }

    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, PRECISION, RM)
    }

    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, PRECISION, RM)
    }

    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, PRECISION, RM)
    }

    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, PRECISION, RM)
    }

    fn blanket_c(&mut self) -> BigFloat {
        let e_minus_two = self.exp(&self.num(-2.0));
        self.sub(&self.int(1), &e_minus_two)
    }

    fn f64_of(&mut self, x: &BigFloat) -> f64 {
        let text = x
            .format(Radix::Dec, RM, &mut self.cc)
            .expect("decimal formatting");
        text.parse().unwrap_or(f64::NAN)
    }
}

/// κ₁..κ₅ for local level `epsilon0`, `n` users, alphabet size `k`, and the
/// target's probability `pi_x`.
pub fn kappas(epsilon0: f64, n: u64, k: usize, pi_x: f64) -> ReferenceKappas {
    let mut c = Ctx::new();
    let one = c.int(1);
    let two = c.int(2);
    let eps0 = c.num(epsilon0);
    let nn = c.int(n);
    let pi = c.num(pi_x);

    let e = c.exp(&eps0);
    let e_inv = c.exp(&eps0.neg());
    let gap = c.sub(&e, &e_inv);
    let gap_sq = c.mul(&gap, &gap);

    // κ₁ = (e^ε₀ - e^-ε₀)² e^(C n e^-ε₀) / 4
    let cst = c.blanket_c();
    let exponent = c.mul(&c.mul(&cst, &nn), &e_inv);
    let blow = c.exp(&exponent);
    let kappa1 = c.div(&c.mul(&gap_sq, &blow), &c.int(4));
    let ln_kappa1 = c.ln(&kappa1);

    // κ₂ = 1 + (e^ε₀ - 1) / (n + (e^ε₀ - 1) π (n - 1))
    let em1 = c.sub(&e, &one);
    let denom = c.add(&nn, &c.mul(&c.mul(&em1, &pi), &c.sub(&nn, &one)));
    let kappa2 = c.add(&one, &c.div(&em1, &denom));

    // κ₃ = (n + (e^ε₀ - 1)(n π + 1 - π)) / (e^ε₀ + k - 1)
    let inner = c.sub(&c.add(&c.mul(&nn, &pi), &one), &pi);
    let numer = c.add(&nn, &c.mul(&em1, &inner));
    let kappa3 = c.div(&numer, &c.sub(&c.add(&e, &c.int(k as u64)), &one));

    // κ₄ = 2 artanh(2 sinh(ε₀) / e^(ε₀/2))
    let sinh = eps0.sinh(PRECISION, RM, &mut c.cc);
    let half = c.div(&eps0, &two);
    let e_half = c.exp(&half);
    let arg = c.div(&c.mul(&two, &sinh), &e_half);
    let kappa4 = if arg.cmp(&one) == Some(-1) {
        let at = arg.atanh(PRECISION, RM, &mut c.cc);
        let doubled = c.mul(&two, &at);
        Some(c.f64_of(&doubled))
    } else {
        None
    };

    // κ₅ = sinh²(ε₀) / n
    let kappa5 = c.div(&c.mul(&sinh, &sinh), &nn);

    ReferenceKappas {
        ln_kappa1: c.f64_of(&ln_kappa1),
        kappa2: c.f64_of(&kappa2),
        kappa3: c.f64_of(&kappa3),
        kappa4,
        kappa5: c.f64_of(&kappa5),
    }
}

/// The minimal δ of the two-case blanket bound at `epsilon`.
pub fn delta_bound(epsilon0: f64, n: u64, epsilon: f64) -> ReferenceBound {
    let mut c = Ctx::new();
    let one = c.int(1);
    let eps0 = c.num(epsilon0);
    let eps = c.num(epsilon);
    let nn = c.int(n);

    let e0 = c.exp(&eps0);
    let e0_inv = c.exp(&eps0.neg());
    let gap = c.sub(&e0, &e0_inv);
    let gap_sq = c.mul(&gap, &gap);
    let ee = c.exp(&eps);
    let up = c.add(&ee, &one);
    let down = c.sub(&ee, &one);

    let rhs = c.div(&c.mul(&down, &down), &c.mul(&c.mul(&up, &up), &gap_sq));
    let case1 = e0_inv.cmp(&rhs).map(|o| o <= 0).unwrap_or(false);
    let exponent_base = if case1 { e0_inv } else { rhs };

    let cst = c.blanket_c();
    let pre = c.div(
        &c.mul(&c.mul(&up, &up), &gap_sq),
        &c.mul(&c.mul(&c.int(4), &nn), &down),
    );
    let damp = c.exp(&c.mul(&c.mul(&cst, &nn), &exponent_base).neg());
    let delta = c.mul(&pre, &damp);
    let ln_delta = c.ln(&delta);
    ReferenceBound {
        case1,
        ln_delta: c.f64_of(&ln_delta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_matches_independent_values() {
        // 60-digit values computed separately.
        let r = kappas(0.5, 100, 2, 0.5);
        assert!((r.ln_kappa1 - 51.140_921_456_979_408).abs() < 1e-12);
        assert!((r.kappa2 - 1.004_910_399_733_42).abs() < 1e-14);
        assert!((r.kappa3 - 50.122_459_331_201_86).abs() < 1e-12);
        assert!((r.kappa4.unwrap() - 2.263_743_331_957_316).abs() < 1e-14);
        assert!((r.kappa5 - 0.002_715_403_174_076_219).abs() < 1e-17);
        assert_eq!(kappas(0.7, 10, 2, 0.5).kappa4, None);

        let b = delta_bound(0.1, 10, 0.5);
        assert!(b.case1);
        assert!((b.ln_delta - -12.347_326_855_957_35).abs() < 1e-12);
        let b = delta_bound(0.5, 100, 1.0);
        assert!(!b.case1);
        assert!((b.ln_delta - -20.823_956_474_313_41).abs() < 1e-12);
    }

    #[test]
    fn huge_kappa1_is_representable() {
        let r = kappas(0.01, 10_000, 10, 0.1);
        assert!(r.ln_kappa1 > 8000.0 && r.ln_kappa1.is_finite());
    }
}
