//! Instance parameters and the blanket constants.

use crate::error::{Error, Result};
use crate::numeric::ln_two_sinh;

/// The blanket constant `1 - e^-2`.
pub const BLANKET_C: f64 = 0.864_664_716_763_387_3;

const PI_SUM_TOLERANCE: f64 = 1e-9;

/// A shuffle-model instance: `n` users each applying ε₀-LDP k-ary randomized
/// response to an element of `{0, .., k-1}` drawn from `pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShuffleParams {
    pub epsilon0: f64,
    pub n: u64,
    pub k: usize,
    pub pi: Vec<f64>,
}

impl ShuffleParams {
    pub fn new(epsilon0: f64, n: u64, k: usize, pi: Vec<f64>) -> Result<Self> {
        let params = ShuffleParams { epsilon0, n, k, pi };
        params.validate()?;
        Ok(params)
    }

    /// Instance with the uniform distribution `(1/k, .., 1/k)`.
    pub fn uniform(epsilon0: f64, n: u64, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::BadAlphabet(k));
        }
        Self::new(epsilon0, n, k, vec![1.0 / k as f64; k])
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon0 > 0.0 && self.epsilon0.is_finite()) {
            return Err(Error::NonPositiveEpsilon0(self.epsilon0));
        }
        if self.n < 1 {
            return Err(Error::BadSize(self.n));
        }
        if self.k < 2 {
            return Err(Error::BadAlphabet(self.k));
        }
        if self.pi.len() != self.k {
            return Err(Error::BadDistribution(format!(
                "expected {} entries, got {}",
                self.k,
                self.pi.len()
            )));
        }
        if let Some(p) = self.pi.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
            return Err(Error::BadDistribution(format!("entry {p} is not a probability")));
        }
        let total: f64 = self.pi.iter().sum();
        if (total - 1.0).abs() > PI_SUM_TOLERANCE {
            return Err(Error::BadDistribution(format!("entries sum to {total}, not 1")));
        }
        Ok(())
    }

    pub fn check_element(&self, index: usize) -> Result<()> {
        if index < self.k {
            Ok(())
        } else {
            Err(Error::BadElement { index, k: self.k })
        }
    }
}

/// The fixed user's two candidate inputs `x0` and `x1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TargetPair {
    pub x0: usize,
    pub x1: usize,
}

impl TargetPair {
    pub fn new(x0: usize, x1: usize, k: usize) -> Result<Self> {
        if x0 >= k {
            return Err(Error::BadElement { index: x0, k });
        }
        if x1 >= k {
            return Err(Error::BadElement { index: x1, k });
        }
        if x0 == x1 {
            return Err(Error::DegeneratePair(x0));
        }
        Ok(TargetPair { x0, x1 })
    }

    /// All ordered pairs `(x0, x1)` with `x0 != x1`, in lexicographic order.
    pub fn all_ordered(k: usize) -> impl Iterator<Item = TargetPair> {
        (0..k).flat_map(move |x0| {
            (0..k)
                .filter(move |&x1| x1 != x0)
                .map(move |x1| TargetPair { x0, x1 })
        })
    }
}

/// κ₁..κ₅ for one target input. κ₁ is held only as its logarithm since it
/// grows like `exp(C n e^-ε₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaSet {
    pub ln_kappa1: f64,
    pub kappa2: f64,
    /// `ln κ₂`, computed from `κ₂ - 1` so it keeps full relative precision
    /// when κ₂ is close to 1.
    pub ln_kappa2: f64,
    pub kappa3: f64,
    /// `+inf` when `2 sinh(ε₀) / e^(ε₀/2) >= 1`.
    pub kappa4: f64,
    pub kappa5: f64,
    pub target: usize,
}

impl KappaSet {
    pub fn kappa4_is_finite(&self) -> bool {
        self.kappa4.is_finite()
    }
}

pub fn ln_kappa1(epsilon0: f64, n: u64) -> f64 {
    2.0 * ln_two_sinh(epsilon0) + BLANKET_C * n as f64 * (-epsilon0).exp() - 4f64.ln()
}

/// `κ₂ - 1 = (e^ε₀ - 1) / (n + (e^ε₀ - 1) π(x) (n - 1))`.
pub fn kappa2_excess(epsilon0: f64, n: u64, pi_x: f64) -> f64 {
    let growth = epsilon0.exp_m1();
    let n = n as f64;
    growth / (n + growth * pi_x * (n - 1.0))
}

pub fn kappa2(epsilon0: f64, n: u64, pi_x: f64) -> f64 {
    1.0 + kappa2_excess(epsilon0, n, pi_x)
}

pub fn kappa3(epsilon0: f64, n: u64, k: usize, pi_x: f64) -> f64 {
    let growth = epsilon0.exp_m1();
    let n = n as f64;
    (n + growth * (n * pi_x + 1.0 - pi_x)) / (epsilon0.exp() + k as f64 - 1.0)
}

/// Argument of the artanh in κ₄: `2 sinh(ε₀) / e^(ε₀/2)`.
pub fn kappa4_argument(epsilon0: f64) -> f64 {
    (0.5 * epsilon0).exp() - (-1.5 * epsilon0).exp()
}

/// `2 artanh(2 sinh(ε₀) / e^(ε₀/2))`, or `+inf` outside the artanh domain.
pub fn kappa4(epsilon0: f64) -> f64 {
    let arg = kappa4_argument(epsilon0);
    if arg < 1.0 {
        2.0 * arg.atanh()
    } else {
        f64::INFINITY
    }
}

pub fn kappa5(epsilon0: f64, n: u64) -> f64 {
    epsilon0.sinh().powi(2) / n as f64
}

pub fn compute_kappas(params: &ShuffleParams, target: usize) -> Result<KappaSet> {
    params.validate()?;
    params.check_element(target)?;
    let ShuffleParams { epsilon0, n, k, .. } = *params;
    let pi_x = params.pi[target];
    let excess = kappa2_excess(epsilon0, n, pi_x);
    Ok(KappaSet {
        ln_kappa1: ln_kappa1(epsilon0, n),
        kappa2: 1.0 + excess,
        ln_kappa2: excess.ln_1p(),
        kappa3: kappa3(epsilon0, n, k, pi_x),
        kappa4: kappa4(epsilon0),
        kappa5: kappa5(epsilon0, n),
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn blanket_constant() {
        assert!((BLANKET_C - (1.0 - (-2f64).exp())).abs() < 1e-16);
        assert!((BLANKET_C - 0.864_664_716_7).abs() < 1e-9);
    }

    #[test]
    fn validation_examples() {
        assert!(ShuffleParams::new(0.5, 100, 2, vec![0.5, 0.5]).is_ok());
        assert_eq!(
            ShuffleParams::new(0.0, 100, 2, vec![0.5, 0.5]),
            Err(Error::NonPositiveEpsilon0(0.0))
        );
        assert!(matches!(
            ShuffleParams::new(0.5, 100, 2, vec![0.7, 0.2]),
            Err(Error::BadDistribution(_))
        ));
        assert_eq!(
            ShuffleParams::new(0.5, 0, 2, vec![0.5, 0.5]),
            Err(Error::BadSize(0))
        );
        assert_eq!(ShuffleParams::uniform(0.5, 10, 1), Err(Error::BadAlphabet(1)));
        assert!(matches!(
            ShuffleParams::new(0.5, 10, 2, vec![1.5, -0.5]),
            Err(Error::BadDistribution(_))
        ));
        assert!(matches!(
            ShuffleParams::new(0.5, 10, 3, vec![0.5, 0.5]),
            Err(Error::BadDistribution(_))
        ));
        assert!(ShuffleParams::new(f64::NAN, 10, 2, vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn target_pair_invariants() {
        assert!(TargetPair::new(0, 1, 2).is_ok());
        assert_eq!(TargetPair::new(1, 1, 2), Err(Error::DegeneratePair(1)));
        assert!(TargetPair::new(0, 2, 2).is_err());
        let pairs: Vec<_> = TargetPair::all_ordered(3).collect();
        assert_eq!(pairs.len(), 6);
        assert_eq!(pairs[0], TargetPair { x0: 0, x1: 1 });
        assert_eq!(pairs[5], TargetPair { x0: 2, x1: 1 });
    }

    // Reference values from a 60-digit evaluation of the κ definitions.
    #[test]
    fn kappas_at_half_hundred() {
        let params = ShuffleParams::uniform(0.5, 100, 2).unwrap();
        let ks = compute_kappas(&params, 0).unwrap();
        assert!(rel(ks.ln_kappa1, 51.140_921_456_979_408) < 1e-13);
        assert!(rel(ks.kappa2, 1.004_910_399_733_42) < 1e-14);
        assert!(rel(ks.kappa3, 50.122_459_331_201_86) < 1e-14);
        assert!(rel(ks.kappa4, 2.263_743_331_957_316) < 1e-13);
        assert!(rel(ks.kappa5, 0.002_715_403_174_076_219) < 1e-13);
        assert!(rel(ks.ln_kappa2, ks.kappa2.ln()) < 1e-12);
        assert_eq!(ks.target, 0);
    }

    #[test]
    fn kappa4_sentinel_above_boundary() {
        let params = ShuffleParams::uniform(0.7, 10, 2).unwrap();
        let ks = compute_kappas(&params, 0).unwrap();
        assert!(ks.kappa4.is_infinite() && ks.kappa4 > 0.0);
        assert!(!ks.kappa4_is_finite());
        assert!((kappa4_argument(0.7) - 1.069_129_799_482_101_9).abs() < 1e-12);
    }

    #[test]
    fn kappa4_at_tenth() {
        assert!(rel(kappa4(0.1), 0.385_842_888_139_768_6) < 1e-13);
    }

    #[test]
    fn small_epsilon0_limits() {
        let eps0 = 1e-12;
        for &(n, k) in &[(1u64, 2usize), (50, 3), (1000, 7)] {
            let params = ShuffleParams::uniform(eps0, n, k).unwrap();
            let ks = compute_kappas(&params, 0).unwrap();
            assert!((ks.kappa2 - 1.0).abs() < 1e-10);
            assert!(ks.kappa4.abs() < 1e-10);
            assert!(ks.kappa5.abs() < 1e-20);
            assert!(rel(ks.kappa3, n as f64 / k as f64) < 1e-9);
        }
    }

    #[test]
    fn kappa2_single_user_is_exp_epsilon0() {
        for &eps0 in &[0.01, 0.5, 1.3, 3.0] {
            assert!(rel(kappa2(eps0, 1, 0.3), eps0.exp()) < 1e-12);
        }
    }

    #[test]
    fn kappa2_decreasing_in_n() {
        for &eps0 in &[0.05, 0.5, 2.0] {
            for &pi_x in &[0.0, 0.25, 1.0] {
                let mut prev = f64::INFINITY;
                for n in [1u64, 2, 3, 5, 10, 100, 1000, 10_000, 1_000_000] {
                    let v = kappa2(eps0, n, pi_x);
                    assert!(v < prev, "eps0={eps0} pi={pi_x} n={n}");
                    assert!(v > 1.0 && v <= eps0.exp() * (1.0 + 1e-15));
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn kappa4_only_depends_on_epsilon0() {
        let a = compute_kappas(&ShuffleParams::uniform(0.3, 10, 2).unwrap(), 0).unwrap();
        let b = compute_kappas(
            &ShuffleParams::new(0.3, 5000, 4, vec![0.1, 0.2, 0.3, 0.4]).unwrap(),
            3,
        )
        .unwrap();
        assert_eq!(a.kappa4, b.kappa4);
    }

    #[test]
    fn kappa4_finiteness_boundary() {
        // u^4 - u^3 - 1 = 0 with u = e^(ε₀/2), solved independently by bisection.
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid.powi(4) - mid.powi(3) - 1.0 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let boundary = 2.0 * lo.ln();
        assert!(boundary > 0.644 && boundary < 0.645);
        assert!(kappa4(boundary - 1e-9).is_finite());
        assert!(kappa4(boundary + 1e-9).is_infinite());
        assert!(kappa4(0.644).is_finite());
        assert!(kappa4(0.645).is_infinite());
    }

    #[test]
    fn compute_kappas_rejects_bad_target() {
        let params = ShuffleParams::uniform(0.5, 10, 2).unwrap();
        assert_eq!(
            compute_kappas(&params, 2),
            Err(Error::BadElement { index: 2, k: 2 })
        );
    }

    #[test]
    fn large_n_stays_in_log_space() {
        let params = ShuffleParams::uniform(0.5, 1000, 2).unwrap();
        let ks = compute_kappas(&params, 0).unwrap();
        assert!(ks.ln_kappa1 > 500.0 && ks.ln_kappa1.is_finite());
    }
}
