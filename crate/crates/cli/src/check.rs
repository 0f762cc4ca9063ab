//! The self-check suite behind `shuffle-blanket check`.
//!
//! Each criterion recomputes its quantity through an independent route
//! (multiple-precision reference, brute-force oracle, bisection, direct
//! inequality) and reports measured against expected values.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use shuffle_blanket_core::bounds::{self, ln_delta_branch, select_case, CaseTag};
use shuffle_blanket_core::numeric::bisect;
use shuffle_blanket_core::oracle::{
    empirical_dist, histogram_dist, sample_shuffled, tight_adp, tight_dp_constant_others,
    total_variation, Dataset, Histogram, KrrMatrix,
};
use shuffle_blanket_core::params::{compute_kappas, kappa4, ShuffleParams, TargetPair};
use shuffle_blanket_core::tightness::{
    h_root_in, poly_root_in, CriticalEq, CriticalPoly, DEFAULT_SCAN_POINTS,
};
use shuffle_blanket_reference as reference;

use crate::commands;
use crate::config::RawConfig;
use crate::config::RunConfig;

/// Seed for every randomised criterion.
pub const CHECK_SEED: u64 = 0x5eed_b1a4_2021;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub measured: String,
    pub expected: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}. {}: measured {}; expected {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.measured,
            self.expected,
            self.seconds
        )
    }
}

fn timed<F: FnOnce() -> (bool, String, String)>(
    id: u8,
    title: &'static str,
    budget_seconds: Option<f64>,
    body: F,
) -> CriterionReport {
    let start = Instant::now();
    let (mut passed, mut measured, mut expected) = body();
    let seconds = start.elapsed().as_secs_f64();
    if let Some(budget) = budget_seconds {
        passed &= seconds < budget;
        measured.push_str(&format!(", runtime {seconds:.2}s"));
        expected.push_str(&format!(", runtime < {budget}s"));
    }
    CriterionReport {
        id,
        title,
        passed,
        measured,
        expected,
        seconds,
    }
}

fn rel_err(value: f64, reference: f64) -> f64 {
    if value == reference {
        0.0
    } else {
        (value - reference).abs() / reference.abs()
    }
}

/// κ₁..κ₅ against the 256-bit reference on 100 random instances.
pub fn kappa_oracle_agreement() -> CriterionReport {
    timed(1, "kappa-oracle agreement", Some(10.0), || {
        let mut rng = ChaCha20Rng::seed_from_u64(CHECK_SEED);
        let mut worst: f64 = 0.0;
        let mut sentinel_mismatch = 0;
        for _ in 0..100 {
            let eps0 = loop {
                let v: f64 = rng.gen_range(0.0..2.0);
                if v > 0.0 {
                    break v;
                }
            };
            let n = rng.gen_range(1..=10_000u64);
            let k = rng.gen_range(2..=10usize);
            let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
            let total: f64 = weights.iter().sum();
            let mut pi: Vec<f64> = weights.iter().map(|w| w / total).collect();
            let head: f64 = pi[..k - 1].iter().sum();
            pi[k - 1] = 1.0 - head;
            let target = rng.gen_range(0..k);
            let params = ShuffleParams::new(eps0, n, k, pi.clone()).expect("valid draw");
            let ks = compute_kappas(&params, target).expect("valid draw");
            let r = reference::kappas(eps0, n, k, pi[target]);
            for (a, b) in [
                (ks.ln_kappa1, r.ln_kappa1),
                (ks.kappa2, r.kappa2),
                (ks.kappa3, r.kappa3),
                (ks.kappa5, r.kappa5),
            ] {
                worst = worst.max(rel_err(a, b));
            }
            match r.kappa4 {
                Some(k4) if ks.kappa4.is_finite() => worst = worst.max(rel_err(ks.kappa4, k4)),
                None if ks.kappa4.is_infinite() => {}
                _ => sentinel_mismatch += 1,
            }
        }
        (
            worst <= 1e-10 && sentinel_mismatch == 0,
            format!("max rel err {worst:.3e}, kappa4 sentinel mismatches {sentinel_mismatch}"),
            "max rel err <= 1e-10, 0 mismatches".into(),
        )
    })
}

/// Case 1 exactly when ε ≥ κ₄, on random (ε₀, ε).
pub fn case_boundary_equivalence() -> CriterionReport {
    timed(2, "case-boundary equivalence", Some(5.0), || {
        let mut rng = ChaCha20Rng::seed_from_u64(CHECK_SEED + 2);
        let mut disagreements = 0;
        let mut case1 = 0;
        for _ in 0..10_000 {
            let eps0 = rng.gen_range(1e-9..0.64);
            let k4 = kappa4(eps0);
            let eps = rng.gen_range(1e-9..3.0 * k4);
            let band = 1e-12 * k4.max(1.0);
            if (eps - k4).abs() <= band {
                continue;
            }
            let tag = select_case(eps0, eps).expect("positive inputs");
            if tag == CaseTag::Case1 {
                case1 += 1;
            }
            if (tag == CaseTag::Case1) != (eps >= k4) {
                disagreements += 1;
            }
        }
        (
            disagreements == 0,
            format!("{disagreements} disagreements ({case1} Case1 draws of 10000)"),
            "0 disagreements".into(),
        )
    })
}

/// The two branches of the bound meet at ε = κ₄.
pub fn delta_continuity() -> CriterionReport {
    timed(3, "delta continuity at kappa4", None, || {
        let mut rng = ChaCha20Rng::seed_from_u64(CHECK_SEED + 3);
        let mut worst: f64 = 0.0;
        for i in 0..100 {
            let eps0 = rng.gen_range(1e-6..0.64);
            let n = [10u64, 100, 1000][i % 3];
            let k4 = kappa4(eps0);
            let one = ln_delta_branch(eps0, n, k4, CaseTag::Case1);
            let two = ln_delta_branch(eps0, n, k4, CaseTag::Case2);
            worst = worst.max(rel_err(one, two));
        }
        (
            worst <= 1e-10,
            format!("max rel gap {worst:.3e}"),
            "<= 1e-10".into(),
        )
    })
}

/// Reference instances of the bound.
pub fn spot_values() -> CriterionReport {
    timed(4, "delta spot values", None, || {
        let cases = [
            (0.1, 10u64, 1.0 / 2.0, CaseTag::Case1, 4.330e-6),
            (0.5, 100u64, 1.0, CaseTag::Case2, 9.03e-10),
        ];
        let mut ok = true;
        let mut measured = Vec::new();
        for (eps0, n, eps, tag, expected) in cases {
            let params = ShuffleParams::uniform(eps0, n, 2).expect("valid");
            let b = bounds::delta_bound(&params, eps).expect("valid");
            let off = rel_err(b.delta_clamped, expected);
            ok &= b.case == tag && off <= 0.005;
            measured.push(format!("{} delta={:.4e} ({:.3}% off)", b.case, b.delta_clamped, off * 100.0));
        }
        (
            ok,
            measured.join(", "),
            "Case1 4.330e-6 and Case2 9.03e-10, each within 0.5%".into(),
        )
    })
}

/// Exact oracle on hand-checkable instances.
pub fn oracle_exactness() -> CriterionReport {
    timed(5, "oracle exactness", None, || {
        let ln3 = 3f64.ln();
        let params = ShuffleParams::uniform(ln3, 1, 2).expect("valid");
        let pair = TargetPair { x0: 0, x1: 1 };
        let at_zero = tight_adp(&params, &[], pair, 0.0).expect("feasible");
        let at_ln3 = tight_adp(&params, &[], pair, ln3).expect("feasible");
        let krr = KrrMatrix::new(ln3, 2).expect("valid");
        let dist = histogram_dist(&Dataset::new(vec![0, 0], 2).expect("valid"), &krr)
            .expect("feasible");
        let probs = [
            dist.prob(&Histogram(vec![2, 0])),
            dist.prob(&Histogram(vec![1, 1])),
            dist.prob(&Histogram(vec![0, 2])),
        ];
        let expected = [9.0 / 16.0, 6.0 / 16.0, 1.0 / 16.0];
        let dist_err = probs
            .iter()
            .zip(expected)
            .map(|(p, e)| (p - e).abs())
            .fold(0.0, f64::max);
        let ok = (at_zero - 0.5).abs() <= 1e-12 && at_ln3.abs() <= 1e-12 && dist_err <= 1e-12;
        (
            ok,
            format!("adp(0)={at_zero:.15}, adp(ln3)={at_ln3:.3e}, n=2 max err {dist_err:.3e}"),
            "0.5, 0, (9/16, 6/16, 1/16) each to 1e-12".into(),
        )
    })
}

/// Exact tight δ never exceeds the blanket bound on the desk-scale grid.
pub fn bound_soundness() -> CriterionReport {
    timed(6, "bound soundness grid", Some(60.0), || {
        let mut violations = Vec::new();
        let mut cells = 0;
        let mut worst_ratio: f64 = 0.0;
        for eps0 in [0.1, 0.3, 0.5] {
            for n in [5u64, 10, 20] {
                for k in [2usize, 3] {
                    let params = ShuffleParams::uniform(eps0, n, k).expect("valid");
                    for eps in [0.2, 0.5, 1.0] {
                        cells += 1;
                        let exact = tight_dp_constant_others(&params, eps).expect("feasible");
                        let bound = bounds::delta_bound(&params, eps).expect("valid");
                        worst_ratio = worst_ratio.max(exact / bound.ln_delta.exp());
                        if exact > bound.delta_clamped {
                            violations.push(format!(
                                "(eps0={eps0}, n={n}, k={k}, eps={eps}: {exact:.3e} > {:.3e})",
                                bound.delta_clamped
                            ));
                        }
                    }
                }
            }
        }
        (
            violations.is_empty(),
            format!(
                "{} violations in {cells} cells, max exact/bound {worst_ratio:.3e}{}",
                violations.len(),
                if violations.is_empty() {
                    String::new()
                } else {
                    format!(" {}", violations.join(" "))
                }
            ),
            "0 violations".into(),
        )
    })
}

/// Seeded sampler against the exact histogram law.
pub fn monte_carlo_consistency() -> CriterionReport {
    timed(7, "Monte Carlo consistency", None, || {
        let krr = KrrMatrix::new(0.5, 2).expect("valid");
        let ds = Dataset::new(vec![0; 10], 2).expect("valid");
        let exact = histogram_dist(&ds, &krr).expect("feasible");
        let first = sample_shuffled(&ds, &krr, 1_000_000, CHECK_SEED).expect("m >= 1");
        let second = sample_shuffled(&ds, &krr, 1_000_000, CHECK_SEED).expect("m >= 1");
        let tv = total_variation(&empirical_dist(&first, 10, 2), &exact).expect("same space");
        let identical = first == second;
        (
            tv <= 0.01 && identical,
            format!("TV {tv:.3e}, rerun identical: {identical}"),
            "TV <= 0.01, identical rerun".into(),
        )
    })
}

/// Roots by scanning and bisecting the factored form of the normalised
/// polynomial, independent of the closed-form coefficients.
fn bisection_roots(q: f64, kappa2: f64, lo: f64, hi: f64) -> Vec<f64> {
    let f = |x: f64| (x + 1.0) * (x + 1.0) - q * (kappa2 - x) * (x - 1.0);
    let steps = 4000;
    let h = (hi - lo) / steps as f64;
    let mut roots = Vec::new();
    let mut prev = (lo, f(lo));
    for i in 1..=steps {
        let x = if i == steps { hi } else { lo + h * i as f64 };
        let v = f(x);
        if (v < 0.0) != (prev.1 < 0.0) {
            roots.push(bisect(f, prev.0, x));
        }
        prev = (x, v);
    }
    roots
}

/// Closed-form polynomial roots against bisection; residuals of `H` roots.
pub fn root_finder_cross_check() -> CriterionReport {
    timed(8, "root-finder cross-check", None, || {
        let mut rng = ChaCha20Rng::seed_from_u64(CHECK_SEED + 8);
        let mut worst_gap: f64 = 0.0;
        let mut count_mismatch = 0;
        let mut checked = 0;
        while checked < 1000 {
            let a: f64 = rng.gen_range(1.05..2.5);
            let b: f64 = rng.gen_range(1.05..2.5);
            let (r1, r2) = (a.min(b), a.max(b));
            if r2 - r1 < 0.05 {
                continue;
            }
            // (1 + q)(x - r1)(x - r2) matches (x+1)² - q(κ₂-x)(x-1) when
            // (1 + q) = 4 / ((1 - r1)(1 - r2)) and κ₂ = ((1 + q) r1 r2 - 1) / q.
            let q = 4.0 / ((1.0 - r1) * (1.0 - r2)) - 1.0;
            let kappa2 = ((1.0 + q) * r1 * r2 - 1.0) / q;
            if kappa2 <= r2 + 0.02 {
                continue;
            }
            let lo = rng.gen_range(1.0..r1 - 0.01);
            let hi = if checked % 2 == 0 {
                rng.gen_range(r2 + 0.01..kappa2)
            } else {
                rng.gen_range(r1 + 0.01..r2 - 0.01)
            };
            let closed = poly_root_in(&CriticalPoly::new(q, kappa2), lo, hi);
            let scanned = bisection_roots(q, kappa2, lo, hi);
            if closed.len() != scanned.len() || closed.is_empty() {
                count_mismatch += 1;
            } else {
                for (c, s) in closed.iter().zip(&scanned) {
                    worst_gap = worst_gap.max((c - s).abs());
                }
            }
            checked += 1;
        }

        let mut worst_residual: f64 = 0.0;
        let mut h_roots = 0;
        for _ in 0..200 {
            let eq = CriticalEq {
                kappa5: 10f64.powf(rng.gen_range(-4.0..-2.0)),
                kappa2: rng.gen_range(1.5..3.0),
                kappa3: rng.gen_range(10.0..100.0),
            };
            let mu = (eq.kappa2 - 1.0) / (eq.kappa2 + 1.0);
            for r in h_root_in(&eq, mu, DEFAULT_SCAN_POINTS) {
                h_roots += 1;
                worst_residual = worst_residual.max(eq.eval(r).abs() / eq.eval(0.0));
            }
        }
        (
            count_mismatch == 0 && worst_gap <= 1e-9 && h_roots > 0 && worst_residual <= 1e-9,
            format!(
                "{count_mismatch} root-count mismatches, max gap {worst_gap:.3e}; \
                 {h_roots} H roots, max |H(r)|/H(0) {worst_residual:.3e}"
            ),
            "0 mismatches, gap <= 1e-9, |H(r)| <= 1e-9 H(0)".into(),
        )
    })
}

/// The rendered `regions` report for the reference instance.
pub fn region_logic() -> CriterionReport {
    timed(9, "region logic", None, || {
        let mut raw = RawConfig::default();
        for (k, v) in [
            ("eps0", "0.5"),
            ("n", "100"),
            ("k", "2"),
            ("pi", "uniform"),
            ("eps", "1.0,3.0"),
            ("format", "csv"),
        ] {
            raw.set(k, v);
        }
        let report = RunConfig::from_raw(&raw)
            .and_then(|c| commands::regions(&c))
            .map(|o| o.body)
            .unwrap_or_default();
        let value = |key: &str| {
            report
                .lines()
                .find_map(|l| l.strip_prefix(&format!("{key},")))
                .unwrap_or("<missing>")
                .to_string()
        };
        let class_key = |eps: f64| {
            format!("classification.eps={}.pair=0,1", crate::table::num(eps))
        };
        // csv quotes the key because it contains a comma.
        let class = |eps: f64| {
            report
                .lines()
                .find_map(|l| l.strip_prefix(&format!("\"{}\",", class_key(eps))))
                .unwrap_or("<missing>")
                .to_string()
        };
        let got = [
            value("S1"),
            value("thm3a"),
            value("thm3b"),
            class(1.0),
            class(3.0),
        ];
        let want = ["empty", "false", "false", "Theorem2Asymptotic", "Theorem1Asymptotic"];
        (
            got.iter().zip(want).all(|(g, w)| g == w),
            format!(
                "S1={}, thm3a={}, thm3b={}, eps=1: {}, eps=3: {}",
                got[0], got[1], got[2], got[3], got[4]
            ),
            format!(
                "S1={}, thm3a={}, thm3b={}, eps=1: {}, eps=3: {}",
                want[0], want[1], want[2], want[3], want[4]
            ),
        )
    })
}

pub fn all_criteria() -> Vec<fn() -> CriterionReport> {
    vec![
        kappa_oracle_agreement,
        case_boundary_equivalence,
        delta_continuity,
        spot_values,
        oracle_exactness,
        bound_soundness,
        monte_carlo_consistency,
        root_finder_cross_check,
        region_logic,
    ]
}
