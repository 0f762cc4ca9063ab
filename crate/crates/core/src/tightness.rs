//! Critical polynomial, critical equation and the tightness regions S₁, S₂.
//!
//! For an input `x` with constants κ₁..κ₅ the critical polynomial is
//! `P(x) = κ₁κ₂(x+1)² - κ₃(κ₂-x)(x-1)` and the critical equation is
//! `H(x) = 2κ₅κ₂ exp(-C x² / (4κ₅)) + x²κ₃(κ₂+1) - xκ₃(κ₂-1)`.
//!
//! Per input, `S₁(x) = [κ₄, ln κ₂(x))` and `S₂(x) = (0, min{κ₄, ln κ₂(x)})`;
//! the reported regions are their intersections over all inputs. Only root
//! existence is checked: roots of `P` and `H` are never mapped back to ε.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::error::Result;
use crate::numeric::bisect;
use crate::params::{compute_kappas, KappaSet, ShuffleParams, TargetPair, BLANKET_C};

/// Default number of grid points used to bracket roots of `H`.
pub const DEFAULT_SCAN_POINTS: usize = 10_000;
/// Absolute tolerance when deciding whether a polynomial root sits inside
/// the half-open search interval.
pub const ROOT_ENDPOINT_TOLERANCE: f64 = 1e-12;

/// `P(x) / (κ₁κ₂) = (x+1)² - q (κ₂-x)(x-1)` with `q = κ₃ / (κ₁κ₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoly {
    pub q: f64,
    pub kappa2: f64,
}

impl CriticalPoly {
    pub fn new(q: f64, kappa2: f64) -> Self {
        CriticalPoly { q, kappa2 }
    }

    /// Normalises by κ₁κ₂ in log space; `q` underflows to 0 when κ₁ dominates.
    pub fn from_kappas(kappas: &KappaSet) -> Self {
        let ln_q = kappas.kappa3.ln() - kappas.ln_kappa1 - kappas.ln_kappa2;
        CriticalPoly {
            q: ln_q.exp(),
            kappa2: kappas.kappa2,
        }
    }

    pub fn a2(&self) -> f64 {
        1.0 + self.q
    }

    pub fn a1(&self) -> f64 {
        2.0 - self.q * (self.kappa2 + 1.0)
    }

    pub fn a0(&self) -> f64 {
        1.0 + self.q * self.kappa2
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.a2() * x + self.a1()) * x + self.a0()
    }

    /// Real roots of the normalised quadratic, ascending.
    pub fn roots(&self) -> Vec<f64> {
        let (a, b, c) = (self.a2(), self.a1(), self.a0());
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Vec::new();
        }
        if disc == 0.0 {
            return vec![-b / (2.0 * a)];
        }
        let big = -(b + disc.sqrt().copysign(b)) / (2.0 * a);
        let small = c / (a * big);
        let mut roots = vec![big, small];
        roots.sort_by(f64::total_cmp);
        roots
    }
}

/// Sign of the unnormalised `P(x)` computed from logarithms of its two
/// terms, so κ₁ never has to be materialised.
pub fn critical_poly_sign(kappas: &KappaSet, x: f64) -> Ordering {
    let ln_p1 = kappas.ln_kappa1 + kappas.ln_kappa2 + 2.0 * (x + 1.0).abs().ln();
    let prod = (kappas.kappa2 - x) * (x - 1.0);
    if prod <= 0.0 {
        // P = P₁ + |P₂| with both terms non-negative.
        return if ln_p1 == f64::NEG_INFINITY && prod == 0.0 {
            Ordering::Equal
        } else {
            Ordering::Greater
        };
    }
    let ln_p2 = kappas.kappa3.ln() + (kappas.kappa2 - x).abs().ln() + (x - 1.0).abs().ln();
    ln_p1.partial_cmp(&ln_p2).unwrap_or(Ordering::Equal)
}

/// Roots of the critical polynomial in `[lo, hi)`, ascending. An empty or
/// inverted interval yields no roots.
pub fn poly_root_in(poly: &CriticalPoly, lo: f64, hi: f64) -> Vec<f64> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Vec::new();
    }
    poly.roots()
        .into_iter()
        .filter(|&r| r >= lo - ROOT_ENDPOINT_TOLERANCE && r < hi - ROOT_ENDPOINT_TOLERANCE)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalEq {
    pub kappa5: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

impl CriticalEq {
    pub fn from_kappas(kappas: &KappaSet) -> Self {
        CriticalEq {
            kappa5: kappas.kappa5,
            kappa2: kappas.kappa2,
            kappa3: kappas.kappa3,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        // κ₅ = 0 is the ε₀ → 0 limit, where the Gaussian term vanishes.
        let blanket = if self.kappa5 > 0.0 {
            2.0 * self.kappa5 * self.kappa2 * (-BLANKET_C * x * x / (4.0 * self.kappa5)).exp()
        } else {
            0.0
        };
        blanket + x * x * self.kappa3 * (self.kappa2 + 1.0) - x * self.kappa3 * (self.kappa2 - 1.0)
    }
}

/// Roots of `H` on the open interval `(0, mu)`.
///
/// Sign changes are bracketed on `scan_points` interior grid points and each
/// bracket is bisected to machine resolution. Roots where `H` touches zero
/// without changing sign between grid points are not detected.
pub fn h_root_in(eq: &CriticalEq, mu: f64, scan_points: usize) -> Vec<f64> {
    if mu.is_nan() || mu <= 0.0 || scan_points == 0 {
        return Vec::new();
    }
    let f = |x: f64| eq.eval(x);
    let step = mu / (scan_points + 1) as f64;
    let mut roots = Vec::new();
    let mut prev_x = step;
    let mut prev_h = f(prev_x);
    if prev_h == 0.0 {
        roots.push(prev_x);
    }
    for j in 2..=scan_points {
        let x = step * j as f64;
        let h = f(x);
        if h == 0.0 {
            roots.push(x);
        } else if prev_h != 0.0 && (h < 0.0) != (prev_h < 0.0) {
            roots.push(bisect(f, prev_x, x));
        }
        prev_x = x;
        prev_h = h;
    }
    roots
}

/// One interval of the real line with explicit endpoint closure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl Interval {
    /// `[lo, hi)`
    pub fn closed_open(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            lo_closed: true,
            hi,
            hi_closed: false,
        }
    }

    /// `(lo, hi)`
    pub fn open(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            lo_closed: false,
            hi,
            hi_closed: false,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi || (self.lo == self.hi && self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.partial_cmp(&other.lo) {
            Some(Ordering::Greater) => (self.lo, self.lo_closed),
            Some(Ordering::Less) => (other.lo, other.lo_closed),
            _ => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Less) => (self.hi, self.hi_closed),
            Some(Ordering::Greater) => (other.hi, other.hi_closed),
            _ => (self.hi, self.hi_closed && other.hi_closed),
        };
        Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    S1,
    S2,
    S1PerInput,
    S2PerInput,
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionLabel::S1 => "S1",
            RegionLabel::S2 => "S2",
            RegionLabel::S1PerInput => "S1_per_input",
            RegionLabel::S2PerInput => "S2_per_input",
        })
    }
}

/// A sorted union of disjoint non-empty intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub intervals: Vec<Interval>,
    pub label: RegionLabel,
}

impl Region {
    pub fn empty(label: RegionLabel) -> Self {
        Region {
            intervals: Vec::new(),
            label,
        }
    }

    pub fn from_interval(interval: Interval, label: RegionLabel) -> Self {
        let intervals = if interval.is_empty() {
            Vec::new()
        } else {
            vec![interval]
        };
        Region { intervals, label }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    pub fn intersect(&self, other: &Region, label: RegionLabel) -> Region {
        let mut intervals: Vec<Interval> = self
            .intervals
            .iter()
            .flat_map(|a| other.intervals.iter().map(move |b| a.intersect(b)))
            .filter(|iv| !iv.is_empty())
            .collect();
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        Region { intervals, label }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("empty");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" U ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// Per-input tightness region `S₁(x) = [κ₄, ln κ₂(x))`.
pub fn s1_for(kappas: &KappaSet) -> Region {
    Region::from_interval(
        Interval::closed_open(kappas.kappa4, kappas.ln_kappa2),
        RegionLabel::S1PerInput,
    )
}

/// Per-input tightness region `S₂(x) = (0, min{κ₄, ln κ₂(x)})`.
pub fn s2_for(kappas: &KappaSet) -> Region {
    Region::from_interval(
        Interval::open(0.0, kappas.kappa4.min(kappas.ln_kappa2)),
        RegionLabel::S2PerInput,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// ε > max{κ₄, ln κ₂}.
    Theorem1Asymptotic,
    /// ln κ₂ < ε < κ₄.
    Theorem2Asymptotic,
    Unclassified,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Theorem1Asymptotic => "Theorem1Asymptotic",
            Classification::Theorem2Asymptotic => "Theorem2Asymptotic",
            Classification::Unclassified => "Unclassified",
        })
    }
}

/// Asymptotic-tightness classification of ε for the pair whose first
/// element produced `kappas`.
pub fn classify(kappas: &KappaSet, epsilon: f64) -> Classification {
    if epsilon > kappas.kappa4.max(kappas.ln_kappa2) {
        Classification::Theorem1Asymptotic
    } else if kappas.ln_kappa2 < epsilon && epsilon < kappas.kappa4 {
        Classification::Theorem2Asymptotic
    } else {
        Classification::Unclassified
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputReport {
    pub kappas: KappaSet,
    pub s1: Region,
    pub s2: Region,
    /// Roots of the critical polynomial in `[e^κ₄, κ₂(x))`.
    pub poly_roots: Vec<f64>,
    /// Roots of the critical equation in `(0, μ)`.
    pub h_roots: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictOptions {
    pub scan_points: usize,
    /// Pair whose `x0` selects κ₂ for the classification of ε.
    pub pair: TargetPair,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            scan_points: DEFAULT_SCAN_POINTS,
            pair: TargetPair { x0: 0, x1: 1 },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremVerdict {
    pub classification: Classification,
    pub thm3a_holds: bool,
    pub thm3b_holds: bool,
    /// `∩ S₁(x)` when the polynomial hypothesis holds, empty otherwise.
    pub s1: Region,
    /// `∩ S₂(x)` when the critical-equation hypothesis holds, empty otherwise.
    pub s2: Region,
    /// `∩ S₁(x)` regardless of the hypothesis.
    pub s1_candidate: Region,
    /// `∩ S₂(x)` regardless of the hypothesis.
    pub s2_candidate: Region,
    /// `min over x of min{tanh(κ₄/2), tanh(ln κ₂(x)/2)}`.
    pub mu: f64,
    pub scan_points: usize,
    /// Indexed by input element.
    pub per_input: Vec<InputReport>,
}

/// Evaluates both tightness hypotheses over every input element and, when
/// `epsilon` is given, classifies it for `options.pair`.
///
/// Hypotheses are checked conservatively: the polynomial root and the
/// critical-equation root must exist for every input element, and μ is the
/// minimum over all inputs.
pub fn regions_and_verdict(
    params: &ShuffleParams,
    epsilon: Option<f64>,
    options: &VerdictOptions,
) -> Result<TheoremVerdict> {
    params.validate()?;
    params.check_element(options.pair.x0)?;
    params.check_element(options.pair.x1)?;

    let kappas = (0..params.k)
        .map(|x| compute_kappas(params, x))
        .collect::<Result<Vec<_>>>()?;

    let mu = kappas
        .iter()
        .map(|ks| (0.5 * ks.kappa4).tanh().min((0.5 * ks.ln_kappa2).tanh()))
        .fold(f64::INFINITY, f64::min);

    let per_input: Vec<InputReport> = kappas
        .into_par_iter()
        .map(|ks| {
            let poly = CriticalPoly::from_kappas(&ks);
            let poly_roots = poly_root_in(&poly, ks.kappa4.exp(), ks.kappa2);
            let h_roots = h_root_in(&CriticalEq::from_kappas(&ks), mu, options.scan_points);
            InputReport {
                s1: s1_for(&ks),
                s2: s2_for(&ks),
                poly_roots,
                h_roots,
                kappas: ks,
            }
        })
        .collect();

    let intersect_all = |pick: fn(&InputReport) -> &Region, label| {
        per_input
            .iter()
            .skip(1)
            .fold(pick(&per_input[0]).clone(), |acc, r| acc.intersect(pick(r), label))
            .relabel(label)
    };
    let s1_candidate = intersect_all(|r| &r.s1, RegionLabel::S1);
    let s2_candidate = intersect_all(|r| &r.s2, RegionLabel::S2);

    let thm3a_holds = per_input
        .iter()
        .all(|r| r.kappas.kappa4 < r.kappas.ln_kappa2 && !r.poly_roots.is_empty());
    let thm3b_holds = per_input.iter().all(|r| !r.h_roots.is_empty());

    let classification = match epsilon {
        Some(eps) => classify(&per_input[options.pair.x0].kappas, eps),
        None => Classification::Unclassified,
    };

    Ok(TheoremVerdict {
        classification,
        thm3a_holds,
        thm3b_holds,
        s1: if thm3a_holds {
            s1_candidate.clone()
        } else {
            Region::empty(RegionLabel::S1)
        },
        s2: if thm3b_holds {
            s2_candidate.clone()
        } else {
            Region::empty(RegionLabel::S2)
        },
        s1_candidate,
        s2_candidate,
        mu,
        scan_points: options.scan_points,
        per_input,
    })
}

impl Region {
    fn relabel(mut self, label: RegionLabel) -> Self {
        self.label = label;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_hundred() -> ShuffleParams {
        ShuffleParams::uniform(0.5, 100, 2).unwrap()
    }

    #[test]
    fn normalized_coefficients() {
        let p = CriticalPoly::new(4.0, 2.0);
        assert_eq!((p.a2(), p.a1(), p.a0()), (5.0, -10.0, 9.0));
        assert!(p.roots().is_empty());
        assert!(poly_root_in(&p, -100.0, 100.0).is_empty());
    }

    #[test]
    fn perfect_square_root_outside_interval() {
        let p = CriticalPoly::new(0.0, 1.5);
        assert_eq!(p.roots(), vec![-1.0]);
        assert!(poly_root_in(&p, 0.0, 10.0).is_empty());
        assert_eq!(poly_root_in(&p, -1.0, 0.0), vec![-1.0]);
    }

    #[test]
    fn inverted_interval_from_real_kappas() {
        let ks = compute_kappas(&half_hundred(), 0).unwrap();
        let lo = ks.kappa4.exp();
        assert!((lo - 9.619).abs() < 1e-3);
        assert!(lo > ks.kappa2);
        assert!(poly_root_in(&CriticalPoly::from_kappas(&ks), lo, ks.kappa2).is_empty());
    }

    #[test]
    fn roots_planted_between_one_and_kappa2() {
        // Roots 1.5 and 2.5: (1+q) = 4 / ((1-r1)(1-r2)) = 16/3.
        let (r1, r2) = (1.5, 2.5);
        let q = 4.0 / ((1.0 - r1) * (1.0 - r2)) - 1.0;
        let kappa2 = ((1.0 + q) * r1 * r2 - 1.0) / q;
        let p = CriticalPoly::new(q, kappa2);
        let roots = poly_root_in(&p, 1.0, kappa2);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - r1).abs() < 1e-12 && (roots[1] - r2).abs() < 1e-12);
        assert_eq!(poly_root_in(&p, 1.0, 2.0).len(), 1);
        // Half-open: the left endpoint is in, the right one is out.
        assert_eq!(poly_root_in(&p, 1.5, 2.0).len(), 1);
        assert_eq!(poly_root_in(&p, 1.0, 1.5).len(), 0);
    }

    #[test]
    fn log_sign_agrees_with_normalized_poly() {
        let ks = KappaSet {
            ln_kappa1: 0.0,
            kappa2: 3.0,
            ln_kappa2: 3f64.ln(),
            kappa3: 12.0,
            kappa4: 1.0,
            kappa5: 0.1,
            target: 0,
        };
        let poly = CriticalPoly::from_kappas(&ks);
        for i in -40..=80 {
            let x = i as f64 * 0.05 + 0.0123;
            let v = poly.eval(x);
            assert_eq!(critical_poly_sign(&ks, x), v.partial_cmp(&0.0).unwrap(), "x = {x}");
        }
    }

    #[test]
    fn critical_eq_values() {
        let ks = compute_kappas(&half_hundred(), 0).unwrap();
        let eq = CriticalEq::from_kappas(&ks);
        assert!((eq.eval(0.0) - 0.005_457_473_778_196_661).abs() < 1e-15);
        assert!((eq.eval(0.0024) - 0.005_443_109_133_410_826).abs() < 1e-15);
    }

    #[test]
    fn critical_eq_vanishing_blanket() {
        let eq = CriticalEq {
            kappa5: 0.0,
            kappa2: 1.0,
            kappa3: 7.0,
        };
        assert_eq!(eq.eval(0.0), 0.0);
        assert_eq!(eq.eval(0.5), 2.0 * 0.25 * 7.0);
        assert!(h_root_in(&eq, 1.0, 1000).is_empty());
    }

    #[test]
    fn h_roots_for_reference_instances() {
        let ks = compute_kappas(&half_hundred(), 0).unwrap();
        let eq = CriticalEq::from_kappas(&ks);
        let mu = (0.5 * ks.ln_kappa2).tanh();
        assert!((mu - 0.002_449_186_624_037_091).abs() < 1e-15);
        assert!(h_root_in(&eq, mu, DEFAULT_SCAN_POINTS).is_empty());

        let single = ShuffleParams::uniform(0.5, 1, 2).unwrap();
        let ks = compute_kappas(&single, 0).unwrap();
        let eq = CriticalEq::from_kappas(&ks);
        let mu = (0.5 * ks.kappa4).tanh().min((0.5 * ks.ln_kappa2).tanh());
        assert!((mu - 0.244_918_662_403_709_1).abs() < 1e-12);
        assert!((eq.eval(0.24) - 0.853_312_376_915_478_6).abs() < 1e-12);
        assert!(h_root_in(&eq, mu, DEFAULT_SCAN_POINTS).is_empty());

        assert!(h_root_in(&eq, 0.0, 100).is_empty());
        assert!(h_root_in(&eq, -1.0, 100).is_empty());
    }

    #[test]
    fn h_roots_found_and_refined() {
        let eq = CriticalEq {
            kappa5: 1e-3,
            kappa2: 2.0,
            kappa3: 50.0,
        };
        let roots = h_root_in(&eq, 0.5, DEFAULT_SCAN_POINTS);
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!(r > 0.0 && r < 0.5);
            assert!(eq.eval(r).abs() <= 1e-9 * eq.eval(0.0));
        }
    }

    #[test]
    fn interval_algebra() {
        let a = Interval::closed_open(1.0, 3.0);
        let b = Interval::open(0.0, 2.0);
        let c = a.intersect(&b);
        assert_eq!(c, Interval { lo: 1.0, lo_closed: true, hi: 2.0, hi_closed: false });
        assert!(Interval::closed_open(2.0, 2.0).is_empty());
        assert!(!Interval { lo: 2.0, lo_closed: true, hi: 2.0, hi_closed: true }.is_empty());
        assert!(Interval::closed_open(3.0, 1.0).is_empty());
        let same = Interval::closed_open(0.0, 1.0).intersect(&Interval::open(0.0, 1.0));
        assert!(!same.lo_closed);
        assert_eq!(format!("{}", a), "[1, 3)");
        assert_eq!(format!("{}", Region::empty(RegionLabel::S1)), "empty");
    }

    #[test]
    fn verdict_reference_instance() {
        let params = half_hundred();
        let v = regions_and_verdict(&params, None, &VerdictOptions::default()).unwrap();
        assert!(v.s1.is_empty() && v.s1_candidate.is_empty());
        assert!(!v.thm3a_holds && !v.thm3b_holds);
        assert!(v.s2.is_empty());
        assert!(!v.s2_candidate.is_empty());
        assert_eq!(v.classification, Classification::Unclassified);
        assert_eq!(v.per_input.len(), 2);

        let at = |eps| {
            regions_and_verdict(&params, Some(eps), &VerdictOptions::default())
                .unwrap()
                .classification
        };
        assert_eq!(at(3.0), Classification::Theorem1Asymptotic);
        assert_eq!(at(1.0), Classification::Theorem2Asymptotic);
        assert_eq!(at(0.001), Classification::Unclassified);
    }

    #[test]
    fn infinite_kappa4_never_theorem1() {
        let params = ShuffleParams::uniform(1.0, 10, 3).unwrap();
        let ks = compute_kappas(&params, 0).unwrap();
        assert_eq!(classify(&ks, 1e6), Classification::Theorem2Asymptotic);
        assert_eq!(classify(&ks, ks.ln_kappa2 * 0.5), Classification::Unclassified);
    }

    #[test]
    fn intersections_are_subsets() {
        let params = ShuffleParams::new(0.3, 7, 3, vec![0.2, 0.5, 0.3]).unwrap();
        let v = regions_and_verdict(&params, None, &VerdictOptions::default()).unwrap();
        for r in &v.per_input {
            for iv in &v.s2_candidate.intervals {
                let probe = 0.5 * (iv.lo + iv.hi);
                assert!(r.s2.contains(probe));
            }
        }
        let again = regions_and_verdict(&params, None, &VerdictOptions::default()).unwrap();
        assert_eq!(v, again);
    }
}
