//! Exact and sampled shuffle-model output distributions.
//!
//! A uniformly shuffled message vector carries exactly the information in its
//! histogram, so every computation here works with histograms of k-RR
//! reports. Exact distributions are built by convolving one user at a time,
//! which stays cheap for `n <= 25`, `k <= 5` (at most `C(29, 4) = 23751`
//! histograms).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{ShuffleParams, TargetPair};

pub const MAX_EXACT_N: usize = 25;
pub const MAX_EXACT_K: usize = 5;

/// Samples drawn from one generator stream. Chunk `c` is seeded with
/// `seed + c`, so output does not depend on the number of worker threads.
pub const SAMPLE_CHUNK: usize = 4096;

/// Identifier of the sampling generator, recorded alongside sampled output.
pub const RNG_ALGORITHM: &str = "chacha20/rand_chacha-0.3/seed+chunk/4096";

const MASS_TOLERANCE: f64 = 1e-9;

/// k-ary randomized response with local privacy level ε₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrrMatrix {
    pub k: usize,
    pub p_same: f64,
    pub p_diff: f64,
}

impl KrrMatrix {
    pub fn new(epsilon0: f64, k: usize) -> Result<Self> {
        if !(epsilon0 > 0.0 && epsilon0.is_finite()) {
            return Err(Error::NonPositiveEpsilon0(epsilon0));
        }
        if k < 2 {
            return Err(Error::BadAlphabet(k));
        }
        // e^ε₀ / (e^ε₀ + k - 1), rewritten to stay finite for large ε₀.
        let damp = (-epsilon0).exp();
        let norm = 1.0 + (k - 1) as f64 * damp;
        Ok(KrrMatrix {
            k,
            p_same: 1.0 / norm,
            p_diff: damp / norm,
        })
    }

    pub fn prob(&self, input: usize, output: usize) -> f64 {
        if input == output {
            self.p_same
        } else {
            self.p_diff
        }
    }

    fn sample<R: Rng>(&self, input: usize, rng: &mut R) -> usize {
        if rng.gen::<f64>() < self.p_same {
            input
        } else {
            let other = rng.gen_range(0..self.k - 1);
            if other >= input {
                other + 1
            } else {
                other
            }
        }
    }
}

/// Inputs of all `n` users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    entries: Vec<usize>,
    k: usize,
}

impl Dataset {
    pub fn new(entries: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&index) = entries.iter().find(|&&x| x >= k) {
            return Err(Error::BadElement { index, k });
        }
        Ok(Dataset { entries, k })
    }

    /// `others` followed by the fixed user's input `x`.
    pub fn with_target(others: &[usize], x: usize, k: usize) -> Result<Self> {
        let mut entries = others.to_vec();
        entries.push(x);
        Dataset::new(entries, k)
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn histogram(&self) -> Histogram {
        let mut counts = vec![0u32; self.k];
        for &x in &self.entries {
            counts[x] += 1;
        }
        Histogram(counts)
    }
}

/// Message counts per output element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Histogram(pub Vec<u32>);

impl Histogram {
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramDist {
    pub n: usize,
    pub k: usize,
    pub probs: BTreeMap<Histogram, f64>,
}

impl HistogramDist {
    pub fn prob(&self, h: &Histogram) -> f64 {
        self.probs.get(h).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.values().sum()
    }

    fn check_same_space(&self, other: &HistogramDist) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::MismatchedSupport(self.n, self.k, other.n, other.k));
        }
        Ok(())
    }
}

fn check_exact_size(n: usize, k: usize) -> Result<()> {
    if n > MAX_EXACT_N || k > MAX_EXACT_K {
        return Err(Error::TooLarge {
            n,
            k,
            max_n: MAX_EXACT_N,
            max_k: MAX_EXACT_K,
        });
    }
    Ok(())
}

/// Exact law of the shuffled reports of `dataset`.
pub fn histogram_dist(dataset: &Dataset, krr: &KrrMatrix) -> Result<HistogramDist> {
    let k = dataset.k();
    if krr.k != k {
        return Err(Error::MismatchedSupport(dataset.len(), k, dataset.len(), krr.k));
    }
    check_exact_size(dataset.len(), k)?;

    let mut probs = BTreeMap::new();
    probs.insert(Histogram(vec![0; k]), 1.0);
    for &input in dataset.entries() {
        let mut next = BTreeMap::new();
        for (h, p) in &probs {
            for output in 0..k {
                let mut counts = h.0.clone();
                counts[output] += 1;
                *next.entry(Histogram(counts)).or_insert(0.0) += p * krr.prob(input, output);
            }
        }
        probs = next;
    }
    let dist = HistogramDist {
        n: dataset.len(),
        k,
        probs,
    };
    debug_assert!((dist.total_mass() - 1.0).abs() <= MASS_TOLERANCE);
    Ok(dist)
}

/// `Σ_h max(P₀(h) - e^ε P₁(h), 0)`, the smallest δ for which `P₀` is
/// (ε, δ)-close to `P₁` in the one direction.
pub fn hockey_stick_delta(p0: &HistogramDist, p1: &HistogramDist, epsilon: f64) -> Result<f64> {
    p0.check_same_space(p1)?;
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::NegativeEpsilon(epsilon));
    }
    let scale = epsilon.exp();
    let delta: f64 = p0
        .probs
        .iter()
        .map(|(h, &p)| (p - scale * p1.prob(h)).max(0.0))
        .sum();
    Ok(delta.clamp(0.0, 1.0))
}

/// Total variation distance `½ Σ |P(h) - Q(h)|`.
pub fn total_variation(p: &HistogramDist, q: &HistogramDist) -> Result<f64> {
    p.check_same_space(q)?;
    let mut sum = 0.0;
    for (h, &a) in &p.probs {
        sum += (a - q.prob(h)).abs();
    }
    for (h, &b) in &q.probs {
        if !p.probs.contains_key(h) {
            sum += b;
        }
    }
    Ok(0.5 * sum)
}

fn check_others(params: &ShuffleParams, others: &[usize]) -> Result<()> {
    params.validate()?;
    let n = params.n as usize;
    check_exact_size(n, params.k)?;
    if others.len() + 1 != n {
        return Err(Error::BadDataset {
            expected: n - 1,
            got: others.len(),
        });
    }
    Ok(())
}

/// Exact tight δ of the shuffled mechanism for the fixed user switching from
/// `pair.x0` to `pair.x1` while the other `n - 1` inputs stay at `others`.
pub fn tight_adp(
    params: &ShuffleParams,
    others: &[usize],
    pair: TargetPair,
    epsilon: f64,
) -> Result<f64> {
    check_others(params, others)?;
    let pair = TargetPair::new(pair.x0, pair.x1, params.k)?;
    let krr = KrrMatrix::new(params.epsilon0, params.k)?;
    let d0 = histogram_dist(&Dataset::with_target(others, pair.x0, params.k)?, &krr)?;
    let d1 = histogram_dist(&Dataset::with_target(others, pair.x1, params.k)?, &krr)?;
    hockey_stick_delta(&d0, &d1, epsilon)
}

/// Maximum of [`tight_adp`] over all ordered input pairs.
pub fn tight_dp(params: &ShuffleParams, others: &[usize], epsilon: f64) -> Result<f64> {
    check_others(params, others)?;
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::NegativeEpsilon(epsilon));
    }
    let krr = KrrMatrix::new(params.epsilon0, params.k)?;
    let dists = (0..params.k)
        .map(|x| histogram_dist(&Dataset::with_target(others, x, params.k)?, &krr))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for pair in TargetPair::all_ordered(params.k) {
        worst = worst.max(hockey_stick_delta(&dists[pair.x0], &dists[pair.x1], epsilon)?);
    }
    Ok(worst)
}

/// [`tight_dp`] maximised over the constant choices `others = (c, .., c)`.
pub fn tight_dp_constant_others(params: &ShuffleParams, epsilon: f64) -> Result<f64> {
    let n = params.n as usize;
    let mut worst: f64 = 0.0;
    for c in 0..params.k {
        let others = vec![c; n.saturating_sub(1)];
        worst = worst.max(tight_dp(params, &others, epsilon)?);
    }
    Ok(worst)
}

/// Draws `m` independent shuffled-report histograms. Identical `(seed, m)`
/// always gives the identical sequence.
pub fn sample_shuffled(
    dataset: &Dataset,
    krr: &KrrMatrix,
    m: usize,
    seed: u64,
) -> Result<Vec<Histogram>> {
    if m == 0 {
        return Err(Error::NoSamples);
    }
    if krr.k != dataset.k() {
        return Err(Error::MismatchedSupport(dataset.len(), dataset.k(), dataset.len(), krr.k));
    }
    let chunks = m.div_ceil(SAMPLE_CHUNK);
    let samples = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let len = SAMPLE_CHUNK.min(m - chunk * SAMPLE_CHUNK);
            let mut rng = ChaCha20Rng::seed_from_u64(seed.wrapping_add(chunk as u64));
            (0..len)
                .map(|_| {
                    let mut counts = vec![0u32; krr.k];
                    for &x in dataset.entries() {
                        counts[krr.sample(x, &mut rng)] += 1;
                    }
                    Histogram(counts)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(samples)
}

/// Empirical law of a list of sampled histograms over `(n, k)`.
pub fn empirical_dist(samples: &[Histogram], n: usize, k: usize) -> HistogramDist {
    let mut counts: BTreeMap<Histogram, u64> = BTreeMap::new();
    for h in samples {
        *counts.entry(h.clone()).or_insert(0) += 1;
    }
    let m = samples.len() as f64;
    HistogramDist {
        n,
        k,
        probs: counts.into_iter().map(|(h, c)| (h, c as f64 / m)).collect(),
    }
}
