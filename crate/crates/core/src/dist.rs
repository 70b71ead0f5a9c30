//! Distribution distances between term histograms, permutation p-values, and
//! the ten-measure consensus duplicate test.
//!
//! All measures work on the two histograms aligned over their merged sorted
//! vocabulary: `p`, `q` are the normalized counts and `F`, `G` the running
//! sums (see [`crate::text::paired_cdf`]).

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::DocumentText;
use crate::error::{Error, Result};
use crate::sets::jaccard_of;
use crate::text::{cumulative, term_histogram, tokenize, AlignedCounts, PairedCdf, TermHistogram};

/// Default number of random re-splits per permutation test.
pub const DEFAULT_RESAMPLES: usize = 199;
/// Default significance level for duplicate votes.
pub const DEFAULT_ALPHA: f64 = 0.05;
/// Minimum vocabulary Jaccard (as `numerator / denominator`) before any
/// distribution comparison is made.
pub const OVERLAP_GATE: (usize, usize) = (3, 10);
/// More than this many duplicate votes make two documents duplicates.
pub const CONSENSUS_QUORUM: usize = 4;

const LOG_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Phi,
    Xi,
    KolmogorovSmirnov,
    KullbackLeibler,
    JensenShannon,
    ChiSquare,
    Hellinger,
    CramerVonMises,
    Euclid,
    Canberra,
}

impl Measure {
    pub const ALL: [Measure; 10] = [
        Measure::Phi,
        Measure::Xi,
        Measure::KolmogorovSmirnov,
        Measure::KullbackLeibler,
        Measure::JensenShannon,
        Measure::ChiSquare,
        Measure::Hellinger,
        Measure::CramerVonMises,
        Measure::Euclid,
        Measure::Canberra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Phi => "phi",
            Measure::Xi => "xi",
            Measure::KolmogorovSmirnov => "ks",
            Measure::KullbackLeibler => "kl",
            Measure::JensenShannon => "js",
            Measure::ChiSquare => "chi2",
            Measure::Hellinger => "hellinger",
            Measure::CramerVonMises => "cvm",
            Measure::Euclid => "euclid",
            Measure::Canberra => "canberra",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub measure: Measure,
    pub distance: f64,
    pub p_value: f64,
    /// The overlap gate fired: distance and p-value are both pinned to 1.
    pub gated: bool,
}

impl DistanceResult {
    fn gated(measure: Measure) -> Self {
        DistanceResult {
            measure,
            distance: 1.0,
            p_value: 1.0,
            gated: true,
        }
    }

    /// Equality is not rejected at level `alpha`.
    pub fn votes_duplicate(&self, alpha: f64) -> bool {
        !self.gated && self.p_value >= alpha
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusVerdict {
    pub votes_duplicate: usize,
    pub is_duplicate: bool,
    pub per_measure: Vec<DistanceResult>,
}

impl ConsensusVerdict {
    fn not_comparable() -> Self {
        ConsensusVerdict {
            votes_duplicate: 0,
            is_duplicate: false,
            per_measure: Vec::new(),
        }
    }
}

/// Permutation-test and voting parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub resamples: usize,
    pub seed: u64,
    pub alpha: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            resamples: DEFAULT_RESAMPLES,
            seed: 0,
            alpha: DEFAULT_ALPHA,
        }
    }
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        SuiteConfig {
            seed,
            ..Self::default()
        }
    }
}

fn pointwise_ratio_terms<'a>(f: &'a [f64], g: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
    f.iter().zip(g).map(|(&a, &b)| {
        let diff = (a - b).abs();
        let mid = (a + b) / 2.0;
        let denom = mid.min(1.0 - mid);
        if diff == 0.0 || denom <= 0.0 {
            0.0
        } else {
            diff / denom.sqrt()
        }
    })
}

/// `max_i |F(i) − G(i)| / sqrt(min(m, 1 − m))` with `m = (F(i) + G(i)) / 2`.
/// Positions with a vanishing denominator contribute 0.
pub fn phi(cdf: &PairedCdf) -> f64 {
    pointwise_ratio_terms(&cdf.f_sigma, &cdf.f_pi).fold(0.0, f64::max)
}

/// Integral analog of [`phi`]: the root mean square of the same pointwise
/// ratio over the support.
pub fn xi(cdf: &PairedCdf) -> f64 {
    xi_of(&cdf.f_sigma, &cdf.f_pi)
}

fn xi_of(f: &[f64], g: &[f64]) -> f64 {
    if f.is_empty() {
        return 0.0;
    }
    let sum: f64 = pointwise_ratio_terms(f, g).map(|r| r * r).sum();
    (sum / f.len() as f64).sqrt()
}

fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| a * (a / b).ln())
        .sum()
}

/// All ten distances for one pair of aligned count vectors.
fn all_distances(left: &[u64], right: &[u64], out: &mut [f64; 10]) {
    let tl: u64 = left.iter().sum();
    let tr: u64 = right.iter().sum();
    let p: Vec<f64> = left.iter().map(|&c| c as f64 / tl as f64).collect();
    let q: Vec<f64> = right.iter().map(|&c| c as f64 / tr as f64).collect();
    let f = cumulative(left);
    let g = cumulative(right);
    let n = p.len() as f64;

    out[Measure::Phi.index()] = pointwise_ratio_terms(&f, &g).fold(0.0, f64::max);
    out[Measure::Xi.index()] = xi_of(&f, &g);
    out[Measure::KolmogorovSmirnov.index()] =
        f.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    out[Measure::CramerVonMises.index()] =
        f.iter().zip(&g).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / n;

    let mut sym_kl = 0.0;
    let mut chi2 = 0.0;
    let mut hell = 0.0;
    let mut eucl = 0.0;
    let mut canb = 0.0;
    for (&a, &b) in p.iter().zip(&q) {
        let d = a - b;
        if d != 0.0 {
            sym_kl += d * (a.max(LOG_FLOOR) / b.max(LOG_FLOOR)).ln();
        }
        let s = a + b;
        if s > 0.0 {
            chi2 += d * d / s;
            canb += d.abs() / s;
        }
        hell += (a.sqrt() - b.sqrt()).powi(2);
        eucl += d * d;
    }
    out[Measure::KullbackLeibler.index()] = sym_kl;
    out[Measure::ChiSquare.index()] = chi2;
    out[Measure::Hellinger.index()] = (hell / 2.0).sqrt();
    out[Measure::Euclid.index()] = eucl.sqrt();
    out[Measure::Canberra.index()] = canb;

    let m: Vec<f64> = p.iter().zip(&q).map(|(a, b)| (a + b) / 2.0).collect();
    out[Measure::JensenShannon.index()] = 0.5 * kl(&p, &m) + 0.5 * kl(&q, &m);
}

/// Orders a pair so every computation sees the same operand order
/// regardless of argument order.
fn canonical<'a>(h1: &'a TermHistogram, h2: &'a TermHistogram) -> (&'a TermHistogram, &'a TermHistogram) {
    let order = h1
        .total()
        .cmp(&h2.total())
        .then_with(|| h1.counts().cmp(h2.counts()));
    match order {
        Ordering::Greater => (h2, h1),
        _ => (h1, h2),
    }
}

fn check_nonempty(h1: &TermHistogram, h2: &TermHistogram) -> Result<()> {
    if h1.is_empty() || h2.is_empty() {
        Err(Error::EmptyHistogram)
    } else {
        Ok(())
    }
}

/// Observed distances plus permutation p-values for all ten measures.
///
/// The pooled term multiset is re-split `resamples` times into samples of
/// the original sizes; `p = (1 + #{d* ≥ d}) / (1 + resamples)`. Every measure
/// sees the same re-splits, so a measure's p-value does not depend on which
/// other measures are computed.
fn permutation_suite(h1: &TermHistogram, h2: &TermHistogram, resamples: usize, seed: u64) -> ([f64; 10], [f64; 10]) {
    let (h1, h2) = canonical(h1, h2);
    let aligned = AlignedCounts::new(h1, h2);
    let mut observed = [0.0; 10];
    all_distances(&aligned.left, &aligned.right, &mut observed);

    let mut pool: Vec<u32> = Vec::with_capacity((h1.total() + h2.total()) as usize);
    let pooled: Vec<u64> = aligned.left.iter().zip(&aligned.right).map(|(a, b)| a + b).collect();
    for (i, &c) in pooled.iter().enumerate() {
        pool.extend(std::iter::repeat(i as u32).take(c as usize));
    }
    let take = h1.total() as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exceed = [0usize; 10];
    let mut left = vec![0u64; pooled.len()];
    let mut right = vec![0u64; pooled.len()];
    let mut resampled = [0.0; 10];
    for _ in 0..resamples {
        let (chosen, _) = pool.partial_shuffle(&mut rng, take);
        left.iter_mut().for_each(|c| *c = 0);
        for &i in chosen.iter() {
            left[i as usize] += 1;
        }
        for ((r, &all), &l) in right.iter_mut().zip(&pooled).zip(&left) {
            *r = all - l;
        }
        all_distances(&left, &right, &mut resampled);
        for k in 0..10 {
            let tol = 1e-12 * observed[k].abs().max(1.0);
            if resampled[k] >= observed[k] - tol {
                exceed[k] += 1;
            }
        }
    }
    let mut p = [0.0; 10];
    for k in 0..10 {
        p[k] = (1 + exceed[k]) as f64 / (1 + resamples) as f64;
    }
    (observed, p)
}

/// Ungated distance between two histograms.
pub fn distance(measure: Measure, h1: &TermHistogram, h2: &TermHistogram) -> Result<f64> {
    check_nonempty(h1, h2)?;
    let (h1, h2) = canonical(h1, h2);
    let aligned = AlignedCounts::new(h1, h2);
    let mut out = [0.0; 10];
    all_distances(&aligned.left, &aligned.right, &mut out);
    Ok(out[measure.index()])
}

/// True when the vocabularies overlap too little to compare: their Jaccard
/// ratio is below 0.3 (0.3 itself passes).
pub fn overlap_gate(h1: &TermHistogram, h2: &TermHistogram) -> bool {
    let (num, den) = OVERLAP_GATE;
    jaccard_of(h1.counts().keys(), h2.counts().keys()).below(num, den)
}

/// Permutation p-value of one measure; deterministic for a given seed.
pub fn p_value(measure: Measure, h1: &TermHistogram, h2: &TermHistogram, resamples: usize, seed: u64) -> Result<f64> {
    check_nonempty(h1, h2)?;
    Ok(permutation_suite(h1, h2, resamples, seed).1[measure.index()])
}

/// Gated distance and p-value for one measure.
pub fn suite_distance(
    measure: Measure,
    h1: &TermHistogram,
    h2: &TermHistogram,
    cfg: &SuiteConfig,
) -> Result<DistanceResult> {
    Ok(suite(h1, h2, cfg)?[measure.index()])
}

/// Gated distances and p-values for all ten measures, in [`Measure::ALL`] order.
pub fn suite(h1: &TermHistogram, h2: &TermHistogram, cfg: &SuiteConfig) -> Result<Vec<DistanceResult>> {
    check_nonempty(h1, h2)?;
    if overlap_gate(h1, h2) {
        return Ok(Measure::ALL.iter().map(|&m| DistanceResult::gated(m)).collect());
    }
    let (d, p) = permutation_suite(h1, h2, cfg.resamples, cfg.seed);
    Ok(Measure::ALL
        .iter()
        .map(|&m| DistanceResult {
            measure: m,
            distance: d[m.index()],
            p_value: p[m.index()],
            gated: false,
        })
        .collect())
}

/// Consensus duplicate test on two term histograms.
pub fn consensus_histograms(h1: &TermHistogram, h2: &TermHistogram, cfg: &SuiteConfig) -> ConsensusVerdict {
    let Ok(per_measure) = suite(h1, h2, cfg) else {
        return ConsensusVerdict::not_comparable();
    };
    let votes_duplicate = per_measure
        .iter()
        .filter(|r| r.votes_duplicate(cfg.alpha))
        .count();
    ConsensusVerdict {
        votes_duplicate,
        is_duplicate: votes_duplicate > CONSENSUS_QUORUM,
        per_measure,
    }
}

/// Two documents are duplicates when more than four of the ten measures
/// fail to reject equality at level `cfg.alpha`.
pub fn consensus_duplicate(doc1: &DocumentText, doc2: &DocumentText, cfg: &SuiteConfig) -> ConsensusVerdict {
    let h1 = term_histogram([&tokenize(&doc1.body)]);
    let h2 = term_histogram([&tokenize(&doc2.body)]);
    consensus_histograms(&h1, &h2, cfg)
}
