//! Cross-list URL normalization.
//!
//! Two engines can return the same document under different URLs, and one
//! engine can return the same document twice. [`normalize_lists`] binds every
//! entry of both lists to a canonical name:
//!
//! 1. The first list is scanned top-down. An entry that duplicates an earlier
//!    entry (shingle Jaccard ≥ threshold) takes the name of the first such
//!    canonical entry; otherwise it keeps its own URL.
//! 2. The second list is scanned top-down. An entry's candidates are earlier
//!    entries of its own list that are shingle duplicates, and entries of the
//!    first list that are consensus duplicates ([`crate::dist`]). A canonical
//!    name from the first list wins over one from the second.
//! 3. Within each list, every repeat of a name after its first occurrence
//!    becomes ω: it keeps its rank position but is ignored by all measures.
//!
//! An entry whose URL string equals an earlier entry's (or, in the second
//! list, any first-list entry's) takes that entry's name directly. Entries
//! without a document body can only match by URL string.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{DocumentText, ResultEntry, ResultList};
use crate::dist::{consensus_histograms, SuiteConfig};
use crate::sets::{jaccard, jaccard_of, JaccardScore};
use crate::text::{term_histogram, tokenize, ShingleParams, ShingleSet, TermHistogram};

/// Default shingle Jaccard at or above which two documents are duplicates.
pub const DEFAULT_SHINGLE_THRESHOLD: f64 = 0.5;

/// Which test decides that an entry of the second list duplicates an entry
/// of the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DupMode {
    /// Ten-measure distribution consensus.
    #[default]
    Consensus,
    /// Shingle Jaccard, as within a list.
    Shingle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizeConfig {
    pub shingle_threshold: f64,
    pub shingles: ShingleParams,
    pub suite: SuiteConfig,
    pub cross_list: DupMode,
}

impl Default for NormalizeConfig {
    fn default() -> Self {
        NormalizeConfig {
            shingle_threshold: DEFAULT_SHINGLE_THRESHOLD,
            shingles: ShingleParams::default(),
            suite: SuiteConfig::default(),
            cross_list: DupMode::Consensus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Sigma,
    Pi,
}

/// A position of a normalized list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Item(String),
    Omega,
}

impl Slot {
    pub fn name(&self) -> Option<&str> {
        match self {
            Slot::Item(s) => Some(s),
            Slot::Omega => None,
        }
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, Slot::Omega)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedList {
    pub query_id: String,
    pub engine: String,
    pub slots: Vec<Slot>,
    /// Canonical name of every position, ω positions included.
    pub bindings: Vec<String>,
    source: ResultList,
}

impl NormalizedList {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn omega_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_omega()).count()
    }

    /// Non-ω names among the first `n` positions.
    pub fn names(&self, n: usize) -> impl Iterator<Item = &str> {
        self.slots.iter().take(n).filter_map(Slot::name)
    }

    /// The first `n` positions, `None` for ω.
    pub fn slots_top(&self, n: usize) -> Vec<Option<&str>> {
        self.slots.iter().take(n).map(Slot::name).collect()
    }

    /// The original list the slots were derived from.
    pub fn source(&self) -> &ResultList {
        &self.source
    }

    /// The list renamed to canonical bindings, each entry keeping its own
    /// document. Feeding two such lists back into [`normalize_lists`]
    /// reproduces the same pair.
    pub fn to_result_list(&self) -> ResultList {
        let mut list = self.source.clone();
        for (entry, name) in list.entries.iter_mut().zip(&self.bindings) {
            entry.url = name.clone();
        }
        list
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPair {
    pub sigma_tilde: NormalizedList,
    pub pi_tilde: NormalizedList,
    /// `(side, rank)` → the slot that position became.
    pub binding: BTreeMap<(Side, usize), Slot>,
}

impl NormalizedPair {
    /// `J_url,n` over canonical names, ω excluded.
    pub fn j_url(&self, n: usize) -> JaccardScore {
        jaccard_of(self.sigma_tilde.names(n), self.pi_tilde.names(n))
    }

    /// Shared canonical names over whole lists.
    pub fn intersection(&self) -> usize {
        let a: HashSet<&str> = self.sigma_tilde.names(usize::MAX).collect();
        let b: HashSet<&str> = self.pi_tilde.names(usize::MAX).collect();
        a.intersection(&b).count()
    }
}

/// Shared URL strings of two raw lists.
pub fn exact_intersection(sigma: &ResultList, pi: &ResultList) -> usize {
    let a: HashSet<&str> = sigma.urls().collect();
    let b: HashSet<&str> = pi.urls().collect();
    a.intersection(&b).count()
}

struct Features {
    shingles: ShingleSet,
    histogram: TermHistogram,
}

fn features(entry: &ResultEntry, params: &ShingleParams) -> Option<Features> {
    entry.doc.as_ref().map(|d| {
        let terms = tokenize(&d.body);
        Features {
            shingles: params.apply(&terms),
            histogram: term_histogram([&terms]),
        }
    })
}

/// Shingle Jaccard of two documents is at least `threshold`.
pub fn duplicate_by_shingles(d1: &DocumentText, d2: &DocumentText, threshold: f64) -> bool {
    duplicate_by_shingles_with(d1, d2, threshold, &ShingleParams::default())
}

pub fn duplicate_by_shingles_with(
    d1: &DocumentText,
    d2: &DocumentText,
    threshold: f64,
    params: &ShingleParams,
) -> bool {
    let a = params.apply(&tokenize(&d1.body));
    let b = params.apply(&tokenize(&d2.body));
    jaccard(a.members(), b.members()).value >= threshold
}

struct Normalizer<'a> {
    cfg: &'a NormalizeConfig,
    sigma: &'a ResultList,
    pi: &'a ResultList,
    f_sigma: Vec<Option<Features>>,
    f_pi: Vec<Option<Features>>,
    consensus_cache: HashMap<(usize, usize), bool>,
}

impl Normalizer<'_> {
    fn shingle_dup(&self, a: &Option<Features>, b: &Option<Features>) -> bool {
        match (a, b) {
            (Some(a), Some(b)) => {
                jaccard(a.shingles.members(), b.shingles.members()).value >= self.cfg.shingle_threshold
            }
            _ => false,
        }
    }

    fn cross_dup(&mut self, i: usize, k: usize) -> bool {
        if let Some(&v) = self.consensus_cache.get(&(i, k)) {
            return v;
        }
        let v = match self.cfg.cross_list {
            DupMode::Shingle => self.shingle_dup(&self.f_sigma[i], &self.f_pi[k]),
            DupMode::Consensus => match (&self.f_sigma[i], &self.f_pi[k]) {
                (Some(a), Some(b)) => consensus_histograms(&a.histogram, &b.histogram, &self.cfg.suite).is_duplicate,
                _ => false,
            },
        };
        self.consensus_cache.insert((i, k), v);
        v
    }

    fn run(mut self) -> NormalizedPair {
        let sigma_urls: Vec<&str> = self.sigma.urls().collect();
        let pi_urls: Vec<&str> = self.pi.urls().collect();

        // Step 1: the reference list.
        let mut bind_sigma: Vec<String> = Vec::with_capacity(sigma_urls.len());
        for i in 0..sigma_urls.len() {
            let name = if let Some(j) = (0..i).find(|&j| sigma_urls[j] == sigma_urls[i]) {
                bind_sigma[j].clone()
            } else {
                let image: HashSet<&str> = (0..i)
                    .filter(|&j| self.shingle_dup(&self.f_sigma[j], &self.f_sigma[i]))
                    .map(|j| bind_sigma[j].as_str())
                    .collect();
                first_in_order(&bind_sigma, |b| image.contains(b))
                    .map(str::to_string)
                    .unwrap_or_else(|| sigma_urls[i].to_string())
            };
            bind_sigma.push(name);
        }

        // Step 2: the second list, with priority to names from the first.
        let mut bind_pi: Vec<String> = Vec::with_capacity(pi_urls.len());
        for k in 0..pi_urls.len() {
            let exact = sigma_urls
                .iter()
                .position(|u| *u == pi_urls[k])
                .map(|i| bind_sigma[i].clone())
                .or_else(|| {
                    (0..k)
                        .find(|&j| pi_urls[j] == pi_urls[k])
                        .map(|j| bind_pi[j].clone())
                });
            let name = match exact {
                Some(name) => name,
                None => {
                    let within: Vec<usize> = (0..k)
                        .filter(|&j| self.shingle_dup(&self.f_pi[j], &self.f_pi[k]))
                        .collect();
                    let within_names: HashSet<&str> = within.iter().map(|&j| bind_pi[j].as_str()).collect();
                    let mut chosen = None;
                    let mut seen = HashSet::new();
                    for b in &bind_sigma {
                        if !seen.insert(b.as_str()) {
                            continue;
                        }
                        let hit = within_names.contains(b.as_str())
                            || (0..sigma_urls.len())
                                .filter(|&i| &bind_sigma[i] == b)
                                .any(|i| self.cross_dup(i, k));
                        if hit {
                            chosen = Some(b.clone());
                            break;
                        }
                    }
                    chosen
                        .or_else(|| {
                            first_in_order(&bind_pi, |b| within_names.contains(b)).map(str::to_string)
                        })
                        .unwrap_or_else(|| pi_urls[k].to_string())
                }
            };
            bind_pi.push(name);
        }

        let sigma_tilde = finish(self.sigma, bind_sigma);
        let pi_tilde = finish(self.pi, bind_pi);
        let mut binding = BTreeMap::new();
        for (side, list) in [(Side::Sigma, &sigma_tilde), (Side::Pi, &pi_tilde)] {
            for (entry, slot) in list.source.entries.iter().zip(&list.slots) {
                binding.insert((side, entry.rank), slot.clone());
            }
        }
        NormalizedPair {
            sigma_tilde,
            pi_tilde,
            binding,
        }
    }
}

fn first_in_order<'a>(names: &'a [String], pred: impl Fn(&str) -> bool) -> Option<&'a str> {
    names.iter().map(String::as_str).find(|b| pred(b))
}

/// Replaces every repeat of a name after its first occurrence with ω.
fn finish(source: &ResultList, bindings: Vec<String>) -> NormalizedList {
    let mut seen = HashSet::new();
    let slots = bindings
        .iter()
        .map(|b| {
            if seen.insert(b.as_str()) {
                Slot::Item(b.clone())
            } else {
                Slot::Omega
            }
        })
        .collect();
    NormalizedList {
        query_id: source.query_id.clone(),
        engine: source.engine.clone(),
        slots,
        bindings,
        source: source.clone(),
    }
}

/// Binds duplicate documents within and across two lists to one name.
pub fn normalize_lists(sigma: &ResultList, pi: &ResultList, cfg: &NormalizeConfig) -> NormalizedPair {
    let params = cfg.shingles;
    Normalizer {
        cfg,
        sigma,
        pi,
        f_sigma: sigma.entries.iter().map(|e| features(e, &params)).collect(),
        f_pi: pi.entries.iter().map(|e| features(e, &params)).collect(),
        consensus_cache: HashMap::new(),
    }
    .run()
}
