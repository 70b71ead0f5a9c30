use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::Serialize;

use crate::corpus::{read_judgments, read_snapshot, JudgmentSet, ResultList, DEFAULT_TOP_N};
use crate::dist::{phi, suite, DistanceResult, SuiteConfig, DEFAULT_RESAMPLES};
use crate::error::{Error, Result};
use crate::normalize::{exact_intersection, normalize_lists, DupMode, NormalizeConfig, NormalizedList};
use crate::quality::{dcg, relative_dcg, DEFAULT_DCG_N};
use crate::rank::{extend_slots, footrule_extended, kendall_extended, WeightFn};
use crate::sets::{jaccard, JaccardScore};
use crate::text::{paired_cdf, term_histogram, tokenize, ShingleParams, TermHistogram};

use super::{reason, Measured};

/// Cutoffs at which content measures are reported.
pub const CONTENT_CUTOFFS: [usize; 3] = [1, 5, 10];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnessConfig {
    pub top_n: usize,
    pub seed: u64,
    pub resamples: usize,
    pub dupmode: DupMode,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            top_n: DEFAULT_TOP_N,
            seed: 0,
            resamples: DEFAULT_RESAMPLES,
            dupmode: DupMode::Consensus,
        }
    }
}

impl HarnessConfig {
    pub fn suite(&self) -> SuiteConfig {
        SuiteConfig {
            resamples: self.resamples,
            seed: self.seed,
            ..SuiteConfig::default()
        }
    }

    pub fn normalize(&self) -> NormalizeConfig {
        NormalizeConfig {
            suite: self.suite(),
            cross_list: self.dupmode,
            ..NormalizeConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedScore {
    pub iota: f64,
    pub dcgw: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormalizationStats {
    pub omega_sigma: usize,
    pub omega_pi: usize,
    pub intersection_before: usize,
    pub intersection_after: usize,
}

/// Every measure for one pair of lists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub query_id: String,
    pub market: String,
    pub engines: [String; 2],
    pub top_n: usize,
    pub j_url: JaccardScore,
    pub s_url: WeightedScore,
    pub k_url: WeightedScore,
    pub j_term: BTreeMap<usize, Measured<f64>>,
    pub phi_term: BTreeMap<usize, Measured<f64>>,
    pub suite: Measured<Vec<DistanceResult>>,
    pub normalization: NormalizationStats,
    pub r_dcg: Measured<f64>,
}

struct Content {
    shingles: Vec<Option<HashSet<u64>>>,
    histograms: Vec<Option<TermHistogram>>,
}

impl Content {
    fn of(list: &ResultList, params: &ShingleParams) -> Self {
        let (shingles, histograms) = list
            .entries
            .iter()
            .map(|e| match &e.doc {
                Some(d) => {
                    let terms = tokenize(&d.body);
                    (Some(params.apply(&terms).members().clone()), Some(term_histogram([&terms])))
                }
                None => (None, None),
            })
            .unzip();
        Content { shingles, histograms }
    }

    /// Union of shingles and merged histogram over non-ω positions in the top `n`.
    fn top(&self, list: &NormalizedList, n: usize) -> Result<(HashSet<u64>, TermHistogram)> {
        let mut sh = HashSet::new();
        let mut hist = TermHistogram::default();
        for (i, slot) in list.slots.iter().enumerate().take(n) {
            if slot.is_omega() {
                continue;
            }
            match (&self.shingles[i], &self.histograms[i]) {
                (Some(s), Some(h)) => {
                    sh.extend(s);
                    hist.merge(h);
                }
                _ => {
                    return Err(Error::MissingDocument {
                        query_id: list.query_id.clone(),
                        url: list.source().entries[i].url.clone(),
                    })
                }
            }
        }
        Ok((sh, hist))
    }
}

/// Normalizes a pair of lists and computes every measure on the result.
pub fn build_report(
    sigma: &ResultList,
    pi: &ResultList,
    judgments: Option<&JudgmentSet>,
    cfg: &HarnessConfig,
) -> Result<MeasureReport> {
    let n = cfg.top_n;
    let norm = normalize_lists(sigma, pi, &cfg.normalize());
    let (st, pt) = (&norm.sigma_tilde, &norm.pi_tilde);

    let ext = extend_slots(&st.slots_top(n), &pt.slots_top(n))?;
    let score = |f: fn(&_, &WeightFn) -> crate::rank::ListScore| WeightedScore {
        iota: f(&ext, &WeightFn::Iota).normalized,
        dcgw: f(&ext, &WeightFn::Dcgw).normalized,
    };
    let s_url = score(footrule_extended);
    let k_url = score(kendall_extended);

    let params = cfg.normalize().shingles;
    let (cs, cp) = (Content::of(sigma, &params), Content::of(pi, &params));
    let both = |k: usize| -> Result<_> { Ok((cs.top(st, k)?, cp.top(pt, k)?)) };
    let mut j_term = BTreeMap::new();
    let mut phi_term = BTreeMap::new();
    for k in CONTENT_CUTOFFS {
        let (jt, ph) = match both(k) {
            Ok(((a, h1), (b, h2))) => (
                Measured::Value(jaccard(&a, &b).value),
                Measured::from_result(paired_cdf(&h1, &h2).map(|c| phi(&c))),
            ),
            Err(e) => (Measured::Absent(reason(&e)), Measured::Absent(reason(&e))),
        };
        j_term.insert(k, jt);
        phi_term.insert(k, ph);
    }
    let suite = Measured::from_result(both(n).and_then(|((_, h1), (_, h2))| suite(&h1, &h2, &cfg.suite())));

    let r_dcg = match judgments {
        None => Measured::Absent("no_judgments".into()),
        Some(j) if !j.has_query(&sigma.query_id) => Measured::Absent("unjudged".into()),
        Some(j) => Measured::Value(relative_dcg(
            &sigma.query_id,
            dcg(sigma, j, DEFAULT_DCG_N),
            dcg(pi, j, DEFAULT_DCG_N),
        )),
    };

    Ok(MeasureReport {
        query_id: sigma.query_id.clone(),
        market: sigma.market.clone(),
        engines: [sigma.engine.clone(), pi.engine.clone()],
        top_n: n,
        j_url: norm.j_url(n),
        s_url,
        k_url,
        j_term,
        phi_term,
        suite,
        normalization: NormalizationStats {
            omega_sigma: st.omega_count(),
            omega_pi: pt.omega_count(),
            intersection_before: exact_intersection(sigma, pi),
            intersection_after: norm.intersection(),
        },
        r_dcg,
    })
}

/// Loads two snapshot files and reports every measure on them.
pub fn cmd_compare(left: &Path, right: &Path, judgments: Option<&Path>, cfg: &HarnessConfig) -> Result<MeasureReport> {
    let sigma = read_snapshot(left, cfg.top_n)?;
    let pi = read_snapshot(right, cfg.top_n)?;
    let judgments = judgments.map(read_judgments).transpose()?;
    build_report(&sigma, &pi, judgments.as_ref(), cfg)
}
