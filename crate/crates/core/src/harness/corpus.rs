use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{read_snapshot, ResultList};
use crate::error::{Error, Result};
use crate::sets::JaccardScore;

use super::report::{build_report, HarnessConfig, MeasureReport};

/// A zero bin followed by ten bins `(k/10, (k+1)/10]`.
pub const HISTOGRAM_BINS: usize = 11;

/// Two engines' lists for one query. `sigma` is the engine whose name sorts
/// first.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotPair {
    pub sigma: ResultList,
    pub pi: ResultList,
}

/// Bin of a Jaccard score, computed on its exact counts.
pub fn bin_index(j: &JaccardScore) -> usize {
    if j.union == 0 {
        HISTOGRAM_BINS - 1
    } else {
        (10 * j.intersection).div_ceil(j.union)
    }
}

pub fn bin_label(bin: usize) -> String {
    if bin == 0 {
        "0".into()
    } else {
        format!("({:.1},{:.1}]", (bin - 1) as f64 / 10.0, bin as f64 / 10.0)
    }
}

/// Distribution of `J_url` over queries, overall and per market.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HistogramReport {
    pub counts: [u64; HISTOGRAM_BINS],
    pub per_market: BTreeMap<String, [u64; HISTOGRAM_BINS]>,
}

impl HistogramReport {
    pub fn add(&mut self, market: &str, j: &JaccardScore) {
        let b = bin_index(j);
        self.counts[b] += 1;
        self.per_market.entry(market.to_string()).or_insert([0; HISTOGRAM_BINS])[b] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Queries in bins `0..=bin`, i.e. with `J_url ≤ bin / 10`.
    pub fn at_most(&self, bin: usize) -> u64 {
        self.counts[..=bin].iter().sum()
    }

    /// CSV table: one row per bin, one count column per market.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["bin".to_string(), "all".to_string()];
        header.extend(self.per_market.keys().cloned());
        w.write_record(&header).map_err(super::csv_error)?;
        for b in 0..HISTOGRAM_BINS {
            let mut row = vec![bin_label(b), self.counts[b].to_string()];
            row.extend(self.per_market.values().map(|c| c[b].to_string()));
            w.write_record(&row).map_err(super::csv_error)?;
        }
        w.into_inner().map_err(|e| super::csv_error(e.into_error().into()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusOutput {
    pub histogram: HistogramReport,
    /// One report per pair, ordered by query id.
    pub reports: Vec<MeasureReport>,
}

fn snapshot_root(dir: &Path) -> PathBuf {
    let nested = dir.join("snapshots");
    if nested.is_dir() {
        nested
    } else {
        dir.to_path_buf()
    }
}

/// Reads every `*.jsonl` snapshot under `dir` (or `dir/snapshots`) and pairs
/// them by query id. Files that fail to load and queries without exactly two
/// engines are skipped with a warning.
pub fn load_corpus(dir: &Path, top_n: usize) -> Result<Vec<SnapshotPair>> {
    let root = snapshot_root(dir);
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&root)
        .map_err(|e| Error::io(&root, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "jsonl"))
        .collect();
    paths.sort();

    let mut by_query: BTreeMap<String, Vec<ResultList>> = BTreeMap::new();
    for path in &paths {
        match read_snapshot(path, top_n) {
            Ok(list) => by_query.entry(list.query_id.clone()).or_default().push(list),
            Err(e) => warn!("skipping {}: {e}", path.display()),
        }
    }

    let mut pairs = Vec::with_capacity(by_query.len());
    for (query_id, mut lists) in by_query {
        lists.sort_by(|a, b| a.engine.cmp(&b.engine));
        if lists.len() != 2 || lists[0].engine == lists[1].engine {
            let engines: Vec<&str> = lists.iter().map(|l| l.engine.as_str()).collect();
            warn!("skipping query {query_id}: need two engines, found {engines:?}");
            continue;
        }
        let pi = lists.pop().expect("two lists");
        let sigma = lists.pop().expect("two lists");
        pairs.push(SnapshotPair { sigma, pi });
    }
    Ok(pairs)
}

/// Measures every pair in a corpus directory and bins `J_url` after
/// normalization.
pub fn cmd_corpus(dir: &Path, cfg: &HarnessConfig) -> Result<CorpusOutput> {
    let pairs = load_corpus(dir, cfg.top_n)?;
    if pairs.is_empty() {
        return Err(Error::NoPairs);
    }
    let reports: Vec<MeasureReport> = pairs
        .par_iter()
        .map(|p| build_report(&p.sigma, &p.pi, None, cfg))
        .collect::<Result<_>>()?;
    let mut histogram = HistogramReport::default();
    for r in &reports {
        histogram.add(&r.market, &r.j_url);
    }
    Ok(CorpusOutput { histogram, reports })
}
