//! Experiment commands behind the `serpsim` binary.
//!
//! Each `cmd_*` function returns its result as data; the `render_*` and
//! `write_*` helpers turn results into CSV tables or JSON Lines records.
//! Every command is a pure function of its inputs and seed, so re-running it
//! reproduces its output byte for byte.

mod corpus;
mod dcg;
mod generate;
mod perturb;
mod report;

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use corpus::{bin_index, bin_label, cmd_corpus, load_corpus, CorpusOutput, HistogramReport, SnapshotPair, HISTOGRAM_BINS};
pub use dcg::{cmd_dcg, DcgOutput, DcgRow, RdcgBin, RDCG_BINS};
pub use generate::{cmd_generate, read_ground_truth, GroundTruth, OverlapShare, Profile};
pub use perturb::{cmd_perturb, perturbed_pair, PerturbMode, PerturbRow, PerturbationSpec};
pub use report::{build_report, CONTENT_CUTOFFS, cmd_compare, HarnessConfig, MeasureReport, NormalizationStats, WeightedScore};

use crate::corpus::QueryRecord;
use crate::sampling::{read_query_log, stratified_sample, StrataConfig};

/// A report field that is either computed or absent for a stated reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measured<T> {
    Value(T),
    Absent(String),
}

impl<T> Measured<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Measured::Value(v) => Some(v),
            Measured::Absent(_) => None,
        }
    }

    pub fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(v) => Measured::Value(v),
            Err(e) => Measured::Absent(reason(&e)),
        }
    }
}

fn reason(e: &Error) -> String {
    match e.root() {
        Error::MissingDocument { url, .. } => format!("missing_document {url}"),
        Error::EmptyHistogram => "empty_histogram".into(),
        other => other.to_string(),
    }
}

/// Serializes rows as a CSV table with a header row.
pub fn render_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.into_inner().map_err(|e| csv_error(e.into_error().into()))
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidConfig(format!("csv output: {e}"))
}

/// Serializes records as JSON Lines.
pub fn render_jsonl<T: Serialize>(records: &[T]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r).map_err(|e| Error::InvalidConfig(format!("json output: {e}")))?;
        out.push(b'\n');
    }
    Ok(out)
}

/// Writes `bytes` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            std::fs::write(p, bytes).map_err(|e| Error::io(p, e))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

/// Stratified sample of a query log file.
pub fn cmd_sample(log: &Path, market: &str, cfg: &StrataConfig) -> Result<Vec<QueryRecord>> {
    let log = read_query_log(log)?;
    stratified_sample(&log, market, cfg)
}
