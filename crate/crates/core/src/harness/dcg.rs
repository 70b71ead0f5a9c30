use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::read_judgments;
use crate::error::{Error, Result};
use crate::quality::{dcg, relative_dcg};

use super::corpus::load_corpus;
use super::report::{build_report, HarnessConfig, CONTENT_CUTOFFS};

/// Width-0.1 bins over `[-1, 1]`; the last bin is closed.
pub const RDCG_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DcgRow {
    pub query_id: String,
    pub dcg_se1: f64,
    pub dcg_se2: f64,
    pub r_dcg: f64,
    pub j_url: f64,
    pub s_url: f64,
    pub j_term_10: Option<f64>,
    pub phi_term_10: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RdcgBin {
    pub lower: f64,
    pub upper: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DcgOutput {
    pub rows: Vec<DcgRow>,
    /// `r_dcg` distribution over queries whose `J_url` is below 0.2.
    pub low_overlap: Vec<RdcgBin>,
}

fn rdcg_bin(r: f64) -> usize {
    (((r + 1.0) * 10.0).floor().max(0.0) as usize).min(RDCG_BINS - 1)
}

/// Joins DCG of both engines with the overlap and content measures at
/// cutoff `n`, for every judged query in a corpus directory.
pub fn cmd_dcg(judgments: &Path, dir: &Path, n: usize, cfg: &HarnessConfig) -> Result<DcgOutput> {
    if n == 0 {
        return Err(Error::InvalidConfig("dcg cutoff must be at least 1".into()));
    }
    let judgments = read_judgments(judgments)?;
    let pairs: Vec<_> = load_corpus(dir, n.max(CONTENT_CUTOFFS[2]))?
        .into_iter()
        .filter(|p| judgments.has_query(&p.sigma.query_id))
        .collect();
    if pairs.is_empty() {
        return Err(Error::NoJudgedQueries);
    }
    let cfg = HarnessConfig { top_n: n, ..*cfg };
    let measured: Vec<(DcgRow, bool)> = pairs
        .par_iter()
        .map(|p| {
            let rep = build_report(&p.sigma, &p.pi, None, &cfg)?;
            let d1 = dcg(&p.sigma, &judgments, n);
            let d2 = dcg(&p.pi, &judgments, n);
            let row = DcgRow {
                query_id: p.sigma.query_id.clone(),
                dcg_se1: d1,
                dcg_se2: d2,
                r_dcg: relative_dcg(&p.sigma.query_id, d1, d2),
                j_url: rep.j_url.value,
                s_url: rep.s_url.iota,
                j_term_10: rep.j_term[&10].value().copied(),
                phi_term_10: rep.phi_term[&10].value().copied(),
            };
            Ok((row, rep.j_url.below(1, 5)))
        })
        .collect::<Result<_>>()?;

    let mut low_overlap: Vec<RdcgBin> = (0..RDCG_BINS)
        .map(|b| RdcgBin {
            lower: (b as f64 - 10.0) / 10.0,
            upper: (b as f64 - 9.0) / 10.0,
            count: 0,
        })
        .collect();
    for (row, low) in &measured {
        if *low {
            low_overlap[rdcg_bin(row.r_dcg)].count += 1;
        }
    }
    Ok(DcgOutput {
        rows: measured.into_iter().map(|(r, _)| r).collect(),
        low_overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rdcg_bins() {
        assert_eq!(rdcg_bin(-1.0), 0);
        assert_eq!(rdcg_bin(-0.95), 0);
        assert_eq!(rdcg_bin(0.0), 10);
        assert_eq!(rdcg_bin(0.95), 19);
        assert_eq!(rdcg_bin(1.0), 19);
    }
}
