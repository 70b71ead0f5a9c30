//! Discounted cumulative gain and the relative DCG of two engines.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{Grade, JudgmentSet, ResultList};

/// DCG cutoff used when comparing engines.
pub const DEFAULT_DCG_N: usize = 5;

/// `2^(level-1) - 1`: Bad 0, Fair 1, Good 3, Excellent 7, Perfect 15.
pub fn gain(grade: Grade) -> f64 {
    ((1u32 << (grade.level() - 1)) - 1) as f64
}

/// `log2(1 + rank)`, rank 1-based.
pub fn discount(rank: usize) -> f64 {
    ((1 + rank) as f64).log2()
}

/// DCG of the top-`n` entries. Unjudged URLs contribute nothing.
pub fn dcg(results: &ResultList, judgments: &JudgmentSet, n: usize) -> f64 {
    results
        .top(n)
        .iter()
        .map(|e| {
            judgments
                .get(&results.query_id, &e.url)
                .map_or(0.0, |g| gain(g) / discount(e.rank))
        })
        .sum()
}

/// `(dcg1 - dcg2) / max(dcg1, dcg2)`, in `[-1, 1]`; 0 when both are 0.
pub fn relative_dcg(_query_id: &str, dcg1: f64, dcg2: f64) -> f64 {
    let m = dcg1.max(dcg2);
    if m <= 0.0 {
        0.0
    } else {
        (dcg1 - dcg2) / m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DcgScore {
    pub per_query: BTreeMap<String, f64>,
    pub mean: f64,
    pub n: usize,
}

impl DcgScore {
    /// Mean DCG of one engine over its lists.
    pub fn over<'a>(lists: impl IntoIterator<Item = &'a ResultList>, judgments: &JudgmentSet, n: usize) -> Self {
        let per_query: BTreeMap<String, f64> = lists
            .into_iter()
            .map(|l| (l.query_id.clone(), dcg(l, judgments, n)))
            .collect();
        let mean = if per_query.is_empty() {
            0.0
        } else {
            per_query.values().sum::<f64>() / per_query.len() as f64
        };
        DcgScore { per_query, mean, n }
    }
}
