//! Jaccard ratio over URL sets and shingle sets.

use std::collections::HashSet;
use std::hash::Hash;

use serde::Serialize;

use crate::corpus::{ResultEntry, ResultList};
use crate::error::{Error, Result};
use crate::text::{tokenize, ShingleParams, ShingleSet};

/// `|a ∩ b| / |a ∪ b|` together with the two set sizes it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JaccardScore {
    pub value: f64,
    pub intersection: usize,
    pub union: usize,
}

impl JaccardScore {
    pub fn from_counts(intersection: usize, union: usize) -> Self {
        debug_assert!(intersection <= union);
        let value = if union == 0 {
            1.0
        } else {
            intersection as f64 / union as f64
        };
        JaccardScore {
            value,
            intersection,
            union,
        }
    }

    /// Exact `value < num / den` on the underlying counts.
    pub fn below(&self, num: usize, den: usize) -> bool {
        if self.union == 0 {
            return den < num;
        }
        self.intersection * den < num * self.union
    }
}

/// Jaccard ratio of two sets. Two empty sets score 1.
pub fn jaccard<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> JaccardScore {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let intersection = small.iter().filter(|x| large.contains(x)).count();
    JaccardScore::from_counts(intersection, a.len() + b.len() - intersection)
}

/// Jaccard ratio of the distinct items of two iterators.
pub fn jaccard_of<T, A, B>(a: A, b: B) -> JaccardScore
where
    T: Eq + Hash,
    A: IntoIterator<Item = T>,
    B: IntoIterator<Item = T>,
{
    let a: HashSet<T> = a.into_iter().collect();
    let b: HashSet<T> = b.into_iter().collect();
    jaccard(&a, &b)
}

/// `J_url,n` over raw URL strings of the top-`n` entries.
///
/// Lists produced by [`crate::normalize::normalize_lists`] should use
/// [`crate::normalize::NormalizedPair::j_url`], which skips ω slots.
pub fn j_url(a: &ResultList, b: &ResultList, n: usize) -> JaccardScore {
    jaccard_of(
        a.top(n).iter().map(|e| e.url.as_str()),
        b.top(n).iter().map(|e| e.url.as_str()),
    )
}

pub(crate) fn entry_shingles(
    query_id: &str,
    entry: &ResultEntry,
    params: &ShingleParams,
) -> Result<ShingleSet> {
    let doc = entry.doc.as_ref().ok_or_else(|| Error::MissingDocument {
        query_id: query_id.to_string(),
        url: entry.url.clone(),
    })?;
    Ok(params.apply(&tokenize(&doc.body)))
}

/// Union of the shingle sets of the top-`n` documents of a list.
pub fn list_shingles(list: &ResultList, n: usize, params: &ShingleParams) -> Result<HashSet<u64>> {
    let mut all = HashSet::new();
    for entry in list.top(n) {
        all.extend(entry_shingles(&list.query_id, entry, params)?.codes());
    }
    Ok(all)
}

/// `J_term,n`: Jaccard ratio of the unioned shingle sets of the top-`n`
/// documents of each list.
pub fn j_term(a: &ResultList, b: &ResultList, n: usize, params: &ShingleParams) -> Result<JaccardScore> {
    Ok(jaccard(&list_shingles(a, n, params)?, &list_shingles(b, n, params)?))
}
