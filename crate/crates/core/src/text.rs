//! Tokenization, shingling, term histograms and paired CDFs.

use std::collections::{BTreeMap, HashSet};

use xxhash_rust::xxh3::xxh3_64;

use crate::error::{Error, Result};

/// Terms per shingle.
pub const DEFAULT_WINDOW: usize = 10;
/// Distinct shingles kept per document.
pub const DEFAULT_CAP: usize = 1000;

const SHINGLE_SEPARATOR: u8 = 0x1f;

/// Window and cap used when summarizing documents by shingles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShingleParams {
    pub window: usize,
    pub cap: usize,
}

impl Default for ShingleParams {
    fn default() -> Self {
        ShingleParams {
            window: DEFAULT_WINDOW,
            cap: DEFAULT_CAP,
        }
    }
}

impl ShingleParams {
    pub fn with_window(window: usize) -> Self {
        ShingleParams {
            window,
            ..Self::default()
        }
    }

    pub fn apply(&self, seq: &TermSequence) -> ShingleSet {
        shingle(seq, self.window, self.cap)
    }
}

/// Normalized tokens in document order. Never contains empty tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermSequence(Vec<String>);

impl TermSequence {
    pub fn terms(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        TermSequence(self.0.iter().rev().cloned().collect())
    }
}

impl<S: Into<String>> FromIterator<S> for TermSequence {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        TermSequence(
            iter.into_iter()
                .map(Into::into)
                .filter(|t: &String| !t.is_empty())
                .collect(),
        )
    }
}

/// Splits on anything that is not alphanumeric and lowercases each token.
pub fn tokenize(text: &str) -> TermSequence {
    TermSequence(
        text.split(|c: char| !c.is_alphanumeric())
            .filter(|t| !t.is_empty())
            .map(str::to_lowercase)
            .collect(),
    )
}

/// Stable, seed-free code of a window of terms.
pub fn shingle_code<S: AsRef<str>>(terms: &[S]) -> u64 {
    let mut buf = Vec::with_capacity(terms.iter().map(|t| t.as_ref().len() + 1).sum());
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            buf.push(SHINGLE_SEPARATOR);
        }
        buf.extend_from_slice(t.as_ref().as_bytes());
    }
    xxh3_64(&buf)
}

/// Distinct shingle codes of a document, in first-occurrence order.
#[derive(Debug, Clone, Default)]
pub struct ShingleSet {
    codes: Vec<u64>,
    members: HashSet<u64>,
    window: usize,
    cap: usize,
}

impl ShingleSet {
    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn members(&self) -> &HashSet<u64> {
        &self.members
    }

    pub fn contains(&self, code: u64) -> bool {
        self.members.contains(&code)
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

impl PartialEq for ShingleSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

/// Slides a `window`-term window with stride 1, keeping the first `cap`
/// distinct shingles. A non-empty sequence shorter than the window yields a
/// single shingle of the whole sequence.
///
/// # Panics
///
/// Panics if `window` is zero.
pub fn shingle(seq: &TermSequence, window: usize, cap: usize) -> ShingleSet {
    assert!(window >= 1, "shingle window must be at least 1");
    let terms = seq.terms();
    let mut set = ShingleSet {
        codes: Vec::new(),
        members: HashSet::new(),
        window,
        cap,
    };
    if terms.is_empty() || cap == 0 {
        return set;
    }
    if terms.len() < window {
        let code = shingle_code(terms);
        set.codes.push(code);
        set.members.insert(code);
        return set;
    }
    for w in terms.windows(window) {
        let code = shingle_code(w);
        if set.members.insert(code) {
            set.codes.push(code);
            if set.codes.len() == cap {
                break;
            }
        }
    }
    set
}

/// Term counts; `total` is the sum of all counts and no count is zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermHistogram {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl TermHistogram {
    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn count(&self, term: &str) -> u64 {
        self.counts.get(term).copied().unwrap_or(0)
    }

    /// Number of distinct terms.
    pub fn vocabulary_len(&self) -> usize {
        self.counts.len()
    }

    pub fn add(&mut self, term: &str, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(term.to_string()).or_insert(0) += count;
        self.total += count;
    }

    pub fn merge(&mut self, other: &TermHistogram) {
        for (t, c) in &other.counts {
            self.add(t, *c);
        }
    }
}

impl<'a> FromIterator<(&'a str, u64)> for TermHistogram {
    fn from_iter<I: IntoIterator<Item = (&'a str, u64)>>(iter: I) -> Self {
        let mut h = TermHistogram::default();
        for (t, c) in iter {
            h.add(t, c);
        }
        h
    }
}

/// Counts term occurrences over the concatenation of `seqs`.
pub fn term_histogram<'a>(seqs: impl IntoIterator<Item = &'a TermSequence>) -> TermHistogram {
    let mut h = TermHistogram::default();
    for seq in seqs {
        for t in seq.terms() {
            h.add(t, 1);
        }
    }
    h
}

/// Two histograms laid over their merged, lexicographically sorted vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct AlignedCounts {
    pub support: Vec<String>,
    pub left: Vec<u64>,
    pub right: Vec<u64>,
}

impl AlignedCounts {
    pub fn new(h1: &TermHistogram, h2: &TermHistogram) -> Self {
        let mut support = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut a = h1.counts.iter().peekable();
        let mut b = h2.counts.iter().peekable();
        loop {
            let (term, l, r) = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some((ta, ca)), Some((tb, cb))) => match ta.cmp(tb) {
                    std::cmp::Ordering::Less => {
                        let out = ((*ta).clone(), **ca, 0);
                        a.next();
                        out
                    }
                    std::cmp::Ordering::Greater => {
                        let out = ((*tb).clone(), 0, **cb);
                        b.next();
                        out
                    }
                    std::cmp::Ordering::Equal => {
                        let out = ((*ta).clone(), **ca, **cb);
                        a.next();
                        b.next();
                        out
                    }
                },
                (Some((ta, ca)), None) => {
                    let out = ((*ta).clone(), **ca, 0);
                    a.next();
                    out
                }
                (None, Some((tb, cb))) => {
                    let out = ((*tb).clone(), 0, **cb);
                    b.next();
                    out
                }
            };
            support.push(term);
            left.push(l);
            right.push(r);
        }
        AlignedCounts {
            support,
            left,
            right,
        }
    }
}

/// Running sums of integer counts divided by their total; the last value is
/// exactly 1.
pub(crate) fn cumulative(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    let mut acc = 0u64;
    counts
        .iter()
        .map(|c| {
            acc += c;
            acc as f64 / total as f64
        })
        .collect()
}

/// Two CDFs aligned over a shared sorted support.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedCdf {
    pub support: Vec<String>,
    pub f_sigma: Vec<f64>,
    pub f_pi: Vec<f64>,
}

impl PairedCdf {
    /// Builds a pair directly from CDF arrays, checking their shape.
    pub fn from_arrays(support: Vec<String>, f_sigma: Vec<f64>, f_pi: Vec<f64>) -> Result<Self> {
        let well_formed = |f: &[f64]| {
            f.len() == support.len()
                && f.windows(2).all(|w| w[0] <= w[1])
                && f.last().is_some_and(|l| (l - 1.0).abs() <= 1e-12)
        };
        if !well_formed(&f_sigma) || !well_formed(&f_pi) {
            return Err(Error::InvalidConfig(
                "CDF arrays must be non-decreasing, end at 1, and match the support".into(),
            ));
        }
        Ok(PairedCdf {
            support,
            f_sigma,
            f_pi,
        })
    }
}

/// Aligns two histograms on the sorted union of their vocabularies and
/// accumulates each into a CDF.
pub fn paired_cdf(h1: &TermHistogram, h2: &TermHistogram) -> Result<PairedCdf> {
    if h1.is_empty() || h2.is_empty() {
        return Err(Error::EmptyHistogram);
    }
    let aligned = AlignedCounts::new(h1, h2);
    Ok(PairedCdf {
        f_sigma: cumulative(&aligned.left),
        f_pi: cumulative(&aligned.right),
        support: aligned.support,
    })
}
