use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{validate_market, write_judgments, write_snapshot_with_paths, Grade, JudgmentSet, ResultList};
use crate::error::{Error, Result};

use super::render_jsonl;

/// Fraction of queries whose two lists share exactly `common` URLs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapShare {
    pub common: usize,
    pub share: f64,
}

/// Synthetic corpus description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    pub queries: usize,
    #[serde(default = "default_list_len")]
    pub list_len: usize,
    #[serde(default = "default_engines")]
    pub engines: [String; 2],
    #[serde(default = "default_markets")]
    pub markets: Vec<String>,
    pub overlap: Vec<OverlapShare>,
    /// Cross-list near-duplicate pairs planted per affected query.
    #[serde(default)]
    pub duplicates_per_query: usize,
    /// Fraction of queries that receive duplicate pairs, among those with
    /// at least `duplicates_per_query` unshared URLs per list.
    #[serde(default = "one")]
    pub duplicate_rate: f64,
    #[serde(default = "default_doc_terms")]
    pub doc_terms: usize,
    /// Size of the word pool every document draws from.
    #[serde(default = "default_shared_vocabulary")]
    pub shared_vocabulary: usize,
    /// Probability that a token comes from the shared pool.
    #[serde(default = "default_shared_fraction")]
    pub shared_fraction: f64,
    /// Fraction of queries with graded results.
    #[serde(default)]
    pub judged_fraction: f64,
}

fn default_list_len() -> usize {
    10
}
fn default_engines() -> [String; 2] {
    ["alpha".into(), "beta".into()]
}
fn default_markets() -> Vec<String> {
    vec!["US".into()]
}
fn one() -> f64 {
    1.0
}
fn default_doc_terms() -> usize {
    120
}
fn default_shared_vocabulary() -> usize {
    500
}
fn default_shared_fraction() -> f64 {
    0.2
}

/// Distinct documents must not pass the vocabulary overlap gate.
const MAX_SHARED_FRACTION: f64 = 0.3;
const MIN_DOC_TERMS: usize = 20;

impl Profile {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let p: Profile = serde_json::from_slice(bytes).map_err(|e| Error::InvalidProfile(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&bytes).map_err(|e| e.in_file(path))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidProfile(msg));
        if self.queries == 0 || self.list_len == 0 {
            return bad("queries and list_len must be positive".into());
        }
        if self.engines[0] == self.engines[1] || self.engines.iter().any(|e| e.is_empty()) {
            return bad("engines must be two distinct non-empty names".into());
        }
        if self.markets.is_empty() {
            return bad("markets is empty".into());
        }
        for m in &self.markets {
            validate_market(m).or_else(bad)?;
        }
        if self.overlap.is_empty() {
            return bad("overlap is empty".into());
        }
        let mut sum = 0.0;
        for o in &self.overlap {
            if o.common > self.list_len {
                return bad(format!("common {} exceeds list_len {}", o.common, self.list_len));
            }
            if !(o.share >= 0.0) {
                return bad(format!("share {} is negative", o.share));
            }
            sum += o.share;
        }
        if self.duplicates_per_query > self.list_len {
            return bad("duplicates_per_query exceeds list_len".into());
        }
        if (sum - 1.0).abs() > 1e-9 {
            return bad(format!("overlap shares sum to {sum}, not 1"));
        }
        for (name, v) in [("duplicate_rate", self.duplicate_rate), ("judged_fraction", self.judged_fraction)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must be in [0, 1]"));
            }
        }
        if !(0.0..=MAX_SHARED_FRACTION).contains(&self.shared_fraction) {
            return bad(format!("shared_fraction must be in [0, {MAX_SHARED_FRACTION}]"));
        }
        if self.doc_terms < MIN_DOC_TERMS || self.shared_vocabulary == 0 {
            return bad(format!("doc_terms must be at least {MIN_DOC_TERMS} and shared_vocabulary positive"));
        }
        Ok(())
    }
}

/// Planted facts about one generated query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub query_id: String,
    pub market: String,
    pub list_len: usize,
    /// URLs both lists contain verbatim.
    pub common: usize,
    /// `(first-list URL, second-list URL)` of each near-duplicate pair.
    pub duplicates: Vec<(String, String)>,
}

impl GroundTruth {
    /// Shared names once every planted duplicate is bound to its original.
    pub fn common_after(&self) -> usize {
        self.common + self.duplicates.len()
    }

    /// `(intersection, union)` of `J_url` before and after normalization.
    pub fn j_url_counts(&self) -> [(usize, usize); 2] {
        let l = self.list_len;
        [
            (self.common, 2 * l - self.common),
            (self.common_after(), 2 * l - self.common_after()),
        ]
    }
}

/// Splits `total` items by share with the largest-remainder rule.
fn apportion(total: usize, shares: &[OverlapShare]) -> Vec<usize> {
    let exact: Vec<f64> = shares.iter().map(|s| s.share * total as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut left = total - counts.iter().sum::<usize>().min(total);
    for &i in order.iter().cycle().take(left) {
        counts[i] += 1;
        left -= 1;
    }
    debug_assert_eq!(left, 0);
    counts
}

struct Writer<'a> {
    profile: &'a Profile,
    rng: ChaCha8Rng,
    docs: BTreeMap<String, String>,
    next_doc: usize,
}

impl Writer<'_> {
    fn body(&mut self) -> Vec<String> {
        let id = self.next_doc;
        self.next_doc += 1;
        let own = (self.profile.doc_terms / 2).max(1);
        (0..self.profile.doc_terms)
            .map(|_| {
                if self.rng.gen_bool(self.profile.shared_fraction) {
                    format!("common{}", self.rng.gen_range(0..self.profile.shared_vocabulary))
                } else {
                    format!("d{id}w{}", self.rng.gen_range(0..own))
                }
            })
            .collect()
    }

    /// A copy with a few tokens replaced by fresh ones.
    fn near_copy(&mut self, src: &[String]) -> Vec<String> {
        let id = self.next_doc;
        self.next_doc += 1;
        let mut out = src.to_vec();
        let k = (src.len() / 50).max(1);
        for (j, i) in index::sample(&mut self.rng, src.len(), k).into_iter().enumerate() {
            out[i] = format!("m{id}w{j}");
        }
        out
    }

    fn add_doc(&mut self, name: &str, tokens: &[String]) -> String {
        let mut text = tokens.join(" ");
        text.push('\n');
        self.docs.insert(format!("{name}.txt"), text);
        format!("../docs/{name}.txt")
    }
}

/// Writes a synthetic corpus to `out` and returns its ground truth.
///
/// Layout: `snapshots/<query>__<engine>.jsonl`, `docs/<name>.txt`,
/// `ground_truth.jsonl`, and `judgments.jsonl` when any query is judged.
pub fn cmd_generate(profile: &Profile, seed: u64, out: &Path) -> Result<Vec<GroundTruth>> {
    profile.validate()?;
    let p = profile;
    let l = p.list_len;
    let mut w = Writer {
        profile: p,
        rng: ChaCha8Rng::seed_from_u64(seed),
        docs: BTreeMap::new(),
        next_doc: 0,
    };

    let mut commons: Vec<usize> = apportion(p.queries, &p.overlap)
        .into_iter()
        .zip(&p.overlap)
        .flat_map(|(n, o)| std::iter::repeat(o.common).take(n))
        .collect();
    commons.shuffle(&mut w.rng);
    let eligible: Vec<usize> = if p.duplicates_per_query == 0 {
        Vec::new()
    } else {
        (0..p.queries).filter(|&q| commons[q] + p.duplicates_per_query <= l).collect()
    };
    let n_dup = (p.duplicate_rate * eligible.len() as f64).round() as usize;
    let mut dup_queries = vec![false; p.queries];
    for i in index::sample(&mut w.rng, eligible.len(), n_dup) {
        dup_queries[eligible[i]] = true;
    }
    let n_judged = (p.judged_fraction * p.queries as f64).round() as usize;
    let mut judged = vec![false; p.queries];
    for i in index::sample(&mut w.rng, p.queries, n_judged) {
        judged[i] = true;
    }

    let mut snapshots: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    let mut truth = Vec::with_capacity(p.queries);
    let mut judgments = JudgmentSet::new();
    for (q, &common) in commons.iter().enumerate() {
        let qid = format!("q{q:05}");
        let market = p.markets[q % p.markets.len()].clone();

        // (url, doc_path, tokens) per list, before shuffling.
        let mut shared = Vec::new();
        for j in 0..common {
            let tokens = w.body();
            let path = w.add_doc(&format!("{qid}-c{j}"), &tokens);
            shared.push((format!("https://shared{j}.example.com/{qid}"), path, tokens));
        }
        let mut own: [Vec<(String, String, Vec<String>)>; 2] = Default::default();
        for (side, engine) in p.engines.iter().enumerate() {
            for j in 0..l - common {
                let tokens = w.body();
                let path = w.add_doc(&format!("{qid}-{engine}-{j}"), &tokens);
                own[side].push((format!("https://{engine}{j}.example.org/{qid}"), path, tokens));
            }
        }
        let mut duplicates = Vec::new();
        if dup_queries[q] {
            let k = p.duplicates_per_query;
            let sources = index::sample(&mut w.rng, l - common, k).into_vec();
            let targets = index::sample(&mut w.rng, l - common, k).into_vec();
            for (j, (s, t)) in sources.into_iter().zip(targets).enumerate() {
                let tokens = w.near_copy(&own[0][s].2);
                let path = w.add_doc(&format!("{qid}-m{j}"), &tokens);
                let url = format!("https://mirror{j}.example.net/{qid}");
                duplicates.push((own[0][s].0.clone(), url.clone()));
                own[1][t] = (url, path, tokens);
            }
        }

        let is_judged = judged[q];
        for (side, engine) in p.engines.iter().enumerate() {
            let mut items: Vec<(String, String)> = shared
                .iter()
                .chain(&own[side])
                .map(|(u, path, _)| (u.clone(), path.clone()))
                .collect();
            items.shuffle(&mut w.rng);
            let urls: Vec<&str> = items.iter().map(|(u, _)| u.as_str()).collect();
            let mut list = ResultList::from_urls(&qid, engine, &urls);
            list.market = market.clone();
            let paths: Vec<Option<String>> = items.iter().map(|(_, p)| Some(p.clone())).collect();
            snapshots.insert(format!("{qid}__{engine}.jsonl"), write_snapshot_with_paths(&list, &paths));
            if is_judged {
                for u in urls {
                    if judgments.get(&qid, u).is_none() {
                        let grade = Grade::ALL[w.rng.gen_range(0..Grade::ALL.len())];
                        judgments.insert(&qid, u, grade)?;
                    }
                }
            }
        }
        truth.push(GroundTruth {
            query_id: qid,
            market,
            list_len: l,
            common,
            duplicates,
        });
    }

    let write = |rel: &str, bytes: &[u8]| -> Result<()> {
        let path = out.join(rel);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))
    };
    for (name, bytes) in &snapshots {
        write(&format!("snapshots/{name}"), bytes)?;
    }
    for (name, text) in &w.docs {
        write(&format!("docs/{name}"), text.as_bytes())?;
    }
    write("ground_truth.jsonl", &render_jsonl(&truth)?)?;
    if !judgments.is_empty() {
        write("judgments.jsonl", &write_judgments(&judgments))?;
    }
    Ok(truth)
}

/// Reads a ground-truth sidecar written by [`cmd_generate`].
pub fn read_ground_truth(path: &Path) -> Result<Vec<GroundTruth>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| {
                Error::Schema {
                    line: i + 1,
                    msg: e.to_string(),
                }
                .in_file(path)
            })
        })
        .collect()
}
