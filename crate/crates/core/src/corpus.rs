//! Domain types for queries, result snapshots, documents and editorial
//! judgments, plus the line-oriented file formats they are stored in.
//!
//! Every file is UTF-8 JSON Lines; see `docs/FORMATS.md` for the field
//! reference. Loading is a pure function of the input bytes (and, for
//! snapshots, of the [`DocumentSource`] used to resolve `doc_path`).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Results retained per list unless configured otherwise.
pub const DEFAULT_TOP_N: usize = 10;

/// Query frequency band used by stratified sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stratum {
    HighlyFrequent,
    Frequent,
    Infrequent,
}

impl Stratum {
    pub const ALL: [Stratum; 3] = [Stratum::HighlyFrequent, Stratum::Frequent, Stratum::Infrequent];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub id: String,
    pub text: String,
    pub market: String,
    pub stratum: Stratum,
    pub timestamp: i64,
}

impl QueryRecord {
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        market: impl Into<String>,
        stratum: Stratum,
        timestamp: i64,
    ) -> Result<Self> {
        let id = id.into();
        let market = market.into();
        if id.is_empty() {
            return Err(Error::Schema {
                line: 0,
                msg: "query id is empty".into(),
            });
        }
        validate_market(&market).map_err(|msg| Error::Schema { line: 0, msg })?;
        Ok(QueryRecord {
            id,
            text: text.into(),
            market,
            stratum,
            timestamp,
        })
    }
}

pub(crate) fn validate_market(market: &str) -> std::result::Result<(), String> {
    if market.len() == 2 && market.bytes().all(|b| b.is_ascii_uppercase()) {
        Ok(())
    } else {
        Err(format!("market {market:?} is not a two-letter uppercase code"))
    }
}

/// Extracted plain text of a landing page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentText {
    pub url: String,
    pub body: String,
    pub byte_len: usize,
}

impl DocumentText {
    pub fn new(url: impl Into<String>, body: impl Into<String>) -> Self {
        let body = body.into();
        DocumentText {
            url: url.into(),
            byte_len: body.len(),
            body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultEntry {
    /// 1-based position in the list.
    pub rank: usize,
    pub url: String,
    pub doc: Option<Arc<DocumentText>>,
}

/// Ranked results one engine returned for one query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultList {
    pub query_id: String,
    pub engine: String,
    pub market: String,
    pub fetched_at: i64,
    pub entries: Vec<ResultEntry>,
}

impl ResultList {
    /// Builds a list from URLs in rank order, without documents.
    pub fn from_urls<S: AsRef<str>>(query_id: &str, engine: &str, urls: &[S]) -> Self {
        Self::assemble(
            query_id,
            engine,
            urls.iter().map(|u| (u.as_ref().to_string(), None)),
        )
    }

    /// Builds a list from `(url, body)` pairs in rank order.
    pub fn from_documents<U: AsRef<str>, B: AsRef<str>>(
        query_id: &str,
        engine: &str,
        docs: &[(U, B)],
    ) -> Self {
        Self::assemble(
            query_id,
            engine,
            docs.iter().map(|(u, b)| {
                let url = u.as_ref().to_string();
                let doc = Arc::new(DocumentText::new(url.clone(), b.as_ref()));
                (url, Some(doc))
            }),
        )
    }

    fn assemble(
        query_id: &str,
        engine: &str,
        items: impl Iterator<Item = (String, Option<Arc<DocumentText>>)>,
    ) -> Self {
        ResultList {
            query_id: query_id.to_string(),
            engine: engine.to_string(),
            market: "US".to_string(),
            fetched_at: 0,
            entries: items
                .enumerate()
                .map(|(i, (url, doc))| ResultEntry {
                    rank: i + 1,
                    url,
                    doc,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The first `n` entries, or all of them when the list is shorter.
    pub fn top(&self, n: usize) -> &[ResultEntry] {
        &self.entries[..n.min(self.entries.len())]
    }

    pub fn urls(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.url.as_str())
    }
}

/// Editorial relevance grade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grade {
    Bad = 1,
    Fair = 2,
    Good = 3,
    Excellent = 4,
    Perfect = 5,
}

impl Grade {
    pub const ALL: [Grade; 5] = [Grade::Bad, Grade::Fair, Grade::Good, Grade::Excellent, Grade::Perfect];

    /// Numeric level 1 (Bad) through 5 (Perfect).
    pub fn level(self) -> u32 {
        self as u32
    }

    pub fn label(self) -> &'static str {
        match self {
            Grade::Bad => "Bad",
            Grade::Fair => "Fair",
            Grade::Good => "Good",
            Grade::Excellent => "Excellent",
            Grade::Perfect => "Perfect",
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Grade {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Grade::ALL
            .into_iter()
            .find(|g| g.label() == s)
            .ok_or_else(|| format!("unknown grade {s:?}"))
    }
}

/// Judgments keyed by `(query_id, url)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JudgmentSet {
    grades: BTreeMap<(String, String), Grade>,
}

impl JudgmentSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a judgment; repeated keys are rejected.
    pub fn insert(&mut self, query_id: &str, url: &str, grade: Grade) -> Result<()> {
        let key = (query_id.to_string(), url.to_string());
        if self.grades.contains_key(&key) {
            return Err(Error::DuplicateKey {
                query_id: key.0,
                url: key.1,
            });
        }
        self.grades.insert(key, grade);
        Ok(())
    }

    pub fn get(&self, query_id: &str, url: &str) -> Option<Grade> {
        self.grades
            .get(&(query_id.to_string(), url.to_string()))
            .copied()
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn has_query(&self, query_id: &str) -> bool {
        self.grades
            .range((query_id.to_string(), String::new())..)
            .next()
            .is_some_and(|((q, _), _)| q == query_id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, Grade)> {
        self.grades
            .iter()
            .map(|((q, u), g)| (q.as_str(), u.as_str(), *g))
    }
}

/// Resolves the `doc_path` of a snapshot entry to extracted text.
///
/// Returning `None` models a fetch failure; the entry is kept without a body.
pub trait DocumentSource {
    fn fetch(&self, url: &str, doc_path: &str) -> Option<String>;
}

/// Source that never resolves anything.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoDocuments;

impl DocumentSource for NoDocuments {
    fn fetch(&self, _url: &str, _doc_path: &str) -> Option<String> {
        None
    }
}

/// Reads `doc_path` relative to a root directory.
#[derive(Debug, Clone)]
pub struct DirDocuments {
    root: PathBuf,
}

impl DirDocuments {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DirDocuments { root: root.into() }
    }
}

impl DocumentSource for DirDocuments {
    fn fetch(&self, _url: &str, doc_path: &str) -> Option<String> {
        std::fs::read_to_string(self.root.join(doc_path)).ok()
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotHeader {
    query_id: String,
    engine: String,
    market: String,
    fetched_at: i64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotEntry {
    rank: usize,
    url: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    doc_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JudgmentRow {
    query_id: String,
    url: String,
    grade: String,
}

/// Non-blank lines with their 1-based line numbers, parsed as JSON values.
fn json_lines(bytes: &[u8]) -> Result<Vec<(usize, Value)>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("input is not UTF-8: {e}"),
    })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str::<Value>(l)
                .map(|v| (i + 1, v))
                .map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })
        })
        .collect()
}

fn record<T: serde::de::DeserializeOwned>(line: usize, value: Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Schema {
        line,
        msg: e.to_string(),
    })
}

/// Parses a snapshot file, keeping the best `top_n` ranks renumbered `1..=m`.
pub fn load_snapshot(bytes: &[u8], top_n: usize, docs: &dyn DocumentSource) -> Result<ResultList> {
    if top_n == 0 {
        return Err(Error::InvalidConfig("top-n must be at least 1".into()));
    }
    let mut lines = json_lines(bytes)?.into_iter();
    let (hline, hvalue) = lines.next().ok_or(Error::Schema {
        line: 0,
        msg: "missing header record".into(),
    })?;
    let header: SnapshotHeader = record(hline, hvalue)?;
    if header.query_id.is_empty() {
        return Err(Error::Schema {
            line: hline,
            msg: "empty query_id".into(),
        });
    }
    validate_market(&header.market).map_err(|msg| Error::Schema { line: hline, msg })?;

    let mut raw: Vec<(usize, SnapshotEntry)> = Vec::new();
    for (line, value) in lines {
        let entry: SnapshotEntry = record(line, value)?;
        if entry.rank == 0 {
            return Err(Error::Schema {
                line,
                msg: "rank must be at least 1".into(),
            });
        }
        if entry.url.is_empty() {
            return Err(Error::Schema {
                line,
                msg: "empty url".into(),
            });
        }
        if entry.doc_path.is_some() && entry.text.is_some() {
            return Err(Error::Schema {
                line,
                msg: "entry has both doc_path and text".into(),
            });
        }
        raw.push((line, entry));
    }
    raw.sort_by_key(|(_, e)| e.rank);
    if let Some(w) = raw.windows(2).find(|w| w[0].1.rank == w[1].1.rank) {
        return Err(Error::Schema {
            line: w[1].0,
            msg: format!("duplicate rank {}", w[1].1.rank),
        });
    }

    let entries = raw
        .into_iter()
        .take(top_n)
        .enumerate()
        .map(|(i, (_, e))| {
            let body = match (&e.text, &e.doc_path) {
                (Some(text), _) => Some(text.clone()),
                (None, Some(path)) => docs.fetch(&e.url, path),
                (None, None) => None,
            };
            let doc = body.map(|b| Arc::new(DocumentText::new(e.url.clone(), b)));
            ResultEntry {
                rank: i + 1,
                url: e.url,
                doc,
            }
        })
        .collect();

    Ok(ResultList {
        query_id: header.query_id,
        engine: header.engine,
        market: header.market,
        fetched_at: header.fetched_at,
        entries,
    })
}

/// Reads a snapshot from disk, resolving `doc_path` relative to its directory.
pub fn read_snapshot(path: &Path, top_n: usize) -> Result<ResultList> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let root = path.parent().unwrap_or_else(|| Path::new("."));
    load_snapshot(&bytes, top_n, &DirDocuments::new(root)).map_err(|e| e.in_file(path))
}

/// Serializes a list with document bodies inlined.
pub fn write_snapshot(list: &ResultList) -> Vec<u8> {
    let header = SnapshotHeader {
        query_id: list.query_id.clone(),
        engine: list.engine.clone(),
        market: list.market.clone(),
        fetched_at: list.fetched_at,
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for e in &list.entries {
        let row = SnapshotEntry {
            rank: e.rank,
            url: e.url.clone(),
            doc_path: None,
            text: e.doc.as_ref().map(|d| d.body.clone()),
        };
        out.push_str(&serde_json::to_string(&row).expect("entry serializes"));
        out.push('\n');
    }
    out.into_bytes()
}

/// Serializes a list whose bodies live in separate files.
///
/// `doc_paths[i]` is written as the `doc_path` of entry `i` when present.
pub fn write_snapshot_with_paths(list: &ResultList, doc_paths: &[Option<String>]) -> Vec<u8> {
    let header = SnapshotHeader {
        query_id: list.query_id.clone(),
        engine: list.engine.clone(),
        market: list.market.clone(),
        fetched_at: list.fetched_at,
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for (i, e) in list.entries.iter().enumerate() {
        let row = SnapshotEntry {
            rank: e.rank,
            url: e.url.clone(),
            doc_path: doc_paths.get(i).cloned().flatten(),
            text: None,
        };
        out.push_str(&serde_json::to_string(&row).expect("entry serializes"));
        out.push('\n');
    }
    out.into_bytes()
}

/// Parses a judgment file.
pub fn load_judgments(bytes: &[u8]) -> Result<JudgmentSet> {
    let mut set = JudgmentSet::new();
    for (line, value) in json_lines(bytes)? {
        let row: JudgmentRow = record(line, value)?;
        let grade: Grade = row.grade.parse().map_err(|msg| Error::Parse { line, msg })?;
        set.insert(&row.query_id, &row.url, grade)?;
    }
    Ok(set)
}

pub fn read_judgments(path: &Path) -> Result<JudgmentSet> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    load_judgments(&bytes).map_err(|e| e.in_file(path))
}

pub fn write_judgments(set: &JudgmentSet) -> Vec<u8> {
    let mut out = String::new();
    for (q, u, g) in set.iter() {
        let row = JudgmentRow {
            query_id: q.to_string(),
            url: u.to_string(),
            grade: g.label().to_string(),
        };
        out.push_str(&serde_json::to_string(&row).expect("row serializes"));
        out.push('\n');
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snapshot(n: usize) -> String {
        let mut s = String::from(
            r#"{"query_id":"q1","engine":"alpha","market":"US","fetched_at":1290000000}"#,
        );
        s.push('\n');
        for r in 1..=n {
            s.push_str(&format!(
                "{{\"rank\":{r},\"url\":\"http://e.com/{r}\",\"text\":\"doc {r}\"}}\n"
            ));
        }
        s
    }

    #[test]
    fn loads_ten_entries() {
        let list = load_snapshot(snapshot(10).as_bytes(), 10, &NoDocuments).unwrap();
        assert_eq!(list.len(), 10);
        assert_eq!(list.engine, "alpha");
        assert_eq!(list.entries[0].doc.as_ref().unwrap().body, "doc 1");
    }

    #[test]
    fn truncates_to_top_n() {
        let list = load_snapshot(snapshot(14).as_bytes(), 10, &NoDocuments).unwrap();
        assert_eq!(list.len(), 10);
        let ranks: Vec<_> = list.entries.iter().map(|e| e.rank).collect();
        assert_eq!(ranks, (1..=10).collect::<Vec<_>>());
        assert_eq!(list.entries[9].url, "http://e.com/10");
    }

    #[test]
    fn renumbers_sparse_ranks_in_order() {
        let s = "{\"query_id\":\"q\",\"engine\":\"e\",\"market\":\"FR\",\"fetched_at\":0}\n\
                 {\"rank\":7,\"url\":\"c\"}\n{\"rank\":2,\"url\":\"a\"}\n{\"rank\":4,\"url\":\"b\"}\n";
        let list = load_snapshot(s.as_bytes(), 10, &NoDocuments).unwrap();
        assert_eq!(list.urls().collect::<Vec<_>>(), ["a", "b", "c"]);
        assert_eq!(list.entries[2].rank, 3);
        assert!(list.entries[0].doc.is_none());
    }

    #[test]
    fn duplicate_rank_is_schema_error() {
        let s = snapshot(4).replace("\"rank\":3", "\"rank\":2");
        let err = load_snapshot(s.as_bytes(), 10, &NoDocuments).unwrap_err();
        assert!(matches!(err, Error::Schema { .. }), "{err}");
    }

    #[test]
    fn empty_url_and_missing_field_are_schema_errors() {
        let s = snapshot(2).replace("http://e.com/2", "");
        assert!(matches!(
            load_snapshot(s.as_bytes(), 10, &NoDocuments),
            Err(Error::Schema { .. })
        ));
        let s = snapshot(2).replace("\"engine\":\"alpha\",", "");
        assert!(matches!(
            load_snapshot(s.as_bytes(), 10, &NoDocuments),
            Err(Error::Schema { line: 1, .. })
        ));
    }

    #[test]
    fn malformed_json_is_parse_error() {
        let s = snapshot(2) + "{not json\n";
        assert!(matches!(
            load_snapshot(s.as_bytes(), 10, &NoDocuments),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn bad_market_rejected() {
        let s = snapshot(1).replace("\"US\"", "\"us\"");
        assert!(matches!(
            load_snapshot(s.as_bytes(), 10, &NoDocuments),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn snapshot_round_trip() {
        let list = load_snapshot(snapshot(5).as_bytes(), 10, &NoDocuments).unwrap();
        let again = load_snapshot(&write_snapshot(&list), 10, &NoDocuments).unwrap();
        assert_eq!(list, again);
    }

    #[test]
    fn judgments_parse_grades() {
        let s = "{\"query_id\":\"q1\",\"url\":\"u1\",\"grade\":\"Perfect\"}\n";
        let set = load_judgments(s.as_bytes()).unwrap();
        assert_eq!(set.get("q1", "u1"), Some(Grade::Perfect));
        assert_eq!(set.get("q1", "u1").unwrap().level(), 5);
        assert!(set.has_query("q1"));
        assert!(!set.has_query("q"));
    }

    #[test]
    fn empty_judgment_file() {
        assert!(load_judgments(b"").unwrap().is_empty());
    }

    #[test]
    fn unknown_grade_is_parse_error() {
        let s = "{\"query_id\":\"q1\",\"url\":\"u1\",\"grade\":\"Great\"}\n";
        assert!(matches!(load_judgments(s.as_bytes()), Err(Error::Parse { .. })));
    }

    #[test]
    fn repeated_judgment_key_rejected() {
        let row = "{\"query_id\":\"q1\",\"url\":\"u1\",\"grade\":\"Bad\"}\n";
        let s = format!("{row}{row}");
        assert!(matches!(
            load_judgments(s.as_bytes()),
            Err(Error::DuplicateKey { .. })
        ));
    }

    #[test]
    fn query_record_validation() {
        assert!(QueryRecord::new("q", "cats", "JP", Stratum::Frequent, 0).is_ok());
        assert!(QueryRecord::new("", "cats", "JP", Stratum::Frequent, 0).is_err());
        assert!(QueryRecord::new("q", "cats", "JPN", Stratum::Frequent, 0).is_err());
    }
}
