//! Stratified query sampling from a frequency-annotated query log.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use xxhash_rust::xxh3::xxh3_64;

use crate::corpus::{validate_market, QueryRecord, Stratum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogRecord {
    pub text: String,
    pub market: String,
    pub count: u64,
    pub timestamp: i64,
}

/// Query log with one record per `(market, text)`.
///
/// Repeated records are merged: counts add up and the latest timestamp wins.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLog {
    records: BTreeMap<(String, String), LogRecord>,
}

impl QueryLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rec: LogRecord) -> Result<()> {
        if rec.count == 0 {
            return Err(Error::Schema {
                line: 0,
                msg: format!("query {:?} has count 0", rec.text),
            });
        }
        validate_market(&rec.market).map_err(|msg| Error::Schema { line: 0, msg })?;
        let key = (rec.market.clone(), rec.text.clone());
        match self.records.get_mut(&key) {
            Some(r) => {
                r.count += rec.count;
                r.timestamp = r.timestamp.max(rec.timestamp);
            }
            None => {
                self.records.insert(key, rec);
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records of one market, ordered by text.
    pub fn market<'a>(&'a self, market: &'a str) -> impl Iterator<Item = &'a LogRecord> + 'a {
        self.records
            .range((market.to_string(), String::new())..)
            .take_while(move |((m, _), _)| m == market)
            .map(|(_, r)| r)
    }

    pub fn records(&self) -> impl Iterator<Item = &LogRecord> {
        self.records.values()
    }
}

/// Parses a JSON Lines query log.
pub fn load_query_log(bytes: &[u8]) -> Result<QueryLog> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })?;
    let mut log = QueryLog::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let rec: LogRecord = serde_json::from_value(value).map_err(|e| Error::Schema {
            line: line_no,
            msg: e.to_string(),
        })?;
        log.push(rec).map_err(|e| match e {
            Error::Schema { msg, .. } => Error::Schema { line: line_no, msg },
            other => other,
        })?;
    }
    Ok(log)
}

pub fn read_query_log(path: &Path) -> Result<QueryLog> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    load_query_log(&bytes).map_err(|e| e.in_file(path))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataConfig {
    /// Counts at or above `hi` are highly frequent.
    pub hi: u64,
    /// Counts below `lo` are infrequent.
    pub lo: u64,
    pub per_stratum: usize,
    pub seed: u64,
    /// Query texts drawn in earlier samples.
    pub exclude: HashSet<String>,
}

impl StrataConfig {
    pub fn new(per_stratum: usize, seed: u64) -> Self {
        StrataConfig {
            hi: 1000,
            lo: 10,
            per_stratum,
            seed,
            exclude: HashSet::new(),
        }
    }

    pub fn stratum(&self, count: u64) -> Stratum {
        if count >= self.hi {
            Stratum::HighlyFrequent
        } else if count >= self.lo {
            Stratum::Frequent
        } else {
            Stratum::Infrequent
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lo < 1 || self.hi <= self.lo {
            return Err(Error::InvalidConfig(format!(
                "strata need hi > lo >= 1, got hi={} lo={}",
                self.hi, self.lo
            )));
        }
        if self.per_stratum < 1 {
            return Err(Error::InvalidConfig("per_stratum must be at least 1".into()));
        }
        Ok(())
    }
}

/// Stable query id derived from market and text.
pub fn query_id(market: &str, text: &str) -> String {
    format!("{market}-{:016x}", xxh3_64(text.as_bytes()))
}

/// Draws up to `per_stratum` queries uniformly without replacement from each
/// stratum of one market.
///
/// Each stratum uses its own random stream, so its draw does not depend on
/// the size of the others. Output is grouped by stratum, then ordered by text.
pub fn stratified_sample(log: &QueryLog, market: &str, cfg: &StrataConfig) -> Result<Vec<QueryRecord>> {
    cfg.validate()?;
    let mut strata: BTreeMap<Stratum, Vec<&LogRecord>> = BTreeMap::new();
    let mut any = false;
    for rec in log.market(market) {
        any = true;
        if !cfg.exclude.contains(&rec.text) {
            strata.entry(cfg.stratum(rec.count)).or_default().push(rec);
        }
    }
    if !any {
        return Err(Error::EmptyMarket(market.to_string()));
    }

    let mut out = Vec::new();
    for (stream, stratum) in Stratum::ALL.into_iter().enumerate() {
        let Some(pool) = strata.get(&stratum) else { continue };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream as u64);
        let k = cfg.per_stratum.min(pool.len());
        let mut picked = index::sample(&mut rng, pool.len(), k).into_vec();
        picked.sort_unstable();
        for i in picked {
            let r = pool[i];
            out.push(QueryRecord::new(
                query_id(&r.market, &r.text),
                r.text.clone(),
                r.market.clone(),
                stratum,
                r.timestamp,
            )?);
        }
    }
    Ok(out)
}
