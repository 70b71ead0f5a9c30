//! Stratified, seeded query sampling from a query log.

use serpsim::sampling::{stratified_sample, LogRecord, QueryLog, StrataConfig};

fn main() -> serpsim::Result<()> {
    let mut log = QueryLog::new();
    for i in 0..200u64 {
        log.push(LogRecord {
            text: format!("query {i}"),
            market: "US".into(),
            count: 1 + i * i / 10,
            timestamp: i as i64,
        })?;
    }
    let cfg = StrataConfig::new(3, 42);
    for rec in stratified_sample(&log, "US", &cfg)? {
        println!("{:?} {} {:?}", rec.stratum, rec.id, rec.text);
    }
    Ok(())
}
