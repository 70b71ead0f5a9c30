//! Generating a seeded corpus and reading back its overlap histogram.

use serpsim::harness::{cmd_corpus, cmd_generate, HarnessConfig, Profile};

fn main() -> serpsim::Result<()> {
    let profile = Profile::from_json(
        br#"{
            "queries": 40,
            "markets": ["US", "DE"],
            "overlap": [{"common": 0, "share": 0.5}, {"common": 3, "share": 0.3}, {"common": 7, "share": 0.2}],
            "duplicates_per_query": 1,
            "duplicate_rate": 0.5
        }"#,
    )?;
    let dir = std::env::temp_dir().join(format!("serpsim-example-{}", std::process::id()));
    let truth = cmd_generate(&profile, 1, &dir)?;
    let planted = truth.iter().filter(|t| !t.duplicates.is_empty()).count();
    println!("{} queries, {planted} with a planted duplicate", truth.len());

    let out = cmd_corpus(&dir, &HarnessConfig::default())?;
    print!("{}", String::from_utf8_lossy(&out.histogram.to_csv()?));
    let raised = out
        .reports
        .iter()
        .filter(|r| r.normalization.intersection_after > r.normalization.intersection_before)
        .count();
    println!("normalization raised the intersection on {raised} queries");
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}
