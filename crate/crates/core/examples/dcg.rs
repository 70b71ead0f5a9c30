//! DCG over graded judgments and the relative DCG of two engines.

use serpsim::corpus::{Grade, JudgmentSet, ResultList};
use serpsim::quality::{dcg, relative_dcg, DcgScore, DEFAULT_DCG_N};

fn main() -> serpsim::Result<()> {
    let mut j = JudgmentSet::new();
    for (url, g) in [("a", Grade::Perfect), ("b", Grade::Good), ("c", Grade::Bad), ("d", Grade::Excellent)] {
        j.insert("q", url, g)?;
    }
    let first = ResultList::from_urls("q", "alpha", &["a", "b", "c"]);
    let second = ResultList::from_urls("q", "beta", &["c", "d", "a", "unjudged"]);

    let d1 = dcg(&first, &j, DEFAULT_DCG_N);
    let d2 = dcg(&second, &j, DEFAULT_DCG_N);
    println!("DCG@{DEFAULT_DCG_N}: alpha {d1:.4}, beta {d2:.4}");
    println!("relative DCG: {:+.4}", relative_dcg("q", d1, d2));

    j.insert("q2", "e", Grade::Fair)?;
    let other = ResultList::from_urls("q2", "alpha", &["x", "e"]);
    let score = DcgScore::over([&first, &other], &j, 3);
    println!("alpha per query: {:?}, mean {:.4}", score.per_query, score.mean);
    Ok(())
}
