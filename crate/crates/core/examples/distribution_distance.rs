//! Term-distribution distances with permutation p-values and the consensus vote.

use serpsim::corpus::DocumentText;
use serpsim::dist::{consensus_duplicate, phi, suite, SuiteConfig};
use serpsim::text::{paired_cdf, term_histogram, tokenize};

fn main() -> serpsim::Result<()> {
    let a = "a b e a e";
    let b = "h a e a";
    let ha = term_histogram([&tokenize(a)]);
    let hb = term_histogram([&tokenize(b)]);
    println!("phi = {:.5}", phi(&paired_cdf(&ha, &hb)?));

    let cfg = SuiteConfig::with_seed(7);
    for r in suite(&ha, &hb, &cfg)? {
        println!("{:>20} distance {:.4} p {:.3} gated {}", r.measure.name(), r.distance, r.p_value, r.gated);
    }

    // Same multiset of terms in another order: every measure sees identical histograms.
    let x = DocumentText::new("x", "a b c a b c");
    let y = DocumentText::new("y", "c b a c b a");
    let v = consensus_duplicate(&x, &y, &cfg);
    println!("consensus: {} of 10 votes, duplicate {}", v.votes_duplicate, v.is_duplicate);
    Ok(())
}
