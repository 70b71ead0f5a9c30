//! Set and rank measures on two short partial lists.

use serpsim::rank::{footrule, kendall, WeightFn};
use serpsim::sets::jaccard_of;

fn main() -> serpsim::Result<()> {
    let sigma = ["a", "b", "d"];
    let pi = ["b", "e", "f"];

    let j = jaccard_of(sigma, pi);
    println!("jaccard: {}/{} = {}", j.intersection, j.union, j.value);

    for (label, w) in [("iota", WeightFn::Iota), ("dcgw", WeightFn::Dcgw)] {
        let s = footrule(&sigma, &pi, &w)?;
        let k = kendall(&sigma, &pi, &w)?;
        println!("{label}: footrule raw {:.4} norm {:+.4}, kendall raw {:.4} norm {:+.4}", s.raw, s.normalized, k.raw, k.normalized);
    }

    // Custom weights only need to be positive at every rank.
    let steep = WeightFn::custom(|r| 1.0 / (r * r) as f64);
    println!("steep footrule: {:+.4}", footrule(&sigma, &pi, &steep)?.normalized);
    Ok(())
}
