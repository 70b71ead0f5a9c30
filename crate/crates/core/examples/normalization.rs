//! Binding duplicate documents to one name before URL comparison.

use serpsim::corpus::ResultList;
use serpsim::normalize::{exact_intersection, normalize_lists, NormalizeConfig};

fn body(seed: &str) -> String {
    (0..60).map(|i| format!("{seed}{i}")).collect::<Vec<_>>().join(" ")
}

fn main() {
    let (x, y, z, w) = (body("x"), body("y"), body("z"), body("w"));
    let sigma = ResultList::from_documents("q", "alpha", &[("a.com", &x), ("b.com", &y), ("c.com", &z)]);
    // A mirror of b.com, an exact hit on a.com, and a within-list repeat.
    let pi = ResultList::from_documents("q", "beta", &[("mirror.net/b", &y), ("a.com", &x), ("d.com", &w), ("d-copy.com", &w)]);

    let n = normalize_lists(&sigma, &pi, &NormalizeConfig::default());
    for list in [&n.sigma_tilde, &n.pi_tilde] {
        println!("{}: {:?}", list.engine, list.slots_top(list.len()));
    }
    println!("intersection {} -> {}", exact_intersection(&sigma, &pi), n.intersection());
    println!("J_url,10 = {}", n.j_url(10).value);
}
