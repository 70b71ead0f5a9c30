//! Tokenizing, shingling, and shingle-based Jaccard between documents.

use serpsim::corpus::{DocumentText, ResultList};
use serpsim::normalize::duplicate_by_shingles_with;
use serpsim::sets::j_term;
use serpsim::text::{shingle, tokenize, ShingleParams};

fn main() -> serpsim::Result<()> {
    let original = "The quick brown fox jumps over the lazy dog near the river bank today";
    let edited = "The quick brown fox jumps over the lazy cat near the river bank today";
    let reversed = "today bank river the near dog lazy the over jumps fox brown quick The";

    let seq = tokenize(original);
    println!("terms: {:?}", seq.terms());
    println!("3-shingles: {}", shingle(&seq, 3, 1000).len());

    let p = ShingleParams::with_window(3);
    let docs = [("orig", original), ("edit", edited), ("rev", reversed)];
    let lists: Vec<ResultList> = docs
        .iter()
        .map(|(u, b)| ResultList::from_documents("q", u, &[(*u, *b)]))
        .collect();
    for (i, (u, b)) in docs.iter().enumerate().skip(1) {
        let j = j_term(&lists[0], &lists[i], 1, &p)?;
        let dup = duplicate_by_shingles_with(&DocumentText::new("orig", original), &DocumentText::new(*u, *b), 0.5, &p);
        println!("orig vs {u}: J_term {:.3}, duplicate {dup}", j.value);
    }
    Ok(())
}
