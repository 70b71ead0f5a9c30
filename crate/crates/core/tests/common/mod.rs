#![allow(dead_code)]

use proptest::prelude::*;
use serpsim::corpus::ResultList;
use serpsim::text::TermHistogram;

/// Space-separated `{prefix}0 .. {prefix}{n-1}`.
pub fn words(prefix: &str, n: usize) -> String {
    (0..n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().join(" ")
}

/// Two lists of distinct items from `0..universe`, each at most `max_len` long.
pub fn partial_lists(universe: u32, max_len: usize) -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    let all: Vec<u32> = (0..universe).collect();
    (
        Just(all.clone()).prop_shuffle(),
        Just(all).prop_shuffle(),
        0..=max_len,
        0..=max_len,
    )
        .prop_map(|(mut a, mut b, la, lb)| {
            a.truncate(la);
            b.truncate(lb);
            (a, b)
        })
}

/// Lists whose missing items become ω slots.
pub fn slotted_lists(universe: u32, max_len: usize) -> impl Strategy<Value = (Vec<Option<u32>>, Vec<Option<u32>>)> {
    (
        partial_lists(universe, max_len),
        prop::collection::vec(any::<bool>(), max_len),
        prop::collection::vec(any::<bool>(), max_len),
    )
        .prop_map(|((a, b), ma, mb)| {
            let omega = |v: Vec<u32>, m: &[bool]| {
                v.into_iter()
                    .zip(m)
                    .map(|(x, &hole)| if hole { None } else { Some(x) })
                    .collect()
            };
            (omega(a, &ma), omega(b, &mb))
        })
}

/// A permutation of `1..=n`.
pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

/// Small non-empty histogram over terms `t0..t{vocab-1}`.
pub fn histogram(vocab: usize) -> impl Strategy<Value = TermHistogram> {
    prop::collection::vec((0..vocab, 1u64..6), 1..12).prop_map(|pairs| {
        let mut h = TermHistogram::default();
        for (t, c) in pairs {
            h.add(&format!("t{t}"), c);
        }
        h
    })
}

/// Document body of `len` words drawn from a small vocabulary.
pub fn body(vocab: usize, len: std::ops::Range<usize>) -> impl Strategy<Value = String> {
    prop::collection::vec(0..vocab, len).prop_map(|ix| {
        ix.iter().map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ")
    })
}

/// How one second-list entry relates to the first list.
#[derive(Debug, Clone, Copy)]
pub enum PiEntry {
    /// Same URL and document as first-list entry `k`.
    Same(usize),
    /// Different URL, same document as first-list entry `k`.
    Mirror(usize),
    /// Its own fresh document.
    Fresh,
    /// Different URL, same document as an earlier second-list entry.
    Repeat(usize),
}

fn pi_entry() -> impl Strategy<Value = PiEntry> {
    prop_oneof![
        (0..10usize).prop_map(PiEntry::Same),
        (0..10usize).prop_map(PiEntry::Mirror),
        Just(PiEntry::Fresh),
        (0..10usize).prop_map(PiEntry::Repeat),
    ]
}

/// A pair of document-bearing lists. First-list documents are pairwise
/// distinct; the second list mixes exact copies, mirrors, fresh documents and
/// within-list repeats.
pub fn document_lists() -> impl Strategy<Value = (ResultList, ResultList)> {
    (1..=6usize, prop::collection::vec(pi_entry(), 0..=6)).prop_map(|(ls, plan)| {
        let sigma: Vec<(String, String)> = (0..ls)
            .map(|i| (format!("s{i}"), words(&format!("s{i}x"), 40)))
            .collect();
        let mut pi: Vec<(String, String)> = Vec::new();
        let mut used = std::collections::HashSet::new();
        for (j, e) in plan.into_iter().enumerate() {
            let item = match e {
                PiEntry::Same(k) => sigma[k % ls].clone(),
                PiEntry::Mirror(k) => (format!("m{j}"), sigma[k % ls].1.clone()),
                PiEntry::Repeat(k) if !pi.is_empty() => (format!("r{j}"), pi[k % pi.len()].1.clone()),
                _ => (format!("p{j}"), words(&format!("p{j}x"), 40)),
            };
            if used.insert(item.0.clone()) {
                pi.push(item);
            }
        }
        (
            ResultList::from_documents("q", "a", &sigma),
            ResultList::from_documents("q", "b", &pi),
        )
    })
}

pub mod checks {
    //! Property bodies shared by the proptest suite and the acceptance run.

    use std::collections::HashSet;

    use proptest::prelude::*;
    use serpsim::corpus::ResultList;
    use serpsim::dist::{consensus_histograms, phi, suite, SuiteConfig};
    use serpsim::normalize::{exact_intersection, normalize_lists, NormalizeConfig, Slot};
    use serpsim::quality::relative_dcg;
    use serpsim::rank::{extend_ranks, extend_slots, footrule, footrule_extended, kendall, kendall_extended, kendall_oracle, WeightFn};
    use serpsim::sets::{j_term, jaccard_of};
    use serpsim::text::{paired_cdf, ShingleParams, TermHistogram};

    pub const TOL: f64 = 1e-9;

    pub fn diaconis_graham(a: &[u32], b: &[u32], w: &WeightFn) -> Result<(), TestCaseError> {
        let s = footrule(a, b, w).unwrap().raw;
        let k = kendall(a, b, w).unwrap().raw;
        prop_assert!(k <= s + TOL, "K {k} > S {s}");
        prop_assert!(s <= 2.0 * k + TOL, "S {s} > 2K {k}");
        Ok(())
    }

    /// Kendall over the extension equals the bubble-sort swap cost of the
    /// second list written in first-list ranks.
    pub fn kendall_matches_oracle(pi: &[usize], w: &WeightFn) -> Result<(), TestCaseError> {
        let sigma: Vec<usize> = (1..=pi.len()).collect();
        let fast = kendall(&sigma, pi, w).unwrap().raw;
        let ext = extend_ranks(&sigma, pi).unwrap();
        let slow = kendall_oracle(&ext.pi_in_sigma_ranks(), w).unwrap();
        match w {
            WeightFn::Iota => prop_assert_eq!(fast, slow),
            _ => prop_assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1.0), "{fast} vs {slow}"),
        }
        Ok(())
    }

    pub fn list_ranges(a: &[Option<u32>], b: &[Option<u32>]) -> Result<(), TestCaseError> {
        let ext = extend_slots(a, b).unwrap();
        for w in [WeightFn::Iota, WeightFn::Dcgw] {
            let s = footrule_extended(&ext, &w).normalized;
            let k = kendall_extended(&ext, &w).normalized;
            prop_assert!((-1.0 - TOL..=1.0 + TOL).contains(&s), "s_w {s}");
            prop_assert!((-1.0 - TOL..=1.0 + TOL).contains(&k), "k_w {k}");
        }
        Ok(())
    }

    pub fn phi_range_and_symmetry(h1: &TermHistogram, h2: &TermHistogram) -> Result<(), TestCaseError> {
        let a = phi(&paired_cdf(h1, h2).unwrap());
        let b = phi(&paired_cdf(h2, h1).unwrap());
        prop_assert!((0.0..=2f64.sqrt() + 1e-12).contains(&a), "phi {a}");
        prop_assert_eq!(a, b);
        Ok(())
    }

    pub fn p_values_in_range(h1: &TermHistogram, h2: &TermHistogram, cfg: &SuiteConfig) -> Result<(), TestCaseError> {
        for r in suite(h1, h2, cfg).unwrap() {
            prop_assert!((0.0..=1.0).contains(&r.p_value), "{:?}", r);
        }
        Ok(())
    }

    pub fn consensus_symmetric(h1: &TermHistogram, h2: &TermHistogram, cfg: &SuiteConfig) -> Result<(), TestCaseError> {
        prop_assert_eq!(consensus_histograms(h1, h2, cfg), consensus_histograms(h2, h1, cfg));
        Ok(())
    }

    pub fn jaccard_symmetric(a: &[u32], b: &[u32]) -> Result<(), TestCaseError> {
        prop_assert_eq!(jaccard_of(a, b), jaccard_of(b, a));
        Ok(())
    }

    pub fn j_term_symmetric(a: &ResultList, b: &ResultList) -> Result<(), TestCaseError> {
        let p = ShingleParams::with_window(3);
        prop_assert_eq!(j_term(a, b, 10, &p).unwrap(), j_term(b, a, 10, &p).unwrap());
        Ok(())
    }

    pub fn relative_dcg_antisymmetric(x: f64, y: f64) -> Result<(), TestCaseError> {
        let r = relative_dcg("q", x, y);
        prop_assert!((-1.0..=1.0).contains(&r));
        prop_assert_eq!(r, -relative_dcg("q", y, x));
        Ok(())
    }

    /// Idempotence, length and ω placement, and exact-match intersection.
    pub fn normalization(sigma: &ResultList, pi: &ResultList, cfg: &NormalizeConfig) -> Result<(), TestCaseError> {
        let once = normalize_lists(sigma, pi, cfg);
        for (out, src) in [(&once.sigma_tilde, sigma), (&once.pi_tilde, pi)] {
            prop_assert_eq!(out.len(), src.len());
            let mut seen = HashSet::new();
            for (slot, name) in out.slots.iter().zip(&out.bindings) {
                let first = seen.insert(name.clone());
                match slot {
                    Slot::Item(n) => prop_assert!(first && n == name),
                    Slot::Omega => prop_assert!(!first),
                }
            }
        }
        prop_assert!(once.intersection() >= exact_intersection(sigma, pi));

        let twice = normalize_lists(&once.sigma_tilde.to_result_list(), &once.pi_tilde.to_result_list(), cfg);
        prop_assert_eq!(&once.sigma_tilde.slots, &twice.sigma_tilde.slots);
        prop_assert_eq!(&once.pi_tilde.slots, &twice.pi_tilde.slots);
        Ok(())
    }
}
