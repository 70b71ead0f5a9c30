mod common;

use std::collections::HashSet;

use common::checks;
use common::*;
use proptest::prelude::*;
use serpsim::corpus::{Grade, JudgmentSet, ResultList};
use serpsim::dist::SuiteConfig;
use serpsim::normalize::{DupMode, NormalizeConfig};
use serpsim::quality::dcg;
use serpsim::rank::WeightFn;
use serpsim::sampling::{stratified_sample, LogRecord, QueryLog, StrataConfig};

fn quick_suite() -> SuiteConfig {
    SuiteConfig {
        resamples: 19,
        ..SuiteConfig::default()
    }
}

fn grade() -> impl Strategy<Value = Grade> {
    prop::sample::select(Grade::ALL.to_vec())
}

proptest! {
    #[test]
    fn diaconis_graham_iota((a, b) in partial_lists(12, 8)) {
        checks::diaconis_graham(&a, &b, &WeightFn::Iota)?;
    }

    #[test]
    fn diaconis_graham_dcgw((a, b) in partial_lists(12, 8)) {
        checks::diaconis_graham(&a, &b, &WeightFn::Dcgw)?;
    }

    #[test]
    fn kendall_oracle_random(pi in (1usize..=12).prop_flat_map(permutation)) {
        checks::kendall_matches_oracle(&pi, &WeightFn::Iota)?;
        checks::kendall_matches_oracle(&pi, &WeightFn::Dcgw)?;
    }

    #[test]
    fn scores_stay_in_range((a, b) in slotted_lists(14, 10)) {
        checks::list_ranges(&a, &b)?;
    }

    #[test]
    fn phi_bounded(h1 in histogram(15), h2 in histogram(15)) {
        checks::phi_range_and_symmetry(&h1, &h2)?;
    }

    #[test]
    fn p_values_bounded(h1 in histogram(8), h2 in histogram(8)) {
        checks::p_values_in_range(&h1, &h2, &quick_suite())?;
    }

    #[test]
    fn consensus_is_symmetric(h1 in histogram(8), h2 in histogram(8)) {
        checks::consensus_symmetric(&h1, &h2, &quick_suite())?;
    }

    #[test]
    fn set_measures_symmetric((a, b) in partial_lists(10, 10), d1 in body(12, 1..30), d2 in body(12, 1..30)) {
        checks::jaccard_symmetric(&a, &b)?;
        let la = ResultList::from_documents("q", "x", &[("u", d1)]);
        let lb = ResultList::from_documents("q", "y", &[("v", d2)]);
        checks::j_term_symmetric(&la, &lb)?;
    }

    #[test]
    fn relative_dcg_antisymmetric(x in 0.0f64..50.0, y in 0.0f64..50.0) {
        checks::relative_dcg_antisymmetric(x, y)?;
    }

    #[test]
    fn dcg_monotone(grades in prop::collection::vec(grade(), 1..10), at in 0usize..10, n in 1usize..10) {
        let urls: Vec<String> = (0..grades.len()).map(|i| format!("u{i}")).collect();
        let list = ResultList::from_urls("q", "e", &urls);
        let judge = |gs: &[Grade]| {
            let mut j = JudgmentSet::new();
            for (u, g) in urls.iter().zip(gs) {
                j.insert("q", u, *g).unwrap();
            }
            j
        };
        let j = judge(&grades);
        prop_assert!(dcg(&list, &j, n) <= dcg(&list, &j, n + 1));
        let at = at % grades.len();
        let mut raised = grades.clone();
        raised[at] = Grade::ALL[(raised[at].level() as usize).min(4)];
        prop_assert!(dcg(&list, &j, n) <= dcg(&list, &judge(&raised), n));
    }

    #[test]
    fn normalization_invariants_shingle((s, p) in document_lists()) {
        let cfg = NormalizeConfig { cross_list: DupMode::Shingle, ..NormalizeConfig::default() };
        checks::normalization(&s, &p, &cfg)?;
    }

    #[test]
    fn sampling_invariants(counts in prop::collection::vec(1u64..3000, 1..60), per in 1usize..8, seed in any::<u64>()) {
        let mut log = QueryLog::new();
        for (i, &count) in counts.iter().enumerate() {
            log.push(LogRecord { text: format!("q{i}"), market: "US".into(), count, timestamp: 0 }).unwrap();
        }
        let cfg = StrataConfig::new(per, seed);
        let sample = stratified_sample(&log, "US", &cfg).unwrap();
        let texts: HashSet<&str> = sample.iter().map(|r| r.text.as_str()).collect();
        prop_assert_eq!(texts.len(), sample.len());
        for r in &sample {
            let i: usize = r.text[1..].parse().unwrap();
            prop_assert_eq!(r.stratum, cfg.stratum(counts[i]));
        }
        for st in serpsim::corpus::Stratum::ALL {
            let pool = counts.iter().filter(|&&c| cfg.stratum(c) == st).count();
            prop_assert_eq!(sample.iter().filter(|r| r.stratum == st).count(), pool.min(per));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalization_invariants_consensus((s, p) in document_lists()) {
        checks::normalization(&s, &p, &NormalizeConfig::default())?;
    }
}

#[test]
fn kendall_oracle_all_small_permutations() {
    fn each(prefix: &mut Vec<usize>, left: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if left.is_empty() {
            f(prefix);
            return;
        }
        for i in 0..left.len() {
            let x = left.remove(i);
            prefix.push(x);
            each(prefix, left, f);
            prefix.pop();
            left.insert(i, x);
        }
    }
    let mut count = 0;
    for n in 1..=6 {
        each(&mut Vec::new(), &mut (1..=n).collect(), &mut |p| {
            checks::kendall_matches_oracle(p, &WeightFn::Iota).unwrap();
            checks::kendall_matches_oracle(p, &WeightFn::Dcgw).unwrap();
            count += 1;
        });
    }
    assert_eq!(count, 1 + 2 + 6 + 24 + 120 + 720);
}
