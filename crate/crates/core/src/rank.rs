//! Weighted Spearman footrule and weighted Kendall tau on partial lists.
//!
//! Two top-n lists rarely hold the same elements, so both are first turned
//! into permutations of their union ([`extend_ranks`]): every element missing
//! from a list is appended after that list's last position, in the order it
//! has in the other list. The first list is the reference: after extension
//! it is the identity, and weights are evaluated at its ranks.
//!
//! ```
//! use serpsim::rank::{footrule, kendall, WeightFn};
//!
//! let s = footrule(&["a", "b", "d"], &["b", "e", "f"], &WeightFn::Iota).unwrap();
//! let k = kendall(&["a", "b", "d"], &["b", "e", "f"], &WeightFn::Iota).unwrap();
//! assert_eq!((s.raw, k.raw), (10.0, 5.0));
//! assert!((s.normalized + 2.0 / 3.0).abs() < 1e-12);
//! assert_eq!(k.normalized, 0.0);
//! ```

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `iota(i) = 1`.
pub fn weight_iota(_rank: usize) -> f64 {
    1.0
}

/// `dcgw(i) = log10(1 + i) / 2^i`.
pub fn weight_dcgw(rank: usize) -> f64 {
    ((1 + rank) as f64).log10() / 2f64.powi(rank as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Iota,
    Dcgw,
    Custom,
}

/// Positive weight attached to a rank.
#[derive(Clone)]
pub enum WeightFn {
    Iota,
    Dcgw,
    Custom(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl WeightFn {
    pub fn custom(f: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        WeightFn::Custom(Arc::new(f))
    }

    pub fn eval(&self, rank: usize) -> f64 {
        match self {
            WeightFn::Iota => weight_iota(rank),
            WeightFn::Dcgw => weight_dcgw(rank),
            WeightFn::Custom(f) => f(rank),
        }
    }

    pub fn kind(&self) -> WeightKind {
        match self {
            WeightFn::Iota => WeightKind::Iota,
            WeightFn::Dcgw => WeightKind::Dcgw,
            WeightFn::Custom(_) => WeightKind::Custom,
        }
    }
}

impl From<WeightKind> for WeightFn {
    fn from(kind: WeightKind) -> Self {
        match kind {
            WeightKind::Iota | WeightKind::Custom => WeightFn::Iota,
            WeightKind::Dcgw => WeightFn::Dcgw,
        }
    }
}

impl fmt::Debug for WeightFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightFn::{:?}", self.kind())
    }
}

/// Two partial lists extended to permutations of their union.
///
/// `items` lists the union in reference order: the first list followed by the
/// elements only the second list has. `rank_sigma[k]` and `rank_pi[k]` are the
/// 1-based ranks of `items[k]`. Without ω slots both rank vectors are
/// permutations of `1..=items.len()`; ω slots keep their positions, so ranks
/// may then skip values up to `max_rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankExtension<T> {
    pub items: Vec<T>,
    pub rank_sigma: Vec<usize>,
    pub rank_pi: Vec<usize>,
    pub max_rank: usize,
}

impl<T: Eq + Hash> RankExtension<T> {
    /// Number of distinct elements, `|σ ∪ π|`.
    pub fn n(&self) -> usize {
        self.items.len()
    }

    fn index_of(&self, item: &T) -> Option<usize> {
        self.items.iter().position(|x| x == item)
    }

    pub fn rank_sigma_of(&self, item: &T) -> Option<usize> {
        self.index_of(item).map(|k| self.rank_sigma[k])
    }

    pub fn rank_pi_of(&self, item: &T) -> Option<usize> {
        self.index_of(item).map(|k| self.rank_pi[k])
    }

    /// `π` rewritten in reference ranks: entry `j` is the σ-rank of the
    /// element at π-rank `j + 1` (gaps from ω slots are skipped).
    pub fn pi_in_sigma_ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.items.len()).collect();
        order.sort_by_key(|&k| self.rank_pi[k]);
        order.into_iter().map(|k| self.rank_sigma[k]).collect()
    }

    fn is_bijection(&self) -> bool {
        let n = self.items.len();
        let check = |ranks: &[usize]| {
            let mut seen = vec![false; n + 1];
            ranks
                .iter()
                .all(|&r| r >= 1 && r <= n && !std::mem::replace(&mut seen[r], true))
        };
        check(&self.rank_sigma) && check(&self.rank_pi)
    }
}

fn positions<T: Eq + Hash + Clone + fmt::Debug>(slots: &[Option<T>]) -> Result<HashMap<T, usize>> {
    let mut map = HashMap::with_capacity(slots.len());
    for (i, slot) in slots.iter().enumerate() {
        if let Some(x) = slot {
            if map.insert(x.clone(), i + 1).is_some() {
                return Err(Error::DuplicateElement(format!("{x:?}")));
            }
        }
    }
    Ok(map)
}

/// Extends two lists with distinct elements to permutations of their union.
pub fn extend_ranks<T: Eq + Hash + Clone + fmt::Debug>(sigma: &[T], pi: &[T]) -> Result<RankExtension<T>> {
    let s: Vec<Option<T>> = sigma.iter().cloned().map(Some).collect();
    let p: Vec<Option<T>> = pi.iter().cloned().map(Some).collect();
    let ext = extend_slots(&s, &p)?;
    debug_assert!(ext.is_bijection(), "rank extension is not a bijection");
    Ok(ext)
}

/// Like [`extend_ranks`], but `None` marks an ω slot: it keeps its rank
/// position and takes no part in the union.
pub fn extend_slots<T: Eq + Hash + Clone + fmt::Debug>(
    sigma: &[Option<T>],
    pi: &[Option<T>],
) -> Result<RankExtension<T>> {
    let pos_sigma = positions(sigma)?;
    let pos_pi = positions(pi)?;

    let mut items = Vec::new();
    let mut rank_sigma = Vec::new();
    let mut rank_pi = Vec::new();

    // Elements of σ, in σ order; those missing from π follow π's last slot.
    let mut appended_to_pi = 0;
    for (i, x) in sigma.iter().enumerate() {
        let Some(x) = x else { continue };
        items.push(x.clone());
        rank_sigma.push(i + 1);
        rank_pi.push(match pos_pi.get(x) {
            Some(&r) => r,
            None => {
                appended_to_pi += 1;
                pi.len() + appended_to_pi
            }
        });
    }
    // Elements only in π, in π order, follow σ's last slot.
    let mut appended_to_sigma = 0;
    for (j, y) in pi.iter().enumerate() {
        let Some(y) = y else { continue };
        if pos_sigma.contains_key(y) {
            continue;
        }
        appended_to_sigma += 1;
        items.push(y.clone());
        rank_sigma.push(sigma.len() + appended_to_sigma);
        rank_pi.push(j + 1);
    }

    let max_rank = (sigma.len() + appended_to_sigma).max(pi.len() + appended_to_pi);
    Ok(RankExtension {
        items,
        rank_sigma,
        rank_pi,
        max_rank,
    })
}

/// A raw list distance and its normalization to `[-1, 1]`.
///
/// `normalized = 1 - 2 * raw / denominator`. When the denominator vanishes
/// (at most one element in the union) the lists are trivially concordant:
/// `normalized` is 1 and `denominator` is 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ListScore {
    pub raw: f64,
    pub normalized: f64,
    pub denominator: f64,
}

impl ListScore {
    fn new(raw: f64, denominator: f64) -> Self {
        let normalized = if denominator > 0.0 {
            1.0 - 2.0 * raw / denominator
        } else {
            1.0
        };
        ListScore {
            raw,
            normalized,
            denominator,
        }
    }
}

/// Weighted footrule `Σ w(σ(i)) |σ(i) − π(i)|` over an extension.
///
/// The denominator is the largest value the numerator can take over all
/// bijections between the occupied σ-ranks and π-ranks. For unit weights
/// this is `Σ |i − (N − i + 1)|`, attained by reversal.
pub fn footrule_extended<T>(ext: &RankExtension<T>, w: &WeightFn) -> ListScore {
    let raw = ext
        .rank_sigma
        .iter()
        .zip(&ext.rank_pi)
        .map(|(&s, &p)| w.eval(s) * s.abs_diff(p) as f64)
        .sum();
    ListScore::new(raw, footrule_max(&ext.rank_sigma, &ext.rank_pi, w))
}

fn footrule_max(rank_sigma: &[usize], rank_pi: &[usize], w: &WeightFn) -> f64 {
    let n = rank_sigma.len();
    if n == 0 {
        return 0.0;
    }
    let mut rows = rank_sigma.to_vec();
    let mut cols = rank_pi.to_vec();
    rows.sort_unstable();
    cols.sort_unstable();
    let contiguous = |v: &[usize]| v.iter().enumerate().all(|(i, &r)| r == i + 1);
    if matches!(w, WeightFn::Iota) && contiguous(&rows) && contiguous(&cols) {
        return (1..=n).map(|i| i.abs_diff(n + 1 - i) as f64).sum();
    }
    let gain: Vec<Vec<f64>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| w.eval(r) * r.abs_diff(c) as f64).collect())
        .collect();
    max_weight_assignment(&gain)
}

/// Value of a maximum-weight perfect matching on a square matrix
/// (Hungarian method with potentials, O(n³)).
fn max_weight_assignment(gain: &[Vec<f64>]) -> f64 {
    let n = gain.len();
    // Minimize the negated gains; arrays are 1-based with a virtual column 0.
    let cost = |i: usize, j: usize| -gain[i - 1][j - 1];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| gain[row_of[j] - 1][j - 1]).sum()
}

/// Weighted Kendall tau over an extension: each discordant pair with
/// reference ranks `i < j` costs `(w(i) + w(j)) / 2`; the denominator is the
/// cost of every pair being discordant.
pub fn kendall_extended<T>(ext: &RankExtension<T>, w: &WeightFn) -> ListScore {
    let mut order: Vec<usize> = (0..ext.rank_sigma.len()).collect();
    order.sort_by_key(|&k| ext.rank_sigma[k]);
    let weights: Vec<f64> = order.iter().map(|&k| w.eval(ext.rank_sigma[k])).collect();
    let pi: Vec<usize> = order.iter().map(|&k| ext.rank_pi[k]).collect();

    let mut raw = 0.0;
    let mut denominator = 0.0;
    for i in 0..pi.len() {
        for j in i + 1..pi.len() {
            let cost = (weights[i] + weights[j]) / 2.0;
            denominator += cost;
            if pi[i] > pi[j] {
                raw += cost;
            }
        }
    }
    ListScore::new(raw, denominator)
}

/// Weighted footrule of two partial lists.
pub fn footrule<T: Eq + Hash + Clone + fmt::Debug>(sigma: &[T], pi: &[T], w: &WeightFn) -> Result<ListScore> {
    Ok(footrule_extended(&extend_ranks(sigma, pi)?, w))
}

/// Weighted Kendall tau of two partial lists.
pub fn kendall<T: Eq + Hash + Clone + fmt::Debug>(sigma: &[T], pi: &[T], w: &WeightFn) -> Result<ListScore> {
    Ok(kendall_extended(&extend_ranks(sigma, pi)?, w))
}

/// Bubble-sorts `pi` (a permutation of `1..=N`) to the identity and sums
/// `(w(i) + w(j)) / 2` over every adjacent swap of values `i` and `j`.
pub fn kendall_oracle(pi: &[usize], w: &WeightFn) -> Result<f64> {
    let n = pi.len();
    let mut seen = vec![false; n + 1];
    for &x in pi {
        if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::NotPermutation(n));
        }
    }
    let mut a = pi.to_vec();
    let mut cost = 0.0;
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 1..n {
            if a[k - 1] > a[k] {
                cost += (w.eval(a[k - 1]) + w.eval(a[k])) / 2.0;
                a.swap(k - 1, k);
                swapped = true;
            }
        }
    }
    Ok(cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-9;

    fn letters(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn extension_letter_example() {
        let ext = extend_ranks(&letters("abd"), &letters("bef")).unwrap();
        assert_eq!(ext.items, letters("abdef"));
        assert_eq!(ext.rank_sigma, [1, 2, 3, 4, 5]);
        assert_eq!(ext.rank_pi, [4, 1, 5, 2, 3]);
        assert_eq!(ext.pi_in_sigma_ranks(), [2, 4, 5, 1, 3]);
    }

    #[test]
    fn extension_identical_and_unequal_lengths() {
        let ext = extend_ranks(&["x", "y"], &["x", "y"]).unwrap();
        assert_eq!((ext.n(), &ext.rank_sigma, &ext.rank_pi), (2, &vec![1, 2], &vec![1, 2]));

        let ext = extend_ranks(&["p", "q"], &["r"]).unwrap();
        assert_eq!(ext.n(), 3);
        assert_eq!(ext.rank_pi_of(&"p"), Some(2));
        assert_eq!(ext.rank_pi_of(&"q"), Some(3));
        assert_eq!(ext.rank_sigma_of(&"r"), Some(3));
    }

    #[test]
    fn extension_rejects_duplicates() {
        assert!(matches!(
            extend_ranks(&["a", "a"], &["b"]),
            Err(Error::DuplicateElement(_))
        ));
    }

    #[test]
    fn omega_slots_keep_positions() {
        let ext = extend_slots(&[Some("a"), None, Some("b")], &[Some("b"), Some("c")]).unwrap();
        assert_eq!(ext.items, ["a", "b", "c"]);
        assert_eq!(ext.rank_sigma, [1, 3, 4]);
        assert_eq!(ext.rank_pi, [3, 1, 2]);
        assert_eq!(ext.max_rank, 4);
    }

    #[test]
    fn footrule_letter_example() {
        let s = footrule(&letters("abd"), &letters("bef"), &WeightFn::Iota).unwrap();
        assert_eq!(s.raw, 10.0);
        assert_eq!(s.denominator, 12.0);
        assert!((s.normalized - (-2.0 / 3.0)).abs() < EPS);
    }

    #[test]
    fn kendall_letter_example() {
        let k = kendall(&letters("abd"), &letters("bef"), &WeightFn::Iota).unwrap();
        assert_eq!((k.raw, k.denominator), (5.0, 10.0));
        assert!(k.normalized.abs() < EPS);
    }

    #[test]
    fn identical_and_reversed() {
        let a = letters("abcdefg");
        let r: Vec<char> = a.iter().rev().copied().collect();
        for w in [WeightFn::Iota, WeightFn::Dcgw] {
            let s = footrule(&a, &a, &w).unwrap();
            let k = kendall(&a, &a, &w).unwrap();
            assert_eq!((s.raw, s.normalized, k.raw, k.normalized), (0.0, 1.0, 0.0, 1.0));
        }
        assert!((footrule(&a, &r, &WeightFn::Iota).unwrap().normalized + 1.0).abs() < EPS);
        assert!((kendall(&a, &r, &WeightFn::Iota).unwrap().normalized + 1.0).abs() < EPS);
        assert!((kendall(&a, &r, &WeightFn::Dcgw).unwrap().normalized + 1.0).abs() < EPS);
    }

    #[test]
    fn single_shared_element_is_concordant() {
        let s = footrule(&["a"], &["a"], &WeightFn::Iota).unwrap();
        let k = kendall(&["a"], &["a"], &WeightFn::Iota).unwrap();
        assert_eq!((s.normalized, s.denominator, k.normalized), (1.0, 0.0, 1.0));
    }

    #[test]
    fn dcgw_footrule_stays_in_range() {
        // Reversal is not the worst case once weights decay: (b, c, a) moves
        // the heaviest element furthest and the others by one.
        let s = footrule(&["a", "b", "c"], &["b", "c", "a"], &WeightFn::Dcgw).unwrap();
        let reversal: f64 = (1..=3).map(|i: usize| weight_dcgw(i) * i.abs_diff(4 - i) as f64).sum();
        assert!(s.denominator > reversal);
        assert!((s.raw - s.denominator).abs() < 1e-15);
        assert!((s.normalized + 1.0).abs() < EPS);
    }

    #[test]
    fn assignment_matches_brute_force() {
        let w = WeightFn::Dcgw;
        let n = 5;
        let ranks: Vec<usize> = (1..=n).collect();
        let mut best: f64 = 0.0;
        let mut perm: Vec<usize> = ranks.clone();
        // Heap's algorithm.
        fn heap(k: usize, a: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
            if k == 1 {
                f(a);
                return;
            }
            for i in 0..k {
                heap(k - 1, a, f);
                if k % 2 == 0 { a.swap(i, k - 1) } else { a.swap(0, k - 1) }
            }
        }
        heap(n, &mut perm, &mut |p| {
            let v: f64 = p.iter().enumerate().map(|(i, &x)| w.eval(i + 1) * (i + 1).abs_diff(x) as f64).sum();
            best = best.max(v);
        });
        assert!((footrule_max(&ranks, &ranks, &w) - best).abs() < 1e-12);
    }

    #[test]
    fn oracle_letter_example() {
        assert_eq!(kendall_oracle(&[2, 4, 5, 1, 3], &WeightFn::Iota).unwrap(), 5.0);
        assert_eq!(kendall_oracle(&[1, 2, 3], &WeightFn::Dcgw).unwrap(), 0.0);
        assert!(matches!(
            kendall_oracle(&[1, 1, 3], &WeightFn::Iota),
            Err(Error::NotPermutation(3))
        ));
        assert!(kendall_oracle(&[0, 1], &WeightFn::Iota).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(weight_iota(7), 1.0);
        assert!((weight_dcgw(1) - 0.150_514_997_8).abs() < 1e-9);
        assert!((weight_dcgw(10) - 0.001_016_985).abs() < 1e-9);
    }
}
