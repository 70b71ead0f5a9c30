use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank::{footrule, kendall, WeightFn, WeightKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbMode {
    /// The shared block keeps the reference order.
    Correlated,
    /// The shared block is reversed.
    AntiCorrelated,
}

/// Reference list `1..=len` against `len+1..=2len` with a block of the
/// reference copied into the same positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub list_len: usize,
    pub mode: PerturbMode,
    pub common_count: usize,
    /// 1-based start of the shared block.
    pub block_position: usize,
    pub weights: WeightKind,
}

impl PerturbationSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.list_len == 0 {
            return bad("list_len must be at least 1".into());
        }
        if self.common_count == 0 || self.common_count > self.list_len {
            return bad(format!("common_count must be in 1..={}", self.list_len));
        }
        if self.block_position == 0 || self.common_count + self.block_position - 1 > self.list_len {
            return bad(format!(
                "block of {} at position {} does not fit a list of {}",
                self.common_count, self.block_position, self.list_len
            ));
        }
        if self.weights == WeightKind::Custom {
            return bad("custom weights cannot be named on a spec".into());
        }
        Ok(())
    }

    /// Every valid block for one mode and weighting, by block size then position.
    pub fn sweep(mode: PerturbMode, weights: WeightKind, list_len: usize) -> Vec<PerturbationSpec> {
        (1..=list_len)
            .flat_map(|c| {
                (1..=list_len + 1 - c).map(move |p| PerturbationSpec {
                    list_len,
                    mode,
                    common_count: c,
                    block_position: p,
                    weights,
                })
            })
            .collect()
    }
}

/// The reference list and its perturbed counterpart.
pub fn perturbed_pair(spec: &PerturbationSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    spec.validate()?;
    let n = spec.list_len;
    let a: Vec<usize> = (1..=n).collect();
    let mut b: Vec<usize> = (n + 1..=2 * n).collect();
    let start = spec.block_position - 1;
    let block = &a[start..start + spec.common_count];
    let dest = &mut b[start..start + spec.common_count];
    dest.copy_from_slice(block);
    if spec.mode == PerturbMode::AntiCorrelated {
        dest.reverse();
    }
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbRow {
    pub mode: PerturbMode,
    pub weights: WeightKind,
    pub list_len: usize,
    pub common_count: usize,
    pub block_position: usize,
    pub footrule: f64,
    pub kendall: f64,
}

/// Normalized footrule and Kendall tau for each spec.
pub fn cmd_perturb(specs: &[PerturbationSpec]) -> Result<Vec<PerturbRow>> {
    specs
        .iter()
        .map(|spec| {
            let (a, b) = perturbed_pair(spec)?;
            let w = WeightFn::from(spec.weights);
            Ok(PerturbRow {
                mode: spec.mode,
                weights: spec.weights,
                list_len: spec.list_len,
                common_count: spec.common_count,
                block_position: spec.block_position,
                footrule: footrule(&a, &b, &w)?.normalized,
                kendall: kendall(&a, &b, &w)?.normalized,
            })
        })
        .collect()
}
