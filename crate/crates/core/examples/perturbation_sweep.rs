//! Sweeping a block of common items through two otherwise disjoint lists.

use serpsim::harness::{cmd_perturb, render_csv, PerturbMode, PerturbationSpec};
use serpsim::rank::WeightKind;

fn main() -> serpsim::Result<()> {
    let specs = PerturbationSpec::sweep(PerturbMode::Correlated, WeightKind::Dcgw, 10);
    let single: Vec<_> = specs.into_iter().filter(|s| s.common_count == 1).collect();
    let rows = cmd_perturb(&single)?;
    print!("{}", String::from_utf8_lossy(&render_csv(&rows)?));
    Ok(())
}
