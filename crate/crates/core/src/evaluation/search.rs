use super::{network_sum_rate, solve_clustering, CellCache, NetworkSolution, Scheme};
use crate::alloc::SolverOptions;
use crate::clustering::{affiliate_users, enumerate_partitions};
use crate::network::NetworkInstance;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveResult {
    pub solution: NetworkSolution,
    /// Network sum rate of the winning clustering (bit/s).
    pub rate: f64,
    pub partitions_evaluated: u64,
}

/// Scores every partition of the BSs into `k` cells and keeps the best.
///
/// Ties keep the first partition in enumeration order. Cell solutions are
/// memoized in `cache`, so a cell shared by many partitions is solved once.
pub fn exhaustive_best_clustering(
    instance: &NetworkInstance,
    k: usize,
    scheme: Scheme,
    delta: f64,
    opts: &SolverOptions,
    cache: &mut CellCache,
) -> Result<ExhaustiveResult> {
    let n = instance.n_bs();
    if k == 0 || k > n {
        return Err(Error::CutOutOfRange { leaves: n, requested: k });
    }
    let mut best: Option<(f64, NetworkSolution)> = None;
    let mut evaluated = 0u64;
    for blocks in enumerate_partitions(n, k) {
        let clustering = affiliate_users(&blocks, instance)?;
        let sol = solve_clustering(instance, &clustering, scheme, delta, opts, cache);
        let rate = network_sum_rate(&sol, instance);
        evaluated += 1;
        if best.as_ref().is_none_or(|(r, _)| rate > *r) {
            best = Some((rate, sol));
        }
    }
    let (rate, solution) = best.expect("at least one partition exists for 1 <= k <= n");
    Ok(ExhaustiveResult { solution, rate, partitions_evaluated: evaluated })
}
