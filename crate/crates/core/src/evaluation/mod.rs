//! Network-wide scoring of per-cell allocations.
//!
//! Cells are solved as if alone; [`network_sum_rate`] then puts every cell's
//! transmissions back on the air together, so cross-cell interference only
//! shows up in the score.

mod experiment;
mod oracle;
mod search;

pub use experiment::{
    run_experiment, summarize, Audit, ExperimentConfig, ExperimentOutput, Method, ResultRow, SummaryRow,
};
pub use oracle::{
    brute_force_oracle, compare_with_oracle, OracleComparison, OracleResult, ORACLE_MAX_BS, ORACLE_MAX_USERS,
};
pub use search::{exhaustive_best_clustering, ExhaustiveResult};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use ndarray::Array2;

use crate::alloc::{decoded_sum_rate, joint_allocate, ApproxCoeffs, CellProblem, PowerMatrix, SolverOptions};
use crate::alternating::{bs_centric_allocate, iteration_bound, user_centric_allocate, AlternationResult};
use crate::clustering::Clustering;
use crate::network::NetworkInstance;
use crate::{Error, Result};

/// Per-cell allocation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    Joint,
    UserCentric,
    BsCentric,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Joint, Scheme::UserCentric, Scheme::BsCentric];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Joint => "joint",
            Scheme::UserCentric => "user_centric",
            Scheme::BsCentric => "bs_centric",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scheme `{s}`")))
    }
}

/// Termination facts of one alternating run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlternationCheck {
    pub iterations: usize,
    pub iteration_bound: usize,
    pub trace_monotone: bool,
    pub hit_cap: bool,
}

impl AlternationCheck {
    fn new(cell: &CellProblem, res: &AlternationResult, delta: f64) -> Self {
        Self {
            iterations: res.iterations,
            iteration_bound: iteration_bound(cell, delta),
            trace_monotone: res.trace_is_monotone(delta),
            hit_cap: res.hit_iteration_cap,
        }
    }

    pub fn within_bound(&self) -> bool {
        self.iterations <= self.iteration_bound && !self.hit_cap
    }
}

/// One cell's solution, cell-local indices.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub scheme: Scheme,
    pub powers: PowerMatrix,
    pub decode: Array2<bool>,
    /// Intra-cell sum rate, ignoring other cells (bit/s).
    pub objective: f64,
    pub converged: bool,
    pub alternation: Option<AlternationCheck>,
}

/// Runs `scheme` on a single cell.
pub fn solve_cell(cell: &CellProblem, scheme: Scheme, delta: f64, opts: &SolverOptions) -> AllocationResult {
    let from_alternation = |res: AlternationResult| AllocationResult {
        scheme,
        alternation: Some(AlternationCheck::new(cell, &res, delta)),
        objective: res.rate,
        converged: res.power_steps_converged,
        decode: res.assignment.decode,
        powers: res.powers,
    };
    match scheme {
        Scheme::Joint => {
            let out = joint_allocate(cell, opts, &ApproxCoeffs::ones(cell.n_users(), cell.n_bs()));
            // Every stream that carries power is decoded.
            let decode = out.powers.0.mapv(|p| p > 0.0);
            let objective =
                decoded_sum_rate(cell.gain2.view(), &cell.noise_w, cell.bandwidth_hz, out.powers.view(), |u, b| {
                    decode[[u, b]]
                });
            AllocationResult {
                scheme,
                powers: out.powers,
                decode,
                objective,
                converged: out.diagnostics.converged,
                alternation: None,
            }
        }
        Scheme::UserCentric => from_alternation(user_centric_allocate(cell, delta, opts)),
        Scheme::BsCentric => from_alternation(bs_centric_allocate(cell, delta, opts)),
    }
}

/// Per-trial memo of cell solutions keyed by (BS set, user set).
#[derive(Debug, Default)]
pub struct CellCache {
    cells: HashMap<(Scheme, Vec<usize>, Vec<usize>), Arc<AllocationResult>>,
    pub audit: Audit,
}

impl CellCache {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn solve(
        &mut self,
        instance: &NetworkInstance,
        bs: &[usize],
        users: &[usize],
        scheme: Scheme,
        delta: f64,
        opts: &SolverOptions,
    ) -> Arc<AllocationResult> {
        let key = (scheme, bs.to_vec(), users.to_vec());
        if let Some(hit) = self.cells.get(&key) {
            return Arc::clone(hit);
        }
        let cell = CellProblem::from_instance(instance, users, bs);
        let result = Arc::new(solve_cell(&cell, scheme, delta, opts));
        self.audit.record(&result);
        self.cells.insert(key, Arc::clone(&result));
        result
    }
}

/// Per-cell solutions stitched into global (user, BS) matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSolution {
    pub clustering: Clustering,
    /// Zero outside each user's own cell.
    pub powers: Array2<f64>,
    pub decode: Array2<bool>,
    pub cells: Vec<Arc<AllocationResult>>,
}

impl NetworkSolution {
    /// Σ of the per-cell objectives (each ignoring the other cells).
    pub fn intra_cell_rate(&self) -> f64 {
        self.cells.iter().map(|c| c.objective).sum()
    }

    pub fn converged_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.converged).count()
    }
}

/// Solves every cell of `clustering` independently and stitches the result.
pub fn solve_clustering(
    instance: &NetworkInstance,
    clustering: &Clustering,
    scheme: Scheme,
    delta: f64,
    opts: &SolverOptions,
    cache: &mut CellCache,
) -> NetworkSolution {
    let (nu, nb) = (instance.n_users(), instance.n_bs());
    let mut powers = Array2::zeros((nu, nb));
    let mut decode = Array2::from_elem((nu, nb), false);
    let mut cells = Vec::with_capacity(clustering.n_cells());
    for (c, bs) in clustering.bs_blocks.iter().enumerate() {
        let users = clustering.users_of(c);
        let res = cache.solve(instance, bs, &users, scheme, delta, opts);
        for (i, &u) in users.iter().enumerate() {
            for (j, &b) in bs.iter().enumerate() {
                powers[[u, b]] = res.powers.get(i, j);
                decode[[u, b]] = res.decode[[i, j]];
            }
        }
        cells.push(res);
    }
    NetworkSolution { clustering: clustering.clone(), powers, decode, cells }
}

/// Sum rate of all decoded streams with every cell transmitting at once.
pub fn network_sum_rate(sol: &NetworkSolution, instance: &NetworkInstance) -> f64 {
    decoded_sum_rate(instance.gain2.view(), &instance.noise_w, instance.bandwidth_hz, sol.powers.view(), |u, b| {
        sol.decode[[u, b]]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::affiliate_users;
    use crate::network::{generate_network, Point, SystemParams};

    #[test]
    fn single_cell_matches_intra_cell_objective() {
        let inst = generate_network(&SystemParams::default(), 3, 8, 9).unwrap();
        let clustering = affiliate_users(&[vec![0, 1, 2]], &inst).unwrap();
        for scheme in Scheme::ALL {
            let sol =
                solve_clustering(&inst, &clustering, scheme, 1e3, &SolverOptions::default(), &mut CellCache::default());
            assert_eq!(network_sum_rate(&sol, &inst), sol.intra_cell_rate(), "{scheme}");
        }
    }

    #[test]
    fn zero_power_scores_zero() {
        let inst = generate_network(&SystemParams::default(), 2, 3, 1).unwrap();
        let clustering = affiliate_users(&[vec![0], vec![1]], &inst).unwrap();
        let sol = NetworkSolution {
            clustering,
            powers: Array2::zeros((3, 2)),
            decode: Array2::from_elem((3, 2), true),
            cells: vec![],
        };
        assert_eq!(network_sum_rate(&sol, &inst), 0.0);
    }

    #[test]
    fn distant_cells_do_not_interact() {
        let params = SystemParams::default();
        let bs = vec![Point::new(0.0, 0.0), Point::new(1e9, 0.0)];
        let users = vec![Point::new(300.0, 400.0), Point::new(1e9 + 600.0, 800.0)];
        let inst = NetworkInstance::from_positions(&params, bs, users).unwrap();
        let clustering = affiliate_users(&[vec![0], vec![1]], &inst).unwrap();
        let sol = solve_clustering(
            &inst,
            &clustering,
            Scheme::UserCentric,
            1e3,
            &SolverOptions::default(),
            &mut CellCache::default(),
        );
        let isolated: f64 =
            (0..2).map(|u| 1e6 * (1.0 + inst.gain2[[u, u]] * inst.max_power_w[u] / inst.noise_w[u]).log2()).sum();
        assert!((network_sum_rate(&sol, &inst) / isolated - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cross_cell_interference_only_lowers_rate() {
        let opts = SolverOptions::default();
        for seed in 0..4 {
            let inst = generate_network(&SystemParams::default(), 4, 12, seed).unwrap();
            let clustering = affiliate_users(&[vec![0, 2], vec![1], vec![3]], &inst).unwrap();
            for scheme in Scheme::ALL {
                let mut cache = CellCache::default();
                let sol = solve_clustering(&inst, &clustering, scheme, 1e3, &opts, &mut cache);
                assert!(network_sum_rate(&sol, &inst) <= sol.intra_cell_rate());
                for u in 0..12 {
                    let cell = sol.clustering.user_cell[u];
                    let total: f64 = sol.powers.row(u).sum();
                    assert!(total <= inst.max_power_w[u] * (1.0 + 1e-9));
                    for b in 0..4 {
                        if !sol.clustering.bs_blocks[cell].contains(&b) {
                            assert_eq!(sol.powers[[u, b]], 0.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.as_str().parse::<Scheme>().unwrap(), s);
        }
        assert!("greedy".parse::<Scheme>().is_err());
    }
}
