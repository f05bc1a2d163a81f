use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{
    exhaustive_best_clustering, network_sum_rate, solve_clustering, AllocationResult, CellCache, NetworkSolution,
    Scheme,
};
use crate::alloc::SolverOptions;
use crate::clustering::{affiliate_users, cut_dendrogram, hierarchical_cluster};
use crate::network::{generate_network, SystemParams};
use crate::{Error, Result};

/// How the BS partition is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Hierarchical,
    Exhaustive,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Hierarchical, Method::Exhaustive];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Hierarchical => "hierarchical",
            Method::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: SystemParams,
    pub n_bs: usize,
    pub n_users: usize,
    pub trials: usize,
    /// Trial `t` uses seed `base_seed + t`.
    pub base_seed: u64,
    pub v_list: Vec<usize>,
    pub methods: Vec<Method>,
    pub schemes: Vec<Scheme>,
    /// Alternation stopping threshold δ (bit/s).
    pub delta: f64,
    pub solver: SolverOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::default(),
            n_bs: 6,
            n_users: 30,
            trials: 500,
            base_seed: 1,
            v_list: (1..=6).collect(),
            methods: Method::ALL.to_vec(),
            schemes: Scheme::ALL.to_vec(),
            delta: 1e3,
            solver: SolverOptions::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.solver.validate()?;
        if self.n_bs == 0 || self.n_users == 0 {
            return Err(Error::InvalidArgument("n_bs and n_users must be positive".into()));
        }
        if let Some(&v) = self.v_list.iter().find(|&&v| v == 0 || v > self.n_bs) {
            return Err(Error::CutOutOfRange { leaves: self.n_bs, requested: v });
        }
        if self.v_list.is_empty() || self.methods.is_empty() || self.schemes.is_empty() {
            return Err(Error::InvalidArgument("v_list, methods and schemes must be nonempty".into()));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidArgument(format!("delta must be positive, got {}", self.delta)));
        }
        Ok(())
    }
}

/// One (trial, method, scheme, V) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub trial: usize,
    pub seed: u64,
    pub method: Method,
    pub scheme: Scheme,
    pub v: usize,
    pub sum_rate_bps: f64,
    pub converged_cells: usize,
    pub total_cells: usize,
    /// `;`-separated notes, empty when clean.
    pub warnings: String,
}

/// Mean and standard error of the sum rate over trials.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: Method,
    pub scheme: Scheme,
    pub v: usize,
    pub mean_rate: f64,
    pub stderr: f64,
    pub n: usize,
}

/// Counters over every cell solved in a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Audit {
    pub cells_solved: u64,
    pub nonconverged_cells: u64,
    pub alternation_runs: u64,
    /// Runs that exceeded ⌈R_ub/δ⌉ or were stopped by it.
    pub bound_violations: u64,
    /// Runs whose rate trace did not rise by more than δ before stopping.
    pub trace_violations: u64,
    pub partitions_evaluated: u64,
}

impl Audit {
    pub(super) fn record(&mut self, res: &AllocationResult) {
        self.cells_solved += 1;
        self.nonconverged_cells += u64::from(!res.converged);
        if let Some(a) = res.alternation {
            self.alternation_runs += 1;
            self.bound_violations += u64::from(!a.within_bound());
            self.trace_violations += u64::from(!a.trace_monotone);
        }
    }

    pub fn merge(&mut self, other: &Audit) {
        self.cells_solved += other.cells_solved;
        self.nonconverged_cells += other.nonconverged_cells;
        self.alternation_runs += other.alternation_runs;
        self.bound_violations += other.bound_violations;
        self.trace_violations += other.trace_violations;
        self.partitions_evaluated += other.partitions_evaluated;
    }

    pub fn is_clean(&self) -> bool {
        self.bound_violations == 0 && self.trace_violations == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    /// Sorted by (trial, method, scheme, v).
    pub rows: Vec<ResultRow>,
    pub summary: Vec<SummaryRow>,
    pub audit: Audit,
}

/// Runs every trial on the current rayon pool. Output does not depend on
/// the number of threads.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let per_trial: Vec<(Vec<ResultRow>, Audit)> =
        (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut audit = Audit::default();
    for (r, a) in per_trial {
        rows.extend(r);
        audit.merge(&a);
    }
    rows.sort_by_key(|r| (r.trial, r.method, r.scheme, r.v));
    let summary = summarize(&rows);
    Ok(ExperimentOutput { rows, summary, audit })
}

fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<(Vec<ResultRow>, Audit)> {
    let seed = cfg.base_seed.wrapping_add(trial as u64);
    let instance = generate_network(&cfg.params, cfg.n_bs, cfg.n_users, seed)?;
    let dendrogram = hierarchical_cluster(&instance.bs_positions);
    let mut rows = Vec::new();
    let mut audit = Audit::default();
    for &scheme in &cfg.schemes {
        // Both methods share cells, so one memo per scheme.
        let mut cache = CellCache::default();
        for &method in &cfg.methods {
            for &v in &cfg.v_list {
                let (sol, rate) = match method {
                    Method::Hierarchical => {
                        let blocks = cut_dendrogram(&dendrogram, v)?;
                        let clustering = affiliate_users(&blocks, &instance)?;
                        let sol = solve_clustering(&instance, &clustering, scheme, cfg.delta, &cfg.solver, &mut cache);
                        let rate = network_sum_rate(&sol, &instance);
                        (sol, rate)
                    }
                    Method::Exhaustive => {
                        let res = exhaustive_best_clustering(&instance, v, scheme, cfg.delta, &cfg.solver, &mut cache)?;
                        audit.partitions_evaluated += res.partitions_evaluated;
                        (res.solution, res.rate)
                    }
                };
                rows.push(ResultRow {
                    trial,
                    seed,
                    method,
                    scheme,
                    v,
                    sum_rate_bps: rate,
                    converged_cells: sol.converged_cells(),
                    total_cells: sol.cells.len(),
                    warnings: warnings(&sol),
                });
            }
        }
        audit.merge(&cache.audit);
    }
    Ok((rows, audit))
}

fn warnings(sol: &NetworkSolution) -> String {
    let mut notes = Vec::new();
    let stalled = sol.cells.len() - sol.converged_cells();
    if stalled > 0 {
        notes.push(format!("nonconverged_cells={stalled}"));
    }
    if sol.cells.iter().any(|c| c.alternation.is_some_and(|a| a.hit_cap)) {
        notes.push("iteration_cap".to_string());
    }
    notes.join(";")
}

/// Groups rows by (method, scheme, v); the standard error uses the sample
/// deviation and is zero for a single trial.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(Method, Scheme, usize), Vec<f64>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.method, r.scheme, r.v)).or_default().push(r.sum_rate_bps);
    }
    groups
        .into_iter()
        .map(|((method, scheme, v), xs)| {
            let n = xs.len();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let stderr = if n > 1 {
                let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                (var / n as f64).sqrt()
            } else {
                0.0
            };
            SummaryRow { method, scheme, v, mean_rate: mean, stderr, n }
        })
        .collect()
}
