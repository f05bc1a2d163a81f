use super::{network_sum_rate, solve_clustering, CellCache, Scheme};
use crate::alloc::SolverOptions;
use crate::clustering::affiliate_users;
use crate::network::NetworkInstance;
use crate::{Error, Result};

pub const ORACLE_MAX_BS: usize = 2;
pub const ORACLE_MAX_USERS: usize = 3;

/// Best single-stream configuration found on the power grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub rate: f64,
    pub serving: Vec<usize>,
    pub powers: Vec<f64>,
}

/// Exhaustive search over serving BSs and per-user powers on `levels` evenly
/// spaced points of `[0, P̄]` (just `P̄` when `levels = 1`), with the whole
/// network as one cell.
///
/// SINR is evaluated directly from the definition rather than through the
/// solver code. Refuses instances beyond 2 BSs or 3 users.
pub fn brute_force_oracle(instance: &NetworkInstance, levels: usize) -> Result<OracleResult> {
    let (nu, nb) = (instance.n_users(), instance.n_bs());
    if nb > ORACLE_MAX_BS || nu > ORACLE_MAX_USERS {
        return Err(Error::OracleTooLarge(format!(
            "{nb} BSs and {nu} users; the limit is {ORACLE_MAX_BS} and {ORACLE_MAX_USERS}"
        )));
    }
    if levels == 0 {
        return Err(Error::InvalidArgument("oracle needs at least one power level".into()));
    }
    let g = &instance.gain2;
    let w = instance.bandwidth_hz;
    let rate_of = |serving: &[usize], p: &[f64]| -> f64 {
        (0..nu)
            .map(|u| {
                let b = serving[u];
                let interference: f64 = (0..nu).filter(|&v| v != u).map(|v| g[[v, b]] * p[v]).sum();
                w * (1.0 + g[[u, b]] * p[u] / (instance.noise_w[b] + interference)).log2()
            })
            .sum()
    };

    let mut best = OracleResult { rate: f64::NEG_INFINITY, serving: vec![], powers: vec![] };
    let mut serving = vec![0usize; nu];
    let mut level = vec![0usize; nu];
    let step = |u: usize, k: usize| {
        if levels == 1 {
            instance.max_power_w[u]
        } else {
            instance.max_power_w[u] * k as f64 / (levels - 1) as f64
        }
    };
    let mut p = vec![0.0; nu];
    loop {
        loop {
            for u in 0..nu {
                p[u] = step(u, level[u]);
            }
            let r = rate_of(&serving, &p);
            if r > best.rate {
                best = OracleResult { rate: r, serving: serving.clone(), powers: p.clone() };
            }
            if !odometer(&mut level, 0, levels - 1) {
                break;
            }
        }
        if !odometer(&mut serving, 0, nb - 1) {
            break;
        }
    }
    Ok(best)
}

/// Advances a mixed-radix counter over `lo..=hi`; false once it wraps.
fn odometer(digits: &mut [usize], lo: usize, hi: usize) -> bool {
    for d in digits.iter_mut() {
        if *d < hi {
            *d += 1;
            return true;
        }
        *d = lo;
    }
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub oracle: OracleResult,
    /// (scheme, network rate, rate / oracle rate) with one cell for all BSs.
    pub schemes: Vec<(Scheme, f64, f64)>,
}

/// Runs each scheme on the whole network as one cell and divides by the oracle.
pub fn compare_with_oracle(
    instance: &NetworkInstance,
    levels: usize,
    schemes: &[Scheme],
    delta: f64,
    opts: &SolverOptions,
) -> Result<OracleComparison> {
    let oracle = brute_force_oracle(instance, levels)?;
    let all: Vec<usize> = (0..instance.n_bs()).collect();
    let clustering = affiliate_users(&[all], instance)?;
    let schemes = schemes
        .iter()
        .map(|&s| {
            let sol = solve_clustering(instance, &clustering, s, delta, opts, &mut CellCache::default());
            let rate = network_sum_rate(&sol, instance);
            (s, rate, rate / oracle.rate)
        })
        .collect();
    Ok(OracleComparison { oracle, schemes })
}
