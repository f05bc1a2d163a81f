//! Alternating channel-access / power-allocation schemes.
//!
//! Both schemes start from full power, pick decode pairs greedily by SINR,
//! score the pick, then re-optimize power for that pick. The loop stops as
//! soon as a round improves the rate by no more than `δ`, returning the
//! better of the last two rounds.

mod bs_centric;
mod user_centric;

pub use bs_centric::bs_centric_allocate;
pub use user_centric::{kkt_user_power, user_centric_allocate, KktOutcome};

use ndarray::Array2;

use crate::alloc::{decoded_sum_rate, ApproxCoeffs, CellProblem, PowerMatrix};

/// Which BS decodes which user: `decode[[u, b]]` is γ_{u,b}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelAssignment {
    pub decode: Array2<bool>,
}

impl ChannelAssignment {
    pub fn empty(n_users: usize, n_bs: usize) -> Self {
        Self { decode: Array2::from_elem((n_users, n_bs), false) }
    }

    /// At most one decoding BS per user.
    pub fn is_user_centric(&self) -> bool {
        self.decode.rows().into_iter().all(|r| r.iter().filter(|&&g| g).count() <= 1)
    }

    /// At most one decoded user per BS.
    pub fn is_bs_centric(&self) -> bool {
        self.decode.columns().into_iter().all(|c| c.iter().filter(|&&g| g).count() <= 1)
    }

    pub fn indicator(&self) -> ApproxCoeffs {
        ApproxCoeffs::indicator(&self.decode)
    }

    /// Rate of the decoded streams under `powers`.
    pub fn rate(&self, powers: &PowerMatrix, cell: &CellProblem) -> f64 {
        decoded_sum_rate(cell.gain2.view(), &cell.noise_w, cell.bandwidth_hz, powers.view(), |u, b| self.decode[[u, b]])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlternationResult {
    pub assignment: ChannelAssignment,
    /// Per-stream powers of the returned round.
    pub powers: PowerMatrix,
    /// Rate of the returned round (the larger of the last two).
    pub rate: f64,
    /// R_1, R_2, … one entry per channel step.
    pub rate_trace: Vec<f64>,
    pub iterations: usize,
    /// Every power step met its convergence test.
    pub power_steps_converged: bool,
    /// The loop was cut by the ⌈R_ub/δ⌉ cap rather than by the δ test.
    pub hit_iteration_cap: bool,
}

impl AlternationResult {
    /// Whether every step before the last improved the rate by more than `delta`.
    pub fn trace_is_monotone(&self, delta: f64) -> bool {
        let n = self.rate_trace.len();
        (0..n.saturating_sub(1)).all(|i| {
            let prev = if i == 0 { 0.0 } else { self.rate_trace[i - 1] };
            self.rate_trace[i] - prev > delta
        })
    }
}

/// ⌈R_ub / δ⌉, the most rounds an alternation can run.
pub fn iteration_bound(cell: &CellProblem, delta: f64) -> usize {
    ((cell.rate_upper_bound() / delta).ceil() as usize).max(1)
}

/// One channel step's outcome.
struct Round {
    assignment: ChannelAssignment,
    powers: PowerMatrix,
    rate: f64,
}

/// Drives the shared alternation loop. `channel_step` maps the current power
/// state to a scored round; `power_step` maps a round's assignment to the
/// next power state and reports whether it converged.
fn alternate<S>(
    cell: &CellProblem,
    delta: f64,
    mut state: S,
    mut channel_step: impl FnMut(&S) -> Round,
    mut power_step: impl FnMut(&ChannelAssignment) -> (S, bool),
) -> AlternationResult {
    assert!(delta > 0.0, "rate threshold must be positive");
    let cap = iteration_bound(cell, delta);
    let mut trace = Vec::new();
    let mut previous: Option<Round> = None;
    let mut all_converged = true;
    loop {
        let round = channel_step(&state);
        trace.push(round.rate);
        let last_rate = previous.as_ref().map_or(0.0, |r| r.rate);
        let improved = round.rate - last_rate > delta;
        let at_cap = trace.len() >= cap;
        if !improved || at_cap {
            let keep = match previous {
                Some(prev) if prev.rate > round.rate => prev,
                _ => round,
            };
            return AlternationResult {
                assignment: keep.assignment,
                powers: keep.powers,
                rate: keep.rate,
                iterations: trace.len(),
                rate_trace: trace,
                power_steps_converged: all_converged,
                hit_iteration_cap: improved && at_cap,
            };
        }
        let (next, converged) = power_step(&round.assignment);
        all_converged &= converged;
        state = next;
        previous = Some(round);
    }
}

/// Noise plus interference at `b` for user `u` when every user transmits a
/// single stream of total power `power[u]`.
pub(crate) fn single_stream_denominators(cell: &CellProblem, power: &[f64]) -> Array2<f64> {
    let (nu, nb) = (cell.n_users(), cell.n_bs());
    let mut out = Array2::zeros((nu, nb));
    for b in 0..nb {
        let received: Vec<f64> = (0..nu).map(|u| cell.gain2[[u, b]] * power[u]).collect();
        let others = crate::alloc::leave_one_out_sums(&received);
        for u in 0..nu {
            out[[u, b]] = cell.noise_w[b] + others[u];
        }
    }
    out
}
