use ndarray::Array2;

use super::{alternate, single_stream_denominators, AlternationResult, ChannelAssignment, Round};
use crate::alloc::{high_sinr_coeffs, CellProblem, Diagnostics, PowerMatrix, SolverOptions};

const INNER_CHANGE_FLOOR_W: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct KktOutcome {
    /// Transmit power per user (W), each in `[0, P̄_u]`.
    pub powers: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// Each user picks the BS with the largest SINR; ties go to the lower index.
fn pick_serving_bs(cell: &CellProblem, power: &[f64]) -> Vec<usize> {
    let denom = single_stream_denominators(cell, power);
    (0..cell.n_users())
        .map(|u| {
            let mut best = (0, f64::NEG_INFINITY);
            for b in 0..cell.n_bs() {
                let sinr = cell.gain2[[u, b]] * power[u] / denom[[u, b]];
                if sinr > best.1 {
                    best = (b, sinr);
                }
            }
            best.0
        })
        .collect()
}

/// `min{P̄_u, α_u / price_u}` for every user, where `price_u` sums
/// `α_ũ |h_{u,b(ũ)}|² / (σ²_{b(ũ)} + J_ũ)` over the other users.
fn kkt_map(cell: &CellProblem, serving: &[usize], alpha: &[f64], power: &[f64]) -> Vec<f64> {
    let nu = cell.n_users();
    let denom = single_stream_denominators(cell, power);
    let weight: Vec<f64> = (0..nu).map(|v| alpha[v] / denom[[v, serving[v]]]).collect();
    (0..nu)
        .map(|u| {
            let price: f64 = (0..nu).filter(|&v| v != u).map(|v| weight[v] * cell.gain2[[u, serving[v]]]).sum();
            if price > 0.0 {
                cell.max_power_w[u].min(alpha[u] / price)
            } else {
                cell.max_power_w[u]
            }
        })
        .collect()
}

fn max_relative_change(next: &[f64], prev: &[f64], floor: impl Fn(usize) -> f64) -> f64 {
    next.iter().zip(prev).enumerate().map(|(u, (a, b))| (a - b).abs() / b.abs().max(floor(u))).fold(0.0, f64::max)
}

/// Power allocation for a fixed user → BS assignment.
///
/// Successive high-SINR approximation (α⁽⁰⁾ = 1, β⁽⁰⁾ = 0) with the capped
/// KKT fixed point as the inner solver. Iteration starts from full power.
pub fn kkt_user_power(cell: &CellProblem, serving: &[usize], opts: &SolverOptions) -> KktOutcome {
    let nu = cell.n_users();
    assert_eq!(serving.len(), nu, "every user needs a serving BS");
    let outer_floor = |u: usize| 1e-9 * cell.max_power_w[u];
    let mut diagnostics = Diagnostics::default();
    let mut power = cell.max_power_w.clone();
    let mut alpha = vec![1.0; nu];

    for m in 1..=opts.outer_max_iters {
        diagnostics.outer_iterations = m;
        if m > 1 {
            let denom = single_stream_denominators(cell, &power);
            alpha = (0..nu)
                .map(|u| {
                    let b = serving[u];
                    high_sinr_coeffs(cell.gain2[[u, b]] * power[u] / denom[[u, b]], opts.sinr_floor).0
                })
                .collect();
        }
        let previous = power.clone();
        let mut inner_converged = false;
        for _ in 0..opts.inner_max_iters {
            let next = kkt_map(cell, serving, &alpha, &power);
            diagnostics.inner_iterations += 1;
            let change = max_relative_change(&next, &power, |_| INNER_CHANGE_FLOOR_W);
            power = next;
            if change < opts.inner_tol {
                inner_converged = true;
                break;
            }
        }
        if m > 1 && inner_converged && max_relative_change(&power, &previous, outer_floor) < opts.outer_tol {
            diagnostics.converged = true;
            break;
        }
    }
    let mapped = kkt_map(cell, serving, &alpha, &power);
    diagnostics.residual = max_relative_change(&mapped, &power, |_| INNER_CHANGE_FLOOR_W);
    KktOutcome { powers: power, diagnostics }
}

/// Single-stream power matrix: user `u` sends `power[u]` to `serving[u]`.
fn streams(cell: &CellProblem, serving: &[usize], power: &[f64]) -> (ChannelAssignment, PowerMatrix) {
    let (nu, nb) = (cell.n_users(), cell.n_bs());
    let mut decode = Array2::from_elem((nu, nb), false);
    let mut p = Array2::zeros((nu, nb));
    for u in 0..nu {
        decode[[u, serving[u]]] = true;
        p[[u, serving[u]]] = power[u];
    }
    (ChannelAssignment { decode }, PowerMatrix(p))
}

/// User-centric alternation: every user picks its best BS, then powers are
/// re-solved for that assignment.
pub fn user_centric_allocate(cell: &CellProblem, delta: f64, opts: &SolverOptions) -> AlternationResult {
    alternate(
        cell,
        delta,
        cell.max_power_w.clone(),
        |power| {
            let serving = pick_serving_bs(cell, power);
            let (assignment, powers) = streams(cell, &serving, power);
            let rate = assignment.rate(&powers, cell);
            Round { assignment, powers, rate }
        },
        |assignment| {
            let serving: Vec<usize> = assignment
                .decode
                .rows()
                .into_iter()
                .map(|r| r.iter().position(|&g| g).expect("user-centric rounds decode every user"))
                .collect();
            let out = kkt_user_power(cell, &serving, opts);
            (out.powers, out.diagnostics.converged)
        },
    )
}
