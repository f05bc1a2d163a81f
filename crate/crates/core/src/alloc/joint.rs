//! Joint channel access and power allocation over the continuous relaxation.
//!
//! Outer loop: tighten the high-SINR bound at the current SINRs. Inner loop:
//! iterate the KKT fixed point
//!
//! ```text
//! P_{u,b} = W α_{u,b} / (λ_u ln 2 + W · price_{u,b}(P))
//! ```
//!
//! with the per-user budget multiplier λ_u found by bisection whenever the
//! unconstrained row would overshoot the budget.

use std::f64::consts::LN_2;

use ndarray::Array2;

use super::sinr::{leave_one_out, noise_plus_interference_raw};
use super::{cell_rate_continuous, sinr_matrix, ApproxCoeffs, CellProblem, Diagnostics, PowerMatrix, SolverOptions};

/// Relative-change floor used when comparing inner iterates (W).
const INNER_CHANGE_FLOOR_W: f64 = 1e-15;

/// Outer-iteration changes are measured relative to at least this fraction
/// of the user's budget.
const OUTER_CHANGE_FLOOR: f64 = 1e-9;

const MAX_BISECTION_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct JointOutcome {
    pub powers: PowerMatrix,
    /// Coefficients of the last approximated problem solved.
    pub coeffs: ApproxCoeffs,
    /// Budget multipliers λ_u of the last inner step.
    pub multipliers: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// Σ_{(ũ,b̃)≠(u,b)} α_{ũ,b̃} |h_{u,b̃}|² / (σ²_{b̃} + J_{ũ,b̃}), term by term.
pub fn interference_price(p: &PowerMatrix, coeffs: &ApproxCoeffs, u: usize, b: usize, cell: &CellProblem) -> f64 {
    let denom = noise_plus_interference_raw(cell.gain2.view(), &cell.noise_w, p.view());
    let mut price = 0.0;
    for ((ut, bt), &a) in coeffs.alpha.indexed_iter() {
        if (ut, bt) != (u, b) {
            price += a * cell.gain2[[u, bt]] / denom[[ut, bt]];
        }
    }
    price
}

/// [`interference_price`] for every stream at once, in O(|U|·|B|²).
pub fn price_matrix(p: &PowerMatrix, coeffs: &ApproxCoeffs, cell: &CellProblem) -> Array2<f64> {
    let (nu, nb) = p.dim();
    let denom = noise_plus_interference_raw(cell.gain2.view(), &cell.noise_w, p.view());
    let weight = Array2::from_shape_fn((nu, nb), |(u, b)| coeffs.alpha[[u, b]] / denom[[u, b]]);
    let column_total: Vec<f64> = (0..nb).map(|b| weight.column(b).sum()).collect();
    let column_others: Vec<Vec<f64>> = (0..nb).map(|b| leave_one_out(&weight.column(b).to_vec())).collect();

    let mut price = Array2::zeros((nu, nb));
    for u in 0..nu {
        let via: Vec<f64> = (0..nb).map(|bt| cell.gain2[[u, bt]] * column_total[bt]).collect();
        let other_bs = leave_one_out(&via);
        for b in 0..nb {
            price[[u, b]] = other_bs[b] + cell.gain2[[u, b]] * column_others[b][u];
        }
    }
    price
}

/// Row of the fixed-point map for one user at multiplier `lambda`.
fn row_at(lambda: f64, alpha: &[f64], price: &[f64], w: f64) -> Vec<f64> {
    alpha
        .iter()
        .zip(price)
        .map(|(&a, &pr)| {
            if a == 0.0 {
                0.0
            } else {
                let d = lambda * LN_2 + w * pr;
                if d > 0.0 {
                    w * a / d
                } else {
                    f64::INFINITY
                }
            }
        })
        .collect()
}

/// Applies the map to one user's row, choosing λ_u so the budget holds.
fn solve_row(alpha: &[f64], price: &[f64], budget: f64, w: f64, tol: f64) -> (Vec<f64>, f64) {
    let total = |row: &[f64]| row.iter().sum::<f64>();
    let free = row_at(0.0, alpha, price, w);
    if total(&free) <= budget {
        return (free, 0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut row = row_at(hi, alpha, price, w);
    while total(&row) > budget {
        lo = hi;
        hi *= 2.0;
        row = row_at(hi, alpha, price, w);
    }
    for _ in 0..MAX_BISECTION_STEPS {
        if total(&row) >= budget * (1.0 - tol) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let candidate = row_at(mid, alpha, price, w);
        if total(&candidate) > budget {
            lo = mid;
        } else {
            hi = mid;
            row = candidate;
        }
    }
    (row, hi)
}

/// One synchronous application of the fixed-point map. Returns the new
/// powers and the multipliers λ_u used.
pub fn fixed_point_step(
    p: &PowerMatrix,
    coeffs: &ApproxCoeffs,
    cell: &CellProblem,
    opts: &SolverOptions,
) -> (PowerMatrix, Vec<f64>) {
    let (nu, nb) = p.dim();
    let price = price_matrix(p, coeffs, cell);
    let mut next = Array2::zeros((nu, nb));
    let mut multipliers = Vec::with_capacity(nu);
    for u in 0..nu {
        let alpha = coeffs.alpha.row(u).to_vec();
        let (row, lambda) =
            solve_row(&alpha, &price.row(u).to_vec(), cell.max_power_w[u], cell.bandwidth_hz, opts.bisection_tol);
        for (b, v) in row.into_iter().enumerate() {
            next[[u, b]] = v;
        }
        multipliers.push(lambda);
    }
    (PowerMatrix(next), multipliers)
}

/// max |P − f(P)| / max(P, 1e-15) over all streams.
pub fn fixed_point_residual(p: &PowerMatrix, coeffs: &ApproxCoeffs, cell: &CellProblem, opts: &SolverOptions) -> f64 {
    let (mapped, _) = fixed_point_step(p, coeffs, cell, opts);
    mapped.max_relative_change(p, |_| INNER_CHANGE_FLOOR_W)
}

pub fn joint_allocate(cell: &CellProblem, opts: &SolverOptions, init: &ApproxCoeffs) -> JointOutcome {
    joint_allocate_observed(cell, opts, init, |_| {})
}

/// [`joint_allocate`] that hands every inner iterate to `observer`.
pub fn joint_allocate_observed(
    cell: &CellProblem,
    opts: &SolverOptions,
    init: &ApproxCoeffs,
    mut observer: impl FnMut(&PowerMatrix),
) -> JointOutcome {
    let (nu, nb) = (cell.n_users(), cell.n_bs());
    assert_eq!(init.dim(), (nu, nb), "initial coefficients do not match the cell");
    if nu == 0 {
        return JointOutcome {
            powers: PowerMatrix::zeros(0, nb),
            coeffs: init.clone(),
            multipliers: Vec::new(),
            diagnostics: Diagnostics { converged: true, ..Diagnostics::default() },
        };
    }

    let outer_floor = |u: usize| OUTER_CHANGE_FLOOR * cell.max_power_w[u];
    let mut diagnostics = Diagnostics::default();
    let mut coeffs = init.clone();
    let mut powers = PowerMatrix::uniform_split(cell);
    let mut multipliers = vec![0.0; nu];
    let mut best: Option<(f64, PowerMatrix, ApproxCoeffs, Vec<f64>)> = None;

    for m in 1..=opts.outer_max_iters {
        diagnostics.outer_iterations = m;
        if m > 1 {
            coeffs = ApproxCoeffs::from_sinr(&sinr_matrix(&powers, cell), opts.sinr_floor);
        }
        let previous = powers.clone();
        let mut inner_converged = false;
        for _ in 0..opts.inner_max_iters {
            let (next, lambdas) = fixed_point_step(&powers, &coeffs, cell, opts);
            observer(&next);
            diagnostics.inner_iterations += 1;
            let change = next.max_relative_change(&powers, |_| INNER_CHANGE_FLOOR_W);
            powers = next;
            multipliers = lambdas;
            if change < opts.inner_tol {
                inner_converged = true;
                break;
            }
        }

        let rate = cell_rate_continuous(&powers, cell);
        if best.as_ref().is_none_or(|(r, ..)| rate > *r) {
            best = Some((rate, powers.clone(), coeffs.clone(), multipliers.clone()));
        }
        if m > 1 && inner_converged && powers.max_relative_change(&previous, outer_floor) < opts.outer_tol {
            diagnostics.converged = true;
            break;
        }
    }

    if !diagnostics.converged {
        if let Some((_, p, c, l)) = best {
            powers = p;
            coeffs = c;
            multipliers = l;
        }
    }
    diagnostics.residual = fixed_point_residual(&powers, &coeffs, cell, opts);
    JointOutcome { powers, coeffs, multipliers, diagnostics }
}
