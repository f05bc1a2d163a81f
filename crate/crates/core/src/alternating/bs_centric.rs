use ndarray::Array2;

use super::{alternate, single_stream_denominators, AlternationResult, ChannelAssignment, Round};
use crate::alloc::{joint_allocate, CellProblem, PowerMatrix, SolverOptions};

/// Each BS picks the user with the largest SINR at the current per-user
/// totals; ties go to the lower user index. BSs of an empty cell pick nobody.
fn pick_users(cell: &CellProblem, totals: &[f64]) -> ChannelAssignment {
    let (nu, nb) = (cell.n_users(), cell.n_bs());
    let mut assignment = ChannelAssignment::empty(nu, nb);
    if nu == 0 {
        return assignment;
    }
    let denom = single_stream_denominators(cell, totals);
    for b in 0..nb {
        let mut best = (0, f64::NEG_INFINITY);
        for u in 0..nu {
            let sinr = cell.gain2[[u, b]] * totals[u] / denom[[u, b]];
            if sinr > best.1 {
                best = (u, sinr);
            }
        }
        assignment.decode[[best.0, b]] = true;
    }
    assignment
}

/// Moves each selected user's total power onto the streams its selecting
/// BSs decode, keeping the current proportions among them (even split if it
/// has none yet). Unselected users keep their streams as they are.
fn route_to_decoders(current: &PowerMatrix, assignment: &ChannelAssignment) -> PowerMatrix {
    let (nu, nb) = current.dim();
    let mut out: Array2<f64> = current.0.clone();
    for u in 0..nu {
        let selected: Vec<usize> = (0..nb).filter(|&b| assignment.decode[[u, b]]).collect();
        if selected.is_empty() {
            continue;
        }
        let total = current.row_sum(u);
        let on_selected: f64 = selected.iter().map(|&b| current.get(u, b)).sum();
        for b in 0..nb {
            out[[u, b]] = 0.0;
        }
        for &b in &selected {
            out[[u, b]] =
                if on_selected > 0.0 { total * current.get(u, b) / on_selected } else { total / selected.len() as f64 };
        }
    }
    PowerMatrix(out)
}

/// BS-centric alternation: every BS picks its best user, then the joint
/// solver re-allocates power starting from the selection's indicator
/// coefficients.
pub fn bs_centric_allocate(cell: &CellProblem, delta: f64, opts: &SolverOptions) -> AlternationResult {
    alternate(
        cell,
        delta,
        PowerMatrix::uniform_split(cell),
        |state| {
            let totals: Vec<f64> = (0..cell.n_users()).map(|u| state.row_sum(u)).collect();
            let assignment = pick_users(cell, &totals);
            let powers = route_to_decoders(state, &assignment);
            let rate = assignment.rate(&powers, cell);
            Round { assignment, powers, rate }
        },
        |assignment| {
            let out = joint_allocate(cell, opts, &assignment.indicator());
            (out.powers, out.diagnostics.converged)
        },
    )
}
