use ndarray::{Array2, ArrayView2};

use super::{CellProblem, PowerMatrix};

/// `out[i] = Σ_{j≠i} values[j]`, without cancellation.
pub(crate) fn leave_one_out(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    let mut acc = 0.0;
    for i in 0..n {
        out[i] = acc;
        acc += values[i];
    }
    acc = 0.0;
    for i in (0..n).rev() {
        out[i] += acc;
        acc += values[i];
    }
    out
}

/// Noise plus interference `σ²_b + J_{u,b}` for every stream, where `J_{u,b}`
/// sums `|h_{ũ,b}|² P_{ũ,b̃}` over every other stream `(ũ,b̃) ≠ (u,b)` as
/// received at `b`.
pub(crate) fn noise_plus_interference_raw(
    gain2: ArrayView2<f64>,
    noise_w: &[f64],
    power: ArrayView2<f64>,
) -> Array2<f64> {
    let (nu, nb) = power.dim();
    let totals: Vec<f64> = power.rows().into_iter().map(|r| r.sum()).collect();
    let mut out = Array2::zeros((nu, nb));
    for b in 0..nb {
        let received: Vec<f64> = (0..nu).map(|u| gain2[[u, b]] * totals[u]).collect();
        let others = leave_one_out(&received);
        for u in 0..nu {
            out[[u, b]] = noise_w[b] + others[u];
        }
    }
    for u in 0..nu {
        let row: Vec<f64> = power.row(u).to_vec();
        let own = leave_one_out(&row);
        for b in 0..nb {
            out[[u, b]] += gain2[[u, b]] * own[b];
        }
    }
    out
}

/// Σ over the pairs selected by `decoded` of `W log2(1 + SINR)`.
pub fn decoded_sum_rate(
    gain2: ArrayView2<f64>,
    noise_w: &[f64],
    bandwidth_hz: f64,
    power: ArrayView2<f64>,
    decoded: impl Fn(usize, usize) -> bool,
) -> f64 {
    let denom = noise_plus_interference_raw(gain2, noise_w, power);
    let mut total = 0.0;
    for ((u, b), &p) in power.indexed_iter() {
        if decoded(u, b) {
            total += bandwidth_hz * (1.0 + gain2[[u, b]] * p / denom[[u, b]]).log2();
        }
    }
    total
}

pub fn interference_plus_noise(p: &PowerMatrix, cell: &CellProblem) -> Array2<f64> {
    noise_plus_interference_raw(cell.gain2.view(), &cell.noise_w, p.view())
}

/// SINR of stream `(u, b)`, straight from the definition.
pub fn sinr_pair(p: &PowerMatrix, u: usize, b: usize, cell: &CellProblem) -> f64 {
    let mut denom = cell.noise_w[b];
    for ((ut, bt), &pw) in p.0.indexed_iter() {
        if (ut, bt) != (u, b) {
            denom += cell.gain2[[ut, b]] * pw;
        }
    }
    cell.gain2[[u, b]] * p.get(u, b) / denom
}

pub fn sinr_matrix(p: &PowerMatrix, cell: &CellProblem) -> Array2<f64> {
    let denom = interference_plus_noise(p, cell);
    Array2::from_shape_fn(p.dim(), |(u, b)| cell.gain2[[u, b]] * p.get(u, b) / denom[[u, b]])
}

/// Σ_{u,b} W log2(1 + SINR_{u,b}(P)).
pub fn cell_rate_continuous(p: &PowerMatrix, cell: &CellProblem) -> f64 {
    decoded_sum_rate(cell.gain2.view(), &cell.noise_w, cell.bandwidth_hz, p.view(), |_, _| true)
}
