use ndarray::Array2;

use super::{sinr_matrix, CellProblem, PowerMatrix};

/// Coefficients of the bound `log2(1+z) ≥ α(z0)·log2(z) + β(z0)`, tight at
/// `z = z0`. SINRs below `sinr_floor` are raised to it first.
pub fn high_sinr_coeffs(z0: f64, sinr_floor: f64) -> (f64, f64) {
    let z = z0.max(sinr_floor);
    let alpha = z / (1.0 + z);
    let beta = z.ln_1p() / std::f64::consts::LN_2 - alpha * z.log2();
    (alpha, beta)
}

/// Per-stream (α, β) of the successive approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxCoeffs {
    pub alpha: Array2<f64>,
    pub beta: Array2<f64>,
}

impl ApproxCoeffs {
    /// α = 1, β = 0 everywhere: the plain high-SINR approximation.
    pub fn ones(n_users: usize, n_bs: usize) -> Self {
        Self { alpha: Array2::ones((n_users, n_bs)), beta: Array2::zeros((n_users, n_bs)) }
    }

    /// α = 1 on the selected streams and 0 elsewhere, β = 0.
    pub fn indicator(selected: &Array2<bool>) -> Self {
        Self { alpha: selected.mapv(|s| if s { 1.0 } else { 0.0 }), beta: Array2::zeros(selected.dim()) }
    }

    /// Tightens the bound at the given SINRs.
    pub fn from_sinr(sinr: &Array2<f64>, sinr_floor: f64) -> Self {
        let pairs = sinr.mapv(|z| high_sinr_coeffs(z, sinr_floor));
        Self { alpha: pairs.mapv(|(a, _)| a), beta: pairs.mapv(|(_, b)| b) }
    }

    pub fn dim(&self) -> (usize, usize) {
        self.alpha.dim()
    }
}

/// Σ W·(α·log2 SINR + β); streams with α = 0 contribute β only.
pub fn approximated_objective(p: &PowerMatrix, coeffs: &ApproxCoeffs, cell: &CellProblem) -> f64 {
    let sinr = sinr_matrix(p, cell);
    let mut total = 0.0;
    for ((u, b), &a) in coeffs.alpha.indexed_iter() {
        let log_term = if a == 0.0 { 0.0 } else { a * sinr[[u, b]].log2() };
        total += cell.bandwidth_hz * (log_term + coeffs.beta[[u, b]]);
    }
    total
}
