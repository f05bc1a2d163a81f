//! Per-cell allocation math shared by all three schemes.
//!
//! A cell is solved in isolation: only its own users and BSs exist, so the
//! interference seen inside a cell never includes other cells.

mod approx;
mod joint;
mod sinr;

pub use approx::{approximated_objective, high_sinr_coeffs, ApproxCoeffs};
pub use joint::{
    fixed_point_residual, fixed_point_step, interference_price, joint_allocate, joint_allocate_observed, price_matrix,
    JointOutcome,
};
pub(crate) use sinr::leave_one_out as leave_one_out_sums;
pub use sinr::{cell_rate_continuous, decoded_sum_rate, interference_plus_noise, sinr_matrix, sinr_pair};

use ndarray::{Array2, ArrayView2};

use crate::network::NetworkInstance;

/// One virtual cell's sub-problem, with cell-local indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CellProblem {
    /// Global indices of the cell's users; row `i` of `gain2` is `user_ids[i]`.
    pub user_ids: Vec<usize>,
    /// Global indices of the cell's BSs; column `j` of `gain2` is `bs_ids[j]`.
    pub bs_ids: Vec<usize>,
    pub gain2: Array2<f64>,
    pub noise_w: Vec<f64>,
    pub max_power_w: Vec<f64>,
    pub bandwidth_hz: f64,
}

impl CellProblem {
    pub fn from_instance(instance: &NetworkInstance, user_ids: &[usize], bs_ids: &[usize]) -> Self {
        assert!(!bs_ids.is_empty(), "a cell needs at least one BS");
        let gain2 =
            Array2::from_shape_fn((user_ids.len(), bs_ids.len()), |(i, j)| instance.gain2[[user_ids[i], bs_ids[j]]]);
        Self {
            user_ids: user_ids.to_vec(),
            bs_ids: bs_ids.to_vec(),
            gain2,
            noise_w: bs_ids.iter().map(|&b| instance.noise_w[b]).collect(),
            max_power_w: user_ids.iter().map(|&u| instance.max_power_w[u]).collect(),
            bandwidth_hz: instance.bandwidth_hz,
        }
    }

    /// The whole network treated as a single cell.
    pub fn whole_network(instance: &NetworkInstance) -> Self {
        let users: Vec<usize> = (0..instance.n_users()).collect();
        let bss: Vec<usize> = (0..instance.n_bs()).collect();
        Self::from_instance(instance, &users, &bss)
    }

    pub fn n_users(&self) -> usize {
        self.user_ids.len()
    }

    pub fn n_bs(&self) -> usize {
        self.bs_ids.len()
    }

    /// Σ over every (user, BS) pair of the interference-free full-power rate.
    /// No decode assignment can exceed it.
    pub fn rate_upper_bound(&self) -> f64 {
        let mut total = 0.0;
        for ((u, b), &g) in self.gain2.indexed_iter() {
            total += self.bandwidth_hz * (1.0 + g * self.max_power_w[u] / self.noise_w[b]).log2();
        }
        total
    }
}

/// Transmit power per (user, BS) stream in watts, cell-local indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerMatrix(pub Array2<f64>);

impl PowerMatrix {
    pub fn zeros(n_users: usize, n_bs: usize) -> Self {
        Self(Array2::zeros((n_users, n_bs)))
    }

    /// Every user splits its budget evenly over the cell's BSs.
    pub fn uniform_split(cell: &CellProblem) -> Self {
        let nb = cell.n_bs() as f64;
        Self(Array2::from_shape_fn((cell.n_users(), cell.n_bs()), |(u, _)| cell.max_power_w[u] / nb))
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.0.view()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.0.dim()
    }

    pub fn get(&self, u: usize, b: usize) -> f64 {
        self.0[[u, b]]
    }

    /// Total transmit power of user `u`.
    pub fn row_sum(&self, u: usize) -> f64 {
        self.0.row(u).sum()
    }

    /// Largest relative budget excess `(Σ_b P_{u,b} - P̄_u) / P̄_u`, or 0 when
    /// every budget holds.
    pub fn budget_violation(&self, max_power_w: &[f64]) -> f64 {
        (0..self.0.nrows()).map(|u| ((self.row_sum(u) - max_power_w[u]) / max_power_w[u]).max(0.0)).fold(0.0, f64::max)
    }

    /// Largest `|self - prev| / max(prev, floor_u)` over all entries.
    pub fn max_relative_change(&self, prev: &PowerMatrix, floor: impl Fn(usize) -> f64) -> f64 {
        let mut worst: f64 = 0.0;
        for ((u, b), &p) in self.0.indexed_iter() {
            let q = prev.0[[u, b]];
            worst = worst.max((p - q).abs() / q.abs().max(floor(u)));
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub outer_max_iters: usize,
    pub inner_max_iters: usize,
    pub outer_tol: f64,
    pub inner_tol: f64,
    pub sinr_floor: f64,
    pub bisection_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            outer_max_iters: 50,
            inner_max_iters: 500,
            outer_tol: 1e-6,
            inner_tol: 1e-6,
            sinr_floor: 1e-12,
            bisection_tol: 1e-9,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> crate::Result<()> {
        if self.outer_max_iters == 0 || self.inner_max_iters == 0 {
            return Err(crate::Error::InvalidArgument("iteration caps must be at least 1".into()));
        }
        for (name, v) in [
            ("outer_tol", self.outer_tol),
            ("inner_tol", self.inner_tol),
            ("sinr_floor", self.sinr_floor),
            ("bisection_tol", self.bisection_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(crate::Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// How a power solve ended.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub converged: bool,
    pub outer_iterations: usize,
    /// Inner iterations summed over all outer iterations.
    pub inner_iterations: usize,
    /// Fixed-point residual at the returned powers.
    pub residual: f64,
}
