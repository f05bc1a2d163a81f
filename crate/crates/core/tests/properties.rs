use proptest::prelude::*;

use vcell::alloc::{
    approximated_objective, cell_rate_continuous, joint_allocate, joint_allocate_observed, ApproxCoeffs, CellProblem,
    SolverOptions,
};
use vcell::alternating::{bs_centric_allocate, iteration_bound, kkt_user_power, user_centric_allocate};
use vcell::cli::{load_config, serialize_config};
use vcell::clustering::{
    affiliate_users, cut_dendrogram, enumerate_partitions, hierarchical_cluster, minimax_linkage, stirling2,
};
use vcell::evaluation::{
    exhaustive_best_clustering, network_sum_rate, solve_clustering, CellCache, ExperimentConfig, Method, Scheme,
};
use vcell::network::{dbm_to_watts, generate_network, watts_to_dbm, NetworkInstance, Point, SystemParams};

const DELTA: f64 = 1e3;

fn instance(n_bs: usize, n_users: usize, seed: u64) -> NetworkInstance {
    generate_network(&SystemParams::default(), n_bs, n_users, seed).unwrap()
}

fn points(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0.0..2500.0f64, 0.0..2500.0f64).prop_map(|(x, y)| Point::new(x, y)), 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dbm_round_trip(x in -200.0..60.0f64) {
        prop_assert!((watts_to_dbm(dbm_to_watts(x)) - x).abs() < 1e-12);
    }

    #[test]
    fn gain_monotone_in_distance(seed in any::<u64>()) {
        let inst = instance(3, 6, seed);
        let mut pairs = Vec::new();
        for (u, up) in inst.user_positions.iter().enumerate() {
            for (b, bp) in inst.bs_positions.iter().enumerate() {
                pairs.push((up.distance(bp), inst.gain2[[u, b]]));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pairs.windows(2) {
            if w[1].0 > w[0].0 {
                prop_assert!(w[1].1 < w[0].1);
            }
        }
    }

    #[test]
    fn generation_is_pure(seed in any::<u64>(), nb in 1usize..5, nu in 1usize..10) {
        prop_assert_eq!(instance(nb, nu, seed), instance(nb, nu, seed));
    }

    #[test]
    fn linkage_is_symmetric(a in points(5), b in points(5)) {
        prop_assert_eq!(minimax_linkage(&a, &b), minimax_linkage(&b, &a));
    }

    #[test]
    fn cuts_are_nested(pts in points(9)) {
        let dend = hierarchical_cluster(&pts);
        let n = pts.len();
        for v in 1..n {
            let coarse = cut_dendrogram(&dend, v).unwrap();
            let fine = cut_dendrogram(&dend, v + 1).unwrap();
            prop_assert_eq!(fine.len(), v + 1);
            for block in &fine {
                prop_assert!(coarse.iter().any(|c| block.iter().all(|x| c.contains(x))));
            }
        }
    }

    #[test]
    fn affiliation_is_proper(seed in any::<u64>(), nb in 1usize..6) {
        let inst = instance(nb, 12, seed);
        let dend = hierarchical_cluster(&inst.bs_positions);
        for v in 1..=nb {
            let c = affiliate_users(&cut_dendrogram(&dend, v).unwrap(), &inst).unwrap();
            prop_assert!(c.validate(&inst).is_ok());
        }
    }

    #[test]
    fn config_round_trip(
        n_bs in 1usize..9,
        n_users in 1usize..50,
        trials in 1usize..1000,
        seed in any::<u64>(),
        delta in 1e-3..1e6f64,
        power in -10.0..40.0f64,
        mask in 1u8..8,
    ) {
        let schemes: Vec<Scheme> = Scheme::ALL.into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s).collect();
        let mut cfg = ExperimentConfig {
            n_bs, n_users, trials, base_seed: seed, delta,
            v_list: (1..=n_bs).rev().collect(),
            methods: vec![Method::Exhaustive],
            schemes,
            ..ExperimentConfig::default()
        };
        cfg.params.max_power_dbm = power;
        let back = load_config(&serialize_config(&cfg), &[]).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn joint_solver_invariants(seed in any::<u64>(), nb in 1usize..4, nu in 1usize..7) {
        let inst = instance(nb, nu, seed);
        let cell = CellProblem::whole_network(&inst);
        let opts = SolverOptions::default();
        let mut worst = 0.0f64;
        let out = joint_allocate_observed(&cell, &opts, &ApproxCoeffs::ones(nu, nb), |p| {
            worst = worst.max(p.budget_violation(&cell.max_power_w));
        });
        prop_assert!(worst <= 1e-12, "inner iterate over budget by {}", worst);
        prop_assert!(out.powers.0.iter().all(|&p| p >= 0.0));
        if out.diagnostics.converged {
            prop_assert!(out.diagnostics.residual <= 10.0 * opts.inner_tol);
        }
        for u in 0..nu {
            let sum = out.powers.row_sum(u);
            let cap = cell.max_power_w[u];
            if out.multipliers[u] > 0.0 {
                prop_assert!((sum - cap).abs() <= opts.bisection_tol * cap);
            } else {
                prop_assert!(sum <= cap);
            }
        }
        let approx = approximated_objective(&out.powers, &out.coeffs, &cell);
        let exact = cell_rate_continuous(&out.powers, &cell);
        prop_assert!(approx <= exact * (1.0 + 1e-12) + 1e-9);
    }

    #[test]
    fn alternation_invariants(seed in any::<u64>(), nb in 1usize..4, nu in 1usize..8) {
        let inst = instance(nb, nu, seed);
        let cell = CellProblem::whole_network(&inst);
        let opts = SolverOptions::default();
        let bound = iteration_bound(&cell, DELTA);
        for (res, legal) in [
            (user_centric_allocate(&cell, DELTA, &opts), true),
            (bs_centric_allocate(&cell, DELTA, &opts), false),
        ] {
            prop_assert!(res.iterations <= bound && !res.hit_iteration_cap);
            prop_assert!(res.trace_is_monotone(DELTA));
            let legal_shape = if legal { res.assignment.is_user_centric() } else { res.assignment.is_bs_centric() };
            prop_assert!(legal_shape);
            prop_assert!(res.powers.budget_violation(&cell.max_power_w) <= 1e-12);
            prop_assert!(res.rate >= *res.rate_trace.last().unwrap());
        }
    }

    #[test]
    fn kkt_matches_indicator_joint(seed in any::<u64>(), nb in 1usize..4, nu in 1usize..6) {
        let inst = instance(nb, nu, seed);
        let cell = CellProblem::whole_network(&inst);
        let opts = SolverOptions::default();
        let serving: Vec<usize> = (0..nu).map(|u| (u * 7 + seed as usize) % nb).collect();
        let kkt = kkt_user_power(&cell, &serving, &opts);
        let mut decode = ndarray::Array2::from_elem((nu, nb), false);
        for (u, &b) in serving.iter().enumerate() {
            decode[[u, b]] = true;
        }
        let joint = joint_allocate(&cell, &opts, &ApproxCoeffs::indicator(&decode));
        let rate = |p: &dyn Fn(usize, usize) -> f64| {
            let mut m = vcell::alloc::PowerMatrix::zeros(nu, nb);
            for (u, &b) in serving.iter().enumerate() {
                m.0[[u, b]] = p(u, b);
            }
            vcell::alloc::decoded_sum_rate(cell.gain2.view(), &cell.noise_w, cell.bandwidth_hz, m.view(), |u, b| decode[[u, b]])
        };
        let r_kkt = rate(&|u, _| kkt.powers[u]);
        let r_joint = rate(&|u, b| joint.powers.get(u, b));
        prop_assert!((r_kkt - r_joint).abs() <= 1e-4 * r_kkt.max(r_joint), "{} vs {}", r_kkt, r_joint);
    }

    #[test]
    fn evaluation_invariants(seed in any::<u64>(), scheme_ix in 0usize..3) {
        let scheme = Scheme::ALL[scheme_ix];
        let inst = instance(4, 10, seed);
        let opts = SolverOptions::default();
        let dend = hierarchical_cluster(&inst.bs_positions);
        let mut cache = CellCache::default();
        for k in 1..=4 {
            let c = affiliate_users(&cut_dendrogram(&dend, k).unwrap(), &inst).unwrap();
            let hier = solve_clustering(&inst, &c, scheme, DELTA, &opts, &mut cache);
            let hier_rate = network_sum_rate(&hier, &inst);
            prop_assert!(hier_rate <= hier.intra_cell_rate() * (1.0 + 1e-12));
            for (ci, (cell, bs)) in hier.cells.iter().zip(&hier.clustering.bs_blocks).enumerate() {
                for (i, u) in hier.clustering.users_of(ci).into_iter().enumerate() {
                    let global: f64 = (0..4).map(|b| hier.powers[[u, b]]).sum();
                    let local: f64 = (0..bs.len()).map(|j| cell.powers.get(i, j)).sum();
                    prop_assert_eq!(global, local);
                }
            }
            let ex = exhaustive_best_clustering(&inst, k, scheme, DELTA, &opts, &mut cache).unwrap();
            prop_assert!(ex.rate >= hier_rate);
            if k == 1 || k == 4 {
                prop_assert!((ex.rate - hier_rate).abs() <= 1e-9 * ex.rate);
            }
            prop_assert_eq!(ex.partitions_evaluated as u128, stirling2(4, k));
        }
    }

    #[test]
    fn bell_numbers(n in 1usize..8) {
        let total: usize = (1..=n).map(|k| enumerate_partitions(n, k).count()).sum();
        let mut row = vec![1u128];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for x in &row {
                next.push(next.last().unwrap() + x);
            }
            row = next;
        }
        prop_assert_eq!(total as u128, *row.last().unwrap());
    }
}
