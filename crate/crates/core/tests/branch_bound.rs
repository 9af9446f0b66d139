mod common;

use common::*;
use mapbb::branch::{solve_ilp, solve_map, solve_map_observed, BranchNode, SearchObserver};
use mapbb::lp::{self, Fixings, LinearProgram, Relation, Row};
use mapbb::model::{random_instance, AgreementModel, PairwiseModel};
use mapbb::vertex::{is_vertex, HalfIntegralPoint, SNAP_TOL};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn frustrated_triangle_takes_one_branch() {
    let s = solve_map(&frustrated_triangle()).unwrap();
    assert!((s.value - 0.6).abs() < 1e-12);
    assert_eq!(s.configuration.0.iter().filter(|b| **b).count(), 1);
    assert_eq!((s.stats.lp_calls, s.stats.branches), (3, 1));
}

#[test]
fn single_node_follows_sign() {
    for t in [-1.5, 2.0] {
        let m = PairwiseModel::new(vec![t], vec![]).unwrap();
        let s = solve_map(&m).unwrap();
        assert_eq!(s.configuration.0, vec![t > 0.0]);
        assert_eq!(s.stats.lp_calls, 1);
    }
}

#[test]
fn attractive_models_are_tight_at_the_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let n = 10;
        let theta = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let edges = complete_edges(n).into_iter().map(|(i, j)| (i, j, rng.gen_range(0.0..0.5))).collect();
        let m = AgreementModel::new(theta, edges).unwrap().to_pairwise().unwrap();
        assert!(m.weights().iter().all(|w| *w >= 0.0));
        let s = solve_map(&m).unwrap();
        assert_eq!((s.stats.branches, s.stats.lp_calls), (0, 1));
        assert!((s.value - exhaustive_map_value(&m)).abs() <= 1e-9);
    }
}

#[test]
fn k12_values_are_exact() {
    for k in 0..25 {
        let m = random_instance(12, 0.3, 500 + k);
        let s = solve_map(&m).unwrap();
        assert!((s.value - exhaustive_map_value(&m)).abs() <= 1e-9, "seed {}", 500 + k);
        assert!((m.score(&s.configuration) - s.value).abs() <= 1e-9);
    }
}

/// Checks at every iteration that the frontier splits the configurations.
struct Partition {
    n: usize,
    iterations: usize,
}

impl SearchObserver for Partition {
    fn on_frontier(&mut self, frontier: &[&BranchNode]) {
        self.iterations += 1;
        let vars: Vec<usize> = (0..self.n).collect();
        for mask in 0u64..1 << self.n {
            let x: Vec<bool> = (0..self.n).map(|i| mask >> i & 1 == 1).collect();
            let owners = frontier.iter().filter(|node| node.admits(&vars, &x)).count();
            assert_eq!(owners, 1, "configuration {mask:b} in {owners} nodes");
        }
        for node in frontier {
            let zero: Vec<usize> = node.fixed_zero().collect();
            assert!(node.fixed_one().all(|j| !zero.contains(&j)));
            for (&j, &v) in &node.fixings {
                assert!((node.point[j] - v).abs() <= 1e-9);
            }
        }
    }

    fn wants_frontier(&self) -> bool {
        true
    }
}

#[test]
fn frontier_partitions_the_configurations() {
    let mut iterations = 0;
    for (k, n) in (4..=10).cycle().take(21).enumerate() {
        let m = random_instance(n, 2.0, k as u64);
        let mut obs = Partition { n, iterations: 0 };
        solve_map_observed(&m, &m.local_lp(), &mut obs).unwrap();
        iterations += obs.iterations;
    }
    assert!(iterations > 21);
}

struct VertexCheck<'a> {
    model: &'a PairwiseModel,
    nodes: usize,
}

impl SearchObserver for VertexCheck<'_> {
    fn on_solved(&mut self, node: &BranchNode) {
        self.nodes += 1;
        let q = HalfIntegralPoint::snap(&node.point, SNAP_TOL).expect("half-integral");
        assert!(is_vertex(&q, self.model).unwrap());
    }
}

#[test]
fn child_optima_are_vertices_of_the_original_polytope() {
    let mut seen = 0;
    for k in 0..10 {
        let m = random_instance(12, 2.0, 900 + k);
        let mut obs = VertexCheck { model: &m, nodes: 0 };
        solve_map_observed(&m, &m.local_lp(), &mut obs).unwrap();
        seen += obs.nodes;
    }
    assert!(seen > 10);
}

#[test]
fn infeasible_integer_program() {
    // 2x = 1 has only the fractional solution
    let lp = LinearProgram::new(vec![1.0]).add_row(Row::eq(vec![(0, 2.0)], 1.0)).unwrap();
    let (sol, stats) = solve_ilp(&lp, &[0]).unwrap();
    assert!(sol.is_none());
    assert_eq!(stats.lp_calls, 3);
}

fn arb_mip() -> impl Strategy<Value = (LinearProgram, usize)> {
    (2usize..=6, 0usize..=2, 1usize..=4).prop_flat_map(|(ni, nc, m)| {
        let n = ni + nc;
        (
            prop::collection::vec(-5i32..=5, n),
            prop::collection::vec((prop::collection::vec(-3i32..=3, n), 0i32..=6), m),
        )
            .prop_map(move |(c, rows)| {
                let mut lp = LinearProgram::new(c.iter().map(|&v| v as f64).collect());
                for (a, b) in rows {
                    let a: Vec<f64> = a.iter().map(|&v| v as f64).collect();
                    lp.push_row(Row::dense(&a, Relation::Le, b as f64 / 2.0)).unwrap();
                }
                (lp, ni)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn map_matches_enumeration(n in 2usize..=8, w in 0.1f64..3.0, seed in any::<u64>()) {
        let m = random_instance(n, w, seed);
        let s = solve_map(&m).unwrap();
        prop_assert!((s.value - exhaustive_map_value(&m)).abs() <= 1e-9);
        prop_assert_eq!(s.stats.lp_calls, 2 * s.stats.branches + 1);
    }

    #[test]
    fn mixed_programs_match_enumeration((lp, ni) in arb_mip()) {
        let ints: Vec<usize> = (0..ni).collect();
        // enumerate the integer block; the continuous rest is an LP
        let mut best: Option<f64> = None;
        for mask in 0u64..1 << ni {
            let fix: Fixings = (0..ni).map(|j| (j, (mask >> j & 1) as f64)).collect();
            let r = lp::solve_fixed(&lp, &fix).unwrap();
            if let Some(v) = r.value() {
                best = Some(best.map_or(*v, |b: f64| b.max(*v)));
            }
        }
        let (sol, stats) = solve_ilp(&lp, &ints).unwrap();
        prop_assert_eq!(sol.is_some(), best.is_some());
        if let (Some(sol), Some(b)) = (sol, best) {
            prop_assert!((sol.value - b).abs() <= 1e-9);
            prop_assert!(ints.iter().all(|&j| sol.point[j] == 0.0 || sol.point[j] == 1.0));
            prop_assert!(lp.is_feasible(&sol.point, 1e-7));
        }
        prop_assert_eq!(stats.lp_calls, 2 * stats.branches + 1);
    }
}
