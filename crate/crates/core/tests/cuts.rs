mod common;

use common::*;
use mapbb::cuts::{count_cut_induced, cutting_plane_solve, with_cuts, CutStatus};
use mapbb::lp::{self, Simplex};
use mapbb::model::{random_instance, Configuration, PairwiseModel};
use mapbb::vertex::eval_cycle_inequality;
use proptest::prelude::*;

#[test]
fn root_integral_needs_no_cuts() {
    let m = PairwiseModel::complete(vec![0.4, -0.3, 0.2], |_, _| 0.5).unwrap();
    let out = cutting_plane_solve(&m, 10).unwrap();
    assert_eq!(out.status, CutStatus::Integral);
    assert_eq!(out.num_cuts(), 0);
    assert_eq!(out.lp_calls, 1);
    assert_eq!(count_cut_induced(&m, &out.cuts).unwrap(), 0);
}

#[test]
fn triangle_needs_one_cut() {
    let m = frustrated_triangle();
    let out = cutting_plane_solve(&m, 10).unwrap();
    assert_eq!(out.status, CutStatus::Integral);
    assert_eq!(out.num_cuts(), 1);
    assert!((out.value - 0.6).abs() < 1e-12);
    // the tightened relaxation is integral at its optimum
    let r = lp::solve(&with_cuts(&m, &out.cuts).unwrap()).unwrap();
    assert!((r.value().unwrap() - 0.6).abs() < 1e-9);
    assert!(r.point().unwrap()[..3].iter().all(|v| v.abs() < 1e-9 || (v - 1.0).abs() < 1e-9));
    assert_eq!(count_cut_induced(&m, &out.cuts).unwrap(), 0);
}

#[test]
fn round_limit() {
    let edges = [(0, 1, -1.0), (0, 2, -1.0), (1, 2, -1.0), (3, 4, -1.0), (3, 5, -1.0), (4, 5, -1.0)];
    let m = PairwiseModel::new(vec![0.6; 6], edges.to_vec()).unwrap();
    let out = cutting_plane_solve(&m, 1).unwrap();
    assert_eq!(out.status, CutStatus::RoundLimit);
    assert_eq!(out.num_cuts(), 1);
    assert!(cutting_plane_solve(&m, 0).is_err());
    assert_eq!(cutting_plane_solve(&m, 5).unwrap().status, CutStatus::Integral);
}

#[test]
fn k12_integral_outcomes_are_optimal() {
    for k in 0..10 {
        let m = random_instance(12, 0.3, 300 + k);
        let out = cutting_plane_solve(&m, 1000).unwrap();
        if out.status == CutStatus::Integral {
            assert!((out.value - exhaustive_map_value(&m)).abs() <= 1e-9, "seed {}", 300 + k);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cuts_are_valid_and_violated_when_added(n in 3usize..=10, w in 0.5f64..4.0, seed in any::<u64>()) {
        let m = random_instance(n, w, seed);
        let out = cutting_plane_solve(&m, 1000).unwrap();
        for mask in 0u64..1 << n {
            let q = Configuration::from_mask(n, mask).to_point(&m);
            for cut in &out.cuts {
                prop_assert!(eval_cycle_inequality(&q, cut) >= -1e-12);
            }
        }
        // replay the warm solves and check each cut against its trigger
        let mut s = Simplex::<f64>::new(&m.local_lp()).unwrap();
        s.optimize().unwrap();
        for cut in &out.cuts {
            prop_assert!(eval_cycle_inequality(&s.point(), cut) < -1e-9);
            s.add_row(&cut.row).unwrap();
            s.optimize().unwrap();
        }
        if out.status == CutStatus::Integral {
            prop_assert!((out.value - exhaustive_map_value(&m)).abs() <= 1e-9);
        }
        prop_assert_eq!(out.lp_calls, out.num_cuts() + 1);
    }
}
