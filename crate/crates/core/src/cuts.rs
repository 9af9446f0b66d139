//! Cycle-inequality cutting planes for the local polytope.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::branch::{first_fractional, INTEGRALITY_TOL};
use crate::error::{Error, Result};
use crate::estimator::{estimate_svc, estimate_svc_on, ConfoundingReport};
use crate::lp::{LinearProgram, LpStatus, Simplex};
use crate::model::{Configuration, PairwiseModel};
use crate::vertex::{eval_cycle_inequality, separate_cycle, CycleCut, SEPARATION_TOL};

pub const DEFAULT_MAX_ROUNDS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutStatus {
    /// The optimum of the tightened relaxation is integral.
    Integral,
    /// No violated cycle inequality, or only one already present.
    StalledFractional,
    RoundLimit,
}

#[derive(Clone, Debug)]
pub struct CutOutcome {
    pub status: CutStatus,
    /// Optimum of the final relaxation.
    pub point: Vec<f64>,
    /// Its objective, constant included.
    pub value: f64,
    pub cuts: Vec<CycleCut>,
    pub lp_calls: usize,
    /// The local polytope with every appended cut.
    pub lp: LinearProgram,
    /// The round ended because separation returned a cut already present.
    pub duplicate_cut: bool,
}

impl CutOutcome {
    pub fn num_cuts(&self) -> usize {
        self.cuts.len()
    }
}

/// Solves the local LP and appends the most violated cycle inequality until
/// the optimum is integral, separation finds nothing, or `max_rounds` cuts
/// have been added. Each re-solve restarts from the previous basis.
pub fn cutting_plane_solve(model: &PairwiseModel, max_rounds: usize) -> Result<CutOutcome> {
    if max_rounds == 0 {
        return Err(Error::InvalidInput("max_rounds must be at least 1".into()));
    }
    let nodes: Vec<usize> = (0..model.num_nodes()).collect();
    let mut lp = model.local_lp();
    let mut simplex = Simplex::<f64>::new(&lp)?;
    let mut lp_calls = 1;
    expect_optimal(simplex.optimize()?)?;
    let mut cuts: Vec<CycleCut> = Vec::new();
    let mut keys = HashSet::new();
    let mut duplicate_cut = false;
    let status = loop {
        let point = simplex.point();
        if first_fractional(&point, &nodes).is_none() {
            break CutStatus::Integral;
        }
        let Some(cut) = separate_cycle(&point, model) else {
            break CutStatus::StalledFractional;
        };
        debug_assert!(eval_cycle_inequality(&point, &cut) < -SEPARATION_TOL);
        if !keys.insert(cut.key()) {
            duplicate_cut = true;
            break CutStatus::StalledFractional;
        }
        if cuts.len() == max_rounds {
            break CutStatus::RoundLimit;
        }
        simplex.add_row(&cut.row)?;
        lp.push_row(cut.row.clone())?;
        cuts.push(cut);
        lp_calls += 1;
        expect_optimal(simplex.optimize()?)?;
    };
    // an integral optimum is scored exactly rather than through the tableau
    let (point, value) = match Configuration::from_point(&simplex.point(), model.num_nodes(), INTEGRALITY_TOL) {
        Some(c) if status == CutStatus::Integral => (c.to_point(model), model.score(&c)),
        _ => (simplex.point(), simplex.value() + model.constant()),
    };
    Ok(CutOutcome {
        status,
        value,
        point,
        cuts,
        lp_calls,
        lp,
        duplicate_cut,
    })
}

fn expect_optimal(status: LpStatus) -> Result<()> {
    match status {
        LpStatus::Optimal => Ok(()),
        // cycle inequalities are valid, so integral points stay feasible
        LpStatus::Infeasible => Err(Error::InvalidProgram("cut relaxation became infeasible".into())),
        LpStatus::Unbounded => Err(Error::Unbounded),
        LpStatus::CutOff => unreachable!("no cutoff is set"),
    }
}

/// The local polytope of `model` with `cuts` appended.
pub fn with_cuts(model: &PairwiseModel, cuts: &[CycleCut]) -> Result<LinearProgram> {
    let mut lp = model.local_lp();
    for c in cuts {
        lp.push_row(c.row.clone())?;
    }
    Ok(lp)
}

/// Patterns reported by the estimator on the cut-tightened polytope that it
/// does not report on the original one.
pub fn count_cut_induced(model: &PairwiseModel, cuts: &[CycleCut]) -> Result<usize> {
    if cuts.is_empty() {
        return Ok(0);
    }
    let original = estimate_svc(model)?;
    count_cut_induced_against(model, cuts, &original)
}

/// As [`count_cut_induced`], reusing an estimate already made on the
/// original polytope.
pub fn count_cut_induced_against(model: &PairwiseModel, cuts: &[CycleCut], original: &ConfoundingReport) -> Result<usize> {
    if cuts.is_empty() {
        return Ok(0);
    }
    let known: BTreeSet<_> = original.patterns.iter().map(|p| &p.pattern).collect();
    let tightened = estimate_svc_on(model, &with_cuts(model, cuts)?)?;
    Ok(tightened.patterns.iter().filter(|p| !known.contains(&p.pattern)).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> PairwiseModel {
        PairwiseModel::complete(vec![0.6; 3], |_, _| -1.0).unwrap()
    }

    #[test]
    fn integral_root_needs_no_cuts() {
        let m = PairwiseModel::complete(vec![0.3, -0.2, 0.1], |_, _| 0.5).unwrap();
        let out = cutting_plane_solve(&m, DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!((out.status, out.num_cuts(), out.lp_calls), (CutStatus::Integral, 0, 1));
        assert_eq!(count_cut_induced(&m, &out.cuts).unwrap(), 0);
    }

    #[test]
    fn triangle_needs_one_cut() {
        let m = triangle();
        let out = cutting_plane_solve(&m, DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!(out.status, CutStatus::Integral);
        assert_eq!(out.num_cuts(), 1);
        assert!((out.value - 0.6).abs() < 1e-9);
        assert_eq!(count_cut_induced(&m, &out.cuts).unwrap(), 0);
    }

    #[test]
    fn round_limit() {
        // two disjoint frustrated triangles need two cuts
        let mut edges = Vec::new();
        for base in [0, 3] {
            for (a, b) in [(0, 1), (1, 2), (0, 2)] {
                edges.push((base + a, base + b, -1.0));
            }
        }
        let m = PairwiseModel::new(vec![0.6; 6], edges).unwrap();
        let out = cutting_plane_solve(&m, 1).unwrap();
        assert_eq!((out.status, out.num_cuts()), (CutStatus::RoundLimit, 1));
        let out = cutting_plane_solve(&m, 5).unwrap();
        assert_eq!((out.status, out.num_cuts()), (CutStatus::Integral, 2));
        assert!(cutting_plane_solve(&m, 0).is_err());
    }
}
