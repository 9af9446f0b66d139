//! Best-first branch-and-bound for 0-1 programs.
//!
//! The frontier is ordered by LP value. Since the LP bound of a node is an
//! upper bound on every integral point it contains, the first node popped
//! whose optimum is integral on the integer variables is optimal.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::LinearProgram;
use crate::model::{Configuration, PairwiseModel};
pub use crate::search::{BranchNode, SolveStats};
use crate::search::{is_integral_on, snap_integral, ChildSolver, Frontier};

/// Per-coordinate distance from {0, 1} below which a value counts as integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;

/// Hooks into a running search, for instrumentation and invariant checks.
pub trait SearchObserver {
    /// Every solved, feasible node, the root included.
    fn on_solved(&mut self, _node: &BranchNode) {}

    /// The frontier at the top of each iteration, before the pop. Only
    /// called when [`wants_frontier`](Self::wants_frontier) is true.
    fn on_frontier(&mut self, _frontier: &[&BranchNode]) {}

    /// An integral solution handed back to the caller.
    fn on_emit(&mut self, _solution: &IlpSolution) {}

    fn wants_frontier(&self) -> bool {
        false
    }
}

impl SearchObserver for () {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IlpSolution {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Maximizes `lp` subject to `integer_vars` taking values in {0, 1}.
/// Returns `None` when no such point exists.
pub fn solve_ilp(lp: &LinearProgram, integer_vars: &[usize]) -> Result<(Option<IlpSolution>, SolveStats)> {
    solve_ilp_observed(lp, integer_vars, &mut ())
}

pub fn solve_ilp_observed(
    lp: &LinearProgram,
    integer_vars: &[usize],
    observer: &mut dyn SearchObserver,
) -> Result<(Option<IlpSolution>, SolveStats)> {
    check_integer_vars(lp, integer_vars)?;
    let started = Instant::now();
    let mut solver = ChildSolver::new(lp)?;
    let mut frontier = Frontier::default();
    if let Some(root) = solver.root()? {
        observer.on_solved(&root);
        frontier.push(root);
    }
    solver.stats.max_frontier = frontier.len();
    let mut best = None;
    loop {
        if observer.wants_frontier() {
            observer.on_frontier(&frontier.nodes());
        }
        let Some(mut node) = frontier.pop() else {
            break;
        };
        let Some(i) = first_fractional(&node.point, integer_vars) else {
            snap_integral(&mut node.point, integer_vars, INTEGRALITY_TOL);
            let sol = IlpSolution {
                point: node.point,
                value: node.value,
            };
            observer.on_emit(&sol);
            best = Some(sol);
            break;
        };
        solver.stats.branches += 1;
        for child in solver.children(&node, &[vec![(i, 0.0)], vec![(i, 1.0)]])?.into_iter().flatten() {
            observer.on_solved(&child);
            frontier.push(child);
        }
        solver.stats.max_frontier = solver.stats.max_frontier.max(frontier.len());
    }
    solver.stats.wall_time = started.elapsed();
    Ok((best, solver.stats))
}

pub(crate) fn check_integer_vars(lp: &LinearProgram, integer_vars: &[usize]) -> Result<()> {
    if let Some(&j) = integer_vars.iter().find(|&&j| j >= lp.num_vars()) {
        return Err(Error::Dimension(format!(
            "integer variable {j} out of range for {} variables",
            lp.num_vars()
        )));
    }
    for &j in integer_vars {
        let (lo, hi) = lp.bounds()[j];
        if lo < 0.0 || hi > 1.0 {
            return Err(Error::InvalidProgram(format!(
                "integer variable {j} has bounds [{lo}, {hi}], expected within [0, 1]"
            )));
        }
    }
    Ok(())
}

pub(crate) fn first_fractional(point: &[f64], integer_vars: &[usize]) -> Option<usize> {
    integer_vars
        .iter()
        .copied()
        .find(|&j| !is_integral_on(point, &[j], INTEGRALITY_TOL))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSolution {
    pub configuration: Configuration,
    /// Model score, constant included.
    pub value: f64,
    pub stats: SolveStats,
}

/// Exact MAP: branch-and-bound over the node block of the local polytope.
pub fn solve_map(model: &PairwiseModel) -> Result<MapSolution> {
    solve_map_on(model, &model.local_lp())
}

/// Exact MAP over `lp`, which must be the local polytope of `model`,
/// possibly tightened by valid inequalities.
pub fn solve_map_on(model: &PairwiseModel, lp: &LinearProgram) -> Result<MapSolution> {
    solve_map_observed(model, lp, &mut ())
}

pub fn solve_map_observed(
    model: &PairwiseModel,
    lp: &LinearProgram,
    observer: &mut dyn SearchObserver,
) -> Result<MapSolution> {
    if lp.num_vars() != model.num_coords() {
        return Err(Error::Dimension(format!(
            "program has {} variables, model has {} coordinates",
            lp.num_vars(),
            model.num_coords()
        )));
    }
    let nodes: Vec<usize> = (0..model.num_nodes()).collect();
    let (best, stats) = solve_ilp_observed(lp, &nodes, observer)?;
    let best = best.ok_or_else(|| Error::InvalidProgram("relaxation has no integral point".into()))?;
    let configuration = Configuration::from_point(&best.point, model.num_nodes(), INTEGRALITY_TOL)
        .expect("node block is integral at the returned point");
    let value = model.score(&configuration);
    Ok(MapSolution {
        configuration,
        value,
        stats,
    })
}
