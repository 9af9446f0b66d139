//! The M best integral solutions of a 0-1 program.
//!
//! Fractional nodes branch as in branch-and-bound. A popped integral node
//! emits its solution `v`, and its region minus `v` is split into one child
//! per unfixed integer variable `i_k` (ascending): child `k` fixes
//! `x_{i_k} = 1 - v_{i_k}` and `x_{i_l} = v_{i_l}` for `l < k`, so the
//! children are disjoint.

use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::branch::{check_integer_vars, first_fractional, IlpSolution, SearchObserver, INTEGRALITY_TOL};
use crate::error::{Error, Result};
use crate::lp::LinearProgram;
use crate::model::{Configuration, PairwiseModel};
use crate::search::{snap_integral, ChildSolver, Frontier, SolveStats};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MBest {
    /// Best first.
    pub solutions: Vec<IlpSolution>,
    /// Fewer than the requested number of integral solutions exist.
    pub exhausted: bool,
    /// Distinct integer-block patterns among popped fractional nodes.
    pub fractional_patterns: usize,
    pub stats: SolveStats,
}

pub fn m_best_integral(lp: &LinearProgram, integer_vars: &[usize], m: usize) -> Result<MBest> {
    m_best_observed(lp, integer_vars, m, &mut ())
}

pub fn m_best_observed(
    lp: &LinearProgram,
    integer_vars: &[usize],
    m: usize,
    observer: &mut dyn SearchObserver,
) -> Result<MBest> {
    if m == 0 {
        return Err(Error::InvalidInput("M must be at least 1".into()));
    }
    check_integer_vars(lp, integer_vars)?;
    let started = Instant::now();
    let mut solver = ChildSolver::new(lp)?;
    let mut frontier = Frontier::default();
    let classify = |mut node: crate::search::BranchNode| {
        if first_fractional(&node.point, integer_vars).is_none() {
            node.class = 1;
        }
        node
    };
    if let Some(root) = solver.root()? {
        observer.on_solved(&root);
        frontier.push(classify(root));
    }
    solver.stats.max_frontier = frontier.len();
    let mut solutions = Vec::new();
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut patterns: BTreeSet<Vec<u8>> = BTreeSet::new();
    while solutions.len() < m {
        if observer.wants_frontier() {
            observer.on_frontier(&frontier.nodes());
        }
        let Some(mut node) = frontier.pop() else {
            break;
        };
        let kids: Vec<Vec<(usize, f64)>> = match first_fractional(&node.point, integer_vars) {
            Some(i) => {
                solver.stats.branches += 1;
                patterns.insert(
                    integer_vars
                        .iter()
                        .map(|&j| (2.0 * node.point[j]).round() as u8)
                        .collect(),
                );
                vec![vec![(i, 0.0)], vec![(i, 1.0)]]
            }
            None => {
                snap_integral(&mut node.point, integer_vars, INTEGRALITY_TOL);
                let bits: Vec<bool> = integer_vars.iter().map(|&j| node.point[j] == 1.0).collect();
                assert!(seen.insert(bits), "integral solution emitted twice");
                let free: Vec<usize> = integer_vars
                    .iter()
                    .copied()
                    .filter(|j| !node.fixings.contains_key(j))
                    .collect();
                let kids = (0..free.len())
                    .map(|k| {
                        let mut fix: Vec<(usize, f64)> =
                            free[..k].iter().map(|&j| (j, node.point[j])).collect();
                        fix.push((free[k], 1.0 - node.point[free[k]]));
                        fix
                    })
                    .collect();
                let sol = IlpSolution {
                    point: node.point.clone(),
                    value: node.value,
                };
                observer.on_emit(&sol);
                solutions.push(sol);
                kids
            }
        };
        if solutions.len() == m {
            break;
        }
        for child in solver.children(&node, &kids)?.into_iter().flatten() {
            observer.on_solved(&child);
            frontier.push(classify(child));
        }
        solver.stats.max_frontier = solver.stats.max_frontier.max(frontier.len());
    }
    solver.stats.wall_time = started.elapsed();
    Ok(MBest {
        exhausted: solutions.len() < m,
        solutions,
        fractional_patterns: patterns.len(),
        stats: solver.stats,
    })
}

/// The `m` best configurations of `model` with their scores (constant
/// included), best first.
pub fn m_best_map(model: &PairwiseModel, m: usize) -> Result<(Vec<(Configuration, f64)>, MBest)> {
    let nodes: Vec<usize> = (0..model.num_nodes()).collect();
    let result = m_best_integral(&model.local_lp(), &nodes, m)?;
    let configs = result
        .solutions
        .iter()
        .map(|s| {
            let c = Configuration::from_point(&s.point, model.num_nodes(), INTEGRALITY_TOL)
                .expect("emitted solutions are integral on the node block");
            let v = model.score(&c);
            (c, v)
        })
        .collect();
    Ok((configs, result))
}

/// CSV with header `rank,value,configuration`, ranks from 1.
pub fn write_ranked_csv<W: Write>(ranked: &[(Configuration, f64)], mut out: W) -> Result<()> {
    writeln!(out, "rank,value,configuration")?;
    for (k, (c, v)) in ranked.iter().enumerate() {
        writeln!(out, "{},{v:?},{c}", k + 1)?;
    }
    Ok(())
}
