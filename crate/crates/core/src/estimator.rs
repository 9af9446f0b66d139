//! Enumeration of confounding singleton patterns.
//!
//! Best-first ternary branching: a popped fractional node records the
//! pattern `S(q_V)` of its optimum and spawns, for every unfixed node `i`
//! and every `a ∈ {0, ½, 1}` different from `q_i`, the child with `q_i = a`
//! added. The search stops at the first integral pop, which is the MAP
//! optimum. Fixing nodes to `½` can expose points that are not vertices of
//! the original polytope, so the recorded patterns are a superset of the
//! true ones; each pattern is checked against the original polytope.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::branch::{first_fractional, solve_ilp, INTEGRALITY_TOL};
use crate::error::{Error, Result};
use crate::lp::LinearProgram;
use crate::model::PairwiseModel;
use crate::search::{BranchNode, ChildSolver, Frontier, SolveStats};
use crate::vertex::{
    find_frustrated_cycle, fractional_components, is_vertex, pattern_string, round_s, Component, HalfIntegralPoint,
    HalfValue, SNAP_TOL,
};

/// Largest model the estimator accepts.
pub const ESTIMATOR_NODE_LIMIT: usize = 16;

/// Values within this of the integral optimum count as ties, not as
/// confounding.
pub const STRICTNESS_TOL: f64 = 1e-9;

const CUTOFF_MARGIN: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternRecord {
    pub pattern: Vec<HalfValue>,
    /// Best LP value among popped nodes with this pattern, constant included.
    pub value: f64,
    /// Best objective over vertices of the original local polytope with
    /// this node block, if any exists.
    pub vertex_value: Option<f64>,
    /// No vertex of the original polytope with this node block beats the
    /// integral optimum.
    pub spurious: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfoundingReport {
    /// Sorted by pattern.
    pub patterns: Vec<PatternRecord>,
    /// Number of patterns, spurious ones included.
    pub count: usize,
    pub spurious: usize,
    /// Fractional patterns whose value equals the integral optimum.
    pub ties: usize,
    /// Popped points that were not half-integral.
    pub unsnapped: usize,
    /// Integral optimum, constant included.
    pub best_integral_value: f64,
    pub stats: SolveStats,
}

impl ConfoundingReport {
    pub fn pattern_strings(&self) -> Vec<String> {
        self.patterns.iter().map(|p| pattern_string(&p.pattern)).collect()
    }

    pub fn non_spurious(&self) -> impl Iterator<Item = &PatternRecord> {
        self.patterns.iter().filter(|p| !p.spurious)
    }
}

pub fn estimate_svc(model: &PairwiseModel) -> Result<ConfoundingReport> {
    estimate_svc_on(model, &model.local_lp())
}

/// Runs the estimator over `lp`, the local polytope of `model` possibly
/// tightened by valid inequalities. Spurious flags always refer to the
/// untightened polytope.
pub fn estimate_svc_on(model: &PairwiseModel, lp: &LinearProgram) -> Result<ConfoundingReport> {
    if model.num_nodes() > ESTIMATOR_NODE_LIMIT {
        return Err(Error::TooLarge {
            what: "estimate_svc",
            size: model.num_nodes(),
            limit: ESTIMATOR_NODE_LIMIT,
        });
    }
    if lp.num_vars() != model.num_coords() {
        return Err(Error::Dimension(format!(
            "program has {} variables, model has {} coordinates",
            lp.num_vars(),
            model.num_coords()
        )));
    }
    let started = Instant::now();
    let n = model.num_nodes();
    let nodes: Vec<usize> = (0..n).collect();
    // Nodes below the integral optimum never pop before the search ends, so
    // their solves can stop once the dual bound drops under it.
    let (opt, _) = solve_ilp(lp, &nodes)?;
    let opt = opt.ok_or_else(|| Error::InvalidProgram("relaxation has no integral point".into()))?;
    let mut solver = ChildSolver::new(lp)?;
    solver.set_cutoff(opt.value - CUTOFF_MARGIN);
    let mut frontier = Frontier::default();
    // fractional nodes pop before integral ones of equal value
    let classify = |mut node: BranchNode| {
        if first_fractional(&node.point, &nodes).is_some() {
            node.class = 1;
        }
        node
    };
    let root = solver
        .root()?
        .ok_or_else(|| Error::InvalidProgram("relaxation is infeasible".into()))?;
    frontier.push(classify(root));
    let mut generated: HashSet<Vec<(usize, u8)>> = HashSet::from([Vec::new()]);
    let mut found: BTreeMap<Vec<HalfValue>, f64> = BTreeMap::new();
    let mut unsnapped = 0;
    let best_lp = loop {
        let Some(node) = frontier.pop() else {
            return Err(Error::InvalidProgram("relaxation has no integral point".into()));
        };
        if node.class == 0 {
            break node.value;
        }
        if HalfIntegralPoint::snap(&node.point, SNAP_TOL).is_none() {
            unsnapped += 1;
        }
        let pattern = round_s(&node.point[..n])?;
        found
            .entry(pattern.clone())
            .and_modify(|v| *v = v.max(node.value))
            .or_insert(node.value);
        let mut kids = Vec::new();
        for i in 0..n {
            if node.fixings.contains_key(&i) {
                continue;
            }
            for a in [HalfValue::Zero, HalfValue::Half, HalfValue::One] {
                if (node.point[i] - a.value()).abs() <= INTEGRALITY_TOL {
                    continue;
                }
                let mut key: Vec<(usize, u8)> = node.fixings.iter().map(|(&j, &v)| (j, (2.0 * v) as u8)).collect();
                key.push((i, a.twice() as u8));
                key.sort_unstable();
                if generated.insert(key) {
                    kids.push(vec![(i, a.value())]);
                }
            }
        }
        for child in solver.children(&node, &kids)?.into_iter().flatten() {
            frontier.push(classify(child));
        }
        solver.stats.branches += 1;
        solver.stats.max_frontier = solver.stats.max_frontier.max(frontier.len());
    };
    let best_integral_value = best_lp + model.constant();
    let mut ties = 0;
    let mut patterns = Vec::new();
    for (pattern, lp_value) in found {
        let value = lp_value + model.constant();
        if value <= best_integral_value + STRICTNESS_TOL {
            ties += 1;
            continue;
        }
        let vertex_value = best_vertex_with_nodes(model, &pattern)?.map(|(_, v)| v);
        let spurious = vertex_value.is_none_or(|v| v <= best_integral_value + STRICTNESS_TOL);
        patterns.push(PatternRecord {
            pattern,
            value,
            vertex_value,
            spurious,
        });
    }
    solver.stats.wall_time = started.elapsed();
    Ok(ConfoundingReport {
        count: patterns.len(),
        spurious: patterns.iter().filter(|p| p.spurious).count(),
        patterns,
        ties,
        unsnapped,
        best_integral_value,
        stats: solver.stats,
    })
}

/// The best vertex of the local polytope whose node block is `nodes`, with
/// its objective (constant included), or `None` if there is none.
///
/// Edges touching an integral node are forced. Each edge between two `½`
/// nodes is free in `{0, ½}`; the unconstrained best takes `½` where
/// `W_ij > 0`. A vertex needs every fractional component to hold a cycle
/// with an odd number of zero edges. When the best labelling leaves a
/// component without one, flipping any single edge that lies on a cycle
/// creates one, and every repairing set of flips contains such an edge,
/// so the cheapest such edge is the optimal repair. Tree components admit
/// no vertex.
pub fn best_vertex_with_nodes(
    model: &PairwiseModel,
    nodes: &[HalfValue],
) -> Result<Option<(HalfIntegralPoint, f64)>> {
    if nodes.len() != model.num_nodes() {
        return Err(Error::Dimension(format!(
            "pattern has {} entries, model has {} nodes",
            nodes.len(),
            model.num_nodes()
        )));
    }
    let w = model.weights();
    let mut q = HalfIntegralPoint::complete(model, nodes, |e| {
        if w[e] > 0.0 {
            HalfValue::Half
        } else {
            HalfValue::Zero
        }
    });
    for comp in fractional_components(&q, model) {
        if find_frustrated_cycle(&comp, &q, model).is_some() {
            continue;
        }
        let flip = comp
            .edges
            .iter()
            .copied()
            .filter(|&e| !is_bridge(model, &comp, e))
            .min_by(|&a, &b| w[a].abs().total_cmp(&w[b].abs()).then(a.cmp(&b)));
        let Some(e) = flip else {
            return Ok(None);
        };
        let c = model.edge_coord(e);
        q.q[c] = if q.q[c] == HalfValue::Zero {
            HalfValue::Half
        } else {
            HalfValue::Zero
        };
    }
    debug_assert!(is_vertex(&q, model).unwrap_or(false));
    let value = model.objective_value(&q.to_f64())?;
    Ok(Some((q, value)))
}

fn is_bridge(model: &PairwiseModel, comp: &Component, removed: usize) -> bool {
    let (s, t) = model.edges()[removed];
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in comp.edges.iter().filter(|&&e| e != removed) {
        let (i, j) = model.edges()[e];
        adj.entry(i).or_default().push(j);
        adj.entry(j).or_default().push(i);
    }
    let mut seen = HashSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return false;
        }
        for &v in adj.get(&u).into_iter().flatten() {
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    true
}
