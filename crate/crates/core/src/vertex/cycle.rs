//! Cycle inequalities and their separation.
//!
//! For a cycle `C` and an odd subset `F` of its edges, every integral point
//! satisfies
//! `Σ_{ij∈F} (q_i + q_j - 2q_ij) - Σ_{ij∈C\F} (q_i + q_j - 2q_ij) <= |F| - 1`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::Row;
use crate::model::PairwiseModel;

/// Cuts with slack above `-SEPARATION_TOL` are not reported as violated.
pub const SEPARATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleCut {
    /// Cycle nodes in order.
    pub nodes: Vec<usize>,
    /// `edges[k]` joins `nodes[k]` and `nodes[(k + 1) % len]`.
    pub edges: Vec<usize>,
    /// Membership of each cycle edge in the odd subset `F`.
    pub in_odd_set: Vec<bool>,
    pub row: Row,
}

impl CycleCut {
    pub fn new(model: &PairwiseModel, nodes: Vec<usize>, in_odd_set: Vec<bool>) -> Result<Self> {
        let len = nodes.len();
        if len < 3 || in_odd_set.len() != len {
            return Err(Error::InvalidInput("a cycle needs at least 3 nodes and one flag per edge".into()));
        }
        let mut sorted = nodes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != len {
            return Err(Error::InvalidInput("cycle repeats a node".into()));
        }
        let edges = (0..len)
            .map(|k| {
                let (a, b) = (nodes[k], nodes[(k + 1) % len]);
                model
                    .edge_index(a, b)
                    .ok_or_else(|| Error::InvalidInput(format!("no edge ({a}, {b})")))
            })
            .collect::<Result<Vec<_>>>()?;
        let odd = in_odd_set.iter().filter(|&&f| f).count();
        if odd % 2 == 0 {
            return Err(Error::InvalidInput("odd subset has even size".into()));
        }
        let mut coeffs = Vec::with_capacity(3 * len);
        for (&e, &f) in edges.iter().zip(&in_odd_set) {
            let s = if f { 1.0 } else { -1.0 };
            let (i, j) = model.edges()[e];
            coeffs.extend([(i, s), (j, s), (model.edge_coord(e), -2.0 * s)]);
        }
        let row = Row::le(coeffs, (odd - 1) as f64);
        Ok(CycleCut {
            nodes,
            edges,
            in_odd_set,
            row,
        })
    }

    pub fn odd_count(&self) -> usize {
        self.in_odd_set.iter().filter(|&&f| f).count()
    }

    pub fn rhs(&self) -> f64 {
        self.row.rhs
    }

    /// Identity of the inequality independent of where the cycle starts.
    pub fn key(&self) -> (Vec<usize>, Vec<usize>) {
        let mut all = self.edges.clone();
        all.sort_unstable();
        let mut odd: Vec<usize> = self
            .edges
            .iter()
            .zip(&self.in_odd_set)
            .filter(|(_, f)| **f)
            .map(|(e, _)| *e)
            .collect();
        odd.sort_unstable();
        (all, odd)
    }
}

/// `(|F| - 1) - LHS` at `q`; negative when `q` violates the cut.
pub fn eval_cycle_inequality(q: &[f64], cut: &CycleCut) -> f64 {
    cut.row.slack(q)
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One step of a closed walk: arrive at `node`, through an edge counted in
/// the odd set when `flip`.
#[derive(Clone, Copy, Debug)]
struct Step {
    node: usize,
    flip: bool,
}

/// Most violated cycle inequality at `q`, if any is violated by more than
/// [`SEPARATION_TOL`].
///
/// Writing `x_e = q_i + q_j - 2q_ij`, a cut is violated iff
/// `Σ_F (1 - x_e) + Σ_{C\F} x_e < 1`. Shortest paths from `(s, even)` to
/// `(s, odd)` in the graph doubled by parity, where an edge costs `1 - x_e`
/// when it flips parity and `x_e` otherwise, give the cheapest odd closed
/// walk through `s`; a simple odd cycle of no larger cost is then cut out of
/// that walk.
pub fn separate_cycle(q: &[f64], model: &PairwiseModel) -> Option<CycleCut> {
    let n = model.num_nodes();
    if q.len() != model.num_coords() || model.num_edges() < 3 {
        return None;
    }
    let adj = model.adjacency();
    let cut_weight: Vec<f64> = model
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(i, j))| (q[i] + q[j] - 2.0 * q[model.edge_coord(e)]).clamp(0.0, 1.0))
        .collect();
    let mut best: Option<(f64, CycleCut)> = None;
    for s in 0..n {
        if adj[s].len() < 2 {
            continue;
        }
        let Some(walk) = cheapest_odd_walk(s, &adj, &cut_weight) else {
            continue;
        };
        let Some(cycle) = simple_odd_cycle(s, walk) else {
            continue;
        };
        let nodes: Vec<usize> = cycle.iter().map(|st| st.node).collect();
        // `cycle[k]` arrives at nodes[k]; the edge leaving nodes[k] is cycle[k+1]
        let len = cycle.len();
        let flags: Vec<bool> = (0..len).map(|k| cycle[(k + 1) % len].flip).collect();
        let Ok(cut) = CycleCut::new(model, nodes, flags) else {
            continue;
        };
        let slack = eval_cycle_inequality(q, &cut);
        if slack < -SEPARATION_TOL && best.as_ref().is_none_or(|(b, _)| slack < *b) {
            best = Some((slack, cut));
        }
    }
    best.map(|(_, c)| c)
}

fn cheapest_odd_walk(s: usize, adj: &[Vec<(usize, usize)>], weight: &[f64]) -> Option<Vec<Step>> {
    let n = adj.len();
    let idx = |v: usize, parity: bool| 2 * v + parity as usize;
    let mut dist = vec![f64::INFINITY; 2 * n];
    let mut prev: Vec<Option<(usize, Step)>> = vec![None; 2 * n];
    let mut heap = BinaryHeap::new();
    dist[idx(s, false)] = 0.0;
    heap.push(Entry(0.0, idx(s, false)));
    let target = idx(s, true);
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == target || d >= 1.0 {
            break;
        }
        let (v, parity) = (u / 2, u % 2 == 1);
        for &(w, e) in &adj[v] {
            for flip in [false, true] {
                let cost = if flip { 1.0 - weight[e] } else { weight[e] };
                let next = idx(w, parity ^ flip);
                let nd = d + cost;
                if nd < dist[next] {
                    dist[next] = nd;
                    prev[next] = Some((u, Step { node: w, flip }));
                    heap.push(Entry(nd, next));
                }
            }
        }
    }
    if dist[target] >= 1.0 {
        return None;
    }
    let mut steps = Vec::new();
    let mut at = target;
    while let Some((p, step)) = prev[at] {
        steps.push(step);
        at = p;
    }
    steps.reverse();
    Some(steps)
}

/// Reduces an odd closed walk from `s` to a simple odd cycle by splitting at
/// repeated nodes and keeping the odd part.
fn simple_odd_cycle(s: usize, mut walk: Vec<Step>) -> Option<Vec<Step>> {
    loop {
        // positions: node before step k is walk[k-1].node (or s for k = 0)
        let node_at = |walk: &[Step], k: usize| if k == 0 { s } else { walk[k - 1].node };
        let len = walk.len();
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut split = None;
        for k in 0..len {
            let v = node_at(&walk, k);
            if let Some(&a) = seen.get(&v) {
                split = Some((a, k));
                break;
            }
            seen.insert(v, k);
        }
        let Some((a, b)) = split else {
            return (len >= 3).then_some(walk);
        };
        let inner: Vec<Step> = walk[a..b].to_vec();
        let inner_odd = inner.iter().filter(|st| st.flip).count() % 2 == 1;
        if inner_odd {
            // rotate so the inner loop starts and ends at its own node
            let start = node_at(&walk, a);
            return simple_odd_cycle(start, inner);
        }
        walk.drain(a..b);
    }
}
