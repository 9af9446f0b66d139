//! Half-integral points of the local polytope and their combinatorics.
//!
//! A half-integral point `q` is a vertex exactly when every connected
//! component of the subgraph induced by its `½` nodes contains a frustrated
//! cycle, i.e. a cycle with an odd number of edges at `q_ij = 0`.

mod cycle;

pub use cycle::{eval_cycle_inequality, separate_cycle, CycleCut, SEPARATION_TOL};

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PairwiseModel;

/// Tolerance for snapping LP coordinates to `{0, ½, 1}`.
pub const SNAP_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HalfValue {
    Zero,
    Half,
    One,
}

impl HalfValue {
    pub fn value(self) -> f64 {
        match self {
            HalfValue::Zero => 0.0,
            HalfValue::Half => 0.5,
            HalfValue::One => 1.0,
        }
    }

    /// Twice the value, as an integer.
    pub fn twice(self) -> i32 {
        match self {
            HalfValue::Zero => 0,
            HalfValue::Half => 1,
            HalfValue::One => 2,
        }
    }

    pub fn snap(v: f64, tol: f64) -> Option<Self> {
        [HalfValue::Zero, HalfValue::Half, HalfValue::One]
            .into_iter()
            .find(|h| (v - h.value()).abs() <= tol)
    }

    pub fn is_integral(self) -> bool {
        self != HalfValue::Half
    }
}

impl fmt::Display for HalfValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HalfValue::Zero => "0",
            HalfValue::Half => "h",
            HalfValue::One => "1",
        })
    }
}

/// Node-block pattern such as `S(q_V)`; rendered with `h` for `½`.
pub fn pattern_string(p: &[HalfValue]) -> String {
    p.iter().map(|h| h.to_string()).collect()
}

/// The rounding map `S`: entries within [`SNAP_TOL`] of 0 or 1 keep their
/// value, everything else becomes `½`.
pub fn round_s(x: &[f64]) -> Result<Vec<HalfValue>> {
    x.iter()
        .map(|&v| {
            if !(-SNAP_TOL..=1.0 + SNAP_TOL).contains(&v) {
                Err(Error::InvalidInput(format!("entry {v} outside [0, 1]")))
            } else if v <= SNAP_TOL {
                Ok(HalfValue::Zero)
            } else if v >= 1.0 - SNAP_TOL {
                Ok(HalfValue::One)
            } else {
                Ok(HalfValue::Half)
            }
        })
        .collect()
}

/// A point of `{0, ½, 1}^(V ∪ E)` in local-LP coordinate order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfIntegralPoint {
    pub q: Vec<HalfValue>,
}

impl HalfIntegralPoint {
    pub fn new(q: Vec<HalfValue>) -> Self {
        HalfIntegralPoint { q }
    }

    /// `None` if some coordinate is not within `tol` of `{0, ½, 1}`.
    pub fn snap(point: &[f64], tol: f64) -> Option<Self> {
        point
            .iter()
            .map(|&v| HalfValue::snap(v, tol))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.q.iter().map(|h| h.value()).collect()
    }

    pub fn nodes(&self, model: &PairwiseModel) -> &[HalfValue] {
        &self.q[..model.num_nodes()]
    }

    pub fn edge(&self, model: &PairwiseModel, e: usize) -> HalfValue {
        self.q[model.edge_coord(e)]
    }

    /// Exact membership in the local polytope.
    pub fn is_feasible(&self, model: &PairwiseModel) -> bool {
        if self.q.len() != model.num_coords() {
            return false;
        }
        model.edges().iter().enumerate().all(|(e, &(i, j))| {
            let (a, b, c) = (self.q[i].twice(), self.q[j].twice(), self.edge(model, e).twice());
            c >= a + b - 2 && c <= a && c <= b
        })
    }

    /// Builds the point with node block `nodes`; edges touching an integral
    /// node take their forced value `min(q_i, q_j)` and edges between two
    /// `½` nodes take `fractional_edge(e)`.
    pub fn complete(
        model: &PairwiseModel,
        nodes: &[HalfValue],
        mut fractional_edge: impl FnMut(usize) -> HalfValue,
    ) -> Self {
        let mut q = nodes.to_vec();
        for (e, &(i, j)) in model.edges().iter().enumerate() {
            let v = if nodes[i] == HalfValue::Half && nodes[j] == HalfValue::Half {
                fractional_edge(e)
            } else {
                nodes[i].min(nodes[j])
            };
            q.push(v);
        }
        Self::new(q)
    }
}

/// Connected piece of the subgraph induced by the `½` nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub nodes: Vec<usize>,
    /// Edges with both endpoints in the component.
    pub edges: Vec<usize>,
}

/// A simple cycle: `edges[k]` joins `nodes[k]` and `nodes[(k + 1) % len]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

pub fn fractional_components(q: &HalfIntegralPoint, model: &PairwiseModel) -> Vec<Component> {
    let n = model.num_nodes();
    let adj = model.adjacency();
    let frac = |i: usize| q.q[i] == HalfValue::Half;
    let mut comp_of = vec![usize::MAX; n];
    let mut comps = Vec::new();
    for root in 0..n {
        if !frac(root) || comp_of[root] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut nodes = vec![root];
        comp_of[root] = id;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if frac(v) && comp_of[v] == usize::MAX {
                    comp_of[v] = id;
                    nodes.push(v);
                    queue.push_back(v);
                }
            }
        }
        nodes.sort_unstable();
        comps.push(Component { nodes, edges: Vec::new() });
    }
    for (e, &(i, j)) in model.edges().iter().enumerate() {
        if frac(i) && frac(j) {
            comps[comp_of[i]].edges.push(e);
        }
    }
    comps
}

/// Searches `component` for a cycle with an odd number of zero-valued
/// edges. Nodes get a parity label along a BFS tree (flipping across zero
/// edges); a non-tree edge whose label disagrees with its endpoints closes
/// such a cycle.
pub fn find_frustrated_cycle(
    component: &Component,
    q: &HalfIntegralPoint,
    model: &PairwiseModel,
) -> Option<Cycle> {
    let &root = component.nodes.first()?;
    let zero = |e: usize| q.edge(model, e) == HalfValue::Zero;
    let mut local_adj: std::collections::HashMap<usize, Vec<(usize, usize)>> =
        component.nodes.iter().map(|&v| (v, Vec::new())).collect();
    for &e in &component.edges {
        let (i, j) = model.edges()[e];
        local_adj.get_mut(&i)?.push((j, e));
        local_adj.get_mut(&j)?.push((i, e));
    }
    // node -> (parity, parent node, parent edge, depth)
    let mut label: std::collections::HashMap<usize, (bool, usize, usize, usize)> =
        std::collections::HashMap::from([(root, (false, usize::MAX, usize::MAX, 0))]);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let (pu, _, _, du) = label[&u];
        for &(v, e) in &local_adj[&u] {
            match label.get(&v) {
                None => {
                    label.insert(v, (pu ^ zero(e), u, e, du + 1));
                    queue.push_back(v);
                }
                Some(&(pv, _, pe, _)) => {
                    if pe == e || label[&u].2 == e {
                        continue;
                    }
                    if pu ^ pv ^ zero(e) {
                        return Some(close_cycle(&label, u, v, e));
                    }
                }
            }
        }
    }
    None
}

fn close_cycle(
    label: &std::collections::HashMap<usize, (bool, usize, usize, usize)>,
    u: usize,
    v: usize,
    closing: usize,
) -> Cycle {
    // walk both endpoints up to their lowest common ancestor
    let (mut a, mut b) = (u, v);
    let mut up_a = vec![(a, usize::MAX)];
    let mut up_b = vec![(b, usize::MAX)];
    while a != b {
        if label[&a].3 >= label[&b].3 {
            let (_, p, e, _) = label[&a];
            up_a.last_mut().unwrap().1 = e;
            a = p;
            up_a.push((a, usize::MAX));
        } else {
            let (_, p, e, _) = label[&b];
            up_b.last_mut().unwrap().1 = e;
            b = p;
            up_b.push((b, usize::MAX));
        }
    }
    // u -> ... -> lca -> ... -> v, then the closing edge back to u
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for &(n, e) in &up_a[..up_a.len() - 1] {
        nodes.push(n);
        edges.push(e);
    }
    nodes.push(a);
    let down: Vec<_> = up_b[..up_b.len() - 1].iter().rev().collect();
    for &&(n, e) in &down {
        edges.push(e);
        nodes.push(n);
    }
    edges.push(closing);
    Cycle { nodes, edges }
}

/// Half-integral vertex test: feasible and every fractional component holds
/// a frustrated cycle.
pub fn is_vertex(q: &HalfIntegralPoint, model: &PairwiseModel) -> Result<bool> {
    if !q.is_feasible(model) {
        return Err(Error::InvalidInput("point is not in the local polytope".into()));
    }
    Ok(fractional_components(q, model)
        .iter()
        .all(|c| find_frustrated_cycle(c, q, model).is_some()))
}

/// Whether the cyclic band vectors `v_k = e_k + t_k e_{k+1 mod n}` are
/// linearly independent; that is the case exactly when an odd number of the
/// signs are `+1`.
pub fn parity_rank(t: &[i8]) -> bool {
    t.iter().filter(|&&s| s > 0).count() % 2 == 1
}

/// Signs of an all-`½` cycle after eliminating its edge variables: `+1` for
/// an edge at `q_ij = 0` (`q_i + q_j = 1`), `-1` for `q_ij = ½`
/// (`q_i - q_j = 0`).
pub fn cycle_signs(cycle: &Cycle, q: &HalfIntegralPoint, model: &PairwiseModel) -> Vec<i8> {
    cycle
        .edges
        .iter()
        .map(|&e| if q.edge(model, e) == HalfValue::Zero { 1 } else { -1 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use HalfValue::*;

    fn triangle() -> PairwiseModel {
        PairwiseModel::complete(vec![0.6; 3], |_, _| -1.0).unwrap()
    }

    #[test]
    fn round_s_cases() {
        assert_eq!(round_s(&[0.3, 1.0, 0.0]).unwrap(), vec![Half, One, Zero]);
        assert_eq!(round_s(&[1.0, 0.0]).unwrap(), vec![One, Zero]);
        assert!(round_s(&[1.5]).is_err());
    }

    #[test]
    fn snapping() {
        assert!(HalfIntegralPoint::snap(&[0.5 + 1e-8, 1.0, 0.0], SNAP_TOL).is_some());
        assert!(HalfIntegralPoint::snap(&[0.3], SNAP_TOL).is_none());
    }

    #[test]
    fn triangle_vertices() {
        let m = triangle();
        let frustrated = HalfIntegralPoint::new(vec![Half, Half, Half, Zero, Zero, Zero]);
        assert!(is_vertex(&frustrated, &m).unwrap());
        let midpoint = HalfIntegralPoint::new(vec![Half; 6]);
        assert!(!is_vertex(&midpoint, &m).unwrap());
        let integral = HalfIntegralPoint::new(vec![One, One, Zero, One, Zero, Zero]);
        assert!(is_vertex(&integral, &m).unwrap());
        assert!(fractional_components(&integral, &m).is_empty());
        let bad = HalfIntegralPoint::new(vec![One, One, Zero, Zero, Zero, Zero]);
        assert!(is_vertex(&bad, &m).is_err());
    }

    #[test]
    fn frustrated_cycle_on_triangle() {
        let m = triangle();
        let q = HalfIntegralPoint::new(vec![Half, Half, Half, Zero, Zero, Zero]);
        let comps = fractional_components(&q, &m);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].nodes, vec![0, 1, 2]);
        let c = find_frustrated_cycle(&comps[0], &q, &m).unwrap();
        assert_eq!(c.nodes.len(), 3);
        let mut e = c.edges.clone();
        e.sort();
        assert_eq!(e, vec![0, 1, 2]);
        assert!(parity_rank(&cycle_signs(&c, &q, &m)));
    }

    #[test]
    fn two_triangles_through_integral_node() {
        // triangles {0,1,2} and {4,5,6} both joined to node 3
        let mut edges = vec![(0, 1), (0, 2), (1, 2), (4, 5), (4, 6), (5, 6)];
        edges.extend([(2, 3), (3, 4)]);
        let m = PairwiseModel::new(vec![0.0; 7], edges.into_iter().map(|(i, j)| (i, j, -1.0)).collect()).unwrap();
        let mut nodes = vec![Half; 7];
        nodes[3] = One;
        let q = HalfIntegralPoint::complete(&m, &nodes, |_| Zero);
        assert!(q.is_feasible(&m));
        let comps = fractional_components(&q, &m);
        assert_eq!(comps.len(), 2);
        assert!(is_vertex(&q, &m).unwrap());
    }

    #[test]
    fn parity_rank_statement() {
        assert!(parity_rank(&[1, 1, 1]));
        assert!(!parity_rank(&[1, 1, -1, -1]));
    }
}
