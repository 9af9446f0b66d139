//! Binary pairwise graphical models and their local-polytope relaxation.
//!
//! A [`PairwiseModel`] scores `x ∈ {0,1}^V` by
//! `Σ θ_i x_i + Σ W_ij x_i x_j + constant`. The constant only appears for
//! models converted from the agreement parameterization
//! `Σ θ'_i 1(x_i = 1) + Σ W'_ij 1(x_i = x_j)` so both forms give equal
//! scores.

mod io;
mod random;

pub use io::{parse_agreement, read_agreement, write_agreement};
pub use random::{instance_seed, random_agreement, random_instance, splitmix64};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Row};

/// Largest node count accepted by the exhaustive routines.
pub const BRUTE_FORCE_LIMIT: usize = 25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseModel {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    theta: Vec<f64>,
    weights: Vec<f64>,
    constant: f64,
}

fn check_graph(num_nodes: usize, edges: &[(usize, usize)]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for &(i, j) in edges {
        if i >= num_nodes || j >= num_nodes {
            return Err(Error::InvalidModel(format!("edge ({i}, {j}) references a missing node")));
        }
        if i == j {
            return Err(Error::InvalidModel(format!("self-loop on node {i}")));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(Error::InvalidModel(format!("duplicate edge ({i}, {j})")));
        }
    }
    Ok(())
}

impl PairwiseModel {
    /// Edges may come in any order or orientation; they are stored as
    /// `(i, j)` with `i < j`, sorted lexicographically.
    pub fn new(theta: Vec<f64>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let num_nodes = theta.len();
        let pairs: Vec<_> = edges.iter().map(|&(i, j, _)| (i, j)).collect();
        check_graph(num_nodes, &pairs)?;
        if theta.iter().chain(edges.iter().map(|(_, _, w)| w)).any(|v| !v.is_finite()) {
            return Err(Error::InvalidModel("non-finite weight".into()));
        }
        let mut edges: Vec<_> = edges.into_iter().map(|(i, j, w)| (i.min(j), i.max(j), w)).collect();
        edges.sort_by_key(|&(i, j, _)| (i, j));
        Ok(PairwiseModel {
            num_nodes,
            edges: edges.iter().map(|&(i, j, _)| (i, j)).collect(),
            weights: edges.iter().map(|&(_, _, w)| w).collect(),
            theta,
            constant: 0.0,
        })
    }

    /// Complete graph `K_n` with edge weights from `weight(i, j)`.
    pub fn complete(theta: Vec<f64>, mut weight: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let n = theta.len();
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j, weight(i, j)));
            }
        }
        Self::new(theta, edges)
    }

    pub fn with_constant(mut self, constant: f64) -> Self {
        self.constant = constant;
        self
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of LP coordinates, `|V| + |E|`.
    pub fn num_coords(&self) -> usize {
        self.num_nodes + self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// LP coordinate of edge `e`.
    pub fn edge_coord(&self, e: usize) -> usize {
        self.num_nodes + e
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.edges.binary_search(&(i.min(j), i.max(j))).ok()
    }

    /// For each node, its `(neighbour, edge index)` pairs.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            adj[i].push((j, e));
            adj[j].push((i, e));
        }
        adj
    }

    /// `Σ θ_i x_i + Σ W_ij x_i x_j + constant`.
    pub fn score(&self, x: &Configuration) -> f64 {
        let bits = &x.0;
        let mut v = self.constant;
        for (t, &b) in self.theta.iter().zip(bits) {
            if b {
                v += t;
            }
        }
        for (&(i, j), w) in self.edges.iter().zip(&self.weights) {
            if bits[i] && bits[j] {
                v += w;
            }
        }
        v
    }

    fn score_mask(&self, mask: u64) -> f64 {
        let bit = |i: usize| mask >> i & 1 == 1;
        let mut v = self.constant;
        for (i, t) in self.theta.iter().enumerate() {
            if bit(i) {
                v += t;
            }
        }
        for (&(i, j), w) in self.edges.iter().zip(&self.weights) {
            if bit(i) && bit(j) {
                v += w;
            }
        }
        v
    }

    fn check_enumerable(&self, what: &'static str) -> Result<()> {
        if self.num_nodes > BRUTE_FORCE_LIMIT {
            return Err(Error::TooLarge {
                what,
                size: self.num_nodes,
                limit: BRUTE_FORCE_LIMIT,
            });
        }
        Ok(())
    }

    /// Exact MAP by enumerating all `2^|V|` configurations. Among equal
    /// scores the configuration with the smallest binary code wins, node 0
    /// being the least significant bit.
    pub fn brute_force_map(&self) -> Result<(Configuration, f64)> {
        self.check_enumerable("brute_force_map")?;
        let mut best = (0u64, self.score_mask(0));
        for mask in 1..1u64 << self.num_nodes {
            let v = self.score_mask(mask);
            if v > best.1 {
                best = (mask, v);
            }
        }
        Ok((Configuration::from_mask(self.num_nodes, best.0), best.1))
    }

    /// The `k` highest-scoring configurations, best first, ties by code.
    pub fn ranked_configurations(&self, k: usize) -> Result<Vec<(Configuration, f64)>> {
        self.check_enumerable("ranked_configurations")?;
        let mut all: Vec<(u64, f64)> = (0..1u64 << self.num_nodes).map(|m| (m, self.score_mask(m))).collect();
        all.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        all.truncate(k);
        Ok(all
            .into_iter()
            .map(|(m, v)| (Configuration::from_mask(self.num_nodes, m), v))
            .collect())
    }

    /// The local-polytope relaxation. Coordinates are the nodes followed by
    /// the edges in stored order; every coordinate is boxed in `[0, 1]` and
    /// each edge contributes the rows
    /// `q_i + q_j - q_ij <= 1`, `q_ij - q_i <= 0`, `q_ij - q_j <= 0`.
    pub fn local_lp(&self) -> LinearProgram {
        let mut objective = self.theta.clone();
        objective.extend_from_slice(&self.weights);
        let mut lp = LinearProgram::new(objective);
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            let q = self.edge_coord(e);
            for row in [
                Row::le(vec![(i, 1.0), (j, 1.0), (q, -1.0)], 1.0),
                Row::le(vec![(q, 1.0), (i, -1.0)], 0.0),
                Row::le(vec![(q, 1.0), (j, -1.0)], 0.0),
            ] {
                lp.push_row(row).expect("edge rows reference valid coordinates");
            }
        }
        lp
    }

    /// Linear objective at an LP point, plus the model constant.
    pub fn objective_value(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.num_coords() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, model has {}",
                point.len(),
                self.num_coords()
            )));
        }
        let nodes: f64 = self.theta.iter().zip(point).map(|(t, q)| t * q).sum();
        let edges: f64 = self.weights.iter().zip(&point[self.num_nodes..]).map(|(w, q)| w * q).sum();
        Ok(nodes + edges + self.constant)
    }
}

pub fn build_local_lp(model: &PairwiseModel) -> LinearProgram {
    model.local_lp()
}

/// Model in the agreement parameterization
/// `Σ θ'_i 1(x_i = 1) + Σ W'_ij 1(x_i = x_j)`. This is the form that is
/// sampled and stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgreementModel {
    pub theta: Vec<f64>,
    pub edges: Vec<(usize, usize, f64)>,
}

impl AgreementModel {
    pub fn new(theta: Vec<f64>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let pairs: Vec<_> = edges.iter().map(|&(i, j, _)| (i, j)).collect();
        check_graph(theta.len(), &pairs)?;
        Ok(AgreementModel { theta, edges })
    }

    pub fn num_nodes(&self) -> usize {
        self.theta.len()
    }

    pub fn score(&self, x: &Configuration) -> f64 {
        let bits = &x.0;
        let nodes: f64 = self.theta.iter().zip(bits).filter(|(_, b)| **b).map(|(t, _)| t).sum();
        let edges: f64 = self.edges.iter().filter(|(i, j, _)| bits[*i] == bits[*j]).map(|(_, _, w)| w).sum();
        nodes + edges
    }

    pub fn to_pairwise(&self) -> Result<PairwiseModel> {
        reparametrize_agreement(&self.theta, &self.edges)
    }
}

/// Rewrites agreement weights in the `x_i`, `x_i x_j` basis using
/// `1(x_i = x_j) = 1 - x_i - x_j + 2 x_i x_j`:
/// `θ_i = θ'_i - Σ_j W'_ij`, `W_ij = 2 W'_ij`, constant `Σ W'_ij`.
pub fn reparametrize_agreement(theta: &[f64], edges: &[(usize, usize, f64)]) -> Result<PairwiseModel> {
    let pairs: Vec<_> = edges.iter().map(|&(i, j, _)| (i, j)).collect();
    check_graph(theta.len(), &pairs)?;
    let mut node = theta.to_vec();
    let mut constant = 0.0;
    for &(i, j, w) in edges {
        node[i] -= w;
        node[j] -= w;
        constant += w;
    }
    let doubled = edges.iter().map(|&(i, j, w)| (i, j, 2.0 * w)).collect();
    Ok(PairwiseModel::new(node, doubled)?.with_constant(constant))
}

/// An assignment `x ∈ {0,1}^V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration(pub Vec<bool>);

impl Configuration {
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Configuration((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    /// Rounds the node block of an LP point; `None` unless every node value
    /// is within `tol` of 0 or 1.
    pub fn from_point(point: &[f64], num_nodes: usize, tol: f64) -> Option<Self> {
        point[..num_nodes]
            .iter()
            .map(|&v| {
                if v.abs() <= tol {
                    Some(false)
                } else if (v - 1.0).abs() <= tol {
                    Some(true)
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(Configuration)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().enumerate().filter(|(_, b)| **b).fold(0, |m, (i, _)| m | 1 << i)
    }

    /// LP point with `q_ij = x_i x_j`.
    pub fn to_point(&self, model: &PairwiseModel) -> Vec<f64> {
        let as_f = |b: bool| if b { 1.0 } else { 0.0 };
        let mut q: Vec<f64> = self.0.iter().map(|&b| as_f(b)).collect();
        q.extend(model.edges().iter().map(|&(i, j)| as_f(self.0[i] && self.0[j])));
        q
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Map from edge endpoints to edge index, for callers building many lookups.
pub fn edge_lookup(model: &PairwiseModel) -> HashMap<(usize, usize), usize> {
    model.edges().iter().enumerate().map(|(e, &p)| (p, e)).collect()
}
