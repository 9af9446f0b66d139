//! Independent brute-force oracles shared by the integration tests. None of
//! them call into the solver code they are used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use mapbb::model::PairwiseModel;
use mapbb::vertex::{HalfIntegralPoint, HalfValue};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank by Gaussian elimination over the rationals.
pub fn exact_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&a| BigRational::from_integer(BigInt::from(a))).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r == rank || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone() / pivot.clone();
            for k in c..cols {
                let d = f.clone() * m[rank][k].clone();
                m[r][k] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank computed by nalgebra's SVD.
pub fn numeric_rank(rows: &[Vec<f64>]) -> usize {
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    let m = DMatrix::from_fn(n, cols, |i, j| rows[i][j]);
    m.rank(1e-9)
}

/// The cyclic band matrix with rows `e_k + t_k e_{k+1 mod n}`.
pub fn band_matrix(t: &[i8]) -> Vec<Vec<f64>> {
    let n = t.len();
    (0..n)
        .map(|k| {
            let mut row = vec![0.0; n];
            row[k] += 1.0;
            row[(k + 1) % n] += t[k] as f64;
            row
        })
        .collect()
}

/// Points are written in halves: `2q` with entries in {0, 1, 2}.
pub type Halves = Vec<i64>;

pub fn local_polytope_feasible(model: &PairwiseModel, t: &[i64]) -> bool {
    model.edges().iter().enumerate().all(|(e, &(i, j))| {
        let c = t[model.edge_coord(e)];
        c >= 0 && c >= t[i] + t[j] - 2 && c <= t[i] && c <= t[j]
    }) && t[..model.num_nodes()].iter().all(|&v| (0..=2).contains(&v))
}

/// Every point of the local polytope with coordinates in {0, ½, 1}.
pub fn half_integral_points(model: &PairwiseModel) -> Vec<Halves> {
    let n = model.num_nodes();
    let dim = model.num_coords();
    let mut out = Vec::new();
    let mut nodes = vec![0i64; n];
    loop {
        // each edge independently ranges over its feasible values
        let choices: Vec<Vec<i64>> = model
            .edges()
            .iter()
            .map(|&(i, j)| {
                (0..=2)
                    .filter(|&c| c >= nodes[i] + nodes[j] - 2 && c <= nodes[i] && c <= nodes[j])
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let mut t = vec![0i64; dim];
            t[..n].copy_from_slice(&nodes);
            for (e, ch) in choices.iter().enumerate() {
                t[n + e] = ch[idx[e]];
            }
            out.push(t);
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        let mut k = 0;
        while k < n {
            nodes[k] += 1;
            if nodes[k] <= 2 {
                break;
            }
            nodes[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    out
}

/// Gradients of the local-polytope inequalities tight at `t`, including the
/// redundant `q_i <= 1` bounds.
pub fn active_rows(model: &PairwiseModel, t: &[i64]) -> Vec<Vec<i64>> {
    let n = model.num_nodes();
    let dim = model.num_coords();
    let unit = |k: usize, s: i64| {
        let mut r = vec![0; dim];
        r[k] = s;
        r
    };
    let mut rows = Vec::new();
    for i in 0..n {
        if t[i] == 0 || t[i] == 2 {
            rows.push(unit(i, 1));
        }
    }
    for (e, &(i, j)) in model.edges().iter().enumerate() {
        let c = n + e;
        if t[c] == 0 {
            rows.push(unit(c, 1));
        }
        if t[c] == t[i] + t[j] - 2 {
            let mut r = unit(c, -1);
            r[i] += 1;
            r[j] += 1;
            rows.push(r);
        }
        if t[c] == t[i] {
            let mut r = unit(c, 1);
            r[i] -= 1;
            rows.push(r);
        }
        if t[c] == t[j] {
            let mut r = unit(c, 1);
            r[j] -= 1;
            rows.push(r);
        }
    }
    rows
}

/// Vertex test by the rank of the active constraints.
pub fn is_vertex_by_rank(model: &PairwiseModel, t: &[i64]) -> bool {
    let rows = active_rows(model, t);
    !rows.is_empty() && exact_rank(&rows) == model.num_coords()
}

pub fn to_half_point(t: &[i64]) -> HalfIntegralPoint {
    HalfIntegralPoint::new(
        t.iter()
            .map(|&v| match v {
                0 => HalfValue::Zero,
                1 => HalfValue::Half,
                _ => HalfValue::One,
            })
            .collect(),
    )
}

pub fn to_f64(t: &[i64]) -> Vec<f64> {
    t.iter().map(|&v| v as f64 / 2.0).collect()
}

/// Objective written out directly from the weights.
pub fn direct_objective(model: &PairwiseModel, q: &[f64]) -> f64 {
    let n = model.num_nodes();
    let nodes: f64 = model.theta().iter().zip(q).map(|(a, b)| a * b).sum();
    let edges: f64 = model.weights().iter().zip(&q[n..]).map(|(a, b)| a * b).sum();
    nodes + edges + model.constant()
}

/// Exhaustive optimum over the 2^n configurations.
pub fn exhaustive_map_value(model: &PairwiseModel) -> f64 {
    let n = model.num_nodes();
    (0u64..1 << n)
        .map(|mask| {
            let x: Vec<f64> = (0..n).map(|i| ((mask >> i) & 1) as f64).collect();
            let mut q = x.clone();
            q.extend(model.edges().iter().map(|&(i, j)| x[i] * x[j]));
            direct_objective(model, &q)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// All values of the 2^n configurations, sorted descending.
pub fn all_configuration_values(model: &PairwiseModel) -> Vec<f64> {
    let n = model.num_nodes();
    let mut v: Vec<f64> = (0u64..1 << n)
        .map(|mask| {
            let x: Vec<f64> = (0..n).map(|i| ((mask >> i) & 1) as f64).collect();
            let mut q = x.clone();
            q.extend(model.edges().iter().map(|&(i, j)| x[i] * x[j]));
            direct_objective(model, &q)
        })
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Node blocks of the fractional vertices whose objective exceeds the
/// integral optimum by more than `tol`, found by enumerating every
/// half-integral point and testing its active-constraint rank.
pub fn confounding_patterns(model: &PairwiseModel, tol: f64) -> BTreeSet<Vec<HalfValue>> {
    let n = model.num_nodes();
    let opt = exhaustive_map_value(model);
    half_integral_points(model)
        .into_iter()
        .filter(|t| t[..n].contains(&1))
        .filter(|t| direct_objective(model, &to_f64(t)) > opt + tol)
        .filter(|t| is_vertex_by_rank(model, t))
        .map(|t| to_half_point(&t[..n]).q)
        .collect()
}

/// Simple cycles of the graph, each once, as node sequences starting at
/// their smallest node.
pub fn simple_cycles(model: &PairwiseModel) -> Vec<Vec<usize>> {
    let n = model.num_nodes();
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in model.edges() {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut out = Vec::new();
    fn extend(adj: &[Vec<usize>], path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let start = path[0];
        let last = *path.last().unwrap();
        for &v in &adj[last] {
            if v == start && path.len() >= 3 && path[1] < last {
                out.push(path.clone());
            }
            if v > start && !on[v] {
                on[v] = true;
                path.push(v);
                extend(adj, path, on, out);
                path.pop();
                on[v] = false;
            }
        }
    }
    for s in 0..n {
        let mut on = vec![false; n];
        on[s] = true;
        extend(&adj, &mut vec![s], &mut on, &mut out);
    }
    out
}

/// Smallest slack of any cycle inequality at `q`, over every simple cycle
/// and every odd subset of its edges.
pub fn exhaustive_min_slack(model: &PairwiseModel, q: &[f64]) -> Option<f64> {
    let n = model.num_nodes();
    let mut best: Option<f64> = None;
    for cycle in simple_cycles(model) {
        let len = cycle.len();
        let d: Vec<f64> = (0..len)
            .map(|k| {
                let (a, b) = (cycle[k], cycle[(k + 1) % len]);
                let e = model.edge_index(a, b).unwrap();
                q[a] + q[b] - 2.0 * q[n + e]
            })
            .collect();
        for mask in 0u32..1 << len {
            let odd = mask.count_ones() as usize;
            if odd % 2 == 0 {
                continue;
            }
            let lhs: f64 = (0..len)
                .map(|k| if mask >> k & 1 == 1 { d[k] } else { -d[k] })
                .sum();
            let slack = (odd - 1) as f64 - lhs;
            best = Some(best.map_or(slack, |b: f64| b.min(slack)));
        }
    }
    best
}

/// Random weights on a fixed edge list: `θ ~ U(-1, 1)`, `W ~ U(-w, w)`.
pub fn random_model(n: usize, edges: &[(usize, usize)], w: f64, seed: u64) -> PairwiseModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let edges = edges
        .iter()
        .map(|&(i, j)| (i, j, rng.gen_range(-w..w)))
        .collect();
    PairwiseModel::new(theta, edges).unwrap()
}

pub fn complete_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// All edge subsets of `K_n`, as edge lists.
pub fn all_graphs(n: usize, max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    let all = complete_edges(n);
    (0u32..1 << all.len())
        .filter(|m| m.count_ones() as usize <= max_edges)
        .map(|m| {
            all.iter()
                .enumerate()
                .filter(|(k, _)| m >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect()
        })
        .collect()
}

pub fn frustrated_triangle() -> PairwiseModel {
    PairwiseModel::complete(vec![0.6; 3], |_, _| -1.0).unwrap()
}
