//! Best-first frontier and warm-started child solves shared by the
//! branching algorithms.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lp::{Basis, Fixings, LinearProgram, LpStatus, Simplex, FEASIBILITY_TOL};

/// Counters for one search.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    /// LP solves, root included. Infeasible children count.
    pub lp_calls: usize,
    /// Fractional nodes that were split.
    pub branches: usize,
    pub max_frontier: usize,
    pub pivots: usize,
    /// Parent bases that could not be rebuilt and were re-solved cold.
    pub warm_fallbacks: usize,
    /// Children abandoned once their bound fell below a known cutoff.
    pub cut_off: usize,
    #[serde(with = "secs")]
    pub wall_time: Duration,
}

mod secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        d.as_secs_f64().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        f64::deserialize(d).map(Duration::from_secs_f64)
    }
}

/// An LP subproblem: the base program with some variables pinned, and its
/// cached optimum.
#[derive(Clone, Debug)]
pub struct BranchNode {
    pub fixings: Fixings,
    pub value: f64,
    pub point: Vec<f64>,
    pub(crate) basis: Basis,
    pub(crate) seq: u64,
    /// Tie-break among equal values: higher class pops first.
    pub(crate) class: u8,
}

impl BranchNode {
    /// Variables pinned to 0.
    pub fn fixed_zero(&self) -> impl Iterator<Item = usize> + '_ {
        self.fixings.iter().filter(|(_, v)| **v == 0.0).map(|(j, _)| *j)
    }

    /// Variables pinned to 1.
    pub fn fixed_one(&self) -> impl Iterator<Item = usize> + '_ {
        self.fixings.iter().filter(|(_, v)| **v == 1.0).map(|(j, _)| *j)
    }

    /// Whether a 0/1 assignment of `vars` agrees with every fixing.
    pub fn admits(&self, vars: &[usize], values: &[bool]) -> bool {
        vars.iter().zip(values).all(|(j, &b)| match self.fixings.get(j) {
            Some(&v) => v == if b { 1.0 } else { 0.0 },
            None => true,
        })
    }
}

struct Entry(BranchNode);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        a.value
            .total_cmp(&b.value)
            .then(a.class.cmp(&b.class))
            .then(b.seq.cmp(&a.seq))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Max-priority queue on node value; ties by class, then insertion order.
#[derive(Default)]
pub(crate) struct Frontier {
    heap: BinaryHeap<Entry>,
}

impl Frontier {
    pub fn push(&mut self, node: BranchNode) {
        self.heap.push(Entry(node));
    }

    pub fn pop(&mut self) -> Option<BranchNode> {
        self.heap.pop().map(|e| e.0)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn nodes(&self) -> Vec<&BranchNode> {
        self.heap.iter().map(|e| &e.0).collect()
    }
}

/// Solves the root and children of popped nodes, restarting each child from
/// its parent's optimal basis.
pub(crate) struct ChildSolver<'a> {
    lp: &'a LinearProgram,
    next_seq: u64,
    /// Children whose LP bound falls to this value or below are abandoned.
    cutoff: Option<f64>,
    pub stats: SolveStats,
}

impl<'a> ChildSolver<'a> {
    pub fn new(lp: &'a LinearProgram) -> Result<Self> {
        lp.validate()?;
        Ok(ChildSolver {
            lp,
            next_seq: 0,
            cutoff: None,
            stats: SolveStats::default(),
        })
    }

    pub fn set_cutoff(&mut self, cutoff: f64) {
        self.cutoff = Some(cutoff);
    }

    fn package(&mut self, s: &Simplex, fixings: Fixings) -> BranchNode {
        let seq = self.next_seq;
        self.next_seq += 1;
        BranchNode {
            fixings,
            value: s.value(),
            point: s.point(),
            basis: s.basis(),
            seq,
            class: 0,
        }
    }

    pub fn root(&mut self) -> Result<Option<BranchNode>> {
        self.solve_cold(Fixings::new())
    }

    fn solve_cold(&mut self, fixings: Fixings) -> Result<Option<BranchNode>> {
        self.stats.lp_calls += 1;
        let Some(bounds) = self.lp.pinched_bounds(&fixings)? else {
            return Ok(None);
        };
        let mut s = Simplex::<f64>::with_bounds(self.lp, &bounds)?;
        let status = s.optimize()?;
        self.stats.pivots += s.pivots();
        Ok((status == LpStatus::Optimal).then(|| self.package(&s, fixings)))
    }

    fn rebuild(&mut self, parent: &BranchNode) -> Result<Simplex> {
        let bounds = self
            .lp
            .pinched_bounds(&parent.fixings)?
            .expect("parent fixings were feasible");
        if let Some(mut s) = Simplex::<f64>::from_basis(self.lp, &bounds, &parent.basis)? {
            s.optimize()?;
            self.stats.pivots += s.pivots();
            return Ok(s);
        }
        self.stats.warm_fallbacks += 1;
        let mut s = Simplex::<f64>::with_bounds(self.lp, &bounds)?;
        s.optimize()?;
        self.stats.pivots += s.pivots();
        Ok(s)
    }

    /// Solves each child of `parent`, a child being a list of additional
    /// fixings. Infeasible children come back as `None`.
    pub fn children(&mut self, parent: &BranchNode, kids: &[Vec<(usize, f64)>]) -> Result<Vec<Option<BranchNode>>> {
        let base = self.rebuild(parent)?;
        let mut out = Vec::with_capacity(kids.len());
        for extra in kids {
            self.stats.lp_calls += 1;
            if let (Some(cutoff), [(j, v)]) = (self.cutoff, &extra[..]) {
                match base.fixing_bound(*j, *v) {
                    None => {
                        out.push(None);
                        continue;
                    }
                    Some(b) if b <= cutoff => {
                        self.stats.cut_off += 1;
                        out.push(None);
                        continue;
                    }
                    Some(_) => {}
                }
            }
            let mut fixings = parent.fixings.clone();
            let mut s = base.clone();
            let start = s.pivots();
            let mut contradictory = false;
            for &(j, v) in extra {
                let (lo, hi) = self.lp.bounds()[j];
                if v < lo - FEASIBILITY_TOL || v > hi + FEASIBILITY_TOL {
                    contradictory = true;
                    break;
                }
                fixings.insert(j, v);
                s.fix(j, v)?;
            }
            if contradictory {
                out.push(None);
                continue;
            }
            let status = s.optimize_with_cutoff(self.cutoff)?;
            self.stats.pivots += s.pivots() - start;
            if status == LpStatus::CutOff {
                self.stats.cut_off += 1;
            }
            out.push((status == LpStatus::Optimal).then(|| self.package(&s, fixings)));
        }
        Ok(out)
    }
}

pub(crate) fn is_integral_on(point: &[f64], vars: &[usize], tol: f64) -> bool {
    vars.iter().all(|&j| {
        let v = point[j];
        v.abs() <= tol || (v - 1.0).abs() <= tol
    })
}

/// Snaps integer variables that are within `tol` of 0 or 1.
pub(crate) fn snap_integral(point: &mut [f64], vars: &[usize], tol: f64) {
    for &j in vars {
        if point[j].abs() <= tol {
            point[j] = 0.0;
        } else if (point[j] - 1.0).abs() <= tol {
            point[j] = 1.0;
        }
    }
}

