//! Dense dictionary simplex over boxed variables.
//!
//! Every row `a·x <= b` (or `= b`) gets a slack `s = b - a·x` with bounds
//! `[0, inf)` (or `[0, 0]`). The dictionary keeps the basic variables as
//! `x_B = rhs - T·x_N`, where every nonbasic variable sits at one of its
//! bounds. Because all structural variables are boxed, the slack basis with
//! each structural placed at the bound favoured by its cost is dual
//! feasible, so both cold and warm solves run the dual simplex method.

use serde::{Deserialize, Serialize};

use super::program::{LinearProgram, Relation, Row};
use super::scalar::{clean, Scalar};
use crate::error::{Error, Result};

/// Consecutive degenerate pivots after which the Bland rule takes over.
pub const STALL_THRESHOLD: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    /// Kept for completeness of the result contract. Programs here have
    /// finite boxes on every variable, so the engine never reports it.
    Unbounded,
    /// The objective bound reached the requested cutoff before optimality.
    CutOff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
}

/// A constraint that holds with equality at a basic solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActiveConstraint {
    Lower(usize),
    Upper(usize),
    Row(usize),
}

/// Status of every structural variable followed by every row slack.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Basis {
    num_vars: usize,
    status: Vec<VarStatus>,
}

impl Basis {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.status.len() - self.num_vars
    }

    pub fn status(&self) -> &[VarStatus] {
        &self.status
    }

    /// The `num_vars` constraints identifying the vertex: one per nonbasic
    /// variable.
    pub fn active_constraints(&self) -> Vec<ActiveConstraint> {
        self.status
            .iter()
            .enumerate()
            .filter_map(|(j, s)| match (*s, j < self.num_vars) {
                (VarStatus::Basic, _) => None,
                (VarStatus::AtLower, true) => Some(ActiveConstraint::Lower(j)),
                (VarStatus::AtUpper, true) => Some(ActiveConstraint::Upper(j)),
                (_, false) => Some(ActiveConstraint::Row(j - self.num_vars)),
            })
            .collect()
    }
}

/// An optimal basic solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Vertex<T = f64> {
    pub point: Vec<T>,
    pub value: T,
    pub basis: Basis,
    /// Row multipliers; nonnegative on inequality rows.
    pub duals: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult<T = f64> {
    pub status: LpStatus,
    pub solution: Option<Vertex<T>>,
    pub pivots: usize,
}

impl<T> LpResult<T> {
    pub(crate) fn infeasible(pivots: usize) -> Self {
        LpResult {
            status: LpStatus::Infeasible,
            solution: None,
            pivots,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn point(&self) -> Option<&[T]> {
        self.solution.as_ref().map(|v| v.point.as_slice())
    }

    pub fn value(&self) -> Option<&T> {
        self.solution.as_ref().map(|v| &v.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Loc {
    Row(usize),
    Col(usize),
}

/// Resumable simplex state. Clone it to branch.
#[derive(Clone, Debug)]
pub struct Simplex<T: Scalar = f64> {
    n: usize,
    m: usize,
    lower: Vec<T>,
    upper: Vec<Option<T>>,
    cost: Vec<T>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    loc: Vec<Loc>,
    at_upper: Vec<bool>,
    /// m x n, row-major.
    tab: Vec<T>,
    rhs: Vec<T>,
    reduced: Vec<T>,
    x: Vec<T>,
    pivots: usize,
    pivot_limit: usize,
}


impl<T: Scalar> Simplex<T> {
    /// Slack basis for `lp` with its own bounds.
    pub fn new(lp: &LinearProgram) -> Result<Self> {
        lp.validate()?;
        Ok(Self::from_parts(lp, lp.bounds()))
    }

    /// Slack basis for `lp` with replacement bounds (e.g. after fixings).
    pub fn with_bounds(lp: &LinearProgram, bounds: &[(f64, f64)]) -> Result<Self> {
        lp.validate()?;
        if bounds.len() != lp.num_vars() {
            return Err(Error::Dimension("bounds length".into()));
        }
        if bounds.iter().any(|(lo, hi)| !(lo.is_finite() && hi.is_finite()) || lo > hi) {
            return Err(Error::InvalidProgram("invalid replacement bounds".into()));
        }
        Ok(Self::from_parts(lp, bounds))
    }

    fn from_parts(lp: &LinearProgram, bounds: &[(f64, f64)]) -> Self {
        let n = lp.num_vars();
        let m = lp.rows().len();
        let mut lower = Vec::with_capacity(n + m);
        let mut upper = Vec::with_capacity(n + m);
        for &(lo, hi) in bounds {
            lower.push(T::from_f64(lo));
            upper.push(Some(T::from_f64(hi)));
        }
        let mut tab = vec![T::zero(); m * n];
        let mut rhs = Vec::with_capacity(m);
        for (k, row) in lp.rows().iter().enumerate() {
            for &(j, a) in &row.coeffs {
                tab[k * n + j] = T::from_f64(a);
            }
            rhs.push(T::from_f64(row.rhs));
            lower.push(T::zero());
            upper.push(match row.relation {
                Relation::Le => None,
                Relation::Eq => Some(T::zero()),
            });
        }
        let cost: Vec<T> = lp.objective().iter().map(|&c| T::from_f64(c)).collect();
        let mut at_upper = vec![false; n + m];
        for j in 0..n {
            at_upper[j] = cost[j] > T::zero() && lower[j] != *upper[j].as_ref().unwrap();
        }
        let mut s = Simplex {
            n,
            m,
            lower,
            upper,
            reduced: cost.clone(),
            cost,
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            loc: (0..n).map(Loc::Col).chain((0..m).map(Loc::Row)).collect(),
            at_upper,
            tab,
            rhs,
            x: vec![T::zero(); n + m],
            pivots: 0,
            pivot_limit: 0,
        };
        s.reset_pivot_limit();
        s.place_nonbasic();
        s.recompute_basic();
        s
    }

    /// Rebuilds the dictionary of a stored basis. Rows added to `lp` after
    /// the basis was taken enter with their slack basic. Returns `None` when
    /// the basis does not fit `lp` or is singular, in which case the caller
    /// should fall back to a cold start.
    pub fn from_basis(lp: &LinearProgram, bounds: &[(f64, f64)], basis: &Basis) -> Result<Option<Self>> {
        let mut s = Self::with_bounds(lp, bounds)?;
        let (n, m) = (s.n, s.m);
        if basis.num_vars != n || basis.num_rows() > m {
            return Ok(None);
        }
        let target = |j: usize| -> VarStatus {
            if j < n + basis.num_rows() {
                basis.status[j]
            } else {
                VarStatus::Basic
            }
        };
        if (0..n + m).filter(|&j| target(j) == VarStatus::Basic).count() != m {
            return Ok(None);
        }
        for q in 0..n {
            if target(q) != VarStatus::Basic {
                continue;
            }
            let Loc::Col(t) = s.loc[q] else { continue };
            let mut best: Option<(usize, T)> = None;
            for k in 0..m {
                if target(s.basic[k]) == VarStatus::Basic {
                    continue;
                }
                let a = s.tab[k * n + t].abs();
                if a > T::pivot_tol() && best.as_ref().is_none_or(|(_, b)| a > *b) {
                    best = Some((k, a));
                }
            }
            let Some((k, _)) = best else { return Ok(None) };
            s.pivot(k, t);
        }
        for j in 0..n + m {
            if let Loc::Col(_) = s.loc[j] {
                s.at_upper[j] = target(j) == VarStatus::AtUpper && s.upper[j].is_some();
            }
        }
        // Flip boxed nonbasics whose bound no longer matches the reduced cost.
        for t in 0..n {
            let q = s.nonbasic[t];
            if s.is_fixed(q) {
                s.at_upper[q] = false;
                continue;
            }
            if s.reduced[t] > T::dual_tol() && !s.at_upper[q] {
                if s.upper[q].is_none() {
                    return Ok(None);
                }
                s.at_upper[q] = true;
            } else if s.reduced[t] < -T::dual_tol() && s.at_upper[q] {
                s.at_upper[q] = false;
            }
        }
        s.pivots = 0;
        s.place_nonbasic();
        s.recompute_basic();
        Ok(Some(s))
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.m
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    fn reset_pivot_limit(&mut self) {
        self.pivot_limit = self.pivots + 50 * (self.n + self.m) + 1000;
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.upper[j].as_ref() == Some(&self.lower[j])
    }

    fn bound_value(&self, j: usize) -> T {
        if self.at_upper[j] {
            self.upper[j].clone().expect("at_upper implies finite upper bound")
        } else {
            self.lower[j].clone()
        }
    }

    fn place_nonbasic(&mut self) {
        for t in 0..self.n {
            let q = self.nonbasic[t];
            self.x[q] = self.bound_value(q);
        }
    }

    fn recompute_basic(&mut self) {
        let n = self.n;
        for k in 0..self.m {
            let mut v = self.rhs[k].clone();
            let row = &self.tab[k * n..(k + 1) * n];
            for (t, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    v = v - a.clone() * self.x[self.nonbasic[t]].clone();
                }
            }
            self.x[self.basic[k]] = v;
        }
    }

    /// Changes the bounds of variable `j` (structural index). Pinching with
    /// `lo == hi` fixes the variable.
    pub fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) -> Result<()> {
        if j >= self.n {
            return Err(Error::Dimension(format!("variable {j} out of range")));
        }
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidProgram(format!("bounds [{lo}, {hi}]")));
        }
        self.lower[j] = T::from_f64(lo);
        self.upper[j] = Some(T::from_f64(hi));
        if let Loc::Col(t) = self.loc[j] {
            self.at_upper[j] = !self.is_fixed(j) && self.reduced[t] > T::zero();
            let delta = self.bound_value(j) - self.x[j].clone();
            if !delta.is_zero() {
                self.shift_nonbasic(t, delta);
            }
        }
        Ok(())
    }

    pub fn fix(&mut self, j: usize, value: f64) -> Result<()> {
        self.set_bounds(j, value, value)
    }

    fn shift_nonbasic(&mut self, t: usize, delta: T) {
        let n = self.n;
        for k in 0..self.m {
            let a = &self.tab[k * n + t];
            if !a.is_zero() {
                let b = self.basic[k];
                self.x[b] = self.x[b].clone() - a.clone() * delta.clone();
            }
        }
        let q = self.nonbasic[t];
        self.x[q] = self.x[q].clone() + delta;
    }

    /// Upper bound on the optimum once `j` is fixed to `value`, read off one
    /// dual step on the current tableau, which must be dual feasible. `None`
    /// when that step already proves the fixing infeasible.
    pub fn fixing_bound(&self, j: usize, value: f64) -> Option<T> {
        let z = self.value();
        let delta = T::from_f64(value) - self.x[j].clone();
        match self.loc[j] {
            Loc::Col(t) => Some(z + self.reduced[t].clone() * delta),
            Loc::Row(k) => {
                if delta.abs() <= T::feas_tol() {
                    return Some(z);
                }
                let t = self.select_entering(k, delta < T::zero(), false)?;
                let a = self.tab[k * self.n + t].abs();
                Some(z - self.reduced[t].abs() / a * delta.abs())
            }
        }
    }

    /// Appends a row; its slack enters the basis. Dual feasibility is kept,
    /// so the next `optimize` is a dual-simplex restart.
    pub fn add_row(&mut self, row: &Row) -> Result<()> {
        let n = self.n;
        if let Some((j, _)) = row.coeffs.iter().find(|(j, _)| *j >= n) {
            return Err(Error::Dimension(format!("row references variable {j}")));
        }
        let mut new_row = vec![T::zero(); n];
        let mut new_rhs = T::from_f64(row.rhs);
        for &(j, a) in &row.coeffs {
            let a = T::from_f64(a);
            match self.loc[j] {
                Loc::Col(t) => new_row[t] = new_row[t].clone() + a,
                Loc::Row(k) => {
                    new_rhs = new_rhs - a.clone() * self.rhs[k].clone();
                    for (t, v) in new_row.iter_mut().enumerate() {
                        let tk = &self.tab[k * n + t];
                        if !tk.is_zero() {
                            *v = v.clone() - a.clone() * tk.clone();
                        }
                    }
                }
            }
        }
        let slack = self.n + self.m;
        let mut value = T::from_f64(row.rhs);
        for &(j, a) in &row.coeffs {
            value = value - T::from_f64(a) * self.x[j].clone();
        }
        self.tab.extend(new_row.into_iter().map(clean));
        self.rhs.push(new_rhs);
        self.lower.push(T::zero());
        self.upper.push(match row.relation {
            Relation::Le => None,
            Relation::Eq => Some(T::zero()),
        });
        self.x.push(value);
        self.at_upper.push(false);
        self.loc.push(Loc::Row(self.m));
        self.basic.push(slack);
        self.m += 1;
        self.reset_pivot_limit();
        Ok(())
    }

    fn infeasibility(&self, j: usize) -> Option<(T, bool)> {
        let v = &self.x[j];
        if *v < self.lower[j].clone() - T::feas_tol() {
            return Some((self.lower[j].clone() - v.clone(), false));
        }
        if let Some(u) = &self.upper[j] {
            if *v > u.clone() + T::feas_tol() {
                return Some((v.clone() - u.clone(), true));
            }
        }
        None
    }

    /// Leaving row and whether the leaving variable goes to its upper bound.
    fn select_leaving(&self, bland: bool) -> Option<(usize, bool)> {
        let mut best: Option<(usize, T, bool)> = None;
        for k in 0..self.m {
            let Some((amount, to_upper)) = self.infeasibility(self.basic[k]) else {
                continue;
            };
            let better = match &best {
                None => true,
                Some((bk, ba, _)) => {
                    if bland {
                        self.basic[k] < self.basic[*bk]
                    } else {
                        amount > *ba
                    }
                }
            };
            if better {
                best = Some((k, amount, to_upper));
            }
        }
        best.map(|(k, _, up)| (k, up))
    }

    fn select_entering(&self, k: usize, to_upper: bool, bland: bool) -> Option<usize> {
        let n = self.n;
        let row = &self.tab[k * n..(k + 1) * n];
        // leaving variable must move up unless it exceeds its upper bound
        let need_increase = !to_upper;
        let mut cands: Vec<(usize, T, T)> = Vec::new();
        let mut min_ratio: Option<T> = None;
        for (t, a) in row.iter().enumerate() {
            let q = self.nonbasic[t];
            if self.is_fixed(q) || a.abs() <= T::pivot_tol() {
                continue;
            }
            let q_increases = !self.at_upper[q];
            // x_p moves by -a * dq
            let p_increases = (*a < T::zero()) == q_increases;
            if p_increases != need_increase {
                continue;
            }
            let ratio = self.reduced[t].abs() / a.abs();
            if min_ratio.as_ref().is_none_or(|r| ratio < *r) {
                min_ratio = Some(ratio.clone());
            }
            cands.push((t, ratio, a.abs()));
        }
        let min_ratio = min_ratio?;
        let cutoff = min_ratio + T::dual_tol();
        let mut best: Option<(usize, T)> = None;
        for (t, ratio, mag) in cands {
            if ratio > cutoff {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bt, bm)) => {
                    if bland {
                        self.nonbasic[t] < self.nonbasic[*bt]
                    } else {
                        mag > *bm
                    }
                }
            };
            if better {
                best = Some((t, mag));
            }
        }
        best.map(|(t, _)| t)
    }

    fn pivot(&mut self, k: usize, t: usize) {
        let n = self.n;
        let inv = T::one() / self.tab[k * n + t].clone();
        let mut pivot_row: Vec<T> = self.tab[k * n..(k + 1) * n].to_vec();
        for (s, v) in pivot_row.iter_mut().enumerate() {
            *v = if s == t { inv.clone() } else { clean(v.clone() * inv.clone()) };
        }
        let pivot_rhs = self.rhs[k].clone() * inv.clone();
        for i in 0..self.m {
            if i == k {
                continue;
            }
            let f = self.tab[i * n + t].clone();
            if f.is_zero() {
                continue;
            }
            let row = &mut self.tab[i * n..(i + 1) * n];
            T::eliminate(row, &f, &pivot_row);
            row[t] = -(f.clone() * inv.clone());
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        let f = self.reduced[t].clone();
        if !f.is_zero() {
            T::eliminate(&mut self.reduced, &f, &pivot_row);
            self.reduced[t] = -(f.clone() * inv.clone());
        } else {
            self.reduced[t] = T::zero();
        }
        self.tab[k * n..(k + 1) * n].clone_from_slice(&pivot_row);
        self.rhs[k] = pivot_rhs;
        let p = self.basic[k];
        let q = self.nonbasic[t];
        self.basic[k] = q;
        self.nonbasic[t] = p;
        self.loc[q] = Loc::Row(k);
        self.loc[p] = Loc::Col(t);
        self.at_upper[q] = false;
    }

    /// Runs the dual simplex method to optimality or proof of infeasibility.
    pub fn optimize(&mut self) -> Result<LpStatus> {
        self.optimize_with_cutoff(None)
    }

    /// As [`optimize`](Self::optimize), but stops with `CutOff` as soon as
    /// the objective, an upper bound on the optimum while the basis stays
    /// dual feasible, is at most `cutoff`.
    pub fn optimize_with_cutoff(&mut self, cutoff: Option<f64>) -> Result<LpStatus> {
        let cutoff = cutoff.map(T::from_f64);
        if (0..self.n).any(|j| self.upper[j].as_ref().is_some_and(|u| *u < self.lower[j])) {
            return Ok(LpStatus::Infeasible);
        }
        self.reset_pivot_limit();
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            let Some((k, to_upper)) = self.select_leaving(bland) else {
                self.recompute_basic();
                if self.select_leaving(bland).is_none() {
                    return Ok(LpStatus::Optimal);
                }
                continue;
            };
            if cutoff.as_ref().is_some_and(|c| self.value() <= *c) {
                return Ok(LpStatus::CutOff);
            }
            let Some(t) = self.select_entering(k, to_upper, bland) else {
                return Ok(LpStatus::Infeasible);
            };
            if self.pivots >= self.pivot_limit {
                return Err(Error::PivotLimit(self.pivots));
            }
            let p = self.basic[k];
            let target = if to_upper {
                self.upper[p].clone().expect("violated upper bound exists")
            } else {
                self.lower[p].clone()
            };
            let a = self.tab[k * self.n + t].clone();
            let dq = (target.clone() - self.x[p].clone()) / (-a);
            let gain = (self.reduced[t].clone() * dq.clone()).abs();
            self.shift_nonbasic(t, dq);
            self.pivot(k, t);
            self.x[p] = target;
            self.at_upper[p] = to_upper;
            self.pivots += 1;
            if gain <= T::dual_tol() {
                degenerate += 1;
                if degenerate >= STALL_THRESHOLD {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
        }
    }

    pub fn point(&self) -> Vec<T> {
        self.x[..self.n].to_vec()
    }

    pub fn value(&self) -> T {
        self.cost
            .iter()
            .zip(&self.x)
            .fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
    }

    pub fn basis(&self) -> Basis {
        let status = (0..self.n + self.m)
            .map(|j| match self.loc[j] {
                Loc::Row(_) => VarStatus::Basic,
                Loc::Col(_) if self.at_upper[j] => VarStatus::AtUpper,
                Loc::Col(_) => VarStatus::AtLower,
            })
            .collect();
        Basis {
            num_vars: self.n,
            status,
        }
    }

    pub fn duals(&self) -> Vec<T> {
        (0..self.m)
            .map(|r| match self.loc[self.n + r] {
                Loc::Col(t) => -self.reduced[t].clone(),
                Loc::Row(_) => T::zero(),
            })
            .collect()
    }

    /// Optimizes and packages the outcome.
    pub fn solve(&mut self) -> Result<LpResult<T>> {
        let start = self.pivots;
        let status = self.optimize()?;
        let pivots = self.pivots - start;
        Ok(match status {
            LpStatus::Optimal => LpResult {
                status,
                solution: Some(Vertex {
                    point: self.point(),
                    value: self.value(),
                    basis: self.basis(),
                    duals: self.duals(),
                }),
                pivots,
            },
            _ => LpResult {
                status,
                solution: None,
                pivots,
            },
        })
    }
}
