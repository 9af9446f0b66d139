use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when checking a returned point against rows and bounds.
pub const FEASIBILITY_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
}

/// One linear constraint `a·x (<= | =) b`, stored sparsely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Row {
    pub fn le(coeffs: impl Into<Vec<(usize, f64)>>, rhs: f64) -> Self {
        Self::new(coeffs.into(), Relation::Le, rhs)
    }

    /// `a·x >= b`, stored as `-a·x <= -b`.
    pub fn ge(coeffs: impl Into<Vec<(usize, f64)>>, rhs: f64) -> Self {
        let coeffs = coeffs.into().into_iter().map(|(j, a)| (j, -a)).collect();
        Self::new(coeffs, Relation::Le, -rhs)
    }

    pub fn eq(coeffs: impl Into<Vec<(usize, f64)>>, rhs: f64) -> Self {
        Self::new(coeffs.into(), Relation::Eq, rhs)
    }

    /// Builds a row from a dense coefficient vector, dropping zeros.
    pub fn dense(coeffs: &[f64], relation: Relation, rhs: f64) -> Self {
        let sparse = coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0.0)
            .map(|(j, a)| (j, *a))
            .collect();
        Self::new(sparse, relation, rhs)
    }

    fn new(mut coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Self {
        coeffs.sort_by_key(|(j, _)| *j);
        // merge repeated indices
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        for (j, a) in coeffs {
            match merged.last_mut() {
                Some((k, b)) if *k == j => *b += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|(_, a)| *a != 0.0);
        Row {
            coeffs: merged,
            relation,
            rhs,
        }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|(j, a)| a * x[*j]).sum()
    }

    /// `rhs - a·x`; negative means violated (for either relation).
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.rhs - self.activity(x)
    }

    pub fn is_satisfied(&self, x: &[f64], tol: f64) -> bool {
        let s = self.slack(x);
        match self.relation {
            Relation::Le => s >= -tol,
            Relation::Eq => s.abs() <= tol,
        }
    }
}

/// Variable values pinned for one solve. Keys are variable indices.
pub type Fixings = BTreeMap<usize, f64>;

/// `max c·x` subject to rows and finite per-variable bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    rows: Vec<Row>,
    bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// A program with unit box bounds `0 <= x <= 1` and no rows.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            num_vars: n,
            objective,
            rows: Vec::new(),
            bounds: vec![(0.0, 1.0); n],
        }
    }

    pub fn with_bounds(objective: Vec<f64>, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if objective.len() != bounds.len() {
            return Err(Error::Dimension(format!(
                "{} objective coefficients but {} bounds",
                objective.len(),
                bounds.len()
            )));
        }
        let lp = LinearProgram {
            num_vars: objective.len(),
            objective,
            rows: Vec::new(),
            bounds,
        };
        lp.validate()?;
        Ok(lp)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn push_row(&mut self, row: Row) -> Result<()> {
        self.check_row(&row)?;
        self.rows.push(row);
        Ok(())
    }

    /// Returns the program with `row` appended.
    pub fn add_row(mut self, row: Row) -> Result<Self> {
        self.push_row(row)?;
        Ok(self)
    }

    pub fn check_row(&self, row: &Row) -> Result<()> {
        if let Some((j, _)) = row.coeffs.iter().find(|(j, _)| *j >= self.num_vars) {
            return Err(Error::Dimension(format!(
                "row references variable {j} but the program has {} variables",
                self.num_vars
            )));
        }
        if !row.rhs.is_finite() || row.coeffs.iter().any(|(_, a)| !a.is_finite()) {
            return Err(Error::InvalidProgram("non-finite row data".into()));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars || self.bounds.len() != self.num_vars {
            return Err(Error::Dimension("objective/bounds length".into()));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidProgram("non-finite objective".into()));
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(Error::InvalidProgram(format!(
                    "variable {j} has bounds [{lo}, {hi}]"
                )));
            }
        }
        self.rows.iter().try_for_each(|r| self.check_row(r))
    }

    /// Bounds after pinching every fixed variable to its value. `None` when a
    /// fixing falls outside the variable's original bounds.
    pub fn pinched_bounds(&self, fixings: &Fixings) -> Result<Option<Vec<(f64, f64)>>> {
        let mut bounds = self.bounds.clone();
        for (&j, &v) in fixings {
            if j >= self.num_vars {
                return Err(Error::Dimension(format!("fixing of variable {j}")));
            }
            let (lo, hi) = bounds[j];
            if v < lo - FEASIBILITY_TOL || v > hi + FEASIBILITY_TOL {
                return Ok(None);
            }
            bounds[j] = (v, v);
        }
        Ok(Some(bounds))
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest bound or row violation of `x` (zero when feasible).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (v, &(lo, hi)) in x.iter().zip(&self.bounds) {
            worst = worst.max(lo - v).max(v - hi);
        }
        for row in &self.rows {
            let s = row.slack(x);
            let viol = match row.relation {
                Relation::Le => -s,
                Relation::Eq => s.abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.num_vars && self.max_violation(x) <= tol
    }

    /// Objective of the Lagrangian dual at row multipliers `y`, using `bounds`
    /// for the box. Any `y` with `y >= 0` on inequality rows gives an upper
    /// bound on the primal optimum.
    pub fn dual_objective(&self, y: &[f64], bounds: &[(f64, f64)]) -> f64 {
        let mut reduced = self.objective.clone();
        let mut value = 0.0;
        for (row, &yr) in self.rows.iter().zip(y) {
            value += row.rhs * yr;
            for &(j, a) in &row.coeffs {
                reduced[j] -= a * yr;
            }
        }
        for (r, &(lo, hi)) in reduced.iter().zip(bounds) {
            value += if *r > 0.0 { r * hi } else { r * lo };
        }
        value
    }
}
