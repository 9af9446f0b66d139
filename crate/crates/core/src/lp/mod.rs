//! Linear programming over boxed variables with vertex solutions.

mod program;
mod scalar;
mod simplex;

pub use program::{Fixings, LinearProgram, Relation, Row, FEASIBILITY_TOL};
pub use scalar::{ratio, Scalar};
pub use simplex::{
    ActiveConstraint, Basis, LpResult, LpStatus, Simplex, VarStatus, Vertex, STALL_THRESHOLD,
};

use num_rational::BigRational;

use crate::error::Result;

/// How a warm solve actually started.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Start {
    Warm,
    /// The supplied basis did not fit the program; solved from scratch.
    ColdFallback,
}

pub fn solve(lp: &LinearProgram) -> Result<LpResult> {
    Simplex::<f64>::new(lp)?.solve()
}

/// Solves `lp` with each fixed variable's bounds pinched to its value.
/// A value outside the variable's bounds yields `Infeasible`.
pub fn solve_fixed(lp: &LinearProgram, fixings: &Fixings) -> Result<LpResult> {
    match lp.pinched_bounds(fixings)? {
        Some(bounds) => Simplex::<f64>::with_bounds(lp, &bounds)?.solve(),
        None => Ok(LpResult::infeasible(0)),
    }
}

/// Restarts from `basis` (taken on `lp` modulo bounds and appended rows)
/// after applying `fixings`.
pub fn warm_solve(lp: &LinearProgram, basis: &Basis, fixings: &Fixings) -> Result<(LpResult, Start)> {
    let Some(bounds) = lp.pinched_bounds(fixings)? else {
        return Ok((LpResult::infeasible(0), Start::Warm));
    };
    match Simplex::<f64>::from_basis(lp, &bounds, basis)? {
        Some(mut s) => Ok((s.solve()?, Start::Warm)),
        None => Ok((Simplex::<f64>::with_bounds(lp, &bounds)?.solve()?, Start::ColdFallback)),
    }
}

/// Exact rational solve; coefficients are taken at their exact binary value.
pub fn solve_exact(lp: &LinearProgram, fixings: &Fixings) -> Result<LpResult<BigRational>> {
    match lp.pinched_bounds(fixings)? {
        Some(bounds) => Simplex::<BigRational>::with_bounds(lp, &bounds)?.solve(),
        None => Ok(LpResult::infeasible(0)),
    }
}
