//! Vertex solutions, fixings, appended rows and warm restarts.

use mapbb::lp::{self, Fixings, LinearProgram, Row, Simplex};

fn main() -> mapbb::Result<()> {
    // max x0 + x1 subject to x0 + x1 <= 1: a whole edge is optimal, the
    // solver still answers with one of its endpoints
    let lp = LinearProgram::new(vec![1.0, 1.0]).add_row(Row::le(vec![(0, 1.0), (1, 1.0)], 1.0))?;
    let r = lp::solve(&lp)?;
    println!("status {:?}, point {:?}, value {:?}", r.status, r.point(), r.value());
    let v = r.solution.as_ref().expect("optimal");
    println!("active constraints {:?}", v.basis.active_constraints());
    println!("row duals {:?}, dual bound {}", v.duals, lp.dual_objective(&v.duals, lp.bounds()));

    let fixed = lp::solve_fixed(&lp, &Fixings::from([(0, 0.0)]))?;
    println!("with x0 = 0: {:?} at {:?}", fixed.value(), fixed.point());

    let (warm, start) = lp::warm_solve(&lp, &v.basis, &Fixings::from([(1, 0.0)]))?;
    println!("warm restart ({start:?}) with x1 = 0: {:?}", warm.value());

    // the same program in exact arithmetic
    let exact = lp::solve_exact(&lp, &Fixings::new())?;
    println!("exact value {}", exact.value().expect("optimal"));

    // an incremental solver: add a row and re-optimize from the old basis
    let mut s = Simplex::<f64>::new(&lp)?;
    s.optimize()?;
    s.add_row(&Row::le(vec![(0, 2.0), (1, 1.0)], 1.0))?;
    s.optimize()?;
    println!("after 2x0 + x1 <= 1: {:?}, value {}, {} pivots in total", s.point(), s.value(), s.pivots());
    Ok(())
}
