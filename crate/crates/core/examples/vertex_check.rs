//! Half-integral points of the triangle polytope: which are vertices, and
//! the cycle inequality that cuts off the fractional one.

use mapbb::model::PairwiseModel;
use mapbb::vertex::{
    eval_cycle_inequality, find_frustrated_cycle, fractional_components, is_vertex, parity_rank, separate_cycle,
    HalfIntegralPoint, HalfValue::*,
};

fn main() -> mapbb::Result<()> {
    let triangle = PairwiseModel::complete(vec![0.6; 3], |_, _| -1.0)?;
    let frustrated = HalfIntegralPoint::new(vec![Half, Half, Half, Zero, Zero, Zero]);
    let midpoint = HalfIntegralPoint::new(vec![Half; 6]);
    for (name, q) in [("frustrated", &frustrated), ("midpoint", &midpoint)] {
        let comps = fractional_components(q, &triangle);
        let cycle = find_frustrated_cycle(&comps[0], q, &triangle);
        println!(
            "{name}: vertex {}, frustrated cycle {:?}, objective {:.3}",
            is_vertex(q, &triangle)?,
            cycle.map(|c| c.nodes),
            triangle.objective_value(&q.to_f64())?,
        );
    }
    let point = frustrated.to_f64();
    if let Some(cut) = separate_cycle(&point, &triangle) {
        println!("most violated cut on {:?}: slack {}", cut.nodes, eval_cycle_inequality(&point, &cut));
    }
    // three zero edges on a 3-cycle give a full-rank system, two on a 4-cycle do not
    println!("parity (+,+,+): {}, (+,+,-,-): {}", parity_rank(&[1, 1, 1]), parity_rank(&[1, 1, -1, -1]));
    Ok(())
}
