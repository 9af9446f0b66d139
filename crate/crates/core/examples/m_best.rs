//! The five best configurations of a random model, written as CSV.

use mapbb::mbest::{m_best_map, write_ranked_csv};
use mapbb::model::random_instance;

fn main() -> mapbb::Result<()> {
    let model = random_instance(10, 0.5, 7);
    let (ranked, result) = m_best_map(&model, 5)?;
    write_ranked_csv(&ranked, std::io::stdout().lock())?;
    let top = model.ranked_configurations(5)?;
    for ((c, v), (bc, bv)) in ranked.iter().zip(&top) {
        println!("{c} {v:.6}   enumeration: {bc} {bv:.6}");
    }
    println!(
        "{} LP calls, {} fractional patterns, exhausted: {}",
        result.stats.lp_calls, result.fractional_patterns, result.exhausted
    );
    Ok(())
}
