//! Cycle-inequality cutting planes, with branch-and-bound as fallback.

use mapbb::branch::solve_map_on;
use mapbb::cuts::{count_cut_induced, cutting_plane_solve, CutStatus, DEFAULT_MAX_ROUNDS};
use mapbb::model::random_instance;

fn main() -> mapbb::Result<()> {
    for seed in 0..5 {
        let model = random_instance(12, 0.3, seed);
        let out = cutting_plane_solve(&model, DEFAULT_MAX_ROUNDS)?;
        let value = match out.status {
            CutStatus::Integral => out.value,
            _ => solve_map_on(&model, &out.lp)?.value,
        };
        let induced = count_cut_induced(&model, &out.cuts)?;
        println!(
            "seed {seed}: {:?} after {} cuts ({} LP calls), value {value:.6}, cut-induced patterns {induced}",
            out.status,
            out.num_cuts(),
            out.lp_calls,
        );
        for cut in out.cuts.iter().take(2) {
            println!("  cycle {:?}, odd set {:?}, rhs {}", cut.nodes, cut.in_odd_set, cut.rhs());
        }
    }
    Ok(())
}
