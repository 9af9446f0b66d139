//! Confounding singleton patterns of random models.

use mapbb::branch::solve_map;
use mapbb::estimator::estimate_svc;
use mapbb::model::random_instance;

fn main() -> mapbb::Result<()> {
    for (seed, w) in [(0, 0.1), (0, 0.3), (0, 2.0)] {
        let model = random_instance(10, w, seed);
        let report = estimate_svc(&model)?;
        let bb = solve_map(&model)?;
        println!(
            "w={w}: {} patterns ({} spurious, {} ties), integral optimum {:.6}, {} estimator LP calls; \
             branch-and-bound used {} branches",
            report.count,
            report.spurious,
            report.ties,
            report.best_integral_value,
            report.stats.lp_calls,
            bb.stats.branches,
        );
        for p in report.patterns.iter().take(3) {
            println!("  {} value {:.6} best vertex {:?}", mapbb::vertex::pattern_string(&p.pattern), p.value, p.vertex_value);
        }
    }
    Ok(())
}
