//! Exact MAP on a random complete graph, checked against enumeration.

use mapbb::branch::solve_map;
use mapbb::lp;
use mapbb::model::random_instance;

fn main() -> mapbb::Result<()> {
    let n = 12;
    for (seed, w) in [(1, 0.1), (2, 0.3), (3, 2.0)] {
        let model = random_instance(n, w, seed);
        let root = lp::solve(&model.local_lp())?;
        let sol = solve_map(&model)?;
        let (_, brute) = model.brute_force_map()?;
        println!(
            "K{n} w={w}: root bound {:.6}, MAP {} value {:.6} (enumeration {:.6}), {} branches, {} LP calls",
            root.value().expect("bounded") + model.constant(),
            sol.configuration,
            sol.value,
            brute,
            sol.stats.branches,
            sol.stats.lp_calls,
        );
    }
    Ok(())
}
