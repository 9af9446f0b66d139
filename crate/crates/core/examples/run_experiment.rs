//! A reduced version of the complete-graph sweep, written to a temp dir.

use mapbb::harness::{median, run_experiment, ExperimentConfig};

fn main() -> mapbb::Result<()> {
    let out_dir = std::env::temp_dir().join("mapbb-example");
    let config = ExperimentConfig {
        n: 8,
        ws: vec![0.1, 0.3, 2.0],
        trials: 10,
        out_dir: out_dir.clone(),
        ..ExperimentConfig::default()
    };
    let summary = run_experiment(&config)?;
    for b in &summary.batches {
        let sv: Vec<f64> = b.records.iter().filter_map(|r| r.sv_upper.map(|v| v as f64)).collect();
        let br: Vec<f64> = b.records.iter().filter_map(|r| r.num_branches.map(|v| v as f64)).collect();
        println!("w={}: median sv_upper {:?}, median branches {:?}", b.w, median(&sv), median(&br));
    }
    println!("files in {}", out_dir.display());
    Ok(())
}
