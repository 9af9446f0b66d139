use std::path::Path;
use std::process::Command;

use mapbb::harness::{emit_cdf, format_decimal, run_experiment, write_cdf_csv, ExperimentConfig, Pipeline, PLOT_HEADER};
use mapbb::model::{write_agreement, AgreementModel};
use proptest::prelude::*;

/// Frustrated triangle in the agreement form: `θ' = -0.4`, `W' = -0.5`.
fn triangle_file(dir: &Path) -> std::path::PathBuf {
    let a = AgreementModel::new(vec![-0.4; 3], vec![(0, 1, -0.5), (0, 2, -0.5), (1, 2, -0.5)]).unwrap();
    let path = dir.join("triangle.txt");
    write_agreement(&a, std::fs::File::create(&path).unwrap()).unwrap();
    path
}

fn small_config(out: &Path) -> ExperimentConfig {
    ExperimentConfig {
        n: 7,
        ws: vec![0.3, 2.0],
        trials: 6,
        seed: 42,
        out_dir: out.to_path_buf(),
        ..ExperimentConfig::default()
    }
}

#[test]
fn triangle_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig {
        model_file: Some(triangle_file(dir.path())),
        out_dir: dir.path().join("out"),
        ..ExperimentConfig::default()
    };
    let s = run_experiment(&config).unwrap();
    let rec = &s.batches[0].records[0];
    assert_eq!(rec.sv_upper, Some(1));
    assert_eq!(rec.num_branches, Some(1));
    // best agreement score: one node on, the other two agree
    assert!((rec.brute_value - (-0.4 - 0.5)).abs() < 1e-12);
    let plot = std::fs::read_to_string(dir.path().join("out/file_n=3_triangle.csv")).unwrap();
    assert_eq!(plot, format!("{PLOT_HEADER}\n1,1,0,1\n"));
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let sa = run_experiment(&small_config(a.path())).unwrap();
    run_experiment(&small_config(b.path())).unwrap();
    let mut compared = 0;
    for f in &sa.files {
        let name = f.file_name().unwrap();
        if name.to_string_lossy().ends_with(".csv") {
            let x = std::fs::read(a.path().join(name)).unwrap();
            let y = std::fs::read(b.path().join(name)).unwrap();
            assert_eq!(x, y, "{name:?}");
            compared += 1;
        }
    }
    assert_eq!(compared, 6);
}

#[test]
fn csv_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let s = run_experiment(&small_config(dir.path())).unwrap();
    let read = |name: &str| std::fs::read_to_string(dir.path().join(name)).unwrap();
    let plot = read("complete_n=7_w=0.3.csv");
    assert!(plot.starts_with("sv_upper,num_cuts,cut_induced_vertices,num_branches\n"));
    assert_eq!(plot.lines().count(), 7);
    let cdf = read("cdf_complete_n=7_w=2.0.csv");
    assert!(cdf.starts_with("x,y\n"));
    assert!(!cdf.contains('\r'));
    let rows: Vec<(f64, f64)> = cdf
        .lines()
        .skip(1)
        .map(|l| {
            let (x, y) = l.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    assert!(rows.windows(2).all(|p| p[0].0 < p[1].0 && p[0].1 <= p[1].1));
    assert_eq!(rows.last().unwrap().1, 1.0);
    let details = read("details_complete_n=7_w=0.3.csv");
    for field in details.lines().skip(1).flat_map(|l| l.split(',')) {
        let numeric = field.starts_with(|c: char| c.is_ascii_digit() || c == '-');
        assert!(!(numeric && field.contains('e')), "{field}");
    }
    let meta: serde_json::Value = serde_json::from_str(&read("metadata.json")).unwrap();
    assert_eq!(meta["config"]["n"], 7);
    assert!(meta["seed_stream"].is_string());
    assert_eq!(s.batches.len(), 2);
}

#[test]
fn pipelines_fill_their_columns() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_config(dir.path());
    config.pipeline = Pipeline::Bb;
    let s = run_experiment(&config).unwrap();
    let r = &s.batches[0].records[0];
    assert!(r.num_branches.is_some() && r.sv_upper.is_none() && r.num_cuts.is_none());
    assert!(!dir.path().join("cdf_complete_n=7_w=0.3.csv").exists());
    config.pipeline = Pipeline::Cuts;
    let s = run_experiment(&config).unwrap();
    let r = &s.batches[1].records[0];
    assert!(r.num_cuts.is_some() && r.cut_value.is_some() && r.num_branches.is_none());
}

#[test]
fn bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_config(dir.path());
    config.trials = 0;
    assert!(run_experiment(&config).is_err());
    let mut config = small_config(dir.path());
    config.ws = vec![-1.0];
    assert!(run_experiment(&config).is_err());
}

#[test]
fn cdf_examples() {
    assert_eq!(emit_cdf(&[0.0, 0.0, 0.0]).unwrap(), vec![(0.0, 1.0)]);
    assert_eq!(emit_cdf(&[1.0, 2.0, 2.0, 5.0]).unwrap(), vec![(1.0, 0.25), (2.0, 0.75), (5.0, 1.0)]);
    assert!(emit_cdf(&[]).is_err());
    let mut buf = Vec::new();
    write_cdf_csv(&[(1.0, 0.25), (2.0, 1.0)], &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "x,y\n1,0.25\n2,1\n");
}

#[test]
fn decimals_have_no_exponent() {
    for v in [1e-12, 0.1 + 0.2, 123456789.0, -4.5e-7] {
        let s = format_decimal(v);
        assert!(!s.contains('e'), "{s}");
        assert_eq!(s.parse::<f64>().unwrap(), v);
    }
}

#[test]
fn command_line() {
    let exe = env!("CARGO_BIN_EXE_map-experiment");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = Command::new(exe)
        .args(["--n", "6", "--w", "0.3", "--w", "2.0", "--trials", "3", "--seed", "5", "--pipeline", "all"])
        .arg("--out-dir")
        .arg(&out)
        .args(["--max-rounds", "50"])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(out.join("complete_n=6_w=0.3.csv").exists());
    assert!(out.join("cdf_complete_n=6_w=2.0.csv").exists());
    assert!(out.join("metadata.json").exists());

    let file = triangle_file(dir.path());
    let status = Command::new(exe)
        .arg("--model-file")
        .arg(&file)
        .arg("--out-dir")
        .arg(dir.path().join("file"))
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(String::from_utf8_lossy(&status.stdout).contains("median sv_upper 1"));

    let bad = Command::new(exe).args(["--pipeline", "fast"]).output().unwrap();
    assert!(!bad.status.success());
    let bad = Command::new(exe).arg("--model-file").arg(dir.path().join("missing.txt")).output().unwrap();
    assert!(!bad.status.success());
}

proptest! {
    #[test]
    fn cdf_is_monotone(values in prop::collection::vec(0u32..50, 1..100)) {
        let v: Vec<f64> = values.iter().map(|&x| x as f64).collect();
        let rows = emit_cdf(&v).unwrap();
        prop_assert!(rows.windows(2).all(|p| p[0].0 < p[1].0 && p[0].1 < p[1].1));
        prop_assert!(rows.iter().all(|r| r.1 > 0.0 && r.1 <= 1.0));
        prop_assert_eq!(rows.last().unwrap().1, 1.0);
        let count = v.iter().filter(|x| **x <= rows[0].0).count() as f64;
        prop_assert!((rows[0].1 - count / v.len() as f64).abs() < 1e-15);
    }
}
