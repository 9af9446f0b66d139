//! Synthetic experiment driver.
//!
//! For every edge strength `w` and trial `k` a random complete-graph model is
//! drawn, the selected pipelines are run, every optimal value is checked
//! against exhaustive search, and the results are written as CSV:
//!
//! * `complete_n=<n>_w=<w>.csv`: `sv_upper,num_cuts,cut_induced_vertices,num_branches`
//! * `cdf_complete_n=<n>_w=<w>.csv`: `x,y`, the sample CDF of `sv_upper`
//! * `details_complete_n=<n>_w=<w>.csv`: every recorded field
//! * `metadata.json`: configuration, seeds and timing

mod output;
pub mod stats;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use output::{format_decimal, write_cdf_csv, write_details_csv, write_plot_csv, PLOT_HEADER};
pub use stats::{emit_cdf, mean, median, spearman};

use crate::branch::{solve_map_observed, solve_map_on, BranchNode, SearchObserver};
use crate::cuts::{count_cut_induced_against, cutting_plane_solve, CutStatus, DEFAULT_MAX_ROUNDS};
use crate::error::{Error, Result};
use crate::estimator::estimate_svc;
use crate::model::{instance_seed, random_agreement, read_agreement, write_agreement, AgreementModel, PairwiseModel};
use crate::vertex::{is_vertex, HalfIntegralPoint, SNAP_TOL};

/// Optimal values from different pipelines must agree to this.
pub const VALUE_TOL: f64 = 1e-9;

pub const DEFAULT_WS: [f64; 4] = [0.1, 0.2, 0.3, 2.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Bb,
    Cuts,
    Svf,
    All,
}

impl Pipeline {
    fn bb(self) -> bool {
        matches!(self, Pipeline::Bb | Pipeline::All)
    }

    fn cuts(self) -> bool {
        matches!(self, Pipeline::Cuts | Pipeline::All)
    }

    fn svf(self) -> bool {
        matches!(self, Pipeline::Svf | Pipeline::All)
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bb" => Ok(Pipeline::Bb),
            "cuts" => Ok(Pipeline::Cuts),
            "svf" => Ok(Pipeline::Svf),
            "all" => Ok(Pipeline::All),
            _ => Err(Error::InvalidInput(format!("unknown pipeline `{s}`, expected bb, cuts, svf or all"))),
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Bb => "bb",
            Pipeline::Cuts => "cuts",
            Pipeline::Svf => "svf",
            Pipeline::All => "all",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub ws: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub pipeline: Pipeline,
    /// Run once on this stored model instead of random draws.
    pub model_file: Option<PathBuf>,
    pub max_rounds: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 12,
            ws: DEFAULT_WS.to_vec(),
            trials: 100,
            seed: 0,
            out_dir: PathBuf::from("results"),
            pipeline: Pipeline::All,
            model_file: None,
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }
}

/// Everything measured on one instance. Fields of pipelines that did not
/// run are `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub w: f64,
    pub trial: usize,
    pub seed: u64,
    pub brute_value: f64,

    pub map_value: Option<f64>,
    pub num_branches: Option<usize>,
    pub bb_lp_calls: Option<usize>,

    pub sv_upper: Option<usize>,
    pub spurious: Option<usize>,
    pub ties: Option<usize>,
    pub estimator_lp_calls: Option<usize>,
    pub unsnapped: Option<usize>,

    pub num_cuts: Option<usize>,
    pub cut_status: Option<CutStatus>,
    pub cut_value: Option<f64>,
    /// Cutting-plane solves plus any branch-and-bound fallback.
    pub cut_lp_calls: Option<usize>,
    pub fallback_branches: Option<usize>,
    pub cut_induced_vertices: Option<usize>,

    /// Local-polytope LP optima inspected (branch-and-bound nodes and the
    /// cutting-plane root).
    pub lp_vertices: usize,
    /// Of those, how many failed to snap to `{0, ½, 1}`.
    pub non_half_integral: usize,
    /// Of the snapped ones, how many are not vertices of the local polytope.
    pub non_vertex: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatchResult {
    pub w: f64,
    pub records: Vec<TrialRecord>,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub batches: Vec<BatchResult>,
    pub files: Vec<PathBuf>,
    pub seconds: f64,
}

/// Checks every local-polytope optimum the search visits.
struct VertexAudit<'a> {
    model: &'a PairwiseModel,
    seen: usize,
    non_half_integral: usize,
    non_vertex: usize,
}

impl<'a> VertexAudit<'a> {
    fn new(model: &'a PairwiseModel) -> Self {
        VertexAudit {
            model,
            seen: 0,
            non_half_integral: 0,
            non_vertex: 0,
        }
    }

    fn check(&mut self, point: &[f64]) {
        self.seen += 1;
        match HalfIntegralPoint::snap(point, SNAP_TOL) {
            None => self.non_half_integral += 1,
            Some(q) => {
                if !is_vertex(&q, self.model).unwrap_or(false) {
                    self.non_vertex += 1;
                }
            }
        }
    }
}

impl SearchObserver for VertexAudit<'_> {
    fn on_solved(&mut self, node: &BranchNode) {
        self.check(&node.point);
    }
}

fn w_label(w: f64) -> String {
    format!("{w:?}")
}

/// Base name `complete_n=<n>_w=<w>` of a batch's files.
pub fn batch_stem(n: usize, w: f64) -> String {
    format!("complete_n={n}_w={}", w_label(w))
}

/// Runs one instance through the configured pipelines.
pub fn run_trial(
    agreement: &AgreementModel,
    w: f64,
    trial: usize,
    seed: u64,
    pipeline: Pipeline,
    max_rounds: usize,
) -> Result<TrialRecord> {
    let model = agreement.to_pairwise()?;
    let (_, brute_value) = model.brute_force_map()?;
    let mut rec = TrialRecord {
        w,
        trial,
        seed,
        brute_value,
        ..TrialRecord::default()
    };
    let mut audit = VertexAudit::new(&model);
    let mut values: Vec<(&str, f64)> = Vec::new();

    if pipeline.bb() {
        let sol = solve_map_observed(&model, &model.local_lp(), &mut audit)?;
        rec.map_value = Some(sol.value);
        rec.num_branches = Some(sol.stats.branches);
        rec.bb_lp_calls = Some(sol.stats.lp_calls);
        values.push(("branch-and-bound", sol.value));
    }
    let report = if pipeline.svf() {
        let r = estimate_svc(&model)?;
        rec.sv_upper = Some(r.count);
        rec.spurious = Some(r.spurious);
        rec.ties = Some(r.ties);
        rec.estimator_lp_calls = Some(r.stats.lp_calls);
        rec.unsnapped = Some(r.unsnapped);
        values.push(("estimator", r.best_integral_value));
        Some(r)
    } else {
        None
    };
    if pipeline.cuts() {
        if !pipeline.bb() {
            let root = crate::lp::solve(&model.local_lp())?;
            if let Some(p) = root.point() {
                audit.check(p);
            }
        }
        let out = cutting_plane_solve(&model, max_rounds)?;
        rec.num_cuts = Some(out.num_cuts());
        rec.cut_status = Some(out.status);
        let mut calls = out.lp_calls;
        let value = if out.status == CutStatus::Integral {
            rec.fallback_branches = Some(0);
            out.value
        } else {
            let sol = solve_map_on(&model, &out.lp)?;
            calls += sol.stats.lp_calls;
            rec.fallback_branches = Some(sol.stats.branches);
            sol.value
        };
        rec.cut_value = Some(value);
        rec.cut_lp_calls = Some(calls);
        values.push(("cutting planes", value));
        if let Some(r) = &report {
            rec.cut_induced_vertices = Some(count_cut_induced_against(&model, &out.cuts, r)?);
        }
    }
    rec.lp_vertices = audit.seen;
    rec.non_half_integral = audit.non_half_integral;
    rec.non_vertex = audit.non_vertex;

    for (name, v) in values {
        if (v - brute_value).abs() > VALUE_TOL {
            return Err(Error::OracleMismatch {
                msg: format!("{name} value {v} differs from exhaustive optimum {brute_value} (w = {w}, trial {trial})"),
                path: PathBuf::new(),
            });
        }
    }
    Ok(rec)
}

fn save_offending(out_dir: &Path, agreement: &AgreementModel, err: Error, w: f64, trial: usize) -> Error {
    let Error::OracleMismatch { msg, .. } = err else {
        return err;
    };
    let path = out_dir.join(format!("mismatch_w={}_trial={trial}.txt", w_label(w)));
    let saved = std::fs::File::create(&path)
        .map_err(Error::from)
        .and_then(|f| write_agreement(agreement, std::io::BufWriter::new(f)));
    match saved {
        Ok(()) => Error::OracleMismatch { msg, path },
        Err(e) => e,
    }
}

/// Runs the configured sweep and writes its files under `out_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    validate(config)?;
    std::fs::create_dir_all(&config.out_dir)?;
    let started = Instant::now();
    let mut batches = Vec::new();
    let mut files = Vec::new();

    if let Some(path) = &config.model_file {
        let agreement = read_agreement(path)?;
        let t = Instant::now();
        let rec = run_trial(&agreement, 0.0, 0, 0, config.pipeline, config.max_rounds)
            .map_err(|e| save_offending(&config.out_dir, &agreement, e, 0.0, 0))?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "model".into());
        let records = vec![rec];
        files.extend(write_batch(&config.out_dir, &format!("file_n={}_{stem}", agreement.num_nodes()), &records)?);
        batches.push(BatchResult {
            w: 0.0,
            records,
            seconds: t.elapsed().as_secs_f64(),
        });
    } else {
        for &w in &config.ws {
            let t = Instant::now();
            let mut records = (0..config.trials)
                .into_par_iter()
                .map(|k| {
                    let seed = instance_seed(config.seed, w, k as u64);
                    let agreement = random_agreement(config.n, w, seed);
                    run_trial(&agreement, w, k, seed, config.pipeline, config.max_rounds)
                        .map_err(|e| save_offending(&config.out_dir, &agreement, e, w, k))
                })
                .collect::<Result<Vec<_>>>()?;
            records.sort_by_key(|r| r.trial);
            files.extend(write_batch(&config.out_dir, &batch_stem(config.n, w), &records)?);
            batches.push(BatchResult {
                w,
                records,
                seconds: t.elapsed().as_secs_f64(),
            });
        }
    }
    let summary = ExperimentSummary {
        batches,
        files,
        seconds: started.elapsed().as_secs_f64(),
    };
    let meta_path = config.out_dir.join("metadata.json");
    output::write_metadata(&meta_path, config, &summary)?;
    let mut summary = summary;
    summary.files.push(meta_path);
    Ok(summary)
}

fn validate(config: &ExperimentConfig) -> Result<()> {
    if config.max_rounds == 0 {
        return Err(Error::InvalidInput("max_rounds must be at least 1".into()));
    }
    if config.model_file.is_some() {
        return Ok(());
    }
    if config.n == 0 || config.trials == 0 || config.ws.is_empty() {
        return Err(Error::InvalidInput("need n >= 1, trials >= 1 and at least one w".into()));
    }
    if let Some(w) = config.ws.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidInput(format!("edge strength {w} must be finite and nonnegative")));
    }
    Ok(())
}

fn write_batch(dir: &Path, stem: &str, records: &[TrialRecord]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let plot = dir.join(format!("{stem}.csv"));
    write_plot_csv(records, std::fs::File::create(&plot)?)?;
    files.push(plot);
    let sv: Vec<f64> = records.iter().filter_map(|r| r.sv_upper.map(|v| v as f64)).collect();
    if sv.len() == records.len() {
        let cdf = dir.join(format!("cdf_{stem}.csv"));
        write_cdf_csv(&emit_cdf(&sv)?, std::fs::File::create(&cdf)?)?;
        files.push(cdf);
    }
    let details = dir.join(format!("details_{stem}.csv"));
    write_details_csv(records, std::fs::File::create(&details)?)?;
    files.push(details);
    Ok(files)
}
