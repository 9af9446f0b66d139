use std::io::Write;
use std::path::Path;

use serde_json::json;

use super::{ExperimentConfig, ExperimentSummary, TrialRecord};
use crate::error::Result;

pub const PLOT_HEADER: &str = "sv_upper,num_cuts,cut_induced_vertices,num_branches";

const DETAILS_HEADER: &str = "trial,seed,w,brute_value,map_value,num_branches,bb_lp_calls,\
sv_upper,spurious,ties,estimator_lp_calls,unsnapped,num_cuts,cut_status,cut_value,cut_lp_calls,\
fallback_branches,cut_induced_vertices,lp_vertices,non_half_integral,non_vertex";

/// Plain decimal notation with the shortest digits that round-trip.
pub fn format_decimal(v: f64) -> String {
    format!("{v}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_f(v: Option<f64>) -> String {
    v.map(format_decimal).unwrap_or_default()
}

pub fn write_plot_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut out = std::io::BufWriter::new(out);
    writeln!(out, "{PLOT_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{}",
            opt(r.sv_upper),
            opt(r.num_cuts),
            opt(r.cut_induced_vertices),
            opt(r.num_branches)
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_cdf_csv<W: Write>(rows: &[(f64, f64)], out: W) -> Result<()> {
    let mut out = std::io::BufWriter::new(out);
    writeln!(out, "x,y")?;
    for &(x, y) in rows {
        writeln!(out, "{},{}", format_decimal(x), format_decimal(y))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_details_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut out = std::io::BufWriter::new(out);
    writeln!(out, "{DETAILS_HEADER}")?;
    for r in records {
        let status = r.cut_status.map(|s| {
            match s {
                crate::cuts::CutStatus::Integral => "integral",
                crate::cuts::CutStatus::StalledFractional => "stalled",
                crate::cuts::CutStatus::RoundLimit => "round_limit",
            }
            .to_string()
        });
        let fields = [
            r.trial.to_string(),
            r.seed.to_string(),
            format_decimal(r.w),
            format_decimal(r.brute_value),
            opt_f(r.map_value),
            opt(r.num_branches),
            opt(r.bb_lp_calls),
            opt(r.sv_upper),
            opt(r.spurious),
            opt(r.ties),
            opt(r.estimator_lp_calls),
            opt(r.unsnapped),
            opt(r.num_cuts),
            status.unwrap_or_default(),
            opt_f(r.cut_value),
            opt(r.cut_lp_calls),
            opt(r.fallback_branches),
            opt(r.cut_induced_vertices),
            r.lp_vertices.to_string(),
            r.non_half_integral.to_string(),
            r.non_vertex.to_string(),
        ];
        writeln!(out, "{}", fields.join(","))?;
    }
    out.flush()?;
    Ok(())
}

pub(super) fn write_metadata(path: &Path, config: &ExperimentConfig, summary: &ExperimentSummary) -> Result<()> {
    let batches: Vec<_> = summary
        .batches
        .iter()
        .map(|b| {
            json!({
                "w": b.w,
                "seconds": b.seconds,
                "seeds": b.records.iter().map(|r| r.seed).collect::<Vec<_>>(),
            })
        })
        .collect();
    let meta = json!({
        "crate": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "seed_stream": "seed(w, k) = base ^ splitmix64(bits(w) ^ splitmix64(k)); ChaCha8 draws theta' ~ U(-1, 1) per node, then W' ~ U(-w, w) per edge in lexicographic order",
        "sv_upper": "estimator pattern count including spurious patterns",
        "cut_induced_vertices": "estimator patterns on the final cut-augmented LP that are absent from the estimate on the original local polytope",
        "batches": batches,
        "files": summary.files,
        "seconds": summary.seconds,
    });
    let f = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(f), &meta)?;
    Ok(())
}
