//! Plain-text model files.
//!
//! ```text
//! # optional comments
//! n m
//! i theta_i        (n lines)
//! i j w_ij         (m lines)
//! ```
//!
//! Weights are in the agreement parameterization. Node indices are
//! zero-based. Everything after `#` on a line is ignored.

use std::io::Write;
use std::path::Path;

use super::AgreementModel;
use crate::error::{Error, Result};

pub fn write_agreement<W: Write>(model: &AgreementModel, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", model.theta.len(), model.edges.len())?;
    for (i, t) in model.theta.iter().enumerate() {
        writeln!(out, "{i} {t:?}")?;
    }
    for (i, j, w) in &model.edges {
        writeln!(out, "{i} {j} {w:?}")?;
    }
    Ok(())
}

pub fn read_agreement(path: impl AsRef<Path>) -> Result<AgreementModel> {
    parse_agreement(&std::fs::read_to_string(path)?)
}

pub fn parse_agreement(text: &str) -> Result<AgreementModel> {
    let mut lines = text.lines().enumerate().filter_map(|(k, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then(|| (k + 1, body.split_whitespace().collect::<Vec<_>>()))
    });
    let err = |line: usize, msg: String| Error::Parse { line, msg };

    let (line, header) = lines.next().ok_or_else(|| err(0, "missing header".into()))?;
    let [n, m] = header[..] else {
        return Err(err(line, "header must be `n m`".into()));
    };
    let n: usize = n.parse().map_err(|e| err(line, format!("node count: {e}")))?;
    let m: usize = m.parse().map_err(|e| err(line, format!("edge count: {e}")))?;

    let mut theta = vec![None; n];
    for _ in 0..n {
        let (line, f) = lines.next().ok_or_else(|| err(0, "too few node lines".into()))?;
        let [i, t] = f[..] else {
            return Err(err(line, "node line must be `i theta`".into()));
        };
        let i: usize = i.parse().map_err(|e| err(line, format!("node index: {e}")))?;
        let t: f64 = t.parse().map_err(|e| err(line, format!("node weight: {e}")))?;
        match theta.get_mut(i) {
            Some(slot @ None) => *slot = Some(t),
            Some(Some(_)) => return Err(err(line, format!("node {i} listed twice"))),
            None => return Err(err(line, format!("node {i} out of range"))),
        }
    }
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, f) = lines.next().ok_or_else(|| err(0, "too few edge lines".into()))?;
        let [i, j, w] = f[..] else {
            return Err(err(line, "edge line must be `i j w`".into()));
        };
        let i: usize = i.parse().map_err(|e| err(line, format!("edge endpoint: {e}")))?;
        let j: usize = j.parse().map_err(|e| err(line, format!("edge endpoint: {e}")))?;
        let w: f64 = w.parse().map_err(|e| err(line, format!("edge weight: {e}")))?;
        edges.push((i, j, w));
    }
    if let Some((line, _)) = lines.next() {
        return Err(err(line, "trailing content".into()));
    }
    let theta = theta.into_iter().map(|t| t.expect("all nodes assigned")).collect();
    AgreementModel::new(theta, edges)
}
