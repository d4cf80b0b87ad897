use std::collections::BTreeMap;

use serde::Serialize;

use super::config::Format;
use crate::error::{Error, Result};

/// Marker written in place of a bound whose hypotheses fail.
pub const HYPOTHESES_NOT_MET: &str = "hypotheses-not-met";

/// CSV header; JSON-lines rows use the same keys in the same order.
pub const COLUMNS: [&str; 13] = [
    "vertex",
    "t",
    "estimate",
    "exact",
    "bound",
    "ball_size",
    "n_samples",
    "seed",
    "config_hash",
    "ln_estimate",
    "ln_bound",
    "holds",
    "note",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Value(f64),
    NotMet,
    /// No bound applies to this row.
    None,
}

/// One report line. `vertex` is a vertex id, or a statistic name for
/// summary rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub vertex: String,
    pub t: i64,
    pub estimate: f64,
    pub exact: Option<String>,
    pub bound: Bound,
    pub ball_size: Option<usize>,
    pub n_samples: u64,
    pub seed: u64,
    pub ln_estimate: f64,
    pub ln_bound: Option<f64>,
    pub holds: Option<bool>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config_hash: String,
    pub rows: Vec<Row>,
    /// Run facts such as `λ`, goodness predicates and chain diagnostics.
    pub meta: BTreeMap<String, String>,
}

impl ExperimentResult {
    /// Rows whose bound applies and fails.
    pub fn violations(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.holds == Some(false))
    }
}

/// Shortest round-trip decimal; `inf`, `-inf` and `nan` spelled out.
fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Serialize)]
struct JsonRow<'a> {
    vertex: &'a str,
    t: i64,
    estimate: Option<f64>,
    exact: Option<&'a str>,
    bound: serde_json::Value,
    ball_size: Option<usize>,
    n_samples: u64,
    seed: u64,
    config_hash: &'a str,
    ln_estimate: Option<f64>,
    ln_bound: Option<f64>,
    holds: Option<bool>,
    note: &'a str,
}

fn csv_fields(row: &Row, hash: &str) -> [String; 13] {
    let bound = match row.bound {
        Bound::Value(b) => float(b),
        Bound::NotMet => HYPOTHESES_NOT_MET.into(),
        Bound::None => String::new(),
    };
    [
        row.vertex.clone(),
        row.t.to_string(),
        float(row.estimate),
        row.exact.clone().unwrap_or_default(),
        bound,
        row.ball_size.map(|b| b.to_string()).unwrap_or_default(),
        row.n_samples.to_string(),
        row.seed.to_string(),
        hash.to_string(),
        float(row.ln_estimate),
        row.ln_bound.map(float).unwrap_or_default(),
        row.holds.map(|h| h.to_string()).unwrap_or_default(),
        row.note.clone(),
    ]
}

/// Serialises a result; identical results give identical bytes.
pub fn emit_report(result: &ExperimentResult, format: Format) -> Result<String> {
    let hash = result.config_hash.as_str();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::InvalidParameters(e.to_string());
            w.write_record(COLUMNS).map_err(io)?;
            for row in &result.rows {
                w.write_record(csv_fields(row, hash)).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::InvalidParameters(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("utf-8"))
        }
        Format::Jsonl => {
            let mut out = String::new();
            for row in &result.rows {
                let bound = match row.bound {
                    Bound::Value(b) => finite(b).map_or(serde_json::Value::Null, |b| b.into()),
                    Bound::NotMet => HYPOTHESES_NOT_MET.into(),
                    Bound::None => serde_json::Value::Null,
                };
                let j = JsonRow {
                    vertex: &row.vertex,
                    t: row.t,
                    estimate: finite(row.estimate),
                    exact: row.exact.as_deref(),
                    bound,
                    ball_size: row.ball_size,
                    n_samples: row.n_samples,
                    seed: row.seed,
                    config_hash: hash,
                    ln_estimate: finite(row.ln_estimate),
                    ln_bound: row.ln_bound.and_then(finite),
                    holds: row.holds,
                    note: &row.note,
                };
                out.push_str(&serde_json::to_string(&j).expect("serialisable"));
                out.push('\n');
            }
            Ok(out)
        }
    }
}
