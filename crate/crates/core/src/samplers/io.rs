use crate::error::{Error, Result};

/// Sample batch file: `# key=value` header lines, then one function per
/// line as space-separated values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SampleBatch {
    pub header: Vec<(String, String)>,
    pub samples: Vec<Vec<i32>>,
}

pub fn format_samples(batch: &SampleBatch) -> String {
    let mut out = String::new();
    for (k, v) in &batch.header {
        out.push_str(&format!("# {k}={v}\n"));
    }
    for s in &batch.samples {
        let line: Vec<String> = s.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_samples(text: &str) -> Result<SampleBatch> {
    let mut batch = SampleBatch::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                batch.header.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<i32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        if let Some(first) = batch.samples.first() {
            if first.len() != row.len() {
                return Err(Error::Parse { line: i + 1, msg: "ragged sample row".into() });
            }
        }
        batch.samples.push(row);
    }
    Ok(batch)
}
