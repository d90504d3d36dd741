//! Reading and writing instances in the plain-text and JSON formats.
//!
//! Text format:
//!
//! ```text
//! # comment
//! 3
//! 0 0 -1
//! 0 1 0.4
//! ```
//!
//! The first data line is `n`; every following line is `i j v` with 0-based
//! indices and `i <= j`. Omitted entries are zero.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{QuboError, Result};
use crate::qubo::QuboInstance;

/// Wire shape of the JSON format: `{"n": 3, "entries": [[0, 0, -1.0], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuboJson {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl TryFrom<QuboJson> for QuboInstance {
    type Error = QuboError;

    fn try_from(j: QuboJson) -> Result<Self> {
        let mut seen = HashSet::new();
        for &(i, k, _) in &j.entries {
            if !seen.insert((i, k)) {
                return Err(QuboError::InvalidArgument(format!("duplicate entry ({i}, {k})")));
            }
        }
        QuboInstance::from_entries(j.n, j.entries)
    }
}

impl From<QuboInstance> for QuboJson {
    fn from(q: QuboInstance) -> Self {
        QuboJson { n: q.n(), entries: nonzero_entries(&q) }
    }
}

fn nonzero_entries(q: &QuboInstance) -> Vec<(usize, usize, f64)> {
    q.upper_entries().filter(|&(_, _, v)| v != 0.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    /// `.json` files are JSON, everything else is text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Text,
        }
    }
}

pub fn parse_text(src: &str) -> Result<QuboInstance> {
    let mut q: Option<QuboInstance> = None;
    let mut seen = HashSet::new();
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| QuboError::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match q.as_mut() {
            None => {
                if fields.len() != 1 {
                    return Err(err(format!("expected the dimension n, found {line:?}")));
                }
                let n: usize = fields[0].parse().map_err(|_| err(format!("invalid dimension {:?}", fields[0])))?;
                q = Some(QuboInstance::zeros(n).map_err(|e| err(e.to_string()))?);
            }
            Some(q) => {
                if fields.len() != 3 {
                    return Err(err(format!("expected `i j v`, found {line:?}")));
                }
                let i: usize = fields[0].parse().map_err(|_| err(format!("invalid index {:?}", fields[0])))?;
                let j: usize = fields[1].parse().map_err(|_| err(format!("invalid index {:?}", fields[1])))?;
                let v: f64 = fields[2].parse().map_err(|_| err(format!("invalid value {:?}", fields[2])))?;
                if !seen.insert((i, j)) {
                    return Err(err(format!("duplicate entry ({i}, {j})")));
                }
                q.set(i, j, v).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    q.ok_or(QuboError::Parse { line: src.lines().count().max(1), message: "missing dimension line".into() })
}

/// Text serialization; nonzero entries only, sorted by `(i, j)`. `f64`
/// `Display` is the shortest string that round-trips.
pub fn to_text(q: &QuboInstance) -> String {
    let mut out = String::new();
    writeln!(out, "{}", q.n()).unwrap();
    for (i, j, v) in nonzero_entries(q) {
        writeln!(out, "{i} {j} {v}").unwrap();
    }
    out
}

pub fn parse_json(src: &str) -> Result<QuboInstance> {
    Ok(serde_json::from_str(src)?)
}

pub fn to_json(q: &QuboInstance) -> String {
    serde_json::to_string(q).expect("instances always serialize")
}

pub fn read_qubo(path: impl AsRef<Path>) -> Result<QuboInstance> {
    let path = path.as_ref();
    let src = fs::read_to_string(path).map_err(|e| QuboError::io(path, e))?;
    match Format::from_path(path) {
        Format::Json => parse_json(&src),
        Format::Text => parse_text(&src),
    }
}

pub fn write_qubo(q: &QuboInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let body = match Format::from_path(path) {
        Format::Json => to_json(q),
        Format::Text => to_text(q),
    };
    fs::write(path, body).map_err(|e| QuboError::io(path, e))
}
