use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bounds::SubspaceBoundSet;
use crate::error::{QuboError, Result};

/// Version line written before the CSV header.
pub const TRACE_CSV_VERSION: &str = "# qubopress-trace v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// The clamped change was zero.
    ZeroChange,
    /// The change neither kept the minimum distance nor landed on a value.
    Inadmissible,
    /// The change would have raised the dynamic range.
    DrIncrease,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub k: usize,
    pub l: usize,
    pub rank: usize,
    pub w_proposed: f64,
    /// `-inf` when lowering the entry is unrestricted; `null` in JSON.
    #[serde(with = "edge::lower")]
    pub y_lo: f64,
    /// `+inf` when raising the entry is unrestricted; `null` in JSON.
    #[serde(with = "edge::upper")]
    pub y_hi: f64,
    pub w_applied: f64,
    pub dr_before: f64,
    pub dr_after: f64,
    pub skipped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<SkipReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<SubspaceBoundSet>,
}

/// JSON has no infinities, so unbounded interval ends travel as `null`.
mod edge {
    use serde::{Deserialize, Deserializer, Serializer};

    fn ser<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub mod lower {
        use super::*;

        pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
            ser(v, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
            Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
        }
    }

    pub mod upper {
        use super::*;

        pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
            ser(v, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
            Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CompressionTrace {
    pub records: Vec<IterationRecord>,
    pub initial_dr: f64,
    pub final_dr: f64,
}

impl CompressionTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn applied(&self) -> usize {
        self.records.iter().filter(|r| !r.skipped).count()
    }

    pub fn skipped(&self) -> usize {
        self.records.iter().filter(|r| r.skipped).count()
    }

    /// One JSON object per iteration.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n").map_err(|e| QuboError::io("<trace>", e))?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{TRACE_CSV_VERSION}").map_err(|e| QuboError::io("<trace>", e))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "iter",
            "k",
            "l",
            "rank",
            "w_proposed",
            "y_lo",
            "y_hi",
            "w_applied",
            "dr_before",
            "dr_after",
            "skipped",
        ])?;
        for r in &self.records {
            w.write_record([
                r.iter.to_string(),
                r.k.to_string(),
                r.l.to_string(),
                r.rank.to_string(),
                r.w_proposed.to_string(),
                r.y_lo.to_string(),
                r.y_hi.to_string(),
                r.w_applied.to_string(),
                r.dr_before.to_string(),
                r.dr_after.to_string(),
                r.skipped.to_string(),
            ])?;
        }
        w.flush().map_err(|e| QuboError::io("<trace>", e))?;
        Ok(())
    }
}
