//! Dynamic range statistics and the rank ordering of matrix entries.

use serde::{Deserialize, Serialize};

use crate::qubo::QuboInstance;

/// Relative tolerance used to merge nearly equal coefficient values.
pub const DEFAULT_MERGE_TOLERANCE: f64 = 1e-9;
const ABSOLUTE_MERGE_FLOOR: f64 = 1e-12;

/// `true` if `a` and `b` are the same value up to the merge tolerance.
pub fn values_equal(a: f64, b: f64, rel_tol: f64) -> bool {
    (a - b).abs() <= (rel_tol * a.abs().max(b.abs())).max(ABSOLUTE_MERGE_FLOOR)
}

/// Sorted distinct values, merging runs of values that are equal within `rel_tol`.
pub fn distinct_values(values: &[f64], rel_tol: f64) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(sorted.len());
    for v in sorted {
        match out.last() {
            Some(&last) if values_equal(last, v, rel_tol) => {}
            _ => out.push(v),
        }
    }
    out
}

/// Pairwise-difference statistics over the distinct coefficient values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffStats {
    pub distinct_values: Vec<f64>,
    pub min_diff: f64,
    pub max_diff: f64,
    pub dr_bits: f64,
    pub degenerate: bool,
}

impl DiffStats {
    pub fn from_values(values: &[f64], rel_tol: f64) -> Self {
        let distinct = distinct_values(values, rel_tol);
        if distinct.len() < 2 {
            return Self { distinct_values: distinct, min_diff: 0.0, max_diff: 0.0, dr_bits: 0.0, degenerate: true };
        }
        let min_diff = distinct.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let max_diff = distinct[distinct.len() - 1] - distinct[0];
        Self { dr_bits: (max_diff / min_diff).log2(), distinct_values: distinct, min_diff, max_diff, degenerate: false }
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct_values.len()
    }
}

/// Statistics over all `n * n` entries (the structural zeros included).
pub fn diff_stats(q: &QuboInstance) -> DiffStats {
    DiffStats::from_values(q.values(), DEFAULT_MERGE_TOLERANCE)
}

pub fn dynamic_range(q: &QuboInstance) -> f64 {
    diff_stats(q).dr_bits
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub value: f64,
    pub i: usize,
    pub j: usize,
}

impl RankedEntry {
    pub fn is_modifiable(&self) -> bool {
        self.i <= self.j
    }
}

/// All `n * n` positions sorted by value, ties broken by `(i, j)`.
/// Ranks are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryOrdering {
    n: usize,
    entries: Vec<RankedEntry>,
    rank_of: Vec<usize>,
}

impl EntryOrdering {
    pub fn new(q: &QuboInstance) -> Self {
        let n = q.n();
        let mut entries: Vec<RankedEntry> =
            (0..n * n).map(|idx| RankedEntry { value: q.values()[idx], i: idx / n, j: idx % n }).collect();
        entries.sort_by(|a, b| a.value.total_cmp(&b.value).then((a.i, a.j).cmp(&(b.i, b.j))));
        let mut rank_of = vec![0; n * n];
        for (r, e) in entries.iter().enumerate() {
            rank_of[e.i * n + e.j] = r;
        }
        Self { n, entries, rank_of }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[RankedEntry] {
        &self.entries
    }

    pub fn value(&self, rank: usize) -> f64 {
        self.entries[rank].value
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.value)
    }

    pub fn rank_of(&self, i: usize, j: usize) -> usize {
        self.rank_of[i * self.n + j]
    }

    /// Position indices `i * n + j` in rank order.
    pub fn positions(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.i * self.n + e.j).collect()
    }

    /// Distinct-value statistics of all entries except the one at `rank`.
    pub fn stats_without(&self, rank: usize, rel_tol: f64) -> DiffStats {
        let rest: Vec<f64> =
            self.entries.iter().enumerate().filter(|&(r, _)| r != rank).map(|(_, e)| e.value).collect();
        DiffStats::from_values(&rest, rel_tol)
    }
}

pub fn entry_ordering(q: &QuboInstance) -> EntryOrdering {
    EntryOrdering::new(q)
}
