//! Choosing the next entry to modify.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::PinnedPair;
use crate::qubo::QuboInstance;
use crate::range::{values_equal, DiffStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Uniform over upper-triangle positions.
    Random,
    /// Row-major cycle over upper-triangle positions.
    Sequential,
    /// Among the positions that determine the dynamic range, the one whose
    /// change reduces it most; ties broken at random.
    GreedyImpact,
}

impl std::str::FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "random" => Ok(Self::Random),
            "sequential" => Ok(Self::Sequential),
            "greedy_impact" | "greedy" => Ok(Self::GreedyImpact),
            _ => Err(format!("unknown selection {s:?}, expected random, sequential or greedy-impact")),
        }
    }
}

impl std::fmt::Display for Selection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Random => "random",
            Self::Sequential => "sequential",
            Self::GreedyImpact => "greedy-impact",
        })
    }
}

/// Random state and cycle position carried across iterations.
#[derive(Debug, Clone)]
pub struct SelectionState {
    pub(crate) rng: ChaCha8Rng,
    cursor: usize,
}

impl SelectionState {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), cursor: 0 }
    }

    pub(crate) fn random(&mut self, n: usize) -> PinnedPair {
        upper_position(n, self.rng.random_range(0..n * (n + 1) / 2))
    }

    pub(crate) fn sequential(&mut self, n: usize) -> PinnedPair {
        let p = upper_position(n, self.cursor % (n * (n + 1) / 2));
        self.cursor += 1;
        p
    }
}

/// The `idx`-th upper-triangle position in row-major order.
pub(crate) fn upper_position(n: usize, mut idx: usize) -> PinnedPair {
    for k in 0..n {
        let row = n - k;
        if idx < row {
            return PinnedPair { k, l: k + idx };
        }
        idx -= row;
    }
    panic!("upper-triangle index out of range");
}

/// Upper-triangle positions whose value is an endpoint of a minimum-distance
/// pair or equals the smallest or largest value.
pub fn active_positions(q: &QuboInstance, stats: &DiffStats, rel_tol: f64) -> Vec<PinnedPair> {
    let d = &stats.distinct_values;
    let mut active = vec![d[0], d[d.len() - 1]];
    for w in d.windows(2) {
        if values_equal(w[1] - w[0], stats.min_diff, 1e-9) {
            active.extend([w[0], w[1]]);
        }
    }
    let found: Vec<PinnedPair> = q
        .upper_entries()
        .filter(|&(_, _, v)| active.iter().any(|&a| values_equal(a, v, rel_tol)))
        .map(|(k, l, _)| PinnedPair { k, l })
        .collect();
    if found.is_empty() {
        q.upper_entries().map(|(k, l, _)| PinnedPair { k, l }).collect()
    } else {
        found
    }
}
