//! Dynamic-range compression for QUBO instances.
//!
//! The crate changes coefficients of an upper-triangular QUBO matrix one at a
//! time so that the ratio between the largest and smallest coefficient
//! differences shrinks, while certified bounds on subspace minima guarantee
//! that at least one global optimum survives every change.
//!
//! Module overview:
//!
//! - [`qubo`], [`range`], [`enumerate`]: instances, dynamic range statistics,
//!   exhaustive solving, spectral gap and optimum inclusion.
//! - [`bounds`]: subspace bounds, the preservation interval and variable fixing.
//! - [`compress`]: the compression loop and its heuristics.
//! - [`generators`], [`solvers`], [`metrics`]: instance families, heuristic
//!   solvers with a noise model, and evaluation metrics.
//! - [`experiments`]: the batch pipelines behind the `qubopress exp` commands.

pub mod bounds;
pub mod compress;
pub mod enumerate;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod io;
pub mod metrics;
pub mod qubo;
pub mod range;
pub mod solvers;

pub use bounds::{Assignment, BoundMethod, PinnedPair, PreservationInterval, SubspaceBoundSet};
pub use compress::{compress, CompressionConfig, CompressionTrace, HeuristicChoice, Selection};
pub use enumerate::{brute_force_minima, optimum_included, spectral_gap, SolveResult, SpectralGapResult};
pub use error::{QuboError, Result};
pub use qubo::QuboInstance;
pub use range::{diff_stats, entry_ordering, DiffStats, EntryOrdering};

#[cfg(test)]
pub(crate) mod test_support {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::qubo::QuboInstance;

    /// The three-variable instance used throughout the worked examples.
    pub fn example_two() -> QuboInstance {
        QuboInstance::from_dense(&[[-1.0, 0.4, 1.0], [0.0, 0.4, -0.8], [0.0, 0.0, -1.5]]).unwrap()
    }

    /// A high-range two-variable instance and a compressed equivalent.
    pub fn example_one() -> (QuboInstance, QuboInstance) {
        (
            QuboInstance::from_dense(&[[-1.0, 14380.0], [0.0, -2.0]]).unwrap(),
            QuboInstance::from_dense(&[[-1.0, 3.0], [0.0, -2.0]]).unwrap(),
        )
    }

    /// Upper-triangle entries uniform on `[-0.5, 0.5]`.
    pub fn random_qubo(n: usize, seed: u64) -> QuboInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut q = QuboInstance::zeros(n).unwrap();
        for i in 0..n {
            for j in i..n {
                q.set(i, j, rng.random_range(-0.5..=0.5)).unwrap();
            }
        }
        q
    }

    /// Small-integer entries, which produce many energy ties.
    pub fn random_int_qubo(n: usize, seed: u64, span: i32) -> QuboInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1a7);
        let mut q = QuboInstance::zeros(n).unwrap();
        for i in 0..n {
            for j in i..n {
                q.set(i, j, rng.random_range(-span..=span) as f64).unwrap();
            }
        }
        q
    }
}
