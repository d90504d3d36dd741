//! Batch pipelines behind `qubopress exp`.
//!
//! Every pipeline derives per-instance seeds as `seed + index`, so results do
//! not depend on the number of worker threads.

mod compress;
mod noise;
mod rounding;

pub use compress::{run_compress_experiment, CompressExperiment, CompressExperimentConfig, CompressRun, RunMetrics};
pub use noise::{run_noise_experiment, NoiseConfig, NoiseReport, ProblemFamily};
pub use rounding::{quantize_bits, run_rounding_experiment, RoundingConfig, RoundingReport, RoundingRow};

use crate::error::{QuboError, Result};

/// Sample mean and the half-width of its normal 95% confidence interval.
/// A single observation has a zero-width interval.
pub fn mean_ci95(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, 1.96 * (var / m).sqrt())
}

fn io_err(e: std::io::Error) -> QuboError {
    QuboError::io("<output>", e)
}

fn write_version<W: std::io::Write>(out: &mut W, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(io_err)
}
