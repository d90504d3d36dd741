use std::io::Write;

use serde::{Deserialize, Serialize};

use super::write_version;
use crate::bounds::BoundMethod;
use crate::compress::{compress, CompressionConfig, HeuristicChoice, Selection};
use crate::enumerate::{brute_force_min, energy_tolerance, DEFAULT_ENUMERATION_LIMIT};
use crate::error::{QuboError, Result};
use crate::generators::{gen_binclustering, gen_subsetsum, gen_uniform, subsetsum_to_qubo};
use crate::metrics::relative_deviation;
use crate::qubo::QuboInstance;
use crate::range::dynamic_range;
use crate::solvers::{ice_perturb, simulated_annealing, AnnealSchedule, SampleSet};

pub const NOISE_CSV_VERSION: &str = "# qubopress-exp-noise v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemFamily {
    SubsetSum,
    BinClustering,
    Uniform,
}

impl std::str::FromStr for ProblemFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "subsetsum" | "subset_sum" => Ok(Self::SubsetSum),
            "binclust" | "binclustering" | "bin_clustering" => Ok(Self::BinClustering),
            "uniform" => Ok(Self::Uniform),
            _ => Err(format!("unknown problem family {s:?}, expected subsetsum, binclust or uniform")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseConfig {
    pub family: ProblemFamily,
    /// Ignored for binary clustering, which always has 19 variables.
    pub n: usize,
    pub iterations: usize,
    pub heuristic: HeuristicChoice,
    pub selection: Selection,
    pub bound_method: BoundMethod,
    pub sigma: f64,
    pub reads: usize,
    pub sweeps: usize,
    /// Seeds the instance and the compression.
    pub seed: u64,
    /// Seeds the control errors and the annealer.
    pub noise_seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            family: ProblemFamily::SubsetSum,
            n: 14,
            iterations: 150,
            heuristic: HeuristicChoice::G0,
            selection: Selection::GreedyImpact,
            bound_method: BoundMethod::HeuristicRoofDual,
            sigma: 0.02,
            reads: 500,
            sweeps: AnnealSchedule::DEFAULT_SWEEPS,
            seed: 0,
            noise_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseReport {
    pub config: NoiseConfig,
    /// Global minimum of the original instance.
    pub v_star: f64,
    pub initial_dr: f64,
    pub compressed_dr: f64,
    /// Relative deviations from `v_star`, ascending, measured under the
    /// original instance.
    pub original: Vec<f64>,
    pub compressed: Vec<f64>,
    pub original_hits: usize,
    pub compressed_hits: usize,
}

impl NoiseReport {
    /// Minimum-energy samples of the compressed instance per minimum-energy
    /// sample of the original; infinite when the original never hit.
    pub fn prevalence_ratio(&self) -> f64 {
        self.compressed_hits as f64 / self.original_hits as f64
    }

    /// `2 * reads` rows: every sorted deviation of both instances.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write_version(&mut out, NOISE_CSV_VERSION)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["instance", "rank", "relative_deviation"])?;
        for (name, devs) in [("original", &self.original), ("compressed", &self.compressed)] {
            for (rank, d) in devs.iter().enumerate() {
                w.write_record([name.to_string(), rank.to_string(), d.to_string()])?;
            }
        }
        w.flush().map_err(super::io_err)?;
        Ok(())
    }
}

fn instance(cfg: &NoiseConfig) -> Result<QuboInstance> {
    match cfg.family {
        ProblemFamily::SubsetSum => subsetsum_to_qubo(&gen_subsetsum(cfg.n, cfg.seed)?),
        ProblemFamily::BinClustering => Ok(gen_binclustering(cfg.seed)?.1),
        ProblemFamily::Uniform => gen_uniform(cfg.n, cfg.seed),
    }
}

fn sample_noisy(q: &QuboInstance, cfg: &NoiseConfig, noise_seed: u64) -> Result<SampleSet> {
    let noisy = ice_perturb(q, cfg.sigma, noise_seed)?;
    let schedule = AnnealSchedule::for_instance(&noisy, cfg.sweeps, cfg.reads);
    simulated_annealing(&noisy, &schedule, noise_seed.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Generates an instance, compresses it, and samples both versions with
/// simulated annealing under Gaussian control errors. Samples are scored
/// against the original instance's global minimum.
pub fn run_noise_experiment(cfg: &NoiseConfig) -> Result<NoiseReport> {
    if !(cfg.sigma >= 0.0 && cfg.sigma.is_finite()) {
        return Err(QuboError::InvalidArgument("sigma must be a nonnegative number".into()));
    }
    let q = instance(cfg)?;
    let v_star = brute_force_min(&q, DEFAULT_ENUMERATION_LIMIT)?;
    if v_star == 0.0 {
        return Err(QuboError::ZeroReference);
    }
    let ccfg = CompressionConfig {
        heuristic: cfg.heuristic,
        selection: cfg.selection,
        max_iterations: cfg.iterations,
        bound_method: cfg.bound_method,
        rng_seed: cfg.seed,
        record_bounds: false,
        ..CompressionConfig::default()
    };
    let (qc, _) = compress(&q, &ccfg)?;
    let tol = energy_tolerance(&q);
    let score = |set: SampleSet| -> Result<(Vec<f64>, usize)> {
        let set = set.reevaluate(&q)?;
        let hits = set.count_at_most(v_star, tol);
        let devs = set
            .samples
            .iter()
            .map(|s| if s.energy <= v_star + tol { Ok(0.0) } else { relative_deviation(s.energy, v_star) })
            .collect::<Result<_>>()?;
        Ok((devs, hits))
    };
    let (original, original_hits) = score(sample_noisy(&q, cfg, cfg.noise_seed)?)?;
    let (compressed, compressed_hits) = score(sample_noisy(&qc, cfg, cfg.noise_seed)?)?;
    Ok(NoiseReport {
        config: cfg.clone(),
        v_star,
        initial_dr: dynamic_range(&q),
        compressed_dr: dynamic_range(&qc),
        original,
        compressed,
        original_hits,
        compressed_hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(sigma: f64) -> NoiseConfig {
        NoiseConfig {
            n: 8,
            iterations: 40,
            bound_method: BoundMethod::Exhaustive,
            sigma,
            reads: 60,
            sweeps: 200,
            seed: 2,
            noise_seed: 4,
            ..NoiseConfig::default()
        }
    }

    #[test]
    fn noiseless_sampling_reaches_the_optimum() {
        let rep = run_noise_experiment(&small(0.0)).unwrap();
        assert!(rep.original_hits > 0 && rep.compressed_hits > 0);
        assert!(rep.compressed_dr <= rep.initial_dr);
        assert_eq!(rep.original[0], 0.0);
        assert!(rep.original.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn csv_has_two_rows_per_read() {
        let rep = run_noise_experiment(&small(0.05)).unwrap();
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2 + 2 * 60);
        assert_eq!(rep, run_noise_experiment(&small(0.05)).unwrap());
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("binclust".parse::<ProblemFamily>().unwrap(), ProblemFamily::BinClustering);
        assert!("knapsack".parse::<ProblemFamily>().is_err());
    }
}
