use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mean_ci95, write_version};
use crate::bounds::BoundMethod;
use crate::compress::{compress_observed, CompressionConfig, HeuristicChoice, Selection};
use crate::error::{QuboError, Result};
use crate::generators::gen_uniform;
use crate::metrics::{
    dr_ratio, induced_ranking, kendall_tau, unique_weight_ratio, weight_ordering_distance, MAX_RANKING_N,
};

pub const COMPRESS_CSV_VERSION: &str = "# qubopress-exp-compress v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompressExperimentConfig {
    pub ns: Vec<usize>,
    pub instances: usize,
    pub iterations: usize,
    pub heuristics: Vec<HeuristicChoice>,
    pub selections: Vec<Selection>,
    pub bound_method: BoundMethod,
    pub seed: u64,
}

impl Default for CompressExperimentConfig {
    fn default() -> Self {
        Self {
            ns: vec![8],
            instances: 20,
            iterations: 100,
            heuristics: vec![HeuristicChoice::G, HeuristicChoice::G0, HeuristicChoice::M],
            selections: vec![Selection::Random],
            bound_method: BoundMethod::Auto,
            seed: 0,
        }
    }
}

/// Metrics after each iteration; index 0 is the untouched instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub dr_ratio: Vec<f64>,
    pub kendall: Vec<f64>,
    pub weight_ordering: Vec<f64>,
    pub unique_ratio: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressRun {
    pub n: usize,
    pub heuristic: HeuristicChoice,
    pub selection: Selection,
    pub instance: usize,
    pub metrics: RunMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressExperiment {
    pub config: CompressExperimentConfig,
    pub runs: Vec<CompressRun>,
}

#[derive(Serialize)]
struct SummaryRow {
    n: usize,
    heuristic: String,
    selection: String,
    iter: usize,
    runs: usize,
    dr_ratio_mean: f64,
    dr_ratio_ci95: f64,
    kendall_mean: f64,
    kendall_ci95: f64,
    weight_ordering_mean: f64,
    weight_ordering_ci95: f64,
    unique_ratio_mean: f64,
    unique_ratio_ci95: f64,
}

impl CompressExperiment {
    /// One row per configuration and iteration with means and 95% intervals
    /// across instances.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write_version(&mut out, COMPRESS_CSV_VERSION)?;
        let mut w = csv::Writer::from_writer(out);
        let mut i = 0;
        while i < self.runs.len() {
            let head = &self.runs[i];
            let group: Vec<&CompressRun> = self.runs[i..]
                .iter()
                .take_while(|r| r.n == head.n && r.heuristic == head.heuristic && r.selection == head.selection)
                .collect();
            i += group.len();
            let steps = group[0].metrics.dr_ratio.len();
            for it in 0..steps {
                let col = |f: fn(&RunMetrics) -> &Vec<f64>| {
                    mean_ci95(&group.iter().map(|r| f(&r.metrics)[it]).collect::<Vec<_>>())
                };
                let (dm, dc) = col(|m| &m.dr_ratio);
                let (km, kc) = col(|m| &m.kendall);
                let (wm, wc) = col(|m| &m.weight_ordering);
                let (um, uc) = col(|m| &m.unique_ratio);
                w.serialize(SummaryRow {
                    n: head.n,
                    heuristic: head.heuristic.to_string(),
                    selection: head.selection.to_string(),
                    iter: it,
                    runs: group.len(),
                    dr_ratio_mean: dm,
                    dr_ratio_ci95: dc,
                    kendall_mean: km,
                    kendall_ci95: kc,
                    weight_ordering_mean: wm,
                    weight_ordering_ci95: wc,
                    unique_ratio_mean: um,
                    unique_ratio_ci95: uc,
                })?;
            }
        }
        w.flush().map_err(super::io_err)?;
        Ok(())
    }
}

fn run_one(
    cfg: &CompressExperimentConfig,
    n: usize,
    heuristic: HeuristicChoice,
    selection: Selection,
    instance: usize,
) -> Result<CompressRun> {
    let seed = cfg.seed.wrapping_add(instance as u64);
    let q = gen_uniform(n, seed)?;
    let ccfg = CompressionConfig {
        heuristic,
        selection,
        max_iterations: cfg.iterations,
        bound_method: cfg.bound_method,
        rng_seed: seed,
        record_bounds: false,
        ..CompressionConfig::default()
    };
    let base_rank = induced_ranking(&q)?;
    let mut metrics = RunMetrics {
        dr_ratio: vec![1.0],
        kendall: vec![0.0],
        weight_ordering: vec![0.0],
        unique_ratio: vec![unique_weight_ratio(&q, &q)?],
    };
    let mut failure = None;
    let mut record = |cur: &crate::qubo::QuboInstance| -> Result<()> {
        metrics.dr_ratio.push(dr_ratio(cur, &q)?);
        metrics.kendall.push(kendall_tau(&base_rank, &induced_ranking(cur)?)?);
        metrics.weight_ordering.push(weight_ordering_distance(&q, cur)?);
        metrics.unique_ratio.push(unique_weight_ratio(cur, &q)?);
        Ok(())
    };
    compress_observed(&q, &ccfg, |_, cur| {
        if failure.is_none() {
            failure = record(cur).err();
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(CompressRun { n, heuristic, selection, instance, metrics })
}

/// Compresses uniform random instances under every configuration and tracks
/// the dynamic-range ratio, the Kendall distance of the induced rankings, the
/// weight-ordering distance and the unique-weight ratio per iteration.
pub fn run_compress_experiment(cfg: &CompressExperimentConfig) -> Result<CompressExperiment> {
    if let Some(&n) = cfg.ns.iter().find(|&&n| n == 0 || n > MAX_RANKING_N) {
        return Err(QuboError::InvalidArgument(format!("n = {n} outside 1..={MAX_RANKING_N}")));
    }
    if cfg.instances == 0 || cfg.iterations == 0 {
        return Err(QuboError::InvalidArgument("instances and iterations must be at least 1".into()));
    }
    let mut jobs = Vec::new();
    for &n in &cfg.ns {
        for &h in &cfg.heuristics {
            for &s in &cfg.selections {
                jobs.extend((0..cfg.instances).map(|i| (n, h, s, i)));
            }
        }
    }
    let runs = jobs.into_par_iter().map(|(n, h, s, i)| run_one(cfg, n, h, s, i)).collect::<Result<Vec<_>>>()?;
    Ok(CompressExperiment { config: cfg.clone(), runs })
}
