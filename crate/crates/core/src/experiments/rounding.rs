use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::write_version;
use crate::enumerate::{brute_force_min, brute_force_minima_with_limit, energy_tolerance, DEFAULT_ENUMERATION_LIMIT};
use crate::error::{QuboError, Result};
use crate::generators::{gen_subsetsum, subsetsum_to_qubo};
use crate::qubo::QuboInstance;
use crate::range::dynamic_range;

pub const ROUNDING_CSV_VERSION: &str = "# qubopress-exp-rounding v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoundingConfig {
    pub n: usize,
    pub instances: usize,
    pub bins: usize,
    pub min_bits: u32,
    pub max_bits: u32,
    pub seed: u64,
}

impl Default for RoundingConfig {
    fn default() -> Self {
        Self { n: 10, instances: 2000, bins: 5, min_bits: 1, max_bits: 14, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundingRow {
    /// 1-based, in order of increasing dynamic range.
    pub bin: usize,
    pub bits: u32,
    pub instances: usize,
    pub correct: usize,
    pub proportion: f64,
    pub dr_min: f64,
    pub dr_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundingReport {
    pub config: RoundingConfig,
    pub rows: Vec<RoundingRow>,
}

impl RoundingReport {
    pub fn row(&self, bin: usize, bits: u32) -> Option<&RoundingRow> {
        self.rows.iter().find(|r| r.bin == bin && r.bits == bits)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write_version(&mut out, ROUNDING_CSV_VERSION)?;
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush().map_err(super::io_err)?;
        Ok(())
    }
}

/// Scales so the largest magnitude maps to `2^(bits-1) - 1`, then rounds.
/// One bit leaves only the value 0.
pub fn quantize_bits(q: &QuboInstance, bits: u32) -> Result<QuboInstance> {
    if bits == 0 || bits > 53 {
        return Err(QuboError::InvalidArgument(format!("bit width {bits} outside 1..=53")));
    }
    let max = q.max_abs();
    if bits == 1 || max == 0.0 {
        return QuboInstance::zeros(q.n());
    }
    let alpha = ((1u64 << (bits - 1)) - 1) as f64 / max;
    Ok(q.scale(alpha)?.round_entries())
}

struct InstanceOutcome {
    dr: f64,
    correct: Vec<bool>,
}

fn evaluate(cfg: &RoundingConfig, index: usize) -> Result<InstanceOutcome> {
    let q = subsetsum_to_qubo(&gen_subsetsum(cfg.n, cfg.seed.wrapping_add(index as u64))?)?;
    let v_star = brute_force_min(&q, DEFAULT_ENUMERATION_LIMIT)?;
    let tol = energy_tolerance(&q);
    let correct = (cfg.min_bits..=cfg.max_bits)
        .map(|b| {
            let r = quantize_bits(&q, b)?;
            let x = brute_force_minima_with_limit(&r, DEFAULT_ENUMERATION_LIMIT)?.minimizers[0];
            Ok(q.energy_mask(x) <= v_star + tol)
        })
        .collect::<Result<_>>()?;
    Ok(InstanceOutcome { dr: dynamic_range(&q), correct })
}

/// SubsetSum instances binned by dynamic-range quantiles; for each bin and
/// bit width, the share of instances whose rounded version still has an
/// original global optimum as its first minimizer.
pub fn run_rounding_experiment(cfg: &RoundingConfig) -> Result<RoundingReport> {
    if cfg.n > DEFAULT_ENUMERATION_LIMIT {
        return Err(QuboError::EnumerationLimit { n: cfg.n, limit: DEFAULT_ENUMERATION_LIMIT });
    }
    if cfg.bins == 0 || cfg.instances < cfg.bins {
        return Err(QuboError::InvalidArgument(format!("{} instances cannot fill {} bins", cfg.instances, cfg.bins)));
    }
    if cfg.min_bits == 0 || cfg.min_bits > cfg.max_bits {
        return Err(QuboError::InvalidArgument("bit range must satisfy 1 <= min <= max".into()));
    }
    let outcomes = (0..cfg.instances).into_par_iter().map(|i| evaluate(cfg, i)).collect::<Result<Vec<_>>>()?;

    // Quantile bins: sort by DR and cut into equal-count groups.
    let mut order: Vec<usize> = (0..outcomes.len()).collect();
    order.sort_by(|&a, &b| outcomes[a].dr.total_cmp(&outcomes[b].dr).then(a.cmp(&b)));
    let m = order.len();
    let mut rows = Vec::new();
    for bin in 0..cfg.bins {
        let members = &order[bin * m / cfg.bins..(bin + 1) * m / cfg.bins];
        let dr_min = outcomes[members[0]].dr;
        let dr_max = outcomes[members[members.len() - 1]].dr;
        for (bi, bits) in (cfg.min_bits..=cfg.max_bits).enumerate() {
            let correct = members.iter().filter(|&&i| outcomes[i].correct[bi]).count();
            rows.push(RoundingRow {
                bin: bin + 1,
                bits,
                instances: members.len(),
                correct,
                proportion: correct as f64 / members.len() as f64,
                dr_min,
                dr_max,
            });
        }
    }
    Ok(RoundingReport { config: cfg.clone(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantization_fills_the_signed_range() {
        let q = QuboInstance::from_dense(&[[-2.0, 1.0], [0.0, 0.5]]).unwrap();
        assert_eq!(quantize_bits(&q, 1).unwrap(), QuboInstance::zeros(2).unwrap());
        assert_eq!(quantize_bits(&q, 2).unwrap(), QuboInstance::from_dense(&[[-1.0, 1.0], [0.0, 0.0]]).unwrap());
        assert_eq!(quantize_bits(&q, 4).unwrap(), QuboInstance::from_dense(&[[-7.0, 4.0], [0.0, 2.0]]).unwrap());
        assert!(quantize_bits(&q, 0).is_err());
    }

    #[test]
    fn bins_partition_and_trend() {
        let cfg = RoundingConfig { n: 8, instances: 200, bins: 4, min_bits: 1, max_bits: 10, seed: 5 };
        let rep = run_rounding_experiment(&cfg).unwrap();
        assert_eq!(rep.rows.len(), 40);
        let total: usize = (1..=4).map(|b| rep.row(b, 1).unwrap().instances).sum();
        assert_eq!(total, 200);
        for b in 1..=4 {
            assert_eq!(rep.row(b, 1).unwrap().correct, 0);
            assert!(rep.row(b, 10).unwrap().proportion >= rep.row(b, 2).unwrap().proportion);
            assert!(rep.row(b, 1).unwrap().dr_max <= rep.row(b.min(3) + 1, 1).unwrap().dr_min + 1e-12 || b == 4);
        }
        assert_eq!(rep, run_rounding_experiment(&cfg).unwrap());
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = RoundingConfig { instances: 3, bins: 5, ..RoundingConfig::default() };
        assert!(run_rounding_experiment(&bad).is_err());
        let big = RoundingConfig { n: 30, ..RoundingConfig::default() };
        assert!(matches!(run_rounding_experiment(&big), Err(QuboError::EnumerationLimit { .. })));
    }
}
