//! Heuristic solvers and a parameter-noise model for analog hardware.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{Assignment, PinnedPair};
use crate::error::{QuboError, Result};
use crate::metrics::relative_deviation;
use crate::qubo::{bitstring, QuboInstance};
use crate::range::diff_stats;

/// Best-improvement single-flip descent. Pinned variables never flip; ties
/// between equally good flips go to the lowest index.
pub fn local_search(q: &QuboInstance, start: &[u8], pinned: Option<(PinnedPair, Assignment)>) -> Result<Vec<u8>> {
    let n = q.n();
    q.energy(start)?;
    let mut frozen = vec![false; n];
    if let Some((pair, asg)) = pinned {
        pair.check(n)?;
        for (i, v) in pair.pins(asg) {
            if start[i] != v {
                return Err(QuboError::InvalidArgument(format!(
                    "start vector has x_{i} = {}, pinned to {v}",
                    start[i]
                )));
            }
            frozen[i] = true;
        }
    }
    let w = q.symmetric_couplings();
    let mut x = start.to_vec();
    let mut field: Vec<f64> = (0..n).map(|i| (0..n).filter(|&j| x[j] == 1).map(|j| w[i * n + j]).sum()).collect();
    let threshold = -1e-12 * q.max_abs();
    loop {
        let mut best = (threshold, usize::MAX);
        for i in (0..n).filter(|&i| !frozen[i]) {
            let gain = q.get(i, i) + field[i];
            let delta = if x[i] == 0 { gain } else { -gain };
            if delta < best.0 {
                best = (delta, i);
            }
        }
        let (_, i) = best;
        if i == usize::MAX {
            return Ok(x);
        }
        let sign = if x[i] == 0 { 1.0 } else { -1.0 };
        x[i] ^= 1;
        for (f, &c) in field.iter_mut().zip(&w[i * n..(i + 1) * n]) {
            *f += sign * c;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub initial_temperature: f64,
    pub final_temperature: f64,
    pub sweeps: usize,
    pub reads: usize,
}

impl AnnealSchedule {
    pub const DEFAULT_SWEEPS: usize = 1000;

    /// Geometric schedule from `maxD` down to `minD / 10`.
    pub fn for_instance(q: &QuboInstance, sweeps: usize, reads: usize) -> Self {
        let stats = diff_stats(q);
        let (hot, cold) = if stats.degenerate { (1.0, 0.1) } else { (stats.max_diff, stats.min_diff / 10.0) };
        Self { initial_temperature: hot, final_temperature: cold, sweeps, reads }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.final_temperature > 0.0
            && self.initial_temperature >= self.final_temperature
            && self.initial_temperature.is_finite()
            && self.sweeps >= 1
            && self.reads >= 1;
        if ok {
            Ok(())
        } else {
            Err(QuboError::InvalidArgument(format!("invalid anneal schedule {self:?}")))
        }
    }

    fn temperature(&self, sweep: usize) -> f64 {
        if self.sweeps == 1 {
            return self.final_temperature;
        }
        let t = sweep as f64 / (self.sweeps - 1) as f64;
        self.initial_temperature * (self.final_temperature / self.initial_temperature).powf(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub bits: Vec<u8>,
    pub energy: f64,
}

/// Samples sorted by ascending energy, ties by bit vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
}

impl SampleSet {
    pub fn new(mut samples: Vec<Sample>) -> Self {
        samples.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.bits.cmp(&b.bits)));
        Self { samples }
    }

    /// The same vectors with energies under `q`, re-sorted.
    pub fn reevaluate(&self, q: &QuboInstance) -> Result<Self> {
        let samples = self
            .samples
            .iter()
            .map(|s| Ok(Sample { energy: q.energy(&s.bits)?, bits: s.bits.clone() }))
            .collect::<Result<_>>()?;
        Ok(Self::new(samples))
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn best(&self) -> Option<&Sample> {
        self.samples.first()
    }

    /// Number of samples with energy at most `target + tol`.
    pub fn count_at_most(&self, target: f64, tol: f64) -> usize {
        self.samples.iter().take_while(|s| s.energy <= target + tol).count()
    }

    /// CSV with columns `rank, energy, relative_deviation, bitstring`.
    pub fn write_csv<W: Write>(&self, out: W, v_star: f64) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["rank", "energy", "relative_deviation", "bitstring"])?;
        for (rank, s) in self.samples.iter().enumerate() {
            let dev = relative_deviation(s.energy, v_star).map(|d| d.to_string()).unwrap_or_default();
            w.write_record([rank.to_string(), s.energy.to_string(), dev, bitstring(&s.bits)])?;
        }
        w.flush().map_err(|e| QuboError::io("<csv>", e))?;
        Ok(())
    }
}

/// Independent Metropolis chains, one per read. Read `r` draws from its own
/// generator seeded with `seed + r`, so results do not depend on scheduling.
pub fn simulated_annealing(q: &QuboInstance, schedule: &AnnealSchedule, seed: u64) -> Result<SampleSet> {
    schedule.validate()?;
    let w = q.symmetric_couplings();
    let samples = (0..schedule.reads)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
            let bits = anneal_chain(q, &w, schedule, &mut rng);
            Sample { energy: q.energy_unchecked(&bits), bits }
        })
        .collect();
    Ok(SampleSet::new(samples))
}

fn anneal_chain(q: &QuboInstance, w: &[f64], schedule: &AnnealSchedule, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let n = q.n();
    let diag: Vec<f64> = (0..n).map(|i| q.get(i, i)).collect();
    let mut x: Vec<u8> = (0..n).map(|_| rng.random_range(0..=1u8)).collect();
    let mut field: Vec<f64> = (0..n).map(|i| (0..n).filter(|&j| x[j] == 1).map(|j| w[i * n + j]).sum()).collect();
    for sweep in 0..schedule.sweeps {
        let beta = 1.0 / schedule.temperature(sweep);
        for i in 0..n {
            let gain = diag[i] + field[i];
            let delta = if x[i] == 0 { gain } else { -gain };
            if delta <= 0.0 || rng.random::<f64>() < (-delta * beta).exp() {
                let sign = if x[i] == 0 { 1.0 } else { -1.0 };
                x[i] ^= 1;
                for (f, &c) in field.iter_mut().zip(&w[i * n..(i + 1) * n]) {
                    *f += sign * c;
                }
            }
        }
    }
    x
}

/// Adds `N(0, (sigma * maxD)^2)` noise to every nonzero upper-triangle
/// coefficient.
pub fn ice_perturb(q: &QuboInstance, sigma: f64, seed: u64) -> Result<QuboInstance> {
    ice_perturb_with(q, sigma, seed, false)
}

/// As [`ice_perturb`]; with `include_zeros` every upper-triangle position is
/// treated as a coupler and perturbed.
pub fn ice_perturb_with(q: &QuboInstance, sigma: f64, seed: u64, include_zeros: bool) -> Result<QuboInstance> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(QuboError::InvalidArgument(format!("sigma must be nonnegative, got {sigma}")));
    }
    let stats = diff_stats(q);
    let std = sigma * stats.max_diff;
    if std == 0.0 {
        return Ok(q.clone());
    }
    let normal = Normal::new(0.0, std).expect("positive finite std");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = q.clone();
    for (i, j, v) in q.upper_entries() {
        if v != 0.0 || include_zeros {
            out.set(i, j, v + normal.sample(&mut rng))?;
        }
    }
    Ok(out)
}
