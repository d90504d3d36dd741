//! Exhaustive evaluation of the energy landscape.
//!
//! Vectors are visited in Gray-code order so that each step flips a single
//! bit and costs `O(n)`. The running energy is recomputed from scratch every
//! [`RESYNC_INTERVAL`] steps to bound floating-point drift.

use serde::{Deserialize, Serialize};

use crate::error::{QuboError, Result};
use crate::qubo::{mask_to_bits, QuboInstance};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 24;

/// Hard ceiling regardless of configuration; masks are `u64`.
const MAX_ENUMERATION: usize = 40;

const RESYNC_INTERVAL: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub n: usize,
    pub min_value: f64,
    /// Minimizers as bit masks (bit `i` is `x_i`), ascending.
    pub minimizers: Vec<u64>,
}

impl SolveResult {
    pub fn minimizer_vectors(&self) -> Vec<Vec<u8>> {
        self.minimizers.iter().map(|&m| mask_to_bits(m, self.n)).collect()
    }

    pub fn contains(&self, x: &[u8]) -> bool {
        self.minimizers.binary_search(&crate::qubo::bits_to_mask(x)).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGapResult {
    pub y1: f64,
    pub y2: f64,
    pub gamma: f64,
    pub alpha_star: f64,
}

/// Absolute tolerance under which two energies of `q` count as equal.
///
/// Integer instances whose energies fit in the 53-bit mantissa are summed
/// exactly, so they use exact comparison.
pub fn energy_tolerance(q: &QuboInstance) -> f64 {
    let scale = q.abs_sum();
    if q.is_integral() && scale < 2f64.powi(52) {
        0.0
    } else {
        256.0 * f64::EPSILON * scale
    }
}

pub(crate) fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit.min(MAX_ENUMERATION) {
        return Err(QuboError::EnumerationLimit { n, limit: limit.min(MAX_ENUMERATION) });
    }
    Ok(())
}

/// Calls `visit(mask, energy)` once for each of the `2^n` vectors.
pub fn for_each_energy(q: &QuboInstance, limit: usize, mut visit: impl FnMut(u64, f64)) -> Result<()> {
    let n = q.n();
    check_limit(n, limit)?;
    let w = q.symmetric_couplings();
    let diag: Vec<f64> = (0..n).map(|i| q.get(i, i)).collect();
    let mut field = vec![0.0; n];
    let mut energy = 0.0;
    let mut mask = 0u64;
    visit(0, 0.0);
    let total = 1u64 << n;
    for t in 1..total {
        let i = t.trailing_zeros() as usize;
        let bit = 1u64 << i;
        let row = &w[i * n..(i + 1) * n];
        if mask & bit == 0 {
            energy += diag[i] + field[i];
            field.iter_mut().zip(row).for_each(|(f, &c)| *f += c);
        } else {
            energy -= diag[i] + field[i];
            field.iter_mut().zip(row).for_each(|(f, &c)| *f -= c);
        }
        mask ^= bit;
        if t % RESYNC_INTERVAL == 0 {
            energy = q.energy_mask(mask);
            for (j, f) in field.iter_mut().enumerate() {
                *f = (0..n).filter(|&k| mask >> k & 1 == 1).map(|k| w[j * n + k]).sum();
            }
        }
        visit(mask, energy);
    }
    Ok(())
}

/// Global minimum value only.
pub fn brute_force_min(q: &QuboInstance, limit: usize) -> Result<f64> {
    let mut best = (f64::INFINITY, 0u64);
    for_each_energy(q, limit, |m, e| {
        if e < best.0 {
            best = (e, m);
        }
    })?;
    // The incremental sum drifts by a few ulps; report the direct evaluation.
    Ok(q.energy_mask(best.1))
}

/// Global minimum and every minimizer, using the default enumeration limit.
pub fn brute_force_minima(q: &QuboInstance) -> Result<SolveResult> {
    brute_force_minima_with_limit(q, DEFAULT_ENUMERATION_LIMIT)
}

pub fn brute_force_minima_with_limit(q: &QuboInstance, limit: usize) -> Result<SolveResult> {
    let min_value = brute_force_min(q, limit)?;
    let tol = energy_tolerance(q);
    let mut minimizers = Vec::new();
    for_each_energy(q, limit, |m, e| {
        if e <= min_value + tol {
            minimizers.push(m);
        }
    })?;
    minimizers.sort_unstable();
    let min_value = minimizers.iter().map(|&m| q.energy_mask(m)).fold(min_value, f64::min);
    Ok(SolveResult { n: q.n(), min_value, minimizers })
}

/// Lowest and second-lowest distinct energies and the safe scaling factor
/// `alpha* = (n^2 + n) / (4 gamma)`.
pub fn spectral_gap(q: &QuboInstance) -> Result<SpectralGapResult> {
    spectral_gap_with_limit(q, DEFAULT_ENUMERATION_LIMIT)
}

pub fn spectral_gap_with_limit(q: &QuboInstance, limit: usize) -> Result<SpectralGapResult> {
    let y1 = brute_force_min(q, limit)?;
    let tol = energy_tolerance(q);
    let mut y2 = f64::INFINITY;
    for_each_energy(q, limit, |_, e| {
        if e > y1 + tol && e < y2 {
            y2 = e;
        }
    })?;
    if !y2.is_finite() {
        return Err(QuboError::NoSpectralGap);
    }
    let gamma = y2 - y1;
    let n = q.n() as f64;
    Ok(SpectralGapResult { y1, y2, gamma, alpha_star: (n * n + n) / (4.0 * gamma) })
}

/// `true` iff every minimizer of `candidate` also minimizes `reference`.
pub fn optimum_included(candidate: &QuboInstance, reference: &QuboInstance) -> Result<bool> {
    optimum_included_with_limit(candidate, reference, DEFAULT_ENUMERATION_LIMIT)
}

pub fn optimum_included_with_limit(candidate: &QuboInstance, reference: &QuboInstance, limit: usize) -> Result<bool> {
    if candidate.n() != reference.n() {
        return Err(QuboError::DimensionMismatch { expected: reference.n(), got: candidate.n() });
    }
    let cand = brute_force_minima_with_limit(candidate, limit)?;
    let ref_min = brute_force_min(reference, limit)?;
    let tol = energy_tolerance(reference);
    Ok(cand.minimizers.iter().all(|&m| reference.energy_mask(m) <= ref_min + tol))
}
