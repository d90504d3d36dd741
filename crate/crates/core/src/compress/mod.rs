//! The dynamic-range reduction loop.
//!
//! Each iteration picks one upper-triangle entry `Q_kl`, proposes a change `w`
//! with one of the heuristics, clamps it to the interval in which an optimum
//! is provably preserved, and applies it if the dynamic range does not grow.

mod dr;
mod heuristics;
mod select;
mod trace;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    compute_bounds, preservation_interval, widened_interval, BoundConfig, BoundMethod, PinnedPair, PreservationInterval,
};
use crate::enumerate::DEFAULT_ENUMERATION_LIMIT;
use crate::error::{QuboError, Result};
use crate::qubo::QuboInstance;
use crate::range::{DiffStats, EntryOrdering, DEFAULT_MERGE_TOLERANCE};

pub use dr::{
    admissible, dr_change_bounds, keeps_min_distance, landing_value, order_neighbor_bounds, DrChangeBounds,
    OrderNeighborBounds,
};
pub use heuristics::{clamp_final, heuristic_g, heuristic_g0, heuristic_m, HeuristicChoice};
pub use select::{active_positions, Selection, SelectionState};
pub use trace::{CompressionTrace, IterationRecord, SkipReason, TRACE_CSV_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompressionConfig {
    pub heuristic: HeuristicChoice,
    pub selection: Selection,
    pub max_iterations: usize,
    pub bound_method: BoundMethod,
    pub rng_seed: u64,
    pub merge_tolerance: f64,
    /// The preservation interval is shrunk by `safety_margin * maxD` at both
    /// ends. With exact bounds a change at an endpoint ties the surviving
    /// optimum with another vector; the margin keeps the optimum unique.
    pub safety_margin: f64,
    /// Drop the side of the interval that the bounds show cannot lose an
    /// optimum; see [`widened_interval`](crate::bounds::widened_interval).
    pub widen_certified: bool,
    pub local_search_restarts: usize,
    pub roof_precision: f64,
    pub enumeration_limit: usize,
    /// Store each iteration's bound set in the trace.
    pub record_bounds: bool,
}

impl Default for CompressionConfig {
    fn default() -> Self {
        let b = BoundConfig::default();
        Self {
            heuristic: HeuristicChoice::G0,
            selection: Selection::Random,
            max_iterations: 1000,
            bound_method: BoundMethod::Auto,
            rng_seed: 0,
            merge_tolerance: DEFAULT_MERGE_TOLERANCE,
            safety_margin: 1e-7,
            widen_certified: true,
            local_search_restarts: b.restarts,
            roof_precision: b.roof_precision,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
            record_bounds: true,
        }
    }
}

impl CompressionConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(QuboError::InvalidArgument(m.into()));
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if !(self.merge_tolerance >= 0.0 && self.merge_tolerance < 1.0) {
            return bad("merge_tolerance must lie in [0, 1)");
        }
        if !(self.safety_margin >= 0.0 && self.safety_margin < 1.0) {
            return bad("safety_margin must lie in [0, 1)");
        }
        if self.local_search_restarts == 0 {
            return bad("local_search_restarts must be at least 1");
        }
        if !(self.roof_precision > 0.0 && self.roof_precision.is_finite()) {
            return bad("roof_precision must be positive");
        }
        Ok(())
    }

    fn bound_config(&self, iter: usize) -> BoundConfig {
        BoundConfig {
            method: self.bound_method,
            restarts: self.local_search_restarts,
            seed: self.rng_seed ^ ((iter as u64) << 20),
            roof_precision: self.roof_precision,
            enumeration_limit: self.enumeration_limit,
        }
    }
}

/// A fully evaluated change of one entry.
#[derive(Debug, Clone)]
struct Step {
    record: IterationRecord,
    pair: PinnedPair,
    new_value: f64,
}

/// The change actually applied for a proposal: the clamped, possibly snapped
/// `w`, the new entry value, and why it was skipped if it was.
pub(crate) fn finalize_change(
    q: &QuboInstance,
    ordering: &EntryOrdering,
    stats: &DiffStats,
    pair: PinnedPair,
    w: f64,
    rel_tol: f64,
) -> (f64, f64, Option<SkipReason>) {
    let rank = ordering.rank_of(pair.k, pair.l);
    let old = q.get(pair.k, pair.l);
    if w == 0.0 {
        return (0.0, old, Some(SkipReason::ZeroChange));
    }
    let new_value = if let Some(v) = landing_value(ordering, rank, w, rel_tol) {
        v
    } else if keeps_min_distance(ordering, stats, rank, w) {
        old + w
    } else {
        return (0.0, old, Some(SkipReason::Inadmissible));
    };
    if new_value == old {
        return (0.0, old, Some(SkipReason::ZeroChange));
    }
    let mut trial = q.clone();
    trial.set(pair.k, pair.l, new_value).expect("pair was validated");
    let dr_after = DiffStats::from_values(trial.values(), rel_tol).dr_bits;
    // Strict: rounding in slide-back targets can shave an ulp off minD, and
    // tolerating that lets the range creep upward over many iterations.
    if dr_after > stats.dr_bits {
        return (0.0, old, Some(SkipReason::DrIncrease));
    }
    (new_value - old, new_value, None)
}

fn evaluate_step(q: &QuboInstance, pair: PinnedPair, cfg: &CompressionConfig, iter: usize) -> Result<Step> {
    pair.check(q.n())?;
    let tol = cfg.merge_tolerance;
    let stats = DiffStats::from_values(q.values(), tol);
    if stats.degenerate {
        return Err(QuboError::Degenerate);
    }
    let ordering = EntryOrdering::new(q);
    let rank = ordering.rank_of(pair.k, pair.l);
    let bounds = compute_bounds(q, pair, &cfg.bound_config(iter))?;
    let interval = if cfg.widen_certified { widened_interval(&bounds) } else { preservation_interval(&bounds) };
    let margin = cfg.safety_margin * stats.max_diff;
    let safe = PreservationInterval { lo: (interval.lo + margin).min(0.0), hi: (interval.hi - margin).max(0.0) };

    let w_proposed = match cfg.heuristic {
        HeuristicChoice::M => {
            let nb = order_neighbor_bounds(&ordering, rank, tol);
            heuristic_m(&ordering, &stats, rank, &nb, tol)
        }
        h => {
            let b = dr_change_bounds(&ordering, &stats, rank, tol)?;
            if h == HeuristicChoice::G {
                heuristic_g(&ordering, &stats, rank, &b)
            } else {
                heuristic_g0(&ordering, &stats, rank, &b)
            }
        }
    };
    let clamped = clamp_final(w_proposed, &safe);
    let (w_applied, new_value, skip_reason) = finalize_change(q, &ordering, &stats, pair, clamped, tol);
    let dr_after = if skip_reason.is_some() {
        stats.dr_bits
    } else {
        let mut next = q.clone();
        next.set(pair.k, pair.l, new_value)?;
        DiffStats::from_values(next.values(), tol).dr_bits
    };
    let record = IterationRecord {
        iter,
        k: pair.k,
        l: pair.l,
        rank,
        w_proposed,
        y_lo: interval.lo,
        y_hi: interval.hi,
        w_applied,
        dr_before: stats.dr_bits,
        dr_after,
        skipped: skip_reason.is_some(),
        skip_reason,
        bounds: cfg.record_bounds.then_some(bounds),
    };
    Ok(Step { record, pair, new_value })
}

fn greedy_step(q: &QuboInstance, cfg: &CompressionConfig, state: &mut SelectionState, iter: usize) -> Result<Step> {
    let stats = DiffStats::from_values(q.values(), cfg.merge_tolerance);
    if stats.degenerate {
        return Err(QuboError::Degenerate);
    }
    let candidates = active_positions(q, &stats, cfg.merge_tolerance);
    let steps = candidates.into_iter().map(|p| evaluate_step(q, p, cfg, iter)).collect::<Result<Vec<_>>>()?;
    let gain = |s: &Step| s.record.dr_before - s.record.dr_after;
    let best = steps.iter().map(gain).fold(f64::NEG_INFINITY, f64::max);
    let mut tied: Vec<Step> = steps.into_iter().filter(|s| gain(s) >= best - 1e-12).collect();
    let pick = state.rng.random_range(0..tied.len());
    Ok(tied.swap_remove(pick))
}

/// The next entry to modify under `cfg.selection`.
pub fn select_next(q: &QuboInstance, cfg: &CompressionConfig, state: &mut SelectionState) -> Result<PinnedPair> {
    if DiffStats::from_values(q.values(), cfg.merge_tolerance).degenerate {
        return Err(QuboError::Degenerate);
    }
    Ok(match cfg.selection {
        Selection::Random => state.random(q.n()),
        Selection::Sequential => state.sequential(q.n()),
        Selection::GreedyImpact => greedy_step(q, cfg, state, 0)?.pair,
    })
}

/// One iteration on a given entry. Returns the updated instance and the
/// iteration record; a skipped step returns the instance unchanged.
pub fn compress_step(
    q: &QuboInstance,
    pair: PinnedPair,
    cfg: &CompressionConfig,
    iter: usize,
) -> Result<(QuboInstance, IterationRecord)> {
    let step = evaluate_step(q, pair, cfg, iter)?;
    let mut next = q.clone();
    if !step.record.skipped {
        next.set(pair.k, pair.l, step.new_value)?;
    }
    Ok((next, step.record))
}

/// Runs the compression loop for `cfg.max_iterations` iterations. An instance
/// with a single distinct value is returned unchanged with an empty trace.
pub fn compress(q: &QuboInstance, cfg: &CompressionConfig) -> Result<(QuboInstance, CompressionTrace)> {
    compress_observed(q, cfg, |_, _| {})
}

/// [`compress`], calling `observe(iter, &current)` after every iteration.
pub fn compress_observed(
    q: &QuboInstance,
    cfg: &CompressionConfig,
    mut observe: impl FnMut(usize, &QuboInstance),
) -> Result<(QuboInstance, CompressionTrace)> {
    cfg.validate()?;
    let initial = DiffStats::from_values(q.values(), cfg.merge_tolerance);
    let mut trace = CompressionTrace { records: Vec::new(), initial_dr: initial.dr_bits, final_dr: initial.dr_bits };
    if initial.degenerate {
        return Ok((q.clone(), trace));
    }
    let mut current = q.clone();
    let mut state = SelectionState::new(cfg.rng_seed);
    for iter in 0..cfg.max_iterations {
        if DiffStats::from_values(current.values(), cfg.merge_tolerance).degenerate {
            break;
        }
        let step = match cfg.selection {
            Selection::GreedyImpact => greedy_step(&current, cfg, &mut state, iter)?,
            Selection::Random => evaluate_step(&current, state.random(current.n()), cfg, iter)?,
            Selection::Sequential => evaluate_step(&current, state.sequential(current.n()), cfg, iter)?,
        };
        if !step.record.skipped {
            current.set(step.pair.k, step.pair.l, step.new_value)?;
        }
        trace.final_dr = step.record.dr_after;
        trace.records.push(step.record);
        observe(iter, &current);
    }
    Ok((current, trace))
}
