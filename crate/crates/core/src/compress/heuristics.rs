//! Proposals for the change `w` of a single entry.

use serde::{Deserialize, Serialize};

use crate::bounds::PreservationInterval;
use crate::range::{values_equal, DiffStats, EntryOrdering};

use super::dr::{keeps_min_distance, DrChangeBounds, OrderNeighborBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HeuristicChoice {
    /// Greedy: the largest change in the chosen direction.
    G,
    /// Greedy, but set the entry to zero whenever zero is in reach.
    G0,
    /// Move the entry to the midpoint between its neighbours.
    M,
}

impl std::str::FromStr for HeuristicChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "G" => Ok(Self::G),
            "G0" => Ok(Self::G0),
            "M" => Ok(Self::M),
            _ => Err(format!("unknown heuristic {s:?}, expected G, G0 or M")),
        }
    }
}

impl std::fmt::Display for HeuristicChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::G => "G",
            Self::G0 => "G0",
            Self::M => "M",
        })
    }
}

/// Negative entries are pushed up, all others down.
fn increases(value: f64) -> bool {
    value < 0.0
}

/// Greedy proposal.
///
/// Starting from the largest move allowed by both `d+` and the current value
/// range (`d-` for decreases), the target slides back towards the entry until
/// it is at least `minD` from every other entry. If no such target improves on
/// the current value, the entry lands on the farthest existing value within
/// `[q + d-, q + d+]` instead.
pub fn heuristic_g(ordering: &EntryOrdering, stats: &DiffStats, rank: usize, bounds: &DrChangeBounds) -> f64 {
    let m = ordering.len();
    let ql = ordering.value(rank);
    let first = ordering.value(0);
    let last = ordering.value(m - 1);
    let min_gap = stats.min_diff;
    let up = increases(ql);

    let reach = if up {
        let bottom = if rank == 0 { ordering.value(1) - first } else { 0.0 };
        bounds.d_plus.min(last - ql + bottom)
    } else {
        let top = if rank == m - 1 { ordering.value(m - 2) - last } else { 0.0 };
        bounds.d_minus.max(first - ql + top)
    };

    let mut target = ql + reach;
    loop {
        let w = target - ql;
        if (up && w <= 0.0) || (!up && w >= 0.0) {
            break;
        }
        if keeps_min_distance(ordering, stats, rank, w) {
            return w;
        }
        // Step past the conflicting entries closest to the entry itself.
        let conflicts =
            ordering.values().enumerate().filter(|&(r, v)| r != rank && (target - v).abs() < min_gap).map(|(_, v)| v);
        target = if up {
            conflicts.fold(f64::INFINITY, f64::min) - min_gap
        } else {
            conflicts.fold(f64::NEG_INFINITY, f64::max) + min_gap
        };
    }

    // Fallback: land on the farthest existing value in reach.
    let landing = stats.distinct_values.iter().copied().filter(|&v| !values_equal(v, ql, 0.0));
    let pick = if up {
        landing
            .filter(|&v| v > ql && v <= ql + bounds.d_plus)
            .fold(None, |a: Option<f64>, v| Some(a.map_or(v, |a| a.max(v))))
    } else {
        landing
            .filter(|&v| v < ql && v >= ql + bounds.d_minus)
            .fold(None, |a: Option<f64>, v| Some(a.map_or(v, |a| a.min(v))))
    };
    pick.map_or(0.0, |v| v - ql)
}

/// Greedy proposal that prefers moving the entry to exactly zero.
pub fn heuristic_g0(ordering: &EntryOrdering, stats: &DiffStats, rank: usize, bounds: &DrChangeBounds) -> f64 {
    let ql = ordering.value(rank);
    if ql == 0.0 {
        return 0.0;
    }
    let reachable = if increases(ql) { 0.0 <= ql + bounds.d_plus } else { 0.0 >= ql + bounds.d_minus };
    if reachable {
        -ql
    } else {
        heuristic_g(ordering, stats, rank, bounds)
    }
}

/// Midpoint proposal. Interior entries move to the middle of the gap on the
/// side with the closer neighbour (ties move up). The largest and smallest
/// values use dedicated rules based on `minD` with and without the entry.
pub fn heuristic_m(
    ordering: &EntryOrdering,
    stats: &DiffStats,
    rank: usize,
    neighbors: &OrderNeighborBounds,
    rel_tol: f64,
) -> f64 {
    let ql = ordering.value(rank);
    let min_d = stats.min_diff;
    let min_d_without = || {
        let s = ordering.stats_without(rank, rel_tol);
        if s.degenerate {
            min_d
        } else {
            s.min_diff
        }
    };
    match *neighbors {
        // Largest value.
        OrderNeighborBounds { upper_plus: None, lower_minus: Some(lower), .. } => {
            let without = min_d_without();
            if values_equal(without, min_d, rel_tol) {
                lower - ql + min_d
            } else {
                without - min_d
            }
        }
        // Smallest value.
        OrderNeighborBounds { lower_minus: None, upper_plus: Some(upper), .. } => {
            let without = min_d_without();
            if values_equal(without, min_d, rel_tol) {
                upper - ql - min_d
            } else {
                min_d - without
            }
        }
        OrderNeighborBounds {
            upper_plus: Some(u_plus),
            lower_plus: Some(l_plus),
            upper_minus: Some(u_minus),
            lower_minus: Some(l_minus),
        } => {
            if ql - l_minus <= u_plus - ql {
                (u_plus - l_plus) / 2.0 - (u_plus - ql).min(ql - l_plus)
            } else {
                (l_minus - u_minus) / 2.0 + (u_minus - ql).min(ql - l_minus)
            }
        }
        _ => 0.0,
    }
}

/// `min(max(w, y-), y+)`.
pub fn clamp_final(w: f64, interval: &PreservationInterval) -> f64 {
    w.max(interval.lo).min(interval.hi)
}
