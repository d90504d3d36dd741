//! Bounds on a single-entry change that keep the dynamic range from growing.

use serde::{Deserialize, Serialize};

use crate::error::{QuboError, Result};
use crate::range::{values_equal, DiffStats, EntryOrdering};

/// Slack applied to the minimum-distance test so that values placed exactly
/// `minD` away from a neighbour are accepted despite rounding.
const DISTANCE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrChangeBounds {
    pub d_minus: f64,
    pub d_plus: f64,
    pub delta_ell: f64,
    /// Distinct existing values `v` with `q + d_minus <= v <= q + d_plus`.
    pub landing_targets: Vec<f64>,
}

pub(crate) fn check_rank(ordering: &EntryOrdering, stats: &DiffStats, rank: usize) -> Result<()> {
    if stats.degenerate {
        return Err(QuboError::Degenerate);
    }
    let e =
        ordering.entries().get(rank).ok_or_else(|| QuboError::InvalidArgument(format!("rank {rank} out of range")))?;
    if !e.is_modifiable() {
        return Err(QuboError::NotModifiable { i: e.i, j: e.j });
    }
    Ok(())
}

/// `d-` and `d+` for the entry at `rank` (0-based):
///
/// ```text
/// d- = q(1) - q(l) + [l = m] (q(m-1) - q(m)) - D_l
/// d+ = q(m) - q(l) + [l = 1] (q(2) - q(1)) + D_l
/// D_l = maxD (minD' / minD - 1)
/// ```
///
/// where `minD'` is the minimum distance once entry `l` is removed. When the
/// remaining entries hold a single distinct value, `D_l` is taken as 0.
pub fn dr_change_bounds(
    ordering: &EntryOrdering,
    stats: &DiffStats,
    rank: usize,
    rel_tol: f64,
) -> Result<DrChangeBounds> {
    check_rank(ordering, stats, rank)?;
    let m = ordering.len();
    let q = |r: usize| ordering.value(r);
    let ql = q(rank);
    let without = ordering.stats_without(rank, rel_tol);
    let delta_ell =
        if without.degenerate { 0.0 } else { (stats.max_diff * (without.min_diff / stats.min_diff - 1.0)).max(0.0) };
    let top = if rank == m - 1 { q(m - 2) - q(m - 1) } else { 0.0 };
    let bottom = if rank == 0 { q(1) - q(0) } else { 0.0 };
    let d_minus = q(0) - ql + top - delta_ell;
    let d_plus = q(m - 1) - ql + bottom + delta_ell;
    let landing_targets =
        stats.distinct_values.iter().copied().filter(|&v| v >= ql + d_minus && v <= ql + d_plus).collect();
    Ok(DrChangeBounds { d_minus, d_plus, delta_ell, landing_targets })
}

/// Whether the new value keeps distance at least `minD` from every other
/// entry.
pub fn keeps_min_distance(ordering: &EntryOrdering, stats: &DiffStats, rank: usize, w: f64) -> bool {
    let target = ordering.value(rank) + w;
    let min_gap = stats.min_diff * (1.0 - DISTANCE_SLACK);
    ordering.values().enumerate().all(|(r, v)| r == rank || (target - v).abs() >= min_gap)
}

/// The existing value the new entry would land on, if any. Landing on the
/// entry's own value (`w = 0`) counts.
pub fn landing_value(ordering: &EntryOrdering, rank: usize, w: f64, rel_tol: f64) -> Option<f64> {
    let target = ordering.value(rank) + w;
    ordering.values().find(|&v| values_equal(target, v, rel_tol))
}

/// A change is admissible if it keeps the minimum distance or lands on an
/// existing value.
pub fn admissible(ordering: &EntryOrdering, stats: &DiffStats, rank: usize, w: f64, rel_tol: f64) -> bool {
    keeps_min_distance(ordering, stats, rank, w) || landing_value(ordering, rank, w, rel_tol).is_some()
}

/// Nearest neighbours of the value at `rank` in the entry multiset.
/// `None` marks an absent neighbour at the ends of the range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderNeighborBounds {
    /// Smallest value strictly above.
    pub upper_plus: Option<f64>,
    /// Largest value at or below, excluding the entry itself.
    pub lower_plus: Option<f64>,
    /// Smallest value at or above, excluding the entry itself.
    pub upper_minus: Option<f64>,
    /// Largest value strictly below.
    pub lower_minus: Option<f64>,
}

pub fn order_neighbor_bounds(ordering: &EntryOrdering, rank: usize, rel_tol: f64) -> OrderNeighborBounds {
    let ql = ordering.value(rank);
    let mut nb = OrderNeighborBounds { upper_plus: None, lower_plus: None, upper_minus: None, lower_minus: None };
    let min = |a: Option<f64>, v: f64| Some(a.map_or(v, |a: f64| a.min(v)));
    let max = |a: Option<f64>, v: f64| Some(a.map_or(v, |a: f64| a.max(v)));
    for (r, v) in ordering.values().enumerate() {
        let equal = values_equal(v, ql, rel_tol);
        if !equal && v > ql {
            nb.upper_plus = min(nb.upper_plus, v);
        }
        if !equal && v < ql {
            nb.lower_minus = max(nb.lower_minus, v);
        }
        if r != rank && (equal || v < ql) {
            nb.lower_plus = max(nb.lower_plus, v);
        }
        if r != rank && (equal || v > ql) {
            nb.upper_minus = min(nb.upper_minus, v);
        }
    }
    nb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::range::{diff_stats, entry_ordering, DEFAULT_MERGE_TOLERANCE as TOL};
    use crate::test_support::example_two;

    #[test]
    fn example_two_bounds_follow_the_formula() {
        let q = example_two();
        let (o, s) = (entry_ordering(&q), diff_stats(&q));
        let b = dr_change_bounds(&o, &s, 2, TOL).unwrap();
        // Removing -0.8 leaves {-1.5, -1, 0, 0.4, 1} with minimum distance 0.4.
        assert!((b.delta_ell - 2.5).abs() < 1e-12);
        assert!((b.d_plus - (1.0 + 0.8 + 2.5)).abs() < 1e-12);
        assert!((b.d_minus - (-1.5 + 0.8 - 2.5)).abs() < 1e-12);
        assert_eq!(b.landing_targets.len(), 6);
    }

    #[test]
    fn duplicate_values_have_no_slack() {
        let q = example_two();
        let (o, s) = (entry_ordering(&q), diff_stats(&q));
        // rank 6 holds one of the two 0.4 entries
        assert_eq!(dr_change_bounds(&o, &s, 6, TOL).unwrap().delta_ell, 0.0);
    }

    #[test]
    fn rank_validation() {
        let q = example_two();
        let (o, s) = (entry_ordering(&q), diff_stats(&q));
        assert!(matches!(dr_change_bounds(&o, &s, 3, TOL), Err(QuboError::NotModifiable { .. })));
        assert!(dr_change_bounds(&o, &s, 9, TOL).is_err());
        let z = crate::qubo::QuboInstance::zeros(2).unwrap();
        assert!(matches!(dr_change_bounds(&entry_ordering(&z), &diff_stats(&z), 0, TOL), Err(QuboError::Degenerate)));
    }

    #[test]
    fn admissibility_examples() {
        let q = example_two();
        let (o, s) = (entry_ordering(&q), diff_stats(&q));
        assert!(admissible(&o, &s, 2, 0.0, TOL));
        assert!(admissible(&o, &s, 2, 0.8, TOL));
        assert_eq!(landing_value(&o, 2, 0.8, TOL), Some(0.0));
        // -0.65 is within 0.2 of nothing: -1 is 0.35 away, 0 is 0.65 away.
        assert!(admissible(&o, &s, 2, 0.15, TOL));
        // -0.9 is only 0.1 away from -1 and lands nowhere.
        assert!(!admissible(&o, &s, 2, -0.1, TOL));
        // exactly minD away is accepted
        assert!(admissible(&o, &s, 2, 0.6, TOL));
    }

    #[test]
    fn neighbour_bounds_examples() {
        let q = example_two();
        let o = entry_ordering(&q);
        let nb = order_neighbor_bounds(&o, 1, TOL);
        assert_eq!((nb.lower_minus, nb.lower_plus), (Some(-1.5), Some(-1.5)));
        assert_eq!((nb.upper_minus, nb.upper_plus), (Some(-0.8), Some(-0.8)));
        let nb = order_neighbor_bounds(&o, 6, TOL);
        assert_eq!(nb.upper_minus, Some(0.4));
        assert_eq!(nb.lower_plus, Some(0.4));
        assert_eq!(nb.upper_plus, Some(1.0));
        assert_eq!(nb.lower_minus, Some(0.0));
        let nb = order_neighbor_bounds(&o, 8, TOL);
        assert_eq!((nb.upper_plus, nb.upper_minus), (None, None));
        let nb = order_neighbor_bounds(&o, 0, TOL);
        assert_eq!((nb.lower_plus, nb.lower_minus), (None, None));
    }
}
