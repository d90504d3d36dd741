//! Bounds on subspace minima and the optimum-preserving change interval.
//!
//! For a pinned pair `(k, l)` and an assignment `ab`, `y*_ab` is the minimum
//! energy over all vectors with `x_k = a` and `x_l = b`. Lower and upper
//! bounds on the four (or, for `k == l`, two) subspace minima determine how
//! far `Q_kl` may move without losing every global optimum.

mod maxflow;
mod roof_dual;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::{check_limit, for_each_energy, DEFAULT_ENUMERATION_LIMIT};
use crate::error::{QuboError, Result};
use crate::qubo::QuboInstance;
use crate::solvers::local_search;

pub use roof_dual::{roof_dual_bound, ReducedProblem, DEFAULT_ROOF_PRECISION};

/// Indices `k <= l` of the coefficient under consideration. `k == l` is the
/// diagonal case, where only one variable is pinned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PinnedPair {
    pub k: usize,
    pub l: usize,
}

impl PinnedPair {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k > l {
            return Err(QuboError::LowerTriangle { i: k, j: l });
        }
        Ok(Self { k, l })
    }

    pub fn is_diagonal(&self) -> bool {
        self.k == self.l
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        if self.l >= n {
            return Err(QuboError::IndexOutOfRange { i: self.k, j: self.l, n });
        }
        if self.k > self.l {
            return Err(QuboError::NotModifiable { i: self.k, j: self.l });
        }
        Ok(())
    }

    /// The subspace assignments for this pair: `00, 01, 10, 11` off the
    /// diagonal, `0, 1` on it.
    pub fn assignments(&self) -> Vec<Assignment> {
        if self.is_diagonal() {
            vec![Assignment::single(0), Assignment::single(1)]
        } else {
            vec![Assignment::new(0, 0), Assignment::new(0, 1), Assignment::new(1, 0), Assignment::new(1, 1)]
        }
    }

    /// The `(index, bit)` pins for an assignment.
    pub fn pins(&self, asg: Assignment) -> Vec<(usize, u8)> {
        if self.is_diagonal() {
            vec![(self.k, asg.a)]
        } else {
            vec![(self.k, asg.a), (self.l, asg.b)]
        }
    }

    /// Vector with the pins applied and every free variable set to `fill`.
    fn filled(&self, n: usize, asg: Assignment, fill: u8) -> Vec<u8> {
        let mut x = vec![fill; n];
        for (i, v) in self.pins(asg) {
            x[i] = v;
        }
        x
    }
}

impl fmt::Display for PinnedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k, self.l)
    }
}

/// Values `x_k = a`, `x_l = b`. For diagonal pairs `a == b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    pub a: u8,
    pub b: u8,
}

impl Assignment {
    pub fn new(a: u8, b: u8) -> Self {
        Self { a, b }
    }

    pub fn single(a: u8) -> Self {
        Self { a, b: a }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.a, self.b)
    }
}

/// How a bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Exact,
    ZeroVector,
    LocalSearch,
    NegativeSum,
    RoofDual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubspaceBound {
    pub assignment: Assignment,
    pub lower: f64,
    pub upper: f64,
    pub lower_method: BoundKind,
    pub upper_method: BoundKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceBoundSet {
    pub pair: PinnedPair,
    pub bounds: Vec<SubspaceBound>,
}

impl SubspaceBoundSet {
    pub fn get(&self, asg: Assignment) -> Option<&SubspaceBound> {
        self.bounds.iter().find(|b| b.assignment == asg)
    }

    pub fn lower(&self, asg: Assignment) -> f64 {
        self.get(asg).map(|b| b.lower).expect("assignment not in bound set")
    }

    pub fn upper(&self, asg: Assignment) -> f64 {
        self.get(asg).map(|b| b.upper).expect("assignment not in bound set")
    }
}

/// Admissible change interval `[lo, hi]` for the pinned coefficient, with
/// `lo <= 0 <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreservationInterval {
    pub lo: f64,
    pub hi: f64,
}

impl PreservationInterval {
    pub fn contains(&self, w: f64) -> bool {
        self.lo <= w && w <= self.hi
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    /// Exhaustive for `n <= 12`, local search and roof duality above.
    #[default]
    Auto,
    Exhaustive,
    /// Local-search upper bounds, negative-sum lower bounds.
    Heuristic,
    /// Local-search upper bounds, roof-dual lower bounds.
    HeuristicRoofDual,
}

impl std::str::FromStr for BoundMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "auto" => Ok(Self::Auto),
            "exhaustive" | "exact" => Ok(Self::Exhaustive),
            "heuristic" => Ok(Self::Heuristic),
            "heuristic_roof_dual" | "roof_dual" | "roof" => Ok(Self::HeuristicRoofDual),
            _ => Err(format!("unknown bound method {s:?}, expected auto, exhaustive, heuristic or roof-dual")),
        }
    }
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Auto => "auto",
            Self::Exhaustive => "exhaustive",
            Self::Heuristic => "heuristic",
            Self::HeuristicRoofDual => "roof-dual",
        })
    }
}

pub const AUTO_EXHAUSTIVE_MAX_N: usize = 12;

impl BoundMethod {
    pub fn resolve(self, n: usize) -> BoundMethod {
        match self {
            BoundMethod::Auto if n <= AUTO_EXHAUSTIVE_MAX_N => BoundMethod::Exhaustive,
            BoundMethod::Auto => BoundMethod::HeuristicRoofDual,
            m => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundConfig {
    pub method: BoundMethod,
    pub restarts: usize,
    pub seed: u64,
    pub roof_precision: f64,
    pub enumeration_limit: usize,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            method: BoundMethod::Auto,
            restarts: 10,
            seed: 0,
            roof_precision: DEFAULT_ROOF_PRECISION,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

/// Bounds for every assignment of `pair` using the configured method.
pub fn compute_bounds(q: &QuboInstance, pair: PinnedPair, cfg: &BoundConfig) -> Result<SubspaceBoundSet> {
    pair.check(q.n())?;
    let method = cfg.method.resolve(q.n());
    if method == BoundMethod::Exhaustive {
        return subspace_bounds_exhaustive_with_limit(q, pair, cfg.enumeration_limit);
    }
    let mut bounds = Vec::new();
    for (idx, asg) in pair.assignments().into_iter().enumerate() {
        let seed = cfg.seed.wrapping_add(idx as u64);
        let upper = upper_bound_local_search(q, pair, asg, cfg.restarts, seed)?;
        let (lower, lower_method) = if method == BoundMethod::HeuristicRoofDual {
            (lower_bound_roof_dual_with_precision(q, pair, asg, cfg.roof_precision)?, BoundKind::RoofDual)
        } else {
            (lower_bound_negative_sum(q, pair, asg)?, BoundKind::NegativeSum)
        };
        bounds.push(SubspaceBound {
            assignment: asg,
            lower,
            upper,
            lower_method,
            upper_method: BoundKind::LocalSearch,
        });
    }
    Ok(SubspaceBoundSet { pair, bounds })
}

/// Exact subspace minima, reported as both lower and upper bound.
pub fn subspace_bounds_exhaustive(q: &QuboInstance, pair: PinnedPair) -> Result<SubspaceBoundSet> {
    subspace_bounds_exhaustive_with_limit(q, pair, DEFAULT_ENUMERATION_LIMIT)
}

pub fn subspace_bounds_exhaustive_with_limit(
    q: &QuboInstance,
    pair: PinnedPair,
    limit: usize,
) -> Result<SubspaceBoundSet> {
    pair.check(q.n())?;
    check_limit(q.n(), limit)?;
    // One pass over all vectors, bucketed by (x_k, x_l).
    let mut best = [(f64::INFINITY, 0u64); 4];
    for_each_energy(q, limit, |m, e| {
        let bucket = (((m >> pair.k) & 1) << 1 | ((m >> pair.l) & 1)) as usize;
        if e < best[bucket].0 {
            best[bucket] = (e, m);
        }
    })?;
    let best = best.map(|(_, m)| q.energy_mask(m));
    let bounds = pair
        .assignments()
        .into_iter()
        .map(|asg| {
            let y = best[(asg.a as usize) << 1 | asg.b as usize];
            SubspaceBound {
                assignment: asg,
                lower: y,
                upper: y,
                lower_method: BoundKind::Exact,
                upper_method: BoundKind::Exact,
            }
        })
        .collect();
    Ok(SubspaceBoundSet { pair, bounds })
}

/// Energy of the zero vector with the pins applied.
pub fn upper_bound_zero_vector(q: &QuboInstance, pair: PinnedPair, asg: Assignment) -> Result<f64> {
    pair.check(q.n())?;
    Ok(q.energy_unchecked(&pair.filled(q.n(), asg, 0)))
}

/// Best local optimum over `restarts` descents in the pinned subspace. The
/// first start is the pinned zero vector, the rest are uniformly random.
pub fn upper_bound_local_search(
    q: &QuboInstance,
    pair: PinnedPair,
    asg: Assignment,
    restarts: usize,
    seed: u64,
) -> Result<f64> {
    pair.check(q.n())?;
    if restarts == 0 {
        return Err(QuboError::InvalidArgument("restarts must be at least 1".into()));
    }
    let n = q.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for r in 0..restarts {
        let mut start = pair.filled(n, asg, 0);
        if r > 0 {
            for (i, v) in start.iter_mut().enumerate() {
                if i != pair.k && i != pair.l {
                    *v = rng.random_range(0..=1u8);
                }
            }
        }
        let x = local_search(q, &start, Some((pair, asg)))?;
        best = best.min(q.energy_unchecked(&x));
    }
    Ok(best)
}

/// `f_{Q^-}` at the vector of ones with the pins applied, where `Q^-` keeps
/// only negative coefficients.
pub fn lower_bound_negative_sum(q: &QuboInstance, pair: PinnedPair, asg: Assignment) -> Result<f64> {
    pair.check(q.n())?;
    Ok(q.negative_part().energy_unchecked(&pair.filled(q.n(), asg, 1)))
}

pub fn lower_bound_roof_dual(q: &QuboInstance, pair: PinnedPair, asg: Assignment) -> Result<f64> {
    lower_bound_roof_dual_with_precision(q, pair, asg, DEFAULT_ROOF_PRECISION)
}

/// Roof-dual bound of the reduced problem over the free variables. Never
/// weaker than [`lower_bound_negative_sum`], which is returned whenever the
/// quantized flow bound falls below it.
pub fn lower_bound_roof_dual_with_precision(
    q: &QuboInstance,
    pair: PinnedPair,
    asg: Assignment,
    precision: f64,
) -> Result<f64> {
    pair.check(q.n())?;
    if !(precision > 0.0 && precision.is_finite()) {
        return Err(QuboError::InvalidArgument(format!("roof-dual precision must be positive, got {precision}")));
    }
    let reduced = ReducedProblem::fix(q, &pair.pins(asg));
    let roof = roof_dual_bound(&reduced, precision);
    Ok(roof.max(lower_bound_negative_sum(q, pair, asg)?))
}

/// `[y-, y+]` from the bound set. Off the diagonal
/// `y- = min(0, min(^y00, ^y01, ^y10) - v y11)` and
/// `y+ = max(0, min(v y00, v y01, v y10) - ^y11)`; on the diagonal the single
/// assignments `0` and `1` take the roles of the "other" and `11` subspaces.
pub fn preservation_interval(set: &SubspaceBoundSet) -> PreservationInterval {
    let target = if set.pair.is_diagonal() { Assignment::single(1) } else { Assignment::new(1, 1) };
    let others = set.bounds.iter().filter(|b| b.assignment != target);
    let (min_upper, min_lower) =
        others.fold((f64::INFINITY, f64::INFINITY), |(u, l), b| (u.min(b.upper), l.min(b.lower)));
    let t = set.get(target).expect("bound set lacks the 11 assignment");
    PreservationInterval { lo: (min_upper - t.lower).min(0.0), hi: (min_lower - t.upper).max(0.0) }
}

/// [`preservation_interval`] with one side removed when the bounds decide
/// whether the `11` subspace holds the optimum. If `11` is certified
/// non-optimal, raising the entry only lifts non-optimal vectors, so
/// `y+ = +inf`; if it is certified to hold every optimum, lowering the entry
/// shifts all of them equally, so `y- = -inf`.
pub fn widened_interval(set: &SubspaceBoundSet) -> PreservationInterval {
    let mut iv = preservation_interval(set);
    let target = if set.pair.is_diagonal() { Assignment::single(1) } else { Assignment::new(1, 1) };
    if non_optimal_assignments(set).contains(&target) {
        iv.hi = f64::INFINITY;
    }
    if variable_fixing_check(set) == Some(target) {
        iv.lo = f64::NEG_INFINITY;
    }
    iv
}

/// An assignment certified optimal: its upper bound lies strictly below the
/// lower bounds of every other assignment, so all global minimizers take it.
pub fn variable_fixing_check(set: &SubspaceBoundSet) -> Option<Assignment> {
    set.bounds
        .iter()
        .find(|b| set.bounds.iter().filter(|o| o.assignment != b.assignment).all(|o| b.upper < o.lower))
        .map(|b| b.assignment)
}

/// Assignments certified non-optimal: their lower bound exceeds the smallest
/// upper bound among the other assignments.
pub fn non_optimal_assignments(set: &SubspaceBoundSet) -> Vec<Assignment> {
    set.bounds
        .iter()
        .filter(|b| {
            let other_min = set
                .bounds
                .iter()
                .filter(|o| o.assignment != b.assignment)
                .map(|o| o.upper)
                .fold(f64::INFINITY, f64::min);
            b.lower > other_min
        })
        .map(|b| b.assignment)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{brute_force_min, brute_force_minima, energy_tolerance};
    use crate::test_support::{example_two, random_int_qubo, random_qubo};

    fn exact(q: &QuboInstance, pair: PinnedPair) -> SubspaceBoundSet {
        subspace_bounds_exhaustive(q, pair).unwrap()
    }

    fn all_pairs(n: usize) -> Vec<PinnedPair> {
        (0..n).flat_map(|k| (k..n).map(move |l| PinnedPair { k, l })).collect()
    }

    #[test]
    fn example_two_exact_bounds() {
        let set = exact(&example_two(), PinnedPair::new(1, 2).unwrap());
        // True subspace minima; x_0 = 1 lowers the 00 and 10 subspaces.
        let expected = [(0, 0, -1.0), (0, 1, -1.5), (1, 0, -0.2), (1, 1, -1.9)];
        for (a, b, y) in expected {
            let bound = set.get(Assignment::new(a, b)).unwrap();
            assert!((bound.lower - y).abs() < 1e-12 && bound.lower == bound.upper, "{a}{b}: {bound:?}");
        }
        let iv = preservation_interval(&set);
        assert!((iv.hi - 0.4).abs() < 1e-12);
        // With x_0 left at zero the four energies are 0, -1.5, 0.4, -1.9.
        let pair = PinnedPair::new(1, 2).unwrap();
        let zero: Vec<f64> =
            pair.assignments().into_iter().map(|a| upper_bound_zero_vector(&example_two(), pair, a).unwrap()).collect();
        assert_eq!(zero, vec![0.0, -1.5, 0.4, -1.9]);
        assert_eq!(variable_fixing_check(&set), Some(Assignment::new(1, 1)));
        let non_opt = non_optimal_assignments(&set);
        assert_eq!(non_opt.len(), 3);
    }

    #[test]
    fn zero_instance_bounds_vanish() {
        let q = QuboInstance::zeros(4).unwrap();
        for pair in all_pairs(4) {
            assert!(exact(&q, pair).bounds.iter().all(|b| b.lower == 0.0 && b.upper == 0.0));
            let iv = preservation_interval(&exact(&q, pair));
            assert_eq!((iv.lo, iv.hi), (0.0, 0.0));
            assert_eq!(variable_fixing_check(&exact(&q, pair)), None);
        }
    }

    #[test]
    fn subspace_minima_cover_the_global_minimum() {
        for seed in 0..10 {
            let q = random_qubo(6, seed);
            let global = brute_force_min(&q, 24).unwrap();
            for pair in all_pairs(6) {
                let set = exact(&q, pair);
                let m = set.bounds.iter().map(|b| b.lower).fold(f64::INFINITY, f64::min);
                assert_eq!(m, global);
            }
        }
    }

    #[test]
    fn cheap_bounds_hand_values() {
        let q = example_two();
        let p23 = PinnedPair::new(1, 2).unwrap();
        let p12 = PinnedPair::new(0, 1).unwrap();
        assert_eq!(upper_bound_zero_vector(&q, p23, Assignment::new(0, 0)).unwrap(), 0.0);
        assert!((upper_bound_zero_vector(&q, p23, Assignment::new(1, 1)).unwrap() + 1.9).abs() < 1e-12);
        assert_eq!(upper_bound_zero_vector(&q, p12, Assignment::new(1, 0)).unwrap(), -1.0);
        assert!((lower_bound_negative_sum(&q, p23, Assignment::new(1, 1)).unwrap() + 3.3).abs() < 1e-12);
        let pos = QuboInstance::from_dense(&[[1.0, 2.0], [0.0, 3.0]]).unwrap();
        let p = PinnedPair::new(0, 0).unwrap();
        assert_eq!(lower_bound_negative_sum(&pos, p, Assignment::single(0)).unwrap(), 0.0);
    }

    #[test]
    fn local_search_without_free_variables_is_exact() {
        let q = QuboInstance::from_dense(&[[-1.0, 3.0], [0.0, -2.0]]).unwrap();
        let pair = PinnedPair::new(0, 1).unwrap();
        for asg in pair.assignments() {
            let ls = upper_bound_local_search(&q, pair, asg, 3, 7).unwrap();
            assert_eq!(ls, q.energy(&[asg.a, asg.b]).unwrap());
        }
        assert!(upper_bound_local_search(&q, pair, Assignment::new(0, 0), 0, 7).is_err());
    }

    #[test]
    fn local_search_is_reproducible() {
        let q = random_qubo(10, 4);
        let pair = PinnedPair::new(2, 7).unwrap();
        let asg = Assignment::new(1, 0);
        let a = upper_bound_local_search(&q, pair, asg, 10, 99).unwrap();
        let b = upper_bound_local_search(&q, pair, asg, 10, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn roof_dual_trivial_and_submodular_cases() {
        // Nonnegative reduced problem: the bound is the constant from the pins.
        let q = QuboInstance::from_dense(&[[1.0, 2.0, 0.5], [0.0, 3.0, 1.0], [0.0, 0.0, 0.25]]).unwrap();
        let p = PinnedPair::new(0, 0).unwrap();
        assert!((lower_bound_roof_dual(&q, p, Assignment::single(1)).unwrap() - 1.0).abs() < 1e-5);
        assert!(lower_bound_roof_dual(&q, p, Assignment::single(0)).unwrap().abs() < 1e-5);

        // Submodular: all off-diagonals nonpositive, roof duality is exact.
        for seed in 0..30 {
            let mut q = random_qubo(8, seed);
            for (i, j, v) in q.clone().upper_entries().filter(|&(i, j, _)| i < j) {
                q.set(i, j, -v.abs()).unwrap();
            }
            for pair in [PinnedPair { k: 0, l: 3 }, PinnedPair { k: 5, l: 5 }] {
                let set = exact(&q, pair);
                for asg in pair.assignments() {
                    let roof = lower_bound_roof_dual(&q, pair, asg).unwrap();
                    let y = set.lower(asg);
                    assert!(roof <= y + 1e-9 && roof >= y - 1e-4, "seed {seed}: {roof} vs {y}");
                }
            }
        }
    }

    #[test]
    fn heuristic_bounds_sandwich_exact_minima() {
        for seed in 0..40 {
            let q = if seed % 2 == 0 { random_qubo(8, seed) } else { random_int_qubo(8, seed, 3) };
            for pair in all_pairs(8) {
                let set = exact(&q, pair);
                for asg in pair.assignments() {
                    let y = set.lower(asg);
                    let neg = lower_bound_negative_sum(&q, pair, asg).unwrap();
                    let roof = lower_bound_roof_dual(&q, pair, asg).unwrap();
                    let ls = upper_bound_local_search(&q, pair, asg, 10, seed).unwrap();
                    let zero = upper_bound_zero_vector(&q, pair, asg).unwrap();
                    assert!(
                        neg <= roof && roof <= y + 1e-12 && y <= ls + 1e-12 && ls <= zero,
                        "seed {seed} {pair} {asg}: {neg} {roof} {y} {ls} {zero}"
                    );
                }
            }
        }
    }

    #[test]
    fn interval_applies_safely_with_exact_bounds() {
        for seed in 0..25 {
            let q = random_int_qubo(7, seed, 4);
            let minima = brute_force_minima(&q).unwrap();
            for pair in all_pairs(7) {
                let iv = preservation_interval(&exact(&q, pair));
                assert!(iv.lo <= 0.0 && iv.hi >= 0.0);
                for w in [iv.lo, iv.lo / 2.0, iv.hi / 3.0, iv.hi] {
                    let mut q2 = q.clone();
                    q2.add(pair.k, pair.l, w).unwrap();
                    // At least one original optimum remains optimal.
                    let m2 = brute_force_min(&q2, 24).unwrap();
                    let tol = energy_tolerance(&q2).max(1e-9);
                    assert!(
                        minima.minimizers.iter().any(|&m| q2.energy_mask(m) <= m2 + tol),
                        "seed {seed} {pair} w={w}"
                    );
                }
            }
        }
    }

    #[test]
    fn widened_sides_apply_safely() {
        let mut widened = 0;
        for seed in 0..25 {
            let q = random_qubo(7, seed);
            let minima = brute_force_minima(&q).unwrap();
            for pair in all_pairs(7) {
                let set = exact(&q, pair);
                let (base, iv) = (preservation_interval(&set), widened_interval(&set));
                assert!(iv.lo <= base.lo && iv.hi >= base.hi);
                let mut probes = vec![];
                if iv.hi.is_infinite() {
                    probes.extend([base.hi + 1.0, base.hi + 100.0]);
                }
                if iv.lo.is_infinite() {
                    probes.extend([base.lo - 1.0, base.lo - 100.0]);
                }
                widened += probes.len();
                for w in probes {
                    let mut q2 = q.clone();
                    q2.add(pair.k, pair.l, w).unwrap();
                    let m2 = brute_force_min(&q2, 24).unwrap();
                    let tol = energy_tolerance(&q2).max(1e-9);
                    assert!(
                        minima.minimizers.iter().any(|&m| q2.energy_mask(m) <= m2 + tol),
                        "seed {seed} {pair} w={w}"
                    );
                }
            }
        }
        assert!(widened > 0);
    }

    #[test]
    fn loose_intervals_nest_inside_exact_ones() {
        for seed in 0..15 {
            let q = random_qubo(8, seed);
            for pair in all_pairs(8) {
                let ex = preservation_interval(&exact(&q, pair));
                for method in [BoundMethod::Heuristic, BoundMethod::HeuristicRoofDual] {
                    let cfg = BoundConfig { method, seed, ..BoundConfig::default() };
                    let loose = preservation_interval(&compute_bounds(&q, pair, &cfg).unwrap());
                    assert!(loose.lo >= ex.lo - 1e-12 && loose.hi <= ex.hi + 1e-12);
                }
            }
        }
    }

    #[test]
    fn certified_fixings_agree_with_enumeration() {
        let mut certified = 0;
        for seed in 0..40 {
            let q = random_qubo(8, seed);
            let minima = brute_force_minima(&q).unwrap();
            for pair in all_pairs(8) {
                for method in [BoundMethod::Exhaustive, BoundMethod::HeuristicRoofDual] {
                    let cfg = BoundConfig { method, seed, ..BoundConfig::default() };
                    let set = compute_bounds(&q, pair, &cfg).unwrap();
                    if let Some(asg) = variable_fixing_check(&set) {
                        certified += 1;
                        for x in minima.minimizer_vectors() {
                            assert_eq!((x[pair.k], x[pair.l]), (asg.a, asg.b));
                        }
                    }
                    for asg in non_optimal_assignments(&set) {
                        for x in minima.minimizer_vectors() {
                            assert_ne!((x[pair.k], x[pair.l]), (asg.a, asg.b));
                        }
                    }
                }
            }
        }
        assert!(certified > 0);
    }

    #[test]
    fn diagonal_interval_uses_single_assignments() {
        let q = example_two();
        let set = exact(&q, PinnedPair::new(2, 2).unwrap());
        assert_eq!(set.bounds.len(), 2);
        // x_3 = 0: best is -1 at (1,0,0); x_3 = 1: best -1.9.
        let iv = preservation_interval(&set);
        assert!((iv.hi - 0.9).abs() < 1e-12);
        assert_eq!(iv.lo, 0.0);
    }

    #[test]
    fn pair_validation() {
        assert!(PinnedPair::new(2, 1).is_err());
        let q = example_two();
        assert!(subspace_bounds_exhaustive(&q, PinnedPair { k: 1, l: 3 }).is_err());
        assert!(subspace_bounds_exhaustive_with_limit(&q, PinnedPair { k: 0, l: 1 }, 2).is_err());
    }

    #[test]
    fn bound_set_serializes_with_method_tags() {
        let set = exact(&example_two(), PinnedPair::new(1, 2).unwrap());
        let json = serde_json::to_string(&set).unwrap();
        assert!(json.contains("\"lower_method\":\"exact\""));
        let back: SubspaceBoundSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, set);
    }
}
