//! Evaluation metrics: rankings, Kendall distance, range and uniqueness ratios,
//! and optimum correctness.

use serde::{Deserialize, Serialize};

use crate::enumerate::{brute_force_min, brute_force_minima_with_limit, energy_tolerance, DEFAULT_ENUMERATION_LIMIT};
use crate::error::{QuboError, Result};
use crate::qubo::QuboInstance;
use crate::range::{diff_stats, entry_ordering};

/// Largest dimension for which all `2^n` vectors are ranked.
pub const MAX_RANKING_N: usize = 16;

/// A permutation of items `0..K`; `order[r]` is the item at rank `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranking {
    order: Vec<usize>,
}

impl Ranking {
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &item in &order {
            if item >= order.len() || std::mem::replace(&mut seen[item], true) {
                return Err(QuboError::InvalidArgument("ranking is not a permutation".into()));
            }
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Rank of every item.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (r, &item) in self.order.iter().enumerate() {
            pos[item] = r;
        }
        pos
    }
}

/// Lexicographic index of a vector given as a mask with bit `i` = `x_i`;
/// `x_1` is the most significant digit.
fn lexicographic_index(mask: u64, n: usize) -> usize {
    (mask.reverse_bits() >> (64 - n)) as usize
}

/// All `2^n` vectors, identified by lexicographic index, sorted by energy.
/// Equal energies keep lexicographic order.
pub fn induced_ranking(q: &QuboInstance) -> Result<Ranking> {
    let n = q.n();
    if n > MAX_RANKING_N {
        return Err(QuboError::EnumerationLimit { n, limit: MAX_RANKING_N });
    }
    let mut items: Vec<(f64, usize)> = (0..1u64 << n).map(|m| (q.energy_mask(m), lexicographic_index(m, n))).collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(Ranking { order: items.into_iter().map(|(_, i)| i).collect() })
}

/// Fraction of item pairs ordered differently by the two rankings: 0 for
/// identical rankings, 1 for reversed ones.
pub fn kendall_tau(p: &Ranking, p2: &Ranking) -> Result<f64> {
    if p.len() != p2.len() {
        return Err(QuboError::DimensionMismatch { expected: p.len(), got: p2.len() });
    }
    let k = p.len();
    if k < 2 {
        return Err(QuboError::InvalidArgument("rankings need at least two items".into()));
    }
    let pos2 = p2.positions();
    let mut seq: Vec<usize> = p.order.iter().map(|&item| pos2[item]).collect();
    let inversions = count_inversions(&mut seq);
    Ok(inversions as f64 / (k as f64 * (k - 1) as f64 / 2.0))
}

/// Merge-sort inversion count; sorts `v` in place.
fn count_inversions(v: &mut [usize]) -> u64 {
    let len = v.len();
    if len < 2 {
        return 0;
    }
    let mid = len / 2;
    let mut count = count_inversions(&mut v[..mid]) + count_inversions(&mut v[mid..]);
    let mut merged = Vec::with_capacity(len);
    let (mut i, mut j) = (0, mid);
    while i < mid && j < len {
        if v[i] <= v[j] {
            merged.push(v[i]);
            i += 1;
        } else {
            merged.push(v[j]);
            count += (mid - i) as u64;
            j += 1;
        }
    }
    merged.extend_from_slice(&v[i..mid]);
    merged.extend_from_slice(&v[j..]);
    v.copy_from_slice(&merged);
    count
}

/// Kendall distance between the entry orderings of two instances, with the
/// `n^2` matrix positions as items.
pub fn weight_ordering_distance(q1: &QuboInstance, q2: &QuboInstance) -> Result<f64> {
    if q1.n() != q2.n() {
        return Err(QuboError::DimensionMismatch { expected: q1.n(), got: q2.n() });
    }
    let a = Ranking { order: entry_ordering(q1).positions() };
    let b = Ranking { order: entry_ordering(q2).positions() };
    if a.len() < 2 {
        return Ok(0.0);
    }
    kendall_tau(&a, &b)
}

pub fn unique_weight_ratio(current: &QuboInstance, original: &QuboInstance) -> Result<f64> {
    if current.n() != original.n() {
        return Err(QuboError::DimensionMismatch { expected: original.n(), got: current.n() });
    }
    Ok(diff_stats(current).distinct_count() as f64 / diff_stats(original).distinct_count() as f64)
}

/// `DR(current) / DR(original)`.
pub fn dr_ratio(current: &QuboInstance, original: &QuboInstance) -> Result<f64> {
    let base = diff_stats(original);
    if base.degenerate || base.dr_bits == 0.0 {
        return Err(QuboError::Degenerate);
    }
    Ok(diff_stats(current).dr_bits / base.dr_bits)
}

/// Whether the first minimizer of `rounded` (lowest mask) is a global
/// minimizer of `original`.
pub fn optimum_correctness(rounded: &QuboInstance, original: &QuboInstance) -> Result<bool> {
    if rounded.n() != original.n() {
        return Err(QuboError::DimensionMismatch { expected: original.n(), got: rounded.n() });
    }
    let v_star = brute_force_min(original, DEFAULT_ENUMERATION_LIMIT)?;
    let x = brute_force_minima_with_limit(rounded, DEFAULT_ENUMERATION_LIMIT)?.minimizers[0];
    Ok(original.energy_mask(x) <= v_star + energy_tolerance(original))
}

/// `|(v* - v) / v*|`.
pub fn relative_deviation(v: f64, v_star: f64) -> Result<f64> {
    if v_star == 0.0 {
        return Err(QuboError::ZeroReference);
    }
    Ok(((v_star - v) / v_star).abs())
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::enumerate::spectral_gap;
    use crate::test_support::{example_one, random_qubo};

    fn brute_kendall(a: &[usize], b: &[usize]) -> f64 {
        let (pa, pb) = (Ranking { order: a.to_vec() }.positions(), Ranking { order: b.to_vec() }.positions());
        let k = a.len();
        let mut d = 0;
        for i in 0..k {
            for j in (i + 1)..k {
                if (pa[i] < pa[j]) != (pb[i] < pb[j]) {
                    d += 1;
                }
            }
        }
        d as f64 / (k * (k - 1) / 2) as f64
    }

    #[test]
    fn kendall_examples() {
        let id = Ranking::from_order(vec![0, 1, 2, 3]).unwrap();
        let rev = Ranking::from_order(vec![3, 2, 1, 0]).unwrap();
        let swap = Ranking::from_order(vec![0, 2, 1, 3]).unwrap();
        assert_eq!(kendall_tau(&id, &id).unwrap(), 0.0);
        assert_eq!(kendall_tau(&id, &rev).unwrap(), 1.0);
        assert_eq!(kendall_tau(&id, &swap).unwrap(), 1.0 / 6.0);
        assert!(kendall_tau(&id, &Ranking::from_order(vec![0, 1]).unwrap()).is_err());
        assert!(Ranking::from_order(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn merge_count_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 2..40 {
            let mut a: Vec<usize> = (0..k).collect();
            let mut b = a.clone();
            a.shuffle(&mut rng);
            b.shuffle(&mut rng);
            let got = kendall_tau(&Ranking { order: a.clone() }, &Ranking { order: b.clone() }).unwrap();
            assert!((got - brute_kendall(&a, &b)).abs() < 1e-15);
        }
    }

    #[test]
    fn rankings_of_small_instances() {
        let z = QuboInstance::zeros(3).unwrap();
        assert_eq!(induced_ranking(&z).unwrap().order(), &[0, 1, 2, 3, 4, 5, 6, 7]);
        let q = QuboInstance::from_dense(&[[-1.0]]).unwrap();
        assert_eq!(induced_ranking(&q).unwrap().order(), &[1, 0]);
        // x_1 is the most significant digit: (1, 0) has index 2.
        let q = QuboInstance::from_dense(&[[-1.0, 0.0], [0.0, 0.0]]).unwrap();
        assert_eq!(induced_ranking(&q).unwrap().order(), &[2, 3, 0, 1]);
        assert!(induced_ranking(&QuboInstance::zeros(17).unwrap()).is_err());
    }

    #[test]
    fn ranking_is_scale_invariant() {
        for seed in 0..5 {
            let q = random_qubo(8, seed);
            assert_eq!(induced_ranking(&q).unwrap(), induced_ranking(&q.scale(3.0).unwrap()).unwrap());
        }
    }

    #[test]
    fn weight_ordering_examples() {
        let q = random_qubo(4, 2);
        assert_eq!(weight_ordering_distance(&q, &q).unwrap(), 0.0);
        let mut swapped = q.clone();
        swapped.set(0, 1, q.get(2, 3)).unwrap();
        swapped.set(2, 3, q.get(0, 1)).unwrap();
        assert!(weight_ordering_distance(&q, &swapped).unwrap() > 0.0);
        assert!(weight_ordering_distance(&q, &random_qubo(3, 2)).is_err());
    }

    #[test]
    fn ratio_metrics() {
        let q = random_qubo(4, 2);
        assert_eq!(unique_weight_ratio(&q, &q).unwrap(), 1.0);
        assert_eq!(dr_ratio(&q, &q).unwrap(), 1.0);
        assert!(dr_ratio(&q, &QuboInstance::zeros(4).unwrap()).is_err());
    }

    #[test]
    fn optimum_correctness_examples() {
        let q = random_qubo(6, 9);
        assert!(optimum_correctness(&q, &q).unwrap());
        let (big, small) = example_one();
        assert!(optimum_correctness(&small, &big).unwrap());
        // Penalise the unique minimizer so another vector wins.
        let x = brute_force_minima_with_limit(&q, 24).unwrap().minimizer_vectors().remove(0);
        let mut bad = q.clone();
        let i = x.iter().position(|&b| b == 1).unwrap();
        bad.add(i, i, 100.0).unwrap();
        assert!(!optimum_correctness(&bad, &q).unwrap());
    }

    #[test]
    fn rounding_above_safe_scale_is_correct() {
        for seed in 0..30 {
            let q = random_qubo(5, seed);
            let alpha = spectral_gap(&q).unwrap().alpha_star;
            for a in [alpha, 2.0 * alpha] {
                assert!(optimum_correctness(&q.scale(a).unwrap().round_entries(), &q).unwrap());
            }
        }
    }

    #[test]
    fn relative_deviation_examples() {
        assert_eq!(relative_deviation(-2.0, -2.0).unwrap(), 0.0);
        assert_eq!(relative_deviation(0.0, -2.0).unwrap(), 1.0);
        assert_eq!(relative_deviation(-1.0, -2.0).unwrap(), 0.5);
        assert!(matches!(relative_deviation(1.0, 0.0), Err(QuboError::ZeroReference)));
    }

    fn arb_perm(k: usize) -> impl Strategy<Value = Ranking> {
        Just((0..k).collect::<Vec<_>>()).prop_shuffle().prop_map(|order| Ranking { order })
    }

    proptest! {
        #[test]
        fn kendall_is_a_metric(k in 2usize..=64, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut perms = Vec::new();
            for _ in 0..3 {
                let mut p: Vec<usize> = (0..k).collect();
                p.shuffle(&mut rng);
                perms.push(Ranking { order: p });
            }
            let d = |a: &Ranking, b: &Ranking| kendall_tau(a, b).unwrap();
            let (a, b, c) = (&perms[0], &perms[1], &perms[2]);
            prop_assert!((0.0..=1.0).contains(&d(a, b)));
            prop_assert_eq!(d(a, b), d(b, a));
            prop_assert_eq!(d(a, a), 0.0);
            prop_assert!(d(a, c) <= d(a, b) + d(b, c) + 1e-12);
        }

        #[test]
        fn kendall_zero_iff_equal(a in arb_perm(8), b in arb_perm(8)) {
            prop_assert_eq!(kendall_tau(&a, &b).unwrap() == 0.0, a == b);
        }
    }
}
