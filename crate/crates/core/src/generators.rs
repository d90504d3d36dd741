//! Instance families: uniform random, SubsetSum, and binary clustering.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Triangular};
use serde::{Deserialize, Serialize};

use crate::error::{QuboError, Result};
use crate::qubo::{round_half_up, QuboInstance};

/// Upper-triangle entries i.i.d. uniform on `[-0.5, 0.5]`.
pub fn gen_uniform(n: usize, seed: u64) -> Result<QuboInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = QuboInstance::zeros(n)?;
    for i in 0..n {
        for j in i..n {
            q.set(i, j, rng.random_range(-0.5..=0.5))?;
        }
    }
    Ok(q)
}

/// Values `a_1..a_n`, a target `T`, and the indices of a subset summing to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetSumProblem {
    pub values: Vec<u64>,
    pub target: u64,
    pub planted: Vec<usize>,
}

/// Sampled values are capped so that every coefficient and energy of the
/// resulting QUBO stays an exactly representable integer.
pub const SUBSETSUM_MAX_VALUE: u64 = 1 << 22;

impl SubsetSumProblem {
    pub fn planted_vector(&self) -> Vec<u8> {
        let mut x = vec![0; self.values.len()];
        for &i in &self.planted {
            x[i] = 1;
        }
        x
    }

    pub fn is_consistent(&self) -> bool {
        self.planted.iter().map(|&i| self.values[i]).sum::<u64>() == self.target
    }
}

/// `a_i = |round(10 Z)|` with `Z` standard Cauchy (resampled above
/// [`SUBSETSUM_MAX_VALUE`]); `k = round(U)` summands with `U` triangular on
/// `[n/5, 4n/5]` with mode `n/2`, clamped to `[1, n - 1]`.
pub fn gen_subsetsum(n: usize, seed: u64) -> Result<SubsetSumProblem> {
    if n < 2 {
        return Err(QuboError::InvalidArgument("SubsetSum needs at least 2 values".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<u64> = (0..n).map(|_| sample_value(&mut rng)).collect();
    let nf = n as f64;
    let tri = Triangular::new(nf / 5.0, 4.0 * nf / 5.0, nf / 2.0).expect("valid triangular parameters");
    let k = (round_half_up(tri.sample(&mut rng)) as usize).clamp(1, n - 1);
    let mut planted = rand::seq::index::sample(&mut rng, n, k).into_vec();
    planted.sort_unstable();
    let target = planted.iter().map(|&i| values[i]).sum();
    Ok(SubsetSumProblem { values, target, planted })
}

fn sample_value(rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let u: f64 = rng.random();
        if u == 0.0 {
            continue;
        }
        let z = (PI * (u - 0.5)).tan();
        let v = round_half_up(10.0 * z).abs();
        if v <= SUBSETSUM_MAX_VALUE as f64 {
            return v as u64;
        }
    }
}

/// `Q_ii = a_i^2 - 2 T a_i`, `Q_ij = 2 a_i a_j`, so that
/// `f(x) = (sum a_i x_i - T)^2 - T^2`.
pub fn subsetsum_to_qubo(p: &SubsetSumProblem) -> Result<QuboInstance> {
    let n = p.values.len();
    let t = p.target as f64;
    let a: Vec<f64> = p.values.iter().map(|&v| v as f64).collect();
    let mut q = QuboInstance::zeros(n)?;
    for i in 0..n {
        q.set(i, i, a[i] * a[i] - 2.0 * t * a[i])?;
        for j in (i + 1)..n {
            q.set(i, j, 2.0 * a[i] * a[j])?;
        }
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringDataset {
    pub points: Vec<[f64; 2]>,
    pub outlier_indices: Vec<usize>,
}

impl ClusteringDataset {
    /// CSV with columns `x, y, outlier`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "outlier"])?;
        for (i, p) in self.points.iter().enumerate() {
            let flag = if self.outlier_indices.contains(&i) { "1" } else { "0" };
            w.write_record([p[0].to_string(), p[1].to_string(), flag.to_string()])?;
        }
        w.flush().map_err(|e| QuboError::io("<csv>", e))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BinClusteringConfig {
    /// Total number of points; the first half forms the left cluster.
    pub points: usize,
    /// Horizontal offset of each cluster from the origin.
    pub shift: f64,
    pub outlier_scale: f64,
    pub outliers: Vec<usize>,
}

impl Default for BinClusteringConfig {
    fn default() -> Self {
        Self { points: 20, shift: 4.0, outlier_scale: 20.0, outliers: vec![0, 18] }
    }
}

/// The default 20-point dataset with two outliers and its 19-variable QUBO.
pub fn gen_binclustering(seed: u64) -> Result<(ClusteringDataset, QuboInstance)> {
    gen_binclustering_with(&BinClusteringConfig::default(), seed)
}

pub fn gen_binclustering_with(cfg: &BinClusteringConfig, seed: u64) -> Result<(ClusteringDataset, QuboInstance)> {
    if cfg.points < 2 {
        return Err(QuboError::InvalidArgument("clustering needs at least 2 points".into()));
    }
    if let Some(&bad) = cfg.outliers.iter().find(|&&i| i >= cfg.points) {
        return Err(QuboError::InvalidArgument(format!("outlier index {bad} out of range")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = cfg.points / 2;
    let mut points: Vec<[f64; 2]> = (0..cfg.points)
        .map(|i| {
            let x: f64 = StandardNormal.sample(&mut rng);
            let y: f64 = StandardNormal.sample(&mut rng);
            let dx = if i < half { -cfg.shift } else { cfg.shift };
            [x + dx, y]
        })
        .collect();
    for &i in &cfg.outliers {
        points[i] = [points[i][0] * cfg.outlier_scale, points[i][1] * cfg.outlier_scale];
    }
    let data = ClusteringDataset { points, outlier_indices: cfg.outliers.clone() };
    let q = clustering_qubo(&data.points)?;
    Ok((data, q))
}

/// 2-means with a linear kernel. With centred points and Gram matrix `G`,
/// the partition `s in {-1, 1}^N` maximising `s^T G s` separates the
/// clusters; substituting `s = 2x - 1` into `-s^T G s` gives
/// `Q_uu = 4 sum_{v != u} G_uv` and `Q_uv = -8 G_uv`. The last point is
/// fixed to `x = 0`, which removes the mirror solution, leaving `N - 1`
/// variables.
pub fn clustering_qubo(points: &[[f64; 2]]) -> Result<QuboInstance> {
    let count = points.len();
    if count < 2 {
        return Err(QuboError::InvalidArgument("clustering needs at least 2 points".into()));
    }
    let mean = points.iter().fold([0.0, 0.0], |m, p| [m[0] + p[0], m[1] + p[1]]);
    let mean = [mean[0] / count as f64, mean[1] / count as f64];
    let c: Vec<[f64; 2]> = points.iter().map(|p| [p[0] - mean[0], p[1] - mean[1]]).collect();
    let gram = |u: usize, v: usize| c[u][0] * c[v][0] + c[u][1] * c[v][1];
    let n = count - 1;
    let mut q = QuboInstance::zeros(n)?;
    for u in 0..n {
        let row: f64 = (0..count).filter(|&v| v != u).map(|v| gram(u, v)).sum();
        q.set(u, u, 4.0 * row)?;
        for v in (u + 1)..n {
            q.set(u, v, -8.0 * gram(u, v))?;
        }
    }
    Ok(q)
}
