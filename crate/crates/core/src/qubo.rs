//! Upper-triangular QUBO instances and the elementwise operations on them.
//!
//! A [`QuboInstance`] of dimension `n` stores all `n * n` positions densely;
//! positions below the diagonal are structurally zero and can never be set.
//! Indices are 0-based throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{QuboError, Result};

/// Upper-triangular coefficient matrix defining `f(x) = sum_{i <= j} Q_ij x_i x_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::QuboJson", into = "crate::io::QuboJson")]
pub struct QuboInstance {
    n: usize,
    coeffs: Vec<f64>,
}

impl QuboInstance {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QuboError::EmptyInstance);
        }
        Ok(Self { n, coeffs: vec![0.0; n * n] })
    }

    /// Builds an instance from a dense square matrix. Entries below the
    /// diagonal must be zero.
    pub fn from_dense<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut q = Self::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(QuboError::DimensionMismatch { expected: n, got: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if i > j {
                    if v != 0.0 {
                        return Err(QuboError::LowerTriangle { i, j });
                    }
                } else {
                    q.set(i, j, v)?;
                }
            }
        }
        Ok(q)
    }

    /// Builds an instance from `(i, j, value)` triples with `i <= j`.
    /// Later triples overwrite earlier ones at the same position.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut q = Self::zeros(n)?;
        for (i, j, v) in entries {
            q.set(i, j, v)?;
        }
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient at `(i, j)`; zero below the diagonal.
    ///
    /// Panics if either index is out of range.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        self.coeffs[i * self.n + j]
    }

    pub fn try_get(&self, i: usize, j: usize) -> Result<f64> {
        self.check_index(i, j)?;
        Ok(self.coeffs[i * self.n + j])
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        self.check_index(i, j)?;
        if i > j {
            return Err(QuboError::LowerTriangle { i, j });
        }
        if !value.is_finite() {
            return Err(QuboError::NonFinite { i, j });
        }
        self.coeffs[i * self.n + j] = value;
        Ok(())
    }

    /// Adds `w` to the coefficient at `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, w: f64) -> Result<()> {
        let v = self.try_get(i, j)? + w;
        self.set(i, j, v)
    }

    fn check_index(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(QuboError::IndexOutOfRange { i, j, n: self.n });
        }
        Ok(())
    }

    /// All `n * n` coefficients in row-major order, including the structural
    /// zeros below the diagonal.
    pub fn values(&self) -> &[f64] {
        &self.coeffs
    }

    /// Iterates over `(i, j, value)` for every upper-triangle position `i <= j`.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (i..n).map(move |j| (i, j, self.coeffs[i * n + j])))
    }

    /// Number of upper-triangle positions, `n (n + 1) / 2`.
    pub fn upper_len(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|v| v.abs()).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|v| v.fract() == 0.0)
    }

    /// Energy of a 0/1 vector.
    pub fn energy(&self, x: &[u8]) -> Result<f64> {
        if x.len() != self.n {
            return Err(QuboError::DimensionMismatch { expected: self.n, got: x.len() });
        }
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, &b)| b > 1) {
            return Err(QuboError::InvalidBit { index, value });
        }
        Ok(self.energy_unchecked(x))
    }

    pub(crate) fn energy_unchecked(&self, x: &[u8]) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for i in (0..n).filter(|&i| x[i] == 1) {
            let row = &self.coeffs[i * n..(i + 1) * n];
            for j in (i..n).filter(|&j| x[j] == 1) {
                total += row[j];
            }
        }
        total
    }

    /// Energy of the vector whose bit `i` is bit `i` of `mask`.
    pub fn energy_mask(&self, mask: u64) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let row = &self.coeffs[i * n..(i + 1) * n];
            let mut upper = mask >> i;
            while upper != 0 {
                let d = upper.trailing_zeros() as usize;
                upper &= upper - 1;
                total += row[i + d];
            }
        }
        total
    }

    /// `alpha * Q`. Minimizers are unchanged for any `alpha > 0`.
    pub fn scale(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(QuboError::InvalidScale(alpha));
        }
        Ok(self.map_values(|v| v * alpha))
    }

    /// Elementwise nearest-integer rounding, halves rounded up.
    pub fn round_entries(&self) -> Self {
        self.map_values(round_half_up)
    }

    /// `round(alpha * Q) - alpha * Q`, with every entry in `(-1/2, 1/2]`.
    pub fn rounding_error_matrix(&self, alpha: f64) -> Result<Self> {
        let scaled = self.scale(alpha)?;
        Ok(scaled.map_values(|v| round_half_up(v) - v))
    }

    /// Matrix keeping only the negative coefficients.
    pub fn negative_part(&self) -> Self {
        self.map_values(|v| v.min(0.0))
    }

    pub(crate) fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        let n = self.n;
        let coeffs =
            self.coeffs.iter().enumerate().map(|(idx, &v)| if idx / n > idx % n { 0.0 } else { f(v) }).collect();
        Self { n, coeffs }
    }

    /// Symmetric off-diagonal couplings `W_ij = Q_min(i,j),max(i,j)`, zero diagonal.
    pub(crate) fn symmetric_couplings(&self) -> Vec<f64> {
        let n = self.n;
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = self.coeffs[i * n + j];
                w[i * n + j] = v;
                w[j * n + i] = v;
            }
        }
        w
    }
}

/// Nearest integer with ties rounded towards positive infinity.
pub fn round_half_up(v: f64) -> f64 {
    let floor = v.floor();
    if v - floor >= 0.5 {
        floor + 1.0
    } else {
        floor
    }
}

pub fn mask_to_bits(mask: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((mask >> i) & 1) as u8).collect()
}

pub fn bits_to_mask(bits: &[u8]) -> u64 {
    bits.iter().enumerate().fold(0u64, |m, (i, &b)| if b == 1 { m | (1 << i) } else { m })
}

pub fn bitstring(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::example_two;

    #[test]
    fn energy_matches_hand_values() {
        let q = example_two();
        assert!((q.energy(&[0, 1, 1]).unwrap() + 1.9).abs() < 1e-12);
        assert_eq!(q.energy(&[0, 0, 0]).unwrap(), 0.0);
        let q1 = QuboInstance::from_dense(&[[-1.0, 14380.0], [0.0, -2.0]]).unwrap();
        assert_eq!(q1.energy(&[0, 1]).unwrap(), -2.0);
    }

    #[test]
    fn energy_rejects_bad_input() {
        let q = example_two();
        assert!(matches!(q.energy(&[0, 1]), Err(QuboError::DimensionMismatch { .. })));
        assert!(matches!(q.energy(&[0, 2, 1]), Err(QuboError::InvalidBit { index: 1, value: 2 })));
    }

    #[test]
    fn mask_energy_agrees_with_slice_energy() {
        let q = example_two();
        for mask in 0..8u64 {
            let bits = mask_to_bits(mask, 3);
            assert_eq!(q.energy_mask(mask), q.energy(&bits).unwrap());
            assert_eq!(bits_to_mask(&bits), mask);
        }
    }

    #[test]
    fn lower_triangle_is_structural() {
        let mut q = QuboInstance::zeros(3).unwrap();
        assert!(matches!(q.set(2, 1, 1.0), Err(QuboError::LowerTriangle { .. })));
        assert!(QuboInstance::from_dense(&[[1.0, 0.0], [2.0, 1.0]]).is_err());
        assert!(matches!(q.set(0, 1, f64::NAN), Err(QuboError::NonFinite { .. })));
        assert!(matches!(q.set(0, 3, 1.0), Err(QuboError::IndexOutOfRange { .. })));
        assert!(QuboInstance::zeros(0).is_err());
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(round_half_up(0.5), 1.0);
        assert_eq!(round_half_up(-0.5), 0.0);
        assert_eq!(round_half_up(1.4), 1.0);
        assert_eq!(round_half_up(-1.5), -1.0);
        assert_eq!(round_half_up(-1.6), -2.0);
    }

    #[test]
    fn scale_and_round_example_two() {
        let q = example_two();
        assert_eq!(q.scale(1.0).unwrap(), q);
        let r = q.scale(10.0).unwrap().round_entries();
        let expected = QuboInstance::from_dense(&[[-10.0, 4.0, 10.0], [0.0, 4.0, -8.0], [0.0, 0.0, -15.0]]).unwrap();
        assert_eq!(r, expected);
        assert!(matches!(q.scale(0.0), Err(QuboError::InvalidScale(_))));
        assert!(matches!(q.scale(-2.0), Err(QuboError::InvalidScale(_))));
        let ints = expected.round_entries();
        assert_eq!(ints, expected);
    }

    #[test]
    fn rounding_error_matrix_entries() {
        let q = QuboInstance::from_dense(&[[0.3, 2.0], [0.0, 0.5]]).unwrap();
        let e = q.rounding_error_matrix(1.0).unwrap();
        assert!((e.get(0, 0) + 0.3).abs() < 1e-15);
        assert_eq!(e.get(0, 1), 0.0);
        assert_eq!(e.get(1, 1), 0.5);
        assert!(q.rounding_error_matrix(0.0).is_err());
        let ints = QuboInstance::from_dense(&[[3.0, -2.0], [0.0, 7.0]]).unwrap();
        assert!(ints.rounding_error_matrix(1.0).unwrap().values().iter().all(|&v| v == 0.0));
    }
}
