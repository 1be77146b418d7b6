//! Compressed-row sparse complex matrices with deterministic assembly.

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64, ZERO};

/// Default ceiling for dense conversion.
pub const DEFAULT_DENSE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<C64>,
}

impl CsrMatrix {
    pub fn zeros(dim: usize) -> Self {
        CsrMatrix {
            dim,
            row_ptr: vec![0; dim + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let trip = d
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, i, C64::new(v, 0.0)))
            .collect();
        Self::from_triplets(d.len(), trip)
    }

    /// Sorts by (row, col), sums duplicates in input order and drops exact zeros.
    pub fn from_triplets(dim: usize, mut trip: Vec<(usize, usize, C64)>) -> Self {
        trip.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::with_capacity(trip.len());
        let mut values: Vec<C64> = Vec::with_capacity(trip.len());
        let mut rows = Vec::with_capacity(trip.len());
        for (r, c, v) in trip {
            debug_assert!(r < dim && c < dim);
            if rows.last() == Some(&r) && col_idx.last() == Some(&c) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                col_idx.push(c);
                values.push(v);
            }
        }
        let mut keep_cols = Vec::with_capacity(col_idx.len());
        let mut keep_vals = Vec::with_capacity(values.len());
        for ((r, c), v) in rows.into_iter().zip(col_idx).zip(values) {
            if v != ZERO {
                row_ptr[r + 1] += 1;
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix {
            dim,
            row_ptr,
            col_idx: keep_cols,
            values: keep_vals,
        }
    }

    pub fn from_dense(m: &CMat) -> Self {
        let mut trip = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                if m[(r, c)] != ZERO {
                    trip.push((r, c, m[(r, c)]));
                }
            }
        }
        Self::from_triplets(m.nrows(), trip)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.col_idx[a..b]
            .iter()
            .copied()
            .zip(self.values[a..b].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.col_idx[a..b].binary_search(&c) {
            Ok(k) => self.values[a + k],
            Err(_) => ZERO,
        }
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.triplets().all(|(r, c, _)| r == c)
    }

    pub fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yr = acc;
        }
    }

    pub fn matvec(&self, x: &CVec) -> CVec {
        let mut y = CVec::zeros(self.dim);
        self.matvec_into(x.as_slice(), y.as_mut_slice());
        y
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &CsrMatrix) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let trip = self.triplets().chain(other.triplets()).collect();
        Ok(Self::from_triplets(self.dim, trip))
    }

    pub fn adjoint(&self) -> Self {
        let trip = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.dim, trip)
    }

    pub fn matmul(&self, other: &CsrMatrix) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut trip = Vec::new();
        for r in 0..self.dim {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    trip.push((r, c, a * b));
                }
            }
        }
        Ok(Self::from_triplets(self.dim, trip))
    }

    /// Largest entry magnitude of `[self, other]`.
    pub fn commutator_norm(&self, other: &CsrMatrix) -> Result<f64> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        Ok(ab.add(&ba.scaled(-1.0))?.max_abs())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CsrMatrix) -> Result<f64> {
        Ok(self.add(&other.scaled(-1.0))?.max_abs())
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.triplets()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self, cap: usize) -> Result<CMat> {
        if self.dim > cap {
            return Err(Error::DimensionCapExceeded {
                dim: self.dim,
                cap,
            });
        }
        let mut m = CMat::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        Ok(m)
    }

    /// Restriction to the rows and columns in `indices` (in that order).
    pub fn submatrix(&self, indices: &[usize]) -> CMat {
        let mut pos = vec![usize::MAX; self.dim];
        for (k, &i) in indices.iter().enumerate() {
            pos[i] = k;
        }
        let n = indices.len();
        let mut m = CMat::zeros(n, n);
        for (k, &r) in indices.iter().enumerate() {
            for (c, v) in self.row(r) {
                if pos[c] != usize::MAX {
                    m[(k, pos[c])] = v;
                }
            }
        }
        m
    }

    /// Largest entry coupling `indices` to its complement.
    pub fn off_block_norm(&self, indices: &[usize]) -> f64 {
        let mut inside = vec![false; self.dim];
        for &i in indices {
            inside[i] = true;
        }
        self.triplets()
            .filter(|&(r, c, _)| inside[r] != inside[c])
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// `⟨x|A|x⟩`.
    pub fn expectation(&self, x: &CVec) -> C64 {
        let ax = self.matvec(x);
        x.iter().zip(ax.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff};

    #[test]
    fn triplet_merge_and_drop() {
        let m = CsrMatrix::from_triplets(
            3,
            vec![
                (2, 1, c(1.0)),
                (0, 0, c(2.0)),
                (2, 1, c(-1.0)),
                (1, 2, c(3.0)),
                (0, 0, c(0.5)),
            ],
        );
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 0), c(2.5));
        assert_eq!(m.get(2, 1), ZERO);
        assert_eq!(m.row_ptr, vec![0, 1, 2, 2]);
    }

    #[test]
    fn dense_round_trip_and_matvec() {
        let mut d = CMat::zeros(4, 4);
        d[(0, 3)] = C64::new(1.0, 2.0);
        d[(3, 0)] = C64::new(1.0, -2.0);
        d[(2, 2)] = c(-1.5);
        let s = CsrMatrix::from_dense(&d);
        assert_eq!(max_abs_diff(&s.to_dense(16).unwrap(), &d), 0.0);
        let x = CVec::from_fn(4, |i, _| C64::new(i as f64, 1.0));
        let diff = (s.matvec(&x) - &d * &x).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert_eq!(diff, 0.0);
        assert_eq!(s.hermiticity_residual(), 0.0);
        assert!(s.to_dense(3).is_err());
    }

    #[test]
    fn matmul_matches_dense() {
        let a = CMat::from_fn(5, 5, |i, j| C64::new((i * 3 + j) as f64 % 4.0 - 1.0, (i + j) as f64 % 3.0));
        let b = CMat::from_fn(5, 5, |i, j| C64::new((i + 2 * j) as f64 % 5.0 - 2.0, 0.0));
        let p = CsrMatrix::from_dense(&a)
            .matmul(&CsrMatrix::from_dense(&b))
            .unwrap();
        assert!(max_abs_diff(&p.to_dense(25).unwrap(), &(&a * &b)) < 1e-12);
    }

    #[test]
    fn submatrix_and_off_block() {
        let mut d = CMat::zeros(3, 3);
        d[(0, 1)] = c(1.0);
        d[(1, 0)] = c(1.0);
        d[(2, 2)] = c(5.0);
        let s = CsrMatrix::from_dense(&d);
        assert_eq!(s.off_block_norm(&[0, 1]), 0.0);
        assert_eq!(s.off_block_norm(&[0, 2]), 1.0);
        let sub = s.submatrix(&[2, 0]);
        assert_eq!(sub[(0, 0)], c(5.0));
    }
}
