//! Compressed sparse column matrices and sparse vectors.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Sparse vector with strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    dim: usize,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds a vector from unordered `(index, value)` pairs; duplicates are summed
    /// and explicit zeros dropped.
    pub fn from_pairs(dim: usize, mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        pairs.sort_by_key(|&(i, _)| i);
        let mut indices = Vec::with_capacity(pairs.len());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            if i >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: i + 1,
                });
            }
            if !v.is_finite() {
                return Err(Error::Domain(format!("non-finite weight {v} at index {i}")));
            }
            if indices.last() == Some(&i) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(i);
                values.push(v);
            }
        }
        let mut out = Self { dim, indices, values };
        out.drop_zeros();
        Ok(out)
    }

    pub fn from_dense(values: &[f64]) -> Self {
        let mut out = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            if v != 0.0 {
                out.indices.push(i);
                out.values.push(v);
            }
        }
        out
    }

    fn drop_zeros(&mut self) {
        let mut keep = 0;
        for k in 0..self.indices.len() {
            if self.values[k] != 0.0 {
                self.indices[keep] = self.indices[k];
                self.values[keep] = self.values[k];
                keep += 1;
            }
        }
        self.indices.truncate(keep);
        self.values.truncate(keep);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn get(&self, index: usize) -> f64 {
        self.indices
            .binary_search(&index)
            .map_or(0.0, |k| self.values[k])
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut a, mut b) = (0, 0);
        let mut sum = 0.0;
        while a < self.indices.len() && b < other.indices.len() {
            match self.indices[a].cmp(&other.indices[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    sum += self.values[a] * other.values[b];
                    a += 1;
                    b += 1;
                }
            }
        }
        sum
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }

    /// Keeps only the coordinates in `range`.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> SparseVector {
        let mut out = SparseVector::zeros(self.dim);
        for (i, v) in self.iter() {
            if range.contains(&i) {
                out.indices.push(i);
                out.values.push(v);
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> SparseVector {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out.drop_zeros();
        out
    }
}

/// Compressed sparse column matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CscMatrix {
    pub fn from_columns(nrows: usize, columns: &[SparseVector]) -> Result<Self> {
        let mut col_ptr = Vec::with_capacity(columns.len() + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for col in columns {
            if col.dim() != nrows {
                return Err(Error::DimensionMismatch {
                    expected: nrows,
                    found: col.dim(),
                });
            }
            row_idx.extend_from_slice(col.indices());
            values.extend_from_slice(col.values());
            col_ptr.push(row_idx.len());
        }
        Ok(Self {
            nrows,
            ncols: columns.len(),
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut per_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); ncols];
        for &(r, c, v) in triplets {
            if c >= ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    found: c + 1,
                });
            }
            per_col[c].push((r, v));
        }
        let columns = per_col
            .into_iter()
            .map(|pairs| SparseVector::from_pairs(nrows, pairs))
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(nrows, &columns)
    }

    pub fn from_dense(dense: &DMatrix<f64>) -> Self {
        let columns: Vec<SparseVector> = (0..dense.ncols())
            .map(|j| SparseVector::from_dense(dense.column(j).as_slice()))
            .collect();
        Self::from_columns(dense.nrows(), &columns).expect("dimensions agree")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn column(&self, j: usize) -> SparseVector {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        SparseVector {
            dim: self.nrows,
            indices: self.row_idx[range.clone()].to_vec(),
            values: self.values[range].to_vec(),
        }
    }

    pub fn column_entries(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    /// Iterates `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.ncols).flat_map(move |j| self.column_entries(j).map(move |(i, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            out[(i, j)] = v;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `self * x` for a dense `ncols x l` matrix.
    pub fn mul_dense(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(x.nrows(), self.ncols, "inner dimensions differ");
        let l = x.ncols();
        let xt = x.transpose();
        let xs = xt.as_slice();
        let mut out_t = DMatrix::zeros(l, self.nrows);
        let os = out_t.as_mut_slice();
        for j in 0..self.ncols {
            let xj = &xs[j * l..(j + 1) * l];
            for (i, a) in self.column_entries(j) {
                for (o, x) in os[i * l..(i + 1) * l].iter_mut().zip(xj) {
                    *o += a * x;
                }
            }
        }
        out_t.transpose()
    }

    /// `selfᵗ * x` for a dense `nrows x l` matrix.
    pub fn tr_mul_dense(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(x.nrows(), self.nrows, "inner dimensions differ");
        let l = x.ncols();
        let xt = x.transpose();
        let xs = xt.as_slice();
        let mut out_t = DMatrix::zeros(l, self.ncols);
        let os = out_t.as_mut_slice();
        for j in 0..self.ncols {
            let oj = &mut os[j * l..(j + 1) * l];
            for (i, a) in self.column_entries(j) {
                for (o, x) in oj.iter_mut().zip(&xs[i * l..(i + 1) * l]) {
                    *o += a * x;
                }
            }
        }
        out_t.transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_pairs_sums_duplicates_and_drops_zeros() {
        let v = SparseVector::from_pairs(5, vec![(3, 1.0), (1, 2.0), (3, -1.0), (4, 0.5)]).unwrap();
        assert_eq!(v.indices(), &[1, 4]);
        assert_eq!(v.values(), &[2.0, 0.5]);
        assert!(SparseVector::from_pairs(2, vec![(2, 1.0)]).is_err());
    }

    #[test]
    fn products_match_dense() {
        let dense = DMatrix::from_row_slice(3, 4, &[
            1.0, 0.0, 2.0, 0.0, //
            0.0, 3.0, 0.0, 0.0, //
            4.0, 0.0, 0.0, 5.0,
        ]);
        let sparse = CscMatrix::from_dense(&dense);
        assert_eq!(sparse.nnz(), 5);
        let x = DMatrix::from_fn(4, 2, |i, j| (i + 2 * j) as f64 - 1.5);
        assert!((sparse.mul_dense(&x) - &dense * &x).norm() < 1e-12);
        let y = DMatrix::from_fn(3, 2, |i, j| (i * j) as f64 + 0.25);
        assert!((sparse.tr_mul_dense(&y) - dense.transpose() * &y).norm() < 1e-12);
        assert_eq!(sparse.to_dense(), dense);
    }
}
