//! Compressed-sparse-row real matrices for the grid operators.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseOperator {
    /// Sums duplicate entries; exact zeros are dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut per_row: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::InvalidArgument(format!("entry ({i}, {j}) outside {rows}x{cols}")));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("sparse entry ({i}, {j})")));
            }
            *per_row[i].entry(j).or_insert(0.0) += v;
        }
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in per_row {
            for (j, v) in row {
                if v != 0.0 {
                    col_idx.push(j);
                    vals.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            vals: vec![1.0; n],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.col_idx[k], self.vals[k]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        match self.col_idx[lo..hi].binary_search(&j) {
            Ok(k) => self.vals[lo + k],
            Err(_) => 0.0,
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v)))
            .expect("transposed entries stay in range")
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, other: &Self, alpha: f64) -> Result<Self> {
        self.check_same_shape(other, "add_scaled")?;
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets().chain(other.triplets().map(|(i, j, v)| (i, j, alpha * v))),
        )
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "sparse matmul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut triplets = Vec::new();
        for i in 0..self.rows {
            let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let (mid, a) = (self.col_idx[k], self.vals[k]);
                for l in other.row_ptr[mid]..other.row_ptr[mid + 1] {
                    *acc.entry(other.col_idx[l]).or_insert(0.0) += a * other.vals[l];
                }
            }
            triplets.extend(acc.into_iter().map(|(j, v)| (i, j, v)));
        }
        Self::from_triplets(self.rows, other.cols, triplets)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.add_scaled(&other.matmul(self)?, -1.0)
    }

    /// `self * other + other * self`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.add_scaled(&other.matmul(self)?, 1.0)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "sparse matvec",
                left: (self.rows, self.cols),
                right: (x.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .map(|k| self.vals[k] * x[self.col_idx[k]])
                    .sum()
            })
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.vals.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `[[a, b], [c, d]]` from equally sized square blocks; `None` is a zero block.
    pub fn block2x2(blocks: [[Option<&Self>; 2]; 2], n: usize) -> Result<Self> {
        let mut triplets = Vec::new();
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                if let Some(b) = block {
                    if (b.rows, b.cols) != (n, n) {
                        return Err(Error::DimensionMismatch {
                            op: "block2x2",
                            left: (b.rows, b.cols),
                            right: (n, n),
                        });
                    }
                    triplets.extend(b.triplets().map(|(i, j, v)| (bi * n + i, bj * n + j, v)));
                }
            }
        }
        Self::from_triplets(2 * n, 2 * n, triplets)
    }

    /// Converts a symmetric tridiagonal operator; other shapes are rejected.
    pub fn to_sym_tridiagonal(&self) -> Result<SymTridiagonal> {
        if self.rows != self.cols || self.rows == 0 {
            return Err(Error::NotSquare {
                op: "to_sym_tridiagonal",
                rows: self.rows,
                cols: self.cols,
            });
        }
        for (i, j, v) in self.triplets() {
            if i.abs_diff(j) > 1 {
                return Err(Error::InvalidArgument(format!("entry ({i}, {j}) outside the tridiagonal band")));
            }
            if self.get(j, i) != v {
                return Err(Error::InvalidArgument(format!("entry ({i}, {j}) breaks symmetry")));
            }
        }
        let n = self.rows;
        let diag = (0..n).map(|i| self.get(i, i)).collect();
        let off = (0..n - 1).map(|i| self.get(i, i + 1)).collect();
        SymTridiagonal::new(diag, off)
    }

    fn check_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SparseOperator {
        SparseOperator::from_triplets(2, 3, [(0, 0, 1.0), (0, 2, 2.0), (1, 1, 3.0), (1, 1, 1.0)]).unwrap()
    }

    #[test]
    fn triplets_are_summed() {
        let m = sample();
        assert_eq!(m.get(1, 1), 4.0);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(1, 0), 0.0);
    }

    #[test]
    fn transpose_and_product() {
        let m = sample();
        let mt = m.transpose();
        assert_eq!((mt.rows(), mt.cols()), (3, 2));
        let g = m.matmul(&mt).unwrap();
        assert_eq!(g.get(0, 0), 5.0);
        assert_eq!(g.get(1, 1), 16.0);
        assert_eq!(g.get(0, 1), 0.0);
        assert!(m.matmul(&m).is_err());
    }

    #[test]
    fn matvec_and_norm() {
        let m = sample();
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0]).unwrap(), vec![3.0, 4.0]);
        assert!((m.frobenius_norm() - 21f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn blocks_and_tridiagonal() {
        let id = SparseOperator::identity(2);
        let b = SparseOperator::block2x2([[None, Some(&id)], [Some(&id), None]], 2).unwrap();
        assert_eq!(b.get(0, 2), 1.0);
        assert_eq!(b.get(3, 1), 1.0);
        assert_eq!(b.matmul(&b).unwrap(), SparseOperator::identity(4));
        assert!(b.to_sym_tridiagonal().is_err());
        let t = SparseOperator::from_triplets(3, 3, [(0, 0, 2.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0), (2, 2, 2.0)])
            .unwrap()
            .to_sym_tridiagonal()
            .unwrap();
        assert_eq!(t.off(), &[-1.0, 0.0]);
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(SparseOperator::from_triplets(2, 2, [(2, 0, 1.0)]).is_err());
        assert!(SparseOperator::from_triplets(2, 2, [(0, 0, f64::NAN)]).is_err());
    }
}
