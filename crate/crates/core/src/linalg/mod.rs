//! Dense complex linear algebra for the small operators of the crate.
//!
//! Two-qubit operators use the index convention `|ij> = |i> (x) |j>` stored at
//! row `2*i + j`; [`kron`] follows it for every factor size.

mod eigen;
mod expm;
mod tridiagonal;
mod verdict;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use eigen::{hermitian_eigs, normal_eigenvalues, HermitianEigen};
pub use expm::{expm_involution, expm_series, expm_series_with_extra_squarings};
pub use tridiagonal::SymTridiagonal;
pub use verdict::{equal_up_to_global_phase, verdict, MatrixProperty, MatrixVerdict, PhaseMatch};

/// Default tolerance for operator identities.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default relative tolerance for eigen-reconstruction.
pub const EIGEN_TOL: f64 = 1e-8;

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = re(1.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "construct",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entries".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from literal rows.
    ///
    /// Panics on ragged input; intended for fixed, hand-written operators.
    pub fn from_rows<R: AsRef<[Complex]>>(rows: &[R]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), n_cols, "ragged rows in ComplexMatrix::from_rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: n_rows,
            cols: n_cols,
            data,
        }
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| re(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(entries: &[Complex]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Column vector from amplitudes.
    pub fn column(entries: &[Complex]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    /// Permutation matrix sending basis vector `k` to `perm[k]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (k, &target) in perm.iter().enumerate() {
            m[(target, k)] = re(1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Standard product; rejects mismatched inner dimensions.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Applies the matrix to a vector of matching length.
    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    pub fn kron(&self, other: &Self) -> Self {
        kron(self, other)
    }

    pub fn dagger(&self) -> Self {
        dagger(self)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> Result<Complex> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "determinant",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = re(1.0);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a[x * n + k].norm().total_cmp(&a[y * n + k].norm()))
                .unwrap_or(k);
            let pivot = a[p * n + k];
            if pivot.norm() == 0.0 {
                return Ok(re(0.0));
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            det *= pivot;
            for i in (k + 1)..n {
                let f = a[i * n + k] / pivot;
                for j in k..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= f * t;
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "inverse",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))
                .unwrap_or(k);
            if a[(p, k)].norm() <= 1e-14 * scale {
                return Err(Error::InvalidArgument("matrix is singular".into()));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                    inv.data.swap(k * n + j, p * n + j);
                }
            }
            let d = a[(k, k)].inv();
            for j in 0..n {
                a[(k, j)] *= d;
                inv[(k, j)] *= d;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[(i, k)];
                if f == re(0.0) {
                    continue;
                }
                for j in 0..n {
                    let (ak, ik) = (a[(k, j)], inv[(k, j)]);
                    a[(i, j)] -= f * ak;
                    inv[(i, j)] -= f * ik;
                }
            }
        }
        Ok(inv)
    }

    /// Commutator `self*other - other*self` for square operands of equal size.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }
}

/// Kronecker product `a (x) b`; row index of `|i>|j>` is `i * b.rows + j`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a[(i, j)];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Conjugate transpose.
pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.cols, a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Matrix product; panics on dimension mismatch (use [`ComplexMatrix::matmul`]
/// for a fallible product).
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

fn assert_same_shape(a: &ComplexMatrix, b: &ComplexMatrix, op: &str) {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in matrix {op}");
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_same_shape(self, rhs, "addition");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_same_shape(self, rhs, "subtraction");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self + &rhs
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self - &rhs
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Inner product `<a|b>` (conjugate-linear in `a`).
pub fn inner(a: &[Complex], b: &[Complex]) -> Complex {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    #[test]
    fn identity_times_hadamard() {
        let h = gates::hadamard();
        assert!(close(&(&ComplexMatrix::identity(2) * &h), &h, 0.0));
    }

    #[test]
    fn hadamard_squares_to_identity() {
        let h = gates::hadamard();
        assert!(close(&(&h * &h), &ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn bit_flip_f_squares_to_minus_identity() {
        let f = gates::bit_flip_f();
        let minus_i = ComplexMatrix::identity(2).scale_re(-1.0);
        assert!(close(&(&f * &f), &minus_i, 0.0));
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch { .. })));
        let p = a.matmul(&ComplexMatrix::zeros(3, 4)).unwrap();
        assert_eq!(p.shape(), (2, 4));
    }

    #[test]
    fn new_rejects_non_finite() {
        let err = ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(err, Err(Error::NonFinite(_))));
        assert!(ComplexMatrix::new(2, 2, vec![re(0.0); 3]).is_err());
    }

    #[test]
    fn kron_identity_and_basis_convention() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        // (X (x) I)|00> = |10>, which lives at row 2.
        let x_i = kron(&gates::pauli_x(), &i2);
        let out = x_i.apply(&[re(1.0), re(0.0), re(0.0), re(0.0)]).unwrap();
        assert_eq!(out, vec![re(0.0), re(0.0), re(1.0), re(0.0)]);
    }

    #[test]
    fn dagger_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(dagger(&i3), i3);
        let h = gates::hadamard();
        assert_eq!(dagger(&h), h);
        let f = gates::bit_flip_f();
        assert_eq!(dagger(&f), -&f);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = ComplexMatrix::from_rows(&[[c(1.0, 1.0), re(2.0)], [re(3.0), c(0.0, -1.0)]]);
        let det = m.determinant().unwrap();
        // (1+i)(-i) - 6 = 1 - i - 6
        assert!((det - c(-5.0, -1.0)).norm() < 1e-14);
        let inv = m.inverse().unwrap();
        assert!(close(&(&m * &inv), &ComplexMatrix::identity(2), 1e-14));
        let singular = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert_eq!(singular.determinant().unwrap(), re(0.0));
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn permutation_moves_basis_vectors() {
        let p = ComplexMatrix::permutation(&[1, 2, 0]);
        let out = p.apply(&[re(1.0), re(0.0), re(0.0)]).unwrap();
        assert_eq!(out[1], re(1.0));
    }
}
