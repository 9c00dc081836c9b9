//! Cyclic Jacobi eigen-solver for small complex Hermitian matrices.

use super::{re, verdict, Complex, ComplexMatrix, MatrixProperty};
use crate::error::{Error, Result};

/// Hermiticity gate applied before diagonalization.
const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Ascending eigenvalues with eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `|| m - V diag(values) V^dagger ||`.
    pub fn reconstruction_residual(&self, m: &ComplexMatrix) -> f64 {
        let lambda: Vec<Complex> = self.values.iter().map(|&x| re(x)).collect();
        let rebuilt = &(&self.vectors * &ComplexMatrix::diagonal(&lambda)) * &self.vectors.dagger();
        (m - &rebuilt).frobenius_norm()
    }

    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.vectors.cols();
        (&(&self.vectors.dagger() * &self.vectors) - &ComplexMatrix::identity(n)).frobenius_norm()
    }
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eigs(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let v = verdict(m, MatrixProperty::Hermitian, HERMITIAN_TOL * m.frobenius_norm().max(1.0))?;
    if !v.pass {
        return Err(Error::NotHermitian { residual: v.residual });
    }
    let n = m.rows();
    // Symmetrize so the iteration starts from an exactly Hermitian matrix.
    let mut a = (m + &m.dagger()).scale_re(0.5);
    let mut vecs = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale * 1e-2 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut vecs, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = vecs[(i, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a normal matrix, sorted by imaginary part, then real part.
///
/// A generic Hermitian combination of the Hermitian and anti-Hermitian parts
/// shares the eigenvectors of `m`; the eigenvalues are then read off as
/// Rayleigh quotients. Non-normal input is rejected.
pub fn normal_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<Complex>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "normal_eigenvalues",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let md = m.dagger();
    let commutator = (&(m * &md) - &(&md * m)).frobenius_norm();
    if commutator > tol * m.frobenius_norm().max(1.0) {
        return Err(Error::Verification(format!("matrix is not normal (residual {commutator:.3e})")));
    }
    let herm = (m + &md).scale_re(0.5);
    let anti = (m - &md).scale(super::c(0.0, -0.5));
    // Irrational weight so distinct eigenvalues of m stay distinct.
    let mix = &herm + &anti.scale_re(std::f64::consts::SQRT_2 + 0.1);
    let eig = hermitian_eigs(&mix)?;
    let mut values: Vec<Complex> = (0..m.rows())
        .map(|k| {
            let v = eig.vectors.col_vec(k);
            let mv = m.apply(&v).expect("square matrix");
            super::inner(&v, &mv)
        })
        .collect();
    values.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
    Ok(values)
}

/// Annihilates `a[p][q]` with `U = diag(1, e^{-i alpha}) * [[c, s], [-s, c]]`.
fn rotate(a: &mut ComplexMatrix, vecs: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cos = 1.0 / (1.0 + t * t).sqrt();
    let sin = t * cos;
    let phase = (apq / r).conj();
    let u00 = re(cos);
    let u01 = re(sin);
    let u10 = phase * (-sin);
    let u11 = phase * cos;

    let n = a.rows();
    // A <- A U (columns p, q)
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * u00 + akq * u10;
        a[(k, q)] = akp * u01 + akq * u11;
    }
    // A <- U^dagger A (rows p, q)
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = u00.conj() * apk + u10.conj() * aqk;
        a[(q, k)] = u01.conj() * apk + u11.conj() * aqk;
    }
    a[(p, q)] = re(0.0);
    a[(q, p)] = re(0.0);
    a[(p, p)] = re(a[(p, p)].re);
    a[(q, q)] = re(a[(q, q)].re);
    for k in 0..n {
        let (vkp, vkq) = (vecs[(k, p)], vecs[(k, q)]);
        vecs[(k, p)] = vkp * u00 + vkq * u10;
        vecs[(k, q)] = vkp * u01 + vkq * u11;
    }
}
