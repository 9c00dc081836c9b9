use super::{verdict, ComplexMatrix, MatrixProperty, DEFAULT_TOL};
use crate::error::{Error, Result};

/// `exp(i * theta * m / 2) = cos(theta/2) I + i sin(theta/2) m` for an involution `m`.
///
/// The involution property is checked at [`DEFAULT_TOL`]; a failing matrix is
/// rejected with its residual.
pub fn expm_involution(m: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "expm_involution",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !theta.is_finite() {
        return Err(Error::NonFinite("expm_involution angle".into()));
    }
    let v = verdict(m, MatrixProperty::Involution, DEFAULT_TOL)?;
    if !v.pass {
        return Err(Error::NotInvolution {
            residual: v.residual,
        });
    }
    let (s, c) = (theta / 2.0).sin_cos();
    let id = ComplexMatrix::identity(m.rows());
    Ok(&id.scale_re(c) + &m.scale(super::c(0.0, s)))
}

/// Matrix exponential by scaling and squaring around a Taylor core.
pub fn expm_series(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    expm_series_with_extra_squarings(m, 0)
}

/// As [`expm_series`], with `extra` additional halvings before the Taylor core
/// (and the matching squarings afterwards). Used to measure the truncation
/// residual of the default scaling level.
pub fn expm_series_with_extra_squarings(m: &ComplexMatrix, extra: u32) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "expm_series",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("expm_series input".into()));
    }
    let n = m.rows();
    let norm = m.frobenius_norm();
    let mut s: u32 = 0;
    while norm * 0.5f64.powi(s as i32) > 0.5 && s < 64 {
        s += 1;
    }
    s += extra;
    let scaled = m.scale_re(0.5f64.powi(s as i32));

    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = (&term * &scaled).scale_re(1.0 / k as f64);
        result = &result + &term;
        if term.frobenius_norm() <= f64::EPSILON * 1e-3 * result.frobenius_norm() {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    Ok(result)
}
