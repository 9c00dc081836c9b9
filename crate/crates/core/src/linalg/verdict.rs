use serde::{Deserialize, Serialize};

use super::{re, Complex, ComplexMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixProperty {
    Unitary,
    Hermitian,
    Involution,
}

/// Outcome of a property check. `pass` holds iff `residual <= tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixVerdict {
    pub property: MatrixProperty,
    pub residual: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Frobenius residual of `m^dagger m - I`, `m - m^dagger` or `m^2 - I`.
pub fn verdict(m: &ComplexMatrix, property: MatrixProperty, tolerance: f64) -> Result<MatrixVerdict> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "verdict",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let id = ComplexMatrix::identity(m.rows());
    let residual = match property {
        MatrixProperty::Unitary => (&(&m.dagger() * m) - &id).frobenius_norm(),
        MatrixProperty::Hermitian => (m - &m.dagger()).frobenius_norm(),
        MatrixProperty::Involution => (&(m * m) - &id).frobenius_norm(),
    };
    Ok(MatrixVerdict {
        property,
        residual,
        pass: residual <= tolerance,
        tolerance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseMatch {
    pub equal: bool,
    /// Unit-modulus factor with `a ~ phase * b`.
    pub phase: Complex,
    pub residual: f64,
}

/// Tests `a = lambda * b` for some unit-modulus `lambda`, anchoring `lambda` on
/// the largest-modulus entry of `b`.
pub fn equal_up_to_global_phase(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<PhaseMatch> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            op: "equal_up_to_global_phase",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let anchor = b
        .entries()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(k, _)| k);
    let Some(k) = anchor.filter(|&k| b.entries()[k].norm() > 0.0) else {
        // b is zero (or empty): only a zero a matches.
        let residual = a.frobenius_norm();
        return Ok(PhaseMatch {
            equal: residual <= tol,
            phase: re(1.0),
            residual,
        });
    };
    let ratio = a.entries()[k] / b.entries()[k];
    let phase = if ratio.norm() > 0.0 {
        ratio / ratio.norm()
    } else {
        re(1.0)
    };
    let residual = (a - &b.scale(phase)).frobenius_norm();
    Ok(PhaseMatch {
        equal: residual <= tol,
        phase,
        residual,
    })
}
