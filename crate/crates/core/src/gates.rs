//! Fixed one- and two-qubit gates.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{c, re, ComplexMatrix};

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[re(0.0), c(0.0, -1.0)], [c(0.0, 1.0), re(0.0)]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
}

/// `(1/sqrt 2) [[1, 1], [1, -1]]`.
pub fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
}

/// Bit flip `F = i sigma_1`.
pub fn bit_flip_f() -> ComplexMatrix {
    pauli_x().scale(c(0.0, 1.0))
}

/// `(1/2) [[1+i, 1-i], [1-i, 1+i]]`, a unitary square root of `X`.
pub fn sqrt_not() -> ComplexMatrix {
    let p = c(0.5, 0.5);
    let m = c(0.5, -0.5);
    ComplexMatrix::from_rows(&[[p, m], [m, p]])
}

/// Controlled-not with the first qubit as control.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::permutation(&[0, 1, 3, 2])
}

/// Two-qubit swap `|ij> -> |ji>`.
pub fn swap() -> ComplexMatrix {
    ComplexMatrix::permutation(&[0, 2, 1, 3])
}
