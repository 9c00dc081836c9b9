//! Quantized 2x2 games: qubit strategies, the correlation factor `J(gamma)`,
//! diagonal payoff operators, swap/twist symmetries and conversion dualities.
//!
//! The joint state is `J(gamma) (|alpha> (x) |beta>)`; payoffs are plain
//! expectation values of the payoff operators in that state.

mod nash;
mod sweep;

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classical::PayoffBimatrix;
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{expm_involution, inner, re, Complex, ComplexMatrix};

pub use nash::{
    best_response, best_response_value, nash_search, BestResponse, EquilibriumReport, Player,
};
pub use sweep::{gamma_sweep, write_sweep_csv, SweepRow, SWEEP_CSV_HEADER};

/// A pure qubit strategy `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitStrategy {
    theta: f64,
    phi: f64,
}

impl QubitStrategy {
    /// `theta` must lie in `[0, pi]`; `phi` is reduced into `[0, 2 pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite("strategy angles".into()));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidArgument(format!("theta {theta} outside [0, pi]")));
        }
        Ok(Self {
            theta,
            phi: wrap_angle(phi),
        })
    }

    /// `|0>`: the first classical move.
    pub fn zero() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    /// `|1>`: the second classical move.
    pub fn one() -> Self {
        Self { theta: PI, phi: 0.0 }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            theta: rng.gen_range(0.0..=PI),
            phi: rng.gen_range(0.0..TAU),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn amplitudes(&self) -> [Complex; 2] {
        let (s, c0) = (self.theta / 2.0).sin_cos();
        [re(c0), Complex::from_polar(s, self.phi)]
    }

    /// Probability of the first classical move, `cos^2(theta/2)`.
    pub fn probability_zero(&self) -> f64 {
        (self.theta / 2.0).cos().powi(2)
    }

    /// `X|alpha>` with the global phase dropped: `theta -> pi - theta`, `phi -> -phi`.
    pub fn flipped(&self) -> Self {
        Self {
            theta: PI - self.theta,
            phi: wrap_angle(-self.phi),
        }
    }

    /// Unit Bloch vector; equal rays give equal vectors.
    pub fn bloch(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Euclidean distance between Bloch vectors.
    pub fn ray_distance(&self, other: &Self) -> f64 {
        let (a, b) = (self.bloch(), other.bloch());
        a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
    }
}

fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Correlation parameters `(gamma1, gamma2)`, each in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Correlation {
    pub fn new(gamma1: f64, gamma2: f64) -> Result<Self> {
        for g in [gamma1, gamma2] {
            if !g.is_finite() {
                return Err(Error::NonFinite("correlation parameter".into()));
            }
            if !(0.0..TAU).contains(&g) {
                return Err(Error::InvalidArgument(format!("gamma {g} outside [0, 2 pi)")));
            }
        }
        Ok(Self { gamma1, gamma2 })
    }

    /// Reduces both parameters into `[0, 2 pi)`. This changes `J` by at most a sign.
    pub fn wrapped(gamma1: f64, gamma2: f64) -> Result<Self> {
        if !gamma1.is_finite() || !gamma2.is_finite() {
            return Err(Error::NonFinite("correlation parameter".into()));
        }
        Ok(Self {
            gamma1: wrap_angle(gamma1),
            gamma2: wrap_angle(gamma2),
        })
    }

    pub fn classical() -> Self {
        Self { gamma1: 0.0, gamma2: 0.0 }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            gamma1: rng.gen_range(0.0..TAU),
            gamma2: rng.gen_range(0.0..TAU),
        }
    }

    /// `(gamma2, gamma1)`.
    pub fn swapped(&self) -> Self {
        Self {
            gamma1: self.gamma2,
            gamma2: self.gamma1,
        }
    }
}

/// `S|ij> = |ji>`.
pub fn swap_operator() -> ComplexMatrix {
    gates::swap()
}

/// `T|ij> = |(1-j)(1-i)>`.
pub fn twist_operator() -> ComplexMatrix {
    ComplexMatrix::permutation(&[3, 1, 2, 0])
}

/// `J(gamma) = exp(i gamma1 S / 2) exp(i gamma2 T / 2)`.
pub fn correlation_factor(corr: &Correlation) -> ComplexMatrix {
    let s = expm_involution(&swap_operator(), corr.gamma1).expect("swap is an involution");
    let t = expm_involution(&twist_operator(), corr.gamma2).expect("twist is an involution");
    &s * &t
}

pub fn product_state(alice: &QubitStrategy, bob: &QubitStrategy) -> [Complex; 4] {
    let (a, b) = (alice.amplitudes(), bob.amplitudes());
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

pub fn joint_state(alice: &QubitStrategy, bob: &QubitStrategy, corr: &Correlation) -> [Complex; 4] {
    apply4(&correlation_factor(corr), &product_state(alice, bob))
}

fn apply4(m: &ComplexMatrix, v: &[Complex; 4]) -> [Complex; 4] {
    let mut out = [re(0.0); 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

/// `<psi|m|psi>`, real part (the imaginary part vanishes for Hermitian `m`).
pub fn expectation(m: &ComplexMatrix, psi: &[Complex]) -> f64 {
    let mpsi = m.apply(psi).expect("operator and state dimensions agree");
    inner(psi, &mpsi).re
}

/// The two players' single-qubit conversions and their product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Converter {
    Alice,
    Bob,
    Both,
}

impl Converter {
    pub fn operator(self) -> ComplexMatrix {
        match self {
            Converter::Alice => convert_alice(),
            Converter::Bob => convert_bob(),
            Converter::Both => convert_both(),
        }
    }

    /// Strategies after relabeling.
    pub fn convert(self, alice: &QubitStrategy, bob: &QubitStrategy) -> (QubitStrategy, QubitStrategy) {
        match self {
            Converter::Alice => (alice.flipped(), *bob),
            Converter::Bob => (*alice, bob.flipped()),
            Converter::Both => (alice.flipped(), bob.flipped()),
        }
    }

    /// Correlation parameters after conjugation: single-player conversions exchange `S` and `T`.
    pub fn convert_correlation(self, corr: &Correlation) -> Correlation {
        match self {
            Converter::Alice | Converter::Bob => corr.swapped(),
            Converter::Both => *corr,
        }
    }
}

/// `C_A = X (x) I`.
pub fn convert_alice() -> ComplexMatrix {
    gates::pauli_x().kron(&gates::identity2())
}

/// `C_B = I (x) X`.
pub fn convert_bob() -> ComplexMatrix {
    gates::identity2().kron(&gates::pauli_x())
}

/// `C = X (x) X`.
pub fn convert_both() -> ComplexMatrix {
    gates::pauli_x().kron(&gates::pauli_x())
}

/// Diagonal payoff operators built from a bimatrix game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumGame {
    payoff_a: ComplexMatrix,
    payoff_b: ComplexMatrix,
    source: PayoffBimatrix,
}

impl QuantumGame {
    pub fn new(source: PayoffBimatrix) -> Self {
        Self {
            payoff_a: payoff_operator(&source.alice),
            payoff_b: payoff_operator(&source.bob),
            source,
        }
    }

    /// Accepts operators that are real diagonal within `tol`.
    pub fn from_operators(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<Self> {
        let read = |m: &ComplexMatrix| -> Result<[[f64; 2]; 2]> {
            if m.shape() != (4, 4) {
                return Err(Error::DimensionMismatch {
                    op: "payoff operator",
                    left: m.shape(),
                    right: (4, 4),
                });
            }
            let mut out = [[0.0; 2]; 2];
            for r in 0..4 {
                for col in 0..4 {
                    let z = m[(r, col)];
                    let bad = if r == col { z.im.abs() } else { z.norm() };
                    if bad > tol {
                        return Err(Error::InvalidArgument(format!(
                            "payoff operator entry ({r}, {col}) = {z} is not real diagonal"
                        )));
                    }
                }
                out[r / 2][r % 2] = m[(r, r)].re;
            }
            Ok(out)
        };
        Ok(Self::new(PayoffBimatrix::new(read(a)?, read(b)?)?))
    }

    pub fn payoff_a(&self) -> &ComplexMatrix {
        &self.payoff_a
    }

    pub fn payoff_b(&self) -> &ComplexMatrix {
        &self.payoff_b
    }

    pub fn source(&self) -> &PayoffBimatrix {
        &self.source
    }
}

/// `<ij|A|ij> = A_ij`, zero off the diagonal.
pub fn payoff_operator(m: &[[f64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[re(m[0][0]), re(m[0][1]), re(m[1][0]), re(m[1][1])])
}

pub fn payoffs(g: &QuantumGame, alice: &QubitStrategy, bob: &QubitStrategy, corr: &Correlation) -> (f64, f64) {
    let psi = joint_state(alice, bob, corr);
    (expectation(&g.payoff_a, &psi), expectation(&g.payoff_b, &psi))
}

/// Result of a symmetry check: the operator identity first, then the payoff
/// relation on samples when the identity holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCheck {
    pub holds: bool,
    pub operator_residual: f64,
    /// `None` when the operator identity failed and the relation was not tested.
    pub relation_residual: Option<f64>,
}

impl SymmetryCheck {
    /// Relation residual when tested, otherwise the operator residual.
    pub fn residual(&self) -> f64 {
        self.relation_residual.unwrap_or(self.operator_residual)
    }
}

/// Checks `B = S A S` and then `Pi_B(beta, alpha) = Pi_A(alpha, beta)` on the samples.
pub fn check_s_symmetry(
    g: &QuantumGame,
    corr: &Correlation,
    samples: &[(QubitStrategy, QubitStrategy)],
    tol: f64,
) -> SymmetryCheck {
    let s = swap_operator();
    let operator_residual = (&g.payoff_b - &(&(&s * &g.payoff_a) * &s)).frobenius_norm();
    if operator_residual > tol {
        return SymmetryCheck {
            holds: false,
            operator_residual,
            relation_residual: None,
        };
    }
    let j = correlation_factor(corr);
    let relation = samples
        .iter()
        .map(|(a, b)| {
            let pa = expectation(&g.payoff_a, &apply4(&j, &product_state(a, b)));
            let pb = expectation(&g.payoff_b, &apply4(&j, &product_state(b, a)));
            (pb - pa).abs()
        })
        .fold(0.0, f64::max);
    SymmetryCheck {
        holds: relation <= tol,
        operator_residual,
        relation_residual: Some(relation),
    }
}

/// Checks `B = T A T` and then `Pi_B` on `J T |alpha, beta>` against `Pi_A` on `J |alpha, beta>`.
pub fn check_t_symmetry(
    g: &QuantumGame,
    corr: &Correlation,
    samples: &[(QubitStrategy, QubitStrategy)],
    tol: f64,
) -> SymmetryCheck {
    let t = twist_operator();
    let operator_residual = (&g.payoff_b - &(&(&t * &g.payoff_a) * &t)).frobenius_norm();
    if operator_residual > tol {
        return SymmetryCheck {
            holds: false,
            operator_residual,
            relation_residual: None,
        };
    }
    let j = correlation_factor(corr);
    let jt = &j * &t;
    let relation = samples
        .iter()
        .map(|(a, b)| {
            let prod = product_state(a, b);
            let pa = expectation(&g.payoff_a, &apply4(&j, &prod));
            let pb = expectation(&g.payoff_b, &apply4(&jt, &prod));
            (pb - pa).abs()
        })
        .fold(0.0, f64::max);
    SymmetryCheck {
        holds: relation <= tol,
        operator_residual,
        relation_residual: Some(relation),
    }
}

/// Conjugates both payoff operators by the converter.
pub fn dual_game(g: &QuantumGame, converter: Converter) -> QuantumGame {
    let cm = converter.operator();
    let a = &(&cm * &g.payoff_a) * &cm;
    let b = &(&cm * &g.payoff_b) * &cm;
    QuantumGame::from_operators(&a, &b, 0.0).expect("permutation conjugation keeps operators diagonal")
}

/// Largest payoff mismatch between the original game and its dual on
/// converted strategies with converted correlation parameters.
pub fn duality_audit(
    g: &QuantumGame,
    converter: Converter,
    samples: &[(QubitStrategy, QubitStrategy, Correlation)],
) -> f64 {
    let dual = dual_game(g, converter);
    samples
        .iter()
        .map(|(a, b, corr)| {
            let (pa, pb) = payoffs(g, a, b, corr);
            let (ca, cb) = converter.convert(a, b);
            let (qa, qb) = payoffs(&dual, &ca, &cb, &converter.convert_correlation(corr));
            (pa - qa).abs().max((pb - qb).abs())
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeAudit {
    /// Largest payoff change when states move to `U psi` and operators to `U A U^dagger`.
    pub payoff_residual: f64,
    /// Largest off-diagonal or imaginary entry of the transformed operators.
    pub off_diagonal: f64,
    pub unitarity_residual: f64,
}

/// Duality audit for an arbitrary caller-supplied two-qubit unitary.
pub fn gauge_audit(
    g: &QuantumGame,
    u: &ComplexMatrix,
    samples: &[(QubitStrategy, QubitStrategy, Correlation)],
) -> Result<GaugeAudit> {
    if u.shape() != (4, 4) {
        return Err(Error::DimensionMismatch {
            op: "gauge_audit",
            left: u.shape(),
            right: (4, 4),
        });
    }
    let ud = u.dagger();
    let unitarity_residual = (&(&ud * u) - &ComplexMatrix::identity(4)).frobenius_norm();
    let a = &(u * &g.payoff_a) * &ud;
    let b = &(u * &g.payoff_b) * &ud;
    let mut off_diagonal: f64 = 0.0;
    for m in [&a, &b] {
        for r in 0..4 {
            for col in 0..4 {
                let z = m[(r, col)];
                off_diagonal = off_diagonal.max(if r == col { z.im.abs() } else { z.norm() });
            }
        }
    }
    let mut payoff_residual: f64 = 0.0;
    for (al, bo, corr) in samples {
        let psi = joint_state(al, bo, corr);
        let upsi = u.apply(&psi)?;
        let (pa, pb) = (expectation(&g.payoff_a, &psi), expectation(&g.payoff_b, &psi));
        let (qa, qb) = (expectation(&a, &upsi), expectation(&b, &upsi));
        payoff_residual = payoff_residual.max((pa - qa).abs()).max((pb - qb).abs());
    }
    Ok(GaugeAudit {
        payoff_residual,
        off_diagonal,
        unitarity_residual,
    })
}

/// `(Tr A, tau(A))` for a diagonal payoff operator, `tau = sum (-1)^{i+j} A_ij`.
pub fn trace_invariants(op: &ComplexMatrix) -> (f64, f64) {
    let d: Vec<f64> = (0..4).map(|k| op[(k, k)].re).collect();
    (d.iter().sum(), d[0] - d[1] - d[2] + d[3])
}

/// Seeded random strategy pairs.
pub fn random_pairs<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<(QubitStrategy, QubitStrategy)> {
    (0..n)
        .map(|_| (QubitStrategy::random(rng), QubitStrategy::random(rng)))
        .collect()
}

/// Seeded random `(alpha, beta, gamma)` triples.
pub fn random_triples<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
) -> Vec<(QubitStrategy, QubitStrategy, Correlation)> {
    (0..n)
        .map(|_| {
            (
                QubitStrategy::random(rng),
                QubitStrategy::random(rng),
                Correlation::random(rng),
            )
        })
        .collect()
}
