//! Discretized supersymmetric quantum mechanics on a Dirichlet grid.
//!
//! `A- = -D + diag(v)` with `D` the forward difference and `A+ = (A-)^T`, so
//! `H0 = A+ A-` and `H1 = A- A+` are built from operator products and every
//! superalgebra identity holds to rounding. Positive spectra of the two
//! sectors coincide exactly because `A-` is square.

mod sparse;

use std::fmt;
use std::str::FromStr;

use rayon::join;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{re, verdict, ComplexMatrix, MatrixProperty, SymTridiagonal};

pub use sparse::SparseOperator;

const MIN_POINTS: usize = 16;
/// Zero modes: `|lambda| < ZERO_MODE_FRACTION * (spectral range)`.
pub const ZERO_MODE_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "coefficients", rename_all = "lowercase")]
pub enum Superpotential {
    Zero,
    Linear,
    Tanh,
    /// `c0 + c1 x + c2 x^2 + ...`
    Poly(Vec<f64>),
}

impl Superpotential {
    pub fn v(&self, x: f64) -> f64 {
        match self {
            Superpotential::Zero => 0.0,
            Superpotential::Linear => x,
            Superpotential::Tanh => x.tanh(),
            Superpotential::Poly(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
        }
    }

    pub fn v_prime(&self, x: f64) -> f64 {
        match self {
            Superpotential::Zero => 0.0,
            Superpotential::Linear => 1.0,
            Superpotential::Tanh => 1.0 / x.cosh().powi(2),
            Superpotential::Poly(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, &ck)| acc * x + k as f64 * ck),
        }
    }
}

impl fmt::Display for Superpotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Superpotential::Zero => write!(f, "zero"),
            Superpotential::Linear => write!(f, "linear"),
            Superpotential::Tanh => write!(f, "tanh"),
            Superpotential::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for Superpotential {
    type Err = Error;

    /// `zero`, `linear`, `tanh` or `poly:c0,c1,...`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Superpotential::Zero),
            "linear" => Ok(Superpotential::Linear),
            "tanh" => Ok(Superpotential::Tanh),
            _ => {
                let coeffs = s
                    .strip_prefix("poly:")
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown potential '{s}'")))?;
                let c = coeffs
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| Error::InvalidArgument(format!("bad coefficient '{t}' in '{s}'")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Ok(Superpotential::Poly(c))
            }
        }
    }
}

/// `n` interior points `x_i = x_min + (i + 1) h`, `h = (x_max - x_min) / (n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub h: f64,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::NonFinite("grid bounds".into()));
        }
        if x_min >= x_max {
            return Err(Error::InvalidArgument(format!("empty interval [{x_min}, {x_max}]")));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidArgument(format!("grid needs at least {MIN_POINTS} points, got {n}")));
        }
        Ok(Self {
            x_min,
            x_max,
            n,
            h: (x_max - x_min) / (n + 1) as f64,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x_min + self.h * (i + 1) as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedSSQM {
    pub superpotential: Superpotential,
    pub grid: Grid,
    pub a_minus: SparseOperator,
    pub a_plus: SparseOperator,
    pub h0: SparseOperator,
    pub h1: SparseOperator,
    /// `[[0, A+], [0, 0]]`.
    pub q_plus: SparseOperator,
    /// `[[0, 0], [A-, 0]]`.
    pub q_minus: SparseOperator,
    pub q: SparseOperator,
    /// `diag(H0, H1)`.
    pub h: SparseOperator,
    /// `diag(I, -I)`.
    pub grading: SparseOperator,
    pub stencil: StencilReport,
}

/// `H0` against the direct stencil `-Laplacian + v^2 + v'` on a Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StencilReport {
    /// Max-norm difference relative to the max norm of the stencil image.
    pub relative_difference: f64,
    pub h: f64,
}

pub fn build(sp: &Superpotential, grid: &Grid) -> Result<DiscretizedSSQM> {
    let n = grid.n;
    let xs = grid.points();
    let v: Vec<f64> = xs.iter().map(|&x| sp.v(x)).collect();
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite(format!("superpotential at x = {}", xs[i])));
    }
    let inv_h = 1.0 / grid.h;
    let a_minus = SparseOperator::from_triplets(
        n,
        n,
        (0..n)
            .map(|i| (i, i, inv_h + v[i]))
            .chain((0..n - 1).map(|i| (i, i + 1, -inv_h))),
    )?;
    let a_plus = a_minus.transpose();
    let h0 = a_plus.matmul(&a_minus)?;
    let h1 = a_minus.matmul(&a_plus)?;
    let q_plus = SparseOperator::block2x2([[None, Some(&a_plus)], [None, None]], n)?;
    let q_minus = SparseOperator::block2x2([[None, None], [Some(&a_minus), None]], n)?;
    let q = q_plus.add_scaled(&q_minus, 1.0)?;
    let h = SparseOperator::block2x2([[Some(&h0), None], [None, Some(&h1)]], n)?;
    let id = SparseOperator::identity(n);
    let minus_id = id.scale(-1.0);
    let grading = SparseOperator::block2x2([[Some(&id), None], [None, Some(&minus_id)]], n)?;
    let stencil = stencil_report(sp, grid, &h0)?;
    Ok(DiscretizedSSQM {
        superpotential: sp.clone(),
        grid: *grid,
        a_minus,
        a_plus,
        h0,
        h1,
        q_plus,
        q_minus,
        q,
        h,
        grading,
        stencil,
    })
}

fn stencil_report(sp: &Superpotential, grid: &Grid, h0: &SparseOperator) -> Result<StencilReport> {
    let xs = grid.points();
    let center = 0.5 * (grid.x_min + grid.x_max);
    let width = 0.1 * (grid.x_max - grid.x_min);
    let psi: Vec<f64> = xs.iter().map(|&x| (-((x - center) / width).powi(2)).exp()).collect();
    let n = grid.n;
    let h2 = grid.h * grid.h;
    let direct: Vec<f64> = (0..n)
        .map(|i| {
            let left = if i > 0 { psi[i - 1] } else { 0.0 };
            let right = if i + 1 < n { psi[i + 1] } else { 0.0 };
            let x = xs[i];
            -(left - 2.0 * psi[i] + right) / h2 + (sp.v(x).powi(2) + sp.v_prime(x)) * psi[i]
        })
        .collect();
    let built = h0.matvec(&psi)?;
    let scale = direct.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let diff = built.iter().zip(&direct).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(StencilReport {
        relative_difference: diff / scale.max(f64::MIN_POSITIVE),
        h: grid.h,
    })
}

/// Superalgebra residuals, each divided by `||H||_F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperalgebraReport {
    pub h_norm: f64,
    pub q_plus_squared: f64,
    pub q_minus_squared: f64,
    pub anticommutator_minus_h: f64,
    pub q_squared_minus_h: f64,
    pub h_commutes_q_plus: f64,
    pub h_commutes_q_minus: f64,
    pub h_commutes_q: f64,
    pub grading_anticommutes_q: f64,
    pub grading_commutes_h: f64,
    /// `H0 A+ - A+ H1`.
    pub intertwining_plus: f64,
    /// `A- H0 - H1 A-`.
    pub intertwining_minus: f64,
}

impl SuperalgebraReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.q_plus_squared,
            self.q_minus_squared,
            self.anticommutator_minus_h,
            self.q_squared_minus_h,
            self.h_commutes_q_plus,
            self.h_commutes_q_minus,
            self.h_commutes_q,
            self.grading_anticommutes_q,
            self.grading_commutes_h,
            self.intertwining_plus,
            self.intertwining_minus,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn check_superalgebra(d: &DiscretizedSSQM) -> Result<SuperalgebraReport> {
    let h_norm = d.h.frobenius_norm();
    let rel = |m: SparseOperator| m.frobenius_norm() / h_norm.max(f64::MIN_POSITIVE);
    let diff = |a: SparseOperator, b: &SparseOperator| -> Result<f64> { Ok(rel(a.add_scaled(b, -1.0)?)) };
    Ok(SuperalgebraReport {
        h_norm,
        q_plus_squared: rel(d.q_plus.matmul(&d.q_plus)?),
        q_minus_squared: rel(d.q_minus.matmul(&d.q_minus)?),
        anticommutator_minus_h: diff(d.q_plus.anticommutator(&d.q_minus)?, &d.h)?,
        q_squared_minus_h: diff(d.q.matmul(&d.q)?, &d.h)?,
        h_commutes_q_plus: rel(d.h.commutator(&d.q_plus)?),
        h_commutes_q_minus: rel(d.h.commutator(&d.q_minus)?),
        h_commutes_q: rel(d.h.commutator(&d.q)?),
        grading_anticommutes_q: rel(d.grading.anticommutator(&d.q)?),
        grading_commutes_h: rel(d.grading.commutator(&d.h)?),
        intertwining_plus: diff(d.h0.matmul(&d.a_plus)?, &d.a_plus.matmul(&d.h1)?)?,
        intertwining_minus: diff(d.a_minus.matmul(&d.h0)?, &d.h1.matmul(&d.a_minus)?)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedLevel {
    pub lambda0: f64,
    pub lambda1: f64,
    /// `|lambda0 - lambda1| / max(lambda0, lambda1)`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigs_h0: Vec<f64>,
    pub eigs_h1: Vec<f64>,
    pub paired: Vec<PairedLevel>,
    /// Zero modes among the computed levels of `(H0, H1)`.
    pub zero_modes: (usize, usize),
    pub zero_threshold: f64,
    pub max_gap: f64,
    pub tolerance: f64,
    pub pairs_within_tolerance: bool,
}

fn spectral_range(t: &SymTridiagonal) -> Result<f64> {
    Ok(t.eigenvalue(t.len() - 1)? - t.eigenvalue(0)?)
}

/// Lowest `k` levels of each sector with positive levels paired in order.
pub fn partner_spectra(d: &DiscretizedSSQM, k: usize, tol: f64) -> Result<SpectrumReport> {
    if k == 0 || k > d.grid.n / 4 {
        return Err(Error::InvalidArgument(format!(
            "levels {k} must lie in 1..={} for n = {}",
            d.grid.n / 4,
            d.grid.n
        )));
    }
    let t0 = d.h0.to_sym_tridiagonal()?;
    let t1 = d.h1.to_sym_tridiagonal()?;
    let (r0, r1) = join(
        || t0.lowest_eigenvalues(k).and_then(|e| Ok((e, spectral_range(&t0)?))),
        || t1.lowest_eigenvalues(k).and_then(|e| Ok((e, spectral_range(&t1)?))),
    );
    let (eigs_h0, range0) = r0?;
    let (eigs_h1, range1) = r1?;
    let zero_threshold = ZERO_MODE_FRACTION * range0.max(range1);
    let positive = |e: &[f64]| e.iter().copied().filter(|x| x.abs() >= zero_threshold).collect::<Vec<f64>>();
    let (p0, p1) = (positive(&eigs_h0), positive(&eigs_h1));
    let paired: Vec<PairedLevel> = p0
        .iter()
        .zip(&p1)
        .map(|(&a, &b)| PairedLevel {
            lambda0: a,
            lambda1: b,
            gap: (a - b).abs() / a.abs().max(b.abs()),
        })
        .collect();
    let max_gap = paired.iter().map(|p| p.gap).fold(0.0, f64::max);
    Ok(SpectrumReport {
        zero_modes: (eigs_h0.len() - p0.len(), eigs_h1.len() - p1.len()),
        eigs_h0,
        eigs_h1,
        paired,
        zero_threshold,
        max_gap,
        tolerance: tol,
        pairs_within_tolerance: max_gap <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqrtNotReport {
    /// `||(sqrt NOT)^2 - X||`.
    pub square_residual: f64,
    pub unitarity_residual: f64,
    /// `(sqrt NOT)^2 |0> = |1>` and `(sqrt NOT)^2 |1> = |0>`.
    pub action_residuals: [f64; 2],
    pub fourth_power_residual: f64,
    pub commutes_with_x: f64,
    pub pass: bool,
}

pub fn sqrt_not_check() -> Result<SqrtNotReport> {
    let s = gates::sqrt_not();
    let x = gates::pauli_x();
    let sq = &s * &s;
    let square_residual = (&sq - &x).frobenius_norm();
    let unitarity_residual = verdict(&s, MatrixProperty::Unitary, 0.0)?.residual;
    let ket = |k: usize| ComplexMatrix::column(&[re(if k == 0 { 1.0 } else { 0.0 }), re(if k == 1 { 1.0 } else { 0.0 })]);
    let action_residuals = [
        (&(&sq * &ket(0)) - &ket(1)).frobenius_norm(),
        (&(&sq * &ket(1)) - &ket(0)).frobenius_norm(),
    ];
    let fourth_power_residual = (&(&sq * &sq) - &ComplexMatrix::identity(2)).frobenius_norm();
    let commutes_with_x = s.commutator(&x).frobenius_norm();
    let tol = 1e-15;
    let pass = [square_residual, unitarity_residual, fourth_power_residual, commutes_with_x]
        .into_iter()
        .chain(action_residuals)
        .all(|r| r <= tol);
    Ok(SqrtNotReport {
        square_residual,
        unitarity_residual,
        action_residuals,
        fourth_power_residual,
        commutes_with_x,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipReport {
    pub energy: f64,
    pub partner_energy: f64,
    /// `|<psi1, A- psi0>| / ||A- psi0||` for unit eigenvectors.
    pub overlap: f64,
    /// `||Q^2 psi - E psi|| / E`.
    pub q_squared_residual: f64,
    /// `||S Q psi + Q S psi||`.
    pub grading_residual: f64,
    /// Norm of the upper (grading +1) component of `Q psi`.
    pub upper_component: f64,
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Maps the lowest positive `H0` level into the `H1` sector with the supercharge.
pub fn supercharge_flip_demo(d: &DiscretizedSSQM) -> Result<FlipReport> {
    let k = (d.grid.n / 4).min(4);
    let spec = partner_spectra(d, k, f64::INFINITY)?;
    let pair = spec
        .paired
        .first()
        .copied()
        .ok_or_else(|| Error::Verification("no positive paired level".into()))?;
    let t0 = d.h0.to_sym_tridiagonal()?;
    let t1 = d.h1.to_sym_tridiagonal()?;
    let psi0 = t0.eigenvector(pair.lambda0);
    let psi1 = t1.eigenvector(pair.lambda1);

    let n = d.grid.n;
    let mut state = psi0.clone();
    state.extend(std::iter::repeat_n(0.0, n));
    let image = d.q.matvec(&state)?;
    let upper_component = norm(&image[..n]);
    let mut lower_unit = image[n..].to_vec();
    normalize(&mut lower_unit);
    let overlap = lower_unit.iter().zip(&psi1).map(|(a, b)| a * b).sum::<f64>().abs();

    let q2 = d.q.matvec(&image)?;
    let q_squared_residual = q2
        .iter()
        .zip(&state)
        .map(|(a, b)| (a - pair.lambda0 * b).powi(2))
        .sum::<f64>()
        .sqrt()
        / pair.lambda0;

    let s_of_q = d.grading.matvec(&image)?;
    let q_of_s = d.q.matvec(&d.grading.matvec(&state)?)?;
    let grading_residual = norm(&s_of_q.iter().zip(&q_of_s).map(|(a, b)| a + b).collect::<Vec<f64>>());
    Ok(FlipReport {
        energy: pair.lambda0,
        partner_energy: pair.lambda1,
        overlap,
        q_squared_residual,
        grading_residual,
        upper_component,
    })
}
