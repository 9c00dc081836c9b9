//! Pure two-qubit states: separability, concurrence and the diagonal-swap map.
//!
//! Amplitudes are stored in basis order `|00>, |01>, |10>, |11>`. The
//! alternative listing `a0|00> + a1|10> + a2|01> + a3|11>` is accepted through
//! [`TwoQubitState::from_a_order`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{re, verdict, Complex, ComplexMatrix, MatrixProperty, MatrixVerdict};

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitState {
    pub c00: Complex,
    pub c01: Complex,
    pub c10: Complex,
    pub c11: Complex,
}

impl TwoQubitState {
    /// Rejects states whose squared norm differs from 1 by more than `1e-12`.
    pub fn new(c00: Complex, c01: Complex, c10: Complex, c11: Complex) -> Result<Self> {
        let s = Self { c00, c01, c10, c11 };
        if s.amplitudes().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes".into()));
        }
        let norm_sqr = s.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(s)
    }

    pub fn from_amplitudes(v: &[Complex]) -> Result<Self> {
        match v {
            &[c00, c01, c10, c11] => Self::new(c00, c01, c10, c11),
            _ => Err(Error::InvalidArgument(format!("two-qubit state needs 4 amplitudes, got {}", v.len()))),
        }
    }

    /// `a0|00> + a1|10> + a2|01> + a3|11>`.
    pub fn from_a_order(a: [Complex; 4]) -> Result<Self> {
        Self::new(a[0], a[2], a[1], a[3])
    }

    /// Scales a nonzero vector to unit norm.
    pub fn normalized(v: &[Complex]) -> Result<Self> {
        let n = crate::linalg::vec_norm(v);
        if n.is_nan() || n <= 0.0 {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        let scaled: Vec<Complex> = v.iter().map(|z| z / n).collect();
        Self::from_amplitudes(&scaled)
    }

    pub fn amplitudes(&self) -> [Complex; 4] {
        [self.c00, self.c01, self.c10, self.c11]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `c00 c11 - c01 c10`.
    pub fn determinant(&self) -> Complex {
        self.c00 * self.c11 - self.c01 * self.c10
    }

    pub fn bell_phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            c00: re(h),
            c01: re(0.0),
            c10: re(0.0),
            c11: re(h),
        }
    }

    /// Uniform superposition `(|00> + |01> + |10> + |11>) / 2`.
    pub fn uniform() -> Self {
        Self {
            c00: re(0.5),
            c01: re(0.5),
            c10: re(0.5),
            c11: re(0.5),
        }
    }

    pub fn basis(i: usize, j: usize) -> Result<Self> {
        if i > 1 || j > 1 {
            return Err(Error::InvalidArgument(format!("basis label ({i}, {j})")));
        }
        let mut a = [re(0.0); 4];
        a[2 * i + j] = re(1.0);
        Self::from_amplitudes(&a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementVerdict {
    /// `|c00 c11 - c01 c10| <= tol`.
    pub product: bool,
    /// `2 |c00 c11 - c01 c10|`.
    pub concurrence: f64,
    /// `|c00 c11 - c01 c10|`.
    pub residual: f64,
}

pub fn is_product(s: &TwoQubitState, tol: f64) -> EntanglementVerdict {
    let residual = s.determinant().norm();
    EntanglementVerdict {
        product: residual <= tol,
        concurrence: concurrence(s),
        residual,
    }
}

/// `2 |c00 c11 - c01 c10|`, divided by the squared norm so that rounding in
/// the amplitudes does not push the value past 1.
pub fn concurrence(s: &TwoQubitState) -> f64 {
    (2.0 * s.determinant().norm() / s.norm_sqr()).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Factorization {
    Product {
        alice: [Complex; 2],
        bob: [Complex; 2],
        /// Frobenius norm of the reconstruction error.
        residual: f64,
    },
    /// Residuals of `c00 = a0 b0`, `c01 = a0 b1`, `c10 = a1 b0`, `c11 = a1 b1`
    /// for the rank-one fit through the dominant row.
    Entangled { residuals: [f64; 4] },
}

/// Splits a product state into normalized single-qubit factors.
///
/// Alice's first nonzero amplitude is made real and positive.
pub fn factorize(s: &TwoQubitState, tol: f64) -> Factorization {
    let (alice, bob) = rank_one_fit(s);
    let fit = [alice[0] * bob[0], alice[0] * bob[1], alice[1] * bob[0], alice[1] * bob[1]];
    let amps = s.amplitudes();
    let mut residuals = [0.0; 4];
    for k in 0..4 {
        residuals[k] = (amps[k] - fit[k]).norm();
    }
    if !is_product(s, tol).product {
        return Factorization::Entangled { residuals };
    }
    let residual = residuals.iter().map(|r| r * r).sum::<f64>().sqrt();
    Factorization::Product { alice, bob, residual }
}

fn rank_one_fit(s: &TwoQubitState) -> ([Complex; 2], [Complex; 2]) {
    let rows = [[s.c00, s.c01], [s.c10, s.c11]];
    let row_norm = |r: &[Complex; 2]| (r[0].norm_sqr() + r[1].norm_sqr()).sqrt();
    let dominant = if row_norm(&rows[1]) > row_norm(&rows[0]) { 1 } else { 0 };
    let n = row_norm(&rows[dominant]);
    let mut bob = [rows[dominant][0] / n, rows[dominant][1] / n];
    let mut alice = [0, 1].map(|i| rows[i][0] * bob[0].conj() + rows[i][1] * bob[1].conj());
    let k = if alice[0].norm() > 0.0 { 0 } else { 1 };
    let anchor = alice[k];
    let phase = anchor / anchor.norm();
    alice = alice.map(|z| z / phase);
    alice[k] = re(anchor.norm());
    bob = bob.map(|z| z * phase);
    (alice, bob)
}

/// The map `|00> -> a0|00>, |01> -> a3|10>, |10> -> a2|01>, |11> -> a1|11>`.
pub fn rbar_matrix(a: [Complex; 4]) -> ComplexMatrix {
    let z = re(0.0);
    ComplexMatrix::from_rows(&[
        [a[0], z, z, z],
        [z, z, a[2], z],
        [z, a[3], z, z],
        [z, z, z, a[1]],
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbarReport {
    pub matrix: ComplexMatrix,
    pub unitarity: MatrixVerdict,
    /// `|a_k| - 1` for each coefficient.
    pub modulus_deviation: [f64; 4],
    /// Image of the caller's state (not renormalized).
    pub image: [Complex; 4],
    /// Verdict on the normalized image of the uniform product state.
    pub uniform_image: Option<EntanglementVerdict>,
    /// `a0 a1 != a2 a3` at tolerance.
    pub criterion_entangled: bool,
    /// The coefficient criterion and the determinant verdict agree.
    pub criterion_agrees: bool,
}

pub fn rbar_apply(a: [Complex; 4], state: &TwoQubitState, tol: f64) -> Result<RbarReport> {
    let m = rbar_matrix(a);
    if m.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("map coefficients".into()));
    }
    let unitarity = verdict(&m, MatrixProperty::Unitary, tol)?;
    let image_vec = m.apply(&state.amplitudes())?;
    let image = [image_vec[0], image_vec[1], image_vec[2], image_vec[3]];
    let uniform_image = TwoQubitState::normalized(&m.apply(&TwoQubitState::uniform().amplitudes())?)
        .ok()
        .map(|s| is_product(&s, tol));
    let criterion_entangled = (a[0] * a[1] - a[2] * a[3]).norm() > tol;
    let criterion_agrees = uniform_image.is_none_or(|v| v.product != criterion_entangled);
    Ok(RbarReport {
        matrix: m,
        unitarity,
        modulus_deviation: a.map(|z| z.norm() - 1.0),
        image,
        uniform_image,
        criterion_entangled,
        criterion_agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, hermitian_eigs};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn bell_state_is_maximally_entangled() {
        let v = is_product(&TwoQubitState::bell_phi_plus(), 1e-12);
        assert!(!v.product);
        assert_eq!(v.concurrence, 1.0);
    }

    #[test]
    fn uniform_state_is_product() {
        let v = is_product(&TwoQubitState::uniform(), 1e-12);
        assert!(v.product);
        assert_eq!(v.concurrence, 0.0);
        let Factorization::Product { alice, bob, residual } = factorize(&TwoQubitState::uniform(), 1e-12) else {
            panic!("uniform state must factorize");
        };
        assert!(residual <= 1e-12);
        for q in [alice, bob] {
            assert!((q[0] - re(FRAC_1_SQRT_2)).norm() < 1e-15 && (q[1] - re(FRAC_1_SQRT_2)).norm() < 1e-15);
        }
    }

    #[test]
    fn odd_bell_state_is_entangled() {
        let h = re(FRAC_1_SQRT_2);
        let s = TwoQubitState::new(re(0.0), h, h, re(0.0)).unwrap();
        assert!(!is_product(&s, 1e-12).product);
    }

    #[test]
    fn basis_state_factors() {
        let s = TwoQubitState::basis(0, 1).unwrap();
        let Factorization::Product { alice, bob, .. } = factorize(&s, 1e-12) else {
            panic!("basis state must factorize");
        };
        assert_eq!(alice, [re(1.0), re(0.0)]);
        assert_eq!(bob, [re(0.0), re(1.0)]);
    }

    #[test]
    fn bell_factorization_fails_with_inconsistent_equation() {
        let Factorization::Entangled { residuals } = factorize(&TwoQubitState::bell_phi_plus(), 1e-12) else {
            panic!("Bell state must not factorize");
        };
        assert_eq!(residuals[..3], [0.0, 0.0, 0.0]);
        assert!((residuals[3] - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_state() {
        assert!(matches!(
            TwoQubitState::new(re(1.0), re(1.0), re(0.0), re(0.0)),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn a_order_mapping() {
        let s = TwoQubitState::from_a_order([re(0.0), re(1.0), re(0.0), re(0.0)]).unwrap();
        assert_eq!(s, TwoQubitState::basis(1, 0).unwrap());
    }

    #[test]
    fn rbar_examples() {
        let one = re(1.0);
        let u = TwoQubitState::uniform();
        let r = rbar_apply([one; 4], &u, 1e-12).unwrap();
        assert!(r.unitarity.pass && r.uniform_image.unwrap().product && r.criterion_agrees);

        let r = rbar_apply([one, -one, one, one], &u, 1e-12).unwrap();
        assert!(!r.uniform_image.unwrap().product && r.criterion_entangled && r.criterion_agrees);

        let i = c(0.0, 1.0);
        let r = rbar_apply([i; 4], &u, 1e-12).unwrap();
        assert!(r.uniform_image.unwrap().product && r.criterion_agrees);

        let r = rbar_apply([re(2.0), one, one, one], &u, 1e-12).unwrap();
        assert!(!r.unitarity.pass);
        assert_eq!(r.modulus_deviation[0], 1.0);
    }

    #[test]
    fn rbar_action_on_basis() {
        let a = [re(1.0), re(2.0), re(3.0), re(4.0)];
        let m = rbar_matrix(a);
        let e = |k: usize| {
            let mut v = vec![re(0.0); 4];
            v[k] = re(1.0);
            v
        };
        assert_eq!(m.apply(&e(1)).unwrap(), e(2).iter().map(|z| z * 4.0).collect::<Vec<_>>());
        assert_eq!(m.apply(&e(2)).unwrap(), e(1).iter().map(|z| z * 3.0).collect::<Vec<_>>());
        assert_eq!(m.apply(&e(3)).unwrap(), e(3).iter().map(|z| z * 2.0).collect::<Vec<_>>());
    }

    fn random_state() -> impl Strategy<Value = TwoQubitState> {
        prop::array::uniform8(-1.0f64..1.0)
            .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
            .prop_map(|v| {
                let a: Vec<Complex> = (0..4).map(|k| c(v[2 * k], v[2 * k + 1])).collect();
                TwoQubitState::normalized(&a).unwrap()
            })
    }

    fn random_unitary() -> impl Strategy<Value = ComplexMatrix> {
        (0.0f64..std::f64::consts::PI, 0.0f64..6.3, 0.0f64..6.3, 0.0f64..6.3).prop_map(|(t, p, q, g)| {
            let (s, co) = (t / 2.0).sin_cos();
            let a = Complex::from_polar(co, p);
            let b = Complex::from_polar(s, q);
            ComplexMatrix::from_rows(&[[a, -b.conj()], [b, a.conj()]]).scale(Complex::from_polar(1.0, g))
        })
    }

    fn product_state() -> impl Strategy<Value = TwoQubitState> {
        (prop::array::uniform4(-1.0f64..1.0), prop::array::uniform4(-1.0f64..1.0))
            .prop_filter("nonzero", |(a, b)| a.iter().any(|x| x.abs() > 1e-2) && b.iter().any(|x| x.abs() > 1e-2))
            .prop_map(|(a, b)| {
                let (a0, a1) = (c(a[0], a[1]), c(a[2], a[3]));
                let (b0, b1) = (c(b[0], b[1]), c(b[2], b[3]));
                TwoQubitState::normalized(&[a0 * b0, a0 * b1, a1 * b0, a1 * b1]).unwrap()
            })
    }

    /// Smallest singular value of the amplitude matrix.
    fn sigma_min(s: &TwoQubitState) -> f64 {
        let m = ComplexMatrix::from_rows(&[[s.c00, s.c01], [s.c10, s.c11]]);
        let e = hermitian_eigs(&(&m.dagger() * &m)).unwrap();
        e.values[0].max(0.0).sqrt()
    }

    proptest! {
        #[test]
        fn concurrence_is_local_unitary_invariant(s in random_state(), u in random_unitary(), v in random_unitary()) {
            let moved = u.kron(&v).apply(&s.amplitudes()).unwrap();
            let t = TwoQubitState::from_amplitudes(&moved).unwrap();
            prop_assert!((concurrence(&t) - concurrence(&s)).abs() < 1e-12);
        }

        #[test]
        fn product_states_factorize(s in product_state()) {
            prop_assert!(is_product(&s, 1e-10).product);
            prop_assert!(sigma_min(&s) < 1e-7);
            match factorize(&s, 1e-10) {
                Factorization::Product { alice, bob, residual } => {
                    prop_assert!(residual <= 1e-10);
                    prop_assert!((alice[0].norm_sqr() + alice[1].norm_sqr() - 1.0).abs() < 1e-12);
                    prop_assert!((bob[0].norm_sqr() + bob[1].norm_sqr() - 1.0).abs() < 1e-12);
                    let lead = if alice[0].norm() > 0.0 { alice[0] } else { alice[1] };
                    prop_assert!(lead.im == 0.0 && lead.re > 0.0);
                }
                Factorization::Entangled { .. } => prop_assert!(false, "product state rejected"),
            }
        }

        #[test]
        fn verdict_matches_rank_oracle(s in random_state()) {
            // sigma_min * sigma_max = |det|.
            let v = is_product(&s, 1e-10);
            let smin = sigma_min(&s);
            prop_assert_eq!(v.product, v.residual <= 1e-10);
            if smin > 1e-4 {
                prop_assert!(!v.product);
                let entangled = matches!(factorize(&s, 1e-10), Factorization::Entangled { .. });
                prop_assert!(entangled);
            }
        }

        #[test]
        fn unimodular_rbar_preserves_norm(s in random_state(), p in prop::array::uniform4(0.0f64..6.3)) {
            let a = p.map(|x| Complex::from_polar(1.0, x));
            let r = rbar_apply(a, &s, 1e-12).unwrap();
            prop_assert!(r.unitarity.pass);
            prop_assert!((crate::linalg::vec_norm(&r.image) - 1.0).abs() < 1e-12);
            prop_assert!(r.criterion_agrees);
        }
    }
}
