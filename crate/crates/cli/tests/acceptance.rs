//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! `acceptance_report` prints every line and fails on any criterion outside
//! [`UNATTAINABLE`]. Those are printed as FAIL and kept as ignored strict tests
//! so `cargo test -- --ignored` shows the real failure.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use qgame_cli::cmd_pennyflip;
use qgame_core::braid::{self, VerifyOptions};
use qgame_core::classical::{expected_payoffs, MixedProfile, PayoffBimatrix};
use qgame_core::entanglement::{concurrence, factorize, Factorization, TwoQubitState};
use qgame_core::linalg::ComplexMatrix;
use qgame_core::quantum_game::{
    check_s_symmetry, check_t_symmetry, correlation_factor, dual_game, joint_state, nash_search, payoffs,
    trace_invariants, Converter, Correlation, QuantumGame, QubitStrategy,
};
use qgame_core::ssqm::{self, Grid, Superpotential};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SEED: u64 = 20_240_601;
/// Criteria with a clause that cannot hold; see `criterion_10_clause_c`.
const UNATTAINABLE: &[u8] = &[10];

struct Outcome {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(id: u8, title: &'static str, limit: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (mut pass, mut detail) = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            pass = false;
            detail.push_str(&format!("; runtime {elapsed:?} over {limit:?}"));
        }
    }
    Outcome {
        id,
        title,
        pass,
        detail,
        elapsed,
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn criterion_1() -> Outcome {
    timed(1, "penny flip always won", secs(1), || {
        let worst = (0..100)
            .map(|k| {
                let r = cmd_pennyflip(k as f64 / 99.0, 1e-12).expect("valid probability");
                (1.0 - r.results["quantum_bob_wins"].as_f64().unwrap()).abs()
            })
            .fold(0.0, f64::max);
        (worst <= 1e-12, format!("max |1 - P(win)| = {worst:.2e} over 100 p"))
    })
}

fn criterion_2() -> Outcome {
    timed(2, "sqrt NOT squares to X", None, || {
        let r = ssqm::sqrt_not_check().unwrap();
        let actions = r.action_residuals[0].max(r.action_residuals[1]);
        (
            r.square_residual <= 1e-15 && actions <= 1e-15,
            format!("square {:.2e}, actions {:.2e}", r.square_residual, actions),
        )
    })
}

fn criterion_3() -> Outcome {
    timed(3, "SSQM superalgebra", secs(5), || {
        let mut rng = StdRng::seed_from_u64(SEED);
        let cubic = Superpotential::Poly((0..4).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let grid = Grid::new(-10.0, 10.0, 500).unwrap();
        let mut worst: f64 = 0.0;
        for sp in [Superpotential::Zero, Superpotential::Linear, Superpotential::Tanh, cubic] {
            let d = ssqm::build(&sp, &grid).unwrap();
            let r = ssqm::check_superalgebra(&d).unwrap();
            worst = [
                r.q_plus_squared,
                r.q_minus_squared,
                r.anticommutator_minus_h,
                r.h_commutes_q,
                r.grading_anticommutes_q,
                r.intertwining_plus,
            ]
            .into_iter()
            .fold(worst, f64::max);
        }
        (worst <= 1e-12, format!("max residual / ||H|| = {worst:.2e}"))
    })
}

fn criterion_4() -> Outcome {
    timed(4, "SSQM isospectrality", secs(30), || {
        let d = ssqm::build(&Superpotential::Linear, &Grid::new(-10.0, 10.0, 4000).unwrap()).unwrap();
        let s = ssqm::partner_spectra(&d, 6, 1e-8).unwrap();
        let pairs = &s.paired[..5.min(s.paired.len())];
        let gap = pairs.iter().map(|p| p.gap).fold(0.0, f64::max);
        let oracle = s
            .eigs_h1
            .iter()
            .take(5)
            .enumerate()
            .map(|(k, e)| (e - 2.0 * k as f64).abs())
            .fold(0.0, f64::max);
        (
            pairs.len() == 5 && gap <= 1e-8 && oracle <= 5e-3,
            format!("{} pairs, max rel gap {gap:.2e}, H1 vs {{0,2,4,6,8}} {oracle:.2e}", pairs.len()),
        )
    })
}

fn criterion_5() -> Outcome {
    timed(5, "braid suite", secs(5), || {
        let r = braid::verify(&VerifyOptions::default()).unwrap();
        let required = [
            "bell R: braid relation",
            "normalized unitarity",
            "CNOT = M R N",
            "eigenvalues 1+-i",
            "spectral relation on 5x5 grid",
            "H hermitian",
            "H eigenvalues +-1/2",
            "H = -(i/2) b_n^2",
        ];
        let missing: Vec<&str> = required
            .iter()
            .copied()
            .filter(|k| !r.checks.iter().any(|c| c.name.contains(k) && c.pass))
            .collect();
        let failing: Vec<&str> = r
            .checks
            .iter()
            .filter(|c| !c.informational && !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        (
            r.pass && missing.is_empty() && !r.cnot.variants.is_empty(),
            format!(
                "{} checks, failing {failing:?}, missing {missing:?}, {} CNOT sign variants logged",
                r.checks.len(),
                r.cnot.variants.len()
            ),
        )
    })
}

fn criterion_6() -> Outcome {
    timed(6, "classical limit", None, || {
        let mut rng = StdRng::seed_from_u64(SEED);
        let g = QuantumGame::new(PayoffBimatrix::prisoners_dilemma());
        let worst = (0..100)
            .map(|_| {
                let (a, b) = (QubitStrategy::random(&mut rng), QubitStrategy::random(&mut rng));
                let q = payoffs(&g, &a, &b, &Correlation::classical());
                let p = MixedProfile::new(a.probability_zero(), b.probability_zero()).unwrap();
                let c = expected_payoffs(g.source(), &p);
                (q.0 - c.0).abs().max((q.1 - c.1).abs())
            })
            .fold(0.0, f64::max);
        (worst <= 1e-12, format!("max payoff difference {worst:.2e}"))
    })
}

fn criterion_7() -> Outcome {
    timed(7, "symmetry relations", None, || {
        let mut rng = StdRng::seed_from_u64(SEED);
        let pd = QuantumGame::new(PayoffBimatrix::prisoners_dilemma());
        let bos = QuantumGame::new(PayoffBimatrix::battle_of_the_sexes());
        let (mut s, mut t): (f64, f64) = (0.0, 0.0);
        for _ in 0..100 {
            let pair = [(QubitStrategy::random(&mut rng), QubitStrategy::random(&mut rng))];
            let corr = Correlation::random(&mut rng);
            s = s.max(check_s_symmetry(&pd, &corr, &pair, 1e-12).relation_residual.unwrap_or(f64::INFINITY));
            t = t.max(check_t_symmetry(&bos, &corr, &pair, 1e-12).relation_residual.unwrap_or(f64::INFINITY));
        }
        (s <= 1e-12 && t <= 1e-12, format!("S (PD) {s:.2e}, T (BoS) {t:.2e}"))
    })
}

fn criterion_8() -> Outcome {
    timed(8, "duality maps", None, || {
        let mut rng = StdRng::seed_from_u64(SEED);
        let ca = Converter::Alice.operator();
        let conj = |m: &ComplexMatrix| &(&ca * m) * &ca;
        let j_res = (0..50)
            .map(|_| {
                let c = Correlation::random(&mut rng);
                (&conj(&correlation_factor(&c)) - &correlation_factor(&c.swapped())).frobenius_norm()
            })
            .fold(0.0, f64::max);
        let pd = QuantumGame::new(PayoffBimatrix::prisoners_dilemma());
        let dual = dual_game(&pd, Converter::Alice);
        let (tr, tau) = trace_invariants(pd.payoff_a());
        let (dtr, dtau) = trace_invariants(dual.payoff_a());
        let (trb, taub) = trace_invariants(pd.payoff_b());
        let (dtrb, dtaub) = trace_invariants(dual.payoff_b());
        let traces = tr == dtr && tau == -dtau && trb == dtrb && taub == -dtaub;
        let t = check_t_symmetry(&dual, &Correlation::classical(), &[], 0.0);
        (
            j_res <= 1e-12 && traces && t.operator_residual == 0.0,
            format!(
                "C_A J C_A vs J(swapped) {j_res:.2e}; Tr {tr} -> {dtr}, tau {tau} -> {dtau}; dual B - TAT {:.1e}",
                t.operator_residual
            ),
        )
    })
}

fn criterion_9() -> Outcome {
    timed(9, "equilibrium recovery", secs(60), || {
        let corr = Correlation::classical();
        let pd = nash_search(&QuantumGame::new(PayoffBimatrix::prisoners_dilemma()), &corr, 32, 1e-6).unwrap();
        let pd_ok = pd.cluster_count() == 1 && {
            let (a, b) = pd.profiles[0];
            let (pa, pb) = pd.payoffs[0];
            a.theta() == PI && b.theta() == PI && (pa - 1.0).abs() <= 1e-9 && (pb - 1.0).abs() <= 1e-9
        };
        let bos = nash_search(&QuantumGame::new(PayoffBimatrix::battle_of_the_sexes()), &corr, 32, 1e-6).unwrap();
        let thetas: Vec<(f64, f64)> = bos.profiles.iter().map(|(a, b)| (a.theta(), b.theta())).collect();
        let bos_ok = thetas == [(0.0, 0.0), (PI, PI)];
        (
            pd_ok && bos_ok,
            format!("PD {:?} payoffs {:?}; BoS thetas {thetas:?}", pd.profiles.len(), pd.payoffs),
        )
    })
}

fn criterion_10_clause_a() -> (bool, String) {
    let c = concurrence(&TwoQubitState::bell_phi_plus());
    (c == 1.0, format!("Bell concurrence {c}"))
}

fn criterion_10_clause_b() -> (bool, String) {
    match factorize(&TwoQubitState::uniform(), 1e-12) {
        Factorization::Product { residual, .. } => (residual <= 1e-12, format!("z factor residual {residual:.2e}")),
        Factorization::Entangled { .. } => (false, "z reported entangled".into()),
    }
}

fn criterion_10_clause_c() -> (bool, String) {
    let zero = QubitStrategy::zero();
    let psi = joint_state(&zero, &zero, &Correlation::new(0.0, PI).unwrap());
    let c = concurrence(&TwoQubitState::from_amplitudes(&psi).unwrap());
    ((c - 1.0).abs() <= 1e-12, format!("J(0,pi)|00> concurrence {c:.3e}"))
}

fn criterion_10() -> Outcome {
    timed(10, "entanglement", None, || {
        let parts = [criterion_10_clause_a(), criterion_10_clause_b(), criterion_10_clause_c()];
        let pass = parts.iter().all(|p| p.0);
        let detail = parts.iter().map(|p| p.1.as_str()).collect::<Vec<_>>().join("; ");
        (pass, detail)
    })
}

fn criterion_11() -> Outcome {
    timed(11, "strict audit", None, || {
        let det = braid::printed_bell_r().determinant().unwrap().norm();
        let strict = braid::verify(&VerifyOptions {
            strict_paper: true,
            ..VerifyOptions::default()
        })
        .unwrap();
        let unitarity_fails = strict.checks.iter().any(|c| c.name == "bell R: unitarity" && !c.pass);
        let adopted = braid::verify(&VerifyOptions::default()).unwrap();
        let ids: Vec<&str> = adopted.corrections.iter().map(|c| c.id.as_str()).collect();
        let expected = [
            "bell-r-last-row",
            "n2-normalization",
            "bgr-entry-2-3",
            "spectral-entry-2-3",
            "r-theta-prefactor",
            "yang-baxterization-formula",
        ];
        (
            det <= 1e-12 && unitarity_fails && !strict.pass && strict.corrections.is_empty() && ids == expected,
            format!("printed |det| {det:.1e}; strict pass {}; corrections {ids:?}", strict.pass),
        )
    })
}

#[test]
fn acceptance_report() {
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
    ];
    // Written straight to stdout so the lines survive the test harness's capture.
    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        let mark = if o.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{mark} criterion {:>2} {}: {} [{:?}]", o.id, o.title, o.detail, o.elapsed).unwrap();
    }
    drop(out);
    let unexpected: Vec<u8> = outcomes
        .iter()
        .filter(|o| !o.pass && !UNATTAINABLE.contains(&o.id))
        .map(|o| o.id)
        .collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:?}");
    // The attainable clauses of criterion 10 still gate the suite.
    assert!(criterion_10_clause_a().0);
    assert!(criterion_10_clause_b().0);
}

#[test]
#[ignore = "unattainable: J(0, pi) maps |00> to i|11>, a product state"]
fn criterion_10_correlated_zero_strategies_are_maximally_entangled() {
    let (pass, detail) = criterion_10_clause_c();
    assert!(pass, "{detail}");
}
