use std::path::{Path, PathBuf};

use qgame_core::braid::{self, VerifyOptions};
use qgame_core::classical::{
    classify, expected_payoffs, mixed_nash_2x2, pareto_optimal, pure_nash, MixedProfile, PayoffBimatrix,
};
use qgame_core::entanglement::{concurrence, factorize, is_product, Factorization, TwoQubitState};
use qgame_core::gates;
use qgame_core::linalg::{re, Complex, ComplexMatrix};
use qgame_core::quantum_game::{
    check_s_symmetry, check_t_symmetry, gamma_sweep, nash_search, payoffs, random_pairs, write_sweep_csv,
    Correlation, QuantumGame, QubitStrategy, SymmetryCheck,
};
use qgame_core::ssqm::{self, Grid, Superpotential};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::json;

use crate::game_file::GameDefinitionFile;
use crate::{CliError, Result, RunReport};

pub const DEFAULT_TOL: f64 = 1e-10;

const SYMMETRY_SAMPLES: usize = 32;
const SQRT_NOT_TOL: f64 = 1e-15;
/// Amplitude vectors this far from unit norm are renormalized with a warning.
const RENORMALIZE_WARN: f64 = 1e-12;
const RENORMALIZE_MAX: f64 = 1e-6;

fn density(psi: &[Complex]) -> ComplexMatrix {
    let col = ComplexMatrix::column(psi);
    &col * &col.dagger()
}

fn conjugate(u: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    &(u * rho) * &u.dagger()
}

/// Bob plays Hadamard, Alice flips with probability `p`, Bob plays Hadamard again.
pub fn cmd_pennyflip(p: f64, tol: f64) -> Result<RunReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::Invalid(format!("flip probability {p} outside [0, 1]")));
    }
    let mut report = RunReport::new("pennyflip", json!({ "alice_flip_prob": p, "tol": tol }));
    let h = gates::hadamard();
    let f = gates::bit_flip_f();
    let rho = conjugate(&h, &density(&[re(1.0), re(0.0)]));
    let mixed = &conjugate(&gates::identity2(), &rho).scale_re(1.0 - p) + &conjugate(&f, &rho).scale_re(p);
    let fin = conjugate(&h, &mixed);
    let quantum = fin[(0, 0)].re;

    // Classical coin: Bob flips with probability 1/2 on both turns.
    let flip = |q: f64, heads: f64| (1.0 - q) * heads + q * (1.0 - heads);
    let classical = flip(0.5, flip(p, flip(0.5, 1.0)));

    report.check("quantum: 1 - P(bob wins)", (1.0 - quantum).abs(), tol);
    report.check("classical: |P(bob wins) - 1/2|", (classical - 0.5).abs(), tol);
    Ok(report.finish(json!({
        "quantum_bob_wins": quantum,
        "classical_bob_wins": classical,
        "final_density_trace": fin.trace().re,
    })))
}

fn load_game(path: &Path) -> Result<(GameDefinitionFile, PayoffBimatrix)> {
    let file = GameDefinitionFile::load(path)?;
    let g = file.bimatrix(path)?;
    Ok((file, g))
}

/// Largest gain either player gets from a pure deviation.
fn deviation_gain(g: &PayoffBimatrix, p: &MixedProfile) -> f64 {
    let (ua, ub) = expected_payoffs(g, p);
    let alice = (0..2)
        .map(|i| expected_payoffs(g, &MixedProfile { x: MixedProfile::pure(i, 0).x, y: p.y }).0 - ua)
        .fold(0.0, f64::max);
    let bob = (0..2)
        .map(|j| expected_payoffs(g, &MixedProfile { x: p.x, y: MixedProfile::pure(0, j).y }).1 - ub)
        .fold(0.0, f64::max);
    alice.max(bob)
}

pub fn cmd_classical(path: &Path, tol: f64) -> Result<RunReport> {
    let (file, g) = load_game(path)?;
    let mut report = RunReport::new("classical", json!({ "path": path, "game": file, "tol": tol }));
    let mixed = mixed_nash_2x2(&g);
    let mut equilibria = Vec::new();
    for (k, p) in mixed.profiles.iter().enumerate() {
        report.check(format!("nash[{k}]: deviation gain"), deviation_gain(&g, p), tol);
        equilibria.push(json!({
            "profile": p,
            "pure": p.as_pure(),
            "payoffs": expected_payoffs(&g, p),
        }));
    }
    let pure = pure_nash(&g);
    Ok(report.finish(json!({
        "bimatrix": g,
        "classification": classify(&g),
        "pure_nash": pure,
        "equilibria": equilibria,
        "degenerate": mixed.degenerate,
        "saturated": pure.len() == 4,
        "pareto_optimal": pareto_optimal(&g),
    })))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum QgameAction {
    Payoff {
        theta_a: f64,
        phi_a: f64,
        theta_b: f64,
        phi_b: f64,
    },
    Nash {
        grid: usize,
        epsilon: f64,
    },
    Sweep {
        grid_gamma: usize,
        grid_strategy: usize,
        epsilon: f64,
        csv: Option<PathBuf>,
    },
}

fn symmetry_json(c: &SymmetryCheck) -> serde_json::Value {
    json!({
        "operator_identity": c.relation_residual.is_some(),
        "operator_residual": c.operator_residual,
        "relation_residual": c.relation_residual,
    })
}

pub fn cmd_qgame(
    path: &Path,
    gamma: (f64, f64),
    action: &QgameAction,
    tol: f64,
    seed: u64,
) -> Result<RunReport> {
    let (file, bimatrix) = load_game(path)?;
    let corr = Correlation::new(gamma.0, gamma.1)?;
    let g = QuantumGame::new(bimatrix);
    let mut report = RunReport::new(
        "qgame",
        json!({
            "path": path,
            "game": file,
            "gamma": [gamma.0, gamma.1],
            "command": action,
            "tol": tol,
            "seed": seed,
        }),
    );

    // Only a symmetry whose operator identity holds is a pass/fail check.
    let samples = random_pairs(&mut StdRng::seed_from_u64(seed), SYMMETRY_SAMPLES);
    let s = check_s_symmetry(&g, &corr, &samples, tol);
    let t = check_t_symmetry(&g, &corr, &samples, tol);
    for (name, c) in [("s_symmetry: relation", &s), ("t_symmetry: relation", &t)] {
        if let Some(r) = c.relation_residual {
            report.check(name, r, tol);
        }
    }
    let symmetry = json!({ "s": symmetry_json(&s), "t": symmetry_json(&t) });

    let results = match action {
        QgameAction::Payoff {
            theta_a,
            phi_a,
            theta_b,
            phi_b,
        } => {
            let alice = QubitStrategy::new(*theta_a, *phi_a)?;
            let bob = QubitStrategy::new(*theta_b, *phi_b)?;
            let (pa, pb) = payoffs(&g, &alice, &bob, &corr);
            json!({ "payoffs": [pa, pb], "symmetry": symmetry })
        }
        QgameAction::Nash { grid, epsilon } => {
            let eq = nash_search(&g, &corr, *grid, *epsilon)?;
            for (k, (da, db)) in eq.deficits.iter().enumerate() {
                report.check(format!("nash[{k}]: deficit"), da.max(*db), *epsilon);
            }
            json!({ "equilibria": eq, "symmetry": symmetry })
        }
        QgameAction::Sweep {
            grid_gamma,
            grid_strategy,
            epsilon,
            csv,
        } => {
            let rows = gamma_sweep(&g, *grid_gamma, *grid_strategy, *epsilon)?;
            let max = |f: fn(&qgame_core::quantum_game::SweepRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
            if s.relation_residual.is_some() {
                report.check("sweep: max s_residual", max(|r| r.s_residual), tol);
            }
            if t.relation_residual.is_some() {
                report.check("sweep: max t_residual", max(|r| r.t_residual), tol);
            }
            let text = write_sweep_csv(&rows);
            if let Some(out) = csv {
                std::fs::write(out, &text).map_err(|source| CliError::Io {
                    path: out.clone(),
                    source,
                })?;
            }
            json!({
                "rows": rows.len(),
                "cells": grid_gamma * grid_gamma,
                "csv": csv,
                "sweep": rows,
                "symmetry": symmetry,
            })
        }
    };
    Ok(report.finish(results))
}

pub fn cmd_braid_verify(strict_paper: bool) -> Result<RunReport> {
    let opts = VerifyOptions {
        strict_paper,
        ..VerifyOptions::default()
    };
    let mut report = RunReport::new("braid verify", &opts);
    let suite = braid::verify(&opts)?;
    for c in suite.checks.iter().filter(|c| !c.informational) {
        report.check(c.name.clone(), c.residual, c.tolerance);
    }
    report.corrections = suite.corrections.clone();
    Ok(report.finish(&suite))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsqmOptions {
    pub potential: Superpotential,
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub levels: usize,
    /// Relative tolerance for paired positive levels.
    pub pair_tol: f64,
    /// Superalgebra residual tolerance, relative to `||H||`.
    pub algebra_tol: f64,
}

pub fn cmd_ssqm(opts: &SsqmOptions) -> Result<RunReport> {
    let mut report = RunReport::new("ssqm spectrum", opts);
    let grid = Grid::new(opts.x_min, opts.x_max, opts.n)?;
    let d = ssqm::build(&opts.potential, &grid)?;
    let spectrum = ssqm::partner_spectra(&d, opts.levels, opts.pair_tol)?;
    let algebra = ssqm::check_superalgebra(&d)?;
    let sqrt_not = ssqm::sqrt_not_check()?;
    let flip = ssqm::supercharge_flip_demo(&d)?;

    report.check("spectrum: max pair gap", spectrum.max_gap, opts.pair_tol);
    report.check("superalgebra: max residual", algebra.max_residual(), opts.algebra_tol);
    report.check("sqrt_not: square - X", sqrt_not.square_residual, SQRT_NOT_TOL);
    report.check("sqrt_not: unitarity", sqrt_not.unitarity_residual, SQRT_NOT_TOL);
    report.check(
        "sqrt_not: actions",
        sqrt_not.action_residuals[0].max(sqrt_not.action_residuals[1]),
        SQRT_NOT_TOL,
    );
    report.check("sqrt_not: fourth power - I", sqrt_not.fourth_power_residual, SQRT_NOT_TOL);
    report.check("supercharge: 1 - overlap", 1.0 - flip.overlap, opts.pair_tol);
    Ok(report.finish(json!({
        "spectrum": spectrum,
        "superalgebra": algebra,
        "stencil": d.stencil,
        "sqrt_not": sqrt_not,
        "supercharge_flip": flip,
    })))
}

/// `amps` holds `(re, im)` pairs for `c00, c01, c10, c11`.
pub fn cmd_entangle(amps: [f64; 8], tol: f64) -> Result<RunReport> {
    if amps.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Invalid("amplitudes must be finite".into()));
    }
    let mut report = RunReport::new("entangle", json!({ "amplitudes": amps, "tol": tol }));
    let v: Vec<Complex> = amps.chunks(2).map(|p| Complex::new(p[0], p[1])).collect();
    let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if norm_sqr == 0.0 {
        return Err(CliError::Invalid("zero amplitude vector".into()));
    }
    let deviation = (norm_sqr.sqrt() - 1.0).abs();
    if deviation > RENORMALIZE_MAX {
        return Err(CliError::Invalid(format!(
            "amplitudes have norm {}, more than {RENORMALIZE_MAX:e} from 1",
            norm_sqr.sqrt()
        )));
    }
    if deviation > RENORMALIZE_WARN {
        report
            .warnings
            .push(format!("renormalized amplitudes (norm deviation {deviation:.3e})"));
    }
    let state = TwoQubitState::normalized(&v)?;
    let verdict = is_product(&state, tol);
    let factorization = factorize(&state, tol);
    if let Factorization::Product { residual, .. } = &factorization {
        report.check("factorization residual", *residual, tol);
    }
    Ok(report.finish(json!({
        "state": state,
        "product": verdict.product,
        "concurrence": concurrence(&state),
        "verdict": verdict,
        "factorization": factorization,
    })))
}
