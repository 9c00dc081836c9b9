//! Equilibrium structure across the correlation parameter plane.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_s_symmetry, check_t_symmetry, nash_search, random_pairs, Correlation, QuantumGame};
use crate::error::{Error, Result};

pub const SWEEP_CSV_HEADER: &str =
    "gamma1,gamma2,ne_count,theta_a,phi_a,theta_b,phi_b,payoff_a,payoff_b,s_residual,t_residual";

const SYMMETRY_SAMPLES: usize = 16;
const SYMMETRY_SEED: u64 = 0x5eed;
const SYMMETRY_TOL: f64 = 1e-10;

/// One equilibrium cluster at one grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma1: f64,
    pub gamma2: f64,
    pub ne_count: usize,
    pub theta_a: f64,
    pub phi_a: f64,
    pub theta_b: f64,
    pub phi_b: f64,
    pub payoff_a: f64,
    pub payoff_b: f64,
    /// Relation residual when `B = S A S` holds, otherwise the operator residual.
    pub s_residual: f64,
    pub t_residual: f64,
}

/// Runs [`nash_search`] on a `grid_gamma x grid_gamma` grid over `[0, 2 pi)^2`.
///
/// Rows are ordered by `(gamma1, gamma2)` index, then by cluster.
pub fn gamma_sweep(g: &QuantumGame, grid_gamma: usize, grid_strategy: usize, epsilon: f64) -> Result<Vec<SweepRow>> {
    if grid_gamma < 8 {
        return Err(Error::InvalidArgument(format!("gamma grid {grid_gamma} below 8")));
    }
    let samples = random_pairs(&mut StdRng::seed_from_u64(SYMMETRY_SEED), SYMMETRY_SAMPLES);
    let step = TAU / grid_gamma as f64;
    let cells: Vec<Result<Vec<SweepRow>>> = (0..grid_gamma * grid_gamma)
        .into_par_iter()
        .map(|cell| {
            let corr = Correlation::new((cell / grid_gamma) as f64 * step, (cell % grid_gamma) as f64 * step)?;
            let report = nash_search(g, &corr, grid_strategy, epsilon)?;
            let s = check_s_symmetry(g, &corr, &samples, SYMMETRY_TOL).residual();
            let t = check_t_symmetry(g, &corr, &samples, SYMMETRY_TOL).residual();
            Ok(report
                .profiles
                .iter()
                .zip(&report.payoffs)
                .map(|((a, b), (pa, pb))| SweepRow {
                    gamma1: corr.gamma1,
                    gamma2: corr.gamma2,
                    ne_count: report.cluster_count(),
                    theta_a: a.theta(),
                    phi_a: a.phi(),
                    theta_b: b.theta(),
                    phi_b: b.phi(),
                    payoff_a: *pa,
                    payoff_b: *pb,
                    s_residual: s,
                    t_residual: t,
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for cell in cells {
        rows.extend(cell?);
    }
    Ok(rows)
}

/// CSV text with [`SWEEP_CSV_HEADER`]; angles and payoffs fixed to six decimals,
/// residuals in scientific notation with six significant digits.
pub fn write_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{:.6},{:.6},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.5e},{:.5e}",
            r.gamma1,
            r.gamma2,
            r.ne_count,
            r.theta_a,
            r.phi_a,
            r.theta_b,
            r.phi_b,
            r.payoff_a,
            r.payoff_b,
            r.s_residual,
            r.t_residual
        );
    }
    out
}
