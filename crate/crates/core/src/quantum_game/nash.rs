//! Best responses and epsilon-Nash search over the qubit strategy sphere.
//!
//! For a fixed opponent the responder's payoff is a Hermitian quadratic form
//! `s^dagger M s` in its own amplitudes, so the supremum over all strategies
//! is the top eigenvalue of the 2x2 matrix `M`. The grid search below is
//! audited against that value.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{correlation_factor, payoffs, Correlation, QuantumGame, QubitStrategy};
use crate::error::{Error, Result};
use crate::linalg::{re, Complex, ComplexMatrix};

const MIN_GRID: usize = 8;
const REFINE_STEP: f64 = 1e-9;
const MAX_REFINE_MOVES: usize = 100_000;
/// Cluster radius in units of the azimuthal grid spacing.
const CLUSTER_RADIUS: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub strategy: QubitStrategy,
    pub payoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub correlation: Correlation,
    /// One representative per cluster, in grid order.
    pub profiles: Vec<(QubitStrategy, QubitStrategy)>,
    pub payoffs: Vec<(f64, f64)>,
    /// Audited `(alice, bob)` best-response gains for each representative.
    pub deficits: Vec<(f64, f64)>,
    pub epsilon: f64,
    pub grid_resolution: usize,
    /// Deficits are measured against the continuous supremum, not the grid.
    pub refined: bool,
    /// Every grid pair passed the audit; a single representative is listed.
    pub saturated: bool,
    /// Grid pairs that passed before clustering.
    pub candidates: usize,
}

impl EquilibriumReport {
    pub fn cluster_count(&self) -> usize {
        self.profiles.len()
    }
}

type Block = [[Complex; 2]; 2];
/// A reduced form with its top eigenvalue.
type Form = (Block, f64);

/// `J^dagger A J` and `J^dagger B J` as dense 4x4 arrays.
struct Kernel {
    a: [[Complex; 4]; 4],
    b: [[Complex; 4]; 4],
}

impl Kernel {
    fn new(g: &QuantumGame, corr: &Correlation) -> Self {
        let j = correlation_factor(corr);
        let jd = j.dagger();
        let dense = |m: &ComplexMatrix| {
            let t = &(&jd * m) * &j;
            let mut out = [[re(0.0); 4]; 4];
            for (r, row) in out.iter_mut().enumerate() {
                for (col, x) in row.iter_mut().enumerate() {
                    *x = t[(r, col)];
                }
            }
            out
        };
        Self {
            a: dense(g.payoff_a()),
            b: dense(g.payoff_b()),
        }
    }

    /// The responder's quadratic form with the opponent's amplitudes contracted out.
    fn reduced(&self, who: Player, opp: &[Complex; 2]) -> Block {
        let mut m = [[re(0.0); 2]; 2];
        for (x, row) in m.iter_mut().enumerate() {
            for (y, entry) in row.iter_mut().enumerate() {
                let mut acc = re(0.0);
                for (u, ou) in opp.iter().enumerate() {
                    for (v, ov) in opp.iter().enumerate() {
                        let (r, col, k) = match who {
                            Player::Alice => (2 * x + u, 2 * y + v, &self.a),
                            Player::Bob => (2 * u + x, 2 * v + y, &self.b),
                        };
                        acc += ou.conj() * k[r][col] * ov;
                    }
                }
                *entry = acc;
            }
        }
        m
    }
}

fn form(m: &Block, s: &[Complex; 2]) -> f64 {
    let mut acc = re(0.0);
    for x in 0..2 {
        for y in 0..2 {
            acc += s[x].conj() * m[x][y] * s[y];
        }
    }
    acc.re
}

fn top_eigenvalue(m: &Block) -> f64 {
    let (a, d) = (m[0][0].re, m[1][1].re);
    let off = 0.5 * (m[0][1] + m[1][0].conj());
    0.5 * (a + d) + (0.25 * (a - d).powi(2) + off.norm_sqr()).sqrt()
}

/// Supremum of the responder's payoff over all pure qubit strategies.
pub fn best_response_value(g: &QuantumGame, opponent: &QubitStrategy, corr: &Correlation, who: Player) -> f64 {
    top_eigenvalue(&Kernel::new(g, corr).reduced(who, &opponent.amplitudes()))
}

fn grid_strategies(n: usize) -> Vec<QubitStrategy> {
    let dtheta = PI / (n - 1) as f64;
    let dphi = TAU / n as f64;
    (0..n)
        .flat_map(|k| {
            (0..n).map(move |l| {
                let theta = if k == n - 1 { PI } else { k as f64 * dtheta };
                QubitStrategy {
                    theta,
                    phi: l as f64 * dphi,
                }
            })
        })
        .collect()
}

fn check_grid(grid_n: usize) -> Result<()> {
    if grid_n < MIN_GRID {
        return Err(Error::InvalidArgument(format!("grid size {grid_n} below {MIN_GRID}")));
    }
    Ok(())
}

/// Grid scan followed by coordinate ascent with step halving.
///
/// Ties resolve to the smallest `(theta, phi)`; refinement moves only on a
/// strict improvement.
pub fn best_response(
    g: &QuantumGame,
    opponent: &QubitStrategy,
    corr: &Correlation,
    who: Player,
    grid_n: usize,
) -> Result<BestResponse> {
    check_grid(grid_n)?;
    let m = Kernel::new(g, corr).reduced(who, &opponent.amplitudes());
    let eval = |s: &QubitStrategy| form(&m, &s.amplitudes());

    let mut best = QubitStrategy::zero();
    let mut best_val = f64::NEG_INFINITY;
    for s in grid_strategies(grid_n) {
        let v = eval(&s);
        if v > best_val {
            best = s;
            best_val = v;
        }
    }

    let noise = 1e-14 * (1.0 + best_val.abs());
    let mut step_theta = PI / (grid_n - 1) as f64;
    let mut step_phi = TAU / grid_n as f64;
    let mut moves = 0;
    while (step_theta >= REFINE_STEP || step_phi >= REFINE_STEP) && moves < MAX_REFINE_MOVES {
        let trials = [
            polar_step(best.theta - step_theta, best.phi),
            polar_step(best.theta + step_theta, best.phi),
            (best.theta, super::wrap_angle(best.phi - step_phi)),
            (best.theta, super::wrap_angle(best.phi + step_phi)),
        ];
        let mut moved = false;
        for (theta, phi) in trials {
            let s = QubitStrategy { theta, phi };
            let v = eval(&s);
            if v > best_val + noise {
                best = s;
                best_val = v;
                moved = true;
                moves += 1;
                break;
            }
        }
        if !moved {
            step_theta *= 0.5;
            step_phi *= 0.5;
        }
    }
    Ok(BestResponse {
        strategy: best,
        payoff: best_val,
    })
}

/// Continues a meridian step through a pole onto the opposite meridian.
fn polar_step(theta: f64, phi: f64) -> (f64, f64) {
    if theta < 0.0 {
        (-theta, super::wrap_angle(phi + PI))
    } else if theta > PI {
        (TAU - theta, super::wrap_angle(phi + PI))
    } else {
        (theta, phi)
    }
}

/// Epsilon-equilibria among all grid profile pairs, clustered by ray distance.
pub fn nash_search(g: &QuantumGame, corr: &Correlation, grid_n: usize, epsilon: f64) -> Result<EquilibriumReport> {
    check_grid(grid_n)?;
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be positive")));
    }
    let kernel = Kernel::new(g, corr);
    let grid = grid_strategies(grid_n);
    let amps: Vec<[Complex; 2]> = grid.iter().map(QubitStrategy::amplitudes).collect();

    // Alice's form against each Bob strategy, and Bob's against each Alice strategy.
    let (alice_forms, bob_forms): (Vec<Form>, Vec<Form>) = amps
        .par_iter()
        .map(|s| {
            let ma = kernel.reduced(Player::Alice, s);
            let mb = kernel.reduced(Player::Bob, s);
            ((ma, top_eigenvalue(&ma)), (mb, top_eigenvalue(&mb)))
        })
        .unzip();

    let total = grid.len() * grid.len();
    let passing: Vec<(usize, usize)> = (0..grid.len())
        .into_par_iter()
        .flat_map_iter(|ia| {
            let (amps, alice_forms, bob_forms) = (&amps, &alice_forms, &bob_forms);
            (0..amps.len()).filter_map(move |ib| {
                let (ma, sup_a) = &alice_forms[ib];
                let (mb, sup_b) = &bob_forms[ia];
                let da = sup_a - form(ma, &amps[ia]);
                let db = sup_b - form(mb, &amps[ib]);
                (da <= epsilon && db <= epsilon).then_some((ia, ib))
            })
        })
        .collect();

    let saturated = passing.len() == total;
    let reps: Vec<(usize, usize)> = if saturated {
        vec![passing[0]]
    } else {
        cluster(&grid, &passing, CLUSTER_RADIUS * TAU / grid_n as f64)
    };

    let mut report = EquilibriumReport {
        correlation: *corr,
        profiles: Vec::new(),
        payoffs: Vec::new(),
        deficits: Vec::new(),
        epsilon,
        grid_resolution: grid_n,
        refined: true,
        saturated,
        candidates: passing.len(),
    };
    for (ia, ib) in reps {
        let (a, b) = (grid[ia], grid[ib]);
        let (pa, pb) = payoffs(g, &a, &b, corr);
        let da = best_response_value(g, &b, corr, Player::Alice) - pa;
        let db = best_response_value(g, &a, corr, Player::Bob) - pb;
        if da <= epsilon && db <= epsilon {
            report.profiles.push((a, b));
            report.payoffs.push((pa, pb));
            report.deficits.push((da, db));
        }
    }
    Ok(report)
}

/// Greedy clustering in grid order: a pair joins the first cluster whose
/// representative is within `radius` for both players.
fn cluster(grid: &[QubitStrategy], passing: &[(usize, usize)], radius: f64) -> Vec<(usize, usize)> {
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for &(ia, ib) in passing {
        let near = reps.iter().any(|&(ra, rb)| {
            grid[ia].ray_distance(&grid[ra]) <= radius && grid[ib].ray_distance(&grid[rb]) <= radius
        });
        if !near {
            reps.push((ia, ib));
        }
    }
    reps
}
