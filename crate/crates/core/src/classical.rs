//! Classical 2x2 bimatrix games.
//!
//! Strategies are labelled `0` and `1` for both players; `alice[i][j]` and
//! `bob[i][j]` are the payoffs when Alice plays `i` and Bob plays `j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when re-verifying candidate equilibria.
const NASH_AUDIT_TOL: f64 = 1e-12;

pub type Payoffs = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffBimatrix {
    pub alice: Payoffs,
    pub bob: Payoffs,
}

impl PayoffBimatrix {
    pub fn new(alice: Payoffs, bob: Payoffs) -> Result<Self> {
        if alice.iter().chain(&bob).flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("payoff entries".into()));
        }
        Ok(Self { alice, bob })
    }

    /// Game with `B_ji = A_ij`.
    pub fn s_symmetric(alice: Payoffs) -> Result<Self> {
        let mut bob = [[0.0; 2]; 2];
        for (i, row) in alice.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                bob[j][i] = a;
            }
        }
        Self::new(alice, bob)
    }

    /// Game with `B_{1-j,1-i} = A_ij`.
    pub fn t_symmetric(alice: Payoffs) -> Result<Self> {
        let mut bob = [[0.0; 2]; 2];
        for (i, row) in alice.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                bob[1 - j][1 - i] = a;
            }
        }
        Self::new(alice, bob)
    }

    /// Prisoners' dilemma with cooperate = 0, defect = 1.
    pub fn prisoners_dilemma() -> Self {
        Self::s_symmetric([[3.0, 0.0], [5.0, 1.0]]).expect("finite payoffs")
    }

    /// Battle of the sexes in its twist-symmetric form.
    pub fn battle_of_the_sexes() -> Self {
        Self::t_symmetric([[2.0, 0.0], [0.0, 1.0]]).expect("finite payoffs")
    }

    pub fn zero() -> Self {
        Self {
            alice: [[0.0; 2]; 2],
            bob: [[0.0; 2]; 2],
        }
    }

    /// Same game with `shift` added to every payoff of both players.
    pub fn shifted(&self, shift: f64) -> Self {
        let add = |m: Payoffs| m.map(|r| r.map(|x| x + shift));
        Self {
            alice: add(self.alice),
            bob: add(self.bob),
        }
    }
}

/// Probability vectors over each player's two strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedProfile {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl MixedProfile {
    /// Builds a profile from the probabilities of strategy `0`.
    pub fn new(x0: f64, y0: f64) -> Result<Self> {
        for p in [x0, y0] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(Self {
            x: [x0, 1.0 - x0],
            y: [y0, 1.0 - y0],
        })
    }

    pub fn pure(i: usize, j: usize) -> Self {
        let e = |k: usize| if k == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
        Self { x: e(i), y: e(j) }
    }

    /// The pure profile this represents, if any.
    pub fn as_pure(&self) -> Option<(usize, usize)> {
        let idx = |p: [f64; 2]| match p {
            [1.0, 0.0] => Some(0),
            [0.0, 1.0] => Some(1),
            _ => None,
        };
        Some((idx(self.x)?, idx(self.y)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dominance {
    pub strategy: usize,
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameClassification {
    pub s_symmetric: bool,
    pub t_symmetric: bool,
    /// Weakly dominant strategy (lowest label when both qualify).
    pub dominant_alice: Option<Dominance>,
    pub dominant_bob: Option<Dominance>,
}

pub fn classify(g: &PayoffBimatrix) -> GameClassification {
    let mut s_symmetric = true;
    let mut t_symmetric = true;
    for i in 0..2 {
        for j in 0..2 {
            s_symmetric &= g.bob[j][i] == g.alice[i][j];
            t_symmetric &= g.bob[1 - j][1 - i] == g.alice[i][j];
        }
    }
    // Alice compares rows for each Bob column; Bob compares columns for each Alice row.
    let alice_payoff = |mine: usize, other: usize| g.alice[mine][other];
    let bob_payoff = |mine: usize, other: usize| g.bob[other][mine];
    GameClassification {
        s_symmetric,
        t_symmetric,
        dominant_alice: dominance(alice_payoff),
        dominant_bob: dominance(bob_payoff),
    }
}

fn dominance(payoff: impl Fn(usize, usize) -> f64) -> Option<Dominance> {
    (0..2).find_map(|s| {
        let alt = 1 - s;
        let weak = (0..2).all(|o| payoff(s, o) >= payoff(alt, o));
        let strict = (0..2).all(|o| payoff(s, o) > payoff(alt, o));
        weak.then_some(Dominance { strategy: s, strict })
    })
}

/// `(sum x_i A_ij y_j, sum x_i B_ij y_j)`.
pub fn expected_payoffs(g: &PayoffBimatrix, p: &MixedProfile) -> (f64, f64) {
    let bilinear = |m: &Payoffs| {
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| p.x[i] * m[i][j] * p.y[j])
            .sum::<f64>()
    };
    (bilinear(&g.alice), bilinear(&g.bob))
}

/// Pure equilibria in lexicographic order.
pub fn pure_nash(g: &PayoffBimatrix) -> Vec<(usize, usize)> {
    cells()
        .filter(|&(i, j)| g.alice[i][j] >= g.alice[1 - i][j] && g.bob[i][j] >= g.bob[i][1 - j])
        .collect()
}

/// Outcomes maximizing `A_ij + B_ij`, ties in lexicographic order.
pub fn pareto_optimal(g: &PayoffBimatrix) -> Vec<(usize, usize)> {
    let total = |(i, j): (usize, usize)| g.alice[i][j] + g.bob[i][j];
    let best = cells().map(total).fold(f64::NEG_INFINITY, f64::max);
    cells().filter(|&c| total(c) == best).collect()
}

fn cells() -> impl Iterator<Item = (usize, usize)> {
    (0..2).flat_map(|i| (0..2).map(move |j| (i, j)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedNash {
    /// Pure equilibria first (lexicographic), then the interior candidate.
    pub profiles: Vec<MixedProfile>,
    /// An indifference denominator vanished; the equilibrium set may be a continuum.
    pub degenerate: bool,
}

/// All equilibria of the 2x2 game: pure ones plus the indifference solution.
pub fn mixed_nash_2x2(g: &PayoffBimatrix) -> MixedNash {
    let mut profiles: Vec<MixedProfile> = pure_nash(g)
        .into_iter()
        .map(|(i, j)| MixedProfile::pure(i, j))
        .collect();

    let (a, b) = (&g.alice, &g.bob);
    let den_x = b[0][0] - b[0][1] - b[1][0] + b[1][1];
    let den_y = a[0][0] - a[0][1] - a[1][0] + a[1][1];
    let degenerate = den_x == 0.0 || den_y == 0.0;
    if !degenerate {
        let x0 = (b[1][1] - b[1][0]) / den_x;
        let y0 = (a[1][1] - a[0][1]) / den_y;
        if let Ok(candidate) = MixedProfile::new(x0, y0) {
            let duplicate = profiles.iter().any(|p| {
                (p.x[0] - candidate.x[0]).abs() < NASH_AUDIT_TOL
                    && (p.y[0] - candidate.y[0]).abs() < NASH_AUDIT_TOL
            });
            if !duplicate && is_best_response_pair(g, &candidate, NASH_AUDIT_TOL) {
                profiles.push(candidate);
            }
        }
    }
    profiles.retain(|p| is_best_response_pair(g, p, NASH_AUDIT_TOL));
    MixedNash { profiles, degenerate }
}

/// Neither player gains more than `tol` by switching to a pure strategy.
pub fn is_best_response_pair(g: &PayoffBimatrix, p: &MixedProfile, tol: f64) -> bool {
    let (ua, ub) = expected_payoffs(g, p);
    let best_a = (0..2)
        .map(|i| expected_payoffs(g, &MixedProfile { x: MixedProfile::pure(i, 0).x, y: p.y }).0)
        .fold(f64::NEG_INFINITY, f64::max);
    let best_b = (0..2)
        .map(|j| expected_payoffs(g, &MixedProfile { x: p.x, y: MixedProfile::pure(0, j).y }).1)
        .fold(f64::NEG_INFINITY, f64::max);
    best_a - ua <= tol && best_b - ub <= tol
}
