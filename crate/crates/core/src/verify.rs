//! Best-response oracles, equilibrium certificates and the block-level
//! variable-rate simulation.
//!
//! Expectations against a continuous c.d.f. are Riemann-Stieltjes sums. The
//! payoff jumps where the destination stops decoding, so every jump and kink
//! of the integrand is inserted into the quadrature grid before the
//! trapezoid rule is applied; atoms are added exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticSolution, PiecewiseCdf};
use crate::channel::CornerPoints;
use crate::discrete::{MatrixGameSolution, PayoffMatrix};
use crate::payoff::{boundary_d, boundary_e, secrecy_payoff, RatePair, ReducedGame};
use crate::strategy::MixedStrategy;

/// Default number of uniform quadrature nodes over a support.
pub const QUADRATURE_NODES: usize = 4001;

/// Offset used to evaluate one-sided limits at a breakpoint. Must exceed
/// the region-membership slack.
const ONE_SIDED: f64 = 1e-9;

/// Which player's rate the mixed strategy ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Jammer,
}

fn payoff_at(side: Side, mixed_rate: f64, pure_rate: f64, c: &CornerPoints) -> f64 {
    match side {
        Side::Source => secrecy_payoff(RatePair::new(mixed_rate, pure_rate), c),
        Side::Jammer => secrecy_payoff(RatePair::new(pure_rate, mixed_rate), c),
    }
}

/// Points where `R_s` as a function of the mixed rate jumps or kinks.
fn discontinuities(side: Side, pure_rate: f64, c: &CornerPoints) -> Vec<f64> {
    match side {
        Side::Source => vec![boundary_d(pure_rate, c), boundary_e(pure_rate, c)],
        Side::Jammer => vec![
            c.sum_d - pure_rate,
            c.sum_e - pure_rate,
            c.big_delta_r,
            c.big_omega_r,
            c.small_delta_r,
            c.small_omega_r,
        ],
    }
}

/// `E[f(X)]` for `X` distributed per `strategy`, with `breaks` inserted into
/// the quadrature grid of the continuous part.
pub fn stieltjes_expectation(strategy: &MixedStrategy, f: impl Fn(f64) -> f64, breaks: &[f64], nodes: usize) -> f64 {
    match strategy {
        MixedStrategy::Discrete(d) => d.rates().iter().zip(d.probs()).map(|(&r, &p)| p * f(r)).sum(),
        MixedStrategy::Continuous(cdf) => {
            let atoms: f64 = cdf.atoms().iter().map(|a| a.mass * f(a.location)).sum();
            atoms + continuous_integral(cdf, &f, breaks, nodes)
        }
    }
}

fn continuous_integral(cdf: &PiecewiseCdf, f: &impl Fn(f64) -> f64, breaks: &[f64], nodes: usize) -> f64 {
    let (lo, hi) = (cdf.support_start, cdf.support_end());
    let n = nodes.max(2) - 1;
    let mut grid: Vec<f64> = (0..=n).map(|k| lo + cdf.edge * k as f64 / n as f64).collect();
    grid.extend(cdf.seams().map(|s| lo + cdf.edge * s));
    grid.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut total = 0.0;
    let mut f_prev = cdf.continuous_part(grid[0]);
    for w in grid.windows(2) {
        let (p, q) = (w[0], w[1]);
        let f_next = cdf.continuous_part(q);
        let mass = f_next - f_prev;
        f_prev = f_next;
        if mass == 0.0 {
            continue;
        }
        let h = q - p;
        let mean = if h > 4.0 * ONE_SIDED { 0.5 * (f(p + ONE_SIDED) + f(q - ONE_SIDED)) } else { f(0.5 * (p + q)) };
        total += mean * mass;
    }
    total
}

/// Expected payoff of `strategy` (played by `side`) against a pure rate of
/// the other player.
pub fn expected_payoff_vs(strategy: &MixedStrategy, side: Side, pure_rate: f64, c: &CornerPoints) -> f64 {
    expected_payoff_vs_with(strategy, side, pure_rate, c, QUADRATURE_NODES)
}

pub fn expected_payoff_vs_with(
    strategy: &MixedStrategy,
    side: Side,
    pure_rate: f64,
    c: &CornerPoints,
    nodes: usize,
) -> f64 {
    let breaks = discontinuities(side, pure_rate, c);
    stieltjes_expectation(strategy, |x| payoff_at(side, x, pure_rate, c), &breaks, nodes)
}

/// `E[R_s]` under independent play of both strategies.
pub fn expected_payoff_pair(
    source: &MixedStrategy,
    jammer: &MixedStrategy,
    c: &CornerPoints,
    outer_nodes: usize,
    inner_nodes: usize,
) -> f64 {
    // Against a fixed jammer law the source's payoff drops wherever a jammer
    // atom crosses the destination boundary.
    let breaks: Vec<f64> = jammer.atoms().iter().map(|a| c.sum_d - a.location).collect();
    stieltjes_expectation(
        source,
        |xi| expected_payoff_vs_with(jammer, Side::Jammer, xi, c, inner_nodes),
        &breaks,
        outer_nodes,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub claimed_value: f64,
    pub best_response_source: f64,
    pub best_response_jammer: f64,
    pub epsilon: f64,
    pub passed: bool,
}

impl EquilibriumReport {
    fn new(claimed_value: f64, best_response_source: f64, best_response_jammer: f64, epsilon: f64) -> Self {
        let passed = best_response_source <= claimed_value + epsilon && best_response_jammer >= claimed_value - epsilon;
        Self { claimed_value, best_response_source, best_response_jammer, epsilon, passed }
    }
}

/// Both players' mixed strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    pub source: MixedStrategy,
    pub jammer: MixedStrategy,
}

impl StrategyProfile {
    pub fn from_analytic(sol: &AnalyticSolution) -> Self {
        Self { source: sol.cdf_source.clone().into(), jammer: sol.cdf_jammer.clone().into() }
    }

    pub fn from_matrix(pm: &PayoffMatrix, sol: &MatrixGameSolution) -> Self {
        Self { source: pm.source_strategy(sol).into(), jammer: pm.jammer_strategy(sol).into() }
    }
}

/// A solution to certify, with the value it claims.
#[derive(Debug, Clone, Copy)]
pub enum Claim<'a> {
    Analytic(&'a AnalyticSolution),
    Discrete(&'a PayoffMatrix, &'a MatrixGameSolution),
}

impl Claim<'_> {
    pub fn value(&self) -> f64 {
        match self {
            Claim::Analytic(s) => s.value,
            Claim::Discrete(_, s) => s.value,
        }
    }

    pub fn profile(&self) -> StrategyProfile {
        match self {
            Claim::Analytic(s) => StrategyProfile::from_analytic(s),
            Claim::Discrete(pm, s) => StrategyProfile::from_matrix(pm, s),
        }
    }
}

/// Scans pure replies over `grid_points` uniform rates per side of the
/// reduced square, plus the exact rates where a reply captures or drops an
/// atom of the opponent.
pub fn equilibrium_check(
    claim: Claim<'_>,
    rg: &ReducedGame,
    c: &CornerPoints,
    grid_points: usize,
    epsilon: f64,
) -> EquilibriumReport {
    equilibrium_check_against(&claim.profile(), claim.value(), rg, c, grid_points, epsilon)
}

pub fn equilibrium_check_against(
    profile: &StrategyProfile,
    claimed_value: f64,
    rg: &ReducedGame,
    c: &CornerPoints,
    grid_points: usize,
    epsilon: f64,
) -> EquilibriumReport {
    let (best_source, best_jammer) = best_responses(profile, rg, c, grid_points);
    EquilibriumReport::new(claimed_value, best_source, best_jammer, epsilon)
}

/// `(max over xi of E[R_s | xi], min over eta of E[R_s | eta])`.
pub fn best_responses(profile: &StrategyProfile, rg: &ReducedGame, c: &CornerPoints, grid_points: usize) -> (f64, f64) {
    let n = grid_points.max(2) - 1;
    let inside = |lo: f64, x: f64| x >= lo - 1e-12 && x <= lo + rg.edge + 1e-12;

    let mut xis: Vec<f64> = (0..=n).map(|k| rg.xi_at(k as f64 / n as f64)).collect();
    for atom in profile.jammer.atoms() {
        xis.push(boundary_d(atom.location, c));
    }
    let best_source = xis
        .into_iter()
        .filter(|&x| inside(rg.origin_xi, x))
        .map(|xi| expected_payoff_vs(&profile.jammer, Side::Jammer, xi, c))
        .fold(f64::NEG_INFINITY, f64::max);

    let mut etas: Vec<f64> = (0..=n).map(|k| rg.eta_at(k as f64 / n as f64)).collect();
    for atom in profile.source.atoms() {
        let kill = c.sum_d - atom.location;
        etas.extend([kill, kill + ONE_SIDED]);
    }
    let best_jammer = etas
        .into_iter()
        .filter(|&e| inside(rg.origin_eta, e))
        .map(|eta| expected_payoff_vs(&profile.source, Side::Source, eta, c))
        .fold(f64::INFINITY, f64::min);

    (best_source, best_jammer)
}

/// Best responses restricted to the grid game itself, i.e. the LP
/// optimality certificate restated as an equilibrium report.
pub fn equilibrium_check_matrix(pm: &PayoffMatrix, sol: &MatrixGameSolution, epsilon: f64) -> EquilibriumReport {
    EquilibriumReport::new(
        sol.value,
        pm.matrix.col_security(&sol.col_strategy),
        pm.matrix.row_security(&sol.row_strategy),
        epsilon,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub blocks: u64,
    pub seed: u64,
    pub empirical_mean: f64,
    pub std_error: f64,
    pub target: f64,
}

/// Plays `blocks` independent rounds: each block draws a source rate and a
/// jammer rate by inverse-transform sampling and earns their secrecy rate.
pub fn simulate_blocks(
    source: &MixedStrategy,
    jammer: &MixedStrategy,
    c: &CornerPoints,
    blocks: u64,
    seed: u64,
    target: f64,
) -> SimulationReport {
    assert!(blocks >= 1, "need at least one block");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for b in 1..=blocks {
        let xi = source.sample(rng.random::<f64>());
        let eta = jammer.sample(rng.random::<f64>());
        let r = secrecy_payoff(RatePair::new(xi, eta), c);
        let delta = r - mean;
        mean += delta / b as f64;
        m2 += delta * (r - mean);
    }
    let std_error = if blocks > 1 { (m2 / (blocks - 1) as f64).sqrt() / (blocks as f64).sqrt() } else { 0.0 };
    SimulationReport { blocks, seed, empirical_mean: mean, std_error, target }
}
