//! Uniform-grid approximation of the reduced game and its exact solution as
//! a finite zero-sum matrix game.
//!
//! Refining the grid to `T` steps per side moves the value by at most
//! `2 sqrt(2) L / T`.

mod fictitious;
pub mod simplex;

use serde::{Deserialize, Serialize};

pub use fictitious::fictitious_play;

use crate::channel::CornerPoints;
use crate::error::{GameError, Result};
use crate::payoff::{secrecy_payoff, RatePair, ReducedGame};
use crate::strategy::DiscreteStrategy;

pub const MAX_GRID: usize = 5000;
pub const DEFAULT_GRID: usize = 200;
pub const ACCEPTANCE_GRID: usize = 400;

/// Dense row-major payoff matrix; rows maximize, columns minimize.
#[derive(Debug, Clone, PartialEq)]
pub struct GameMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl GameMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        assert_eq!(data.len(), rows * cols, "matrix shape mismatch");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|&v| f(v)).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self::new(self.cols, self.rows, data)
    }

    /// `min_j (p' A)_j`: what a row mixture guarantees.
    pub fn row_security(&self, p: &[f64]) -> f64 {
        (0..self.cols).map(|j| (0..self.rows).map(|i| p[i] * self.get(i, j)).sum::<f64>()).fold(f64::INFINITY, f64::min)
    }

    /// `max_i (A q)_i`: what a column mixture concedes.
    pub fn col_security(&self, q: &[f64]) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * q[j]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Which corner the grid's source axis starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridOrigin {
    /// The reduced square's left edge, `Omega_S`.
    #[default]
    BigOmegaS,
    /// `omega_S`; kept only to compare against the reduced square.
    SmallOmegaS,
}

/// Payoffs of the `(T+1) x (T+1)` grid game on the reduced square.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    pub t: usize,
    pub xi_start: f64,
    pub eta_start: f64,
    pub edge: f64,
    pub matrix: GameMatrix,
}

impl PayoffMatrix {
    pub fn xi_of(&self, i: usize) -> f64 {
        self.xi_start + self.edge * i as f64 / self.t as f64
    }

    pub fn eta_of(&self, j: usize) -> f64 {
        self.eta_start + self.edge * j as f64 / self.t as f64
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn source_strategy(&self, sol: &MatrixGameSolution) -> DiscreteStrategy {
        DiscreteStrategy::new((0..=self.t).map(|i| self.xi_of(i)).collect(), sol.row_strategy.clone())
    }

    pub fn jammer_strategy(&self, sol: &MatrixGameSolution) -> DiscreteStrategy {
        DiscreteStrategy::new((0..=self.t).map(|j| self.eta_of(j)).collect(), sol.col_strategy.clone())
    }
}

pub fn build_grid_game(rg: &ReducedGame, c: &CornerPoints, t: usize) -> Result<PayoffMatrix> {
    build_grid_game_with_origin(rg, c, t, GridOrigin::BigOmegaS)
}

pub fn build_grid_game_with_origin(
    rg: &ReducedGame,
    c: &CornerPoints,
    t: usize,
    origin: GridOrigin,
) -> Result<PayoffMatrix> {
    if !(2..=MAX_GRID).contains(&t) {
        return Err(GameError::InvalidConfig(format!("grid parameter T = {t} outside [2, {MAX_GRID}]")));
    }
    if rg.edge <= 0.0 {
        return Err(GameError::DegenerateGame { edge: rg.edge });
    }
    let xi_start = match origin {
        GridOrigin::BigOmegaS => rg.origin_xi,
        GridOrigin::SmallOmegaS => c.small_omega_s,
    };
    let mut pm =
        PayoffMatrix { t, xi_start, eta_start: rg.origin_eta, edge: rg.edge, matrix: GameMatrix::new(1, 1, vec![0.0]) };
    let n = t + 1;
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        let xi = pm.xi_of(i);
        for j in 0..n {
            data.push(secrecy_payoff(RatePair::new(xi, pm.eta_of(j)), c));
        }
    }
    pm.matrix = GameMatrix::new(n, n, data);
    Ok(pm)
}

/// `(min_j (p'A)_j, max_i (Aq)_i)` at the returned strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixGameSolution {
    pub value: f64,
    pub row_strategy: Vec<f64>,
    pub col_strategy: Vec<f64>,
    pub certificate: Certificate,
    pub iterations: usize,
}

pub const CERTIFICATE_TOL: f64 = 1e-8;

/// Solves the zero-sum game by simplex with the default iteration cap of
/// `50 (n + 1)` pivots, `n` the larger dimension.
pub fn solve_matrix_game_lp(m: &GameMatrix) -> Result<MatrixGameSolution> {
    let cap = 50 * (m.rows().max(m.cols()) + 1);
    solve_matrix_game_lp_with_cap(m, cap)
}

pub fn solve_matrix_game_lp_with_cap(m: &GameMatrix, max_iterations: usize) -> Result<MatrixGameSolution> {
    if m.data().iter().any(|v| !v.is_finite()) {
        return Err(GameError::SolverFailure("payoff matrix has non-finite entries".into()));
    }
    // Shift to a strictly positive matrix B. The column player's program
    // max 1'y s.t. B y <= 1 has optimum 1 / value(B); its shadow prices give
    // the row player's strategy.
    let shift = 1.0 + m.min_entry().abs();
    let (rows, cols) = (m.rows(), m.cols());
    let shifted: Vec<f64> = m.data().iter().map(|v| v + shift).collect();
    let lp = simplex::maximize(&vec![1.0; cols], &shifted, &vec![1.0; rows], max_iterations)?;

    let total_y: f64 = lp.primal.iter().sum();
    let total_x: f64 = lp.dual.iter().sum();
    if !(total_y > 0.0 && total_x > 0.0) {
        return Err(GameError::SolverFailure("simplex returned an empty strategy".into()));
    }
    let col_strategy: Vec<f64> = lp.primal.iter().map(|y| y / total_y).collect();
    let row_strategy: Vec<f64> = lp.dual.iter().map(|x| x / total_x).collect();
    let value = 1.0 / lp.objective - shift;

    let certificate = Certificate { lower: m.row_security(&row_strategy), upper: m.col_security(&col_strategy) };
    if certificate.lower < value - CERTIFICATE_TOL || certificate.upper > value + CERTIFICATE_TOL {
        return Err(GameError::SolverFailure(format!(
            "optimality certificate failed: value {value}, row guarantee {}, column concession {}",
            certificate.lower, certificate.upper
        )));
    }
    Ok(MatrixGameSolution { value, row_strategy, col_strategy, certificate, iterations: lp.iterations })
}

pub fn discretization_bound(rg: &ReducedGame, t: usize) -> f64 {
    2.0 * std::f64::consts::SQRT_2 * rg.edge / t as f64
}
