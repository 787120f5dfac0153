//! Dense-tableau primal simplex for `max c'x s.t. A x <= b, x >= 0` with
//! `b >= 0`, so the slack basis is feasible from the start.
//!
//! Entering columns follow Dantzig's largest-coefficient rule. After a run
//! of degenerate pivots the solver switches to Bland's smallest-index rule,
//! which cannot cycle, and stays there.

use crate::error::{GameError, Result};

const PIVOT_TOL: f64 = 1e-12;
const COST_TOL: f64 = 1e-12;
const DEGENERATE_STREAK: usize = 50;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub objective: f64,
    pub primal: Vec<f64>,
    /// Shadow prices of the `m` inequality rows.
    pub dual: Vec<f64>,
    pub iterations: usize,
    pub used_bland: bool,
}

struct Tableau {
    rows: usize,
    width: usize,
    data: Vec<f64>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.width..(r + 1) * self.width]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let p = self.at(pr, pc);
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.row(pr).to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let factor = self.at(r, pc);
            if factor == 0.0 {
                continue;
            }
            let row = &mut self.data[r * w..(r + 1) * w];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
            row[pc] = 0.0;
        }
    }
}

/// `a` is row-major `m x n`. Fails on an unbounded problem or when
/// `max_iterations` pivots are exceeded.
pub fn maximize(c: &[f64], a: &[f64], b: &[f64], max_iterations: usize) -> Result<LpSolution> {
    let n = c.len();
    let m = b.len();
    assert_eq!(a.len(), m * n, "constraint matrix shape mismatch");
    if b.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(GameError::SolverFailure("right-hand side must be finite and non-negative".into()));
    }

    // Columns: n structural, m slack, 1 rhs. Last row holds reduced costs.
    let width = n + m + 1;
    let rows = m + 1;
    let mut t = Tableau { rows, width, data: vec![0.0; rows * width] };
    for i in 0..m {
        let row = &mut t.data[i * width..(i + 1) * width];
        row[..n].copy_from_slice(&a[i * n..(i + 1) * n]);
        row[n + i] = 1.0;
        row[width - 1] = b[i];
    }
    for (cell, &cj) in t.data[m * width..m * width + n].iter_mut().zip(c) {
        *cell = -cj;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut iterations = 0;
    let mut degenerate_run = 0;
    let mut bland = false;
    loop {
        let cost = &t.data[m * width..m * width + n + m];
        let entering = if bland {
            cost.iter().position(|&v| v < -COST_TOL)
        } else {
            cost.iter().enumerate().filter(|(_, &v)| v < -COST_TOL).min_by(|x, y| x.1.total_cmp(y.1)).map(|(j, _)| j)
        };
        let Some(pc) = entering else { break };

        let mut leaving: Option<(usize, f64)> = None;
        for r in 0..m {
            let coef = t.at(r, pc);
            if coef > PIVOT_TOL {
                let ratio = t.at(r, width - 1) / coef;
                leaving = match leaving {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => {
                        if ratio < best_ratio - 1e-15 || (ratio <= best_ratio + 1e-15 && basis[r] < basis[best]) {
                            Some((r, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
        }
        let Some((pr, ratio)) = leaving else {
            return Err(GameError::SolverFailure("linear program is unbounded".into()));
        };

        if iterations >= max_iterations {
            return Err(GameError::SolverFailure(format!("simplex exceeded {max_iterations} iterations")));
        }
        if ratio <= 1e-15 {
            degenerate_run += 1;
            if degenerate_run >= DEGENERATE_STREAK {
                bland = true;
            }
        } else {
            degenerate_run = 0;
        }
        t.pivot(pr, pc);
        basis[pr] = pc;
        iterations += 1;
    }

    let mut primal = vec![0.0; n];
    for (r, &var) in basis.iter().enumerate() {
        if var < n {
            primal[var] = t.at(r, width - 1).max(0.0);
        }
    }
    let dual = (0..m).map(|i| t.at(m, n + i).max(0.0)).collect();
    Ok(LpSolution { objective: t.at(m, width - 1), primal, dual, iterations, used_bland: bland })
}
