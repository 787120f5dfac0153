//! Brown-Robinson fictitious play, used as an LP-independent bracket on the
//! value of a matrix game.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GameMatrix;

/// Running bounds `(low, high)` with `low <= value <= high`.
///
/// Each player best-responds to the other's empirical mixture; ties go to
/// the lowest index. The seed only picks the opening row.
pub fn fictitious_play(m: &GameMatrix, iterations: usize, seed: u64) -> (f64, f64) {
    assert!(iterations >= 1, "need at least one iteration");
    let (rows, cols) = (m.rows(), m.cols());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // row_gain[i]: total payoff row i would have earned against the
    // column player's history; col_loss[j] likewise for column j.
    let mut row_gain = vec![0.0; rows];
    let mut col_loss = vec![0.0; cols];
    let mut low = f64::NEG_INFINITY;
    let mut high = f64::INFINITY;

    let mut row_pick = rng.random_range(0..rows);
    for t in 1..=iterations {
        for (j, loss) in col_loss.iter_mut().enumerate() {
            *loss += m.get(row_pick, j);
        }
        let col_pick = argmin(&col_loss);
        for (i, gain) in row_gain.iter_mut().enumerate() {
            *gain += m.get(i, col_pick);
        }

        let n = t as f64;
        low = low.max(col_loss[col_pick] / n);
        let best_row = argmax(&row_gain);
        high = high.min(row_gain[best_row] / n);
        row_pick = best_row;
    }
    (low, high)
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x < v[best] {
            best = i;
        }
    }
    best
}
