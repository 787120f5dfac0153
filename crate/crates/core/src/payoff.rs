//! Rate-region geometry and the discontinuous secrecy-rate payoff.
//!
//! The destination decodes the source at rate `xi` when `(xi, eta)` lies in
//! the union of its MAC region and its treat-relay-as-noise region; the
//! eavesdropper region is the same construction with the eavesdropper's
//! corner points. The payoff is the horizontal distance from `(xi, eta)` to
//! the eavesdropper boundary when the point sits between the two boundaries,
//! and zero otherwise. Both regions are closed.

use serde::{Deserialize, Serialize};

use crate::channel::{check_conditions, CornerPoints, RATE_SLACK};
use crate::error::{GameError, Result};

/// Source codebook rate `xi` and jammer dummy-codeword rate `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub xi: f64,
    pub eta: f64,
}

impl RatePair {
    pub fn new(xi: f64, eta: f64) -> Self {
        debug_assert!(xi.is_finite() && eta.is_finite() && xi >= 0.0 && eta >= 0.0);
        Self { xi, eta }
    }
}

pub fn in_region_d(rp: RatePair, c: &CornerPoints) -> bool {
    (rp.xi <= c.big_delta_s + RATE_SLACK && rp.xi + rp.eta <= c.sum_d + RATE_SLACK)
        || rp.xi <= c.big_omega_s + RATE_SLACK
}

pub fn in_region_e(rp: RatePair, c: &CornerPoints) -> bool {
    (rp.xi <= c.small_delta_s + RATE_SLACK && rp.xi + rp.eta <= c.sum_e + RATE_SLACK)
        || rp.xi <= c.small_omega_s + RATE_SLACK
}

/// Largest source rate the destination decodes against jammer rate `eta`.
pub fn boundary_d(eta: f64, c: &CornerPoints) -> f64 {
    (c.sum_d - eta).clamp(c.big_omega_s, c.big_delta_s)
}

/// Largest source rate the eavesdropper decodes against jammer rate `eta`.
pub fn boundary_e(eta: f64, c: &CornerPoints) -> f64 {
    (c.sum_e - eta).clamp(c.small_omega_s, c.small_delta_s)
}

/// Secrecy rate achieved at the pure rate pair `rp`.
pub fn secrecy_payoff(rp: RatePair, c: &CornerPoints) -> f64 {
    if in_region_e(rp, c) || !in_region_d(rp, c) {
        0.0
    } else {
        rp.xi - boundary_e(rp.eta, c)
    }
}

/// Pure-strategy security levels of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureStrategyGap {
    pub maximin: f64,
    pub minimax: f64,
    pub grid_maximin: f64,
    pub grid_minimax: f64,
    /// Twice the coarser grid step; the grid values must land within this.
    pub tolerance: f64,
    pub verified: bool,
}

const GAP_GRID: usize = 401;

/// Maximin and minimax of the pure-strategy game, checked by a grid search
/// over `[0, Delta_S] x [0, omega_R + 1]`.
pub fn pure_strategy_gap(c: &CornerPoints) -> Result<PureStrategyGap> {
    check_conditions(c).require()?;
    let maximin = 0.0;
    let minimax = c.sum_d - c.sum_e;

    let xi_max = c.big_delta_s;
    let eta_max = c.small_omega_r + 1.0;
    let n = GAP_GRID - 1;
    let xi_step = xi_max / n as f64;
    let eta_step = eta_max / n as f64;
    let xis: Vec<f64> = (0..=n).map(|i| xi_step * i as f64).collect();
    let etas: Vec<f64> = (0..=n).map(|j| eta_step * j as f64).collect();

    let mut row_min = vec![f64::INFINITY; xis.len()];
    let mut col_max = vec![f64::NEG_INFINITY; etas.len()];
    for (i, &xi) in xis.iter().enumerate() {
        for (j, &eta) in etas.iter().enumerate() {
            let r = secrecy_payoff(RatePair::new(xi, eta), c);
            row_min[i] = row_min[i].min(r);
            col_max[j] = col_max[j].max(r);
        }
    }
    let grid_maximin = row_min.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let grid_minimax = col_max.iter().copied().fold(f64::INFINITY, f64::min);
    let tolerance = 2.0 * xi_step.max(eta_step);
    let verified = (grid_maximin - maximin).abs() <= tolerance && (grid_minimax - minimax).abs() <= tolerance;

    Ok(PureStrategyGap { maximin, minimax, grid_maximin, grid_minimax, tolerance, verified })
}

/// The game after dominated strategies are removed: a square of side `edge`
/// anchored at `(Omega_S, delta_R)`, with skew `a = (delta_S - Omega_S) / L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedGame {
    pub origin_xi: f64,
    pub origin_eta: f64,
    pub edge: f64,
    pub skew: f64,
}

const MIN_EDGE: f64 = 1e-12;

pub fn reduce_game(c: &CornerPoints) -> Result<ReducedGame> {
    check_conditions(c).require()?;
    let edge = c.big_omega_r - c.small_delta_r;
    if edge <= MIN_EDGE {
        return Err(GameError::DegenerateGame { edge });
    }
    // The case gate admits a few ulps of slack on either side.
    let skew = ((c.small_delta_s - c.big_omega_s) / edge).clamp(0.0, 1.0);
    Ok(ReducedGame { origin_xi: c.big_omega_s, origin_eta: c.small_delta_r, edge, skew })
}

impl ReducedGame {
    pub fn xi_at(&self, u: f64) -> f64 {
        self.origin_xi + self.edge * u
    }

    pub fn eta_at(&self, v: f64) -> f64 {
        self.origin_eta + self.edge * v
    }

    /// Largest payoff anywhere on the square, `L (1 - a)`.
    pub fn max_payoff(&self) -> f64 {
        self.edge * (1.0 - self.skew)
    }
}

/// The payoff on the unit square: `L (u + v - a)` when `a < u + v <= 1`.
pub fn kernel_unit_square(u: f64, v: f64, rg: &ReducedGame) -> f64 {
    let s = u + v;
    let above_e = rg.edge * (s - rg.skew);
    let beyond_d = rg.edge * (s - 1.0);
    if above_e > RATE_SLACK && beyond_d <= RATE_SLACK {
        above_e
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{corner_points, ChannelConfig, ReceivedPowers};

    fn corners() -> CornerPoints {
        corner_points(&ChannelConfig::reference().received_powers())
    }

    /// Largest `xi` in the region by bisection on the membership predicate.
    fn bisect_boundary(eta: f64, upper: f64, member: impl Fn(RatePair) -> bool) -> f64 {
        let (mut lo, mut hi) = (0.0_f64, upper);
        if member(RatePair::new(hi, eta)) {
            return hi;
        }
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if member(RatePair::new(mid, eta)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn region_membership_examples() {
        let c = corners();
        assert!(in_region_d(RatePair::new(c.big_omega_s, 50.0), &c));
        assert!(in_region_d(RatePair::new(2.0, 1.0), &c));
        assert!(!in_region_d(RatePair::new(3.5, 0.1), &c));
        assert!(in_region_e(RatePair::new(c.small_omega_s, 50.0), &c));
        assert!(!in_region_e(RatePair::new(2.0, 2.0), &c));
        assert!(in_region_e(RatePair::new(2.0, 0.5), &c));
    }

    #[test]
    fn boundary_clamps() {
        let c = corners();
        assert_eq!(boundary_d(0.0, &c), c.big_delta_s);
        assert_eq!(boundary_d(c.sum_d - c.big_omega_s, &c), c.big_omega_s);
        assert_eq!(boundary_d(10.0, &c), c.big_omega_s);
        let b = boundary_e(1.0, &c);
        assert!((b - bisect_boundary(1.0, 10.0, |rp| in_region_e(rp, &c))).abs() < 1e-9);
        assert!((b - 2.305_808_429_524_085).abs() < 1e-12);
    }

    #[test]
    fn payoff_examples() {
        let c = corners();
        assert_eq!(secrecy_payoff(RatePair::new(0.5, 0.3), &c), 0.0);
        assert_eq!(secrecy_payoff(RatePair::new(c.small_omega_s, 1.0), &c), 0.0);

        let rp = RatePair::new(2.4, 1.2);
        let be = bisect_boundary(1.2, 10.0, |rp| in_region_e(rp, &c));
        let bd = bisect_boundary(1.2, 10.0, |rp| in_region_d(rp, &c));
        assert!((bd - 2.554_887_502_163_469).abs() < 1e-9);
        assert!((secrecy_payoff(rp, &c) - (2.4 - be)).abs() < 1e-9);
        assert!((secrecy_payoff(rp, &c) - 0.294_191_570_475_914_6).abs() < 1e-12);

        assert_eq!(secrecy_payoff(RatePair::new(2.6, 1.2), &c), 0.0);
    }

    #[test]
    fn destination_boundary_is_decodable_eavesdropper_boundary_is_not() {
        let c = corners();
        let eta = 1.2;
        let bd = boundary_d(eta, &c);
        let be = boundary_e(eta, &c);
        assert!(secrecy_payoff(RatePair::new(bd, eta), &c) > 0.0);
        assert_eq!(secrecy_payoff(RatePair::new(be, eta), &c), 0.0);
        assert_eq!(secrecy_payoff(RatePair::new(bd + 1e-9, eta), &c), 0.0);
    }

    #[test]
    fn gap_on_reference_instance() {
        let gap = pure_strategy_gap(&corners()).unwrap();
        assert!(gap.verified, "{gap:?}");
        assert_eq!(gap.maximin, 0.0);
        assert!((gap.minimax - 0.449_079_072_639_383).abs() < 1e-12);
        assert!((gap.grid_minimax - gap.minimax).abs() <= gap.tolerance);
        assert!(gap.maximin <= gap.minimax);
    }

    #[test]
    fn gap_on_symmetric_channel_is_zero() {
        let c = corner_points(&ReceivedPowers::new(5.0, 2.0, 5.0, 2.0).unwrap());
        let gap = pure_strategy_gap(&c).unwrap();
        assert_eq!(gap.minimax, 0.0);
        assert!(gap.verified);
    }

    #[test]
    fn gap_requires_conditions() {
        let c = corner_points(&ReceivedPowers::new(1.0, 1.0, 100.0, 1.0).unwrap());
        assert!(matches!(pure_strategy_gap(&c), Err(GameError::ConditionsViolated(_))));
        assert!(matches!(reduce_game(&c), Err(GameError::ConditionsViolated(_))));
    }

    #[test]
    fn reference_reduction() {
        let rg = reduce_game(&corners()).unwrap();
        assert!((rg.edge - 0.946).abs() < 5e-4);
        assert!((rg.skew - 0.5255).abs() < 5e-4);
        // Quoted to three decimals (truncated): 2.8938...
        assert!((rg.origin_xi + rg.edge - 2.893).abs() < 1e-3);
        assert!((rg.origin_xi - 1.947).abs() < 1e-3);
    }

    #[test]
    fn zero_skew_when_omega_s_equals_delta_s() {
        // g_se = g_sd / (1 + g_rd) puts delta_S exactly on Omega_S.
        let c = corner_points(&ReceivedPowers::new(10.0, 2.5, 10.0 / 3.5, 10.0 / 3.5).unwrap());
        let rg = reduce_game(&c).unwrap();
        assert!(rg.skew.abs() < 1e-12);
    }

    #[test]
    fn degenerate_edge() {
        // Powerless relay: Omega_R = delta_R = 0.
        let c = corner_points(&ReceivedPowers::new(10.0, 0.0, 10.0, 0.0).unwrap());
        assert!(check_conditions(&c).all_hold);
        assert!(matches!(reduce_game(&c), Err(GameError::DegenerateGame { .. })));
    }

    #[test]
    fn kernel_examples() {
        let rg = reduce_game(&corners()).unwrap();
        assert_eq!(kernel_unit_square(0.2, 0.2, &rg), 0.0);
        assert_eq!(kernel_unit_square(0.7, 0.6, &rg), 0.0);
        let k = kernel_unit_square(0.9, 0.05, &rg);
        assert!((k - rg.edge * (0.95 - rg.skew)).abs() < 1e-15);
        assert!((k - 0.4016).abs() < 1e-3);
        let c = corners();
        let direct = secrecy_payoff(RatePair::new(rg.xi_at(0.9), rg.eta_at(0.05)), &c);
        assert!((k - direct).abs() < 1e-12);
    }

    #[test]
    fn kernel_matches_payoff_on_grid() {
        let c = corners();
        let rg = reduce_game(&c).unwrap();
        for i in 0..=100 {
            for j in 0..=100 {
                let (u, v) = (i as f64 / 100.0, j as f64 / 100.0);
                let k = kernel_unit_square(u, v, &rg);
                let p = secrecy_payoff(RatePair::new(rg.xi_at(u), rg.eta_at(v)), &c);
                assert!((k - p).abs() <= 1e-12, "u={u} v={v} kernel={k} payoff={p}");
            }
        }
    }

    #[test]
    fn supremum_on_square_is_l_one_minus_a() {
        let c = corners();
        let rg = reduce_game(&c).unwrap();
        let n = 400;
        let mut best = 0.0_f64;
        for i in 0..=n {
            for j in 0..=n {
                let rp = RatePair::new(rg.xi_at(i as f64 / n as f64), rg.eta_at(j as f64 / n as f64));
                best = best.max(secrecy_payoff(rp, &c));
            }
        }
        assert!(best <= rg.max_payoff() + 1e-12);
        assert!(rg.max_payoff() - best <= rg.edge / n as f64 + 1e-12);
    }
}
