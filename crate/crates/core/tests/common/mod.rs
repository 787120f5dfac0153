//! Shared fixtures and single-instance property checks. The property
//! suite drives the checks with proptest; the acceptance target drives the
//! same checks from a fixed seed.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secrecy_game::analytic::{solve_analytic, AnalyticSolution, PiecewiseCdf};
use secrecy_game::channel::{corner_points, ChannelConfig, CornerPoints, ReceivedPowers};
use secrecy_game::discrete::{fictitious_play, solve_matrix_game_lp, GameMatrix, CERTIFICATE_TOL};
use secrecy_game::payoff::{boundary_d, boundary_e, in_region_d, in_region_e, reduce_game, RatePair, ReducedGame};
use secrecy_game::verify::simulate_blocks;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub struct Instance {
    pub powers: ReceivedPowers,
    pub corners: CornerPoints,
    pub game: ReducedGame,
}

impl Instance {
    pub fn from_powers(powers: ReceivedPowers) -> Self {
        let corners = corner_points(&powers);
        let game = reduce_game(&corners).expect("instance satisfies the case conditions");
        Self { powers, corners, game }
    }

    pub fn analytic(&self) -> AnalyticSolution {
        solve_analytic(&self.game).expect("closed form available")
    }
}

pub fn reference() -> Instance {
    Instance::from_powers(ChannelConfig::reference().received_powers())
}

fn synthetic_powers(x: f64) -> ReceivedPowers {
    ReceivedPowers::new(10.0, 2.5, x, x).unwrap()
}

fn synthetic_skew(x: f64) -> f64 {
    let c = corner_points(&synthetic_powers(x));
    (c.small_delta_s - c.big_omega_s) / (c.big_omega_r - c.small_delta_r)
}

/// A family with `g_sd = 10`, `g_rd = 2.5` and equal eavesdropper powers
/// `x`; the skew rises from 0 at `x = 10/3.5` to 1 near `x = 6.25`, with
/// every case condition holding in between. Bisects `x` for the target skew.
pub fn synthetic(target_skew: f64) -> Instance {
    let (mut lo, mut hi) = (10.0 / 3.5, 6.25);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if synthetic_skew(mid) < target_skew {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Instance::from_powers(synthetic_powers(0.5 * (lo + hi)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> GameMatrix {
    GameMatrix::new(rows, cols, (0..rows * cols).map(|_| rng.random_range(-10.0..10.0)).collect())
}

pub fn random_powers(rng: &mut impl Rng) -> [f64; 4] {
    [0; 4].map(|_| rng.random_range(0.0..100.0))
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

pub fn check_sum_rate_chains(g: [f64; 4]) -> Check {
    let p = ReceivedPowers::new(g[0], g[1], g[2], g[3]).map_err(|e| e.to_string())?;
    let c = corner_points(&p);
    ensure!(
        rel_close(c.big_delta_s + c.big_delta_r, c.big_omega_s + c.big_omega_r, 1e-12),
        "destination chain broken for {g:?}"
    );
    ensure!(
        rel_close(c.small_delta_s + c.small_delta_r, c.small_omega_s + c.small_omega_r, 1e-12),
        "eavesdropper chain broken for {g:?}"
    );
    ensure!(rel_close(c.sum_d, c.big_delta_s + c.big_delta_r, 1e-12), "sum_d mismatch for {g:?}");
    ensure!(rel_close(c.sum_e, c.small_delta_s + c.small_delta_r, 1e-12), "sum_e mismatch for {g:?}");
    Ok(())
}

pub fn check_monotone_in_gsd(g: [f64; 4], bump: f64) -> Check {
    let base = corner_points(&ReceivedPowers::new(g[0], g[1], g[2], g[3]).unwrap());
    let up = corner_points(&ReceivedPowers::new(g[0] + bump, g[1], g[2], g[3]).unwrap());
    ensure!(up.big_delta_s >= base.big_delta_s, "Delta_S decreased at {g:?}");
    ensure!(up.big_omega_s >= base.big_omega_s, "Omega_S decreased at {g:?}");
    ensure!(up.sum_d >= base.sum_d, "sum_d decreased at {g:?}");
    Ok(())
}

/// Largest member `xi` in `[0, upper]` by bisection down to 1e-13.
pub fn bisect_boundary(eta: f64, upper: f64, member: impl Fn(RatePair) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, upper);
    if member(RatePair::new(hi, eta)) {
        return hi;
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if member(RatePair::new(mid, eta)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn check_boundaries(c: &CornerPoints, eta: f64) -> Check {
    let upper = c.sum_d + 1.0;
    let d = bisect_boundary(eta, upper, |rp| in_region_d(rp, c));
    let e = bisect_boundary(eta, upper, |rp| in_region_e(rp, c));
    ensure!((d - boundary_d(eta, c)).abs() <= 1e-9, "boundary_d({eta}) = {} vs {d}", boundary_d(eta, c));
    ensure!((e - boundary_e(eta, c)).abs() <= 1e-9, "boundary_e({eta}) = {} vs {e}", boundary_e(eta, c));
    Ok(())
}

/// Both security levels of the LP strategies match the value.
pub fn check_lp_certificate(m: &GameMatrix) -> Check {
    let sol = solve_matrix_game_lp(m).map_err(|e| e.to_string())?;
    let lo = m.row_security(&sol.row_strategy);
    let hi = m.col_security(&sol.col_strategy);
    ensure!((lo - sol.value).abs() <= CERTIFICATE_TOL, "row security {lo} vs value {}", sol.value);
    ensure!((hi - sol.value).abs() <= CERTIFICATE_TOL, "column security {hi} vs value {}", sol.value);
    for p in [&sol.row_strategy, &sol.col_strategy] {
        ensure!(p.iter().all(|&x| x >= -1e-12), "negative probability");
        ensure!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-9, "strategy does not sum to 1");
    }
    Ok(())
}

pub fn check_shift_invariance(m: &GameMatrix, shift: f64) -> Check {
    let v = solve_matrix_game_lp(m).map_err(|e| e.to_string())?.value;
    let vs = solve_matrix_game_lp(&m.map(|x| x + shift)).map_err(|e| e.to_string())?.value;
    ensure!((vs - v - shift).abs() <= 1e-9, "value(A + c) = {vs}, value(A) + c = {}", v + shift);
    Ok(())
}

pub fn check_transpose_antisymmetry(m: &GameMatrix) -> Check {
    let v = solve_matrix_game_lp(m).map_err(|e| e.to_string())?.value;
    let vt = solve_matrix_game_lp(&m.transpose().map(|x| -x)).map_err(|e| e.to_string())?.value;
    ensure!((vt + v).abs() <= 1e-9, "value(-A^T) = {vt}, -value(A) = {}", -v);
    Ok(())
}

pub fn check_fictitious_bracket(m: &GameMatrix, seed: u64) -> Check {
    let v = solve_matrix_game_lp(m).map_err(|e| e.to_string())?.value;
    let (lo, hi) = fictitious_play(m, 2_000, seed);
    ensure!(lo <= v + 1e-9 && v <= hi + 1e-9, "bracket [{lo}, {hi}] misses {v}");
    Ok(())
}

/// Monotone, starts at 0 left of the support, reaches 1 at its end.
pub fn check_cdf_law(cdf: &PiecewiseCdf) -> Check {
    let start = cdf.support_start;
    let end = cdf.support_end();
    ensure!(cdf.eval(start - 1e-9) == 0.0, "mass left of the support");
    ensure!((cdf.eval(end) - 1.0).abs() <= 1e-6, "F(end) = {}", cdf.eval(end));
    let n = 10_000;
    let mut prev = 0.0;
    for k in 0..=n {
        let x = start + (end - start) * k as f64 / n as f64;
        let f = cdf.eval(x);
        ensure!(f >= prev - 1e-12, "decrease at {x}: {prev} -> {f}");
        ensure!((0.0..=1.0 + 1e-12).contains(&f), "F({x}) = {f} outside [0, 1]");
        prev = f;
    }
    Ok(())
}

pub fn check_simulation_determinism(inst: &Instance, seed: u64) -> Check {
    let sol = inst.analytic();
    let src = sol.cdf_source.clone().into();
    let jam = sol.cdf_jammer.clone().into();
    let a = simulate_blocks(&src, &jam, &inst.corners, 2_000, seed, sol.value);
    let b = simulate_blocks(&src, &jam, &inst.corners, 2_000, seed, sol.value);
    ensure!(a == b, "seed {seed} produced different reports");
    ensure!(a.empirical_mean.to_bits() == b.empirical_mean.to_bits(), "means differ in bits");
    Ok(())
}

/// Kolmogorov-Smirnov distance between inverse-transform samples and the law.
pub fn ks_distance(cdf: &PiecewiseCdf, samples: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut xs: Vec<f64> = (0..samples).map(|_| cdf.sample(rng.random::<f64>())).collect();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut worst = 0.0_f64;
    let mut i = 0;
    while i < xs.len() {
        // Step over ties so atoms are compared once.
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let f = cdf.eval(xs[i]);
        let f_left = cdf.eval(xs[i] - 1e-12);
        worst = worst.max((f - (j + 1) as f64 / n).abs()).max((f_left - i as f64 / n).abs());
        i = j + 1;
    }
    worst
}
