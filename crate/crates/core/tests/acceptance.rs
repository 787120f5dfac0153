//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use common::*;
use secrecy_game::channel::{baseline_no_jammer, ChannelConfig, ChannelInput};
use secrecy_game::cli::{cmd_export_cdf, RunConfig};
use secrecy_game::discrete::{build_grid_game, discretization_bound, solve_matrix_game_lp, ACCEPTANCE_GRID};
use secrecy_game::payoff::pure_strategy_gap;
use secrecy_game::verify::{equilibrium_check, simulate_blocks, Claim, StrategyProfile};

const TARGET_VALUE: f64 = 0.092;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn reference_closed_form() -> Outcome {
    let start = Instant::now();
    let inst = reference();
    let sol = inst.analytic();
    let elapsed = start.elapsed();
    let ok = within(sol.skew, 0.5255, 5e-4)
        && within(sol.edge, 0.946, 5e-4)
        && within(sol.alpha, 0.20484, 5e-5)
        && within(sol.value, TARGET_VALUE, 1e-3)
        && elapsed < Duration::from_secs(1);
    outcome(
        ok,
        format!("a={:.6} L={:.6} alpha={:.6} value={:.6} in {elapsed:.2?}", sol.skew, sol.edge, sol.alpha, sol.value),
    )
}

fn discrete_value_at_400() -> Outcome {
    let start = Instant::now();
    let inst = reference();
    let t = ACCEPTANCE_GRID;
    let pm = build_grid_game(&inst.game, &inst.corners, t).unwrap();
    let lp = solve_matrix_game_lp(&pm.matrix).unwrap();
    let elapsed = start.elapsed();
    let analytic = inst.analytic().value;
    let bound = discretization_bound(&inst.game, t);
    let gap = (analytic - lp.value).abs();
    let ok = within(lp.value, 0.0923, 5e-4) && gap <= bound && elapsed < Duration::from_secs(300);
    outcome(ok, format!("value={:.6} gap={gap:.6} bound={bound:.6} in {elapsed:.2?}", lp.value))
}

fn baseline() -> Outcome {
    let b = baseline_no_jammer(&ChannelConfig::reference().received_powers());
    outcome(within(b, 1.0146, 1e-4), format!("no-jammer secrecy rate={b:.6}"))
}

fn cdf_support_and_overlay() -> Outcome {
    let rows = 1000;
    let mut cfg = RunConfig::new(ChannelInput::Physical(ChannelConfig::reference()));
    cfg.t = ACCEPTANCE_GRID;
    let export = match cmd_export_cdf(&cfg, rows) {
        Ok(e) => e,
        Err(e) => return outcome(false, e.message),
    };
    let edge = reference().game.edge;
    let cell = 1.1 * edge / rows as f64;
    let zero_below = export.primary.iter().filter(|r| r.0 < 1.947 - cell).all(|r| r.1 == 0.0);
    let one_above = export.primary.iter().filter(|r| r.0 > 2.893 + cell).all(|r| r.1 == 1.0);
    let sup = export
        .primary
        .iter()
        .zip(&export.discrete)
        .map(|(c, d)| (c.1 - d.1).abs().max((c.2 - d.2).abs()))
        .fold(0.0, f64::max);
    outcome(
        zero_below && one_above && sup <= 0.05,
        format!("zero below 1.947: {zero_below}, one above 2.893: {one_above}, sup distance={sup:.4}"),
    )
}

fn no_pure_equilibrium() -> Outcome {
    let inst = reference();
    let gap = pure_strategy_gap(&inst.corners).unwrap();
    let v = inst.analytic().value;
    let ok = gap.verified
        && gap.maximin == 0.0
        && within(gap.minimax, 0.4492, gap.tolerance)
        && gap.maximin < v
        && v < gap.minimax;
    outcome(
        ok,
        format!(
            "maximin={} minimax={:.6} (grid {:.6}, tol {:.4}) value={v:.6}",
            gap.maximin, gap.minimax, gap.grid_minimax, gap.tolerance
        ),
    )
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(2024);
    let mut failures = Vec::new();
    let mut record = |name: &str, check: Check| {
        if let Err(e) = check {
            failures.push(format!("{name}: {e}"));
        }
    };
    for _ in 0..100 {
        let (r, c) = (rng.random_range(1..=12), rng.random_range(1..=12));
        record("lp certificate", check_lp_certificate(&random_matrix(&mut rng, r, c)));
        let m = random_matrix(&mut rng, 8, 8);
        record("shift", check_shift_invariance(&m, rng.random_range(-20.0..20.0)));
        record("transpose", check_transpose_antisymmetry(&m));
        let seed = rng.random();
        record("fictitious play", check_fictitious_bracket(&random_matrix(&mut rng, 10, 10), seed));
    }
    for _ in 0..1000 {
        let g = random_powers(&mut rng);
        record("sum-rate chains", check_sum_rate_chains(g));
        record("monotone corners", check_monotone_in_gsd(g, rng.random_range(0.0..50.0)));
    }
    let c = reference().corners;
    for _ in 0..10_000 {
        record("boundary oracle", check_boundaries(&c, rng.random_range(0.0..4.0)));
    }
    for skew in [0.0, 0.1, 0.3, 0.5, 0.55, 0.6, 0.65] {
        let sol = synthetic(skew).analytic();
        record("c.d.f. law", check_cdf_law(&sol.cdf_source));
        record("c.d.f. law", check_cdf_law(&sol.cdf_jammer));
    }
    let inst = reference();
    for seed in 0..5 {
        record("seed determinism", check_simulation_determinism(&inst, seed));
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(120);
    let detail = match failures.first() {
        None => format!("all checks held in {elapsed:.2?}"),
        Some(first) => format!("{} failures, first: {first}", failures.len()),
    };
    outcome(ok, detail)
}

fn equilibrium_certification() -> Outcome {
    let inst = reference();
    let (c, rg) = (&inst.corners, &inst.game);
    let sol = inst.analytic();
    let eps = 1e-3 * rg.edge;
    let grid = 4 * ACCEPTANCE_GRID + 1;
    let honest = equilibrium_check(Claim::Analytic(&sol), rg, c, grid, eps);
    let corrupted = sol.with_scaled_alpha(1.1);
    let control = equilibrium_check(Claim::Analytic(&corrupted), rg, c, grid, eps);
    let profile = StrategyProfile::from_analytic(&sol);
    let sim = simulate_blocks(&profile.source, &profile.jammer, c, 100_000, 42, sol.value);
    let ok = honest.passed && !control.passed && within(sim.empirical_mean, TARGET_VALUE, 0.003);
    outcome(
        ok,
        format!(
            "best replies [{:.6}, {:.6}] eps={eps:.2e}; corrupted control passed={}; simulated mean={:.5} (se {:.5})",
            honest.best_response_jammer, honest.best_response_source, control.passed, sim.empirical_mean, sim.std_error
        ),
    )
}

fn convergence_sweep() -> Outcome {
    let inst = reference();
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [25, 50, 100, 200, 400] {
        let pm = build_grid_game(&inst.game, &inst.corners, t).unwrap();
        let v = solve_matrix_game_lp(&pm.matrix).unwrap().value;
        let bound = discretization_bound(&inst.game, t);
        ok &= (v - TARGET_VALUE).abs() <= bound;
        parts.push(format!("T={t}: {v:.5} (bound {bound:.4})"));
    }
    outcome(ok, parts.join(", "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("reference instance closed form", reference_closed_form),
        ("grid game at T=400", discrete_value_at_400),
        ("no-jammer baseline", baseline),
        ("c.d.f. support and overlay", cdf_support_and_overlay),
        ("no pure-strategy equilibrium", no_pure_equilibrium),
        ("property suite", property_suite),
        ("epsilon-equilibrium and simulation", equilibrium_certification),
        ("convergence sweep", convergence_sweep),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!o.passed);
        println!("criterion {} {verdict} {name}: {} [{:.2?}]", k + 1, o.detail, start.elapsed());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
