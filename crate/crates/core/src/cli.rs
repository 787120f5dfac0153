//! Command-line front end. Each subcommand reads a channel document, runs
//! the relevant stages and emits JSON (or CSV for `export-cdf`).
//!
//! Exit codes: 0 success, 1 input error, 2 corner-point conditions
//! violated, 3 solver failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analytic::{solve_analytic, AnalyticSolution};
use crate::channel::{baseline_no_jammer, check_conditions, corner_points, ChannelInput, CornerPoints};
use crate::discrete::{
    build_grid_game_with_origin, discretization_bound, solve_matrix_game_lp, GridOrigin, MatrixGameSolution,
    PayoffMatrix, DEFAULT_GRID,
};
use crate::error::GameError;
use crate::payoff::{pure_strategy_gap, reduce_game, ReducedGame};
use crate::report::{self, AnalyzeReport, GameSolution};
use crate::verify::{
    equilibrium_check, equilibrium_check_against, equilibrium_check_matrix, simulate_blocks, Claim, EquilibriumReport,
    SimulationReport, StrategyProfile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONDITIONS: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "secrecy-game", version, about = "Source vs jammer-relay secrecy game solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Received powers, corner points, case conditions, baseline and the pure-strategy gap.
    Analyze(AnalyzeArgs),
    /// Equilibrium value by closed form, grid LP, or both.
    Solve(SolveArgs),
    /// Best-response certification of the equilibrium strategies.
    Verify(SolveArgs),
    /// Block-level simulation of the variable-rate scheme.
    Simulate(SimulateArgs),
    /// Equilibrium c.d.f. curves as CSV.
    ExportCdf(ExportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Path to a JSON channel document.
    #[arg(long, conflicts_with = "channel")]
    pub config: Option<PathBuf>,
    /// Inline JSON channel document.
    #[arg(long)]
    pub channel: Option<String>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Discrete,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Grid steps per side of the reduced square.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub t: usize,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Dump the grid payoff matrix as CSV (i,j,xi,eta,payoff).
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
    /// Write the grid strategies as CSV (index,rate,probability); the jammer
    /// file gets a `.jammer` suffix.
    #[arg(long)]
    pub strategy_out: Option<PathBuf>,
    /// Start the source grid at omega_S instead of Omega_S (comparison only).
    #[arg(long, hide = true)]
    pub small_omega_origin: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub t: usize,
    #[arg(long, default_value_t = 100_000)]
    pub blocks: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Strategies to play; `both` means the closed form when available.
    #[arg(long, value_enum, default_value_t = Method::Analytic)]
    pub method: Method,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub t: usize,
    /// Rows minus one of the exported curve.
    #[arg(long, default_value_t = 400)]
    pub rows: usize,
    /// Where to write the grid-game (cumulative-sum) curve. Defaults to the
    /// `--out` path with a `.discrete` suffix; omitted when writing to stdout.
    #[arg(long)]
    pub discrete_out: Option<PathBuf>,
}

/// Everything a run needs, resolved from the command line.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub channel: ChannelInput,
    pub t: usize,
    pub blocks: u64,
    pub seed: u64,
    pub method: Method,
    pub grid_origin: GridOrigin,
}

impl RunConfig {
    pub fn new(channel: ChannelInput) -> Self {
        Self {
            channel,
            t: DEFAULT_GRID,
            blocks: 100_000,
            seed: 0,
            method: Method::Both,
            grid_origin: GridOrigin::BigOmegaS,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.t < 2 {
            return Err(CliError::input("--t must be at least 2"));
        }
        if self.blocks < 1 {
            return Err(CliError::input("--blocks must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: msg.into() }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        let code = match e {
            GameError::InvalidConfig(_) => EXIT_INPUT,
            GameError::ConditionsViolated(_) | GameError::DegenerateGame { .. } => EXIT_CONDITIONS,
            _ => EXIT_SOLVER,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::input(e.to_string())
    }
}

pub fn load_channel(args: &ChannelArgs) -> Result<ChannelInput, CliError> {
    let text = match (&args.config, &args.channel) {
        (Some(path), _) => {
            fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?
        }
        (None, Some(inline)) => inline.clone(),
        (None, None) => return Err(CliError::input("one of --config or --channel is required")),
    };
    Ok(ChannelInput::from_json_str(&text)?)
}

fn prepare(cfg: &RunConfig) -> Result<(CornerPoints, ReducedGame), CliError> {
    let c = corner_points(&cfg.channel.powers());
    Ok((c, reduce_game(&c)?))
}

pub fn cmd_analyze(cfg: &RunConfig) -> AnalyzeReport {
    let powers = cfg.channel.powers();
    let corners = corner_points(&powers);
    let conditions = check_conditions(&corners);
    AnalyzeReport {
        powers,
        corners,
        conditions,
        conditions_hold: conditions.all_hold,
        baseline: baseline_no_jammer(&powers),
        gap: pure_strategy_gap(&corners).ok(),
    }
}

/// Closed-form branch plus its equilibrium guard.
struct AnalyticBranch {
    status: &'static str,
    solution: Option<AnalyticSolution>,
}

fn analytic_branch(rg: &ReducedGame, c: &CornerPoints, t: usize) -> AnalyticBranch {
    match solve_analytic(rg) {
        Ok(sol) => {
            let report = equilibrium_check(Claim::Analytic(&sol), rg, c, 4 * t + 1, 1e-3 * rg.edge);
            let status = if report.passed { "ok" } else { "failed_check" };
            AnalyticBranch { status, solution: Some(sol) }
        }
        Err(e) => {
            let status = match e {
                GameError::UnsupportedK { .. } => "unsupported_k",
                GameError::SkewAtOne { .. } => "skew_at_one",
                _ => "normalization_failure",
            };
            AnalyticBranch { status, solution: None }
        }
    }
}

fn discrete_branch(
    rg: &ReducedGame,
    c: &CornerPoints,
    cfg: &RunConfig,
) -> Result<(PayoffMatrix, MatrixGameSolution), CliError> {
    let pm = build_grid_game_with_origin(rg, c, cfg.t, cfg.grid_origin)?;
    let sol = solve_matrix_game_lp(&pm.matrix)?;
    Ok((pm, sol))
}

pub struct SolveOutput {
    pub solution: GameSolution,
    pub analytic: Option<AnalyticSolution>,
    pub discrete: Option<(PayoffMatrix, MatrixGameSolution)>,
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<SolveOutput, CliError> {
    cfg.validate()?;
    let (c, rg) = prepare(cfg)?;

    let branch = if cfg.method == Method::Discrete {
        AnalyticBranch { status: "not_requested", solution: None }
    } else {
        analytic_branch(&rg, &c, cfg.t)
    };
    let need_discrete = cfg.method != Method::Analytic || branch.status != "ok";
    let discrete = if need_discrete { Some(discrete_branch(&rg, &c, cfg)?) } else { None };

    let bound = discretization_bound(&rg, cfg.t);
    let value_analytic = branch.solution.as_ref().map(|s| s.value);
    let value_discrete = discrete.as_ref().map(|(_, s)| s.value);
    let gap = value_analytic.zip(value_discrete).map(|(a, d)| (a - d).abs());
    let gap_within_bound = gap.map(|g| g <= bound);

    let mut status = branch.status;
    if status == "ok" && gap_within_bound == Some(false) {
        status = "failed_check";
    }
    let value = match (status, value_analytic, value_discrete) {
        ("ok", Some(v), _) => v,
        (_, _, Some(v)) => v,
        _ => return Err(CliError { code: EXIT_SOLVER, message: "no solution available".into() }),
    };

    let mut warnings = branch.solution.as_ref().map(|s| s.warnings.clone()).unwrap_or_default();
    if status == "failed_check" {
        warnings.push("closed-form strategies failed certification; grid value is authoritative".into());
    }

    let solution = GameSolution {
        method: format!("{:?}", cfg.method).to_lowercase(),
        value,
        value_analytic,
        value_discrete,
        analytic: status.to_string(),
        k: branch.solution.as_ref().map(|s| s.k),
        alpha: branch.solution.as_ref().map(|s| s.alpha),
        a: rg.skew,
        edge: rg.edge,
        t: cfg.t,
        bound,
        gap,
        gap_within_bound,
        warnings,
    };
    Ok(SolveOutput { solution, analytic: branch.solution, discrete })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Closed-form strategies against their own value, epsilon = 1e-3 L.
    pub analytic: Option<EquilibriumReport>,
    /// Grid strategies against the grid game (the LP certificate).
    pub discrete_certificate: Option<EquilibriumReport>,
    /// Grid strategies over the continuous square, epsilon = 2 sqrt(2) L / T + 1e-3 L.
    pub discrete_continuous: Option<EquilibriumReport>,
    pub passed: bool,
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    cfg.validate()?;
    let (c, rg) = prepare(cfg)?;
    let grid = 4 * cfg.t + 1;
    let eps = 1e-3 * rg.edge;

    let analytic = if cfg.method == Method::Discrete {
        None
    } else {
        solve_analytic(&rg).ok().map(|sol| equilibrium_check(Claim::Analytic(&sol), &rg, &c, grid, eps))
    };
    let (discrete_certificate, discrete_continuous) = if cfg.method == Method::Analytic {
        (None, None)
    } else {
        let (pm, sol) = discrete_branch(&rg, &c, cfg)?;
        let cert = equilibrium_check_matrix(&pm, &sol, crate::discrete::CERTIFICATE_TOL);
        let profile = StrategyProfile::from_matrix(&pm, &sol);
        let cont =
            equilibrium_check_against(&profile, sol.value, &rg, &c, grid, discretization_bound(&rg, cfg.t) + eps);
        (Some(cert), Some(cont))
    };
    let reports = [analytic, discrete_certificate, discrete_continuous];
    let passed = reports.iter().flatten().count() > 0 && reports.iter().flatten().all(|r| r.passed);
    Ok(VerifyReport { analytic, discrete_certificate, discrete_continuous, passed })
}

fn strategies_for(cfg: &RunConfig, rg: &ReducedGame, c: &CornerPoints) -> Result<(StrategyProfile, f64), CliError> {
    if cfg.method != Method::Discrete {
        if let Ok(sol) = solve_analytic(rg) {
            return Ok((StrategyProfile::from_analytic(&sol), sol.value));
        }
    }
    let (pm, sol) = discrete_branch(rg, c, cfg)?;
    Ok((StrategyProfile::from_matrix(&pm, &sol), sol.value))
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<SimulationReport, CliError> {
    cfg.validate()?;
    let (c, rg) = prepare(cfg)?;
    let (profile, target) = strategies_for(cfg, &rg, &c)?;
    Ok(simulate_blocks(&profile.source, &profile.jammer, &c, cfg.blocks, cfg.seed, target))
}

/// Continuous (or, if no closed form exists, grid) curve and the grid curve.
pub struct CdfExport {
    pub primary: Vec<(f64, f64, f64)>,
    pub discrete: Vec<(f64, f64, f64)>,
}

pub fn cmd_export_cdf(cfg: &RunConfig, rows: usize) -> Result<CdfExport, CliError> {
    cfg.validate()?;
    let (c, rg) = prepare(cfg)?;
    let (pm, sol) = discrete_branch(&rg, &c, cfg)?;
    let grid_profile = StrategyProfile::from_matrix(&pm, &sol);
    let curve =
        |p: &StrategyProfile| report::cdf_rows(&p.source, &p.jammer, rg.origin_xi, rg.origin_eta, rg.edge, rows);
    let discrete = curve(&grid_profile);
    let primary = match solve_analytic(&rg) {
        Ok(a) => curve(&StrategyProfile::from_analytic(&a)),
        Err(_) => discrete.clone(),
    };
    Ok(CdfExport { primary, discrete })
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{suffix}"),
    };
    path.with_file_name(name)
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let text = report::to_rounded_string(value).map_err(|e| CliError::input(e.to_string()))?;
    match out {
        Some(path) => fs::write(path, text + "\n")?,
        None => {
            let mut stdout = io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn run_config(channel: &ChannelArgs) -> Result<RunConfig, CliError> {
    Ok(RunConfig::new(load_channel(channel)?))
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Analyze(args) => {
            let cfg = run_config(&args.channel)?;
            let report = cmd_analyze(&cfg);
            emit_json(&report, args.channel.out.as_deref())?;
            Ok(if report.conditions_hold { EXIT_OK } else { EXIT_CONDITIONS })
        }
        Command::Solve(args) => {
            let mut cfg = run_config(&args.channel)?;
            cfg.t = args.t;
            cfg.method = args.method;
            if args.small_omega_origin {
                cfg.grid_origin = GridOrigin::SmallOmegaS;
            }
            let out = cmd_solve(&cfg)?;
            if let Some((pm, sol)) = &out.discrete {
                if let Some(path) = &args.matrix_out {
                    report::write_matrix_csv(fs::File::create(path)?, pm)?;
                }
                if let Some(path) = &args.strategy_out {
                    let src = pm.source_strategy(sol);
                    let jam = pm.jammer_strategy(sol);
                    report::write_strategy_csv(fs::File::create(path)?, src.rates(), src.probs())?;
                    report::write_strategy_csv(
                        fs::File::create(with_suffix(path, "jammer"))?,
                        jam.rates(),
                        jam.probs(),
                    )?;
                }
            }
            for w in &out.solution.warnings {
                eprintln!("warning: {w}");
            }
            emit_json(&out.solution, args.channel.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let mut cfg = run_config(&args.channel)?;
            cfg.t = args.t;
            cfg.method = args.method;
            let report = cmd_verify(&cfg)?;
            emit_json(&report, args.channel.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Simulate(args) => {
            let mut cfg = run_config(&args.channel)?;
            cfg.t = args.t;
            cfg.blocks = args.blocks;
            cfg.seed = args.seed;
            cfg.method = args.method;
            let report = cmd_simulate(&cfg)?;
            emit_json(&report, args.channel.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::ExportCdf(args) => {
            let mut cfg = run_config(&args.channel)?;
            cfg.t = args.t;
            let export = cmd_export_cdf(&cfg, args.rows)?;
            match &args.channel.out {
                Some(path) => {
                    report::write_cdf_csv(fs::File::create(path)?, &export.primary)?;
                    let discrete_path = args.discrete_out.clone().unwrap_or_else(|| with_suffix(path, "discrete"));
                    report::write_cdf_csv(fs::File::create(discrete_path)?, &export.discrete)?;
                }
                None => {
                    report::write_cdf_csv(io::stdout().lock(), &export.primary)?;
                    if let Some(path) = &args.discrete_out {
                        report::write_cdf_csv(fs::File::create(path)?, &export.discrete)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Runs a parsed command line, printing diagnostics to stderr, and returns
/// the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ChannelConfig, ReceivedPowers};

    fn reference() -> RunConfig {
        RunConfig::new(ChannelInput::Physical(ChannelConfig::reference()))
    }

    #[test]
    fn analyze_reference() {
        let r = cmd_analyze(&reference());
        assert!(r.conditions_hold);
        assert!((r.baseline - 1.0146).abs() < 1e-4);
        assert!(r.gap.unwrap().verified);
    }

    #[test]
    fn analyze_violated() {
        let cfg = RunConfig::new(ChannelInput::Powers(ReceivedPowers::new(1.0, 1.0, 100.0, 1.0).unwrap()));
        let r = cmd_analyze(&cfg);
        assert!(!r.conditions_hold);
        assert!(r.gap.is_none());
        let err = cmd_solve(&cfg).err().unwrap();
        assert_eq!(err.code, EXIT_CONDITIONS);
    }

    #[test]
    fn solve_small_grid() {
        let mut cfg = reference();
        cfg.t = 2;
        cfg.method = Method::Discrete;
        let out = cmd_solve(&cfg).unwrap();
        let v = out.solution.value_discrete.unwrap();
        assert!(v >= 0.0 && v <= out.solution.edge * (1.0 - out.solution.a) + 1e-12);
        assert_eq!(out.solution.analytic, "not_requested");
    }

    #[test]
    fn suffix_paths() {
        assert_eq!(with_suffix(Path::new("/tmp/cdf.csv"), "discrete"), PathBuf::from("/tmp/cdf.discrete.csv"));
        assert_eq!(with_suffix(Path::new("out"), "jammer"), PathBuf::from("out.jammer"));
    }
}
