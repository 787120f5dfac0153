//! C ABI over the secrecy-game solver.
//!
//! Channels and solutions are opaque heap handles created by the `sg_*`
//! constructors and released with the matching `_free` function. Every
//! fallible call returns an [`SgStatus`]; on failure a description is
//! available from [`sg_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use secrecy_game::analytic::solve_analytic;
use secrecy_game::channel::{
    baseline_no_jammer, check_conditions, corner_points, ChannelConfig, ChannelInput, CornerPoints, ReceivedPowers,
};
use secrecy_game::discrete::{build_grid_game, solve_matrix_game_lp};
use secrecy_game::payoff::reduce_game;
use secrecy_game::verify::{simulate_blocks, StrategyProfile};
use secrecy_game::GameError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    ConditionsViolated = 3,
    DegenerateGame = 4,
    Unsupported = 5,
    SolverFailure = 6,
    InvalidArgument = 7,
    Panic = 8,
}

/// Opaque channel handle.
pub struct SgChannel {
    powers: ReceivedPowers,
    corners: CornerPoints,
}

/// Opaque handle to an equilibrium: value plus both mixed strategies.
pub struct SgSolution {
    value: f64,
    corners: CornerPoints,
    profile: StrategyProfile,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &GameError) -> SgStatus {
    match e {
        GameError::InvalidConfig(_) => SgStatus::InvalidConfig,
        GameError::ConditionsViolated(_) => SgStatus::ConditionsViolated,
        GameError::DegenerateGame { .. } => SgStatus::DegenerateGame,
        GameError::SkewAtOne { .. } | GameError::UnsupportedK { .. } | GameError::DomainError { .. } => {
            SgStatus::Unsupported
        }
        GameError::NormalizationFailure(_) | GameError::SolverFailure(_) => SgStatus::SolverFailure,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (SgStatus, String)>) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SgStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SgStatus::Panic
        }
    }
}

fn game_err(e: GameError) -> (SgStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (SgStatus, String) {
    (SgStatus::NullPointer, "null pointer argument".into())
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (SgStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

/// Boxes `value` into `*out`, checking `out` first so nothing leaks.
unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), (SgStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, (SgStatus, String)> {
    p.as_ref().ok_or_else(null)
}

fn new_channel(input: ChannelInput) -> SgChannel {
    let powers = input.powers();
    SgChannel { powers, corners: corner_points(&powers) }
}

/// Creates a channel from channel gains and transmit powers.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sg_channel_from_gains(
    h_sd: f64,
    h_rd: f64,
    h_se: f64,
    h_re: f64,
    p_s: f64,
    p_r: f64,
    out: *mut *mut SgChannel,
) -> SgStatus {
    guard(|| {
        let cfg = ChannelConfig::new(h_sd, h_rd, h_se, h_re, p_s, p_r).map_err(game_err)?;
        write_handle(out, new_channel(ChannelInput::Physical(cfg)))
    })
}

/// Creates a channel from received powers `g = h^2 P`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sg_channel_from_powers(
    g_sd: f64,
    g_rd: f64,
    g_se: f64,
    g_re: f64,
    out: *mut *mut SgChannel,
) -> SgStatus {
    guard(|| {
        let p = ReceivedPowers::new(g_sd, g_rd, g_se, g_re).map_err(game_err)?;
        write_handle(out, new_channel(ChannelInput::Powers(p)))
    })
}

/// Creates a channel from a JSON document (same format as the CLI).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_channel_from_json(json: *const c_char, out: *mut *mut SgChannel) -> SgStatus {
    guard(|| {
        if json.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| (SgStatus::InvalidConfig, "document is not UTF-8".to_string()))?;
        let input = ChannelInput::from_json_str(text).map_err(game_err)?;
        write_handle(out, new_channel(input))
    })
}

/// Releases a channel handle. Null is ignored.
///
/// # Safety
/// `channel` must come from an `sg_channel_*` constructor and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn sg_channel_free(channel: *mut SgChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Secrecy rate with a silent relay, in bits per channel use.
///
/// # Safety
/// `channel` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_channel_baseline(channel: *const SgChannel, out: *mut f64) -> SgStatus {
    guard(|| write_out(out, baseline_no_jammer(&borrow(channel)?.powers)))
}

/// Whether the corner points satisfy all case conditions the solver covers.
///
/// # Safety
/// `channel` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_channel_conditions_hold(channel: *const SgChannel, out: *mut bool) -> SgStatus {
    guard(|| write_out(out, check_conditions(&borrow(channel)?.corners).all_hold))
}

/// Solves the game in closed form.
///
/// # Safety
/// `channel` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_solve_analytic(channel: *const SgChannel, out: *mut *mut SgSolution) -> SgStatus {
    guard(|| {
        let ch = borrow(channel)?;
        let rg = reduce_game(&ch.corners).map_err(game_err)?;
        let sol = solve_analytic(&rg).map_err(game_err)?;
        let handle =
            SgSolution { value: sol.value, corners: ch.corners, profile: StrategyProfile::from_analytic(&sol) };
        write_handle(out, handle)
    })
}

/// Solves the `(t+1) x (t+1)` grid approximation by linear programming.
///
/// # Safety
/// `channel` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_solve_discrete(channel: *const SgChannel, t: usize, out: *mut *mut SgSolution) -> SgStatus {
    guard(|| {
        let ch = borrow(channel)?;
        let rg = reduce_game(&ch.corners).map_err(game_err)?;
        let pm = build_grid_game(&rg, &ch.corners, t).map_err(game_err)?;
        let sol = solve_matrix_game_lp(&pm.matrix).map_err(game_err)?;
        let handle =
            SgSolution { value: sol.value, corners: ch.corners, profile: StrategyProfile::from_matrix(&pm, &sol) };
        write_handle(out, handle)
    })
}

/// Releases a solution handle. Null is ignored.
///
/// # Safety
/// `solution` must come from an `sg_solve_*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sg_solution_free(solution: *mut SgSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Equilibrium secrecy rate.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_solution_value(solution: *const SgSolution, out: *mut f64) -> SgStatus {
    guard(|| write_out(out, borrow(solution)?.value))
}

/// Source c.d.f. at `rate`.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_solution_cdf_source(solution: *const SgSolution, rate: f64, out: *mut f64) -> SgStatus {
    guard(|| write_out(out, borrow(solution)?.profile.source.cdf(rate)))
}

/// Jammer c.d.f. at `rate`.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_solution_cdf_jammer(solution: *const SgSolution, rate: f64, out: *mut f64) -> SgStatus {
    guard(|| write_out(out, borrow(solution)?.profile.jammer.cdf(rate)))
}

/// Plays `blocks` independent blocks with both strategies from `seed` and
/// reports the mean secrecy rate and its standard error.
///
/// # Safety
/// `solution` must be a live handle; `mean` and `std_error` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_solution_simulate(
    solution: *const SgSolution,
    blocks: u64,
    seed: u64,
    mean: *mut f64,
    std_error: *mut f64,
) -> SgStatus {
    guard(|| {
        let s = borrow(solution)?;
        if mean.is_null() || std_error.is_null() {
            return Err(null());
        }
        if blocks == 0 {
            return Err((SgStatus::InvalidArgument, "blocks must be at least 1".into()));
        }
        let r = simulate_blocks(&s.profile.source, &s.profile.jammer, &s.corners, blocks, seed, s.value);
        write_out(mean, r.empirical_mean)?;
        write_out(std_error, r.std_error)
    })
}

/// Description of the last failure on this thread; empty after a success.
/// The pointer stays valid until the next `sg_*` call on the same thread.
#[no_mangle]
pub extern "C" fn sg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn sg_status_name(status: SgStatus) -> *const c_char {
    let name: &'static CStr = match status {
        SgStatus::Ok => c"ok",
        SgStatus::NullPointer => c"null pointer",
        SgStatus::InvalidConfig => c"invalid configuration",
        SgStatus::ConditionsViolated => c"case conditions violated",
        SgStatus::DegenerateGame => c"degenerate game",
        SgStatus::Unsupported => c"unsupported parameter range",
        SgStatus::SolverFailure => c"solver failure",
        SgStatus::InvalidArgument => c"invalid argument",
        SgStatus::Panic => c"internal panic",
    };
    name.as_ptr()
}
