//! Machine-readable outputs: JSON documents rounded to 12 significant
//! digits and the CSV exports (c.d.f. curves, grid matrix, strategies).

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::{CaseReport, CornerPoints, ReceivedPowers};
use crate::discrete::PayoffMatrix;
use crate::payoff::PureStrategyGap;
use crate::strategy::MixedStrategy;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant decimal digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Serializes `value` with every float rounded to 12 significant digits.
pub fn to_rounded_json<T: Serialize>(value: &T) -> serde_json::Result<Value> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    Ok(v)
}

pub fn to_rounded_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_string_pretty(&to_rounded_json(value)?)
}

fn fmt_sig(x: f64) -> String {
    // `+ 0.0` folds negative zero so cumulative sums never print "-0".
    format!("{}", round_sig(x) + 0.0)
}

/// Output of the `analyze` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub powers: ReceivedPowers,
    pub corners: CornerPoints,
    pub conditions: CaseReport,
    pub conditions_hold: bool,
    pub baseline: f64,
    pub gap: Option<PureStrategyGap>,
}

/// Output of the `solve` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSolution {
    pub method: String,
    /// Authoritative equilibrium value: the closed form when it passed its
    /// checks, otherwise the grid game.
    pub value: f64,
    pub value_analytic: Option<f64>,
    pub value_discrete: Option<f64>,
    /// `ok`, `unsupported_k`, `skew_at_one`, `normalization_failure`,
    /// `failed_check` or `not_requested`.
    pub analytic: String,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub a: f64,
    #[serde(rename = "L")]
    pub edge: f64,
    pub t: usize,
    pub bound: f64,
    pub gap: Option<f64>,
    pub gap_within_bound: Option<bool>,
    pub warnings: Vec<String>,
}

/// One row per rate: `(rate, F_source(rate), F_jammer(rate translated))`.
pub fn cdf_rows(
    source: &MixedStrategy,
    jammer: &MixedStrategy,
    origin_xi: f64,
    origin_eta: f64,
    edge: f64,
    n: usize,
) -> Vec<(f64, f64, f64)> {
    let n = n.max(1);
    let lo = origin_xi - 0.05 * edge;
    let span = 1.1 * edge;
    (0..=n)
        .map(|k| {
            let rate = lo + span * k as f64 / n as f64;
            let eta = rate - origin_xi + origin_eta;
            (rate, source.cdf(rate), jammer.cdf(eta))
        })
        .collect()
}

pub fn write_cdf_csv<W: Write>(out: W, rows: &[(f64, f64, f64)]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rate", "F_source", "F_jammer"])?;
    for &(r, fs, fj) in rows {
        w.write_record([fmt_sig(r), fmt_sig(fs), fmt_sig(fj)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_matrix_csv<W: Write>(out: W, pm: &PayoffMatrix) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "j", "xi", "eta", "payoff"])?;
    for i in 0..=pm.t {
        for j in 0..=pm.t {
            w.write_record([
                i.to_string(),
                j.to_string(),
                fmt_sig(pm.xi_of(i)),
                fmt_sig(pm.eta_of(j)),
                fmt_sig(pm.get(i, j)),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_strategy_csv<W: Write>(out: W, rates: &[f64], probs: &[f64]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "rate", "probability"])?;
    for (k, (&r, &p)) in rates.iter().zip(probs).enumerate() {
        w.write_record([k.to_string(), fmt_sig(r), fmt_sig(p)])?;
    }
    w.flush()?;
    Ok(())
}
