//! Physical channel description, received powers, the eight corner points of
//! the destination and eavesdropper rate regions, and the case gate that
//! decides whether the closed-form analysis applies.
//!
//! All rates are in bits per channel use (base-2 logarithms). Noise variance
//! is fixed at one, so a received power is also a linear SNR.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{GameError, Result};

/// Absolute slack used for every rate comparison (corner ordering and
/// region membership), so boundary cases are not decided by rounding noise.
pub const RATE_SLACK: f64 = 1e-12;

fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

/// Channel-gain magnitudes and power budgets of the source and the relay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub h_sd: f64,
    pub h_rd: f64,
    pub h_se: f64,
    pub h_re: f64,
    pub p_s: f64,
    pub p_r: f64,
}

impl ChannelConfig {
    pub fn new(h_sd: f64, h_rd: f64, h_se: f64, h_re: f64, p_s: f64, p_r: f64) -> Result<Self> {
        let cfg = Self { h_sd, h_rd, h_se, h_re, p_s, p_r };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The worked example used throughout the docs and tests:
    /// |h_SD| = 1, |h_RD| = 1/2, |h_SE| = |h_RE| = 2/3, P_S = P_R = 10.
    pub fn reference() -> Self {
        Self { h_sd: 1.0, h_rd: 0.5, h_se: 2.0 / 3.0, h_re: 2.0 / 3.0, p_s: 10.0, p_r: 10.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("h_sd", self.h_sd),
            ("h_rd", self.h_rd),
            ("h_se", self.h_se),
            ("h_re", self.h_re),
            ("p_s", self.p_s),
            ("p_r", self.p_r),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(GameError::InvalidConfig(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        if self.p_s <= 0.0 {
            return Err(GameError::InvalidConfig("p_s must be strictly positive".into()));
        }
        Ok(())
    }

    pub fn received_powers(&self) -> ReceivedPowers {
        received_powers(self)
    }
}

/// Received powers `|h_kl|^2 P_k` at the destination and the eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReceivedPowers {
    pub g_sd: f64,
    pub g_rd: f64,
    pub g_se: f64,
    pub g_re: f64,
}

impl ReceivedPowers {
    pub fn new(g_sd: f64, g_rd: f64, g_se: f64, g_re: f64) -> Result<Self> {
        for (name, v) in [("g_sd", g_sd), ("g_rd", g_rd), ("g_se", g_se), ("g_re", g_re)] {
            if !v.is_finite() || v < 0.0 {
                return Err(GameError::InvalidConfig(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(Self { g_sd, g_rd, g_se, g_re })
    }
}

pub fn received_powers(cfg: &ChannelConfig) -> ReceivedPowers {
    ReceivedPowers {
        g_sd: cfg.h_sd * cfg.h_sd * cfg.p_s,
        g_rd: cfg.h_rd * cfg.h_rd * cfg.p_r,
        g_se: cfg.h_se * cfg.h_se * cfg.p_s,
        g_re: cfg.h_re * cfg.h_re * cfg.p_r,
    }
}

/// Boundary constants of the destination (upper-case) and eavesdropper
/// (lower-case) rate regions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerPoints {
    pub big_delta_s: f64,
    pub big_delta_r: f64,
    pub big_omega_s: f64,
    pub big_omega_r: f64,
    pub small_delta_s: f64,
    pub small_delta_r: f64,
    pub small_omega_s: f64,
    pub small_omega_r: f64,
    pub sum_d: f64,
    pub sum_e: f64,
}

pub fn corner_points(p: &ReceivedPowers) -> CornerPoints {
    let sum_d = log2_1p(p.g_sd + p.g_rd);
    let sum_e = log2_1p(p.g_se + p.g_re);
    CornerPoints {
        big_delta_s: log2_1p(p.g_sd),
        big_delta_r: log2_1p(p.g_rd / (1.0 + p.g_sd)),
        big_omega_s: log2_1p(p.g_sd / (1.0 + p.g_rd)),
        big_omega_r: log2_1p(p.g_rd),
        small_delta_s: log2_1p(p.g_se),
        small_delta_r: log2_1p(p.g_re / (1.0 + p.g_se)),
        small_omega_s: log2_1p(p.g_se / (1.0 + p.g_re)),
        small_omega_r: log2_1p(p.g_re),
        sum_d,
        sum_e,
    }
}

/// Outcome of the five ordering conditions on the corner points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
    pub cond_iv: bool,
    pub cond_v: bool,
    pub all_hold: bool,
}

impl CaseReport {
    pub fn require(self) -> Result<()> {
        if self.all_hold {
            Ok(())
        } else {
            Err(GameError::ConditionsViolated(self))
        }
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed: Vec<&str> = [
            ("i", self.cond_i),
            ("ii", self.cond_ii),
            ("iii", self.cond_iii),
            ("iv", self.cond_iv),
            ("v", self.cond_v),
        ]
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| *name)
        .collect();
        if failed.is_empty() {
            write!(f, "all conditions hold")
        } else {
            write!(f, "condition(s) {} fail", failed.join(", "))
        }
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b + RATE_SLACK
}

pub fn check_conditions(c: &CornerPoints) -> CaseReport {
    let cond_i = le(c.sum_e, c.sum_d);
    let cond_ii = le(c.small_delta_s, c.big_delta_s);
    let cond_iii = le(c.big_delta_r, c.small_delta_r);
    let cond_iv = le(c.small_omega_s, c.big_omega_s) && le(c.big_omega_s, c.small_delta_s);
    let cond_v = le(c.small_delta_r, c.big_omega_r) && le(c.big_omega_r, c.small_omega_r);
    CaseReport {
        cond_i,
        cond_ii,
        cond_iii,
        cond_iv,
        cond_v,
        all_hold: cond_i && cond_ii && cond_iii && cond_iv && cond_v,
    }
}

/// Secrecy rate of the plain wiretap channel with a silent relay.
pub fn baseline_no_jammer(p: &ReceivedPowers) -> f64 {
    (log2_1p(p.g_sd) - log2_1p(p.g_se)).max(0.0)
}

/// A parsed channel-description document: either physical gains and powers
/// or received powers given directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelInput {
    Physical(ChannelConfig),
    Powers(ReceivedPowers),
}

const PHYSICAL_KEYS: [&str; 6] = ["h_sd", "h_rd", "h_se", "h_re", "p_s", "p_r"];
const POWER_KEYS: [&str; 4] = ["g_sd", "g_rd", "g_se", "g_re"];

impl ChannelInput {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| GameError::InvalidConfig(format!("malformed JSON: {e}")))?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| GameError::InvalidConfig("channel document must be a JSON object".into()))?;
        let has_physical = PHYSICAL_KEYS.iter().any(|k| obj.contains_key(*k));
        let has_powers = POWER_KEYS.iter().any(|k| obj.contains_key(*k));
        if let Some(unknown) =
            obj.keys().find(|k| !PHYSICAL_KEYS.contains(&k.as_str()) && !POWER_KEYS.contains(&k.as_str()))
        {
            return Err(GameError::InvalidConfig(format!("unknown key `{unknown}`")));
        }
        match (has_physical, has_powers) {
            (true, true) => Err(GameError::InvalidConfig(
                "gain/power keys (h_*, p_*) and received-power keys (g_*) are mutually exclusive".into(),
            )),
            (false, false) => Err(GameError::InvalidConfig("empty channel document".into())),
            (true, false) => {
                let f = |k| number(obj, k);
                Ok(Self::Physical(ChannelConfig::new(
                    f("h_sd")?,
                    f("h_rd")?,
                    f("h_se")?,
                    f("h_re")?,
                    f("p_s")?,
                    f("p_r")?,
                )?))
            }
            (false, true) => {
                let f = |k| number(obj, k);
                Ok(Self::Powers(ReceivedPowers::new(f("g_sd")?, f("g_rd")?, f("g_se")?, f("g_re")?)?))
            }
        }
    }

    pub fn powers(&self) -> ReceivedPowers {
        match self {
            Self::Physical(cfg) => cfg.received_powers(),
            Self::Powers(p) => *p,
        }
    }
}

fn number(obj: &Map<String, Value>, key: &str) -> Result<f64> {
    obj.get(key)
        .ok_or_else(|| GameError::InvalidConfig(format!("missing key `{key}`")))?
        .as_f64()
        .ok_or_else(|| GameError::InvalidConfig(format!("`{key}` must be a number")))
}
