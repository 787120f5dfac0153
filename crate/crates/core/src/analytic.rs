//! Closed-form mixed equilibrium of the reduced game for skews `a <= 2/3`.
//!
//! On the unit square both players use the same law. Writing `b = 1 - a`
//! and `t = x / b` for the normalized rate `x`, the c.d.f. is
//! `alpha * e^t * P_m(t)` on the `m`-th slab `[m b, (m + 1) b]`, where the
//! polynomials solve the delay equation `b F'(x) = F(x) - F(x - b)`:
//!
//! ```text
//! P_0(t) = 1
//! P_1(t) = (1 + e^-1) - e^-1 t
//! P_2(t) = (1 + e^-1 + 2e^-2) - (e^-1 + 2e^-2) t + e^-2 t^2 / 2
//! ```
//!
//! `alpha` is fixed by `F(1) = 1`, and `F(0) = alpha` is an atom at the left
//! edge of the support. The equilibrium value is `L alpha (1 - a)`.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::payoff::ReducedGame;

const E1: f64 = 1.0 / E;
const E2: f64 = 1.0 / (E * E);

const SEAM_TOL: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-6;
const MAX_RESIDUAL: f64 = 0.05;
const MONOTONE_GRID: usize = 10_000;

/// Interval index `k` with `a` in `(k/(k+1), (k+1)/(k+2)]`; `[0, 1/2]` maps
/// to `k = 0`.
pub fn interval_index(a: f64) -> Result<usize> {
    if a.is_nan() || a < 0.0 {
        return Err(GameError::DomainError { function: "interval_index", skew: a });
    }
    if a >= 1.0 - SEAM_TOL {
        return Err(GameError::SkewAtOne { skew: a });
    }
    if a <= 0.5 {
        return Ok(0);
    }
    let ratio = a / (1.0 - a);
    Ok(((ratio - 1e-9).ceil() as usize).saturating_sub(1))
}

/// Normalizing constant for `0 <= a <= 1/2`.
pub fn alpha_g0(a: f64) -> Result<f64> {
    if !(0.0..=0.5 + SEAM_TOL).contains(&a) {
        return Err(GameError::DomainError { function: "g_0", skew: a });
    }
    let b = 1.0 - a;
    Ok((-1.0 / b).exp() / (1.0 - a / b * E1))
}

/// Normalizing constant for `1/2 < a <= 2/3`.
pub fn alpha_g1(a: f64) -> Result<f64> {
    if !(a > 0.5 && a <= 2.0 / 3.0 + SEAM_TOL) {
        return Err(GameError::DomainError { function: "g_1", skew: a });
    }
    let b = 1.0 - a;
    let denom = 1.0 + E1 + 2.0 * E2 - (E1 + 2.0 * E2) / b + E2 / (2.0 * b * b);
    Ok((-1.0 / b).exp() / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Source,
    Jammer,
}

/// A point mass at an absolute rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// One slab of the c.d.f.: `scale * e^t * sum(coeffs[i] * t^i)` with
/// `t = x / shape` on normalized `x` in `[start, end]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfSegment {
    pub start: f64,
    pub end: f64,
    pub coeffs: Vec<f64>,
}

impl CdfSegment {
    fn eval(&self, x: f64, scale: f64, shape: f64) -> f64 {
        let t = x / shape;
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c);
        scale * t.exp() * poly
    }
}

/// Piecewise-analytic c.d.f. on `[support_start, support_start + edge]`
/// with explicit atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseCdf {
    pub support_start: f64,
    pub edge: f64,
    pub role: Role,
    scale: f64,
    shape: f64,
    segments: Vec<CdfSegment>,
    atoms: Vec<Atom>,
}

impl PiecewiseCdf {
    /// Builds and validates the equilibrium c.d.f. for interval index `k`.
    /// Returns the c.d.f. and the mass (if any) moved to the right edge.
    fn build(k: usize, skew: f64, alpha: f64, support_start: f64, edge: f64, role: Role) -> Result<(Self, f64)> {
        let b = 1.0 - skew;
        let slabs: &[&[f64]] = match k {
            0 => &[&[1.0], &[1.0 + E1, -E1]],
            1 => &[&[1.0], &[1.0 + E1, -E1], &[1.0 + E1 + 2.0 * E2, -(E1 + 2.0 * E2), E2 / 2.0]],
            _ => return Err(GameError::UnsupportedK { k }),
        };
        let mut segments = Vec::with_capacity(slabs.len());
        for (m, coeffs) in slabs.iter().enumerate() {
            let start = (m as f64 * b).min(1.0);
            let end = if m + 1 == slabs.len() { 1.0 } else { ((m + 1) as f64 * b).min(1.0) };
            if end > start || (m == 0 && end >= start) {
                segments.push(CdfSegment { start, end, coeffs: coeffs.to_vec() });
            }
        }

        let mut cdf = Self { support_start, edge, role, scale: alpha, shape: b, segments, atoms: Vec::new() };

        let left = cdf.continuous_at(0.0);
        let right = cdf.continuous_at(1.0);
        let residual = 1.0 - right;
        if !(-NORMALIZATION_TOL..MAX_RESIDUAL).contains(&residual) {
            return Err(GameError::NormalizationFailure(format!("F at the right edge is {right}, expected 1")));
        }
        if left < 0.0 {
            return Err(GameError::NormalizationFailure(format!("negative mass {left} at left edge")));
        }
        let mut prev = left;
        for i in 1..=MONOTONE_GRID {
            let f = cdf.continuous_at(i as f64 / MONOTONE_GRID as f64);
            if f < prev - 1e-12 {
                return Err(GameError::NormalizationFailure(format!(
                    "c.d.f. decreases near x = {}",
                    i as f64 / MONOTONE_GRID as f64
                )));
            }
            prev = f;
        }

        cdf.atoms.push(Atom { location: support_start, mass: left });
        let moved = if residual > NORMALIZATION_TOL {
            cdf.atoms.push(Atom { location: support_start + edge, mass: residual });
            residual
        } else {
            0.0
        };
        Ok((cdf, moved))
    }

    /// Segment formula at normalized `x` in `[0, 1]`, without any mass moved
    /// to the right edge. Includes the left atom.
    fn continuous_at(&self, x: f64) -> f64 {
        let seg = self
            .segments
            .iter()
            .find(|s| x <= s.end)
            .unwrap_or_else(|| self.segments.last().expect("at least one segment"));
        seg.eval(x, self.scale, self.shape)
    }

    /// Same law anchored at a different origin.
    pub fn translated(&self, support_start: f64, role: Role) -> Self {
        let shift = support_start - self.support_start;
        let mut out = self.clone();
        out.support_start = support_start;
        out.role = role;
        for atom in &mut out.atoms {
            atom.location += shift;
        }
        out
    }

    pub fn support_end(&self) -> f64 {
        self.support_start + self.edge
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn segments(&self) -> &[CdfSegment] {
        &self.segments
    }

    /// Normalized positions where the density changes formula.
    pub fn seams(&self) -> impl Iterator<Item = f64> + '_ {
        self.segments.iter().map(|s| s.start).skip(1)
    }

    fn left_mass(&self) -> f64 {
        self.atoms.first().map_or(0.0, |a| a.mass)
    }

    fn right_mass(&self) -> f64 {
        self.atoms.get(1).map_or(0.0, |a| a.mass)
    }

    /// Continuous (atom-free) part of the c.d.f. at an absolute rate.
    pub fn continuous_part(&self, rate: f64) -> f64 {
        let x = ((rate - self.support_start) / self.edge).clamp(0.0, 1.0);
        self.continuous_at(x).min(1.0) - self.left_mass()
    }

    /// Right-continuous c.d.f. at an absolute rate.
    pub fn eval(&self, rate: f64) -> f64 {
        let x = (rate - self.support_start) / self.edge;
        if x < 0.0 {
            0.0
        } else if x >= 1.0 {
            1.0
        } else {
            self.continuous_at(x).clamp(0.0, 1.0)
        }
    }

    /// Generalized inverse `F^-1(u)` for `u` in `[0, 1)`.
    pub fn sample(&self, uniform: f64) -> f64 {
        if uniform < self.left_mass() {
            return self.support_start;
        }
        if uniform >= 1.0 - self.right_mass() {
            return self.support_end();
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let f = self.continuous_at(mid);
            if f >= uniform {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= f64::EPSILON || (f - uniform).abs() <= 1e-12 && f >= uniform {
                break;
            }
        }
        self.support_start + self.edge * hi
    }
}

pub fn cdf_eval(cdf: &PiecewiseCdf, rate: f64) -> f64 {
    cdf.eval(rate)
}

pub fn sample(cdf: &PiecewiseCdf, uniform: f64) -> f64 {
    cdf.sample(uniform)
}

/// Closed-form equilibrium of the reduced game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSolution {
    pub k: usize,
    pub alpha: f64,
    pub value: f64,
    pub skew: f64,
    pub edge: f64,
    pub cdf_source: PiecewiseCdf,
    pub cdf_jammer: PiecewiseCdf,
    pub warnings: Vec<String>,
}

pub fn solve_analytic(rg: &ReducedGame) -> Result<AnalyticSolution> {
    let a = rg.skew;
    let k = interval_index(a)?;
    let alpha = match k {
        0 => alpha_g0(a)?,
        1 => alpha_g1(a)?,
        _ => return Err(GameError::UnsupportedK { k }),
    };
    let (cdf_source, moved) = PiecewiseCdf::build(k, a, alpha, rg.origin_xi, rg.edge, Role::Source)?;
    let cdf_jammer = cdf_source.translated(rg.origin_eta, Role::Jammer);
    let mut warnings = Vec::new();
    if moved > 0.0 {
        warnings.push(format!("c.d.f. short of 1 by {moved:.3e}; residual placed as an atom at the right edge"));
    }
    Ok(AnalyticSolution {
        k,
        alpha,
        value: rg.edge * alpha * (1.0 - a),
        skew: a,
        edge: rg.edge,
        cdf_source,
        cdf_jammer,
        warnings,
    })
}

impl AnalyticSolution {
    /// Same solution with `alpha` multiplied by `factor`, skipping
    /// validation; the c.d.f.s are capped at 1 so they stay probability
    /// laws. Only meant for negative controls.
    pub fn with_scaled_alpha(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.alpha *= factor;
        out.value *= factor;
        for cdf in [&mut out.cdf_source, &mut out.cdf_jammer] {
            cdf.scale *= factor;
            for atom in &mut cdf.atoms {
                atom.mass *= factor;
            }
        }
        out
    }
}
