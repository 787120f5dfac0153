//! A probability law over one player's rates: either the closed-form
//! c.d.f. or a finite weight vector on grid rates.

use serde::{Deserialize, Serialize};

use crate::analytic::{Atom, PiecewiseCdf};

/// Finite mixture over rates, rates sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteStrategy {
    rates: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteStrategy {
    /// Panics if lengths differ, a weight is negative, or rates are not
    /// sorted. Weights are renormalized to sum to one.
    pub fn new(rates: Vec<f64>, probs: Vec<f64>) -> Self {
        assert_eq!(rates.len(), probs.len(), "rates and weights must align");
        assert!(!rates.is_empty(), "empty strategy");
        assert!(probs.iter().all(|&p| p >= 0.0 && p.is_finite()), "weights must be non-negative");
        assert!(rates.windows(2).all(|w| w[0] <= w[1]), "rates must be sorted");
        let total: f64 = probs.iter().sum();
        assert!(total > 0.0, "weights sum to zero");
        let probs = probs.into_iter().map(|p| p / total).collect();
        Self { rates, probs }
    }

    pub fn point_mass(rate: f64) -> Self {
        Self::new(vec![rate], vec![1.0])
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn cdf(&self, rate: f64) -> f64 {
        let n = self.rates.partition_point(|&r| r <= rate);
        self.probs[..n].iter().sum::<f64>().min(1.0)
    }

    pub fn sample(&self, uniform: f64) -> f64 {
        let mut acc = 0.0;
        for (&r, &p) in self.rates.iter().zip(&self.probs) {
            acc += p;
            if uniform < acc {
                return r;
            }
        }
        // Rounding left the running sum a hair under one.
        *self
            .rates
            .iter()
            .zip(&self.probs)
            .rev()
            .find(|(_, &p)| p > 0.0)
            .map(|(r, _)| r)
            .expect("positive total weight")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MixedStrategy {
    Continuous(PiecewiseCdf),
    Discrete(DiscreteStrategy),
}

impl MixedStrategy {
    pub fn cdf(&self, rate: f64) -> f64 {
        match self {
            Self::Continuous(c) => c.eval(rate),
            Self::Discrete(d) => d.cdf(rate),
        }
    }

    pub fn sample(&self, uniform: f64) -> f64 {
        match self {
            Self::Continuous(c) => c.sample(uniform),
            Self::Discrete(d) => d.sample(uniform),
        }
    }

    /// Point masses; a discrete strategy is all atoms.
    pub fn atoms(&self) -> Vec<Atom> {
        match self {
            Self::Continuous(c) => c.atoms().to_vec(),
            Self::Discrete(d) => d
                .rates
                .iter()
                .zip(&d.probs)
                .filter(|(_, &p)| p > 0.0)
                .map(|(&location, &mass)| Atom { location, mass })
                .collect(),
        }
    }
}

impl From<PiecewiseCdf> for MixedStrategy {
    fn from(c: PiecewiseCdf) -> Self {
        Self::Continuous(c)
    }
}

impl From<DiscreteStrategy> for MixedStrategy {
    fn from(d: DiscreteStrategy) -> Self {
        Self::Discrete(d)
    }
}
