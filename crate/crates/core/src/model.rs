//! Ability priors, effort costs and the contest instance.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Abilities are kept this far from the edges of `(0, 1)` on grids.
pub const ABILITY_EPS: f64 = 1e-6;

/// A continuous ability distribution on `(0, 1)`.
pub trait AbilityDistribution: Send + Sync + fmt::Debug {
    fn cdf(&self, x: f64) -> f64;
    fn pdf(&self, x: f64) -> f64;
    fn inverse_cdf(&self, u: f64) -> f64;
}

/// Prior over abilities.
#[derive(Clone, Debug)]
pub enum Prior {
    /// `F(x) = x^theta`; `theta = 1` is the uniform prior.
    Power { theta: f64 },
    /// Any user-supplied distribution.
    Custom(Arc<dyn AbilityDistribution>),
}

impl Prior {
    pub fn uniform() -> Self {
        Prior::Power { theta: 1.0 }
    }

    pub fn power(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::domain(format!("prior exponent must be positive, got {theta}")));
        }
        Ok(Prior::Power { theta })
    }

    pub fn custom(dist: Arc<dyn AbilityDistribution>) -> Self {
        Prior::Custom(dist)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Prior::Power { theta } => {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else if *theta == 1.0 {
                    x
                } else {
                    x.powf(*theta)
                }
            }
            Prior::Custom(d) => d.cdf(x),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            Prior::Power { theta } => {
                if x <= 0.0 || x >= 1.0 {
                    0.0
                } else if *theta == 1.0 {
                    1.0
                } else {
                    theta * x.powf(theta - 1.0)
                }
            }
            Prior::Custom(d) => d.pdf(x),
        }
    }

    pub fn inverse_cdf(&self, u: f64) -> f64 {
        match self {
            Prior::Power { theta } => {
                if *theta == 1.0 {
                    u
                } else {
                    u.powf(1.0 / theta)
                }
            }
            Prior::Custom(d) => d.inverse_cdf(u),
        }
    }

    /// Short label such as `power:2`.
    pub fn label(&self) -> String {
        match self {
            Prior::Power { theta } if *theta == 1.0 => "uniform".to_string(),
            Prior::Power { theta } => format!("power:{theta}"),
            Prior::Custom(_) => "custom".to_string(),
        }
    }
}

/// Strictly increasing effort cost `g` with `g(0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CostFn {
    /// `g(e) = e^k`, `k >= 1`; `k = 1` is the linear cost.
    Power { k: f64 },
}

impl CostFn {
    pub fn linear() -> Self {
        CostFn::Power { k: 1.0 }
    }

    pub fn power(k: f64) -> Result<Self> {
        if !(k >= 1.0 && k.is_finite()) {
            return Err(Error::domain(format!("cost exponent must be at least 1, got {k}")));
        }
        Ok(CostFn::Power { k })
    }

    pub fn g(&self, e: f64) -> f64 {
        let CostFn::Power { k } = *self;
        if e <= 0.0 {
            0.0
        } else if k == 1.0 {
            e
        } else {
            e.powf(k)
        }
    }

    pub fn g_inverse(&self, y: f64) -> f64 {
        let CostFn::Power { k } = *self;
        if y <= 0.0 {
            0.0
        } else if k == 1.0 {
            y
        } else {
            y.powf(1.0 / k)
        }
    }

    pub fn g_prime(&self, e: f64) -> f64 {
        let CostFn::Power { k } = *self;
        if k == 1.0 {
            1.0
        } else {
            k * e.max(0.0).powf(k - 1.0)
        }
    }

    pub fn label(&self) -> String {
        let CostFn::Power { k } = *self;
        if k == 1.0 {
            "linear".to_string()
        } else {
            format!("power:{k}")
        }
    }
}

/// A complete contest instance: `n1` entrants, the top `n2` by ability are
/// admitted and compete for `prizes`.
#[derive(Clone, Debug)]
pub struct ContestSpec {
    pub n1: u32,
    pub n2: u32,
    pub prizes: Vec<f64>,
    pub prior: Prior,
    pub cost: CostFn,
}

impl ContestSpec {
    /// Builds and validates a spec.
    pub fn new(n1: u32, n2: u32, prizes: Vec<f64>, prior: Prior, cost: CostFn) -> Result<Self> {
        ContestSpec {
            n1,
            n2,
            prizes,
            prior,
            cost,
        }
        .validate()
    }

    /// Checks the invariants and zero-pads the prize vector to length `n2`.
    pub fn validate(mut self) -> Result<Self> {
        if self.n1 < 2 {
            return Err(Error::InvalidSpec(format!("n1 = {} < 2", self.n1)));
        }
        if self.n2 < 2 {
            return Err(Error::InvalidSpec(format!("n2 = {} < 2", self.n2)));
        }
        if self.n2 > self.n1 {
            return Err(Error::InvalidSpec("n2 > n1".into()));
        }
        if self.prizes.len() > self.n2 as usize {
            return Err(Error::InvalidSpec(format!(
                "{} prizes for {} admitted players",
                self.prizes.len(),
                self.n2
            )));
        }
        if let Some(v) = self.prizes.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec(format!("non-finite prize {v}")));
        }
        if self.prizes.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidSpec("prizes not nonincreasing".into()));
        }
        if self.prizes.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidSpec("negative prize".into()));
        }
        self.prizes.resize(self.n2 as usize, 0.0);
        Ok(self)
    }

    /// Prize for rank `ell` (1-based); zero past the vector.
    pub fn prize(&self, ell: u32) -> f64 {
        self.prizes.get(ell as usize - 1).copied().unwrap_or(0.0)
    }

    pub fn all_prizes_zero(&self) -> bool {
        self.prizes.iter().all(|&v| v == 0.0)
    }

    /// The same contest with a different number of admitted players; the
    /// prize list is truncated or zero-padded.
    pub fn with_n2(&self, n2: u32) -> Result<Self> {
        let mut prizes = self.prizes.clone();
        prizes.truncate(n2 as usize);
        ContestSpec::new(self.n1, n2, prizes, self.prior.clone(), self.cost)
    }
}

/// Prize structures that can be instantiated for any number of admitted players.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PrizeTemplate {
    /// Single prize of the given value.
    WinnerTakeAll(f64),
    /// Explicit list, truncated or zero-padded per row.
    Explicit(Vec<f64>),
}

impl PrizeTemplate {
    pub fn for_n2(&self, n2: u32) -> Vec<f64> {
        let mut v = match self {
            PrizeTemplate::WinnerTakeAll(v1) => vec![*v1],
            PrizeTemplate::Explicit(v) => v.clone(),
        };
        v.resize(n2 as usize, 0.0);
        v
    }
}
