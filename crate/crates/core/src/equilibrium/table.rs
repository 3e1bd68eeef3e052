use serde::Serialize;

use super::{effort_from_inner, restricted_weight};
use crate::error::{Error, Result};
use crate::math_kernel::Quadrature;
use crate::model::{ContestSpec, ABILITY_EPS};

/// Winning probabilities returned by [`super::win_probabilities`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WinProbabilities {
    /// Probability of winning prize `l + 1`.
    pub probs: Vec<f64>,
    /// True when the effort lies outside the table and the mimicked ability
    /// was clamped to 0 or 1.
    pub boundary: bool,
}

/// Tabulated equilibrium strategy.
///
/// Stores `g(b)` at nodes `u_k = F(a_k)` together with its exact slope, and
/// interpolates with monotone cubic Hermite segments in `u`.
#[derive(Clone, Debug)]
pub struct StrategyTable {
    pub spec: ContestSpec,
    /// Abilities, including the endpoints 0 and 1.
    pub grid: Vec<f64>,
    /// Equilibrium effort at each ability.
    pub efforts: Vec<f64>,
    /// Whether efforts are nondecreasing along the grid.
    pub monotone: bool,
    u: Vec<f64>,
    inner: Vec<f64>,
    slope: Vec<f64>,
}

/// Chebyshev-spaced abilities on `[eps, 1 - eps]` with the endpoints 0 and 1
/// appended.
pub(crate) fn chebyshev_grid(n: usize) -> Vec<f64> {
    let (lo, hi) = (ABILITY_EPS, 1.0 - ABILITY_EPS);
    let mut g = Vec::with_capacity(n + 2);
    g.push(0.0);
    for k in 0..n {
        let c = (std::f64::consts::PI * k as f64 / (n - 1) as f64).cos();
        g.push(0.5 * (lo + hi) - 0.5 * (hi - lo) * c);
    }
    g.push(1.0);
    g
}

impl StrategyTable {
    /// Tabulates the restricted-contest strategy with one cumulative
    /// quadrature sweep over `grid_size` Chebyshev abilities.
    pub fn build(spec: &ContestSpec, grid_size: usize, q: &Quadrature) -> Result<Self> {
        if grid_size < 16 {
            return Err(Error::domain(format!("grid size {grid_size} < 16")));
        }
        let prior = &spec.prior;
        let grid = chebyshev_grid(grid_size);
        let u: Vec<f64> = grid.iter().map(|&a| prior.cdf(a)).collect();
        let density = |t: f64| prior.inverse_cdf(t) * restricted_weight(t, spec);
        let inner = q.cumulative(density, &u)?;
        let last = u.len() - 1;
        let slope: Vec<f64> = u
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                // Endpoint slopes use one-sided limits of the continuous weight.
                let t = if k == 0 {
                    t.max(1e-300)
                } else if k == last {
                    t.min(1.0 - f64::EPSILON)
                } else {
                    t
                };
                density(t)
            })
            .collect();
        let mut efforts = Vec::with_capacity(grid.len());
        for (k, &g) in inner.iter().enumerate() {
            efforts.push(effort_from_inner(g, grid[k], &spec.cost, q.abs_tol)?);
        }
        let monotone = efforts.windows(2).all(|w| w[1] >= w[0]);
        Ok(Self {
            spec: spec.clone(),
            grid,
            efforts,
            monotone,
            u,
            inner,
            slope,
        })
    }

    fn segment(&self, t: f64) -> usize {
        match self.u.partition_point(|&x| x <= t) {
            0 => 0,
            k => (k - 1).min(self.u.len() - 2),
        }
    }

    /// Interpolated `g(b)` at `u = F(a)`.
    pub(crate) fn inner_at_u(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let k = self.segment(t);
        let (x0, x1) = (self.u[k], self.u[k + 1]);
        let (y0, y1) = (self.inner[k], self.inner[k + 1]);
        let h = x1 - x0;
        if h <= 0.0 {
            return y0;
        }
        let delta = (y1 - y0) / h;
        let (mut m0, mut m1) = (self.slope[k], self.slope[k + 1]);
        // Fritsch-Carlson limiter on monotone segments.
        if delta == 0.0 {
            m0 = 0.0;
            m1 = 0.0;
        } else {
            if m0 * delta < 0.0 {
                m0 = 0.0;
            }
            if m1 * delta < 0.0 {
                m1 = 0.0;
            }
            let (al, be) = (m0 / delta, m1 / delta);
            let r = al * al + be * be;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                m0 *= tau;
                m1 *= tau;
            }
        }
        let s = (t - x0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1
    }

    /// Effort at prior-CDF value `u`.
    pub fn effort_at_u(&self, t: f64) -> f64 {
        self.spec.cost.g_inverse(self.inner_at_u(t))
    }

    /// Effort of an ability between the grid nodes.
    pub fn effort(&self, a: f64) -> f64 {
        self.effort_at_u(self.spec.prior.cdf(a))
    }

    /// Largest tabulated effort.
    pub fn max_effort(&self) -> f64 {
        self.efforts.iter().copied().fold(0.0, f64::max)
    }

    /// Ability whose equilibrium effort is `e`, by bisection to `1e-12`.
    /// The flag reports clamping to the ends of the ability range.
    pub fn inverse(&self, e: f64) -> (f64, bool) {
        let target = self.spec.cost.g(e);
        let top = *self.inner.last().unwrap();
        if target >= top {
            return (1.0, target > top);
        }
        if target <= self.inner[0] {
            return (0.0, target < self.inner[0]);
        }
        let prior = &self.spec.prior;
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if self.inner_at_u(prior.cdf(mid)) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi), false)
    }
}
