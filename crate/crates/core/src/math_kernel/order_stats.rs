//! Order statistics of IID abilities, indexed from the top: `ell = 1` is the
//! maximum of `n` draws.
//!
//! The `_u` variants take the prior CDF value `u = F(x)` directly.

use super::special::{binomial, powu};
use crate::error::{Error, Result};
use crate::model::Prior;

/// CDF of the `ell`-th largest of `n` draws at `u = F(x)`. Zero for `ell = 0`
/// and `ell = n + 1` by convention.
pub fn order_stat_cdf_u(ell: u32, n: u32, u: f64) -> f64 {
    if ell == 0 || ell > n {
        return 0.0;
    }
    let v = 1.0 - u;
    (n - ell + 1..=n)
        .map(|j| binomial(n, j) * powu(u, j) * powu(v, n - j))
        .sum()
}

/// Density of the `ell`-th largest of `n` draws with respect to `F`, i.e.
/// the density in `x` divided by `f(x)`. Zero outside `1..=n`.
pub fn order_stat_density_u(ell: u32, n: u32, u: f64) -> f64 {
    if ell == 0 || ell > n {
        return 0.0;
    }
    n as f64 * binomial(n - 1, ell - 1) * powu(u, n - ell) * powu(1.0 - u, ell - 1)
}

/// Probability that a fixed player ranks exactly `ell`-th among herself and
/// `n1 - 1` others, given `u = F(x)` of her ability:
/// `C(n1-1, ell-1) (1-u)^(ell-1) u^(n1-ell)`.
pub fn rank_probability_u(ell: u32, n1: u32, u: f64) -> f64 {
    if ell == 0 || ell > n1 {
        return 0.0;
    }
    binomial(n1 - 1, ell - 1) * powu(1.0 - u, ell - 1) * powu(u, n1 - ell)
}

/// Derivative of [`rank_probability_u`] in `u`.
pub fn rank_probability_du(ell: u32, n1: u32, u: f64) -> f64 {
    if ell == 0 || ell > n1 {
        return 0.0;
    }
    let v = 1.0 - u;
    let up = if n1 > ell {
        (n1 - ell) as f64 * powu(u, n1 - ell - 1) * powu(v, ell - 1)
    } else {
        0.0
    };
    let down = if ell > 1 {
        (ell - 1) as f64 * powu(v, ell - 2) * powu(u, n1 - ell)
    } else {
        0.0
    };
    binomial(n1 - 1, ell - 1) * (up - down)
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("order statistic argument {x} outside (0, 1)")))
    }
}

/// `F_(ell, n)(x)` for `0 <= ell <= n + 1`.
pub fn order_stat_cdf(ell: u32, n: u32, x: f64, prior: &Prior) -> Result<f64> {
    if n == 0 || ell > n + 1 {
        return Err(Error::domain(format!("invalid order statistic ({ell}, {n})")));
    }
    check_x(x)?;
    Ok(order_stat_cdf_u(ell, n, prior.cdf(x)))
}

/// Density of `F_(ell, n)` at `x` for `1 <= ell <= n`.
pub fn order_stat_pdf(ell: u32, n: u32, x: f64, prior: &Prior) -> Result<f64> {
    if n == 0 || ell == 0 || ell > n {
        return Err(Error::domain(format!("invalid order statistic ({ell}, {n})")));
    }
    check_x(x)?;
    Ok(order_stat_density_u(ell, n, prior.cdf(x)) * prior.pdf(x))
}

/// `F_(ell, n1-1)(x) - F_(ell-1, n1-1)(x)` for `1 <= ell <= n1`.
pub fn rank_probability(ell: u32, n1: u32, x: f64, prior: &Prior) -> Result<f64> {
    if n1 < 2 || ell == 0 || ell > n1 {
        return Err(Error::domain(format!("invalid rank ({ell}, {n1})")));
    }
    check_x(x)?;
    Ok(rank_probability_u(ell, n1, prior.cdf(x)))
}
