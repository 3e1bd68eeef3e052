//! Symmetric equilibrium efforts for the restricted and the regular contest.
//!
//! Integrals are taken over `u = F(x)` rather than the ability itself, which
//! removes the prior density from every integrand: `g(b(a))` is
//! `∫_0^F(a) F^-1(u) W(u) du` with `W` a rational function of `u`.

mod table;

pub use table::{StrategyTable, WinProbabilities};

use crate::error::{Error, Result};
use crate::math_kernel::{i_raw, j_raw, order_stat_density_u, powu, rank_probability_u, Quadrature};
use crate::model::{ContestSpec, CostFn, Prior};

/// Marginal value of ability rank in `u`-space for the restricted contest:
/// the bracketed prize sum of the first-order condition, without the prior
/// density.
pub(crate) fn restricted_weight(u: f64, spec: &ContestSpec) -> f64 {
    let (n1, n2) = (spec.n1, spec.n2);
    let mut gain = 0.0;
    // Σ_{l<n2} V_l (d_l - d_{l-1}) regrouped so every term is nonnegative.
    for ell in 1..n2 {
        let step = spec.prize(ell) - if ell + 1 < n2 { spec.prize(ell + 1) } else { 0.0 };
        if step != 0.0 {
            gain += step * order_stat_density_u(ell, n1 - 1, u);
        }
    }
    let mut w = gain / j_raw(u, n1, n2);
    let last = spec.prize(n2);
    if last != 0.0 {
        w -= last * (n2 - 1) as f64 * powu(1.0 - u, n2 - 2) / i_raw(u, n1, n2);
    }
    w
}

/// Same quantity for the regular one-round contest with `n` players.
fn one_round_weight(u: f64, n: u32, prizes: &[f64]) -> f64 {
    let v = |ell: u32| prizes.get(ell as usize - 1).copied().unwrap_or(0.0);
    (1..n)
        .map(|ell| {
            let step = v(ell) - v(ell + 1);
            if step == 0.0 {
                0.0
            } else {
                step * order_stat_density_u(ell, n - 1, u)
            }
        })
        .sum()
}

fn check_ability(a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("ability {a} outside (0, 1)")))
    }
}

fn effort_from_inner(inner: f64, a: f64, cost: &CostFn, tol: f64) -> Result<f64> {
    if inner < 0.0 {
        if inner < -tol {
            return Err(Error::NegativeArgument {
                ability: a,
                value: inner,
            });
        }
        return Ok(0.0);
    }
    Ok(cost.g_inverse(inner))
}

/// `g(b(a))` in the restricted contest, before inversion.
pub fn restricted_inner(a: f64, spec: &ContestSpec, q: &Quadrature) -> Result<f64> {
    check_ability(a)?;
    let prior = &spec.prior;
    q.integrate(
        |u| prior.inverse_cdf(u) * restricted_weight(u, spec),
        0.0,
        prior.cdf(a),
    )
}

/// Equilibrium effort of an admitted player with ability `a`.
pub fn restricted_effort(a: f64, spec: &ContestSpec, q: &Quadrature) -> Result<f64> {
    let inner = restricted_inner(a, spec, q)?;
    effort_from_inner(inner, a, &spec.cost, q.abs_tol)
}

/// Equilibrium effort in the regular contest where all `n1` entrants compete
/// for `prizes` (zero-padded to `n1`).
pub fn one_round_effort(
    a: f64,
    n1: u32,
    prizes: &[f64],
    prior: &Prior,
    cost: &CostFn,
    q: &Quadrature,
) -> Result<f64> {
    check_ability(a)?;
    if n1 < 2 {
        return Err(Error::domain(format!("n1 = {n1} < 2")));
    }
    if prizes.len() > n1 as usize {
        return Err(Error::domain("more prizes than players"));
    }
    let inner = q.integrate(
        |u| prior.inverse_cdf(u) * one_round_weight(u, n1, prizes),
        0.0,
        prior.cdf(a),
    )?;
    effort_from_inner(inner, a, cost, q.abs_tol)
}

/// `g(b(a | n1)) - g(b(a | n2))` integrated as one difference of weights,
/// so the result keeps its sign and relative accuracy even when both
/// efforts agree to many digits. `one_round_prizes` is the prize vector of
/// the regular contest among all `n1` players.
pub fn dominance_gap_inner(
    a: f64,
    spec: &ContestSpec,
    one_round_prizes: &[f64],
    q: &Quadrature,
) -> Result<f64> {
    check_ability(a)?;
    if one_round_prizes.len() > spec.n1 as usize {
        return Err(Error::domain("more prizes than players"));
    }
    let prior = &spec.prior;
    q.integrate(
        |u| {
            prior.inverse_cdf(u)
                * (one_round_weight(u, spec.n1, one_round_prizes) - restricted_weight(u, spec))
        },
        0.0,
        prior.cdf(a),
    )
}

/// Ranking probabilities of an admitted player with ability `a_i` who exerts
/// effort as if her ability were `mimic`, when everyone else follows the
/// equilibrium. Exact when `mimic = a_i`.
pub(crate) fn rank_probabilities(mimic_u: f64, own_u: f64, spec: &ContestSpec) -> Vec<f64> {
    let (n1, n2) = (spec.n1, spec.n2);
    let j = j_raw(own_u, n1, n2);
    let mut p: Vec<f64> = (1..n2).map(|ell| rank_probability_u(ell, n1, mimic_u) / j).collect();
    p.push(powu(1.0 - mimic_u, n2 - 1) / i_raw(own_u, n1, n2));
    p
}

/// Winning probabilities for each prize when exerting effort `e`.
pub fn win_probabilities(
    e: f64,
    a_i: f64,
    spec: &ContestSpec,
    table: &StrategyTable,
) -> Result<WinProbabilities> {
    check_ability(a_i)?;
    let (mimic, boundary) = table.inverse(e);
    let probs = rank_probabilities(spec.prior.cdf(mimic), spec.prior.cdf(a_i), spec);
    Ok(WinProbabilities { probs, boundary })
}

/// `Σ V_l P_l(e) - g(e)/a_i`.
pub fn expected_utility(e: f64, a_i: f64, spec: &ContestSpec, table: &StrategyTable) -> Result<f64> {
    let wp = win_probabilities(e, a_i, spec, table)?;
    let prize: f64 = wp
        .probs
        .iter()
        .enumerate()
        .map(|(k, p)| spec.prize(k as u32 + 1) * p)
        .sum();
    Ok(prize - spec.cost.g(e) / a_i)
}
