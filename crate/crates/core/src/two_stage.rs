//! Candidate symmetric monotone strategies for the two-stage contest (an
//! open first stage decides admission, the top `n2` then compete for
//! prizes) and the first-stage deviation gain that rules them out.

use rayon::prelude::*;
use serde::Serialize;

use crate::equilibrium::{restricted_effort, restricted_inner, restricted_weight};
use crate::error::{Error, Result};
use crate::math_kernel::{
    binomial, i_prime_raw, i_raw, j_raw, order_stat_cdf_u, order_stat_density_u, powu,
    rank_probability_u, Quadrature,
};
use crate::model::{ContestSpec, CostFn, Prior};

/// Richardson steps for the deviation slope.
pub const SLOPE_STEPS: (f64, f64) = (1e-3, 1e-4);
/// Required ratio of slope magnitude to noise floor.
pub const SLOPE_SIGNAL_RATIO: f64 = 5.0;

const SMOOTH_PANELS: usize = 256;
const GOLDEN_TOL: f64 = 1e-11;

/// Two-stage contest. The last prize is always zero.
#[derive(Clone, Debug)]
pub struct TwoStageSpec {
    pub contest: ContestSpec,
    /// First-stage cost; the second-stage cost is used when absent.
    pub first_stage_cost: Option<CostFn>,
}

impl TwoStageSpec {
    pub fn new(n1: u32, n2: u32, prizes: Vec<f64>, prior: Prior, cost: CostFn) -> Result<Self> {
        let contest = ContestSpec::new(n1, n2, prizes, prior, cost)?;
        if contest.prize(n2) != 0.0 {
            return Err(Error::InvalidSpec(format!(
                "last prize V_{n2} must be 0 in the two-stage contest"
            )));
        }
        Ok(Self {
            contest,
            first_stage_cost: None,
        })
    }

    pub fn with_first_stage_cost(mut self, cost: CostFn) -> Self {
        self.first_stage_cost = Some(cost);
        self
    }

    pub fn first_cost(&self) -> &CostFn {
        self.first_stage_cost.as_ref().unwrap_or(&self.contest.cost)
    }
}

fn check_open(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} {x} outside (0, 1)")))
    }
}

/// Composite Simpson rule with a fixed panel count. Smooth in its limits,
/// which keeps finite differences of the results clean.
fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return 0.0;
    }
    let n = SMOOTH_PANELS;
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + k as f64 * h);
    }
    s * h / 3.0
}

/// Prize part of the second-stage payoff when ranked as ability `u`, before
/// dividing by the posterior normaliser.
fn prize_mass(u: f64, spec: &ContestSpec) -> f64 {
    (1..spec.n2)
        .map(|ell| spec.prize(ell) * rank_probability_u(ell, spec.n1, u))
        .sum()
}

/// Second-stage effort of the candidate strategy.
pub fn candidate_b2(a: f64, ts: &TwoStageSpec, q: &Quadrature) -> Result<f64> {
    restricted_effort(a, &ts.contest, q)
}

/// Expected second-stage utility of an admitted player with ability `a`
/// who plays the candidate strategy.
pub fn continuation_value(a: f64, ts: &TwoStageSpec, q: &Quadrature) -> Result<f64> {
    check_open(a, "ability")?;
    let spec = &ts.contest;
    let (n1, n2) = (spec.n1, spec.n2);
    let u = spec.prior.cdf(a);
    let b2 = candidate_b2(a, ts, q)?;
    Ok(prize_mass(u, spec) / j_raw(u, n1, n2)
        + spec.prize(n2) * powu(1.0 - u, n2 - 1) / i_raw(u, n1, n2)
        - spec.cost.g(b2) / a)
}

/// `∫_0^a x dF_(n2, n1-1)(x)`: the ability-weighted probability of being
/// admitted.
pub fn admission_moment(a: f64, ts: &TwoStageSpec, q: &Quadrature) -> Result<f64> {
    check_open(a, "ability")?;
    let spec = &ts.contest;
    q.integrate(
        |t| spec.prior.inverse_cdf(t) * order_stat_density_u(spec.n2, spec.n1 - 1, t),
        0.0,
        spec.prior.cdf(a),
    )
}

/// Same moment written as the sum over admitted ranks of
/// `∫ x (dF_(l) - dF_(l-1))`.
pub fn admission_moment_by_rank(a: f64, ts: &TwoStageSpec, q: &Quadrature) -> Result<f64> {
    check_open(a, "ability")?;
    let spec = &ts.contest;
    let n = spec.n1 - 1;
    let mut total = 0.0;
    for ell in 1..=spec.n2 {
        total += q.integrate(
            |t| {
                let lower = if ell > 1 { order_stat_density_u(ell - 1, n, t) } else { 0.0 };
                spec.prior.inverse_cdf(t) * (order_stat_density_u(ell, n, t) - lower)
            },
            0.0,
            spec.prior.cdf(a),
        )?;
    }
    Ok(total)
}

/// First-stage effort of the candidate strategy.
pub fn candidate_b1(a: f64, ts: &TwoStageSpec, q: &Quadrature) -> Result<f64> {
    let u2 = continuation_value(a, ts, q)?;
    if u2 < -q.abs_tol {
        return Err(Error::NegativeArgument {
            ability: a,
            value: u2,
        });
    }
    let m = admission_moment(a, ts, q)?;
    Ok(ts.first_cost().g_inverse(u2.max(0.0) * m))
}

/// Probability of being admitted when bidding as ability `a` in the first
/// stage against opponents who follow the candidate strategy.
pub fn admission_probability(a: f64, ts: &TwoStageSpec) -> f64 {
    let spec = &ts.contest;
    order_stat_cdf_u(spec.n2, spec.n1 - 1, spec.prior.cdf(a))
}

/// Total expected utility on the candidate path.
pub fn on_path_utility(a: f64, ts: &TwoStageSpec, q: &Quadrature) -> Result<f64> {
    let b1 = candidate_b1(a, ts, q)?;
    let u2 = continuation_value(a, ts, q)?;
    Ok(admission_probability(a, ts) * u2 - ts.first_cost().g(b1) / a)
}

/// Solution of the deviated second-stage problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeviatedResponse {
    /// Maximising second-stage effort.
    pub effort: f64,
    /// Ability whose candidate effort equals `effort`.
    pub mimic: f64,
    /// Attained second-stage utility.
    pub utility: f64,
}

/// Cached quantities for a player of true ability `a`.
#[derive(Clone, Debug)]
pub struct DeviationProblem<'a> {
    ts: &'a TwoStageSpec,
    pub a: f64,
    u_a: f64,
    inner_a: f64,
    moment_a: f64,
    /// Candidate continuation value at the true ability.
    pub continuation: f64,
}

impl<'a> DeviationProblem<'a> {
    pub fn new(a: f64, ts: &'a TwoStageSpec, q: &Quadrature) -> Result<Self> {
        check_open(a, "ability")?;
        Ok(Self {
            ts,
            a,
            u_a: ts.contest.prior.cdf(a),
            inner_a: restricted_inner(a, &ts.contest, q)?,
            moment_a: admission_moment(a, ts, q)?,
            continuation: continuation_value(a, ts, q)?,
        })
    }

    /// `g(b2)` at the ability whose prior quantile is `t`.
    fn inner_at(&self, t: f64) -> f64 {
        let spec = &self.ts.contest;
        self.inner_a
            + simpson(
                |s| spec.prior.inverse_cdf(s) * restricted_weight(s, spec),
                self.u_a,
                t,
            )
    }

    fn moment_at(&self, t: f64) -> f64 {
        let spec = &self.ts.contest;
        self.moment_a
            + simpson(
                |s| spec.prior.inverse_cdf(s) * order_stat_density_u(spec.n2, spec.n1 - 1, s),
                self.u_a,
                t,
            )
    }

    fn objective(&self, t: f64, j_tilde: f64) -> f64 {
        prize_mass(t, &self.ts.contest) / j_tilde - self.inner_at(t).max(0.0) / self.a
    }

    /// Best second-stage effort after a first-stage bid as ability `a_tilde`,
    /// by golden-section search over the mimicked ability.
    pub fn best_response(&self, a_tilde: f64) -> Result<DeviatedResponse> {
        check_open(a_tilde, "deviation ability")?;
        let spec = &self.ts.contest;
        if spec.all_prizes_zero() {
            return Ok(DeviatedResponse {
                effort: 0.0,
                mimic: 0.0,
                utility: 0.0,
            });
        }
        let j_tilde = j_raw(spec.prior.cdf(a_tilde), spec.n1, spec.n2);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let f = |eta: f64| self.objective(spec.prior.cdf(eta), j_tilde);
        let (mut f1, mut f2) = (f(x1), f(x2));
        let mut iters = 0;
        while hi - lo > GOLDEN_TOL {
            iters += 1;
            if iters > 200 {
                return Err(Error::Solver(format!(
                    "golden section stalled on [{lo}, {hi}]"
                )));
            }
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = f(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = f(x1);
            }
        }
        let eta = 0.5 * (lo + hi);
        let t = spec.prior.cdf(eta);
        Ok(DeviatedResponse {
            effort: spec.cost.g_inverse(self.inner_at(t).max(0.0)),
            mimic: eta,
            utility: self.objective(t, j_tilde),
        })
    }

    /// Total utility of bidding as `a_tilde` in the first stage and then
    /// best responding, with the continuation value inside the first-stage
    /// bid held at the true ability.
    pub fn gain(&self, a_tilde: f64) -> Result<f64> {
        let br = self.best_response(a_tilde)?;
        let t = self.ts.contest.prior.cdf(a_tilde);
        Ok(admission_probability(a_tilde, self.ts) * br.utility
            - self.continuation * self.moment_at(t) / self.a)
    }
}

/// See [`DeviationProblem::best_response`].
pub fn deviated_second_stage_best_response(
    a: f64,
    a_tilde: f64,
    ts: &TwoStageSpec,
    q: &Quadrature,
) -> Result<DeviatedResponse> {
    DeviationProblem::new(a, ts, q)?.best_response(a_tilde)
}

/// See [`DeviationProblem::gain`].
pub fn deviation_gain(a: f64, a_tilde: f64, ts: &TwoStageSpec, q: &Quadrature) -> Result<f64> {
    DeviationProblem::new(a, ts, q)?.gain(a_tilde)
}

/// Mimicked ability solving `eta / J(eta) = a / J(a_tilde)`, found by
/// bisection. The deviated best response must mimic this ability.
pub fn eta_identity_root(a: f64, a_tilde: f64, ts: &TwoStageSpec) -> Result<f64> {
    check_open(a, "ability")?;
    check_open(a_tilde, "deviation ability")?;
    let spec = &ts.contest;
    let (n1, n2) = (spec.n1, spec.n2);
    let target = a / j_raw(spec.prior.cdf(a_tilde), n1, n2);
    let h = |x: f64| x / j_raw(spec.prior.cdf(x), n1, n2) - target;
    let (mut lo, mut hi) = (0.0, 1.0);
    if h(hi) <= 0.0 {
        return Ok(1.0);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Derivative of the deviation gain at `a_tilde = a` from the envelope
/// argument: `-(Σ V_l J'(a) / J(a)^2 F̂_l(a)) Σ_{l<=n2} F̂_l(a)`.
pub fn closed_form_slope(a: f64, ts: &TwoStageSpec) -> Result<f64> {
    check_open(a, "ability")?;
    let spec = &ts.contest;
    let (n1, n2) = (spec.n1, spec.n2);
    let u = spec.prior.cdf(a);
    let j = j_raw(u, n1, n2);
    let j_prime = binomial(n1 - 1, n2 - 1) * i_prime_raw(u, n1, n2) * spec.prior.pdf(a);
    Ok(-(prize_mass(u, spec) * j_prime / (j * j)) * admission_probability(a, ts))
}

/// Richardson-extrapolated slope of the deviation gain at `a_tilde = a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeEstimate {
    pub a: f64,
    pub slope: f64,
    pub coarse: f64,
    pub fine: f64,
    pub noise_floor: f64,
    pub closed_form: f64,
    /// `|slope|` exceeds the noise floor by the required ratio.
    pub nonzero: bool,
}

/// Central differences of the deviation gain with steps
/// [`SLOPE_STEPS`], combined by Richardson extrapolation.
pub fn deviation_slope(a: f64, ts: &TwoStageSpec, q: &Quadrature) -> Result<SlopeEstimate> {
    let (h1, h2) = SLOPE_STEPS;
    if a - h1 <= 0.0 || a + h1 >= 1.0 {
        return Err(Error::domain(format!("ability {a} too close to the boundary")));
    }
    let p = DeviationProblem::new(a, ts, q)?;
    let d = |h: f64| -> Result<f64> { Ok((p.gain(a + h)? - p.gain(a - h)?) / (2.0 * h)) };
    let coarse = d(h1)?;
    let fine = d(h2)?;
    let ratio2 = (h1 / h2).powi(2);
    let slope = (ratio2 * fine - coarse) / (ratio2 - 1.0);
    // Rounding in each evaluation, amplified by the step.
    let scale = (admission_probability(a, ts) * p.continuation)
        .abs()
        .max((p.continuation * p.moment_a / a).abs());
    let rounding = 2.0 * f64::EPSILON * SMOOTH_PANELS as f64 * scale / h2;
    // The base-point integrals enter every evaluation with the same error
    // and tilt the curve by at most 2 tol P'(a) / a.
    let spec = &ts.contest;
    let tol = q.abs_tol.max(q.rel_tol * p.inner_a.abs());
    let admission_density =
        spec.prior.pdf(a) * order_stat_density_u(spec.n2, spec.n1 - 1, p.u_a);
    let base_bias = 2.0 * tol * admission_density / a;
    let noise_floor = rounding + base_bias + (slope - fine).abs();
    Ok(SlopeEstimate {
        a,
        slope,
        coarse,
        fine,
        noise_floor,
        closed_form: closed_form_slope(a, ts)?,
        nonzero: slope.abs() > SLOPE_SIGNAL_RATIO * noise_floor,
    })
}

/// [`deviation_slope`] at several abilities, in parallel.
pub fn slope_report(abilities: &[f64], ts: &TwoStageSpec, q: &Quadrature) -> Result<Vec<SlopeEstimate>> {
    abilities.par_iter().map(|&a| deviation_slope(a, ts, q)).collect()
}

/// `(a_tilde, L(a_tilde))` on `points` equally spaced abilities within
/// `half_width` of `a`.
pub fn deviation_curve(
    a: f64,
    half_width: f64,
    points: usize,
    ts: &TwoStageSpec,
    q: &Quadrature,
) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(Error::domain("need at least two curve points"));
    }
    let lo = (a - half_width).max(1e-6);
    let hi = (a + half_width).min(1.0 - 1e-6);
    let p = DeviationProblem::new(a, ts, q)?;
    (0..points)
        .into_par_iter()
        .map(|k| {
            let x = lo + (hi - lo) * k as f64 / (points - 1) as f64;
            Ok((x, p.gain(x)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wta(n1: u32, n2: u32) -> TwoStageSpec {
        TwoStageSpec::new(n1, n2, vec![1.0], Prior::uniform(), CostFn::linear()).unwrap()
    }

    #[test]
    fn last_prize_must_vanish() {
        let e = TwoStageSpec::new(3, 2, vec![1.0, 0.5], Prior::uniform(), CostFn::linear());
        assert!(matches!(e, Err(Error::InvalidSpec(_))));
        assert!(TwoStageSpec::new(3, 2, vec![1.0, 0.0], Prior::uniform(), CostFn::linear()).is_ok());
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x| x * x * x - x, 0.2, 0.9);
        let exact = (0.9f64.powi(4) - 0.2f64.powi(4)) / 4.0 - (0.81 - 0.04) / 2.0;
        assert!((v - exact).abs() < 1e-15);
    }

    #[test]
    fn moment_telescopes() {
        let q = Quadrature::default();
        let ts = wta(8, 4);
        for a in [0.2, 0.5, 0.9] {
            let x = admission_moment(a, &ts, &q).unwrap();
            let y = admission_moment_by_rank(a, &ts, &q).unwrap();
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_slope_value() {
        // n1 = 4, n2 = 2 at a = 1/2: J = 13/8, J' = -9/4, F̂_1 = 1/8, P = 1/2.
        let s = closed_form_slope(0.5, &wta(4, 2)).unwrap();
        let expected = 2.25 * 0.125 * 0.5 / (1.625 * 1.625);
        assert!((s - expected).abs() < 1e-14);
    }

    #[test]
    fn deviation_problem_on_path() {
        let q = Quadrature::default();
        let ts = wta(6, 3);
        let p = DeviationProblem::new(0.4, &ts, &q).unwrap();
        let br = p.best_response(0.4).unwrap();
        assert!((br.mimic - 0.4).abs() < 1e-6);
        assert!((br.utility - p.continuation).abs() < 1e-10);
    }
}
