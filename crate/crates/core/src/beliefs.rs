//! Posterior beliefs of an admitted player about the other admitted players.
//!
//! Everything here conditions on the player having been admitted, i.e. on her
//! ability ranking among the top `n2` of all `n1` entrants.

use crate::error::{Error, Result};
use crate::math_kernel::{check_sizes, i_raw, incomplete_beta_raw, powu, Quadrature};
use crate::model::Prior;

/// Most opponents accepted by [`joint_posterior_density`].
pub const MAX_JOINT_DIM: usize = 12;

/// Own ability and contest size for a posterior query.
#[derive(Clone, Debug)]
pub struct PosteriorParams {
    pub a_i: f64,
    pub n1: u32,
    pub n2: u32,
    pub prior: Prior,
}

impl PosteriorParams {
    pub fn new(a_i: f64, n1: u32, n2: u32, prior: Prior) -> Result<Self> {
        check_sizes(n1, n2)?;
        check_unit(a_i, "own ability")?;
        Ok(Self { a_i, n1, n2, prior })
    }

    fn u_i(&self) -> f64 {
        self.prior.cdf(self.a_i)
    }

    fn excluded(&self) -> u32 {
        self.n1 - self.n2
    }

    fn normaliser(&self) -> f64 {
        i_raw(self.u_i(), self.n1, self.n2)
    }
}

fn check_unit(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} {x} outside (0, 1)")))
    }
}

/// Joint posterior density of the other `n2 - 1` admitted abilities.
pub fn joint_posterior_density(others: &[f64], p: &PosteriorParams) -> Result<f64> {
    if others.len() != (p.n2 - 1) as usize {
        return Err(Error::domain(format!(
            "expected {} opponent abilities, got {}",
            p.n2 - 1,
            others.len()
        )));
    }
    if others.len() > MAX_JOINT_DIM {
        return Err(Error::domain(format!(
            "joint density limited to {MAX_JOINT_DIM} opponents"
        )));
    }
    let mut prod = 1.0;
    let mut lowest = f64::INFINITY;
    for &a in others {
        check_unit(a, "opponent ability")?;
        prod *= p.prior.pdf(a);
        lowest = lowest.min(a);
    }
    let weight = if p.a_i <= lowest {
        1.0
    } else {
        powu(p.prior.cdf(lowest), p.excluded())
    };
    Ok(weight * prod / p.normaliser())
}

/// Marginal posterior density of one opponent's ability. At `a_j = a_i` the
/// right limit is returned.
pub fn marginal_posterior_pdf(a_j: f64, p: &PosteriorParams) -> Result<f64> {
    check_unit(a_j, "opponent ability")?;
    let m = p.excluded();
    let n2 = p.n2;
    let u = if a_j < p.a_i { p.prior.cdf(a_j) } else { p.u_i() };
    let mut shape = (n2 - 2) as f64 * incomplete_beta_raw(u, m + 1, n2 - 2);
    shape += if a_j < p.a_i {
        powu(u, m) * powu(1.0 - u, n2 - 2)
    } else {
        powu(1.0 - u, n2 - 2)
    };
    Ok(p.prior.pdf(a_j) * shape / p.normaliser())
}

/// Marginal posterior CDF of one opponent's ability.
pub fn marginal_posterior_cdf(a_j: f64, p: &PosteriorParams) -> Result<f64> {
    check_unit(a_j, "opponent ability")?;
    let u_j = p.prior.cdf(a_j);
    let m = p.excluded();
    if m == 0 {
        return Ok(u_j);
    }
    let n2 = p.n2;
    let norm = p.normaliser();
    let mf = m as f64;
    let v = if a_j <= p.a_i {
        mf * (u_j * incomplete_beta_raw(u_j, m, n2 - 1) - incomplete_beta_raw(u_j, m + 1, n2 - 1))
            / norm
    } else {
        let u_i = p.u_i();
        mf * (u_j * incomplete_beta_raw(u_i, m, n2 - 1) - incomplete_beta_raw(u_i, m + 1, n2 - 1))
            / norm
            + (u_j - u_i) * powu(1.0 - u_i, n2 - 2) * (1.0 - powu(u_i, m)) / norm
    };
    Ok(v.clamp(0.0, 1.0))
}

/// Jump of the marginal posterior density at `a_j = a_i` (right limit minus
/// left limit). Zero when everyone is admitted.
pub fn belief_jump(p: &PosteriorParams) -> f64 {
    let u = p.u_i();
    let m = p.excluded();
    p.prior.pdf(p.a_i) * powu(1.0 - u, p.n2 - 2) * (1.0 - powu(u, m)) / p.normaliser()
}

/// Posterior mean of one opponent's ability, by quadrature split at `a_i`.
pub fn expected_opponent_ability(p: &PosteriorParams, q: &Quadrature) -> Result<f64> {
    let pdf = |x: f64| x * marginal_posterior_pdf(x, p).unwrap_or(0.0);
    Ok(q.integrate(pdf, 0.0, p.a_i)? + q.integrate(pdf, p.a_i, 1.0)?)
}

/// Closed-form posterior mean under the uniform prior: `1 - D(a_i)/2` with
/// `D = (n2 B(a_i, n1-n2+1, n2) + (1-a_i)^n2) / I(a_i)`.
pub fn expected_opponent_ability_uniform(a_i: f64, n1: u32, n2: u32) -> Result<f64> {
    check_sizes(n1, n2)?;
    check_unit(a_i, "own ability")?;
    let d = (n2 as f64 * incomplete_beta_raw(a_i, n1 - n2 + 1, n2) + powu(1.0 - a_i, n2))
        / i_raw(a_i, n1, n2);
    Ok(1.0 - 0.5 * d)
}

/// `F(a_j)` minus the posterior CDF; nonnegative when the posterior
/// stochastically dominates the prior.
pub fn dominance_margin(a_j: f64, p: &PosteriorParams) -> Result<f64> {
    Ok(p.prior.cdf(a_j) - marginal_posterior_cdf(a_j, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uni(a: f64, n1: u32, n2: u32) -> PosteriorParams {
        PosteriorParams::new(a, n1, n2, Prior::uniform()).unwrap()
    }

    #[test]
    fn joint_density_examples() {
        let p = uni(0.5, 5, 2);
        let hi = joint_posterior_density(&[0.7], &p).unwrap();
        assert!((hi - 1.0 / 0.515625).abs() < 1e-12);
        let lo = joint_posterior_density(&[0.3], &p).unwrap();
        assert!((lo - 0.027 / 0.515625).abs() < 1e-12);
        let same = PosteriorParams::new(0.4, 4, 4, Prior::power(2.0).unwrap()).unwrap();
        let xs = [0.2, 0.6, 0.9];
        let prior_prod: f64 = xs.iter().map(|&x| 2.0 * x).product();
        assert!((joint_posterior_density(&xs, &same).unwrap() - prior_prod).abs() < 1e-12);
        assert!(joint_posterior_density(&[0.1, 0.2], &p).is_err());
    }

    #[test]
    fn marginal_reduces_to_two_player_branches() {
        let p = uni(0.5, 5, 2);
        for i in 1..100 {
            let x = i as f64 / 100.0;
            let want = if x < 0.5 { x.powi(3) } else { 1.0 } / 0.515625;
            assert!((marginal_posterior_pdf(x, &p).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn marginal_at_top_is_max_of_others() {
        let n1 = 6;
        let p = uni(1.0 - 1e-9, n1, 2);
        for &x in &[0.2f64, 0.5, 0.8] {
            let want = (n1 - 1) as f64 * x.powi(n1 as i32 - 2);
            assert!((marginal_posterior_pdf(x, &p).unwrap() - want).abs() < 1e-6);
        }
    }

    #[test]
    fn cdf_is_integral_of_pdf() {
        let q = Quadrature::new(1e-12, 1e-10).unwrap();
        for &(a, n1, n2) in &[(0.5, 5, 2), (0.3, 10, 4), (0.8, 20, 7)] {
            let p = uni(a, n1, n2);
            for &x in &[0.2, 0.4, 0.6, 0.95] {
                let pdf = |t: f64| marginal_posterior_pdf(t, &p).unwrap();
                let direct = if x <= a {
                    q.integrate(pdf, 0.0, x).unwrap()
                } else {
                    q.integrate(pdf, 0.0, a).unwrap() + q.integrate(pdf, a, x).unwrap()
                };
                let c = marginal_posterior_cdf(x, &p).unwrap();
                assert!((c - direct).abs() < 1e-7, "{a} {n1} {n2} {x}: {c} vs {direct}");
            }
            assert!((marginal_posterior_cdf(1.0 - 1e-12, &p).unwrap() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn jump_examples() {
        assert!((belief_jump(&uni(0.5, 5, 2)) - 0.875 / 0.515625).abs() < 1e-12);
        assert_eq!(belief_jump(&uni(0.5, 5, 5)), 0.0);
        assert!(belief_jump(&uni(1.0 - 1e-9, 5, 2)) < 1e-6);
        let p = uni(0.5, 5, 2);
        let right = marginal_posterior_pdf(0.5, &p).unwrap();
        let left = marginal_posterior_pdf(0.5 - 1e-12, &p).unwrap();
        assert!((right - left - belief_jump(&p)).abs() < 1e-9);
    }

    #[test]
    fn posterior_mean() {
        let q = Quadrature::default();
        for &a in &[0.1, 0.5, 0.9] {
            let v = expected_opponent_ability(&uni(a, 6, 6), &q).unwrap();
            assert!((v - 0.5).abs() < 1e-9);
            let quad = expected_opponent_ability(&uni(a, 5, 2), &q).unwrap();
            let closed = expected_opponent_ability_uniform(a, 5, 2).unwrap();
            assert!((quad - closed).abs() < 1e-7);
            assert!(quad > 0.5);
        }
    }

    #[test]
    fn margin_examples() {
        let p = uni(0.5, 5, 2);
        let m = dominance_margin(0.5, &p).unwrap();
        assert!(m > 0.0);
        assert!((m - (0.5 - marginal_posterior_cdf(0.5, &p).unwrap())).abs() < 1e-15);
        assert!(dominance_margin(1e-9, &p).unwrap().abs() < 1e-8);
        assert!(dominance_margin(1.0 - 1e-9, &p).unwrap().abs() < 1e-8);
    }
}
