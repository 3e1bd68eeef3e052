use serde::Serialize;

use super::{
    best_response_search, ks_critical_1pct, ks_statistic, lemma3_identity_check,
    mc_posterior_empirical, mc_rank_frequencies, simulate_contest, McConfig,
};
use crate::beliefs::{marginal_posterior_cdf, PosteriorParams};
use crate::designer::{
    expected_admitted_total_effort_from, expected_highest_effort_from, expected_total_effort_from,
};
use crate::equilibrium::{win_probabilities, StrategyTable};
use crate::error::Result;
use crate::math_kernel::Quadrature;
use crate::model::{ContestSpec, CostFn, Prior};

/// One line of a [`VerifyReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckResult {
    fn below(name: String, statistic: f64, threshold: f64) -> Self {
        Self {
            name,
            statistic,
            threshold,
            passed: statistic < threshold,
        }
    }
}

/// Results of [`run_verify_suite`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: u64,
    pub passed: usize,
    pub total: usize,
    pub checks: Vec<CheckResult>,
}

/// Posterior lattice used by the KS checks: `(n1, n2, a_i)`.
pub const POSTERIOR_LATTICE: [(u32, u32, f64); 6] = [
    (5, 2, 0.5),
    (5, 3, 0.4),
    (10, 4, 0.6),
    (10, 5, 0.5),
    (20, 7, 0.8),
    (20, 10, 0.6),
];

const LEMMA3_FIXTURES: [(u32, u32, u32, f64); 4] =
    [(6, 3, 3, 0.7), (5, 5, 2, 0.4), (8, 2, 4, 0.9), (10, 4, 6, 0.8)];

fn wta(n1: u32, n2: u32) -> ContestSpec {
    ContestSpec::new(n1, n2, vec![1.0], Prior::uniform(), CostFn::linear())
        .expect("fixture contest is valid")
}

/// Runs every Monte Carlo and brute-force check at the given sample size.
pub fn run_verify_suite(mc: &McConfig) -> Result<VerifyReport> {
    mc.validate()?;
    let q = Quadrature::default();
    let mut checks = Vec::new();

    for (k, &(n1, n2, a)) in POSTERIOR_LATTICE.iter().enumerate() {
        let p = PosteriorParams::new(a, n1, n2, Prior::uniform())?;
        let sub = McConfig {
            seed: mc.seed.wrapping_add(k as u64),
            ..*mc
        };
        let s = mc_posterior_empirical(&p, &sub)?;
        let d = ks_statistic(&s, |x| marginal_posterior_cdf(x, &p).unwrap_or(f64::NAN));
        checks.push(CheckResult::below(
            format!("posterior_ks n1={n1} n2={n2} a={a}"),
            d,
            ks_critical_1pct(s.len()),
        ));
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        checks.push(CheckResult {
            name: format!("posterior_mean_above_prior n1={n1} n2={n2} a={a}"),
            statistic: mean,
            threshold: 0.5,
            passed: mean > 0.5,
        });
    }

    for (k, &(n, m, dim, x)) in LEMMA3_FIXTURES.iter().enumerate() {
        let sub = McConfig {
            seed: mc.seed.wrapping_add(100 + k as u64),
            ..*mc
        };
        let c = lemma3_identity_check(n, m, dim, x, &Prior::uniform(), &sub)?;
        checks.push(CheckResult::below(
            format!("integral_identity n={n} m={m} k={dim} x={x}"),
            c.z.abs(),
            4.0,
        ));
    }

    for (k, &(n1, n2)) in [(2u32, 2u32), (5, 2), (20, 20)].iter().enumerate() {
        let spec = wta(n1, n2);
        let table = StrategyTable::build(&spec, 512, &q)?;
        let sub = McConfig {
            seed: mc.seed.wrapping_add(200 + k as u64),
            ..*mc
        };
        let sim = simulate_contest(&spec, &table, &sub, 20)?;
        let hi = expected_highest_effort_from(&table, &q)?;
        let tot = expected_admitted_total_effort_from(&table, &q)?;
        let n2_tot = expected_total_effort_from(&table, &q)?;
        let zh = (sim.highest_effort.mean - hi) / sim.highest_effort.std_error;
        let zt = (sim.admitted_total_effort.mean - tot) / sim.admitted_total_effort.std_error;
        let zn = (sim.admitted_total_effort.mean - n2_tot) / sim.admitted_total_effort.std_error;
        checks.push(CheckResult::below(format!("sim_highest n1={n1} n2={n2}"), zh.abs(), 3.0));
        checks.push(CheckResult::below(format!("sim_admitted_total n1={n1} n2={n2}"), zt.abs(), 3.0));
        checks.push(CheckResult::below(format!("sim_vs_n2_integral_total n1={n1} n2={n2}"), zn.abs(), 3.0));
    }

    for (k, &(n1, n2, a)) in [(5u32, 2u32, 0.5), (6, 6, 0.6)].iter().enumerate() {
        let spec = wta(n1, n2);
        let table = StrategyTable::build(&spec, 256, &q)?;
        let sub = McConfig {
            seed: mc.seed.wrapping_add(300 + k as u64),
            ..*mc
        };
        let freq = mc_rank_frequencies(a, &spec, &table, &sub)?;
        let wp = win_probabilities(table.effort(a), a, &spec, &table)?;
        let worst = wp
            .probs
            .iter()
            .enumerate()
            .map(|(r, &p)| {
                let sd = (p * (1.0 - p) / freq.accepted as f64).sqrt().max(1e-12);
                (freq.frequency(r) - p).abs() / sd
            })
            .fold(0.0, f64::max);
        checks.push(CheckResult::below(
            format!("rank_frequencies n1={n1} n2={n2} a={a}"),
            worst,
            3.0,
        ));
    }

    for &(n1, n2) in &[(5u32, 2u32), (10, 6), (20, 20)] {
        let spec = wta(n1, n2);
        let table = StrategyTable::build(&spec, 256, &q)?;
        for &a in &[0.2, 0.5, 0.9] {
            let br = best_response_search(a, &spec, &table, 2000)?;
            let gap = (br.effort - table.effort(a)).abs() / br.step;
            checks.push(CheckResult {
                name: format!("best_response n1={n1} n2={n2} a={a}"),
                statistic: gap,
                threshold: 1.0,
                passed: gap <= 1.0,
            });
        }
    }

    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(VerifyReport {
        seed: mc.seed,
        samples: mc.samples,
        passed,
        total: checks.len(),
        checks,
    })
}
