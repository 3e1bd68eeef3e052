use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{stream, McConfig};
use crate::beliefs::PosteriorParams;
use crate::error::{Error, Result};
use crate::model::Prior;

const MIN_ACCEPTANCE: f64 = 1e-6;
const PROBE_TRIALS: u64 = 1 << 21;
const PROBE_TARGET: u64 = 4096;

/// Draws `n` opponents into `buf`; returns whether the player with ability
/// `a_i` is among the top `n2` of everyone.
fn draw_field(rng: &mut ChaCha8Rng, prior: &Prior, a_i: f64, n2: u32, buf: &mut [f64]) -> bool {
    let mut above = 0u32;
    for x in buf.iter_mut() {
        *x = prior.inverse_cdf(rng.gen::<f64>());
        if *x > a_i {
            above += 1;
        }
    }
    above < n2
}

/// Fraction of fields in which the player is admitted, estimated on a probe
/// stream. Stops early once enough acceptances are seen.
pub fn probe_acceptance_rate(p: &PosteriorParams, seed: u64) -> (f64, u64) {
    let mut rng = stream(seed, u64::MAX);
    let mut buf = vec![0.0; (p.n1 - 1) as usize];
    let mut hits = 0u64;
    let mut trials = 0u64;
    while trials < PROBE_TRIALS && hits < PROBE_TARGET {
        trials += 1;
        if draw_field(&mut rng, &p.prior, p.a_i, p.n2, &mut buf) {
            hits += 1;
        }
    }
    (hits as f64 / trials as f64, trials)
}

/// Rejection sampler for one admitted opponent's ability.
///
/// Fields of `n1 - 1` opponents are drawn from the prior and kept when the
/// player is admitted. Each kept field contributes one of the other `n2 - 1`
/// admitted players, chosen uniformly, so the returned sample is IID.
/// Returns `mc.samples` sorted abilities.
pub fn mc_posterior_empirical(p: &PosteriorParams, mc: &McConfig) -> Result<Vec<f64>> {
    mc.validate()?;
    if p.n2 == p.n1 {
        // Everyone is admitted; the posterior is the prior.
        let mut v: Vec<f64> = mc
            .run_batches(|rng, n| Ok((0..n).map(|_| p.prior.inverse_cdf(rng.gen::<f64>())).collect::<Vec<_>>()))?
            .concat();
        v.sort_by(f64::total_cmp);
        return Ok(v);
    }
    let (rate, trials) = probe_acceptance_rate(p, mc.seed);
    if rate < MIN_ACCEPTANCE {
        return Err(Error::AcceptanceStarvation { rate, trials });
    }
    let others = (p.n2 - 1) as usize;
    let batches = mc.run_batches(|rng, n| {
        let cap = (10.0 * n as f64 / rate) as u64 + 100_000;
        let mut buf = vec![0.0; (p.n1 - 1) as usize];
        let mut out = Vec::with_capacity(n as usize);
        let mut tries = 0u64;
        while (out.len() as u64) < n {
            tries += 1;
            if tries > cap {
                return Err(Error::AcceptanceStarvation {
                    rate: out.len() as f64 / tries as f64,
                    trials: tries,
                });
            }
            if !draw_field(rng, &p.prior, p.a_i, p.n2, &mut buf) {
                continue;
            }
            let pick = rng.gen_range(0..others);
            // The other admitted players are the top n2 - 1 opponents.
            buf.select_nth_unstable_by(pick, |a, b| b.total_cmp(a));
            out.push(buf[pick]);
        }
        Ok(out)
    })?;
    let mut v = batches.concat();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Kolmogorov-Smirnov distance between a sorted sample and a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let c = cdf(x);
            (c - k as f64 / n).abs().max(((k + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic one-sample KS critical value at the 1% level.
pub fn ks_critical_1pct(n: usize) -> f64 {
    (200.0_f64.ln() / 2.0).sqrt() / (n as f64).sqrt()
}
