use rand::Rng;
use serde::Serialize;

use super::McConfig;
use crate::error::{Error, Result};
use crate::math_kernel::{binomial, powu};
use crate::model::Prior;

/// Largest dimension accepted by [`lemma3_identity_check`].
pub const MAX_DIM: u32 = 6;

/// Monte Carlo estimate of a `k`-fold integral against its closed form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub estimate: f64,
    pub std_error: f64,
    pub closed_form: f64,
    pub z: f64,
}

/// `(n-m)! k! / (n-m+k)! * F(x)^(n-m+k)`.
pub fn lemma3_closed_form(n: u32, m: u32, k: u32, x: f64, prior: &Prior) -> f64 {
    let r = n - m;
    powu(prior.cdf(x), r + k) / binomial(r + k, k)
}

/// Estimates `∫_(0,x)^k F(min t)^(n-m) Π f(t_i) dt` by sampling `k` prior
/// draws and averaging `1{all t_i < x} F(min t)^(n-m)`.
pub fn lemma3_identity_check(
    n: u32,
    m: u32,
    k: u32,
    x: f64,
    prior: &Prior,
    mc: &McConfig,
) -> Result<IdentityCheck> {
    if k == 0 || k > MAX_DIM {
        return Err(Error::domain(format!("dimension {k} outside 1..={MAX_DIM}")));
    }
    if m > n {
        return Err(Error::domain(format!("m = {m} > n = {n}")));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("x = {x} outside (0, 1)")));
    }
    let r = n - m;
    let parts = mc.run_batches(|rng, size| {
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..size {
            let mut lowest = f64::INFINITY;
            let mut inside = true;
            for _ in 0..k {
                let t = prior.inverse_cdf(rng.gen::<f64>());
                inside &= t < x;
                lowest = lowest.min(t);
            }
            if inside {
                let v = powu(prior.cdf(lowest), r);
                s += v;
                s2 += v * v;
            }
        }
        Ok((s, s2))
    })?;
    let (s, s2) = parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let nf = mc.samples as f64;
    let mean = s / nf;
    let var = (s2 / nf - mean * mean).max(0.0);
    let se = (var / nf).sqrt();
    let closed = lemma3_closed_form(n, m, k, x, prior);
    Ok(IdentityCheck {
        estimate: mean,
        std_error: se,
        closed_form: closed,
        z: if se > 0.0 { (mean - closed) / se } else { 0.0 },
    })
}
