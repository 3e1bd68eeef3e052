//! Binomial coefficients, the integer-parameter incomplete beta function and
//! the belief normalisers `I` and `J`.

use crate::error::{Error, Result};

/// `C(n, k)` as a float. Exact integer arithmetic up to `n = 64`, a product
/// of ratios in log space beyond that.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 64 {
        let mut acc: u128 = 1;
        for i in 1..=k as u128 {
            acc = acc * (n as u128 - k as u128 + i) / i;
        }
        acc as f64
    } else {
        let mut ln = 0.0;
        for i in 1..=k {
            ln += ((n - k + i) as f64).ln() - (i as f64).ln();
        }
        ln.exp()
    }
}

/// Complete beta `B(p, q)` for positive integers.
fn complete_beta(p: u32, q: u32) -> f64 {
    // (p-1)!(q-1)!/(p+q-1)! = 1 / ((p+q-1) C(p+q-2, p-1))
    1.0 / ((p + q - 1) as f64 * binomial(p + q - 2, p - 1))
}

/// Incomplete beta on the closed interval, no argument checks.
pub(crate) fn incomplete_beta_raw(x: f64, p: u32, q: u32) -> f64 {
    if p == 0 || q == 0 || x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return complete_beta(p, q);
    }
    // For integer parameters the regularised incomplete beta is a binomial
    // tail: I_x(p, q) = P(Bin(p+q-1, x) >= p). All terms are positive.
    let m = p + q - 1;
    let y = 1.0 - x;
    let mut tail = 0.0;
    for j in p..=m {
        tail += binomial(m, j) * x.powi(j as i32) * y.powi((m - j) as i32);
    }
    complete_beta(p, q) * tail
}

/// `B(x, p, q) = ∫_0^x t^(p-1) (1-t)^(q-1) dt` for integer `p, q`, with
/// `B = 0` whenever `p * q = 0`.
pub fn incomplete_beta(x: f64, p: u32, q: u32) -> Result<f64> {
    check_open_unit(x, "incomplete_beta")?;
    Ok(incomplete_beta_raw(x, p, q))
}

fn check_open_unit(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{what}: argument {x} outside (0, 1)")))
    }
}

pub(crate) fn check_sizes(n1: u32, n2: u32) -> Result<()> {
    if n2 < 2 {
        return Err(Error::domain(format!("n2 = {n2} < 2")));
    }
    if n2 > n1 {
        return Err(Error::domain(format!("n2 = {n2} > n1 = {n1}")));
    }
    Ok(())
}

/// `0^0 = 1` power used for the boundary factors.
#[inline]
pub(crate) fn powu(x: f64, k: u32) -> f64 {
    if k == 0 {
        1.0
    } else {
        x.powi(k as i32)
    }
}

/// `I(x, n1, n2)` on the closed interval, no checks.
pub(crate) fn i_raw(x: f64, n1: u32, n2: u32) -> f64 {
    powu(1.0 - x, n2 - 1) + (n2 - 1) as f64 * incomplete_beta_raw(x, n1 - n2 + 1, n2 - 1)
}

/// `J(x, n1, n2)` on the closed interval, no checks.
pub(crate) fn j_raw(x: f64, n1: u32, n2: u32) -> f64 {
    binomial(n1 - 1, n2 - 1) * i_raw(x, n1, n2)
}

/// Derivative of `I(x, n1, n2)` in `x`.
pub(crate) fn i_prime_raw(x: f64, n1: u32, n2: u32) -> f64 {
    (n2 - 1) as f64 * powu(1.0 - x, n2 - 2) * (powu(x, n1 - n2) - 1.0)
}

/// The belief normaliser `I(x, n1, n2) = (1-x)^(n2-1) + (n2-1) B(x, n1-n2+1, n2-1)`.
pub fn i_fn(x: f64, n1: u32, n2: u32) -> Result<f64> {
    check_open_unit(x, "I")?;
    check_sizes(n1, n2)?;
    Ok(i_raw(x, n1, n2))
}

/// `J(x, n1, n2) = C(n1-1, n2-1) I(x, n1, n2)`; always at least one.
pub fn j_fn(x: f64, n1: u32, n2: u32) -> Result<f64> {
    check_open_unit(x, "J")?;
    check_sizes(n1, n2)?;
    Ok(j_raw(x, n1, n2))
}

/// Derivative of `J(x, n1, n2)` in `x`.
pub fn j_prime(x: f64, n1: u32, n2: u32) -> Result<f64> {
    check_open_unit(x, "J'")?;
    check_sizes(n1, n2)?;
    Ok(binomial(n1 - 1, n2 - 1) * i_prime_raw(x, n1, n2))
}

/// Sign-determining factor of `J(x, n1, n2-1) - J(x, n1, n2)`:
/// `r(x) = (n2-1)(x + ... + x^(n1-n2) + 2) - n1`.
pub fn j_step_sign_poly(x: f64, n1: u32, n2: u32) -> f64 {
    let mut s = 2.0;
    let mut p = 1.0;
    for _ in 1..=(n1 - n2) {
        p *= x;
        s += p;
    }
    (n2 - 1) as f64 * s - n1 as f64
}

/// Smallest `x_hat` in `[0, 1]` such that `J(x, n1, ·)` is decreasing in
/// `n2` over `[2, n1]` for every `x >= x_hat`.
///
/// It is the largest root of the step polynomial over `n2 = 3..=n1`. The
/// polynomial is increasing in `x` and positive at `x = 1`, so each root is
/// found by bisection.
pub fn j_monotone_threshold(n1: u32) -> f64 {
    let mut hat: f64 = 0.0;
    for n2 in 3..=n1 {
        if j_step_sign_poly(0.0, n1, n2) >= 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if j_step_sign_poly(mid, n1, n2) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        hat = hat.max(hi);
    }
    hat
}
