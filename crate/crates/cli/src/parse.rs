use allpay_core::{CostFn, Prior, PrizeTemplate};

fn number(s: &str, what: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("{what}: `{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{what}: `{s}` is not finite"))
    }
}

/// `uniform` or `power:θ`.
pub fn prior(s: &str) -> Result<Prior, String> {
    match s.split_once(':') {
        None if s == "uniform" => Ok(Prior::uniform()),
        Some(("power", theta)) => Prior::power(number(theta, "prior")?).map_err(|e| e.to_string()),
        _ => Err(format!("unknown prior `{s}`, expected `uniform` or `power:THETA`")),
    }
}

/// `linear` or `power:k`.
pub fn cost(s: &str) -> Result<CostFn, String> {
    match s.split_once(':') {
        None if s == "linear" => Ok(CostFn::linear()),
        Some(("power", k)) => CostFn::power(number(k, "cost")?).map_err(|e| e.to_string()),
        _ => Err(format!("unknown cost `{s}`, expected `linear` or `power:K`")),
    }
}

/// `wta:V1` or a comma-separated list of prizes.
pub fn prizes(s: &str) -> Result<PrizeTemplate, String> {
    if let Some(v) = s.strip_prefix("wta:") {
        let v = number(v, "prizes")?;
        if v < 0.0 {
            return Err(format!("prizes: negative prize {v}"));
        }
        return Ok(PrizeTemplate::WinnerTakeAll(v));
    }
    let list = s
        .split(',')
        .map(|p| number(p, "prizes"))
        .collect::<Result<Vec<_>, _>>()?;
    if list.iter().any(|&v| v < 0.0) {
        return Err("prizes: negative prize".into());
    }
    Ok(PrizeTemplate::Explicit(list))
}

/// A number strictly inside `(0, 1)`.
pub fn unit_open(s: &str) -> Result<f64, String> {
    let v = number(s, "value")?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 1)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert_eq!(prior("uniform").unwrap().label(), "uniform");
        assert_eq!(prior("power:2").unwrap().label(), "power:2");
        assert!(prior("power:-1").is_err());
        assert!(prior("beta:2").is_err());
        assert_eq!(cost("power:5").unwrap().label(), "power:5");
        assert!(cost("power:0.5").is_err());
        assert_eq!(prizes("wta:2").unwrap().for_n2(3), vec![2.0, 0.0, 0.0]);
        assert_eq!(prizes("1, 0.5").unwrap().for_n2(2), vec![1.0, 0.5]);
        assert!(prizes("1,x").is_err());
        assert!(prizes("1,-1").is_err());
        assert!(unit_open("1").is_err());
    }
}
