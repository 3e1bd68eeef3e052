use serde::Serialize;

use crate::equilibrium::{expected_utility, StrategyTable};
use crate::error::{Error, Result};
use crate::model::ContestSpec;

/// Result of an exhaustive effort search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BestResponse {
    pub effort: f64,
    pub utility: f64,
    /// Spacing of the effort grid.
    pub step: f64,
}

/// Maximises expected utility over `grid` equally spaced efforts on
/// `[0, 1.2 * b(1)]`.
pub fn best_response_search(
    a_i: f64,
    spec: &ContestSpec,
    table: &StrategyTable,
    grid: usize,
) -> Result<BestResponse> {
    if grid < 500 {
        return Err(Error::domain(format!("effort grid {grid} < 500")));
    }
    let top = 1.2 * table.max_effort();
    let step = top / (grid - 1) as f64;
    let mut best = BestResponse {
        effort: 0.0,
        utility: f64::NEG_INFINITY,
        step,
    };
    for k in 0..grid {
        let e = step * k as f64;
        let u = expected_utility(e, a_i, spec, table)?;
        if u > best.utility {
            best.effort = e;
            best.utility = u;
        }
    }
    Ok(best)
}
