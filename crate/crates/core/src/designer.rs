//! Designer metrics and the choice of how many players to admit.

use rayon::prelude::*;
use serde::Serialize;

use crate::equilibrium::{one_round_effort, restricted_effort, StrategyTable};
use crate::error::{Error, Result};
use crate::math_kernel::{order_stat_density_u, Quadrature};
use crate::model::{ContestSpec, CostFn, Prior, PrizeTemplate};

/// Table resolution used for the metric integrals.
pub const METRIC_GRID: usize = 512;

/// `E[b(max of n1 abilities)]` from a tabulated strategy.
pub fn expected_highest_effort_from(table: &StrategyTable, q: &Quadrature) -> Result<f64> {
    let n1 = table.spec.n1;
    integrate_table(table, q, |u| order_stat_density_u(1, n1, u))
}

/// `n2 ∫ b dF`.
pub fn expected_total_effort_from(table: &StrategyTable, q: &Quadrature) -> Result<f64> {
    Ok(table.spec.n2 as f64 * integrate_table(table, q, |_| 1.0)?)
}

/// Expected sum of the efforts of the `n2` admitted players, who are the top
/// `n2` order statistics of the `n1` entrants.
pub fn expected_admitted_total_effort_from(table: &StrategyTable, q: &Quadrature) -> Result<f64> {
    let (n1, n2) = (table.spec.n1, table.spec.n2);
    integrate_table(table, q, |u| {
        (1..=n2).map(|ell| order_stat_density_u(ell, n1, u)).sum()
    })
}

fn integrate_table<W: Fn(f64) -> f64>(table: &StrategyTable, q: &Quadrature, weight: W) -> Result<f64> {
    if table.spec.all_prizes_zero() {
        return Ok(0.0);
    }
    q.integrate(|u| table.effort_at_u(u) * weight(u), 0.0, 1.0)
}

pub fn expected_highest_effort(spec: &ContestSpec, q: &Quadrature) -> Result<f64> {
    expected_highest_effort_from(&StrategyTable::build(spec, METRIC_GRID, q)?, q)
}

pub fn expected_total_effort(spec: &ContestSpec, q: &Quadrature) -> Result<f64> {
    expected_total_effort_from(&StrategyTable::build(spec, METRIC_GRID, q)?, q)
}

pub fn expected_admitted_total_effort(spec: &ContestSpec, q: &Quadrature) -> Result<f64> {
    expected_admitted_total_effort_from(&StrategyTable::build(spec, METRIC_GRID, q)?, q)
}

/// Metrics for one admitted count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n2: u32,
    pub expected_highest: Option<f64>,
    pub expected_total: Option<f64>,
    pub expected_admitted_total: Option<f64>,
    pub error: Option<String>,
}

/// Metrics for every admitted count `2..=capacity`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub n1: u32,
    pub capacity: u32,
    pub prior: String,
    pub cost: String,
    pub rows: Vec<SweepRow>,
    pub argmax_highest: Option<u32>,
    pub argmax_total: Option<u32>,
    /// Both maximisers lie at 2 or at the capacity.
    pub corner_flag: bool,
}

fn argmax(rows: &[SweepRow], metric: impl Fn(&SweepRow) -> Option<f64>) -> Option<u32> {
    let mut best: Option<(u32, f64)> = None;
    for r in rows {
        if let Some(v) = metric(r) {
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((r.n2, v));
            }
        }
    }
    best.map(|(n, _)| n)
}

/// Evaluates both designer metrics for each `n2` in `2..=capacity`. Rows are
/// computed in parallel; a failing row records its error and the sweep
/// continues.
pub fn sweep_n2(
    n1: u32,
    capacity: u32,
    template: &PrizeTemplate,
    prior: &Prior,
    cost: &CostFn,
    q: &Quadrature,
) -> Result<SweepReport> {
    if capacity < 2 || capacity > n1 {
        return Err(Error::InvalidSpec(format!(
            "capacity {capacity} outside [2, n1 = {n1}]"
        )));
    }
    let rows: Vec<SweepRow> = (2..=capacity)
        .into_par_iter()
        .map(|n2| {
            let metrics = ContestSpec::new(n1, n2, template.for_n2(n2), prior.clone(), *cost)
                .and_then(|spec| StrategyTable::build(&spec, METRIC_GRID, q))
                .and_then(|t| {
                    Ok((
                        expected_highest_effort_from(&t, q)?,
                        expected_total_effort_from(&t, q)?,
                        expected_admitted_total_effort_from(&t, q)?,
                    ))
                });
            match metrics {
                Ok((h, t, a)) => SweepRow {
                    n2,
                    expected_highest: Some(h),
                    expected_total: Some(t),
                    expected_admitted_total: Some(a),
                    error: None,
                },
                Err(e) => SweepRow {
                    n2,
                    expected_highest: None,
                    expected_total: None,
                    expected_admitted_total: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let argmax_highest = argmax(&rows, |r| r.expected_highest);
    let argmax_total = argmax(&rows, |r| r.expected_total);
    let corner = |a: Option<u32>| a.is_some_and(|n| n == 2 || n == capacity);
    Ok(SweepReport {
        n1,
        capacity,
        prior: prior.label(),
        cost: cost.label(),
        corner_flag: corner(argmax_highest) && corner(argmax_total),
        argmax_highest,
        argmax_total,
        rows,
    })
}

/// One cell of a [`dominance_report`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceRow {
    pub n2: u32,
    pub ability: f64,
    pub restricted: f64,
    pub one_round: f64,
    /// `one_round - restricted`.
    pub margin: f64,
}

/// Compares the restricted strategy for every `n2 in 2..=n1` with the
/// regular contest among all `n1` players on an ability grid.
pub fn dominance_report(
    n1: u32,
    prizes: &[f64],
    prior: &Prior,
    cost: &CostFn,
    abilities: &[f64],
    q: &Quadrature,
) -> Result<Vec<DominanceRow>> {
    let one: Vec<f64> = abilities
        .iter()
        .map(|&a| one_round_effort(a, n1, prizes, prior, cost, q))
        .collect::<Result<_>>()?;
    let per_n2: Vec<Result<Vec<DominanceRow>>> = (2..=n1)
        .into_par_iter()
        .map(|n2| {
            let mut v = prizes.to_vec();
            v.truncate(n2 as usize);
            let spec = ContestSpec::new(n1, n2, v, prior.clone(), *cost)?;
            abilities
                .iter()
                .zip(&one)
                .map(|(&a, &o)| {
                    let r = restricted_effort(a, &spec, q)?;
                    Ok(DominanceRow {
                        n2,
                        ability: a,
                        restricted: r,
                        one_round: o,
                        margin: o - r,
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for rows in per_n2 {
        out.extend(rows?);
    }
    Ok(out)
}
