use allpay_core::beliefs::{belief_jump, marginal_posterior_cdf, marginal_posterior_pdf, PosteriorParams};
use allpay_core::designer::{sweep_n2, SweepReport};
use allpay_core::equilibrium::{one_round_effort, restricted_effort};
use allpay_core::math_kernel::j_fn;
use allpay_core::two_stage::{deviation_curve, deviation_slope, SlopeEstimate, TwoStageSpec};
use allpay_core::{ContestSpec, CostFn, Prior, PrizeTemplate, Quadrature};
use serde::Serialize;

use crate::output::{Cell, Table};
use crate::CliError;

pub const FIGURE_THETAS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const FIGURE_COST_POWERS: [f64; 2] = [1.0, 5.0];

/// Interior points `k / grid` for `k = 1..grid`.
fn points(grid: usize) -> impl Iterator<Item = f64> {
    (1..grid).map(move |k| k as f64 / grid as f64)
}

fn pdf_pair(x: f64, p: &PosteriorParams) -> Result<(f64, f64), CliError> {
    Ok((p.prior.pdf(x), marginal_posterior_pdf(x, p)?))
}

pub fn belief_tables(p: &PosteriorParams, grid: usize) -> Result<(Table, Table), CliError> {
    let mut pdf = Table::new(&["a_j", "prior_pdf", "posterior_pdf"]);
    let mut cdf = Table::new(&["a_j", "prior_cdf", "posterior_cdf"]);
    for x in points(grid) {
        let (f0, f1) = pdf_pair(x, p)?;
        pdf.push(vec![Cell::Num(x), Cell::Num(f0), Cell::Num(f1)]);
        cdf.push(vec![
            Cell::Num(x),
            Cell::Num(p.prior.cdf(x)),
            Cell::Num(marginal_posterior_cdf(x, p)?),
        ]);
    }
    Ok((pdf, cdf))
}

pub fn belief_table(p: &PosteriorParams, grid: usize) -> Result<Table, CliError> {
    let mut t = Table::new(&["a_j", "prior_pdf", "posterior_pdf", "prior_cdf", "posterior_cdf"]);
    for x in points(grid) {
        let (f0, f1) = pdf_pair(x, p)?;
        t.push(vec![
            Cell::Num(x),
            Cell::Num(f0),
            Cell::Num(f1),
            Cell::Num(p.prior.cdf(x)),
            Cell::Num(marginal_posterior_cdf(x, p)?),
        ]);
    }
    Ok(t)
}

pub fn equilibrium_table(spec: &ContestSpec, full_prizes: &[f64], grid: usize, q: &Quadrature) -> Result<Table, CliError> {
    let mut t = Table::new(&["a", "b_restricted", "b_one_round"]);
    for a in points(grid) {
        let r = restricted_effort(a, spec, q)?;
        let o = one_round_effort(a, spec.n1, full_prizes, &spec.prior, &spec.cost, q)?;
        t.push(vec![Cell::Num(a), Cell::Num(r), Cell::Num(o)]);
    }
    Ok(t)
}

fn opt(v: Option<f64>) -> Cell {
    match v {
        Some(v) => Cell::Num(v),
        None => Cell::Text(String::new()),
    }
}

pub fn sweep_table(r: &SweepReport) -> Table {
    let mut t = Table::new(&["n2", "expected_highest", "expected_total", "expected_admitted_total", "error"]);
    for row in &r.rows {
        t.push(vec![
            Cell::Int(row.n2 as u64),
            opt(row.expected_highest),
            opt(row.expected_total),
            opt(row.expected_admitted_total),
            Cell::Text(row.error.clone().unwrap_or_default()),
        ]);
    }
    t
}

#[derive(Serialize)]
pub struct SweepSummary<'a> {
    pub n1: u32,
    pub capacity: u32,
    pub prior: &'a str,
    pub cost: &'a str,
    pub argmax_highest: Option<u32>,
    pub argmax_total: Option<u32>,
    pub corner_flag: bool,
    pub failed_rows: usize,
}

impl<'a> SweepSummary<'a> {
    pub fn of(r: &'a SweepReport) -> Self {
        SweepSummary {
            n1: r.n1,
            capacity: r.capacity,
            prior: &r.prior,
            cost: &r.cost,
            argmax_highest: r.argmax_highest,
            argmax_total: r.argmax_total,
            corner_flag: r.corner_flag,
            failed_rows: r.rows.iter().filter(|row| row.error.is_some()).count(),
        }
    }
}

#[derive(Serialize)]
pub struct TwoStageVerdict {
    pub n1: u32,
    pub n2: u32,
    pub prior: String,
    pub cost: String,
    #[serde(flatten)]
    pub slope: SlopeEstimate,
    pub sign: &'static str,
    /// A nonzero slope at the true ability rules out the candidate equilibrium.
    pub candidate_rejected: bool,
}

pub fn two_stage(
    ts: &TwoStageSpec,
    a: f64,
    half_width: f64,
    curve_points: usize,
    q: &Quadrature,
) -> Result<(Table, TwoStageVerdict), CliError> {
    let slope = deviation_slope(a, ts, q)?;
    let mut curve = Table::new(&["a_tilde", "gain"]);
    for (x, l) in deviation_curve(a, half_width, curve_points, ts, q)? {
        curve.push(vec![Cell::Num(x), Cell::Num(l)]);
    }
    let sign = match slope.slope {
        s if s > 0.0 => "positive",
        s if s < 0.0 => "negative",
        _ => "zero",
    };
    let verdict = TwoStageVerdict {
        n1: ts.contest.n1,
        n2: ts.contest.n2,
        prior: ts.contest.prior.label(),
        cost: ts.contest.cost.label(),
        candidate_rejected: slope.nonzero,
        sign,
        slope,
    };
    Ok((curve, verdict))
}

pub fn jump_table(n1: u32, grid: usize) -> Result<Table, CliError> {
    let mut t = Table::new(&["a_i", "n2", "jump"]);
    for n2 in 2..=n1 {
        for a in points(grid) {
            let p = PosteriorParams::new(a, n1, n2, Prior::uniform())?;
            t.push(vec![Cell::Num(a), Cell::Int(n2 as u64), Cell::Num(belief_jump(&p))]);
        }
    }
    Ok(t)
}

pub fn j_table(n1: u32, grid: usize) -> Result<Table, CliError> {
    let mut t = Table::new(&["x", "n2", "J"]);
    for n2 in 2..=n1 {
        for x in points(grid) {
            t.push(vec![Cell::Num(x), Cell::Int(n2 as u64), Cell::Num(j_fn(x, n1, n2)?)]);
        }
    }
    Ok(t)
}

/// Highest and total effort against `n2` for every prior shape and cost power.
pub fn designer_tables(n1: u32, q: &Quadrature) -> Result<(Table, Table), CliError> {
    let mut highest = Table::new(&["cost_k", "theta", "n2", "expected_highest"]);
    let mut total = Table::new(&["cost_k", "theta", "n2", "expected_total", "expected_admitted_total"]);
    for k in FIGURE_COST_POWERS {
        for theta in FIGURE_THETAS {
            let r = sweep_n2(n1, n1, &PrizeTemplate::WinnerTakeAll(1.0), &Prior::power(theta)?, &CostFn::power(k)?, q)?;
            for row in &r.rows {
                if let Some(e) = &row.error {
                    return Err(CliError::Numerical(format!("theta={theta} k={k} n2={}: {e}", row.n2)));
                }
                let head = || vec![Cell::Num(k), Cell::Num(theta), Cell::Int(row.n2 as u64)];
                let mut h = head();
                h.push(opt(row.expected_highest));
                highest.push(h);
                let mut s = head();
                s.push(opt(row.expected_total));
                s.push(opt(row.expected_admitted_total));
                total.push(s);
            }
        }
    }
    Ok((highest, total))
}
