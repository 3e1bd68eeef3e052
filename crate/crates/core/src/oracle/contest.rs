use rand::Rng;
use serde::Serialize;

use super::McConfig;
use crate::equilibrium::StrategyTable;
use crate::error::{Error, Result};
use crate::model::ContestSpec;

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, o: &Moments) {
        self.n += o.n;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }

    fn estimate(&self) -> MeanEstimate {
        let n = self.n.max(1) as f64;
        let mean = self.sum / n;
        let var = (self.sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
        MeanEstimate {
            mean,
            std_error: (var / n).sqrt(),
        }
    }
}

/// Admitted players whose ability fell in `[lo, hi)`, with how often each
/// rank was attained.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    pub mean_ability: f64,
    pub rank_counts: Vec<u64>,
}

/// Output of [`simulate_contest`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub contests: u64,
    pub highest_effort: MeanEstimate,
    pub admitted_total_effort: MeanEstimate,
    /// Times each rank was awarded over all contests.
    pub rank_totals: Vec<u64>,
    pub bins: Vec<RankBin>,
}

struct BatchStats {
    highest: Moments,
    total: Moments,
    rank_totals: Vec<u64>,
    bin_counts: Vec<u64>,
    bin_ability: Vec<f64>,
    bin_ranks: Vec<Vec<u64>>,
}

/// Plays the full contest: draws `n1` abilities, admits the top `n2`, maps
/// them through the tabulated strategy and ranks the efforts.
pub fn simulate_contest(
    spec: &ContestSpec,
    table: &StrategyTable,
    mc: &McConfig,
    bins: usize,
) -> Result<SimulationReport> {
    if bins == 0 {
        return Err(Error::domain("need at least one ability bin"));
    }
    let (n1, n2) = (spec.n1 as usize, spec.n2 as usize);
    let batches = mc.run_batches(|rng, n| {
        let mut st = BatchStats {
            highest: Moments::default(),
            total: Moments::default(),
            rank_totals: vec![0; n2],
            bin_counts: vec![0; bins],
            bin_ability: vec![0.0; bins],
            bin_ranks: vec![vec![0; n2]; bins],
        };
        let mut field = vec![0.0; n1];
        let mut admitted: Vec<(f64, f64)> = Vec::with_capacity(n2);
        for _ in 0..n {
            for x in field.iter_mut() {
                *x = spec.prior.inverse_cdf(rng.gen::<f64>());
            }
            field.select_nth_unstable_by(n2 - 1, |a, b| b.total_cmp(a));
            admitted.clear();
            admitted.extend(field[..n2].iter().map(|&a| (table.effort(a), a)));
            admitted.sort_by(|x, y| y.0.total_cmp(&x.0).then(y.1.total_cmp(&x.1)));
            st.highest.push(admitted[0].0);
            st.total.push(admitted.iter().map(|x| x.0).sum());
            for (rank, &(_, a)) in admitted.iter().enumerate() {
                st.rank_totals[rank] += 1;
                let b = ((a * bins as f64) as usize).min(bins - 1);
                st.bin_counts[b] += 1;
                st.bin_ability[b] += a;
                st.bin_ranks[b][rank] += 1;
            }
        }
        Ok(st)
    })?;
    let mut highest = Moments::default();
    let mut total = Moments::default();
    let mut rank_totals = vec![0u64; n2];
    let mut counts = vec![0u64; bins];
    let mut ability = vec![0.0; bins];
    let mut ranks = vec![vec![0u64; n2]; bins];
    for st in &batches {
        highest.merge(&st.highest);
        total.merge(&st.total);
        for r in 0..n2 {
            rank_totals[r] += st.rank_totals[r];
        }
        for b in 0..bins {
            counts[b] += st.bin_counts[b];
            ability[b] += st.bin_ability[b];
            for r in 0..n2 {
                ranks[b][r] += st.bin_ranks[b][r];
            }
        }
    }
    let bins_out = (0..bins)
        .map(|b| RankBin {
            lo: b as f64 / bins as f64,
            hi: (b + 1) as f64 / bins as f64,
            count: counts[b],
            mean_ability: if counts[b] > 0 {
                ability[b] / counts[b] as f64
            } else {
                f64::NAN
            },
            rank_counts: ranks[b].clone(),
        })
        .collect();
    Ok(SimulationReport {
        contests: mc.samples,
        highest_effort: highest.estimate(),
        admitted_total_effort: total.estimate(),
        rank_totals,
        bins: bins_out,
    })
}

/// Rank frequencies of a player with fixed ability, conditional on her
/// admission.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankFrequencies {
    pub ability: f64,
    pub accepted: u64,
    pub counts: Vec<u64>,
}

impl RankFrequencies {
    pub fn frequency(&self, rank: usize) -> f64 {
        self.counts[rank] as f64 / self.accepted as f64
    }
}

/// Monte Carlo rank distribution for a player of ability `a_i` who plays
/// the tabulated strategy against admitted opponents doing the same.
pub fn mc_rank_frequencies(
    a_i: f64,
    spec: &ContestSpec,
    table: &StrategyTable,
    mc: &McConfig,
) -> Result<RankFrequencies> {
    let n2 = spec.n2 as usize;
    let own = table.effort(a_i);
    let batches = mc.run_batches(|rng, n| {
        let mut counts = vec![0u64; n2];
        let mut field = vec![0.0; (spec.n1 - 1) as usize];
        let mut accepted = 0u64;
        let mut tries = 0u64;
        while accepted < n {
            tries += 1;
            if tries > 1_000 * n + 1_000_000 {
                return Err(Error::AcceptanceStarvation {
                    rate: accepted as f64 / tries as f64,
                    trials: tries,
                });
            }
            let mut above = 0usize;
            for x in field.iter_mut() {
                *x = spec.prior.inverse_cdf(rng.gen::<f64>());
                if *x > a_i {
                    above += 1;
                }
            }
            if above >= n2 {
                continue;
            }
            accepted += 1;
            if n2 > 1 {
                field.select_nth_unstable_by(n2 - 2, |a, b| b.total_cmp(a));
            }
            let beaten_by = field[..n2 - 1]
                .iter()
                .filter(|&&a| {
                    let e = table.effort(a);
                    e > own || (e == own && a > a_i)
                })
                .count();
            counts[beaten_by] += 1;
        }
        Ok(counts)
    })?;
    let mut counts = vec![0u64; n2];
    for c in &batches {
        for r in 0..n2 {
            counts[r] += c[r];
        }
    }
    Ok(RankFrequencies {
        ability: a_i,
        accepted: mc.samples,
        counts,
    })
}
