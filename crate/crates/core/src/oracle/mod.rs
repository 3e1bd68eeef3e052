//! Independent Monte Carlo and brute-force checks for the closed forms.
//!
//! All samplers split work into fixed-size batches. Batch `k` draws from its
//! own ChaCha stream `k` under the configured seed, and batch results are
//! merged in index order, so outputs do not depend on the thread count.

mod best_response;
mod contest;
mod identity;
mod posterior;
mod verify;

pub use best_response::{best_response_search, BestResponse};
pub use contest::{
    mc_rank_frequencies, simulate_contest, MeanEstimate, RankBin, RankFrequencies,
    SimulationReport,
};
pub use identity::{lemma3_closed_form, lemma3_identity_check, IdentityCheck};
pub use posterior::{
    ks_critical_1pct, ks_statistic, mc_posterior_empirical, probe_acceptance_rate,
};
pub use verify::{run_verify_suite, CheckResult, VerifyReport, POSTERIOR_LATTICE};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Monte Carlo settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub seed: u64,
    pub samples: u64,
    pub batch: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 1_000_000,
            batch: 1 << 14,
        }
    }
}

impl McConfig {
    pub fn new(seed: u64, samples: u64) -> Self {
        Self {
            seed,
            samples,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 || self.batch == 0 {
            return Err(Error::domain("Monte Carlo samples and batch must be positive"));
        }
        Ok(())
    }

    fn batch_sizes(&self) -> Vec<u64> {
        let full = self.samples / self.batch;
        let rest = self.samples % self.batch;
        let mut v = vec![self.batch; full as usize];
        if rest > 0 {
            v.push(rest);
        }
        v
    }

    /// Runs `work(rng, size)` for every batch in parallel and returns the
    /// results in batch order.
    pub(crate) fn run_batches<T, F>(&self, work: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&mut ChaCha8Rng, u64) -> Result<T> + Sync,
    {
        self.validate()?;
        self.batch_sizes()
            .into_par_iter()
            .enumerate()
            .map(|(k, size)| {
                let mut rng = stream(self.seed, k as u64);
                work(&mut rng, size)
            })
            .collect()
    }
}

/// Generator for stream `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
