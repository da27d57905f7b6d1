//! Pool-based simulated annealing over classifiers.
//!
//! A run builds an initial classifier from discriminative keywords, fills an
//! elite pool with one-mutation variants of it, and then runs replacement
//! rounds: every elite spawns a neighbour, each neighbour challenges a random
//! elite under the Metropolis criterion, and the best solution seen so far is
//! merged back before the pool is truncated. [`run_psaw_i`] learns rules one
//! at a time on the documents earlier rules left unmatched; [`run_psaw_p`]
//! splits the positives and learns one rule per part concurrently.

mod init;
mod kmeans;
mod pool;
mod strategies;

use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ranked_by_ratio, word_frequencies, BinaryDataset, CorpusError};
use crate::evaluator::{EvalError, EvalMetrics};
use crate::num::Real;
use crate::operators::{MutationError, DEFAULT_COMPLEXITY_CAP, DEFAULT_DISTANCE_TABLE};
use crate::regex_model::Classifier;

pub use init::{build_initial_solution, subject_groups};
pub use kmeans::{kmeans, KMeansResult};
pub use pool::{replacement_round, run_psaw, PoolState, Scored};
pub use strategies::{partition_positives, run_psaw_i, run_psaw_p, PartitionMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", default, deny_unknown_fields)]
pub struct AnnealConfig<T> {
    pub t_start: T,
    pub t_end: T,
    pub pool_capacity: usize,
    pub total_iterations: usize,
    pub beta: T,
    pub rules_per_solution: usize,
    pub td_f: f64,
    pub n_w: usize,
    pub td_s: T,
    /// Rounds without improvement of the best objective before stopping;
    /// 0 disables the check.
    pub stall_limit: usize,
    pub seed: u64,
    pub complexity_cap: usize,
    pub distance_table: Vec<u32>,
    pub positive_part_probability: f64,
    /// Whether the iterative strategy also drops matched negatives.
    pub filter_negatives: bool,
    /// Threads used for neighbour generation and evaluation.
    pub workers: usize,
}

impl<T: Real> Default for AnnealConfig<T> {
    fn default() -> Self {
        Self {
            t_start: T::lit(0.5),
            t_end: T::lit(0.05),
            pool_capacity: 10,
            total_iterations: 1000,
            beta: T::lit(0.2),
            rules_per_solution: 3,
            td_f: 5.0,
            n_w: 100,
            td_s: T::lit(0.75),
            stall_limit: 200,
            seed: 0,
            complexity_cap: DEFAULT_COMPLEXITY_CAP,
            distance_table: DEFAULT_DISTANCE_TABLE.to_vec(),
            positive_part_probability: 0.5,
            filter_negatives: true,
            workers: 1,
        }
    }
}

impl<T: Real> AnnealConfig<T> {
    pub fn validate(&self) -> Result<(), TrainError> {
        let bad = |m: &str| Err(TrainError::Config(m.to_owned()));
        if !(self.t_end > T::zero() && self.t_end < self.t_start && self.t_start.is_finite()) {
            return bad("temperatures must satisfy 0 < t_end < t_start");
        }
        if self.pool_capacity == 0 {
            return bad("pool capacity must be at least 1");
        }
        if self.rules_per_solution == 0 {
            return bad("a solution needs at least one rule");
        }
        if !(self.beta.is_finite() && self.beta >= T::zero()) {
            return bad("beta must be non-negative");
        }
        if !(self.td_f.is_finite() && self.td_f > 0.0) {
            return bad("td_f must be positive");
        }
        if self.n_w == 0 {
            return bad("n_w must be at least 1");
        }
        if !self.td_s.is_finite() {
            return bad("td_s must be finite");
        }
        if self.distance_table.is_empty() {
            return bad("distance table is empty");
        }
        if !(0.0..=1.0).contains(&self.positive_part_probability) {
            return bad("positive part probability must lie in [0, 1]");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("class `{0}` has no discriminative vocabulary")]
    NoKeywords(String),
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// One replacement round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RoundRecord<T> {
    /// Sub-run index for strategies that learn rules separately, else 0.
    pub part: usize,
    pub round: usize,
    pub temperature: T,
    pub best_objective: T,
    pub mean_elite_objective: T,
    /// Neighbours that replaced an elite.
    pub accepted: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainResult<T> {
    pub best: Classifier,
    /// Metrics of `best` on the full training dataset.
    pub metrics: EvalMetrics<T>,
    pub history: Vec<RoundRecord<T>>,
    pub wall_time: Duration,
}

/// `t_start * (t_end / t_start)^(k / steps)`; `steps == 0` gives `t_start`.
pub fn geometric_temperature<T: Real>(t_start: T, t_end: T, k: usize, steps: usize) -> T {
    if steps == 0 {
        return t_start;
    }
    if k >= steps {
        return t_end;
    }
    let frac = T::lit(k as f64 / steps as f64);
    t_start * (t_end / t_start).powf(frac)
}

/// Temperature of round `k`; the last round of `config.total_iterations`
/// runs at `t_end`.
pub fn temperature_at<T: Real>(k: usize, config: &AnnealConfig<T>) -> T {
    geometric_temperature(config.t_start, config.t_end, k, config.total_iterations.saturating_sub(1))
}

/// Always accepts `delta >= 0`; otherwise accepts with probability
/// `exp(delta / temperature)`. Draws from `rng` only when `delta < 0`.
pub fn metropolis_accept<T: Real, R: Rng + ?Sized>(delta: T, temperature: T, rng: &mut R) -> bool {
    if delta >= T::zero() {
        return true;
    }
    let p = (delta / temperature).exp().as_f64();
    rng.random::<f64>() < p
}

/// Word pools for positive and negative edits: the `n_w` words with the
/// highest smoothed frequency ratio in each direction, among those whose
/// ratio exceeds `td_f`. The threshold is halved like the keyword threshold
/// while a pool is empty.
pub fn word_pools(dataset: &BinaryDataset, n_w: usize, td_f: f64) -> (Vec<String>, Vec<String>) {
    let pos = word_frequencies(dataset.positive().iter().map(|d| d.as_ref()));
    let neg = word_frequencies(dataset.negative().iter().map(|d| d.as_ref()));
    let pool = |numer, denom| {
        let mut threshold = td_f;
        let mut words = ranked_by_ratio(numer, denom, threshold, n_w);
        for _ in 0..init::TD_F_RETRIES {
            if !words.is_empty() {
                break;
            }
            threshold /= 2.0;
            words = ranked_by_ratio(numer, denom, threshold, n_w);
        }
        words
    };
    (pool(&pos, &neg), pool(&neg, &pos))
}

/// Derives an independent seed for sub-task `index` of a run.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn schedule_endpoints() {
        let c = AnnealConfig::<f64> { total_iterations: 1001, ..Default::default() };
        assert_eq!(temperature_at(0, &c), 0.5);
        assert_eq!(temperature_at(1000, &c), 0.05);
        assert!((temperature_at(500, &c) - (0.5f64 * 0.05).sqrt()).abs() < 1e-12);
        let one = AnnealConfig::<f64> { total_iterations: 1, ..Default::default() };
        assert_eq!(temperature_at(0, &one), 0.5);
        let mut prev = f64::INFINITY;
        for k in 0..=1000 {
            let t = temperature_at(k, &c);
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn metropolis_improvements_always_accepted() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..1000).all(|_| metropolis_accept(0.1f64, 0.05, &mut rng)));
        assert!((0..1000).all(|_| metropolis_accept(0.0f32, 0.05, &mut rng)));
        assert!(!(0..1000).any(|_| metropolis_accept(-1.0f64, 0.05, &mut rng)));
    }

    #[test]
    fn config_validation() {
        assert!(AnnealConfig::<f64>::default().validate().is_ok());
        let c = AnnealConfig::<f64> { t_end: 0.6, ..Default::default() };
        assert!(c.validate().is_err());
        let c = AnnealConfig::<f32> { pool_capacity: 0, ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..100).map(|i| derive_seed(7, i)).collect();
        assert_eq!(seeds.len(), 100);
        assert_ne!(derive_seed(7, 0), derive_seed(8, 0));
    }
}
