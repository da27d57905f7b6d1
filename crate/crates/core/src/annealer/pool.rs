use std::cmp::Ordering;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    build_initial_solution, metropolis_accept, temperature_at, word_pools, AnnealConfig, RoundRecord, TrainError,
    TrainResult,
};
use crate::corpus::BinaryDataset;
use crate::embeddings::EmbeddingTable;
use crate::evaluator::Evaluator;
use crate::num::Real;
use crate::operators::{mutate, MutationContext};
use crate::regex_model::Classifier;

#[derive(Debug, Clone, PartialEq)]
pub struct Scored<T> {
    pub classifier: Classifier,
    pub objective: T,
    pub complexity: usize,
}

impl<T: Real> Scored<T> {
    pub fn new(classifier: Classifier, evaluator: &Evaluator<'_>, beta: T) -> Result<Self, TrainError> {
        let objective = evaluator.objective(&classifier, beta)?;
        Ok(Self { complexity: classifier.complexity(), classifier, objective })
    }
}

/// Higher objective first, then lower complexity.
fn rank<T: Real>(a: &Scored<T>, b: &Scored<T>) -> Ordering {
    b.objective.partial_cmp(&a.objective).unwrap_or(Ordering::Equal).then(a.complexity.cmp(&b.complexity))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoolState<T> {
    pub elites: Vec<Scored<T>>,
    /// Neighbours generated in the last round, by elite slot.
    pub neighbours: Vec<Scored<T>>,
    pub best: Scored<T>,
    pub temperature: T,
    pub iteration: usize,
}

impl<T: Real> PoolState<T> {
    /// Pool seeded with the given elites; `best` is the top-ranked one.
    pub fn new(mut elites: Vec<Scored<T>>, temperature: T) -> Self {
        assert!(!elites.is_empty(), "pool needs at least one elite");
        elites.sort_by(rank);
        Self { best: elites[0].clone(), elites, neighbours: Vec::new(), temperature, iteration: 0 }
    }

    pub fn mean_elite_objective(&self) -> T {
        let total: T = self.elites.iter().map(|e| e.objective).sum();
        total / T::lit(self.elites.len() as f64)
    }
}

/// One round at `state.temperature`. Returns the number of accepted
/// neighbours.
///
/// Randomness is consumed in a fixed order: one seed per elite slot for its
/// neighbour, then for each neighbour the challenged slot and, only for a
/// worse neighbour, the acceptance draw. Neighbours are generated in
/// parallel when `parallel` is set; the result does not depend on it.
pub fn replacement_round<T: Real, R: Rng + ?Sized>(
    state: &mut PoolState<T>,
    ctx: &MutationContext<'_, T>,
    evaluator: &Evaluator<'_>,
    beta: T,
    parallel: bool,
    rng: &mut R,
) -> Result<usize, TrainError> {
    let seeds: Vec<u64> = state.elites.iter().map(|_| rng.next_u64()).collect();
    let spawn = |(elite, &seed): (&Scored<T>, &u64)| -> Result<Scored<T>, TrainError> {
        let mut local = ChaCha8Rng::seed_from_u64(seed);
        let m = mutate(&elite.classifier, ctx, &mut local)?;
        Scored::new(m.classifier, evaluator, beta)
    };
    let neighbours: Vec<Scored<T>> = if parallel {
        state.elites.par_iter().zip(seeds.par_iter()).map(spawn).collect::<Result<_, _>>()?
    } else {
        state.elites.iter().zip(seeds.iter()).map(spawn).collect::<Result<_, _>>()?
    };

    let n = state.elites.len();
    let mut accepted = 0;
    for neighbour in &neighbours {
        let slot = rng.random_range(0..n);
        let delta = neighbour.objective - state.elites[slot].objective;
        if metropolis_accept(delta, state.temperature, rng) {
            state.elites[slot] = neighbour.clone();
            accepted += 1;
        }
    }

    let mut ranked = std::mem::take(&mut state.elites);
    ranked.push(state.best.clone());
    ranked.sort_by(rank);
    ranked.truncate(n);
    state.best = ranked[0].clone();
    state.elites = ranked;
    state.neighbours = neighbours;
    state.iteration += 1;
    Ok(accepted)
}

/// Anneals from `initial` and returns the best solution with its history.
pub(crate) fn search<T: Real>(
    initial: &Classifier,
    ctx: &MutationContext<'_, T>,
    evaluator: &Evaluator<'_>,
    config: &AnnealConfig<T>,
    part: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Scored<T>, Vec<RoundRecord<T>>), TrainError> {
    let elites = (0..config.pool_capacity)
        .map(|_| {
            let m = mutate(initial, ctx, rng)?;
            Scored::new(m.classifier, evaluator, config.beta)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let k = config.total_iterations;
    let mut state = PoolState::new(elites, config.t_start);
    let mut history = Vec::with_capacity(k);
    let mut stalled = 0;
    let parallel = config.workers > 1;
    for round in 0..k {
        state.temperature = temperature_at(round, config);
        let before = state.best.objective;
        let accepted = replacement_round(&mut state, ctx, evaluator, config.beta, parallel, rng)?;
        history.push(RoundRecord {
            part,
            round,
            temperature: state.temperature,
            best_objective: state.best.objective,
            mean_elite_objective: state.mean_elite_objective(),
            accepted,
        });
        if state.best.objective > before {
            stalled = 0;
        } else {
            stalled += 1;
        }
        if config.stall_limit > 0 && stalled >= config.stall_limit {
            log::debug!("part {part}: stopping after {} rounds without improvement", stalled);
            break;
        }
    }
    Ok((state.best, history))
}

pub(crate) fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(e) => {
            log::warn!("cannot start {workers} worker threads ({e}), running on the current thread");
            f()
        }
    }
}

/// Runs the search on `dataset` with `config.rules_per_solution` rules.
pub fn run_psaw<T: Real>(
    dataset: &BinaryDataset,
    embeddings: &EmbeddingTable<T>,
    config: &AnnealConfig<T>,
) -> Result<TrainResult<T>, TrainError> {
    config.validate()?;
    let started = Instant::now();
    with_workers(config.workers, || {
        let evaluator = Evaluator::new(dataset).parallel(config.workers > 1);
        let (best, history) = run_on(dataset, &evaluator, embeddings, config, 0)?;
        Ok(TrainResult {
            metrics: evaluator.metrics(&best.classifier, config.beta)?,
            best: best.classifier,
            history,
            wall_time: started.elapsed(),
        })
    })
}

pub(crate) fn run_on<T: Real>(
    dataset: &BinaryDataset,
    evaluator: &Evaluator<'_>,
    embeddings: &EmbeddingTable<T>,
    config: &AnnealConfig<T>,
    part: usize,
) -> Result<(Scored<T>, Vec<RoundRecord<T>>), TrainError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (positive_words, negative_words) = word_pools(dataset, config.n_w, config.td_f);
    let ctx = MutationContext {
        positive_words: &positive_words,
        negative_words: &negative_words,
        distance_table: &config.distance_table,
        embeddings,
        complexity_cap: config.complexity_cap,
        positive_part_probability: config.positive_part_probability,
    };
    let initial = build_initial_solution(dataset, embeddings, config, &mut rng)?;
    search(&initial, &ctx, evaluator, config, part, &mut rng)
}
