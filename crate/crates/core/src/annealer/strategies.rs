use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kmeans::{kmeans, nearest};
use super::pool::{run_on, with_workers};
use super::{derive_seed, AnnealConfig, RoundRecord, TrainError, TrainResult};
use crate::corpus::{build_inverted_index, BinaryDataset, Document};
use crate::embeddings::EmbeddingTable;
use crate::evaluator::{token_vocabulary, Evaluator};
use crate::num::Real;
use crate::regex_model::{match_rule, Classifier, RegexRule};

/// Smallest cluster kept on its own by the k-means split.
pub const MIN_PART_SIZE: usize = 5;
const KMEANS_ITERATIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionMode {
    /// Clusters of mean token vectors.
    KMeans,
    /// Shuffled round-robin split.
    Random,
}

fn single_rule<T: Real>(config: &AnnealConfig<T>, index: usize, workers: usize) -> AnnealConfig<T> {
    AnnealConfig { rules_per_solution: 1, seed: derive_seed(config.seed, index as u64), workers, ..config.clone() }
}

/// Learns one rule at a time. After each rule the documents it matches are
/// dropped from the working set (negatives only when
/// `config.filter_negatives` is set). Stops early, keeping the rules learned
/// so far, when no positive document is left or the residual positives have
/// no discriminative vocabulary.
pub fn run_psaw_i<T: Real>(
    dataset: &BinaryDataset,
    embeddings: &EmbeddingTable<T>,
    config: &AnnealConfig<T>,
) -> Result<TrainResult<T>, TrainError> {
    config.validate()?;
    let started = Instant::now();
    with_workers(config.workers, || {
        let mut working = dataset.clone();
        let mut rules: Vec<RegexRule> = Vec::new();
        let mut history: Vec<RoundRecord<T>> = Vec::new();
        for i in 0..config.rules_per_solution {
            let sub = single_rule(config, i, config.workers);
            let evaluator = Evaluator::new(&working).parallel(config.workers > 1);
            let (best, rounds) = match run_on(&working, &evaluator, embeddings, &sub, i) {
                Ok(out) => out,
                Err(TrainError::NoKeywords(class)) if i > 0 => {
                    log::info!("class `{class}`: residual positives have no keywords, stopping after {i} rules");
                    break;
                }
                Err(e) => return Err(e),
            };
            let rule = best.classifier.rules.into_iter().next().expect("one rule");
            history.extend(rounds);
            let next = working.retain(config.filter_negatives, |d| !match_rule(&rule, &d.text));
            rules.push(rule);
            match next {
                Some(rest) => working = rest,
                None => {
                    if i + 1 < config.rules_per_solution {
                        log::info!("all positives matched after {} rules", i + 1);
                    }
                    break;
                }
            }
        }
        let best = Classifier::new(rules);
        let metrics = Evaluator::new(dataset).metrics(&best, config.beta)?;
        Ok(TrainResult { best, metrics, history, wall_time: started.elapsed() })
    })
}

/// Splits the positives into at most `parts` non-empty groups.
pub fn partition_positives<T: Real>(
    dataset: &BinaryDataset,
    embeddings: &EmbeddingTable<T>,
    parts: usize,
    mode: PartitionMode,
    seed: u64,
) -> Vec<Vec<Arc<Document>>> {
    let positives = dataset.positive();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        PartitionMode::Random => {
            let mut order: Vec<usize> = (0..positives.len()).collect();
            order.shuffle(&mut rng);
            let mut out = vec![Vec::new(); parts.min(positives.len()).max(1)];
            let n = out.len();
            for (i, &d) in order.iter().enumerate() {
                out[i % n].push(Arc::clone(&positives[d]));
            }
            out
        }
        PartitionMode::KMeans => {
            let points: Vec<Vec<T>> = positives.iter().map(|d| embeddings.document_vector(d).values).collect();
            let result = kmeans(&points, parts, KMEANS_ITERATIONS, &mut rng);
            let mut members: Vec<Vec<usize>> = vec![Vec::new(); result.centers.len()];
            for (i, &a) in result.assignments.iter().enumerate() {
                members[a].push(i);
            }
            let mut centers = result.centers;
            merge_small(&mut members, &mut centers, &points);
            members.into_iter().map(|m| m.into_iter().map(|i| Arc::clone(&positives[i])).collect()).collect()
        }
    }
}

/// Folds clusters smaller than [`MIN_PART_SIZE`] into the cluster with the
/// nearest center, smallest first.
fn merge_small<T: Real>(members: &mut Vec<Vec<usize>>, centers: &mut Vec<Vec<T>>, points: &[Vec<T>]) {
    loop {
        let mut empty = 0;
        while empty < members.len() {
            if members[empty].is_empty() && members.len() > 1 {
                members.remove(empty);
                centers.remove(empty);
            } else {
                empty += 1;
            }
        }
        if members.len() <= 1 {
            return;
        }
        let small =
            (0..members.len()).filter(|&c| members[c].len() < MIN_PART_SIZE).min_by_key(|&c| (members[c].len(), c));
        let Some(small) = small else {
            return;
        };
        let others: Vec<Vec<T>> =
            centers.iter().enumerate().filter(|&(c, _)| c != small).map(|(_, v)| v.clone()).collect();
        let mut target = nearest(&centers[small], &others);
        if target >= small {
            target += 1;
        }
        log::info!("merging a cluster of {} positives into one of {}", members[small].len(), members[target].len());
        let moved = std::mem::take(&mut members[small]);
        members[target].extend(moved);
        members[target].sort_unstable();
        let dim = centers[target].len();
        let mut mean = vec![T::zero(); dim];
        for &i in &members[target] {
            for (m, &x) in mean.iter_mut().zip(&points[i]) {
                *m += x;
            }
        }
        let n = T::lit(members[target].len() as f64);
        centers[target] = mean.into_iter().map(|s| s / n).collect();
    }
}

/// Splits the positives into `config.rules_per_solution` parts and learns
/// one rule per part, each against the full negative set. Parts run
/// concurrently on up to `config.workers` threads; the learned rules are
/// concatenated in part order.
pub fn run_psaw_p<T: Real>(
    dataset: &BinaryDataset,
    embeddings: &EmbeddingTable<T>,
    config: &AnnealConfig<T>,
    mode: PartitionMode,
) -> Result<TrainResult<T>, TrainError> {
    config.validate()?;
    if config.rules_per_solution < 2 {
        return Err(TrainError::Config("the partitioned strategy needs at least 2 rules".into()));
    }
    let started = Instant::now();
    let parts =
        partition_positives(dataset, embeddings, config.rules_per_solution, mode, derive_seed(config.seed, u64::MAX));
    let index = build_inverted_index(dataset.iter().map(|d| d.as_ref()), token_vocabulary(dataset));
    let threads = config.workers.min(parts.len()).max(1);
    let inner_workers = (config.workers / threads).max(1);
    type Learned<T> = Option<(RegexRule, Vec<RoundRecord<T>>)>;
    let learn = |(i, positives): (usize, &Vec<Arc<Document>>)| -> Result<Learned<T>, TrainError> {
        let part = dataset.with_positive(positives.clone())?;
        let sub = single_rule(config, i, inner_workers);
        with_workers(inner_workers, || {
            let evaluator = Evaluator::with_index(&part, Some(&index)).parallel(inner_workers > 1);
            match run_on(&part, &evaluator, embeddings, &sub, i) {
                Ok((best, rounds)) => Ok(Some((best.classifier.rules.into_iter().next().expect("one rule"), rounds))),
                Err(TrainError::NoKeywords(_)) => {
                    log::info!("part {i} of {} positives has no keywords, skipped", positives.len());
                    Ok(None)
                }
                Err(e) => Err(e),
            }
        })
    };
    let learned: Vec<Learned<T>> = if threads > 1 {
        with_workers(threads, || parts.par_iter().enumerate().map(learn).collect::<Result<_, _>>())?
    } else {
        parts.iter().enumerate().map(learn).collect::<Result<_, _>>()?
    };
    let mut rules = Vec::with_capacity(learned.len());
    let mut history = Vec::new();
    for (rule, rounds) in learned.into_iter().flatten() {
        rules.push(rule);
        history.extend(rounds);
    }
    if rules.is_empty() {
        return Err(TrainError::NoKeywords(dataset.target_class().to_owned()));
    }
    let best = Classifier::new(rules);
    let metrics = Evaluator::new(dataset).metrics(&best, config.beta)?;
    Ok(TrainResult { best, metrics, history, wall_time: started.elapsed() })
}
