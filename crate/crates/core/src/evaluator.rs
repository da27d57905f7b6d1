//! Confusion counts, precision, recall and F-beta for classifiers on a
//! binary dataset, plus a caching evaluator used inside the search loop.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{build_inverted_index, BinaryDataset, DocId, Document, InvertedIndex};
use crate::num::Real;
use crate::regex_model::{match_classifier, match_rule, Classifier, RegexRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("the dataset has no positive documents")]
    NoPositives,
    #[error("beta must be a finite non-negative number")]
    InvalidBeta,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionCounts {
    /// Matched positive documents.
    pub true_matches: u64,
    /// Matched negative documents.
    pub false_matches: u64,
    pub positives_total: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EvalMetrics<T> {
    pub counts: ConfusionCounts,
    pub precision: T,
    pub recall: T,
    pub f_beta: T,
    pub beta: T,
}

/// Precision and F-beta are 0 when their denominators are 0.
pub fn metrics_from_counts<T: Real>(counts: ConfusionCounts, beta: T) -> Result<EvalMetrics<T>, EvalError> {
    if !(beta.is_finite() && beta >= T::zero()) {
        return Err(EvalError::InvalidBeta);
    }
    if counts.positives_total == 0 {
        return Err(EvalError::NoPositives);
    }
    let tm = T::lit(counts.true_matches as f64);
    let matched = counts.true_matches + counts.false_matches;
    let precision = if matched == 0 { T::zero() } else { tm / T::lit(matched as f64) };
    let recall = tm / T::lit(counts.positives_total as f64);
    let b2 = beta * beta;
    let denominator = b2 * precision + recall;
    let f_beta = if denominator > T::zero() { (T::one() + b2) * precision * recall / denominator } else { T::zero() };
    Ok(EvalMetrics { counts, precision, recall, f_beta, beta })
}

/// Word postings translated to positions in `dataset.iter()` order.
#[derive(Debug, Clone, Default)]
struct SlotIndex {
    postings: HashMap<String, Vec<u32>>,
}

impl SlotIndex {
    fn new(index: &InvertedIndex, dataset: &BinaryDataset) -> Self {
        let slots: HashMap<DocId, u32> = dataset.iter().enumerate().map(|(s, d)| (d.id, s as u32)).collect();
        let postings = index
            .postings
            .iter()
            .map(|(w, ids)| {
                let mut s: Vec<u32> = ids.iter().filter_map(|id| slots.get(id).copied()).collect();
                s.sort_unstable();
                (w.clone(), s)
            })
            .collect();
        Self { postings }
    }

    /// Superset of the slots a rule can match, or `None` when the index
    /// gives no restriction.
    fn candidates(&self, rule: &RegexRule, len: usize) -> Option<FixedBitSet> {
        let mut out = FixedBitSet::with_capacity(len);
        for chain in &rule.positive.alternatives {
            let mut chain_set: Option<FixedBitSet> = None;
            for element in &chain.elements {
                let mut element_set = FixedBitSet::with_capacity(len);
                let mut known = true;
                for word in element.words() {
                    match self.postings.get(word) {
                        Some(slots) => element_set.extend(slots.iter().map(|&s| s as usize)),
                        None => {
                            known = false;
                            break;
                        }
                    }
                }
                if known {
                    match &mut chain_set {
                        Some(set) => set.intersect_with(&element_set),
                        None => chain_set = Some(element_set),
                    }
                }
            }
            out.union_with(&chain_set?);
        }
        Some(out)
    }
}

const PARALLEL_THRESHOLD: usize = 4096;

fn rule_bitset(rule: &RegexRule, docs: &[&Document], index: Option<&SlotIndex>, parallel: bool) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(docs.len());
    if rule.positive.is_empty() {
        return set;
    }
    let candidates: Vec<usize> = match index.and_then(|ix| ix.candidates(rule, docs.len())) {
        Some(c) => c.ones().collect(),
        None => (0..docs.len()).collect(),
    };
    if parallel && candidates.len() >= PARALLEL_THRESHOLD {
        let hits: Vec<usize> = candidates.par_iter().copied().filter(|&s| match_rule(rule, &docs[s].text)).collect();
        set.extend(hits);
    } else {
        set.extend(candidates.into_iter().filter(|&s| match_rule(rule, &docs[s].text)));
    }
    set
}

fn counts_from_bitset(set: &FixedBitSet, positives: usize) -> ConfusionCounts {
    let true_matches = set.count_ones(..positives) as u64;
    ConfusionCounts {
        true_matches,
        false_matches: set.count_ones(..) as u64 - true_matches,
        positives_total: positives as u64,
    }
}

/// Counts by scanning every document, or through `index` when supplied.
/// Both paths return identical counts.
pub fn confusion_counts(
    classifier: &Classifier,
    dataset: &BinaryDataset,
    index: Option<&InvertedIndex>,
) -> ConfusionCounts {
    let docs: Vec<&Document> = dataset.iter().map(|d| d.as_ref()).collect();
    let positives = dataset.positive().len();
    match index {
        None => {
            let mut counts = ConfusionCounts { positives_total: positives as u64, ..Default::default() };
            for (s, doc) in docs.iter().enumerate() {
                if match_classifier(classifier, &doc.text) {
                    if s < positives {
                        counts.true_matches += 1;
                    } else {
                        counts.false_matches += 1;
                    }
                }
            }
            counts
        }
        Some(index) => {
            let slots = SlotIndex::new(index, dataset);
            let mut set = FixedBitSet::with_capacity(docs.len());
            for rule in &classifier.rules {
                set.union_with(&rule_bitset(rule, &docs, Some(&slots), false));
            }
            counts_from_bitset(&set, positives)
        }
    }
}

pub fn objective<T: Real>(classifier: &Classifier, dataset: &BinaryDataset, beta: T) -> Result<T, EvalError> {
    metrics_from_counts(confusion_counts(classifier, dataset, None), beta).map(|m| m.f_beta)
}

/// Every distinct token of the dataset, the vocabulary indexed by
/// [`Evaluator::new`].
pub fn token_vocabulary(dataset: &BinaryDataset) -> BTreeSet<&str> {
    dataset.iter().flat_map(|d| d.tokens.iter().map(String::as_str)).collect()
}

/// Evaluates classifiers against one dataset, caching the match set of each
/// distinct rule so that re-scoring a classifier after a single-rule edit
/// only matches the edited rule.
#[derive(Debug)]
pub struct Evaluator<'d> {
    dataset: &'d BinaryDataset,
    docs: Vec<&'d Document>,
    index: Option<SlotIndex>,
    cache: Mutex<HashMap<RegexRule, Arc<FixedBitSet>>>,
    cache_limit: usize,
    parallel: bool,
}

/// Memory budget for cached match sets.
const CACHE_BYTES: usize = 256 << 20;

impl<'d> Evaluator<'d> {
    /// Builds a substring index over the dataset's token vocabulary.
    pub fn new(dataset: &'d BinaryDataset) -> Self {
        let index = build_inverted_index(dataset.iter().map(|d| d.as_ref()), token_vocabulary(dataset));
        Self::with_index(dataset, Some(&index))
    }

    /// `None` evaluates by full scans.
    pub fn with_index(dataset: &'d BinaryDataset, index: Option<&InvertedIndex>) -> Self {
        let docs: Vec<&Document> = dataset.iter().map(|d| d.as_ref()).collect();
        let bytes = docs.len().div_ceil(8).max(1) + 64;
        Self {
            dataset,
            index: index.map(|ix| SlotIndex::new(ix, dataset)),
            docs,
            cache: Mutex::new(HashMap::new()),
            cache_limit: (CACHE_BYTES / bytes).clamp(64, 200_000),
            parallel: false,
        }
    }

    /// Lets large candidate sets be confirmed on the current rayon pool.
    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn dataset(&self) -> &'d BinaryDataset {
        self.dataset
    }

    /// Match set of `rule` over `dataset.iter()` positions.
    pub fn rule_matches(&self, rule: &RegexRule) -> Arc<FixedBitSet> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(rule) {
            return Arc::clone(hit);
        }
        let set = Arc::new(rule_bitset(rule, &self.docs, self.index.as_ref(), self.parallel));
        let mut cache = self.cache.lock().expect("cache lock");
        if cache.len() >= self.cache_limit {
            cache.clear();
        }
        cache.insert(rule.clone(), Arc::clone(&set));
        set
    }

    pub fn classifier_matches(&self, classifier: &Classifier) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.docs.len());
        for rule in &classifier.rules {
            set.union_with(&self.rule_matches(rule));
        }
        set
    }

    pub fn counts(&self, classifier: &Classifier) -> ConfusionCounts {
        counts_from_bitset(&self.classifier_matches(classifier), self.dataset.positive().len())
    }

    pub fn metrics<T: Real>(&self, classifier: &Classifier, beta: T) -> Result<EvalMetrics<T>, EvalError> {
        metrics_from_counts(self.counts(classifier), beta)
    }

    pub fn objective<T: Real>(&self, classifier: &Classifier, beta: T) -> Result<T, EvalError> {
        self.metrics(classifier, beta).map(|m| m.f_beta)
    }
}
