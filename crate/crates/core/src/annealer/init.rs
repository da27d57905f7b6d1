use rand::seq::IndexedRandom;
use rand::Rng;

use super::{AnnealConfig, TrainError};
use crate::corpus::{ratio_keywords, word_frequencies, BinaryDataset};
use crate::embeddings::EmbeddingTable;
use crate::num::Real;
use crate::regex_model::{Chain, Classifier, Element, OuterOr, RegexRule};

/// Times `td_f` is halved when no word passes the ratio test.
pub(crate) const TD_F_RETRIES: usize = 3;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the graph linking keywords whose cosine
/// similarity exceeds `td_s`. Groups are ordered by their best-ranked member
/// and keep the keyword order inside. Out-of-vocabulary words are singletons.
pub fn subject_groups<T: Real>(keywords: &[String], embeddings: &EmbeddingTable<T>, td_s: T) -> Vec<Vec<String>> {
    let n = keywords.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if let Ok(sim) = embeddings.cosine_similarity(&keywords[i], &keywords[j]) {
                if sim > td_s {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<String>> = Vec::new();
    let mut slot_of_root = vec![usize::MAX; n];
    for (i, keyword) in keywords.iter().enumerate() {
        let root = find(&mut parent, i);
        if slot_of_root[root] == usize::MAX {
            slot_of_root[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot_of_root[root]].push(keyword.clone());
    }
    groups
}

/// One rule per solution slot, each a single inner alternation over a
/// randomly chosen group of similar keywords, with an empty negative part.
pub fn build_initial_solution<T: Real, R: Rng + ?Sized>(
    dataset: &BinaryDataset,
    embeddings: &EmbeddingTable<T>,
    config: &AnnealConfig<T>,
    rng: &mut R,
) -> Result<Classifier, TrainError> {
    let pos = word_frequencies(dataset.positive().iter().map(|d| d.as_ref()));
    let neg = word_frequencies(dataset.negative().iter().map(|d| d.as_ref()));
    let mut td_f = config.td_f;
    let mut keywords = ratio_keywords(&pos, &neg, td_f);
    for _ in 0..TD_F_RETRIES {
        if !keywords.is_empty() {
            break;
        }
        td_f /= 2.0;
        log::warn!("class `{}`: no keyword passes the ratio test, retrying with td_f = {td_f}", dataset.target_class());
        keywords = ratio_keywords(&pos, &neg, td_f);
    }
    if keywords.is_empty() {
        return Err(TrainError::NoKeywords(dataset.target_class().to_owned()));
    }
    keywords.truncate(config.n_w);
    let groups = subject_groups(&keywords, embeddings, config.td_s);
    let rules = (0..config.rules_per_solution)
        .map(|_| {
            let group = groups.choose(rng).expect("at least one group");
            let chain = Chain::single(Element::any_of(group.iter().cloned()));
            RegexRule::new(OuterOr::new(vec![chain]), OuterOr::default())
        })
        .collect();
    Ok(Classifier::new(rules))
}
