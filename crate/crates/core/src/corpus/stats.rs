use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use super::Document;

/// Token occurrence counts over a set of documents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    pub counts: HashMap<String, u64>,
    pub total_tokens: u64,
}

impl FrequencyTable {
    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    /// Add-one smoothed relative frequency with `vocab_size` pseudo-counts in
    /// the denominator.
    pub fn smoothed(&self, word: &str, vocab_size: usize) -> f64 {
        (self.count(word) as f64 + 1.0) / (self.total_tokens as f64 + vocab_size as f64)
    }
}

pub fn word_frequencies<'a>(docs: impl IntoIterator<Item = &'a Document>) -> FrequencyTable {
    let mut table = FrequencyTable::default();
    for doc in docs {
        for token in &doc.tokens {
            *table.counts.entry(token.clone()).or_insert(0) += 1;
            table.total_tokens += 1;
        }
    }
    table
}

fn vocab_size(a: &FrequencyTable, b: &FrequencyTable) -> usize {
    let mut vocab: HashSet<&str> = a.counts.keys().map(String::as_str).collect();
    vocab.extend(b.counts.keys().map(String::as_str));
    vocab.len()
}

/// Words whose smoothed relative frequency in `pos` exceeds `td_f` times
/// their smoothed relative frequency in `neg`, most frequent (in `pos`)
/// first, ties broken lexicographically.
pub fn ratio_keywords(pos: &FrequencyTable, neg: &FrequencyTable, td_f: f64) -> Vec<String> {
    let vocab = vocab_size(pos, neg);
    let mut words: Vec<(&str, u64)> = pos
        .counts
        .iter()
        .filter(|(w, &c)| c > 0 && pos.smoothed(w, vocab) > td_f * neg.smoothed(w, vocab))
        .map(|(w, &c)| (w.as_str(), c))
        .collect();
    words.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    words.into_iter().map(|(w, _)| w.to_owned()).collect()
}

/// The `limit` words of `numer` with the highest smoothed frequency ratio
/// `numer / denom`, keeping only ratios above `min_ratio`. Ties broken
/// lexicographically.
pub fn ranked_by_ratio(numer: &FrequencyTable, denom: &FrequencyTable, min_ratio: f64, limit: usize) -> Vec<String> {
    let vocab = vocab_size(numer, denom);
    let mut scored: Vec<(&str, f64)> = numer
        .counts
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(w, _)| (w.as_str(), numer.smoothed(w, vocab) / denom.smoothed(w, vocab)))
        .filter(|&(_, r)| r > min_ratio)
        .collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then_with(|| a.0.cmp(b.0)));
    scored.truncate(limit);
    scored.into_iter().map(|(w, _)| w.to_owned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(tokens: &[&str]) -> Document {
        Document {
            id: 0,
            text: tokens.join(" "),
            tokens: tokens.iter().map(|t| (*t).to_owned()).collect(),
            label: "x".into(),
        }
    }

    fn table(entries: &[(&str, u64)], total: u64) -> FrequencyTable {
        FrequencyTable { counts: entries.iter().map(|(w, c)| ((*w).to_owned(), *c)).collect(), total_tokens: total }
    }

    #[test]
    fn counts_tokens() {
        let docs = [doc(&["a", "b", "a"]), doc(&["a"])];
        let t = word_frequencies(&docs);
        assert_eq!(t.count("a"), 3);
        assert_eq!(t.count("b"), 1);
        assert_eq!(t.total_tokens, 4);
        assert_eq!(word_frequencies(&[]), FrequencyTable::default());
    }

    #[test]
    fn frequent_positive_word_is_a_keyword() {
        let pos = table(&[("fever", 50), ("other", 50)], 100);
        let neg = table(&[("fever", 1), ("other", 99)], 100);
        assert_eq!(ratio_keywords(&pos, &neg, 5.0), vec!["fever"]);
    }

    #[test]
    fn equally_common_word_is_not_a_keyword() {
        let pos = table(&[("same", 10)], 100);
        let neg = table(&[("same", 10)], 100);
        assert!(ratio_keywords(&pos, &neg, 5.0).is_empty());
    }

    #[test]
    fn ties_are_lexicographic() {
        let pos = table(&[("b", 5), ("a", 5), ("c", 9)], 19);
        let neg = table(&[("z", 100)], 100);
        assert_eq!(ratio_keywords(&pos, &neg, 1.0), vec!["c", "a", "b"]);
    }

    #[test]
    fn ratio_ranking_prefers_exclusive_words() {
        let pos = table(&[("marker", 10), ("shared", 10)], 20);
        let neg = table(&[("shared", 10), ("other", 10)], 20);
        assert_eq!(ranked_by_ratio(&pos, &neg, 0.0, 1), vec!["marker"]);
        assert_eq!(ranked_by_ratio(&neg, &pos, 0.0, 1), vec!["other"]);
    }
}
