//! Labeled text corpora: ingestion, tokenization, word statistics and the
//! substring index used to prefilter documents during evaluation.

mod index;
mod io;
mod stats;
pub mod synth;
mod tokenize;

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use index::{build_inverted_index, InvertedIndex};
pub use io::{load_corpus, parse_corpus, write_corpus, CorpusFormat};
pub use stats::{ranked_by_ratio, ratio_keywords, word_frequencies, FrequencyTable};
pub use synth::{generate_synthetic_corpus, SynthSpec};
pub use tokenize::{load_stop_words, tokenize, Tokenizer, TokenizerConfig, TokenizerMode};

pub type DocId = usize;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("corpus contains no records")]
    Empty,
    #[error("duplicate document id {0}")]
    DuplicateId(DocId),
    #[error("document {0} has empty text")]
    EmptyText(DocId),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("class `{0}` has no positive documents")]
    NoPositives(String),
    #[error("document {0} appears in both the positive and negative sets")]
    Overlap(DocId),
    #[error("invalid synthetic corpus spec: {0}")]
    InvalidSpec(String),
}

/// One text record with its class label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: DocId,
    pub text: String,
    pub tokens: Vec<String>,
    pub label: String,
}

/// A set of documents with unique ids, each labeled with one class.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCorpus {
    documents: Vec<Arc<Document>>,
    classes: BTreeSet<String>,
}

impl LabeledCorpus {
    pub fn new(documents: Vec<Document>) -> Result<Self, CorpusError> {
        let mut seen = HashSet::with_capacity(documents.len());
        let mut classes = BTreeSet::new();
        for doc in &documents {
            if !seen.insert(doc.id) {
                return Err(CorpusError::DuplicateId(doc.id));
            }
            if doc.text.is_empty() {
                return Err(CorpusError::EmptyText(doc.id));
            }
            classes.insert(doc.label.clone());
        }
        Ok(Self { documents: documents.into_iter().map(Arc::new).collect(), classes })
    }

    pub fn documents(&self) -> &[Arc<Document>] {
        &self.documents
    }

    pub fn classes(&self) -> &BTreeSet<String> {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Splits the corpus into documents of `target` versus everything else.
    pub fn binary_split(&self, target: &str) -> Result<BinaryDataset, CorpusError> {
        if !self.classes.contains(target) {
            return Err(CorpusError::UnknownClass(target.to_owned()));
        }
        let (positive, negative) = self.documents.iter().cloned().partition(|doc| doc.label == target);
        BinaryDataset::new(target, positive, negative)
    }
}

/// Positive and negative documents for a single target class.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDataset {
    target_class: String,
    positive: Vec<Arc<Document>>,
    negative: Vec<Arc<Document>>,
}

impl BinaryDataset {
    pub fn new(
        target_class: &str,
        positive: Vec<Arc<Document>>,
        negative: Vec<Arc<Document>>,
    ) -> Result<Self, CorpusError> {
        if positive.is_empty() {
            return Err(CorpusError::NoPositives(target_class.to_owned()));
        }
        let ids: HashSet<DocId> = positive.iter().map(|d| d.id).collect();
        if let Some(doc) = negative.iter().find(|d| ids.contains(&d.id)) {
            return Err(CorpusError::Overlap(doc.id));
        }
        Ok(Self { target_class: target_class.to_owned(), positive, negative })
    }

    pub fn target_class(&self) -> &str {
        &self.target_class
    }

    pub fn positive(&self) -> &[Arc<Document>] {
        &self.positive
    }

    pub fn negative(&self) -> &[Arc<Document>] {
        &self.negative
    }

    pub fn len(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Positives followed by negatives. Evaluators index documents by their
    /// position in this sequence.
    pub fn iter(&self) -> impl Iterator<Item = &Arc<Document>> {
        self.positive.iter().chain(self.negative.iter())
    }

    /// Keeps the documents for which `keep` returns true. Negatives are only
    /// filtered when `filter_negatives` is set. Returns `None` when no
    /// positive document survives.
    pub fn retain(&self, filter_negatives: bool, mut keep: impl FnMut(&Document) -> bool) -> Option<Self> {
        let positive: Vec<_> = self.positive.iter().filter(|d| keep(d)).cloned().collect();
        if positive.is_empty() {
            return None;
        }
        let negative = if filter_negatives {
            self.negative.iter().filter(|d| keep(d)).cloned().collect()
        } else {
            self.negative.clone()
        };
        Some(Self { target_class: self.target_class.clone(), positive, negative })
    }

    /// Same negatives, different positives.
    pub fn with_positive(&self, positive: Vec<Arc<Document>>) -> Result<Self, CorpusError> {
        Self::new(&self.target_class, positive, self.negative.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: DocId, label: &str, text: &str) -> Document {
        Document {
            id,
            text: text.to_owned(),
            tokens: text.split_whitespace().map(str::to_owned).collect(),
            label: label.to_owned(),
        }
    }

    #[test]
    fn split_preserves_document_count() {
        let corpus = LabeledCorpus::new(vec![doc(0, "a", "x y"), doc(1, "b", "y z"), doc(2, "a", "z")]).unwrap();
        let split = corpus.binary_split("a").unwrap();
        assert_eq!(split.positive().len(), 2);
        assert_eq!(split.negative().len(), 1);
        assert_eq!(split.len(), corpus.len());
    }

    #[test]
    fn unknown_class_is_rejected() {
        let corpus = LabeledCorpus::new(vec![doc(0, "a", "x")]).unwrap();
        assert!(matches!(
            corpus.binary_split("nope"),
            Err(CorpusError::UnknownClass(c)) if c == "nope"
        ));
    }

    #[test]
    fn duplicate_ids_and_empty_text_are_rejected() {
        assert!(matches!(
            LabeledCorpus::new(vec![doc(0, "a", "x"), doc(0, "b", "y")]),
            Err(CorpusError::DuplicateId(0))
        ));
        assert!(matches!(LabeledCorpus::new(vec![doc(3, "a", "")]), Err(CorpusError::EmptyText(3))));
    }

    #[test]
    fn retain_drops_positives_and_optionally_negatives() {
        let corpus = LabeledCorpus::new(vec![doc(0, "a", "hit"), doc(1, "a", "miss"), doc(2, "b", "hit")]).unwrap();
        let split = corpus.binary_split("a").unwrap();
        let kept = split.retain(true, |d| d.text != "hit").unwrap();
        assert_eq!(kept.positive().len(), 1);
        assert!(kept.negative().is_empty());
        let kept = split.retain(false, |d| d.text != "hit").unwrap();
        assert_eq!(kept.negative().len(), 1);
        assert!(split.retain(true, |_| false).is_none());
    }
}
