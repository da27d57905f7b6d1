//! Deterministic generator for labeled corpora with planted class patterns.
//!
//! Each document draws a class by weight, a run of background words, the
//! class's context words at random positions, and one contiguous planted
//! segment: one word from each `require` group, in order, separated by
//! `gap[0]..=gap[1]` background words. Background words never include any
//! marker word (required, forbidden or context word of any class), so a
//! class's forbidden words only enter a document through another class's
//! pattern.
//!
//! Spec files are TOML:
//!
//! ```toml
//! documents = 1000
//! length = [6, 12]
//! label_noise = 0.0
//! vocabulary = ["fever", "cough", "child", "adult"]
//! generated_vocabulary = 200
//!
//! [[class]]
//! name = "child_fever"
//! require = [["fever", "cough"], ["child"]]
//! gap = [0, 1]
//! forbid = ["adult"]
//! ```

use std::collections::{BTreeSet, HashSet};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CorpusError, Document, LabeledCorpus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub documents: usize,
    /// Inclusive range of background words per document.
    #[serde(default = "default_length")]
    pub length: [usize; 2],
    #[serde(default)]
    pub label_noise: f64,
    #[serde(default)]
    pub vocabulary: Vec<String>,
    /// Number of filler words `w000`, `w001`, ... appended to `vocabulary`.
    #[serde(default)]
    pub generated_vocabulary: usize,
    #[serde(rename = "class")]
    pub classes: Vec<ClassPattern>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassPattern {
    pub name: String,
    #[serde(default = "default_weight")]
    pub weight: f64,
    #[serde(default)]
    pub require: Vec<Vec<String>>,
    /// Inclusive range of background words between consecutive required words.
    #[serde(default = "default_gap")]
    pub gap: [usize; 2],
    #[serde(default)]
    pub forbid: Vec<String>,
    #[serde(default)]
    pub context: Vec<String>,
    #[serde(default)]
    pub context_count: usize,
}

fn default_length() -> [usize; 2] {
    [6, 12]
}

fn default_weight() -> f64 {
    1.0
}

fn default_gap() -> [usize; 2] {
    [0, 3]
}

impl SynthSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, CorpusError> {
        toml::from_str(text).map_err(|e| CorpusError::InvalidSpec(e.to_string()))
    }

    /// Explicit vocabulary followed by the generated filler words.
    pub fn full_vocabulary(&self) -> Vec<String> {
        let mut words = self.vocabulary.clone();
        let taken: HashSet<String> = words.iter().cloned().collect();
        words.extend((0..self.generated_vocabulary).map(|i| format!("w{i:03}")).filter(|w| !taken.contains(w)));
        words
    }

    fn marker_words(&self) -> BTreeSet<&str> {
        let mut markers = BTreeSet::new();
        for class in &self.classes {
            markers.extend(class.require.iter().flatten().map(String::as_str));
            markers.extend(class.forbid.iter().map(String::as_str));
            markers.extend(class.context.iter().map(String::as_str));
        }
        markers
    }

    fn validate(&self) -> Result<Vec<String>, CorpusError> {
        let invalid = |msg: String| Err(CorpusError::InvalidSpec(msg));
        if self.documents == 0 {
            return invalid("documents must be at least 1".into());
        }
        if self.length[0] > self.length[1] {
            return invalid(format!("length range {:?} is empty", self.length));
        }
        if !(0.0..=1.0).contains(&self.label_noise) {
            return invalid(format!("label_noise {} outside [0, 1]", self.label_noise));
        }
        if self.classes.is_empty() {
            return invalid("at least one [[class]] block is required".into());
        }
        let vocabulary: HashSet<String> = self.full_vocabulary().into_iter().collect();
        let mut names = HashSet::new();
        for class in &self.classes {
            if class.name.is_empty() || class.name.contains(['\t', '\n']) {
                return invalid(format!("bad class name {:?}", class.name));
            }
            if !names.insert(class.name.as_str()) {
                return invalid(format!("class `{}` declared twice", class.name));
            }
            if !(class.weight.is_finite() && class.weight > 0.0) {
                return invalid(format!("class `{}` needs a positive weight", class.name));
            }
            if class.gap[0] > class.gap[1] {
                return invalid(format!("class `{}` has an empty gap range", class.name));
            }
            if class.require.iter().any(Vec::is_empty) {
                return invalid(format!("class `{}` has an empty require group", class.name));
            }
            if class.context_count > 0 && class.context.is_empty() {
                return invalid(format!("class `{}` has context_count but no context", class.name));
            }
            for word in class.require.iter().flatten().chain(&class.forbid).chain(&class.context) {
                if !vocabulary.contains(word) {
                    return invalid(format!("class `{}` uses `{word}`, which is not in the vocabulary", class.name));
                }
            }
            let own: HashSet<&String> = class.require.iter().flatten().chain(&class.context).collect();
            if let Some(word) = class.forbid.iter().find(|w| own.contains(w)) {
                return invalid(format!("class `{}` both uses and forbids `{word}`", class.name));
            }
        }
        let markers = self.marker_words();
        let background: Vec<String> =
            self.full_vocabulary().into_iter().filter(|w| !markers.contains(w.as_str())).collect();
        if background.is_empty() && self.length[1] > 0 {
            return invalid("no background words left after removing marker words".into());
        }
        Ok(background)
    }
}

/// Generates a corpus from `spec`. Pure function of `(spec, seed)`.
pub fn generate_synthetic_corpus(spec: &SynthSpec, seed: u64) -> Result<LabeledCorpus, CorpusError> {
    let background = spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = WeightedIndex::new(spec.classes.iter().map(|c| c.weight))
        .map_err(|e| CorpusError::InvalidSpec(e.to_string()))?;

    let mut documents = Vec::with_capacity(spec.documents);
    for id in 0..spec.documents {
        let class_idx = weights.sample(&mut rng);
        let class = &spec.classes[class_idx];
        let length = rng.random_range(spec.length[0]..=spec.length[1]);
        let mut tokens: Vec<String> =
            (0..length).map(|_| background.choose(&mut rng).expect("background").clone()).collect();
        for _ in 0..class.context_count {
            let word = class.context.choose(&mut rng).expect("context").clone();
            let at = rng.random_range(0..=tokens.len());
            tokens.insert(at, word);
        }
        let mut segment = Vec::new();
        for (g, group) in class.require.iter().enumerate() {
            if g > 0 {
                let gap = rng.random_range(class.gap[0]..=class.gap[1]);
                segment.extend((0..gap).map(|_| background.choose(&mut rng).expect("background").clone()));
            }
            segment.push(group.choose(&mut rng).expect("group").clone());
        }
        let at = rng.random_range(0..=tokens.len());
        tokens.splice(at..at, segment);
        if tokens.is_empty() {
            tokens.push(background.choose(&mut rng).expect("background").clone());
        }

        let mut label = class.name.clone();
        if spec.classes.len() > 1 && rng.random::<f64>() < spec.label_noise {
            let mut other = rng.random_range(0..spec.classes.len() - 1);
            if other >= class_idx {
                other += 1;
            }
            label = spec.classes[other].name.clone();
        }
        documents.push(Document { id, text: tokens.join(" "), tokens, label });
    }
    LabeledCorpus::new(documents)
}
