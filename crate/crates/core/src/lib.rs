//! Learn interpretable regular-expression classifiers for binary text
//! classification.
//!
//! A [`Classifier`] is a list of [`RegexRule`]s, each a positive alternation
//! of word chains minus a negative one. Rules are learned by pool-based
//! simulated annealing ([`run_psaw`]) whose moves are guided by word
//! embeddings, then decoded into ordinary regex patterns ([`decode`]).
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the `*F32` and
//! `*F64` aliases below name the concrete instantiations.

pub mod annealer;
pub mod cli;
pub mod corpus;
pub mod embeddings;
pub mod evaluator;
pub mod num;
pub mod operators;
pub mod regex_model;

pub use annealer::{
    build_initial_solution, metropolis_accept, run_psaw, run_psaw_i, run_psaw_p, temperature_at, AnnealConfig,
    PartitionMode, RoundRecord, TrainError, TrainResult,
};
pub use corpus::{
    build_inverted_index, generate_synthetic_corpus, load_corpus, BinaryDataset, Document, InvertedIndex, LabeledCorpus,
};
pub use embeddings::{build_fallback_embeddings, load_embeddings, EmbeddingTable};
pub use evaluator::{confusion_counts, metrics_from_counts, objective, ConfusionCounts, EvalMetrics, Evaluator};
pub use num::Real;
pub use operators::{mutate, MutationContext, Operator};
pub use regex_model::{
    decode, match_classifier, match_rule, normalize, validate_structure, Classifier, Expr, RegexRule,
};

pub type EmbeddingTableF32 = EmbeddingTable<f32>;
pub type EmbeddingTableF64 = EmbeddingTable<f64>;
pub type EvalMetricsF32 = EvalMetrics<f32>;
pub type EvalMetricsF64 = EvalMetrics<f64>;
pub type AnnealConfigF32 = AnnealConfig<f32>;
pub type AnnealConfigF64 = AnnealConfig<f64>;
pub type TrainResultF32 = TrainResult<f32>;
pub type TrainResultF64 = TrainResult<f64>;
pub type RoundRecordF64 = RoundRecord<f64>;
pub type MutationContextF64<'a> = MutationContext<'a, f64>;
