//! Word vectors: loading, cosine similarity, similarity-weighted sampling of
//! replacement words, document vectors for clustering, and a co-occurrence
//! based fallback model for when no pre-trained vectors are available.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use rand::Rng;
use thiserror::Error;

use crate::corpus::Document;
use crate::num::Real;

/// Floor applied to similarities before they are used as sampling weights.
pub const SIMILARITY_FLOOR: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: expected {expected} components, found {found}")]
    Arity { line: usize, expected: usize, found: usize },
    #[error("line {line}: zero vector for `{word}`")]
    ZeroVector { line: usize, word: String },
    #[error("header declares {declared} words but the file has {found}")]
    WordCount { declared: usize, found: usize },
    #[error("`{0}` is out of vocabulary")]
    OutOfVocabulary(String),
    #[error("no candidate words to choose from")]
    NoCandidates,
    #[error("cannot build embeddings: {0}")]
    Build(String),
}

/// Word vectors of a fixed dimension. No stored vector is all zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable<T> {
    dimension: usize,
    words: Vec<String>,
    vectors: Vec<Vec<T>>,
    norms: Vec<T>,
    lookup: HashMap<String, usize>,
}

/// Mean of the in-vocabulary token vectors of a document.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentVector<T> {
    pub values: Vec<T>,
    /// Number of tokens that had a vector.
    pub in_vocabulary: usize,
}

impl<T> DocumentVector<T> {
    /// True when no token had a vector; `values` is then all zeros.
    pub fn is_oov(&self) -> bool {
        self.in_vocabulary == 0
    }
}

impl<T: Real> EmbeddingTable<T> {
    pub fn new(dimension: usize) -> Self {
        Self { dimension, words: Vec::new(), vectors: Vec::new(), norms: Vec::new(), lookup: HashMap::new() }
    }

    pub fn from_vectors<I, S>(dimension: usize, entries: I) -> Result<Self, EmbeddingError>
    where
        I: IntoIterator<Item = (S, Vec<T>)>,
        S: Into<String>,
    {
        let mut table = Self::new(dimension);
        for (n, (word, vector)) in entries.into_iter().enumerate() {
            table.insert_at_line(word.into(), vector, n + 1)?;
        }
        Ok(table)
    }

    /// Inserts or replaces a vector. Returns true when `word` was already present.
    pub fn insert(&mut self, word: impl Into<String>, vector: Vec<T>) -> Result<bool, EmbeddingError> {
        self.insert_at_line(word.into(), vector, 0)
    }

    fn insert_at_line(&mut self, word: String, vector: Vec<T>, line: usize) -> Result<bool, EmbeddingError> {
        if vector.len() != self.dimension {
            return Err(EmbeddingError::Arity { line, expected: self.dimension, found: vector.len() });
        }
        let norm = vector.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(EmbeddingError::ZeroVector { line, word });
        }
        if let Some(&slot) = self.lookup.get(&word) {
            self.vectors[slot] = vector;
            self.norms[slot] = norm;
            return Ok(true);
        }
        self.lookup.insert(word.clone(), self.words.len());
        self.words.push(word);
        self.vectors.push(vector);
        self.norms.push(norm);
        Ok(false)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.lookup.contains_key(word)
    }

    pub fn get(&self, word: &str) -> Option<&[T]> {
        self.lookup.get(word).map(|&i| self.vectors[i].as_slice())
    }

    /// Words in insertion order.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    fn slot(&self, word: &str) -> Result<usize, EmbeddingError> {
        self.lookup.get(word).copied().ok_or_else(|| EmbeddingError::OutOfVocabulary(word.to_owned()))
    }

    /// `dot(v1, v2) / (|v1| |v2|)`, clamped to `[-1, 1]`.
    pub fn cosine_similarity(&self, w1: &str, w2: &str) -> Result<T, EmbeddingError> {
        let (a, b) = (self.slot(w1)?, self.slot(w2)?);
        let dot: T = self.vectors[a].iter().zip(&self.vectors[b]).map(|(&x, &y)| x * y).sum();
        let cos = dot / (self.norms[a] * self.norms[b]);
        Ok(cos.max(-T::one()).min(T::one()))
    }

    /// Sampling weights for `candidates` relative to `anchor`: cosine
    /// similarity floored at [`SIMILARITY_FLOOR`]. Out-of-vocabulary
    /// candidates get the floor; an out-of-vocabulary anchor gives every
    /// candidate the floor.
    pub fn similarity_weights<S: AsRef<str>>(&self, anchor: &str, candidates: &[S]) -> Vec<T> {
        let floor = T::lit(SIMILARITY_FLOOR);
        candidates
            .iter()
            .map(|c| match self.cosine_similarity(anchor, c.as_ref()) {
                Ok(sim) => sim.max(floor),
                Err(_) => floor,
            })
            .collect()
    }

    /// Normalized [`similarity_weights`](Self::similarity_weights).
    pub fn choice_probabilities<S: AsRef<str>>(&self, anchor: &str, candidates: &[S]) -> Vec<T> {
        let weights = self.similarity_weights(anchor, candidates);
        let total: T = weights.iter().copied().sum();
        weights.into_iter().map(|w| w / total).collect()
    }

    /// Draws one candidate with probability proportional to its floored
    /// similarity to `anchor`.
    pub fn similarity_weighted_choice<'c, S, R>(
        &self,
        anchor: &str,
        candidates: &'c [S],
        rng: &mut R,
    ) -> Result<&'c str, EmbeddingError>
    where
        S: AsRef<str>,
        R: Rng + ?Sized,
    {
        if candidates.is_empty() {
            return Err(EmbeddingError::NoCandidates);
        }
        let weights: Vec<f64> = self.similarity_weights(anchor, candidates).into_iter().map(Real::as_f64).collect();
        let total: f64 = weights.iter().sum();
        let mut target = rng.random::<f64>() * total;
        for (candidate, w) in candidates.iter().zip(&weights) {
            if target < *w {
                return Ok(candidate.as_ref());
            }
            target -= w;
        }
        Ok(candidates[candidates.len() - 1].as_ref())
    }

    pub fn document_vector(&self, doc: &Document) -> DocumentVector<T> {
        let mut values = vec![T::zero(); self.dimension];
        let mut in_vocabulary = 0usize;
        for token in &doc.tokens {
            if let Some(v) = self.get(token) {
                for (acc, &x) in values.iter_mut().zip(v) {
                    *acc += x;
                }
                in_vocabulary += 1;
            }
        }
        if in_vocabulary > 0 {
            let n = T::from_usize(in_vocabulary).expect("count");
            values.iter_mut().for_each(|x| *x /= n);
        }
        DocumentVector { values, in_vocabulary }
    }
}

/// Loads the whitespace-delimited text format (`<count> <dimension>` header,
/// then one word and its components per line). Gzip input is detected from
/// its magic bytes.
pub fn load_embeddings<T: Real>(path: &Path) -> Result<EmbeddingTable<T>, EmbeddingError> {
    let io_err = |source| EmbeddingError::Io { path: path.display().to_string(), source };
    let mut file = File::open(path).map_err(io_err)?;
    let mut magic = [0u8; 2];
    let n = file.read(&mut magic).map_err(io_err)?;
    let file = File::open(path).map_err(io_err)?;
    if n == 2 && magic == [0x1f, 0x8b] {
        read_embeddings(BufReader::new(GzDecoder::new(file)))
    } else {
        read_embeddings(BufReader::new(file))
    }
}

pub fn read_embeddings<T: Real, R: BufRead>(reader: R) -> Result<EmbeddingTable<T>, EmbeddingError> {
    let mut lines = reader.lines().enumerate();
    let read_err = |line: usize, e: std::io::Error| EmbeddingError::Format { line, message: e.to_string() };
    let (declared, dimension) = match lines.next() {
        Some((_, line)) => {
            let line = line.map_err(|e| read_err(1, e))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| s.parse::<usize>().ok();
            match fields.as_slice() {
                [count, dim] => match (parse(count), parse(dim)) {
                    (Some(c), Some(d)) if d > 0 => (c, d),
                    _ => return Err(format_err(1, "header must be `<count> <dimension>`")),
                },
                _ => return Err(format_err(1, "header must be `<count> <dimension>`")),
            }
        }
        None => return Err(format_err(1, "missing header")),
    };

    let mut table = EmbeddingTable::new(dimension);
    let mut rows = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| read_err(line_no, e))?;
        let mut fields = line.split_whitespace();
        let Some(word) = fields.next() else {
            continue;
        };
        let values = fields
            .map(|f| f.parse::<f64>().map(T::lit).map_err(|_| format_err(line_no, &format!("bad number `{f}`"))))
            .collect::<Result<Vec<T>, _>>()?;
        if values.len() != dimension {
            return Err(EmbeddingError::Arity { line: line_no, expected: dimension, found: values.len() });
        }
        rows += 1;
        if table.insert_at_line(word.to_owned(), values, line_no)? {
            log::warn!("line {line_no}: duplicate word `{word}`, keeping the later vector");
        }
    }
    if rows != declared {
        return Err(EmbeddingError::WordCount { declared, found: rows });
    }
    Ok(table)
}

fn format_err(line: usize, message: &str) -> EmbeddingError {
    EmbeddingError::Format { line, message: message.to_owned() }
}

/// Writes `table` in the text format read by [`read_embeddings`].
pub fn write_embeddings<T: Real>(table: &EmbeddingTable<T>, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{} {}", table.len(), table.dimension())?;
    for (word, vector) in table.words.iter().zip(&table.vectors) {
        write!(out, "{word}")?;
        for x in vector {
            write!(out, " {x}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Positive-PMI co-occurrence vectors over `docs`.
///
/// Context features are the `dimension_cap` most frequent words (ties broken
/// lexicographically); co-occurrence is counted within `window` tokens on
/// either side. Words whose vector would be all zeros are left out.
pub fn build_fallback_embeddings<'a, T, D>(
    docs: D,
    window: usize,
    dimension_cap: usize,
) -> Result<EmbeddingTable<T>, EmbeddingError>
where
    T: Real,
    D: IntoIterator<Item = &'a Document>,
{
    if window == 0 {
        return Err(EmbeddingError::Build("window must be at least 1".into()));
    }
    if dimension_cap == 0 {
        return Err(EmbeddingError::Build("dimension cap must be at least 1".into()));
    }
    let docs: Vec<&Document> = docs.into_iter().collect();
    let mut freq: HashMap<&str, u64> = HashMap::new();
    for doc in &docs {
        for t in &doc.tokens {
            *freq.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    if freq.is_empty() {
        return Err(EmbeddingError::Build("corpus has no tokens".into()));
    }
    let mut by_freq: Vec<(&str, u64)> = freq.iter().map(|(w, c)| (*w, *c)).collect();
    by_freq.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let contexts: HashMap<&str, usize> =
        by_freq.iter().take(dimension_cap).enumerate().map(|(i, (w, _))| (*w, i)).collect();
    let dimension = contexts.len();

    let mut cooc: HashMap<&str, Vec<u64>> = HashMap::new();
    for doc in &docs {
        let tokens = &doc.tokens;
        for (i, word) in tokens.iter().enumerate() {
            let lo = i.saturating_sub(window);
            let hi = (i + window).min(tokens.len() - 1);
            for (j, ctx) in tokens.iter().enumerate().take(hi + 1).skip(lo) {
                if j == i {
                    continue;
                }
                if let Some(&c) = contexts.get(ctx.as_str()) {
                    cooc.entry(word.as_str()).or_insert_with(|| vec![0; dimension])[c] += 1;
                }
            }
        }
    }

    let mut col_sums = vec![0u64; dimension];
    let mut total = 0u64;
    for row in cooc.values() {
        for (c, &n) in row.iter().enumerate() {
            col_sums[c] += n;
            total += n;
        }
    }
    let mut words: Vec<&str> = cooc.keys().copied().collect();
    words.sort_unstable();

    let mut table = EmbeddingTable::new(dimension);
    let total = total as f64;
    for word in words {
        let row = &cooc[word];
        let row_sum: u64 = row.iter().sum();
        if row_sum == 0 {
            continue;
        }
        let vector: Vec<T> = row
            .iter()
            .zip(&col_sums)
            .map(|(&n, &col)| {
                if n == 0 {
                    return T::zero();
                }
                let pmi = (n as f64 * total / (row_sum as f64 * col as f64)).ln();
                T::lit(pmi.max(0.0))
            })
            .collect();
        if vector.iter().any(|&x| x > T::zero()) {
            table.insert(word, vector)?;
        }
    }
    Ok(table)
}
