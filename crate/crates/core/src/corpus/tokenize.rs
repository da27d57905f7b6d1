use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// Splits raw text into tokens. Implement this to plug in a word segmenter.
pub trait Tokenizer: Send + Sync {
    fn tokenize(&self, text: &str) -> Vec<String>;

    /// Whether a token supplied pre-segmented in the corpus file is kept.
    fn keep(&self, _token: &str) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenizerMode {
    #[default]
    Whitespace,
    /// One token per non-whitespace character; useful for unsegmented CJK.
    PerCharacter,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenizerConfig {
    pub mode: TokenizerMode,
    pub stop_words: HashSet<String>,
}

impl TokenizerConfig {
    pub fn new(mode: TokenizerMode) -> Self {
        Self { mode, stop_words: HashSet::new() }
    }

    pub fn with_stop_words(mut self, words: impl IntoIterator<Item = String>) -> Self {
        self.stop_words.extend(words);
        self
    }
}

impl Tokenizer for TokenizerConfig {
    fn tokenize(&self, text: &str) -> Vec<String> {
        tokenize(text, self)
    }

    fn keep(&self, token: &str) -> bool {
        !self.stop_words.contains(token)
    }
}

pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let keep = |t: &String| !config.stop_words.contains(t);
    match config.mode {
        TokenizerMode::Whitespace => text.split_whitespace().map(str::to_owned).filter(keep).collect(),
        TokenizerMode::PerCharacter => {
            text.chars().filter(|c| !c.is_whitespace()).map(String::from).filter(keep).collect()
        }
    }
}

/// Reads a stop-word list: one word per line, blank lines ignored.
pub fn load_stop_words(path: &Path) -> Result<HashSet<String>, CorpusError> {
    let text =
        fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::to_owned).collect())
}
