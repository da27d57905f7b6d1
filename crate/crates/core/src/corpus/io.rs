//! TSV and JSONL corpus files.
//!
//! TSV: `label<TAB>text[<TAB>space-joined-tokens]`, one record per line.
//! JSONL: `{"label": ..., "text": ..., "tokens": [...]}` with `tokens` optional.
//! Blank lines are skipped. When tokens are absent they are produced by the
//! configured [`Tokenizer`].

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CorpusError, Document, LabeledCorpus, Tokenizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Tsv,
    Jsonl,
}

impl CorpusFormat {
    /// `.jsonl`/`.json` map to JSONL, everything else to TSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => CorpusFormat::Jsonl,
            _ => CorpusFormat::Tsv,
        }
    }
}

#[derive(Deserialize, Serialize)]
struct JsonRecord {
    label: String,
    text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tokens: Option<Vec<String>>,
}

pub fn load_corpus(path: &Path, format: CorpusFormat, tokenizer: &dyn Tokenizer) -> Result<LabeledCorpus, CorpusError> {
    let content =
        fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })?;
    parse_corpus(&content, format, tokenizer)
}

pub fn parse_corpus(
    content: &str,
    format: CorpusFormat,
    tokenizer: &dyn Tokenizer,
) -> Result<LabeledCorpus, CorpusError> {
    let mut documents = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (label, text, tokens) = match format {
            CorpusFormat::Tsv => parse_tsv_line(line, line_no)?,
            CorpusFormat::Jsonl => {
                let record: JsonRecord = serde_json::from_str(line)
                    .map_err(|e| CorpusError::Malformed { line: line_no, message: e.to_string() })?;
                (record.label, record.text, record.tokens)
            }
        };
        if label.is_empty() {
            return Err(malformed(line_no, "empty label"));
        }
        if text.is_empty() {
            return Err(malformed(line_no, "empty text"));
        }
        let tokens = match tokens {
            Some(tokens) => tokens.into_iter().filter(|t| tokenizer.keep(t)).collect(),
            None => tokenizer.tokenize(&text),
        };
        documents.push(Document { id: documents.len(), text, tokens, label });
    }
    if documents.is_empty() {
        return Err(CorpusError::Empty);
    }
    LabeledCorpus::new(documents)
}

fn malformed(line: usize, message: &str) -> CorpusError {
    CorpusError::Malformed { line, message: message.to_owned() }
}

fn parse_tsv_line(line: &str, line_no: usize) -> Result<(String, String, Option<Vec<String>>), CorpusError> {
    let fields: Vec<&str> = line.split('\t').collect();
    match fields.as_slice() {
        [label, text] => Ok(((*label).to_owned(), (*text).to_owned(), None)),
        [label, text, tokens] => Ok((
            (*label).to_owned(),
            (*text).to_owned(),
            Some(tokens.split(' ').filter(|t| !t.is_empty()).map(str::to_owned).collect()),
        )),
        _ => Err(CorpusError::Malformed {
            line: line_no,
            message: format!("expected 2 or 3 tab-separated fields, found {}", fields.len()),
        }),
    }
}

/// Writes `corpus` in the given format. Tokens are written only for JSONL.
pub fn write_corpus(corpus: &LabeledCorpus, out: &mut dyn Write, format: CorpusFormat) -> std::io::Result<()> {
    for doc in corpus.documents() {
        match format {
            CorpusFormat::Tsv => {
                if doc.text.contains(['\t', '\n']) || doc.label.contains(['\t', '\n']) {
                    return Err(std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("document {} cannot be written as TSV", doc.id),
                    ));
                }
                writeln!(out, "{}\t{}", doc.label, doc.text)?;
            }
            CorpusFormat::Jsonl => {
                let record =
                    JsonRecord { label: doc.label.clone(), text: doc.text.clone(), tokens: Some(doc.tokens.clone()) };
                let line = serde_json::to_string(&record).map_err(std::io::Error::other)?;
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}
