use std::collections::{BTreeSet, HashMap};

use aho_corasick::AhoCorasick;

use super::{DocId, Document};

/// Maps each vocabulary word to the sorted ids of documents whose raw text
/// contains it as a substring.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvertedIndex {
    pub postings: HashMap<String, Vec<DocId>>,
}

impl InvertedIndex {
    /// `None` when the word was not part of the indexed vocabulary.
    pub fn postings(&self, word: &str) -> Option<&[DocId]> {
        self.postings.get(word).map(Vec::as_slice)
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.postings.contains_key(word)
    }
}

pub fn build_inverted_index<'a, D, W>(docs: D, vocabulary: W) -> InvertedIndex
where
    D: IntoIterator<Item = &'a Document>,
    W: IntoIterator,
    W::Item: AsRef<str>,
{
    let words: Vec<String> =
        vocabulary.into_iter().map(|w| w.as_ref().to_owned()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut postings: HashMap<String, Vec<DocId>> = words.iter().map(|w| (w.clone(), Vec::new())).collect();
    if words.is_empty() {
        return InvertedIndex { postings };
    }
    let automaton = AhoCorasick::new(&words).expect("vocabulary automaton");
    let mut lists: Vec<Vec<DocId>> = vec![Vec::new(); words.len()];
    let mut seen = vec![usize::MAX; words.len()];
    for (n, doc) in docs.into_iter().enumerate() {
        for m in automaton.find_overlapping_iter(&doc.text) {
            let p = m.pattern().as_usize();
            if seen[p] != n {
                seen[p] = n;
                lists[p].push(doc.id);
            }
        }
    }
    for (word, mut ids) in words.into_iter().zip(lists) {
        ids.sort_unstable();
        ids.dedup();
        postings.insert(word, ids);
    }
    InvertedIndex { postings }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: DocId, text: &str) -> Document {
        Document { id, text: text.into(), tokens: vec![], label: "l".into() }
    }

    #[test]
    fn single_word_postings() {
        let docs = [doc(0, "a b"), doc(1, "c")];
        let index = build_inverted_index(&docs, ["a"]);
        assert_eq!(index.postings("a"), Some(&[0][..]));
        assert_eq!(index.postings("zzz"), None);
    }

    #[test]
    fn empty_vocabulary() {
        let docs = [doc(0, "a")];
        let index = build_inverted_index(&docs, Vec::<String>::new());
        assert!(index.postings.is_empty());
    }

    #[test]
    fn overlapping_and_nested_words() {
        let docs = [doc(5, "headache"), doc(2, "ache"), doc(9, "aaa")];
        let index = build_inverted_index(&docs, ["head", "ache", "headache", "aa"]);
        assert_eq!(index.postings("ache"), Some(&[2, 5][..]));
        assert_eq!(index.postings("headache"), Some(&[5][..]));
        assert_eq!(index.postings("aa"), Some(&[9][..]));
    }
}
