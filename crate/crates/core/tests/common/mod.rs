#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::Rng;
use regex::{Regex, RegexBuilder};
use rxlearn::corpus::{generate_synthetic_corpus, BinaryDataset, LabeledCorpus, SynthSpec};
use rxlearn::regex_model::{decode, Chain, Classifier, Element, Expr, Gap, OuterOr, RegexRule};
use rxlearn::{build_fallback_embeddings, EmbeddingTable};

pub const CHILD_FEVER: &str = include_str!("../../../../data/child_fever.toml");
pub const BIMODAL: &str = include_str!("../../../../data/bimodal.toml");

pub fn synth(spec: &str, seed: u64) -> LabeledCorpus {
    generate_synthetic_corpus(&SynthSpec::from_toml_str(spec).expect("spec parses"), seed).expect("corpus")
}

/// Character spans `(start, end)` where `expr` occurs in `chars`, as a bit
/// set with bit `start * (n + 1) + end` for a text of `n <= 10` chars.
///
/// A negation occupies no characters: it yields the empty span at every
/// position when its operand occurs nowhere in the text, and nothing
/// otherwise.
pub fn spans(expr: &Expr, chars: &[char]) -> u128 {
    let n = chars.len();
    assert!(n <= 10, "span oracle handles at most 10 chars");
    let bit = |s: usize, e: usize| 1u128 << (s * (n + 1) + e);
    match expr {
        Expr::Word(w) => {
            let w: Vec<char> = w.chars().collect();
            let mut out = 0;
            if w.is_empty() || w.len() > n {
                return out;
            }
            for s in 0..=n - w.len() {
                if chars[s..s + w.len()] == w[..] {
                    out |= bit(s, s + w.len());
                }
            }
            out
        }
        Expr::Or(children) => children.iter().fold(0, |acc, c| acc | spans(c, chars)),
        Expr::And { children, gaps } => {
            let mut acc = spans(&children[0], chars);
            for (child, gap) in children[1..].iter().zip(gaps) {
                let right = spans(child, chars);
                let mut next = 0;
                for (s1, e1) in pairs(acc, n) {
                    for (s2, e2) in pairs(right, n) {
                        let ok = s2 >= e1
                            && match gap {
                                Gap::Unrestricted => true,
                                Gap::AtMost(b) => s2 - e1 <= *b as usize,
                            };
                        if ok {
                            next |= bit(s1, e2);
                        }
                    }
                }
                acc = next;
            }
            acc
        }
        Expr::Not(inner) => {
            if spans(inner, chars) == 0 {
                (0..=n).fold(0, |acc, p| acc | bit(p, p))
            } else {
                0
            }
        }
    }
}

fn pairs(mut mask: u128, n: usize) -> impl Iterator<Item = (usize, usize)> {
    std::iter::from_fn(move || {
        let i = (mask != 0).then(|| mask.trailing_zeros() as usize)?;
        mask &= mask - 1;
        Some((i / (n + 1), i % (n + 1)))
    })
}

pub fn expr_matches(expr: &Expr, text: &str) -> bool {
    let chars: Vec<char> = text.chars().collect();
    spans(expr, &chars) != 0
}

fn random_gap<R: Rng>(rng: &mut R, bounds: &[u32]) -> Gap {
    if rng.random_bool(0.4) {
        Gap::Unrestricted
    } else {
        Gap::AtMost(*bounds.choose(rng).expect("bounds"))
    }
}

/// Negation-free tree of depth at most `depth`.
pub fn random_positive_expr<R: Rng>(rng: &mut R, words: &[&str], depth: usize, bounds: &[u32]) -> Expr {
    if depth == 0 || rng.random_bool(0.3) {
        return Expr::word(*words.choose(rng).expect("words"));
    }
    let n = rng.random_range(2..=3);
    let children: Vec<Expr> = (0..n).map(|_| random_positive_expr(rng, words, depth - 1, bounds)).collect();
    if rng.random_bool(0.5) {
        Expr::or(children)
    } else {
        let gaps = (0..n - 1).map(|_| random_gap(rng, bounds)).collect();
        Expr::and_with(children, gaps)
    }
}

/// Random tree in the rule-expressible fragment: a negation-free tree, a
/// double negation of one, or a conjunction mixing such trees with negated
/// ones.
pub fn random_expr<R: Rng>(rng: &mut R, words: &[&str], bounds: &[u32]) -> Expr {
    match rng.random_range(0..4) {
        0 => random_positive_expr(rng, words, 3, bounds),
        1 => Expr::not(Expr::not(random_positive_expr(rng, words, 2, bounds))),
        _ => {
            let n = rng.random_range(2..=4);
            let anchor = rng.random_range(0..n);
            let children: Vec<Expr> = (0..n)
                .map(|i| {
                    let e = random_positive_expr(rng, words, 2, bounds);
                    if i != anchor && rng.random_bool(0.5) {
                        Expr::not(e)
                    } else {
                        e
                    }
                })
                .collect();
            let gaps = (0..n - 1).map(|_| random_gap(rng, bounds)).collect();
            Expr::and_with(children, gaps)
        }
    }
}

pub fn random_element<R: Rng>(rng: &mut R, words: &[&str]) -> Element {
    if rng.random_bool(0.3) {
        let k = rng.random_range(2..=3);
        Element::any_of(words.choose_multiple(rng, k).copied())
    } else {
        Element::word(*words.choose(rng).expect("words"))
    }
}

pub fn random_chain<R: Rng>(rng: &mut R, words: &[&str], bounds: &[u32]) -> Chain {
    let n = rng.random_range(1..=3);
    let elements = (0..n).map(|_| random_element(rng, words)).collect();
    let gaps = (0..n - 1).map(|_| random_gap(rng, bounds)).collect();
    Chain::new(elements, gaps)
}

pub fn random_outer<R: Rng>(rng: &mut R, words: &[&str], bounds: &[u32], max: usize) -> OuterOr {
    let n = rng.random_range(0..=max);
    OuterOr::new((0..n).map(|_| random_chain(rng, words, bounds)).collect())
}

pub fn random_rule<R: Rng>(rng: &mut R, words: &[&str], bounds: &[u32]) -> RegexRule {
    let mut positive = random_outer(rng, words, bounds, 3);
    if positive.is_empty() && rng.random_bool(0.8) {
        positive.push(random_chain(rng, words, bounds));
    }
    RegexRule::new(positive, random_outer(rng, words, bounds, 2))
}

pub fn random_classifier<R: Rng>(rng: &mut R, words: &[&str], bounds: &[u32]) -> Classifier {
    let m = rng.random_range(1..=3);
    Classifier::new((0..m).map(|_| random_rule(rng, words, bounds)).collect())
}

pub fn random_text<R: Rng>(rng: &mut R, alphabet: &[char], max_len: usize) -> String {
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| *alphabet.choose(rng).expect("alphabet")).collect()
}

/// Every string over `alphabet` of length at most `max_len`.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * alphabet.len());
        for s in &frontier {
            for &c in alphabet {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Standard-engine oracle built from the decoded patterns.
pub struct EngineRule {
    positive: Regex,
    negative: Regex,
}

impl EngineRule {
    pub fn new(rule: &RegexRule) -> Self {
        let decoded = decode(rule);
        let build = |p: &str| {
            RegexBuilder::new(p)
                .dot_matches_new_line(true)
                .build()
                .unwrap_or_else(|e| panic!("pattern {p:?} rejected: {e}"))
        };
        Self { positive: build(&decoded.positive), negative: build(&decoded.negative) }
    }

    pub fn is_match(&self, text: &str) -> bool {
        self.positive.is_match(text) && !self.negative.is_match(text)
    }
}

/// Two-mode task: positives are the `resp` and `joint` documents.
pub fn bimodal(seed: u64) -> (BinaryDataset, LabeledCorpus) {
    let corpus = synth(BIMODAL, seed);
    let (pos, neg): (Vec<_>, Vec<_>) =
        corpus.documents().iter().cloned().partition(|d| d.label == "resp" || d.label == "joint");
    (BinaryDataset::new("target", pos, neg).expect("dataset"), corpus)
}

pub fn fallback_embeddings(corpus: &LabeledCorpus) -> EmbeddingTable<f64> {
    build_fallback_embeddings(corpus.documents().iter().map(|d| d.as_ref()), 2, 300).expect("embeddings")
}
