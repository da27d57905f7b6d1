//! The constrained regular-expression language learned by the search.
//!
//! A [`RegexRule`] is a positive part and a negative part, each an
//! [`OuterOr`] of [`Chain`]s. A chain is an ordered sequence of elements,
//! each a bare word or an [`InnerOr`] of bare words, separated by [`Gap`]s.
//! A document matches a rule when some positive chain occurs in its text and
//! no negative chain does. A [`Classifier`] matches when any of its rules
//! does.
//!
//! Structural conditions checked by [`validate_structure`] and
//! [`validate_expr`]:
//!
//! 1. at most one negation per rule, applied to the whole negative part;
//! 2. each part is a flat alternation of distinct, non-empty chains;
//! 3. an inner alternation holds distinct, non-empty words and nothing else;
//! 4. a chain has exactly one gap between consecutive elements and its bare
//!    words are non-empty.

mod decode;
mod matcher;
mod normalize;
mod serial;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use decode::{decode, escape_literal, DecodedRule, NEVER_MATCHES};
pub use matcher::{match_chain, match_classifier, match_rule, matches_outer};
pub use normalize::{normalize, to_expr, NormalizeError, MAX_ALTERNATIVES};
pub use serial::{format_rule, parse_classifier_file, parse_rule, write_classifier_file, ClassifierFile, ParseError};

/// Separation allowed between consecutive chain elements, in characters of
/// the raw text between the end of one occurrence and the start of the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gap {
    Unrestricted,
    AtMost(u32),
}

/// Alternation of bare words inside a chain element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InnerOr {
    pub words: Vec<String>,
}

impl InnerOr {
    /// Deduplicates `words`, keeping first occurrences.
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for w in words {
            let w = w.into();
            if !out.contains(&w) {
                out.push(w);
            }
        }
        Self { words: out }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.iter().any(|w| w == word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Word(String),
    AnyOf(InnerOr),
}

impl Element {
    pub fn word(w: impl Into<String>) -> Self {
        Element::Word(w.into())
    }

    /// A bare word when `words` has a single distinct entry, an inner
    /// alternation otherwise.
    pub fn any_of<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let inner = InnerOr::new(words);
        if inner.words.len() == 1 {
            Element::Word(inner.words.into_iter().next().expect("one word"))
        } else {
            Element::AnyOf(inner)
        }
    }

    pub fn words(&self) -> &[String] {
        match self {
            Element::Word(w) => std::slice::from_ref(w),
            Element::AnyOf(inner) => &inner.words,
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words().iter().any(|w| w == word)
    }
}

/// Ordered conjunction of elements with a gap between each consecutive pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub elements: Vec<Element>,
    pub gaps: Vec<Gap>,
}

impl Chain {
    pub fn single(element: Element) -> Self {
        Self { elements: vec![element], gaps: Vec::new() }
    }

    pub fn word(w: impl Into<String>) -> Self {
        Self::single(Element::word(w))
    }

    /// Builds a chain from `elements` joined by `gaps`.
    ///
    /// # Panics
    /// If `gaps.len() + 1 != elements.len()`.
    pub fn new(elements: Vec<Element>, gaps: Vec<Gap>) -> Self {
        assert_eq!(gaps.len() + 1, elements.len(), "a chain needs one gap per adjacent pair");
        Self { elements, gaps }
    }

    /// All gaps unrestricted.
    pub fn of(elements: Vec<Element>) -> Self {
        let gaps = vec![Gap::Unrestricted; elements.len().saturating_sub(1)];
        Self::new(elements, gaps)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn word_count(&self) -> usize {
        self.elements.iter().map(|e| e.words().len()).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OuterOr {
    pub alternatives: Vec<Chain>,
}

impl OuterOr {
    pub fn new(alternatives: Vec<Chain>) -> Self {
        let mut outer = Self::default();
        for chain in alternatives {
            outer.push(chain);
        }
        outer
    }

    /// Appends `chain` unless a structurally identical one is present.
    pub fn push(&mut self, chain: Chain) -> bool {
        if self.alternatives.contains(&chain) {
            false
        } else {
            self.alternatives.push(chain);
            true
        }
    }

    /// Drops repeated alternatives, keeping first occurrences.
    pub fn dedup(&mut self) {
        let alternatives = std::mem::take(&mut self.alternatives);
        for chain in alternatives {
            self.push(chain);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.alternatives.is_empty()
    }

    pub fn len(&self) -> usize {
        self.alternatives.len()
    }

    pub fn word_count(&self) -> usize {
        self.alternatives.iter().map(Chain::word_count).sum()
    }
}

/// Which side of a rule an edit applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    Positive,
    Negative,
}

/// `positive AND NOT negative`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RegexRule {
    pub positive: OuterOr,
    pub negative: OuterOr,
}

impl RegexRule {
    pub fn new(positive: OuterOr, negative: OuterOr) -> Self {
        Self { positive, negative }
    }

    pub fn part(&self, part: Part) -> &OuterOr {
        match part {
            Part::Positive => &self.positive,
            Part::Negative => &self.negative,
        }
    }

    pub fn part_mut(&mut self, part: Part) -> &mut OuterOr {
        match part {
            Part::Positive => &mut self.positive,
            Part::Negative => &mut self.negative,
        }
    }
}

/// Number of word occurrences across both parts of `rule`.
pub fn complexity(rule: &RegexRule) -> usize {
    rule.positive.word_count() + rule.negative.word_count()
}

/// Ordered list of rules; matches when any rule does.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Classifier {
    pub rules: Vec<RegexRule>,
}

impl Classifier {
    pub fn new(rules: Vec<RegexRule>) -> Self {
        Self { rules }
    }

    pub fn complexity(&self) -> usize {
        self.rules.iter().map(complexity).sum()
    }
}

/// Expression tree without the structural restrictions, used as input to
/// [`normalize`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Word(String),
    Or(Vec<Expr>),
    /// Ordered conjunction; `gaps[i]` separates `children[i]` and `children[i + 1]`.
    And {
        children: Vec<Expr>,
        gaps: Vec<Gap>,
    },
    Not(Box<Expr>),
}

impl Expr {
    pub fn word(w: impl Into<String>) -> Self {
        Expr::Word(w.into())
    }

    pub fn or(children: Vec<Expr>) -> Self {
        Expr::Or(children)
    }

    /// Ordered conjunction with unrestricted gaps.
    pub fn and(children: Vec<Expr>) -> Self {
        let gaps = vec![Gap::Unrestricted; children.len().saturating_sub(1)];
        Expr::And { children, gaps }
    }

    pub fn and_with(children: Vec<Expr>, gaps: Vec<Gap>) -> Self {
        Expr::And { children, gaps }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(child: Expr) -> Self {
        Expr::Not(Box::new(child))
    }
}

/// One violated structural condition, located by a `/`-separated path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: u8,
    pub path: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn conditions(&self) -> Vec<u8> {
        let mut c: Vec<u8> = self.violations.iter().map(|v| v.condition).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    fn push(&mut self, condition: u8, path: String, detail: impl Into<String>) {
        self.violations.push(Violation { condition, path, detail: detail.into() });
    }
}

pub fn validate_structure(rule: &RegexRule) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (label, outer) in [("P", &rule.positive), ("N", &rule.negative)] {
        for (a, chain) in outer.alternatives.iter().enumerate() {
            let path = format!("{label}/{a}");
            if outer.alternatives[..a].contains(chain) {
                report.push(2, path.clone(), "duplicate alternative");
            }
            if chain.elements.is_empty() {
                report.push(2, path.clone(), "empty chain");
            }
            if chain.gaps.len() + 1 != chain.elements.len().max(1) {
                report.push(
                    4,
                    path.clone(),
                    format!("{} elements but {} gaps", chain.elements.len(), chain.gaps.len()),
                );
            }
            for (e, element) in chain.elements.iter().enumerate() {
                let path = format!("{path}/{e}");
                match element {
                    Element::Word(w) if w.is_empty() => report.push(4, path, "empty word"),
                    Element::Word(_) => {}
                    Element::AnyOf(inner) => {
                        if inner.words.is_empty() {
                            report.push(3, path.clone(), "empty inner alternation");
                        }
                        for (i, w) in inner.words.iter().enumerate() {
                            if w.is_empty() {
                                report.push(3, format!("{path}/{i}"), "empty word");
                            }
                            if inner.words[..i].contains(w) {
                                report.push(3, format!("{path}/{i}"), format!("duplicate word `{w}`"));
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

/// Checks whether an unconstrained tree already has the constrained shape.
pub fn validate_expr(expr: &Expr) -> ValidationReport {
    let mut report = ValidationReport::default();
    let nots = count_nots(expr);
    if nots > 1 {
        report.push(1, String::new(), format!("{nots} negations"));
    }
    walk_expr(expr, "", Position::Root, &mut report);
    report
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Position {
    Root,
    RootConjunct,
    Outer,
    InsideChain,
    Negated,
}

fn count_nots(expr: &Expr) -> usize {
    match expr {
        Expr::Word(_) => 0,
        Expr::Or(c) | Expr::And { children: c, .. } => c.iter().map(count_nots).sum(),
        Expr::Not(inner) => 1 + count_nots(inner),
    }
}

fn walk_expr(expr: &Expr, path: &str, pos: Position, report: &mut ValidationReport) {
    let child_path = |i: usize| format!("{path}/{i}");
    match expr {
        Expr::Word(w) => {
            if w.is_empty() {
                report.push(4, path.to_owned(), "empty word");
            }
        }
        Expr::Not(inner) => {
            if !matches!(pos, Position::Root | Position::RootConjunct) {
                report.push(1, path.to_owned(), "negation below the rule's top level");
            }
            walk_expr(inner, &format!("{path}/0"), Position::Negated, report);
        }
        Expr::Or(children) => {
            if pos == Position::InsideChain {
                for (i, c) in children.iter().enumerate() {
                    if !matches!(c, Expr::Word(_) | Expr::Or(_)) {
                        report.push(3, child_path(i), "inner alternation contains a nested function");
                    }
                }
            }
            let next = if pos == Position::InsideChain { Position::InsideChain } else { Position::Outer };
            for (i, c) in children.iter().enumerate() {
                walk_expr(c, &child_path(i), next, report);
            }
        }
        Expr::And { children, gaps } => {
            if gaps.len() + 1 != children.len().max(1) {
                report.push(4, path.to_owned(), "gap count does not match children");
            }
            let at_root = pos == Position::Root;
            let spans = children.iter().filter(|c| !matches!(c, Expr::Not(_))).count();
            let has_not = spans < children.len();
            for (i, c) in children.iter().enumerate() {
                let p = match c {
                    Expr::Not(_) if at_root => Position::RootConjunct,
                    // `P AND NOT N` at the root: P is a whole positive part.
                    _ if at_root && has_not && spans == 1 => Position::Outer,
                    _ => Position::InsideChain,
                };
                walk_expr(c, &child_path(i), p, report);
            }
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::Positive => f.write_str("positive"),
            Part::Negative => f.write_str("negative"),
        }
    }
}
