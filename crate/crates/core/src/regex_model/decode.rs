//! Rendering of rules as standard regular-expression patterns.
//!
//! A part decodes to `.*((alt1|alt2|...)).*`. Chain elements are joined by
//! `.*` for an unrestricted gap and `.{0,b}` for a bounded one. A document is
//! accepted when the positive pattern matches and the negative one does not.
//! Patterns assume `.` also matches line breaks (the `s` flag in most
//! engines).

use super::{Chain, Element, Gap, OuterOr, RegexRule};

/// Pattern used for an empty part. It matches no string.
pub const NEVER_MATCHES: &str = r"[^\s\S]";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedRule {
    pub positive: String,
    pub negative: String,
}

/// Escapes every character with a special meaning in common regex dialects.
pub fn escape_literal(word: &str) -> String {
    let mut out = String::with_capacity(word.len());
    for c in word.chars() {
        if matches!(
            c,
            '\\' | '.' | '+' | '*' | '?' | '(' | ')' | '|' | '[' | ']' | '{' | '}' | '^' | '$' | '#' | '&' | '-' | '~'
        ) {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn element(e: &Element, grouped: bool) -> String {
    match e {
        Element::Word(w) => escape_literal(w),
        Element::AnyOf(inner) => {
            let body = inner.words.iter().map(|w| escape_literal(w)).collect::<Vec<_>>().join("|");
            if grouped {
                format!("({body})")
            } else {
                body
            }
        }
    }
}

fn chain(c: &Chain) -> String {
    let grouped = c.len() > 1;
    let mut out = String::new();
    for (i, e) in c.elements.iter().enumerate() {
        if i > 0 {
            match c.gaps[i - 1] {
                Gap::Unrestricted => out.push_str(".*"),
                Gap::AtMost(b) => out.push_str(&format!(".{{0,{b}}}")),
            }
        }
        out.push_str(&element(e, grouped));
    }
    out
}

fn part(outer: &OuterOr) -> String {
    if outer.is_empty() {
        return NEVER_MATCHES.to_owned();
    }
    let alternatives: Vec<String> = outer.alternatives.iter().map(chain).collect();
    format!(".*(({})).*", alternatives.join("|"))
}

pub fn decode(rule: &RegexRule) -> DecodedRule {
    DecodedRule { positive: part(&rule.positive), negative: part(&rule.negative) }
}
