//! Text format for trained classifiers.
//!
//! ```text
//! # rxlearn classifier
//! class "child_fever"
//! rules 1
//! rule 1
//! positive .*((fever.{0,10}child)).*
//! negative .*((adult)).*
//! ast P{("fever" ~10 "child")} N{("adult")}
//! ```
//!
//! The `ast` line is authoritative; the pattern lines are informational and
//! ignored on load. Grammar of the `ast` value, with whitespace allowed
//! between tokens and `STRING` a JSON string literal:
//!
//! ```text
//! rule    := "P" outer "N" outer
//! outer   := "{" [ chain ( "," chain )* ] "}"
//! chain   := "(" element ( gap element )* ")"
//! gap     := "*" | "~" UINT
//! element := STRING | "[" STRING ( "|" STRING )* "]"
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{decode, validate_structure, Chain, Classifier, Element, Gap, InnerOr, OuterOr, RegexRule};

const MAGIC: &str = "# rxlearn classifier";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifierFile {
    pub class: String,
    pub classifier: Classifier,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn quote(word: &str) -> String {
    serde_json::to_string(word).expect("string serializes")
}

/// Canonical bracketed form of `rule`.
pub fn format_rule(rule: &RegexRule) -> String {
    let mut out = String::new();
    for (label, outer) in [("P", &rule.positive), ("N", &rule.negative)] {
        if label == "N" {
            out.push(' ');
        }
        out.push_str(label);
        out.push('{');
        for (a, chain) in outer.alternatives.iter().enumerate() {
            if a > 0 {
                out.push_str(", ");
            }
            out.push('(');
            for (i, e) in chain.elements.iter().enumerate() {
                if i > 0 {
                    match chain.gaps[i - 1] {
                        Gap::Unrestricted => out.push_str(" * "),
                        Gap::AtMost(b) => {
                            let _ = write!(out, " ~{b} ");
                        }
                    }
                }
                match e {
                    Element::Word(w) => out.push_str(&quote(w)),
                    Element::AnyOf(inner) => {
                        let words: Vec<String> = inner.words.iter().map(|w| quote(w)).collect();
                        let _ = write!(out, "[{}]", words.join("|"));
                    }
                }
            }
            out.push(')');
        }
        out.push('}');
    }
    out
}

pub fn write_classifier_file(file: &ClassifierFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "class {}", quote(&file.class));
    let _ = writeln!(out, "rules {}", file.classifier.rules.len());
    for (i, rule) in file.classifier.rules.iter().enumerate() {
        let decoded = decode(rule);
        let _ = writeln!(out, "rule {}", i + 1);
        let _ = writeln!(out, "positive {}", decoded.positive);
        let _ = writeln!(out, "negative {}", decoded.negative);
        let _ = writeln!(out, "ast {}", format_rule(rule));
    }
    out
}

struct Cursor<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Cursor<'s> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, String> {
        Err(format!("column {}: {}", self.pos + 1, message.into()))
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(found) => self.fail(format!("expected `{c}`, found `{found}`")),
            None => self.fail(format!("expected `{c}`, found end of input")),
        }
    }

    fn string(&mut self) -> Result<String, String> {
        if self.peek() != Some('"') {
            return self.fail("expected a quoted word");
        }
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = start + 1;
        while i < bytes.len() {
            match bytes[i] {
                b'\\' => i += 2,
                b'"' => break,
                _ => i += 1,
            }
        }
        if i >= bytes.len() {
            return self.fail("unterminated string");
        }
        let word: String =
            serde_json::from_str(&self.src[start..=i]).map_err(|e| format!("column {}: {e}", start + 1))?;
        self.pos = i + 1;
        Ok(word)
    }

    fn uint(&mut self) -> Result<u32, String> {
        self.skip_ws();
        let digits = self.src[self.pos..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return self.fail("expected a distance bound");
        }
        let value =
            self.src[self.pos..self.pos + digits].parse().or_else(|_| self.fail("distance bound out of range"))?;
        self.pos += digits;
        Ok(value)
    }

    fn element(&mut self) -> Result<Element, String> {
        if self.peek() == Some('[') {
            self.pos += 1;
            let mut words = vec![self.string()?];
            while self.peek() == Some('|') {
                self.pos += 1;
                words.push(self.string()?);
            }
            self.expect(']')?;
            Ok(Element::AnyOf(InnerOr { words }))
        } else {
            Ok(Element::Word(self.string()?))
        }
    }

    fn chain(&mut self) -> Result<Chain, String> {
        self.expect('(')?;
        let mut elements = vec![self.element()?];
        let mut gaps = Vec::new();
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    gaps.push(Gap::Unrestricted);
                }
                Some('~') => {
                    self.pos += 1;
                    gaps.push(Gap::AtMost(self.uint()?));
                }
                _ => break,
            }
            elements.push(self.element()?);
        }
        self.expect(')')?;
        Ok(Chain { elements, gaps })
    }

    fn outer(&mut self) -> Result<OuterOr, String> {
        self.expect('{')?;
        let mut alternatives = Vec::new();
        if self.peek() != Some('}') {
            alternatives.push(self.chain()?);
            while self.peek() == Some(',') {
                self.pos += 1;
                alternatives.push(self.chain()?);
            }
        }
        self.expect('}')?;
        Ok(OuterOr { alternatives })
    }

    fn rule(&mut self) -> Result<RegexRule, String> {
        self.expect('P')?;
        let positive = self.outer()?;
        self.expect('N')?;
        let negative = self.outer()?;
        if self.peek().is_some() {
            return self.fail("trailing input");
        }
        let rule = RegexRule { positive, negative };
        let report = validate_structure(&rule);
        if let Some(v) = report.violations.first() {
            return Err(format!("condition {} violated at {}: {}", v.condition, v.path, v.detail));
        }
        Ok(rule)
    }
}

/// Parses the bracketed form produced by [`format_rule`].
pub fn parse_rule(text: &str) -> Result<RegexRule, ParseError> {
    Cursor { src: text, pos: 0 }.rule().map_err(|message| ParseError { line: 1, message })
}

pub fn parse_classifier_file(text: &str) -> Result<ClassifierFile, ParseError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let err = |line: usize, message: String| ParseError { line, message };
    let mut field = |name: &str| -> Result<(usize, String), ParseError> {
        for (n, line) in lines.by_ref() {
            let (key, value) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "positive" | "negative" => continue,
                k if k == name => return Ok((n, value.trim().to_owned())),
                k => return Err(err(n, format!("expected `{name}`, found `{k}`"))),
            }
        }
        Err(err(0, format!("missing `{name}` line")))
    };

    let (n, class) = field("class")?;
    let class: String = serde_json::from_str(&class).map_err(|e| err(n, format!("class name: {e}")))?;
    let (n, count) = field("rules")?;
    let count: usize = count.parse().map_err(|_| err(n, format!("bad rule count `{count}`")))?;
    let mut rules = Vec::with_capacity(count);
    for i in 1..=count {
        let (n, index) = field("rule")?;
        if index != i.to_string() {
            return Err(err(n, format!("expected rule {i}, found `{index}`")));
        }
        let (n, ast) = field("ast")?;
        let rule = parse_rule(&ast).map_err(|e| err(n, e.message))?;
        rules.push(rule);
    }
    if let Some((n, line)) = lines.next() {
        return Err(err(n, format!("unexpected content `{line}`")));
    }
    Ok(ClassifierFile { class, classifier: Classifier::new(rules) })
}
