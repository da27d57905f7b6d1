//! Rewriting of unconstrained expression trees into [`RegexRule`]s.
//!
//! Alternations are flattened, conjunctions are distributed over their
//! alternatives (gap bounds copied onto every distributed edge), and a child
//! of a conjunction whose alternatives are all single elements is merged into
//! one inner alternation instead of being distributed.
//!
//! Negation is accepted where it can be expressed as the rule's negative
//! part: at the root as a double negation, or as a conjunct of the root
//! conjunction (`a AND NOT b`). A negated conjunct has no width, so the gaps
//! on either side of it merge (bounds add; any unrestricted side makes the
//! merged gap unrestricted). Any other placement is reported as
//! [`NormalizeError::Unrepresentable`].

use thiserror::Error;

use super::{Chain, Element, Expr, Gap, InnerOr, OuterOr, RegexRule};

/// Upper bound on the alternatives produced by distributing one part.
pub const MAX_ALTERNATIVES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("expression cannot be written as one rule: {0}")]
    Unrepresentable(String),
    #[error("distribution produces more than {MAX_ALTERNATIVES} alternatives")]
    TooLarge,
    #[error("malformed expression: {0}")]
    Malformed(String),
}

pub fn normalize(expr: &Expr) -> Result<RegexRule, NormalizeError> {
    match expr {
        Expr::Not(inner) => match inner.as_ref() {
            Expr::Not(x) => normalize(x),
            _ => Err(NormalizeError::Unrepresentable("a bare negation has no positive part".into())),
        },
        Expr::Or(children) if children.len() == 1 => normalize(&children[0]),
        Expr::And { children, gaps } if children.iter().any(|c| matches!(c, Expr::Not(_))) => {
            root_conjunction(children, gaps)
        }
        other => Ok(RegexRule::new(OuterOr::new(alternatives(other)?), OuterOr::default())),
    }
}

fn root_conjunction(children: &[Expr], gaps: &[Gap]) -> Result<RegexRule, NormalizeError> {
    check_gaps(children, gaps)?;
    let mut spans: Vec<Expr> = Vec::new();
    let mut span_gaps: Vec<Gap> = Vec::new();
    let mut negative = OuterOr::default();
    let mut pending: Option<Gap> = None;
    for (i, child) in children.iter().enumerate() {
        if i > 0 {
            pending = Some(merge_gaps(pending, gaps[i - 1]));
        }
        match child {
            Expr::Not(operand) => {
                for chain in alternatives(operand)? {
                    negative.push(chain);
                }
                if negative.len() > MAX_ALTERNATIVES {
                    return Err(NormalizeError::TooLarge);
                }
            }
            span => {
                if let (false, Some(g)) = (spans.is_empty(), pending) {
                    span_gaps.push(g);
                }
                spans.push(span.clone());
                pending = None;
            }
        }
    }
    let positive = match spans.len() {
        0 => return Err(NormalizeError::Unrepresentable("conjunction of negations has no positive part".into())),
        1 => alternatives(&spans[0])?,
        _ => alternatives(&Expr::and_with(spans, span_gaps))?,
    };
    Ok(RegexRule::new(OuterOr::new(positive), negative))
}

fn merge_gaps(acc: Option<Gap>, next: Gap) -> Gap {
    match (acc, next) {
        (None, g) => g,
        (Some(Gap::AtMost(a)), Gap::AtMost(b)) => Gap::AtMost(a.saturating_add(b)),
        _ => Gap::Unrestricted,
    }
}

fn check_gaps(children: &[Expr], gaps: &[Gap]) -> Result<(), NormalizeError> {
    if children.is_empty() {
        return Err(NormalizeError::Malformed("conjunction without operands".into()));
    }
    if gaps.len() + 1 != children.len() {
        return Err(NormalizeError::Malformed(format!("{} operands but {} gaps", children.len(), gaps.len())));
    }
    Ok(())
}

/// The chains whose alternation matches exactly what `expr` matches.
fn alternatives(expr: &Expr) -> Result<Vec<Chain>, NormalizeError> {
    match expr {
        Expr::Word(w) if w.is_empty() => Err(NormalizeError::Malformed("empty word".into())),
        Expr::Word(w) => Ok(vec![Chain::word(w.clone())]),
        Expr::Not(_) => Err(NormalizeError::Unrepresentable("negation inside an alternation or a chain".into())),
        Expr::Or(children) => {
            let mut out: Vec<Chain> = Vec::new();
            for c in children {
                for chain in alternatives(c)? {
                    if !out.contains(&chain) {
                        out.push(chain);
                    }
                }
                if out.len() > MAX_ALTERNATIVES {
                    return Err(NormalizeError::TooLarge);
                }
            }
            Ok(out)
        }
        Expr::And { children, gaps } => {
            check_gaps(children, gaps)?;
            let mut partial: Vec<Chain> = Vec::new();
            for (i, child) in children.iter().enumerate() {
                let options = chain_options(alternatives(child)?);
                if options.is_empty() {
                    return Ok(Vec::new());
                }
                partial = if i == 0 {
                    options
                } else {
                    if partial.len().saturating_mul(options.len()) > MAX_ALTERNATIVES {
                        return Err(NormalizeError::TooLarge);
                    }
                    let gap = gaps[i - 1];
                    let mut next = Vec::with_capacity(partial.len() * options.len());
                    for left in &partial {
                        for right in &options {
                            let mut chain = left.clone();
                            chain.gaps.push(gap);
                            chain.gaps.extend_from_slice(&right.gaps);
                            chain.elements.extend(right.elements.iter().cloned());
                            if !next.contains(&chain) {
                                next.push(chain);
                            }
                        }
                    }
                    next
                };
            }
            Ok(partial)
        }
    }
}

/// Collapses several single-element alternatives into one inner alternation.
fn chain_options(alts: Vec<Chain>) -> Vec<Chain> {
    if alts.len() >= 2 && alts.iter().all(|c| c.len() == 1) {
        let words = alts.iter().flat_map(|c| c.elements[0].words().to_vec());
        vec![Chain::single(Element::any_of(words))]
    } else {
        alts
    }
}

/// Expression tree for `rule`; [`normalize`] maps it back to `rule`.
pub fn to_expr(rule: &RegexRule) -> Expr {
    let part = |outer: &OuterOr| Expr::or(outer.alternatives.iter().map(chain_expr).collect());
    if rule.negative.is_empty() {
        part(&rule.positive)
    } else {
        Expr::and(vec![part(&rule.positive), Expr::not(part(&rule.negative))])
    }
}

fn chain_expr(chain: &Chain) -> Expr {
    match chain.elements.as_slice() {
        [Element::Word(w)] => Expr::word(w.clone()),
        [Element::AnyOf(inner)] => Expr::and_with(vec![inner_expr(inner)], Vec::new()),
        elements => Expr::and_with(
            elements
                .iter()
                .map(|e| match e {
                    Element::Word(w) => Expr::word(w.clone()),
                    Element::AnyOf(inner) => inner_expr(inner),
                })
                .collect(),
            chain.gaps.clone(),
        ),
    }
}

fn inner_expr(inner: &InnerOr) -> Expr {
    Expr::or(inner.words.iter().map(|w| Expr::word(w.clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex_model::validate_structure;

    fn w(s: &str) -> Expr {
        Expr::word(s)
    }

    #[test]
    fn flattens_outer_alternation() {
        let rule = normalize(&Expr::or(vec![w("w1"), Expr::and(vec![w("w2"), w("w3")])])).unwrap();
        assert_eq!(
            rule.positive.alternatives,
            vec![Chain::word("w1"), Chain::of(vec![Element::word("w2"), Element::word("w3")])]
        );
        assert!(rule.negative.is_empty());
    }

    #[test]
    fn distributes_conjunction() {
        let expr = Expr::and(vec![Expr::or(vec![w("w1"), Expr::and(vec![w("w2"), w("w3")])]), w("w4")]);
        let rule = normalize(&expr).unwrap();
        assert_eq!(
            rule.positive.alternatives,
            vec![
                Chain::of(vec![Element::word("w1"), Element::word("w4")]),
                Chain::of(vec![Element::word("w2"), Element::word("w3"), Element::word("w4")]),
            ]
        );
    }

    #[test]
    fn word_alternation_in_chain_becomes_inner_or() {
        let expr = Expr::and_with(vec![Expr::or(vec![w("a"), w("b"), w("a")]), w("c")], vec![Gap::AtMost(10)]);
        let rule = normalize(&expr).unwrap();
        assert_eq!(
            rule.positive.alternatives,
            vec![Chain::new(vec![Element::any_of(["a", "b"]), Element::word("c")], vec![Gap::AtMost(10)])]
        );
    }

    #[test]
    fn negated_conjuncts_merge_gaps() {
        let expr = Expr::and_with(
            vec![w("a"), Expr::not(w("x")), w("b"), Expr::not(Expr::or(vec![w("y"), w("x")]))],
            vec![Gap::AtMost(2), Gap::AtMost(3), Gap::Unrestricted],
        );
        let rule = normalize(&expr).unwrap();
        assert_eq!(
            rule.positive.alternatives,
            vec![Chain::new(vec![Element::word("a"), Element::word("b")], vec![Gap::AtMost(5)])]
        );
        assert_eq!(rule.negative, OuterOr::new(vec![Chain::word("x"), Chain::word("y")]));
    }

    #[test]
    fn double_negation_at_root() {
        let rule = normalize(&Expr::not(Expr::not(w("a")))).unwrap();
        assert_eq!(rule.positive.alternatives, vec![Chain::word("a")]);
    }

    #[test]
    fn unrepresentable_negations() {
        for expr in [
            Expr::not(w("a")),
            Expr::or(vec![w("a"), Expr::not(w("b"))]),
            Expr::and(vec![Expr::not(w("a")), Expr::not(w("b"))]),
            Expr::and(vec![w("a"), Expr::not(Expr::not(w("b")))]),
        ] {
            assert!(matches!(normalize(&expr), Err(NormalizeError::Unrepresentable(_))), "{expr:?}");
        }
    }

    #[test]
    fn malformed_trees() {
        assert!(matches!(normalize(&Expr::and(vec![])), Err(NormalizeError::Malformed(_))));
        assert!(matches!(normalize(&Expr::and_with(vec![w("a"), w("b")], vec![])), Err(NormalizeError::Malformed(_))));
        assert!(matches!(normalize(&w("")), Err(NormalizeError::Malformed(_))));
    }

    #[test]
    fn blow_up_is_capped() {
        let wide = || Expr::or((0..30).map(|i| Expr::and(vec![w(&format!("a{i}")), w("z")])).collect());
        let expr = Expr::and(vec![wide(), wide(), wide()]);
        assert_eq!(normalize(&expr), Err(NormalizeError::TooLarge));
    }

    #[test]
    fn round_trip_through_expr() {
        let rule = RegexRule::new(
            OuterOr::new(vec![
                Chain::word("a"),
                Chain::single(Element::any_of(["b", "c"])),
                Chain::new(
                    vec![Element::any_of(["d", "e"]), Element::word("f"), Element::word("d")],
                    vec![Gap::AtMost(4), Gap::Unrestricted],
                ),
            ]),
            OuterOr::new(vec![Chain::single(Element::any_of(["x", "y"]))]),
        );
        assert!(validate_structure(&rule).passed());
        assert_eq!(normalize(&to_expr(&rule)).unwrap(), rule);
        assert_eq!(normalize(&to_expr(&RegexRule::default())).unwrap(), RegexRule::default());
    }
}
