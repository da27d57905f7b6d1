//! Direct matching of the rule AST against raw text.
//!
//! Words match as literal substrings. For a chain, each element's
//! occurrences are scanned left to right while keeping the set of end
//! positions reachable by a placement of the chain prefix; an occurrence
//! extends the prefix when some reachable end lies at or before its start
//! and, for a bounded gap, no more than `b` characters before it. This gives
//! the same answer as the decoded pattern `w1.{0,b}w2` (or `w1.*w2`) run by
//! a backtracking engine, without the exponential worst case.

use super::{Chain, Classifier, Element, Gap, OuterOr, RegexRule};

/// Byte offsets to character offsets, with a fast path for ASCII text.
struct Text<'t> {
    text: &'t str,
    char_starts: Option<Vec<usize>>,
}

impl<'t> Text<'t> {
    fn new(text: &'t str) -> Self {
        let char_starts = (!text.is_ascii()).then(|| text.char_indices().map(|(i, _)| i).collect());
        Self { text, char_starts }
    }

    fn char_offset(&self, byte: usize) -> usize {
        match &self.char_starts {
            None => byte,
            Some(starts) => starts.partition_point(|&s| s < byte),
        }
    }

    /// Every occurrence of `word`, overlapping ones included, as character
    /// offsets `(start, end)`.
    fn occurrences(&self, word: &str, out: &mut Vec<(usize, usize)>) {
        let mut from = 0;
        while from <= self.text.len() {
            let Some(i) = self.text[from..].find(word) else {
                break;
            };
            let start = from + i;
            out.push((self.char_offset(start), self.char_offset(start + word.len())));
            from = start + self.text[start..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn element_occurrences(&self, element: &Element) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for word in element.words() {
            self.occurrences(word, &mut out);
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn chain_in(chain: &Chain, text: &Text<'_>) -> bool {
    let Some((first, rest)) = chain.elements.split_first() else {
        return false;
    };
    if rest.is_empty() {
        return first.words().iter().any(|w| text.text.contains(w.as_str()));
    }
    if !chain.elements.iter().all(|e| e.words().iter().any(|w| text.text.contains(w.as_str()))) {
        return false;
    }
    let mut ends: Vec<usize> = text.element_occurrences(first).into_iter().map(|(_, e)| e).collect();
    ends.sort_unstable();
    ends.dedup();
    for (element, gap) in rest.iter().zip(&chain.gaps) {
        let mut next = Vec::new();
        for (start, end) in text.element_occurrences(element) {
            let reachable = match gap {
                Gap::Unrestricted => ends.first().is_some_and(|&e| e <= start),
                Gap::AtMost(b) => {
                    let k = ends.partition_point(|&e| e <= start);
                    k > 0 && start - ends[k - 1] <= *b as usize
                }
            };
            if reachable {
                next.push(end);
            }
        }
        if next.is_empty() {
            return false;
        }
        next.sort_unstable();
        next.dedup();
        ends = next;
    }
    true
}

pub fn match_chain(chain: &Chain, text: &str) -> bool {
    chain_in(chain, &Text::new(text))
}

fn outer_in(outer: &OuterOr, text: &Text<'_>) -> bool {
    outer.alternatives.iter().any(|c| chain_in(c, text))
}

/// True when any alternative matches. An empty alternation matches nothing.
pub fn matches_outer(outer: &OuterOr, text: &str) -> bool {
    !outer.is_empty() && outer_in(outer, &Text::new(text))
}

pub fn match_rule(rule: &RegexRule, text: &str) -> bool {
    if rule.positive.is_empty() {
        return false;
    }
    let text = Text::new(text);
    outer_in(&rule.positive, &text) && !outer_in(&rule.negative, &text)
}

/// Rules are tried in order; the first match short-circuits.
pub fn match_classifier(classifier: &Classifier, text: &str) -> bool {
    classifier.rules.iter().any(|r| match_rule(r, text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex_model::{Element, InnerOr};

    fn chain2(a: &str, gap: Gap, b: &str) -> Chain {
        Chain::new(vec![Element::word(a), Element::word(b)], vec![gap])
    }

    #[test]
    fn gap_counts_characters_between_occurrences() {
        assert!(match_chain(&chain2("abc", Gap::AtMost(2), "def"), "abcXXdef"));
        assert!(!match_chain(&chain2("abc", Gap::AtMost(1), "def"), "abcXXdef"));
        assert!(match_chain(&chain2("abc", Gap::AtMost(0), "def"), "abcdef"));
    }

    #[test]
    fn order_matters_and_occurrences_do_not_overlap() {
        assert!(!match_chain(&chain2("b", Gap::Unrestricted, "a"), "ab"));
        assert!(!match_chain(&chain2("ab", Gap::Unrestricted, "ba"), "aba"));
        assert!(match_chain(&chain2("ab", Gap::Unrestricted, "ba"), "abba"));
    }

    #[test]
    fn later_occurrence_can_satisfy_a_bound() {
        let chain = chain2("a", Gap::AtMost(1), "b");
        assert!(match_chain(&chain, "a....a.b"));
        assert!(!match_chain(&chain, "a....b.a"));
    }

    #[test]
    fn repeated_word_needs_two_occurrences() {
        let chain = chain2("aa", Gap::Unrestricted, "aa");
        assert!(!match_chain(&chain, "aaa"));
        assert!(match_chain(&chain, "aaaa"));
    }

    #[test]
    fn multibyte_gaps_count_characters() {
        assert!(match_chain(&chain2("咳", Gap::AtMost(2), "嗽"), "咳啊啊嗽"));
        assert!(!match_chain(&chain2("咳", Gap::AtMost(1), "嗽"), "咳啊啊嗽"));
    }

    #[test]
    fn rule_semantics() {
        let inner = Element::AnyOf(InnerOr::new(["headache", "dizzy", "giddy", "dizziness"]));
        let rule = RegexRule::new(OuterOr::new(vec![Chain::single(inner)]), OuterOr::default());
        assert!(match_rule(&rule, "I have a headache today"));
        assert!(!match_rule(&rule, "fine"));

        let mut with_neg = rule.clone();
        with_neg.negative.push(Chain::word("today"));
        assert!(!match_rule(&with_neg, "I have a headache today"));
        assert!(!match_rule(&RegexRule::default(), "anything"));
    }

    #[test]
    fn classifier_is_any_of() {
        let miss = RegexRule::new(OuterOr::new(vec![Chain::word("zzz")]), OuterOr::default());
        let hit = RegexRule::new(OuterOr::new(vec![Chain::word("abc")]), OuterOr::default());
        assert!(match_classifier(&Classifier::new(vec![miss.clone(), hit]), "xabcx"));
        assert!(!match_classifier(&Classifier::new(vec![RegexRule::default(); 3]), "abc"));
        assert!(!match_classifier(&Classifier::new(vec![miss]), "abc"));
    }
}
