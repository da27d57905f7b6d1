//! Neighbourhood moves on rules and the mutation step built from them.
//!
//! | op | effect |
//! |----|--------|
//! | O1 | add a similar word to an element, making or growing an inner alternation |
//! | O2 | add a chain to the outer alternation |
//! | O3 | delete an outer alternative or an inner-alternation word |
//! | O4 | extend a chain with a word |
//! | O5 | swap two elements of a chain |
//! | O6 | change one gap bound |
//! | O7 | delete an element of a chain |
//!
//! Every operator returns a modified copy. A move that would create a
//! duplicate alternative leaves the rule unchanged.

use rand::seq::IndexedRandom;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embeddings::EmbeddingTable;
use crate::num::Real;
use crate::regex_model::{complexity, Chain, Classifier, Element, Gap, InnerOr, OuterOr, Part, RegexRule};

pub const DEFAULT_DISTANCE_TABLE: [u32; 12] = [0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 100];
pub const DEFAULT_COMPLEXITY_CAP: usize = 60;
/// Words offered to the similarity-weighted choice in O1.
pub const O1_CANDIDATES: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct MutationContext<'a, T> {
    pub positive_words: &'a [String],
    pub negative_words: &'a [String],
    /// Allowed bounds for bounded gaps. Unrestricted is always allowed.
    pub distance_table: &'a [u32],
    pub embeddings: &'a EmbeddingTable<T>,
    /// Largest allowed [`complexity`] of a rule.
    pub complexity_cap: usize,
    pub positive_part_probability: f64,
}

impl<'a, T> MutationContext<'a, T> {
    pub fn new(positive_words: &'a [String], negative_words: &'a [String], embeddings: &'a EmbeddingTable<T>) -> Self {
        Self {
            positive_words,
            negative_words,
            distance_table: &DEFAULT_DISTANCE_TABLE,
            embeddings,
            complexity_cap: DEFAULT_COMPLEXITY_CAP,
            positive_part_probability: 0.5,
        }
    }

    pub fn pool(&self, part: Part) -> &'a [String] {
        match part {
            Part::Positive => self.positive_words,
            Part::Negative => self.negative_words,
        }
    }

    /// The table bounds followed by `Unrestricted`.
    pub fn gap_values(&self) -> Vec<Gap> {
        let mut values: Vec<Gap> = self.distance_table.iter().map(|&b| Gap::AtMost(b)).collect();
        values.dedup();
        values.push(Gap::Unrestricted);
        values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Operator {
    AddInnerOr,
    AddOuterOr,
    RemoveOr,
    AddAnd,
    Swap,
    Distance,
    RemoveAnd,
}

impl Operator {
    pub const ALL: [Operator; 7] = [
        Operator::AddInnerOr,
        Operator::AddOuterOr,
        Operator::RemoveOr,
        Operator::AddAnd,
        Operator::Swap,
        Operator::Distance,
        Operator::RemoveAnd,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Operator::AddInnerOr => "O1",
            Operator::AddOuterOr => "O2",
            Operator::RemoveOr => "O3",
            Operator::AddAnd => "O4",
            Operator::Swap => "O5",
            Operator::Distance => "O6",
            Operator::RemoveAnd => "O7",
        }
    }
}

/// Operators that can act on `part` of `rule`.
pub fn applicable<T>(rule: &RegexRule, part: Part, ctx: &MutationContext<'_, T>) -> Vec<Operator> {
    let outer = rule.part(part);
    let has_words = !ctx.pool(part).is_empty();
    let has_chain = !outer.is_empty();
    let has_long = outer.alternatives.iter().any(|c| c.len() >= 2);
    Operator::ALL
        .into_iter()
        .filter(|op| match op {
            Operator::AddInnerOr | Operator::AddAnd => has_chain && has_words,
            Operator::AddOuterOr => has_words,
            Operator::RemoveOr => has_chain,
            Operator::Swap | Operator::Distance | Operator::RemoveAnd => has_long,
        })
        .collect()
}

/// Picks an operator from a non-empty applicable set.
pub trait OperatorSelector {
    fn select(&self, applicable: &[Operator], rng: &mut dyn RngCore) -> Operator;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UniformSelector;

impl OperatorSelector for UniformSelector {
    fn select(&self, applicable: &[Operator], rng: &mut dyn RngCore) -> Operator {
        *applicable.choose(rng).expect("non-empty applicable set")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutation {
    pub classifier: Classifier,
    pub rule_index: usize,
    pub part: Part,
    pub operator: Operator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("classifier has no rules")]
    NoRules,
    #[error("no operator can act on the rule and the positive word pool is empty")]
    NothingApplicable,
}

pub fn mutate<T: Real, R: Rng + ?Sized>(
    classifier: &Classifier,
    ctx: &MutationContext<'_, T>,
    rng: &mut R,
) -> Result<Mutation, MutationError> {
    mutate_with(classifier, ctx, &UniformSelector, rng)
}

/// Edits one uniformly chosen rule of `classifier`. An edit that would push
/// the rule over the complexity cap is dropped, leaving the rule unchanged.
pub fn mutate_with<T: Real, R: Rng + ?Sized, S: OperatorSelector + ?Sized>(
    classifier: &Classifier,
    ctx: &MutationContext<'_, T>,
    selector: &S,
    rng: &mut R,
) -> Result<Mutation, MutationError> {
    if classifier.rules.is_empty() {
        return Err(MutationError::NoRules);
    }
    let rule_index = rng.random_range(0..classifier.rules.len());
    let rule = &classifier.rules[rule_index];
    let mut part = if rng.random::<f64>() < ctx.positive_part_probability { Part::Positive } else { Part::Negative };
    let ops = applicable(rule, part, ctx);
    let operator = if ops.is_empty() {
        if ctx.positive_words.is_empty() {
            return Err(MutationError::NothingApplicable);
        }
        part = Part::Positive;
        Operator::AddOuterOr
    } else {
        let mut dyn_rng = RngAdapter(rng);
        selector.select(&ops, &mut dyn_rng)
    };
    let edited = apply(operator, rule, part, ctx, rng);
    let mut out = classifier.clone();
    if complexity(&edited) <= ctx.complexity_cap {
        out.rules[rule_index] = edited;
    }
    Ok(Mutation { classifier: out, rule_index, part, operator })
}

struct RngAdapter<'r, R: ?Sized>(&'r mut R);

impl<R: Rng + ?Sized> RngCore for RngAdapter<'_, R> {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

pub fn apply<T: Real, R: Rng + ?Sized>(
    operator: Operator,
    rule: &RegexRule,
    part: Part,
    ctx: &MutationContext<'_, T>,
    rng: &mut R,
) -> RegexRule {
    match operator {
        Operator::AddInnerOr => o1_add_inner_or(rule, part, ctx, rng),
        Operator::AddOuterOr => o2_add_outer_or(rule, part, ctx, rng),
        Operator::RemoveOr => o3_remove_or(rule, part, rng),
        Operator::AddAnd => o4_add_and(rule, part, ctx, rng),
        Operator::Swap => o5_swap(rule, part, rng),
        Operator::Distance => o6_distance(rule, part, ctx, rng),
        Operator::RemoveAnd => o7_remove_and(rule, part, rng),
    }
}

/// Replaces alternative `index` unless that would duplicate another one.
fn replace_chain(rule: &RegexRule, part: Part, index: usize, chain: Chain) -> RegexRule {
    let mut out = rule.clone();
    let outer = out.part_mut(part);
    let duplicate = outer.alternatives.iter().enumerate().any(|(i, c)| i != index && *c == chain);
    if !duplicate {
        outer.alternatives[index] = chain;
    }
    out
}

fn with_part(rule: &RegexRule, part: Part, outer: OuterOr) -> RegexRule {
    let mut out = rule.clone();
    *out.part_mut(part) = outer;
    out
}

pub fn o1_add_inner_or<T: Real, R: Rng + ?Sized>(
    rule: &RegexRule,
    part: Part,
    ctx: &MutationContext<'_, T>,
    rng: &mut R,
) -> RegexRule {
    let outer = rule.part(part);
    let sites: Vec<(usize, usize)> =
        outer.alternatives.iter().enumerate().flat_map(|(a, c)| (0..c.len()).map(move |e| (a, e))).collect();
    let pool = ctx.pool(part);
    let Some(&(a, e)) = sites.choose(rng) else {
        return rule.clone();
    };
    if pool.is_empty() {
        return rule.clone();
    }
    let element = &outer.alternatives[a].elements[e];
    let anchor = element.words().choose(rng).expect("element has words").clone();
    let candidates: Vec<&String> = pool.choose_multiple(rng, O1_CANDIDATES).collect();
    let mut chosen = None;
    for _ in 0..2 {
        let word =
            ctx.embeddings.similarity_weighted_choice(&anchor, &candidates, rng).expect("candidates are non-empty");
        if !element.contains(word) {
            chosen = Some(word.to_owned());
            break;
        }
    }
    let Some(word) = chosen else {
        return rule.clone();
    };
    let mut words = element.words().to_vec();
    words.push(word);
    let mut chain = outer.alternatives[a].clone();
    chain.elements[e] = Element::AnyOf(InnerOr::new(words));
    replace_chain(rule, part, a, chain)
}

pub fn o2_add_outer_or<T, R: Rng + ?Sized>(
    rule: &RegexRule,
    part: Part,
    ctx: &MutationContext<'_, T>,
    rng: &mut R,
) -> RegexRule {
    let pool = ctx.pool(part);
    let Some(i) = (!pool.is_empty()).then(|| rng.random_range(0..pool.len())) else {
        return rule.clone();
    };
    let mut outer = rule.part(part).clone();
    if outer.push(Chain::word(pool[i].clone())) {
        return with_part(rule, part, outer);
    }
    if pool.len() < 2 {
        return rule.clone();
    }
    let gaps = ctx.gap_values();
    for _ in 0..2 {
        let mut j = rng.random_range(0..pool.len() - 1);
        if j >= i {
            j += 1;
        }
        let gap = *gaps.choose(rng).expect("gap values");
        let chain = Chain::new(vec![Element::word(pool[i].clone()), Element::word(pool[j].clone())], vec![gap]);
        if outer.push(chain) {
            return with_part(rule, part, outer);
        }
    }
    rule.clone()
}

pub fn o3_remove_or<R: Rng + ?Sized>(rule: &RegexRule, part: Part, rng: &mut R) -> RegexRule {
    let outer = rule.part(part);
    // `None` deletes the whole alternative, `Some((e, w))` one inner word.
    let mut sites: Vec<(usize, Option<(usize, usize)>)> = Vec::new();
    for (a, chain) in outer.alternatives.iter().enumerate() {
        sites.push((a, None));
        for (e, element) in chain.elements.iter().enumerate() {
            if let Element::AnyOf(inner) = element {
                sites.extend((0..inner.words.len()).map(|w| (a, Some((e, w)))));
            }
        }
    }
    let Some(&(a, site)) = sites.choose(rng) else {
        return rule.clone();
    };
    let mut outer = outer.clone();
    match site {
        None => {
            outer.alternatives.remove(a);
        }
        Some((e, w)) => {
            let element = &mut outer.alternatives[a].elements[e];
            let mut words = element.words().to_vec();
            words.remove(w);
            *element = Element::any_of(words);
            outer.dedup();
        }
    }
    with_part(rule, part, outer)
}

pub fn o4_add_and<T, R: Rng + ?Sized>(
    rule: &RegexRule,
    part: Part,
    ctx: &MutationContext<'_, T>,
    rng: &mut R,
) -> RegexRule {
    let outer = rule.part(part);
    let pool = ctx.pool(part);
    if outer.is_empty() || pool.is_empty() {
        return rule.clone();
    }
    let a = rng.random_range(0..outer.len());
    let word = pool.choose(rng).expect("pool").clone();
    let chain = &outer.alternatives[a];
    if chain.len() == 1 && rng.random_bool(0.5) {
        let mut outer = outer.clone();
        let mut pair = vec![chain.elements[0].clone(), Element::word(word)];
        if rng.random_bool(0.5) {
            pair.swap(0, 1);
        }
        let fresh = Chain::of(pair);
        if outer.push(fresh) {
            return with_part(rule, part, outer);
        }
        return rule.clone();
    }
    let p = rng.random_range(0..=chain.len());
    let mut chain = chain.clone();
    if p == chain.len() {
        chain.gaps.push(Gap::Unrestricted);
    } else {
        chain.gaps.insert(p, Gap::Unrestricted);
    }
    chain.elements.insert(p, Element::word(word));
    replace_chain(rule, part, a, chain)
}

fn long_chains(outer: &OuterOr) -> Vec<usize> {
    (0..outer.len()).filter(|&a| outer.alternatives[a].len() >= 2).collect()
}

pub fn o5_swap<R: Rng + ?Sized>(rule: &RegexRule, part: Part, rng: &mut R) -> RegexRule {
    let outer = rule.part(part);
    let Some(&a) = long_chains(outer).choose(rng) else {
        return rule.clone();
    };
    let mut chain = outer.alternatives[a].clone();
    let i = rng.random_range(0..chain.len());
    let mut j = rng.random_range(0..chain.len() - 1);
    if j >= i {
        j += 1;
    }
    chain.elements.swap(i, j);
    replace_chain(rule, part, a, chain)
}

pub fn o6_distance<T, R: Rng + ?Sized>(
    rule: &RegexRule,
    part: Part,
    ctx: &MutationContext<'_, T>,
    rng: &mut R,
) -> RegexRule {
    let outer = rule.part(part);
    let sites: Vec<(usize, usize)> =
        outer.alternatives.iter().enumerate().flat_map(|(a, c)| (0..c.gaps.len()).map(move |g| (a, g))).collect();
    let Some(&(a, g)) = sites.choose(rng) else {
        return rule.clone();
    };
    let current = outer.alternatives[a].gaps[g];
    let values: Vec<Gap> = ctx.gap_values().into_iter().filter(|&v| v != current).collect();
    let Some(&value) = values.choose(rng) else {
        return rule.clone();
    };
    let mut chain = outer.alternatives[a].clone();
    chain.gaps[g] = value;
    replace_chain(rule, part, a, chain)
}

pub fn o7_remove_and<R: Rng + ?Sized>(rule: &RegexRule, part: Part, rng: &mut R) -> RegexRule {
    let outer = rule.part(part);
    let Some(&a) = long_chains(outer).choose(rng) else {
        return rule.clone();
    };
    let mut chain = outer.alternatives[a].clone();
    let e = rng.random_range(0..chain.len());
    chain.elements.remove(e);
    if e == 0 {
        chain.gaps.remove(0);
    } else if e == chain.gaps.len() {
        chain.gaps.pop();
    } else {
        chain.gaps.remove(e);
        chain.gaps[e - 1] = Gap::Unrestricted;
    }
    let mut outer = outer.clone();
    outer.alternatives[a] = chain;
    outer.dedup();
    with_part(rule, part, outer)
}
