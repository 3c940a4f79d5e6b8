//! Rule representation, mixed-radix rule numbering and rule-space sizes.
//!
//! An explicit rule assigns a [`Reaction`] to every equality pattern of its
//! diameter. Listing the patterns in lexicographic RGS order and reading each
//! reaction as a digit in base `distinct_count + 1` numbers the rule: the
//! all-equal pattern is the most significant digit.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{NcaError, Result};
use crate::pattern::{
    self, canonicalize_into, distinct_count, pattern_rank, Name, PatternIter, MAX_ENUM_DIAMETER,
};

/// Largest diameter accepted by the numbering functions.
pub const MAX_NUMBERED_DIAMETER: usize = 8;

/// What a cell becomes: a copy of a context name, or a brand new name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reaction {
    /// The k-th distinct name of the context, in first-occurrence order.
    Copy(usize),
    Fresh,
}

impl Reaction {
    pub fn is_legal_for(self, rgs: &[u8]) -> bool {
        match self {
            Reaction::Copy(k) => k < distinct_count(rgs),
            Reaction::Fresh => true,
        }
    }

    /// Digit of this reaction for a pattern with `distinct` names.
    fn digit(self, distinct: usize) -> usize {
        match self {
            Reaction::Copy(k) => k,
            Reaction::Fresh => distinct,
        }
    }

    fn from_digit(digit: usize, distinct: usize) -> Self {
        if digit < distinct {
            Reaction::Copy(digit)
        } else {
            Reaction::Fresh
        }
    }
}

impl fmt::Display for Reaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reaction::Copy(k) => write!(f, "copy({k})"),
            Reaction::Fresh => write!(f, "fresh"),
        }
    }
}

/// A pure map from a length-`d` RGS to a legal reaction.
pub type ProceduralFn = dyn Fn(&[u8]) -> Reaction + Send + Sync;

#[derive(Clone)]
pub enum RuleBody {
    /// One reaction per pattern, indexed by pattern rank.
    Table(Arc<[Reaction]>),
    Procedural(Arc<ProceduralFn>),
}

impl fmt::Debug for RuleBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleBody::Table(t) => f.debug_tuple("Table").field(t).finish(),
            RuleBody::Procedural(_) => f.write_str("Procedural(..)"),
        }
    }
}

/// A nominal CA transition rule.
#[derive(Debug, Clone)]
pub struct Rule {
    diameter: usize,
    anchor: usize,
    body: RuleBody,
    label: String,
}

/// Default anchor for diameter `d`: the centre cell for odd `d`.
pub fn default_anchor(d: usize) -> usize {
    (d.max(1) - 1) / 2
}

impl Rule {
    /// Builds an explicit rule from one reaction per pattern, in
    /// enumeration order.
    pub fn from_reactions(d: usize, anchor: usize, reactions: Vec<Reaction>) -> Result<Self> {
        if !(1..=MAX_ENUM_DIAMETER).contains(&d) {
            return Err(NcaError::DiameterOutOfRange(d));
        }
        check_anchor(d, anchor)?;
        let expected = pattern::bell(d).to_usize().expect("Bell(12) fits usize");
        if reactions.len() != expected {
            return Err(NcaError::InvalidArgument(format!(
                "expected {expected} reactions for diameter {d}, got {}",
                reactions.len()
            )));
        }
        for (p, r) in PatternIter::new(d).zip(&reactions) {
            if !r.is_legal_for(p.as_slice()) {
                return Err(NcaError::IllegalReaction {
                    reaction: r.to_string(),
                    pattern: p.to_string(),
                });
            }
        }
        Ok(Self {
            diameter: d,
            anchor,
            body: RuleBody::Table(reactions.into()),
            label: format!("table d={d}"),
        })
    }

    /// Builds an explicit rule from mixed-radix digits, most significant first.
    pub fn from_digits(d: usize, anchor: usize, digits: &[usize]) -> Result<Self> {
        if !(1..=MAX_ENUM_DIAMETER).contains(&d) {
            return Err(NcaError::DiameterOutOfRange(d));
        }
        let mut reactions = Vec::with_capacity(digits.len());
        for (p, &g) in PatternIter::new(d).zip(digits) {
            let alpha = p.distinct_count();
            if g > alpha {
                return Err(NcaError::InvalidArgument(format!(
                    "digit {g} exceeds base {} for pattern {p}",
                    alpha + 1
                )));
            }
            reactions.push(Reaction::from_digit(g, alpha));
        }
        if reactions.len() != digits.len() {
            return Err(NcaError::InvalidArgument("too many digits".into()));
        }
        Self::from_reactions(d, anchor, reactions)
    }

    /// A rule given by a pure function over equality patterns.
    pub fn procedural<F>(d: usize, anchor: usize, label: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(&[u8]) -> Reaction + Send + Sync + 'static,
    {
        if d == 0 || d > pattern::MAX_RANK_DIAMETER {
            return Err(NcaError::DiameterOutOfRange(d));
        }
        check_anchor(d, anchor)?;
        Ok(Self {
            diameter: d,
            anchor,
            body: RuleBody::Procedural(Arc::new(f)),
            label: label.into(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_anchor(mut self, anchor: usize) -> Result<Self> {
        check_anchor(self.diameter, anchor)?;
        self.anchor = anchor;
        Ok(self)
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    /// Number of context cells strictly left of the updated cell.
    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn body(&self) -> &RuleBody {
        &self.body
    }

    pub fn is_procedural(&self) -> bool {
        matches!(self.body, RuleBody::Procedural(_))
    }

    /// Reaction for a canonical pattern of length `diameter`.
    #[inline]
    pub fn reaction_for_pattern(&self, rgs: &[u8]) -> Reaction {
        debug_assert_eq!(rgs.len(), self.diameter);
        match &self.body {
            RuleBody::Table(t) => t[pattern_rank(rgs)],
            RuleBody::Procedural(f) => f(rgs),
        }
    }

    /// Mixed-radix digits, most significant first. `None` for procedural rules.
    pub fn digits(&self) -> Option<Vec<usize>> {
        match &self.body {
            RuleBody::Table(t) => Some(
                PatternIter::new(self.diameter)
                    .zip(t.iter())
                    .map(|(p, r)| r.digit(p.distinct_count()))
                    .collect(),
            ),
            RuleBody::Procedural(_) => None,
        }
    }

    /// Text record `d=<int> L=<int> digits=<comma-separated>`.
    pub fn to_record(&self) -> Result<String> {
        let digits = self.digits().ok_or(NcaError::ProceduralNotNumbered)?;
        let digits: Vec<String> = digits.iter().map(ToString::to_string).collect();
        Ok(format!(
            "d={} L={} digits={}",
            self.diameter,
            self.anchor,
            digits.join(",")
        ))
    }
}

impl FromStr for Rule {
    type Err = NcaError;

    /// Parses the text record written by [`Rule::to_record`].
    fn from_str(s: &str) -> Result<Self> {
        let mut d = None;
        let mut anchor = None;
        let mut digits = None;
        for field in s.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| NcaError::Parse(format!("malformed field `{field}`")))?;
            let num = |v: &str| {
                v.parse::<usize>()
                    .map_err(|e| NcaError::Parse(format!("bad integer `{v}`: {e}")))
            };
            match key {
                "d" => d = Some(num(value)?),
                "L" => anchor = Some(num(value)?),
                "digits" => digits = Some(value.split(',').map(num).collect::<Result<Vec<_>>>()?),
                _ => return Err(NcaError::Parse(format!("unknown field `{key}`"))),
            }
        }
        let d = d.ok_or_else(|| NcaError::Parse("missing d".into()))?;
        let anchor = anchor.ok_or_else(|| NcaError::Parse("missing L".into()))?;
        let digits = digits.ok_or_else(|| NcaError::Parse("missing digits".into()))?;
        Rule::from_digits(d, anchor, &digits)
    }
}

fn check_anchor(d: usize, anchor: usize) -> Result<()> {
    if anchor >= d {
        return Err(NcaError::InvalidArgument(format!(
            "anchor {anchor} outside context of diameter {d}"
        )));
    }
    Ok(())
}

fn check_numbered(d: usize) -> Result<()> {
    if !(1..=MAX_NUMBERED_DIAMETER).contains(&d) {
        return Err(NcaError::DiameterOutOfRange(d));
    }
    Ok(())
}

/// Number of diameter-`d` rules: the product of `distinct_count + 1` over
/// all patterns.
pub fn space_size(d: usize) -> Result<BigUint> {
    check_numbered(d)?;
    // Group patterns by distinct count so the product is a few big powers.
    let mut by_alpha = vec![0u32; d + 1];
    for p in PatternIter::new(d) {
        by_alpha[p.distinct_count()] += 1;
    }
    Ok(by_alpha
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .fold(BigUint::one(), |acc, (alpha, &n)| {
            acc * BigUint::from(alpha as u32 + 1).pow(n)
        }))
}

/// `k^(k^d)`: the number of `k`-colour, diameter-`d` classical CA rules.
pub fn classical_space_size(colors: u32, d: u32) -> Result<BigUint> {
    let exponent = colors
        .checked_pow(d)
        .ok_or_else(|| NcaError::InvalidArgument(format!("{colors}^{d} overflows")))?;
    Ok(BigUint::from(colors).pow(exponent))
}

/// Decodes a rule number into an explicit rule with the default anchor.
pub fn decode_rule(number: &BigUint, d: usize) -> Result<Rule> {
    check_numbered(d)?;
    let patterns: Vec<usize> = PatternIter::new(d).map(|p| p.distinct_count()).collect();
    let mut rest = number.clone();
    let mut digits = vec![0usize; patterns.len()];
    for (slot, &alpha) in digits.iter_mut().zip(&patterns).rev() {
        let (q, r) = rest.div_rem(&BigUint::from(alpha as u32 + 1));
        *slot = r.to_usize().expect("digit fits usize");
        rest = q;
    }
    if !rest.is_zero() {
        return Err(NcaError::RuleNumberOutOfRange);
    }
    Ok(Rule::from_digits(d, default_anchor(d), &digits)?.with_label(rule_label(number, d)))
}

/// Inverse of [`decode_rule`].
pub fn encode_rule(rule: &Rule) -> Result<BigUint> {
    let digits = rule.digits().ok_or(NcaError::ProceduralNotNumbered)?;
    check_numbered(rule.diameter())?;
    let mut n = BigUint::zero();
    for (p, g) in PatternIter::new(rule.diameter()).zip(digits) {
        n = n * BigUint::from(p.distinct_count() as u32 + 1) + BigUint::from(g);
    }
    Ok(n)
}

/// The elementary (diameter-3) rule with the given number, 0..=215.
pub fn enca(number: u32) -> Result<Rule> {
    decode_rule(&BigUint::from(number), 3)
}

fn rule_label(number: &BigUint, d: usize) -> String {
    if d == 3 {
        format!("ENCA {number}")
    } else {
        format!("NCA d={d} #{number}")
    }
}

/// Canonicalizes `context` and returns the rule's reaction to it.
pub fn reaction_for(rule: &Rule, context: &[Name]) -> Result<Reaction> {
    if context.len() != rule.diameter() {
        return Err(NcaError::ContextLength {
            expected: rule.diameter(),
            found: context.len(),
        });
    }
    let mut rgs = SmallVec::<[u8; 16]>::new();
    let mut distinct = SmallVec::<[Name; 16]>::new();
    canonicalize_into(context.iter().copied(), &mut rgs, &mut distinct);
    Ok(rule.reaction_for_pattern(&rgs))
}
