//! Names, equality patterns and set-partition enumeration.
//!
//! An equality pattern records which positions of a tuple of names hold equal
//! names and nothing else. Its canonical representative is the restricted
//! growth string (RGS) obtained by numbering names in order of first
//! occurrence, so `(38, 4, 4, 7, 11, 7)` becomes `(0, 1, 1, 2, 3, 2)`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{NcaError, Result};

/// Largest diameter for which patterns are enumerated explicitly.
pub const MAX_ENUM_DIAMETER: usize = 12;

/// Largest diameter supported by [`pattern_rank`].
pub const MAX_RANK_DIAMETER: usize = 20;

/// An opaque name. Only equality, copying and fresh creation are meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Name(pub u64);

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Name {
    fn from(v: u64) -> Self {
        Name(v)
    }
}

pub(crate) type Rgs = SmallVec<[u8; 16]>;

/// Canonical restricted-growth string of a context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EqualityPattern {
    rgs: Rgs,
}

impl EqualityPattern {
    /// Wraps an RGS, checking the restricted-growth property.
    pub fn from_rgs(rgs: &[u8]) -> Result<Self> {
        if !is_rgs(rgs) {
            return Err(NcaError::InvalidArgument(format!(
                "not a restricted growth string: {rgs:?}"
            )));
        }
        Ok(Self {
            rgs: Rgs::from_slice(rgs),
        })
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.rgs
    }

    pub fn len(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgs.is_empty()
    }

    /// Number of distinct names in the pattern (`1 + max(rgs)`).
    pub fn distinct_count(&self) -> usize {
        distinct_count(&self.rgs)
    }

    /// Position of this pattern in [`enumerate_patterns`] order.
    pub fn rank(&self) -> usize {
        pattern_rank(&self.rgs)
    }
}

impl fmt::Display for EqualityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.rgs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// True iff `rgs` is a non-empty restricted growth string.
pub fn is_rgs(rgs: &[u8]) -> bool {
    let Some((&first, rest)) = rgs.split_first() else {
        return false;
    };
    if first != 0 {
        return false;
    }
    let mut max = 0u8;
    for &v in rest {
        if v > max.saturating_add(1) {
            return false;
        }
        max = max.max(v);
    }
    true
}

/// `1 + max(rgs)`, or 0 for the empty string.
pub fn distinct_count(rgs: &[u8]) -> usize {
    rgs.iter().max().map_or(0, |&m| m as usize + 1)
}

/// Canonical equality pattern of a context.
pub fn canonicalize(context: &[Name]) -> Result<EqualityPattern> {
    if context.is_empty() {
        return Err(NcaError::EmptyContext);
    }
    if context.len() > u8::MAX as usize {
        return Err(NcaError::InvalidArgument(format!(
            "context of length {} is too long",
            context.len()
        )));
    }
    let mut rgs = Rgs::new();
    let mut distinct = SmallVec::<[Name; 16]>::new();
    canonicalize_into(context.iter().copied(), &mut rgs, &mut distinct);
    Ok(EqualityPattern { rgs })
}

/// Writes the RGS of `context` into `rgs` and its distinct names, in
/// first-occurrence order, into `distinct`. Both buffers are cleared first.
///
/// Contexts are short, so a linear scan over the distinct names beats hashing.
pub(crate) fn canonicalize_into<I, A, B>(
    context: I,
    rgs: &mut SmallVec<A>,
    distinct: &mut SmallVec<B>,
) where
    I: IntoIterator<Item = Name>,
    A: smallvec::Array<Item = u8>,
    B: smallvec::Array<Item = Name>,
{
    rgs.clear();
    distinct.clear();
    for name in context {
        let idx = match distinct.iter().position(|&n| n == name) {
            Some(i) => i,
            None => {
                distinct.push(name);
                distinct.len() - 1
            }
        };
        rgs.push(idx as u8);
    }
}

/// Lexicographic iterator over all restricted growth strings of length `d`.
#[derive(Debug, Clone)]
pub struct PatternIter {
    current: Option<Rgs>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Rgs,
}

impl PatternIter {
    pub fn new(d: usize) -> Self {
        if d == 0 {
            return Self {
                current: None,
                prefix_max: Rgs::new(),
            };
        }
        Self {
            current: Some(SmallVec::from_elem(0, d)),
            prefix_max: SmallVec::from_elem(0, d),
        }
    }

    fn advance(&mut self) {
        let Some(rgs) = self.current.as_mut() else {
            return;
        };
        let d = rgs.len();
        // rightmost position that can still grow
        let pivot = (1..d).rev().find(|&i| rgs[i] <= self.prefix_max[i - 1]);
        match pivot {
            None => self.current = None,
            Some(i) => {
                rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(rgs[i]);
                for j in i + 1..d {
                    rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
            }
        }
    }
}

impl Iterator for PatternIter {
    type Item = EqualityPattern;

    fn next(&mut self) -> Option<Self::Item> {
        let out = EqualityPattern {
            rgs: self.current.clone()?,
        };
        self.advance();
        Some(out)
    }
}

/// All `Bell(d)` patterns of length `d` in lexicographic RGS order.
pub fn enumerate_patterns(d: usize) -> Result<Vec<EqualityPattern>> {
    if !(1..=MAX_ENUM_DIAMETER).contains(&d) {
        return Err(NcaError::DiameterOutOfRange(d));
    }
    Ok(PatternIter::new(d).collect())
}

/// Exact Bell number via `Bell(n) = Σ_k Bell(k)·C(n-1, k)`, with binomials
/// taken from successive rows of Pascal's triangle.
pub fn bell(d: usize) -> BigUint {
    let mut bells: Vec<BigUint> = vec![BigUint::one()];
    let mut pascal: Vec<BigUint> = vec![BigUint::one()]; // row n-1
    for n in 1..=d {
        let sum = bells
            .iter()
            .zip(&pascal)
            .fold(BigUint::zero(), |acc, (b, c)| acc + b * c);
        bells.push(sum);
        let mut next = Vec::with_capacity(pascal.len() + 1);
        next.push(BigUint::one());
        for w in pascal.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::one());
        pascal = next;
        debug_assert_eq!(bells.len(), n + 1);
    }
    bells.swap_remove(d)
}

type CompletionTable = [[u64; MAX_RANK_DIAMETER + 1]; MAX_RANK_DIAMETER + 1];

// completions[r][m]: ways to extend an RGS whose current maximum is m by r
// more positions.
fn completions() -> &'static CompletionTable {
    static TABLE: OnceLock<CompletionTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = MAX_RANK_DIAMETER + 1;
        let mut t = [[0u64; MAX_RANK_DIAMETER + 1]; MAX_RANK_DIAMETER + 1];
        t[0] = [1; MAX_RANK_DIAMETER + 1];
        for r in 1..n {
            for m in 0..n {
                let grow = if m + 1 < n { t[r - 1][m + 1] } else { 0 };
                t[r][m] = (m as u64 + 1)
                    .saturating_mul(t[r - 1][m])
                    .saturating_add(grow);
            }
        }
        t
    })
}

/// Index of `rgs` within the lexicographic enumeration of its length.
///
/// `rgs` must be a valid RGS of length at most [`MAX_RANK_DIAMETER`].
pub fn pattern_rank(rgs: &[u8]) -> usize {
    debug_assert!(is_rgs(rgs));
    assert!(rgs.len() <= MAX_RANK_DIAMETER, "pattern too long to rank");
    let table = completions();
    let d = rgs.len();
    let mut rank = 0u64;
    let mut max = 0usize;
    for (i, &v) in rgs.iter().enumerate().skip(1) {
        let v = v as usize;
        rank += v as u64 * table[d - i - 1][max];
        max = max.max(v);
    }
    rank as usize
}
