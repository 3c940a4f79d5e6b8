//! Wolfram elementary cellular automata on circular bit arrays.

use std::fmt;

/// An ECA rule number. Bit `b1` (the most significant) is the output for
/// neighbourhood (1,1,1) and `b8` the output for (0,0,0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EcaRule(pub u8);

impl EcaRule {
    pub fn number(self) -> u8 {
        self.0
    }

    /// `(b1, …, b8)`.
    pub fn octet(self) -> [u8; 8] {
        std::array::from_fn(|i| (self.0 >> (7 - i)) & 1)
    }

    /// Output bit for the neighbourhood `(left, centre, right)`.
    #[inline]
    pub fn apply(self, left: u8, centre: u8, right: u8) -> u8 {
        let idx = (left & 1) << 2 | (centre & 1) << 1 | (right & 1);
        (self.0 >> idx) & 1
    }

    pub fn all() -> impl Iterator<Item = EcaRule> {
        (0..=255u8).map(EcaRule)
    }
}

impl fmt::Display for EcaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ECA {}", self.0)
    }
}

/// One synchronous update of a circular bit row.
pub fn eca_step(bits: &[u8], rule: EcaRule) -> Vec<u8> {
    let n = bits.len();
    (0..n)
        .map(|i| rule.apply(bits[(i + n - 1) % n], bits[i], bits[(i + 1) % n]))
        .collect()
}

/// Rows `0..=steps` of an ECA run.
pub fn eca_run(init: &[u8], rule: EcaRule, steps: usize) -> Vec<Vec<u8>> {
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(init.to_vec());
    for t in 0..steps {
        let next = eca_step(&rows[t], rule);
        rows.push(next);
    }
    rows
}
