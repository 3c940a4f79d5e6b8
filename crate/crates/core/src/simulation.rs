//! ECA simulation by nominal CAs.
//!
//! Three bridges are provided:
//!
//! * direct simulation, where an elementary NCA reproduces an ECA bit for bit
//!   on raw bit rows;
//! * a diameter-12 rule for any ECA, running on rows coded as blocks
//!   `(b, 0, 1, p)` with `p` fresh;
//! * a diameter-9 rule for ECA 110, running on blocks `(b, 0, p)`.
//!
//! The coded rules locate their reading frame by the *trident*: three
//! singleton names of the context spaced one block apart. Only the equality
//! pattern is inspected, so the rules stay nominal.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::eca::{eca_run, EcaRule};
use crate::engine::{random_bits, run, Configuration, Diagram};
use crate::error::{NcaError, Result};
use crate::pattern::Name;
use crate::rule::{encode_rule, Reaction, Rule};

/// A configuration coded in blocks of `period` cells, bit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedConfiguration {
    pub cells: Configuration,
    pub period: usize,
}

impl CodedConfiguration {
    /// Columns holding the original ECA bits.
    pub fn bit_columns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells.width()).step_by(self.period)
    }
}

/// True iff an elementary NCA can reproduce `eca` on raw bit rows: the
/// octet must read `(1, b2, b3, b4, !b4, !b3, !b2, 0)`.
pub fn directly_simulable(eca: EcaRule) -> bool {
    let b = eca.octet();
    b[0] == 1 && b[7] == 0 && b[4] == 1 - b[3] && b[5] == 1 - b[2] && b[6] == 1 - b[1]
}

/// The four ENCA numbers with digits `(b8, b7, b6, b5, z)`, `z` in 0..4.
pub fn enca_simulators(eca: EcaRule) -> Result<[u32; 4]> {
    if !directly_simulable(eca) {
        return Err(NcaError::InvalidArgument(format!(
            "{eca} is not directly simulable"
        )));
    }
    let b = eca.octet();
    let head = [b[7], b[6], b[5], b[4]].map(usize::from);
    let mut out = [0u32; 4];
    for (z, slot) in out.iter_mut().enumerate() {
        let digits = [head[0], head[1], head[2], head[3], z];
        let rule = Rule::from_digits(3, 1, &digits)?;
        *slot = encode_rule(&rule)?.to_u32().expect("ENCA number fits u32");
    }
    Ok(out)
}

fn bit_name(b: u8) -> Result<Name> {
    match b {
        0 | 1 => Ok(Name(b as u64)),
        _ => Err(NcaError::InvalidArgument(format!("not a bit: {b}"))),
    }
}

fn encode_blocks(bits: &[u8], markers: &[u64]) -> Result<CodedConfiguration> {
    let period = markers.len() + 2;
    let mut config = Configuration {
        cells: Vec::with_capacity(bits.len() * period),
        fresh_counter: 2,
    };
    for &b in bits {
        config.cells.push(bit_name(b)?);
        config.cells.extend(markers.iter().map(|&m| Name(m)));
        let p = config.fresh();
        config.cells.push(p);
    }
    Ok(CodedConfiguration {
        cells: config,
        period,
    })
}

/// Inserts `(0, 1, p)` after every bit, with each `p` fresh.
pub fn encode12(bits: &[u8]) -> Result<CodedConfiguration> {
    encode_blocks(bits, &[0, 1])
}

/// Inserts `(0, p)` after every bit, with each `p` fresh.
pub fn encode9(bits: &[u8]) -> Result<CodedConfiguration> {
    encode_blocks(bits, &[0])
}

/// Checks the block invariant of one coded row and returns its bits.
pub fn decode_row(row: &[Name], period: usize) -> Result<Vec<u8>> {
    let markers: &[u64] = match period {
        4 => &[0, 1],
        3 => &[0],
        _ => {
            return Err(NcaError::InvalidArgument(format!(
                "unsupported period {period}"
            )))
        }
    };
    let violated = |msg: String| NcaError::CodingInvariant(msg);
    if row.is_empty() || !row.len().is_multiple_of(period) {
        return Err(violated(format!(
            "row width {} is not a multiple of {period}",
            row.len()
        )));
    }
    let mut seen = std::collections::HashSet::with_capacity(row.len() / period);
    let mut bits = Vec::with_capacity(row.len() / period);
    for (j, block) in row.chunks_exact(period).enumerate() {
        let b = block[0].0;
        if b > 1 {
            return Err(violated(format!("block {j}: bit cell holds {b}")));
        }
        for (k, &m) in markers.iter().enumerate() {
            if block[k + 1].0 != m {
                return Err(violated(format!(
                    "block {j}: marker {k} holds {}",
                    block[k + 1]
                )));
            }
        }
        let p = block[period - 1];
        if p.0 <= 1 || !seen.insert(p) {
            return Err(violated(format!("block {j}: separator {p} is not unique")));
        }
        bits.push(b as u8);
    }
    Ok(bits)
}

fn decode_diagram(diagram: &Diagram, period: usize) -> Result<Vec<Vec<u8>>> {
    diagram
        .rows
        .iter()
        .map(|row| decode_row(row, period))
        .collect()
}

/// Keeps every 4th column of a diagram produced from [`encode12`].
pub fn decode12(diagram: &Diagram) -> Result<Vec<Vec<u8>>> {
    decode_diagram(diagram, 4)
}

/// Keeps every 3rd column of a diagram produced from [`encode9`].
pub fn decode9(diagram: &Diagram) -> Result<Vec<Vec<u8>>> {
    decode_diagram(diagram, 3)
}

/// Counts of each RGS value; RGS values are below the context length.
#[inline]
fn value_counts(rgs: &[u8]) -> [u8; 16] {
    let mut counts = [0u8; 16];
    for &v in rgs {
        counts[v as usize] += 1;
    }
    counts
}

#[inline]
fn is_trident(rgs: &[u8], counts: &[u8; 16], positions: [usize; 3]) -> bool {
    positions.iter().all(|&p| counts[rgs[p] as usize] == 1)
}

/// Copies the name found at context position `pos`.
#[inline]
fn copy_at(rgs: &[u8], pos: usize) -> Reaction {
    Reaction::Copy(rgs[pos] as usize)
}

fn rule12_reaction(eca: EcaRule, rgs: &[u8]) -> Reaction {
    let counts = value_counts(rgs);
    if is_trident(rgs, &counts, [3, 7, 11]) {
        // C1, C5, C9 are bits; C2 and C3 are the 0- and 1-markers.
        let bit = |pos: usize| u8::from(rgs[pos] == rgs[2]);
        return match eca.apply(bit(0), bit(4), bit(8)) {
            0 => copy_at(rgs, 1),
            _ => copy_at(rgs, 2),
        };
    }
    if is_trident(rgs, &counts, [2, 6, 10]) || is_trident(rgs, &counts, [1, 5, 9]) {
        // updated cell is a 0-marker, resp. 1-marker; so is C1
        return copy_at(rgs, 0);
    }
    if is_trident(rgs, &counts, [0, 4, 8]) {
        return Reaction::Fresh;
    }
    Reaction::Copy(0)
}

/// Diameter-12 rule (anchor 4) simulating `eca` on rows from [`encode12`].
pub fn build_rule12(eca: EcaRule) -> Rule {
    Rule::procedural(12, 4, format!("d12 simulator of {eca}"), move |rgs| {
        rule12_reaction(eca, rgs)
    })
    .expect("diameter 12 with anchor 4 is valid")
}

// Works for any ECA with f(0,0,0) = 0: a 1 output always has a 1-bit in the
// context to copy from.
fn rule9_reaction(eca: EcaRule, rgs: &[u8]) -> Reaction {
    let counts = value_counts(rgs);
    if is_trident(rgs, &counts, [2, 5, 8]) {
        // C1, C4, C7 are bits and C2 is a 0-marker
        let bit = |pos: usize| u8::from(rgs[pos] != rgs[1]);
        return match eca.apply(bit(0), bit(3), bit(6)) {
            0 => copy_at(rgs, 1),
            _ => {
                let one = [0, 3, 6].into_iter().find(|&p| bit(p) == 1).unwrap_or(0);
                copy_at(rgs, one)
            }
        };
    }
    if is_trident(rgs, &counts, [1, 4, 7]) {
        return copy_at(rgs, 0);
    }
    if is_trident(rgs, &counts, [0, 3, 6]) {
        return Reaction::Fresh;
    }
    Reaction::Copy(0)
}

/// Diameter-9 rule (anchor 3) simulating ECA 110 on rows from [`encode9`].
pub fn build_rule9_110() -> Rule {
    let eca = EcaRule(110);
    Rule::procedural(9, 3, "d9 simulator of ECA 110", move |rgs| {
        rule9_reaction(eca, rgs)
    })
    .expect("diameter 9 with anchor 3 is valid")
}

/// Which bridge [`verify_simulation`] exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Direct,
    D12,
    D9,
}

impl FromStr for Variant {
    type Err = NcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Variant::Direct),
            "d12" => Ok(Variant::D12),
            "d9" => Ok(Variant::D9),
            _ => Err(NcaError::Parse(format!("unknown variant `{s}`"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Direct => "direct",
            Variant::D12 => "d12",
            Variant::D9 => "d9",
        })
    }
}

/// First cell where the decoded NCA run departs from the ECA run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    /// ENCA number, for direct simulation.
    pub simulator: Option<u32>,
    pub step: usize,
    pub cell: usize,
    pub expected: u8,
    /// Decoded value, or `None` when the row could not be decoded.
    pub found: Option<u8>,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.simulator {
            write!(f, "ENCA {s}: ")?;
        }
        match self.found {
            Some(v) => write!(
                f,
                "step {} cell {}: expected {}, found {v}",
                self.step, self.cell, self.expected
            ),
            None => write!(f, "step {}: row could not be decoded", self.step),
        }
    }
}

/// Outcome of a side-by-side run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationReport {
    pub eca: EcaRule,
    pub variant: Variant,
    pub seed: u64,
    pub divergence: Option<Divergence>,
}

impl SimulationReport {
    pub fn matched(&self) -> bool {
        self.divergence.is_none()
    }
}

fn first_divergence(expected: &[Vec<u8>], found: &[Vec<u8>]) -> Option<(usize, usize, u8, u8)> {
    for (t, (e_row, f_row)) in expected.iter().zip(found).enumerate() {
        for (i, (&e, &f)) in e_row.iter().zip(f_row).enumerate() {
            if e != f {
                return Some((t, i, e, f));
            }
        }
    }
    None
}

fn compare_coded(
    eca_rows: &[Vec<u8>],
    diagram: &Diagram,
    period: usize,
    simulator: Option<u32>,
) -> Option<Divergence> {
    // Decode row by row so a broken row is reported at its own step.
    for (t, row) in diagram.rows.iter().enumerate() {
        let found = match decode_row(row, period) {
            Ok(bits) => bits,
            Err(_) => {
                return Some(Divergence {
                    simulator,
                    step: t,
                    cell: 0,
                    expected: 0,
                    found: None,
                })
            }
        };
        if let Some((_, i, e, f)) = first_divergence(&eca_rows[t..=t], &[found]) {
            return Some(Divergence {
                simulator,
                step: t,
                cell: i,
                expected: e,
                found: Some(f),
            });
        }
    }
    None
}

fn raw_bits(diagram: &Diagram) -> Vec<Vec<u8>> {
    diagram
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|n| u8::try_from(n.0).unwrap_or(u8::MAX))
                .collect()
        })
        .collect()
}

/// Runs the ECA and its NCA simulator from the same random bit row and
/// compares the decoded NCA diagram with the ECA diagram cell by cell.
pub fn verify_simulation(
    eca: EcaRule,
    width_bits: usize,
    steps: usize,
    seed: u64,
    variant: Variant,
) -> Result<SimulationReport> {
    if width_bits < 3 {
        return Err(NcaError::InvalidArgument(format!(
            "width_bits must be at least 3, got {width_bits}"
        )));
    }
    let bits = random_bits(width_bits, seed);
    let eca_rows = eca_run(&bits, eca, steps);
    let divergence = match variant {
        Variant::Direct => {
            let init =
                Configuration::from_values(&bits.iter().map(|&b| b as u64).collect::<Vec<_>>());
            let mut found = None;
            for number in enca_simulators(eca)? {
                let rule = crate::rule::decode_rule(&BigUint::from(number), 3)?;
                let diagram = run(&init, &rule, steps)?;
                if let Some((t, i, e, f)) = first_divergence(&eca_rows, &raw_bits(&diagram)) {
                    found = Some(Divergence {
                        simulator: Some(number),
                        step: t,
                        cell: i,
                        expected: e,
                        found: Some(f),
                    });
                    break;
                }
            }
            found
        }
        Variant::D12 => {
            let coded = encode12(&bits)?;
            let diagram = run(&coded.cells, &build_rule12(eca), steps)?;
            compare_coded(&eca_rows, &diagram, 4, None)
        }
        Variant::D9 => {
            if eca != EcaRule(110) {
                return Err(NcaError::InvalidArgument(format!(
                    "the diameter-9 construction simulates ECA 110 only, not {eca}"
                )));
            }
            let coded = encode9(&bits)?;
            let diagram = run(&coded.cells, &build_rule9_110(), steps)?;
            compare_coded(&eca_rows, &diagram, 3, None)
        }
    };
    Ok(SimulationReport {
        eca,
        variant,
        seed,
        divergence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::step;
    use crate::pattern::{canonicalize, PatternIter};

    fn names(v: &[u64]) -> Vec<Name> {
        v.iter().copied().map(Name).collect()
    }

    #[test]
    fn direct_set() {
        let found: Vec<u8> = EcaRule::all()
            .filter(|&e| directly_simulable(e))
            .map(|e| e.0)
            .collect();
        assert_eq!(found, vec![142, 150, 170, 178, 204, 212, 232, 240]);
        assert!(!directly_simulable(EcaRule(110)));
    }

    #[test]
    fn simulator_numbers() {
        assert_eq!(enca_simulators(EcaRule(142)).unwrap(), [52, 53, 54, 55]);
        assert_eq!(enca_simulators(EcaRule(240)).unwrap(), [0, 1, 2, 3]);
        assert_eq!(enca_simulators(EcaRule(204)).unwrap(), [16, 17, 18, 19]);
        assert!(enca_simulators(EcaRule(110)).is_err());
    }

    #[test]
    fn encode12_shape() {
        let c = encode12(&[1, 0]).unwrap();
        let v: Vec<u64> = c.cells.cells.iter().map(|n| n.0).collect();
        assert_eq!(v, vec![1, 0, 1, 2, 0, 0, 1, 3]);
        assert_eq!(c.cells.fresh_counter, 4);
        let c = encode12(&[1, 0, 1, 1]).unwrap();
        assert_eq!(c.cells.width(), 16);
        let seps: std::collections::HashSet<_> = c.cells.cells.iter().filter(|n| n.0 > 1).collect();
        assert_eq!(seps.len(), 4);
        assert_eq!(c.bit_columns().collect::<Vec<_>>(), vec![0, 4, 8, 12]);
        assert!(encode12(&[2]).is_err());
    }

    #[test]
    fn decode_round_trip_and_rejection() {
        let bits = vec![1, 0, 1, 1, 0];
        assert_eq!(
            decode_row(&encode12(&bits).unwrap().cells.cells, 4).unwrap(),
            bits
        );
        assert_eq!(
            decode_row(&encode9(&bits).unwrap().cells.cells, 3).unwrap(),
            bits
        );
        let bad = names(&[1, 0, 1, 2, 0, 0, 1, 2]);
        assert!(matches!(
            decode_row(&bad, 4),
            Err(NcaError::CodingInvariant(_))
        ));
        let bad = names(&[1, 1, 1, 2]);
        assert!(matches!(
            decode_row(&bad, 4),
            Err(NcaError::CodingInvariant(_))
        ));
        assert!(decode_row(&names(&[1, 0, 1]), 4).is_err());
    }

    fn reaction12(eca: u8, ctx: &[u64]) -> Reaction {
        crate::rule::reaction_for(&build_rule12(EcaRule(eca)), &names(ctx)).unwrap()
    }

    #[test]
    fn rule12_bit_case() {
        // bits (1,1,0) around the centre bit; f110(1,1,0) = 1 -> copy the 1-marker
        let ctx = [1, 0, 1, 7, 1, 0, 1, 8, 0, 0, 1, 9];
        let r = reaction12(110, &ctx);
        let rgs = canonicalize(&names(&ctx)).unwrap();
        assert_eq!(r, Reaction::Copy(rgs.as_slice()[2] as usize));
        // f110(1,1,1) = 0 -> copy the 0-marker
        let ctx = [1, 0, 1, 7, 1, 0, 1, 8, 1, 0, 1, 9];
        assert_eq!(reaction12(110, &ctx), Reaction::Copy(1));
    }

    #[test]
    fn rule12_other_cases() {
        // trident at C1, C5, C9
        assert_eq!(
            reaction12(30, &[7, 1, 0, 1, 8, 0, 0, 1, 9, 1, 0, 1]),
            Reaction::Fresh
        );
        // trident at C3, C7, C11: C1 is a 0
        let ctx = [0, 1, 7, 1, 0, 1, 8, 0, 0, 1, 9, 1];
        let r = reaction12(30, &ctx);
        assert_eq!(r, Reaction::Copy(0));
        // trident at C2, C6, C10: C1 is a 1
        let ctx = [1, 7, 0, 0, 1, 8, 1, 0, 1, 9, 1, 0];
        assert_eq!(reaction12(30, &ctx), Reaction::Copy(0));
        // no trident at all
        assert_eq!(reaction12(30, &[0; 12]), Reaction::Copy(0));
    }

    fn reaction9(ctx: &[u64]) -> Reaction {
        crate::rule::reaction_for(&build_rule9_110(), &names(ctx)).unwrap()
    }

    #[test]
    fn rule9_cases() {
        // bits (0,1,1): output 1, copied from a 1-bit
        let ctx = [0, 0, 5, 1, 0, 6, 1, 0, 7];
        let rgs = canonicalize(&names(&ctx)).unwrap();
        let r = reaction9(&ctx);
        assert_eq!(r, Reaction::Copy(rgs.as_slice()[3] as usize));
        // bits (0,0,0): output 0 from the marker
        assert_eq!(reaction9(&[0, 0, 5, 0, 0, 6, 0, 0, 7]), Reaction::Copy(0));
        // bits (1,1,1): output 0 from the marker, which is the 2nd distinct name
        assert_eq!(reaction9(&[1, 0, 5, 1, 0, 6, 1, 0, 7]), Reaction::Copy(1));
        // trident at C1, C4, C7
        assert_eq!(reaction9(&[5, 1, 0, 6, 0, 0, 7, 1, 0]), Reaction::Fresh);
        // trident at C2, C5, C8
        assert_eq!(reaction9(&[0, 5, 1, 0, 6, 1, 0, 7, 0]), Reaction::Copy(0));
    }

    #[test]
    fn rule9_is_legal_on_every_pattern() {
        let rule = build_rule9_110();
        for p in PatternIter::new(9) {
            assert!(
                rule.reaction_for_pattern(p.as_slice())
                    .is_legal_for(p.as_slice()),
                "{p}"
            );
        }
    }

    #[test]
    fn coded_rows_stay_well_formed() {
        let bits = random_bits(10, 4);
        let c = encode12(&bits).unwrap();
        let next = step(&c.cells, &build_rule12(EcaRule(54))).unwrap();
        assert!(decode_row(&next.cells, 4).is_ok());
        let c = encode9(&bits).unwrap();
        let next = step(&c.cells, &build_rule9_110()).unwrap();
        assert!(decode_row(&next.cells, 3).is_ok());
    }

    #[test]
    fn verify_examples() {
        assert!(verify_simulation(EcaRule(142), 32, 32, 1, Variant::Direct)
            .unwrap()
            .matched());
        assert!(verify_simulation(EcaRule(110), 16, 24, 1, Variant::D9)
            .unwrap()
            .matched());
        assert!(verify_simulation(EcaRule(30), 8, 16, 1, Variant::D12)
            .unwrap()
            .matched());
    }

    #[test]
    fn verify_preconditions() {
        assert!(verify_simulation(EcaRule(30), 16, 8, 0, Variant::D9).is_err());
        assert!(verify_simulation(EcaRule(110), 16, 8, 0, Variant::Direct).is_err());
        assert!(verify_simulation(EcaRule(110), 2, 8, 0, Variant::D12).is_err());
    }

    #[test]
    fn variant_parsing() {
        for v in [Variant::Direct, Variant::D12, Variant::D9] {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert!("d10".parse::<Variant>().is_err());
    }
}
