//! Synchronous evolution of nominal CAs on circular arrays.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{NcaError, Result};
use crate::pattern::{canonicalize_into, Name};
use crate::rule::{Reaction, Rule};

/// A circular row of names plus the next unused name value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub cells: Vec<Name>,
    pub fresh_counter: u64,
}

impl Configuration {
    /// Wraps `cells`, starting the fresh counter just above the largest name.
    pub fn new(cells: Vec<Name>) -> Self {
        let fresh_counter = cells.iter().map(|n| n.0 + 1).max().unwrap_or(0);
        Self {
            cells,
            fresh_counter,
        }
    }

    pub fn from_values(values: &[u64]) -> Self {
        Self::new(values.iter().copied().map(Name).collect())
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    /// Takes the next fresh name.
    pub fn fresh(&mut self) -> Name {
        let n = Name(self.fresh_counter);
        self.fresh_counter += 1;
        n
    }
}

/// Stacked rows of a run; row 0 is the initial configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub width: usize,
    pub rule_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub fresh_counter: u64,
    pub rows: Vec<Vec<Name>>,
}

impl Diagram {
    /// Number of steps (rows minus one).
    pub fn steps(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn cell(&self, t: usize, i: usize) -> Name {
        self.rows[t][i]
    }
}

/// Initial condition families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Uniform(usize),
    TwoRuns(usize, usize),
    AllDistinct(usize),
    RandomBits { width: usize, seed: u64 },
}

impl InitKind {
    pub fn seed(&self) -> Option<u64> {
        match self {
            InitKind::RandomBits { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// Parses `uniform[:N]`, `two-runs:A,B`, `distinct[:N]` or `random:N`.
    /// `default_width` applies to the bare forms.
    pub fn parse(s: &str, default_width: usize, seed: u64) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let int = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|e| NcaError::Parse(format!("bad length `{v}`: {e}")))
        };
        let width = |arg: Option<&str>| arg.map_or(Ok(default_width), int);
        match kind {
            "uniform" => Ok(InitKind::Uniform(width(arg)?)),
            "distinct" | "all-distinct" => Ok(InitKind::AllDistinct(width(arg)?)),
            "random" => Ok(InitKind::RandomBits {
                width: width(arg)?,
                seed,
            }),
            "two-runs" => {
                let arg = arg.ok_or_else(|| NcaError::Parse("two-runs needs A,B".into()))?;
                let (a, b) = arg
                    .split_once(',')
                    .ok_or_else(|| NcaError::Parse(format!("two-runs expects A,B, got `{arg}`")))?;
                Ok(InitKind::TwoRuns(int(a)?, int(b)?))
            }
            _ => Err(NcaError::Parse(format!("unknown init `{s}`"))),
        }
    }
}

impl fmt::Display for InitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitKind::Uniform(n) => write!(f, "uniform:{n}"),
            InitKind::TwoRuns(a, b) => write!(f, "two-runs:{a},{b}"),
            InitKind::AllDistinct(n) => write!(f, "distinct:{n}"),
            InitKind::RandomBits { width, seed } => write!(f, "random:{width} (seed {seed})"),
        }
    }
}

impl FromStr for InitKind {
    type Err = NcaError;

    fn from_str(s: &str) -> Result<Self> {
        InitKind::parse(s, 12, 0)
    }
}

/// Uniformly random bits from ChaCha8 seeded with `seed_from_u64(seed)`.
/// The stream is stable across platforms and crate versions.
pub fn random_bits(width: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..width).map(|_| rng.random::<bool>() as u8).collect()
}

/// Builds an initial configuration.
pub fn make_init(kind: InitKind) -> Result<Configuration> {
    let zero = || NcaError::InvalidArgument("initial configuration needs length >= 1".into());
    let cells: Vec<u64> = match kind {
        InitKind::Uniform(n) => {
            if n == 0 {
                return Err(zero());
            }
            vec![0; n]
        }
        InitKind::TwoRuns(a, b) => {
            if a == 0 || b == 0 {
                return Err(zero());
            }
            std::iter::repeat_n(0, a)
                .chain(std::iter::repeat_n(1, b))
                .collect()
        }
        InitKind::AllDistinct(n) => {
            if n == 0 {
                return Err(zero());
            }
            (0..n as u64).collect()
        }
        InitKind::RandomBits { width, seed } => {
            if width == 0 {
                return Err(zero());
            }
            random_bits(width, seed)
                .into_iter()
                .map(u64::from)
                .collect()
        }
    };
    Ok(Configuration::from_values(&cells))
}

/// Result of evaluating one cell against the old row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Keep(Name),
    Fresh,
}

#[inline]
pub(crate) fn cell_outcome(cells: &[Name], rule: &Rule, i: usize) -> Result<Outcome> {
    let n = cells.len();
    let d = rule.diameter();
    let start = i + n - rule.anchor();
    let mut rgs = SmallVec::<[u8; 16]>::new();
    let mut distinct = SmallVec::<[Name; 16]>::new();
    canonicalize_into(
        (0..d).map(|j| cells[(start + j) % n]),
        &mut rgs,
        &mut distinct,
    );
    match rule.reaction_for_pattern(&rgs) {
        Reaction::Copy(k) => {
            distinct
                .get(k)
                .copied()
                .map(Outcome::Keep)
                .ok_or_else(|| NcaError::IllegalReaction {
                    reaction: format!("copy({k})"),
                    pattern: format!("{:?}", rgs.as_slice()),
                })
        }
        Reaction::Fresh => Ok(Outcome::Fresh),
    }
}

/// Assigns fresh names in increasing cell order.
pub(crate) fn resolve(outcomes: Vec<Outcome>, mut fresh_counter: u64) -> Configuration {
    let cells = outcomes
        .into_iter()
        .map(|o| match o {
            Outcome::Keep(name) => name,
            Outcome::Fresh => {
                let name = Name(fresh_counter);
                fresh_counter += 1;
                name
            }
        })
        .collect();
    Configuration {
        cells,
        fresh_counter,
    }
}

fn check_width(config: &Configuration, rule: &Rule) -> Result<()> {
    if config.width() < rule.diameter() {
        return Err(NcaError::ArrayTooShort);
    }
    Ok(())
}

/// One synchronous update. Every context is read from the old row; the
/// `Fresh` cells then receive consecutive counter values left to right.
pub fn step(config: &Configuration, rule: &Rule) -> Result<Configuration> {
    check_width(config, rule)?;
    let outcomes = (0..config.width())
        .map(|i| cell_outcome(&config.cells, rule, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(resolve(outcomes, config.fresh_counter))
}

/// Same as [`step`], evaluating cells on the rayon pool. Table rules are
/// too cheap to gain from it; expensive procedural rules on wide rows may.
pub fn step_par(config: &Configuration, rule: &Rule) -> Result<Configuration> {
    check_width(config, rule)?;
    let outcomes = (0..config.width())
        .into_par_iter()
        .map(|i| cell_outcome(&config.cells, rule, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(resolve(outcomes, config.fresh_counter))
}

/// Runs `steps` updates from `init`.
pub fn run(init: &Configuration, rule: &Rule, steps: usize) -> Result<Diagram> {
    check_width(init, rule)?;
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(init.cells.clone());
    let mut current = init.clone();
    for _ in 0..steps {
        current = step(&current, rule)?;
        rows.push(current.cells.clone());
    }
    Ok(Diagram {
        width: init.width(),
        rule_id: rule.label().to_string(),
        seed: None,
        fresh_counter: current.fresh_counter,
        rows,
    })
}

/// Builds the initial condition and runs it, recording the seed if any.
pub fn run_from(kind: InitKind, rule: &Rule, steps: usize) -> Result<Diagram> {
    let mut diagram = run(&make_init(kind)?, rule, steps)?;
    diagram.seed = kind.seed();
    Ok(diagram)
}
