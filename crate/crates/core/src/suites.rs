//! End-to-end check suites, run by `nca verify` and the acceptance tests.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::analysis::{classify, BehaviourClass};
use crate::eca::EcaRule;
use crate::engine::{make_init, InitKind};
use crate::error::{NcaError, Result};
use crate::pattern::{bell, enumerate_patterns};
use crate::rule::space_size;
use crate::simulation::{directly_simulable, enca_simulators, verify_simulation, Variant};

/// First Bell numbers, d = 1..=11.
pub const KNOWN_BELL: [u64; 11] = [1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570];

/// Exact rule-space sizes for d = 2..=5.
pub const SPACE_SIZES: [(usize, &str); 4] = [
    (2, "6"),
    (3, "216"),
    (4, "89579520"),
    (5, "1893214811085172899840000000000"),
];

/// Decimal digit counts required for d = 6..=8.
pub const SPACE_SIZE_DIGITS: [(usize, usize); 3] = [(6, 128), (7, 585), (8, 2900)];

pub const DIRECT_SET: [u8; 8] = [142, 150, 170, 178, 204, 212, 232, 240];

/// Class count reported for the two-run initial condition.
pub const TWO_RUN_TARGET: usize = 93;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    SpaceSizes,
    Bell,
    Direct8,
    D12All,
    D9_110,
    Classes,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::SpaceSizes,
        Suite::Bell,
        Suite::Direct8,
        Suite::D12All,
        Suite::D9_110,
        Suite::Classes,
    ];
}

impl FromStr for Suite {
    type Err = NcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(Suite::SpaceSizes),
            "bell" => Ok(Suite::Bell),
            "direct8" => Ok(Suite::Direct8),
            "d12-all" => Ok(Suite::D12All),
            "d9-110" => Ok(Suite::D9_110),
            "classes" => Ok(Suite::Classes),
            _ => Err(NcaError::Parse(format!("unknown suite `{s}`"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::SpaceSizes => "table1",
            Suite::Bell => "bell",
            Suite::Direct8 => "direct8",
            Suite::D12All => "d12-all",
            Suite::D9_110 => "d9-110",
            Suite::Classes => "classes",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match suite {
        Suite::SpaceSizes => space_sizes()?,
        Suite::Bell => bell_suite()?,
        Suite::Direct8 => direct8(5, 64, 64)?,
        Suite::D12All => d12_all(3, 8, 16)?,
        Suite::D9_110 => d9_110(5, 16, 32)?,
        Suite::Classes => classes()?,
    };
    Ok(SuiteReport {
        suite,
        checks,
        elapsed: start.elapsed(),
    })
}

pub fn space_sizes() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (d, want) in SPACE_SIZES {
        let got = space_size(d)?.to_string();
        checks.push(Check::new(format!("SpaceSize({d})"), got == want, got));
    }
    for (d, want) in SPACE_SIZE_DIGITS {
        let got = space_size(d)?.to_string().len();
        checks.push(Check::new(
            format!("SpaceSize({d}) digits"),
            got == want,
            format!("{got} digits (required {want})"),
        ));
    }
    Ok(checks)
}

pub fn bell_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for d in 1..=12 {
        let enumerated = enumerate_patterns(d)?.len();
        let b = bell(d).to_usize().expect("small Bell number");
        let mut ok = enumerated == b;
        let mut detail = format!("bell={b} enumerated={enumerated}");
        if let Some(&known) = KNOWN_BELL.get(d - 1) {
            ok &= b as u64 == known;
            detail.push_str(&format!(" known={known}"));
        }
        checks.push(Check::new(format!("Bell({d})"), ok, detail));
    }
    Ok(checks)
}

pub fn direct8(seeds: u64, width: usize, steps: usize) -> Result<Vec<Check>> {
    let found: Vec<u8> = EcaRule::all()
        .filter(|&e| directly_simulable(e))
        .map(|e| e.0)
        .collect();
    let mut checks = vec![Check::new(
        "directly simulable set",
        found == DIRECT_SET,
        format!("{found:?}"),
    )];
    for &eca in &found {
        let eca = EcaRule(eca);
        let sims = enca_simulators(eca)?;
        let mut failure = None;
        for seed in 0..seeds {
            let report = verify_simulation(eca, width, steps, seed, Variant::Direct)?;
            if let Some(d) = report.divergence {
                failure = Some(format!("seed {seed}: {d}"));
                break;
            }
        }
        checks.push(Check::new(
            format!("{eca} via ENCA {sims:?}"),
            failure.is_none(),
            failure.unwrap_or_else(|| format!("{seeds} seeds, width {width}, {steps} steps")),
        ));
    }
    Ok(checks)
}

pub fn d12_all(seeds: u64, width_bits: usize, steps: usize) -> Result<Vec<Check>> {
    let failures = EcaRule::all()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&eca| {
            for seed in 0..seeds {
                let report = verify_simulation(eca, width_bits, steps, seed, Variant::D12)?;
                if let Some(d) = report.divergence {
                    return Ok(Some(format!("{eca} seed {seed}: {d}")));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<String> = failures.into_iter().flatten().collect();
    Ok(vec![Check::new(
        "all 256 ECAs at diameter 12",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{seeds} seeds each, {width_bits} bits, {steps} steps")
        } else {
            failures.join("; ")
        },
    )])
}

pub fn d9_110(seeds: u64, width_bits: usize, steps: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for seed in 0..seeds {
        let report = verify_simulation(EcaRule(110), width_bits, steps, seed, Variant::D9)?;
        checks.push(Check::new(
            format!("ECA 110 at diameter 9, seed {seed}"),
            report.matched(),
            report.divergence.map_or_else(
                || format!("{width_bits} bits, {steps} steps"),
                |d| d.to_string(),
            ),
        ));
    }
    Ok(checks)
}

fn stepped(start: u32, step: usize) -> Vec<u32> {
    (start..216).step_by(step).collect()
}

/// Class counts of all 216 elementary rules for each step count in `steps`.
pub fn class_counts(
    init: InitKind,
    steps: impl IntoIterator<Item = usize>,
) -> Result<Vec<(usize, usize)>> {
    let all: Vec<u32> = (0..216).collect();
    let config = make_init(init)?;
    steps
        .into_iter()
        .map(|t| Ok((t, classify(&all, &config, t)?.len())))
        .collect()
}

fn expected_uniform_classes() -> Vec<Vec<u32>> {
    vec![
        (0..108).collect(),
        stepped(108, 4),
        stepped(109, 4),
        stepped(110, 4),
        stepped(111, 4),
    ]
}

pub fn classes() -> Result<Vec<Check>> {
    let all: Vec<u32> = (0..216).collect();
    let mut checks = Vec::new();

    let uniform = make_init(InitKind::Uniform(12))?;
    let expected = expected_uniform_classes();
    let mut bad = Vec::new();
    for t in 4..=24 {
        let got: Vec<Vec<u32>> = classify(&all, &uniform, t)?
            .into_iter()
            .map(|c: BehaviourClass| c.members)
            .collect();
        if got != expected {
            bad.push(format!("T={t}: {} classes", got.len()));
        }
    }
    checks.push(Check::new(
        "uniform(12): 5 classes with the shift families, T=4..24",
        bad.is_empty(),
        if bad.is_empty() {
            "labels 0, 108, 109, 110, 111".to_string()
        } else {
            bad.join("; ")
        },
    ));

    let distinct = classify(&all, &make_init(InitKind::AllDistinct(12))?, 12)?;
    checks.push(Check::new(
        "all-distinct(12): 4 classes",
        distinct.len() == 4,
        format!("{} classes", distinct.len()),
    ));

    let counts = class_counts(InitKind::TwoRuns(13, 13), 13..=30)?;
    let first = counts[0].1;
    let stable = counts.iter().all(|&(_, c)| c == first);
    let listing: Vec<String> = counts.iter().map(|(t, c)| format!("{t}:{c}")).collect();
    checks.push(Check::new(
        "two-runs(13,13): count stable over T=13..30",
        stable,
        listing.join(" "),
    ));
    checks.push(Check::new(
        "two-runs(13,13): stabilized count",
        stable && first == TWO_RUN_TARGET,
        format!("{first} classes (target {TWO_RUN_TARGET})"),
    ));
    Ok(checks)
}
