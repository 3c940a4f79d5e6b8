//! Nominal cellular automata.
//!
//! Cells hold *names*: tokens that can only be compared, copied, or freshly
//! created. A rule reads the equality pattern of a cell's context and either
//! copies one of the context names or creates a new one.
//!
//! * [`pattern`]: names, equality patterns, Bell numbers.
//! * [`rule`]: rules, mixed-radix numbering and rule-space sizes.
//! * [`engine`] and [`eca`]: synchronous evolution of nominal and classical
//!   elementary automata.
//! * [`simulation`]: elementary CAs simulated by nominal CAs.
//! * [`analysis`]: classification up to renaming and particle detection.
//! * [`io`]: rendering and JSON.
//! * [`suites`]: end-to-end checks shared by the CLI and the test suite.

pub mod analysis;
pub mod eca;
pub mod engine;
pub mod error;
pub mod io;
pub mod pattern;
pub mod rule;
pub mod simulation;
pub mod suites;

pub use analysis::{canonical, classify, track_name, CanonicalDiagram, Particle, Trajectory};
pub use eca::{eca_run, eca_step, EcaRule};
pub use engine::{make_init, run, step, Configuration, Diagram, InitKind};
pub use error::{NcaError, Result};
pub use pattern::{bell, canonicalize, enumerate_patterns, EqualityPattern, Name};
pub use rule::{
    classical_space_size, decode_rule, enca, encode_rule, reaction_for, space_size, Reaction, Rule,
};
pub use simulation::{
    build_rule12, build_rule9_110, directly_simulable, enca_simulators, verify_simulation, Variant,
};
pub use suites::{run_suite, Check, Suite, SuiteReport};

pub use num_bigint::BigUint;

#[cfg(test)]
mod properties;
