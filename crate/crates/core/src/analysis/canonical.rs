use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{run, Configuration, Diagram};
use crate::error::Result;
use crate::pattern::Name;
use crate::rule::{enca, Rule};

/// A diagram renamed by first occurrence in row-major order.
///
/// Two diagrams have equal canonical forms iff a name bijection maps one
/// onto the other.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalDiagram {
    pub width: usize,
    pub height: usize,
    pub rows: Vec<Vec<Name>>,
}

/// Renames `rows` by first occurrence in row-major order.
pub fn canonical_rows(rows: &[Vec<Name>]) -> CanonicalDiagram {
    let mut map: HashMap<Name, Name> = HashMap::new();
    let rows: Vec<Vec<Name>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|n| {
                    let next = Name(map.len() as u64);
                    *map.entry(*n).or_insert(next)
                })
                .collect()
        })
        .collect();
    CanonicalDiagram {
        width: rows.first().map_or(0, Vec::len),
        height: rows.len(),
        rows,
    }
}

pub fn canonical(diagram: &Diagram) -> CanonicalDiagram {
    canonical_rows(&diagram.rows)
}

/// Rules sharing one canonical diagram, labelled by the smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BehaviourClass {
    pub label: u32,
    pub size: usize,
    pub members: Vec<u32>,
}

/// Partitions `rules` by the canonical form of their diagram from `init`.
/// `make_rule` turns a rule number into a rule.
pub fn classify_rules<F>(
    rules: &[u32],
    init: &Configuration,
    steps: usize,
    make_rule: F,
) -> Result<Vec<BehaviourClass>>
where
    F: Fn(u32) -> Result<Rule> + Sync,
{
    let mut sorted = rules.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let forms = sorted
        .par_iter()
        .map(|&n| Ok((n, canonical(&run(init, &make_rule(n)?, steps)?))))
        .collect::<Result<Vec<_>>>()?;

    // Merge in rule order, so each class's first member is its label.
    let mut index: HashMap<&CanonicalDiagram, usize> = HashMap::new();
    let mut classes: Vec<BehaviourClass> = Vec::new();
    for (n, form) in &forms {
        let slot = *index.entry(form).or_insert_with(|| {
            classes.push(BehaviourClass {
                label: *n,
                size: 0,
                members: Vec::new(),
            });
            classes.len() - 1
        });
        classes[slot].members.push(*n);
        classes[slot].size += 1;
    }
    Ok(classes)
}

/// Classifies elementary rules (numbers 0..=215).
pub fn classify(rules: &[u32], init: &Configuration, steps: usize) -> Result<Vec<BehaviourClass>> {
    classify_rules(rules, init, steps, enca)
}
