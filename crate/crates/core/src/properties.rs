//! Randomized invariants checked with proptest.

use proptest::prelude::*;

use crate::analysis::{canonical, detect_classical_particles, detect_nominal_particles};
use crate::eca::EcaRule;
use crate::engine::{cell_outcome, resolve, run, step, step_par, Configuration, Outcome};
use crate::io::{dump, load};
use crate::pattern::{canonicalize, enumerate_patterns, Name};
use crate::rule::{decode_rule, enca, encode_rule, Rule};
use crate::simulation::{build_rule12, build_rule9_110, decode_row, encode12, encode9};

fn config(values: Vec<u64>) -> Configuration {
    Configuration::from_values(&values)
}

fn rows() -> impl Strategy<Value = Configuration> {
    prop::collection::vec(0u64..5, 3..24).prop_map(config)
}

fn bits(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, 3..max)
}

/// Random digits valid for diameter `d`.
fn digits(d: usize) -> Vec<BoxedStrategy<usize>> {
    enumerate_patterns(d)
        .unwrap()
        .iter()
        .map(|p| (0..=p.distinct_count()).boxed())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn engine_is_deterministic(n in 0u32..216, init in rows(), steps in 0usize..20) {
        let rule = enca(n).unwrap();
        let a = run(&init, &rule, steps).unwrap();
        prop_assert_eq!(&a, &run(&init, &rule, steps).unwrap());
        prop_assert_eq!(step(&init, &rule).unwrap(), step_par(&init, &rule).unwrap());
    }

    #[test]
    fn new_names_come_from_the_counter(n in 0u32..216, init in rows(), steps in 1usize..20) {
        let d = run(&init, &enca(n).unwrap(), steps).unwrap();
        let mut counter = init.fresh_counter;
        for t in 1..d.height() {
            for name in &d.rows[t] {
                if !d.rows[t - 1].contains(name) {
                    prop_assert_eq!(name.0, counter);
                    counter += 1;
                }
            }
        }
        prop_assert_eq!(counter, d.fresh_counter);
    }

    #[test]
    fn copies_come_from_the_context(n in 0u32..216, init in rows()) {
        let next = step(&init, &enca(n).unwrap()).unwrap();
        let w = init.width();
        for (i, name) in next.cells.iter().enumerate() {
            let ctx = [init.cells[(i + w - 1) % w], init.cells[i], init.cells[(i + 1) % w]];
            prop_assert!(ctx.contains(name) || name.0 >= init.fresh_counter);
        }
    }

    #[test]
    fn renaming_commutes_with_evolution(
        n in 0u32..216,
        init in rows(),
        scale in 1u64..50,
        offset in 0u64..1000,
        steps in 0usize..15,
    ) {
        let rule = enca(n).unwrap();
        let renamed = Configuration::new(init.cells.iter().map(|c| Name(c.0 * scale + offset)).collect());
        let a = run(&init, &rule, steps).unwrap();
        let b = run(&renamed, &rule, steps).unwrap();
        prop_assert_eq!(canonical(&a), canonical(&b));
    }

    #[test]
    fn canonicalize_ignores_renaming(ctx in prop::collection::vec(0u64..6, 1..13), shift in 1u64..100) {
        let names: Vec<Name> = ctx.iter().map(|&v| Name(v)).collect();
        let renamed: Vec<Name> = ctx.iter().map(|&v| Name(v * 3 + shift)).collect();
        prop_assert_eq!(canonicalize(&names).unwrap(), canonicalize(&renamed).unwrap());
    }

    #[test]
    fn evaluation_order_is_irrelevant(
        n in 0u32..216,
        (init, order) in rows().prop_flat_map(|c| {
            let w = c.width();
            (Just(c), Just((0..w).collect::<Vec<_>>()).prop_shuffle())
        }),
    ) {
        let rule = enca(n).unwrap();
        let mut outcomes = vec![Outcome::Fresh; init.width()];
        for i in order {
            outcomes[i] = cell_outcome(&init.cells, &rule, i).unwrap();
        }
        prop_assert_eq!(resolve(outcomes, init.fresh_counter), step(&init, &rule).unwrap());
    }

    #[test]
    fn d12_coding_survives_stepping(eca in any::<u8>(), b in bits(10), steps in 1usize..12) {
        let coded = encode12(&b).unwrap();
        let d = run(&coded.cells, &build_rule12(EcaRule(eca)), steps).unwrap();
        for row in &d.rows {
            prop_assert!(decode_row(row, 4).is_ok());
        }
    }

    #[test]
    fn d9_coding_survives_stepping(b in bits(12), steps in 1usize..12) {
        let coded = encode9(&b).unwrap();
        let d = run(&coded.cells, &build_rule9_110(), steps).unwrap();
        for row in &d.rows {
            prop_assert!(decode_row(row, 3).is_ok());
        }
    }

    #[test]
    fn classical_particles_are_nominal(n in 0u32..216, init in rows(), steps in 6usize..18) {
        let d = run(&init, &enca(n).unwrap(), steps).unwrap();
        let nominal = detect_nominal_particles(&d, 3, 3).particles;
        for c in detect_classical_particles(&d, 3, 3).particles {
            prop_assert!(nominal.iter().any(|p| p.covers(&c, d.width)), "{:?}", c);
        }
    }

    #[test]
    fn enca8_isolated_one_is_a_nominal_particle(width in 6usize..40, pos in 0usize..40, steps in 3usize..24) {
        let mut row = vec![0u64; width];
        row[pos % width] = 1;
        let d = run(&config(row), &enca(8).unwrap(), steps).unwrap();
        let found = detect_nominal_particles(&d, 1, 1)
            .particles
            .into_iter()
            .any(|p| p.window.width == 1 && p.drift == 1 && p.is_properly_nominal());
        prop_assert!(found);
    }

    #[test]
    fn codec_round_trips((d, sample) in (1usize..=5).prop_flat_map(|d| (Just(d), digits(d)))) {
        let rule = Rule::from_digits(d, (d - 1) / 2, &sample).unwrap();
        let number = encode_rule(&rule).unwrap();
        prop_assert_eq!(decode_rule(&number, d).unwrap().digits(), Some(sample));
    }

    #[test]
    fn json_round_trips(n in 0u32..216, init in rows(), steps in 0usize..10) {
        let d = run(&init, &enca(n).unwrap(), steps).unwrap();
        prop_assert_eq!(load(&dump(&d)).unwrap(), d);
    }
}

#[test]
fn d12_rule_is_legal_on_every_pattern() {
    for eca in [30u8, 110, 184] {
        let rule = build_rule12(EcaRule(eca));
        for p in enumerate_patterns(12).unwrap() {
            let r = rule.reaction_for_pattern(p.as_slice());
            assert!(r.is_legal_for(p.as_slice()), "ECA {eca}: {r} on {p}");
        }
    }
}
