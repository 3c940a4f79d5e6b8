//! Acceptance gate: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use nca_core::analysis::{canonical_rows, detect_classical_particles, detect_nominal_particles};
use nca_core::engine::{run, Configuration};
use nca_core::pattern::{bell, enumerate_patterns, Name};
use nca_core::rule::{decode_rule, enca, encode_rule, space_size, Reaction};
use nca_core::simulation::{decode_row, encode12, encode9};
use nca_core::suites::{
    self, Check, DIRECT_SET, KNOWN_BELL, SPACE_SIZE_DIGITS, SPACE_SIZES, TWO_RUN_TARGET,
};
use nca_core::{build_rule12, build_rule9_110, BigUint, EcaRule};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn absorb(&mut self, checks: Vec<Check>) {
        for c in checks {
            if !c.passed {
                self.failures.push(format!("{}: {}", c.name, c.detail));
            }
        }
    }
}

fn c1_space_sizes(o: &mut Outcome) {
    for (d, want) in SPACE_SIZES {
        let got = space_size(d).unwrap().to_string();
        o.check(
            got == want,
            format!("SpaceSize({d}) = {got}, expected {want}"),
        );
    }
    for (d, want) in SPACE_SIZE_DIGITS {
        let got = space_size(d).unwrap().to_string().len();
        o.notes.push(format!("d={d}: {got} digits"));
        o.check(
            got == want,
            format!("SpaceSize({d}) has {got} digits, expected {want}"),
        );
    }
}

fn c2_bell(o: &mut Outcome) {
    for d in 1..=12 {
        let n = enumerate_patterns(d).unwrap().len();
        o.check(
            bell(d) == BigUint::from(n),
            format!("bell({d}) != enumerated {n}"),
        );
        if let Some(&p) = KNOWN_BELL.get(d - 1) {
            o.check(n as u64 == p, format!("d={d}: {n} patterns, known {p}"));
        }
    }
}

fn c3_codec(o: &mut Outcome) {
    let r87 = decode_rule(&BigUint::from(87u32), 3).unwrap();
    o.check(
        r87.digits() == Some(vec![0, 2, 1, 0, 3]),
        format!("digits of 87: {:?}", r87.digits()),
    );
    let expected = [
        Reaction::Copy(0),
        Reaction::Fresh,
        Reaction::Copy(1),
        Reaction::Copy(0),
        Reaction::Fresh,
    ];
    for (rgs, want) in enumerate_patterns(3).unwrap().iter().zip(expected) {
        let got = r87.reaction_for_pattern(rgs.as_slice());
        o.check(got == want, format!("87 on {rgs}: {got}, expected {want}"));
    }
    for n in 0u32..216 {
        let back = encode_rule(&enca(n).unwrap()).unwrap();
        o.check(
            back == BigUint::from(n),
            format!("encode(decode({n})) = {back}"),
        );
    }
    o.check(enca(216).is_err(), "216 accepted");
    o.check(
        decode_rule(&BigUint::from(216u32), 3).is_err(),
        "decode_rule(216, 3) accepted",
    );
}

fn c4_direct(o: &mut Outcome) {
    let checks = suites::direct8(5, 64, 64).unwrap();
    o.check(
        checks
            .first()
            .is_some_and(|c| c.detail == format!("{DIRECT_SET:?}")),
        "directly simulable set differs",
    );
    o.absorb(checks);
}

fn c7_classes(o: &mut Outcome) {
    let checks = suites::classes().unwrap();
    if let Some(c) = checks.iter().find(|c| c.name.ends_with("stabilized count")) {
        o.notes.push(format!(
            "two-run {} (target {TWO_RUN_TARGET})",
            c.detail.split(" (").next().unwrap()
        ));
    }
    o.absorb(checks);
}

fn random_row(rng: &mut StdRng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2)).collect()
}

fn random_names(rng: &mut StdRng, n: usize, k: u64) -> Configuration {
    Configuration::new((0..n).map(|_| Name(rng.random_range(0..k))).collect())
}

fn c8_properties(o: &mut Outcome) {
    const CASES: usize = 100;
    let mut rng = StdRng::seed_from_u64(8);
    let mut counts = [0usize; 6];
    for _ in 0..CASES {
        let rule = enca(rng.random_range(0..216)).unwrap();
        let width = rng.random_range(3..24);
        let init = random_names(&mut rng, width, 5);
        let steps = rng.random_range(1..20);

        // determinism
        let a = run(&init, &rule, steps).unwrap();
        let b = run(&init, &rule, steps).unwrap();
        o.check(a == b, format!("{} not deterministic", rule.label()));
        counts[0] += 1;

        // name origin: a name absent from the previous row is the next fresh one
        let mut ok = true;
        let mut counter = init.fresh_counter;
        for t in 1..a.height() {
            for &name in &a.rows[t] {
                if !a.rows[t - 1].contains(&name) {
                    ok &= name.0 == counter;
                    counter += 1;
                }
            }
        }
        ok &= counter == a.fresh_counter;
        o.check(ok, format!("{}: unexplained name", rule.label()));
        counts[1] += 1;

        // bijective renaming commutes with evolution
        let offset = rng.random_range(1000..2000);
        let renamed =
            Configuration::new(init.cells.iter().map(|n| Name(n.0 * 7 + offset)).collect());
        let c = run(&renamed, &rule, steps).unwrap();
        o.check(
            canonical_rows(&a.rows) == canonical_rows(&c.rows),
            format!("{}: canonical diagram changed by renaming", rule.label()),
        );
        counts[2] += 1;

        // coding invariants under stepping
        let eca = EcaRule(rng.random());
        let len = rng.random_range(3..10);
        let bits = random_row(&mut rng, len);
        let coded = encode12(&bits).unwrap();
        let d12 = run(&coded.cells, &build_rule12(eca), 8).unwrap();
        let len = rng.random_range(3..10);
        let bits9 = random_row(&mut rng, len);
        let coded9 = encode9(&bits9).unwrap();
        let d9 = run(&coded9.cells, &build_rule9_110(), 8).unwrap();
        let well_formed = d12.rows.iter().all(|r| decode_row(r, 4).is_ok())
            && d9.rows.iter().all(|r| decode_row(r, 3).is_ok());
        o.check(well_formed, format!("coded row broke invariant for {eca}"));
        counts[3] += 1;

        // classical particles are nominal particles
        let diag = run(&init, &rule, 16).unwrap();
        let classical = detect_classical_particles(&diag, 3, 3).particles;
        let nominal = detect_nominal_particles(&diag, 3, 3).particles;
        let contained = classical
            .iter()
            .all(|c| nominal.iter().any(|n| n.covers(c, diag.width)));
        o.check(
            contained,
            format!("{}: classical particle without nominal cover", rule.label()),
        );
        counts[4] += 1;

        // ENCA 8 from an isolated 1
        let n = rng.random_range(8..40);
        let pos = rng.random_range(0..n);
        let mut row = vec![0u64; n];
        row[pos] = 1;
        let d8 = run(
            &Configuration::from_values(&row),
            &enca(8).unwrap(),
            n.min(20),
        )
        .unwrap();
        let found = detect_nominal_particles(&d8, 1, 1)
            .particles
            .iter()
            .any(|p| p.window.width == 1 && p.drift == 1 && p.is_properly_nominal());
        o.check(
            found,
            format!("ENCA 8 isolated 1 at {pos}/{n}: no proper nominal drift +1 particle"),
        );
        counts[5] += 1;
    }
    o.notes.push(format!("{CASES} cases per suite"));
    o.check(counts.iter().all(|&c| c >= 100), "fewer than 100 cases");
}

fn main() {
    type Criterion = (&'static str, Duration, fn(&mut Outcome));
    let criteria: [Criterion; 8] = [
        ("space sizes", Duration::from_secs(1), c1_space_sizes),
        ("Bell cross-check", Duration::from_secs(10), c2_bell),
        ("rule codec", Duration::from_secs(1), c3_codec),
        ("direct simulation", Duration::from_secs(30), c4_direct),
        (
            "generic simulation at diameter 12",
            Duration::from_secs(300),
            |o| o.absorb(suites::d12_all(3, 8, 16).unwrap()),
        ),
        ("ECA 110 at diameter 9", Duration::from_secs(10), |o| {
            o.absorb(suites::d9_110(5, 16, 32).unwrap())
        }),
        ("behaviour classes", Duration::from_secs(60), c7_classes),
        ("property suites", Duration::from_secs(600), c8_properties),
    ];

    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let mut o = Outcome::new();
        let start = Instant::now();
        f(&mut o);
        let elapsed = start.elapsed();
        if elapsed > *limit {
            o.failures
                .push(format!("took {elapsed:.2?}, limit {limit:?}"));
        }
        let status = if o.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let notes = if o.notes.is_empty() {
            String::new()
        } else {
            format!(" [{}]", o.notes.join("; "))
        };
        println!(
            "{status} criterion {}: {name} ({elapsed:.2?}){notes}",
            i + 1
        );
        for f in &o.failures {
            println!("    {f}");
        }
        failed += usize::from(!o.failures.is_empty());
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
