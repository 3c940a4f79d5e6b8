use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nca_core::analysis::{detect_classical_particles, detect_nominal_particles, ParticleScan};
use nca_core::engine::run_from;
use nca_core::io::{self, ClassReport, ImageFormat, Palette, RenderSpec};
use nca_core::suites::class_counts;
use nca_core::{
    classical_space_size, classify, decode_rule, enca, make_init, run_suite, space_size,
    verify_simulation, BigUint, EcaRule, InitKind, Suite, Variant,
};

#[derive(Parser)]
#[command(name = "nca", version, about = "Nominal cellular automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact number of diameter-d rules.
    SpaceSize {
        #[arg(long)]
        d: usize,
        /// Also print k^(k^d), the classical k-colour count.
        #[arg(long)]
        compare_colors: Option<u32>,
    },
    /// Run a numbered rule and write the spacetime diagram.
    Run {
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Cells strictly left of the updated cell; defaults to (d-1)/2.
        #[arg(long)]
        anchor: Option<usize>,
        #[command(flatten)]
        init: InitArgs,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        png: Option<PathBuf>,
        #[arg(long)]
        pgm: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = PaletteArg::Ramp)]
        palette: PaletteArg,
        /// Pixels per cell side.
        #[arg(long, default_value_t = 1)]
        cell_size: usize,
    },
    /// Group all 216 ENCAs by their canonical diagram.
    Classify {
        #[command(flatten)]
        init: InitArgs,
        #[arg(long)]
        steps: Option<usize>,
        /// Print the class count for every T in A..B (inclusive).
        #[arg(long)]
        t_range: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run an ECA next to its nominal simulator and compare cell by cell.
    SimulateEca {
        #[arg(long)]
        eca: u8,
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        width_bits: usize,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a named check suite; exit status 0 iff every check passes.
    Verify {
        #[arg(long)]
        suite: Suite,
    },
    /// Search an ENCA diagram for classical and nominal particles.
    Particles {
        #[arg(long)]
        rule: u32,
        #[command(flatten)]
        init: InitArgs,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        wmax: usize,
        #[arg(long)]
        pmax: usize,
        #[arg(long, value_enum, default_value_t = Kind::Both)]
        kind: Kind,
        #[arg(long)]
        json: bool,
    },
}

#[derive(clap::Args)]
struct InitArgs {
    /// uniform[:N] | two-runs:A,B | distinct[:N] | random:N
    #[arg(long)]
    init: String,
    /// Seed for random inits.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Width for the bare `uniform` and `distinct` forms.
    #[arg(long, default_value_t = 12)]
    width: usize,
}

impl InitArgs {
    fn kind(&self) -> Result<InitKind> {
        Ok(InitKind::parse(&self.init, self.width, self.seed)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PaletteArg {
    Ramp,
    Hash,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Classical,
    Nominal,
    Both,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::SpaceSize { d, compare_colors } => {
            let size = space_size(d)?;
            println!("SpaceSize({d}) = {size}");
            println!("digits = {}", size.to_string().len());
            if let Some(k) = compare_colors {
                let exp = u32::try_from(d).context("diameter too large")?;
                let classical = classical_space_size(k, exp)?;
                println!("{k}^({k}^{d}) = {classical}");
            }
        }
        Command::Run {
            rule,
            d,
            anchor,
            init,
            steps,
            out,
            png,
            pgm,
            palette,
            cell_size,
        } => {
            let number: BigUint = rule
                .parse()
                .with_context(|| format!("bad rule number `{rule}`"))?;
            let mut rule = decode_rule(&number, d)?;
            if let Some(a) = anchor {
                rule = rule.with_anchor(a)?;
            }
            let diagram = run_from(init.kind()?, &rule, steps)?;
            let palette = match palette {
                PaletteArg::Ramp => Palette::FirstOccurrence,
                PaletteArg::Hash => Palette::Hash,
            };
            let mut wrote = false;
            if let Some(path) = out {
                fs::write(&path, io::dump(&diagram))
                    .with_context(|| format!("writing {}", path.display()))?;
                wrote = true;
            }
            for (path, format) in [(pgm, ImageFormat::Pgm), (png, ImageFormat::Png)] {
                if let Some(path) = path {
                    let bytes = io::render(
                        &diagram,
                        &RenderSpec {
                            palette,
                            cell_size,
                            format,
                        },
                    )?;
                    fs::write(&path, bytes)
                        .with_context(|| format!("writing {}", path.display()))?;
                    wrote = true;
                }
            }
            if !wrote {
                print!("{}", io::name_matrix(&diagram));
            }
        }
        Command::Classify {
            init,
            steps,
            t_range,
            json,
        } => {
            let kind = init.kind()?;
            match (steps, t_range) {
                (_, Some(range)) => {
                    let (a, b) = parse_range(&range)?;
                    let counts = class_counts(kind, a..=b)?;
                    if json {
                        println!("{}", serde_json::to_string_pretty(&counts)?);
                    } else {
                        println!("# init {kind}");
                        println!("{:>4}  classes", "T");
                        for (t, c) in counts {
                            println!("{t:>4}  {c}");
                        }
                    }
                }
                (Some(t), None) => {
                    let all: Vec<u32> = (0..216).collect();
                    let classes = classify(&all, &make_init(kind)?, t)?;
                    let report = ClassReport::new(kind.to_string(), t, classes);
                    if json {
                        println!("{}", report.to_json());
                    } else {
                        print!("{}", report.to_table());
                    }
                }
                (None, None) => bail!("classify needs --steps or --t-range"),
            }
        }
        Command::SimulateEca {
            eca,
            variant,
            width_bits,
            steps,
            seed,
        } => {
            let report = verify_simulation(EcaRule(eca), width_bits, steps, seed, variant)?;
            match &report.divergence {
                None => println!(
                    "MATCH {} {variant} bits={width_bits} steps={steps} seed={seed}",
                    report.eca
                ),
                Some(d) => {
                    println!("MISMATCH {} {variant} seed={seed}", report.eca);
                    println!("first divergence: {d}");
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Command::Verify { suite } => {
            let report = run_suite(suite)?;
            for check in &report.checks {
                println!("{check}");
            }
            let verdict = if report.passed() { "PASS" } else { "FAIL" };
            println!("{verdict} {suite} ({:.2?})", report.elapsed);
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Particles {
            rule,
            init,
            steps,
            wmax,
            pmax,
            kind,
            json,
        } => {
            let diagram = run_from(init.kind()?, &enca(rule)?, steps)?;
            let mut scans: Vec<(&str, ParticleScan)> = Vec::new();
            if kind != Kind::Nominal {
                scans.push((
                    "classical",
                    detect_classical_particles(&diagram, wmax, pmax),
                ));
            }
            if kind != Kind::Classical {
                scans.push(("nominal", detect_nominal_particles(&diagram, wmax, pmax)));
            }
            if json {
                let map: serde_json::Map<String, serde_json::Value> = scans
                    .iter()
                    .map(|(k, s)| Ok((k.to_string(), serde_json::to_value(s)?)))
                    .collect::<Result<_>>()?;
                println!("{}", serde_json::to_string_pretty(&map)?);
            } else {
                for (label, scan) in &scans {
                    print_scan(label, scan);
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_scan(label: &str, scan: &ParticleScan) {
    match &scan.background {
        Some(bg) => println!(
            "{label}: background on {} steps, coverage {:.2}",
            bg.steps.len(),
            bg.coverage
        ),
        None => println!("{label}: no background"),
    }
    println!("{label}: {} particles", scan.particles.len());
    println!("  step  cell  width  period  drift  periods  proper");
    for p in &scan.particles {
        println!(
            "  {:>4}  {:>4}  {:>5}  {:>6}  {:>5}  {:>7}  {}",
            p.window.step,
            p.window.cell,
            p.window.width,
            p.period,
            p.drift,
            p.periods,
            if p.is_properly_nominal() { "yes" } else { "-" }
        );
    }
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once("..")
        .with_context(|| format!("expected A..B, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {s}");
    }
    Ok((a, b))
}
