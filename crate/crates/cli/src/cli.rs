//! Command-line surface.
//!
//! Exit codes: 0 success, 1 a condition or assumption failed, 2 a product
//! exceeded the state budget, 3 usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use scalsup_core::localize::{localize, verify_control_equivalence};
use scalsup_core::relabel::halves;
use scalsup_core::synthesis::{
    check_assumptions, check_condition_direct, check_condition_modular, full_plant, sup1,
    synthesize_corollary2, synthesize_refined, synthesize_scalable, verify_sscsp,
    ModularConditionReport,
};
use scalsup_core::{supcon, Generator};

use crate::error::CliError;
use crate::format::{load_generator, save_generator};
use crate::random::{random_plant, rng};
use crate::scenario::{resolve_scenario, Overrides, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "scalsup",
    version,
    about = "Scalable supervisor synthesis for groups of similar agents"
)]
struct Cli {
    /// Cap on product states for monolithic computations.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario file, or the name of a bundled scenario.
    scenario: String,
    /// Agent counts per group, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Parallelism per group, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Default a missing parallelism to 1.
    #[arg(long)]
    defaults: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check assumptions and the modular sufficient condition.
    Check {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Also run the direct (whole-plant) condition check.
        #[arg(long)]
        direct: bool,
    },
    /// Synthesize the scalable supervisor.
    Synth {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Split every group in halves with separate templates.
        #[arg(long, conflicts_with = "corollary2")]
        refined: bool,
        /// Use the relabeled whole plant instead of the parallel templates.
        #[arg(long)]
        corollary2: bool,
        /// Directory for output generators.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compute local controllers for every group.
    Localize {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compare the scalable supervisor and local controllers with the
    /// monolithic supervisors.
    Verify {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Compute the monolithic supervisors for the whole plant and for one
    /// agent per group.
    Oracle {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Convert a generator file to Graphviz DOT.
    ExportDot {
        generator: PathBuf,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized consistency check of the modular and direct conditions.
    Selfcheck {
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

/// Runs the tool on `argv` (including the program name) and returns the
/// exit code.
pub fn run_command(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(
    args: &ScenarioArgs,
    budget: Option<usize>,
    err: &mut dyn Write,
) -> Result<Scenario, CliError> {
    let overrides = Overrides {
        sizes: args.sizes.clone(),
        parallelism: args.k.clone(),
        defaults: args.defaults,
        budget,
    };
    let sc = resolve_scenario(&args.scenario, &overrides)?;
    for w in &sc.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(sc)
}

fn write_generator(
    dir: &Path,
    name: &str,
    g: &Generator,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    save_generator(&path, g)?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(())
}

fn print_condition(report: &ModularConditionReport, out: &mut dyn Write) {
    for g in &report.groups {
        let clone = if g.cloned {
            " (checked against a relabeled copy)"
        } else {
            ""
        };
        match &g.report.witness {
            None => {
                let _ = writeln!(out, "condition `{}`: pass{clone}", g.group);
            }
            Some(w) => {
                let _ = writeln!(out, "condition `{}`: FAIL {w}{clone}", g.group);
            }
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Check { scenario, direct } => {
            let sc = load(scenario, cli.budget, err)?;
            let report = check_assumptions(&sc.plant, &sc.spec);
            for (name, c) in report.checks() {
                match &c.detail {
                    None => writeln!(out, "{name}: pass"),
                    Some(d) => writeln!(out, "{name}: FAIL {d}"),
                }
                .ok();
            }
            let cond = check_condition_modular(&sc.plant)?;
            print_condition(&cond, out);
            let mut ok = report.all_passed() && cond.passed();
            if *direct {
                let d = check_condition_direct(&sc.plant, sc.budget)?;
                match &d.witness {
                    None => writeln!(out, "direct condition: pass"),
                    Some(w) => writeln!(out, "direct condition: FAIL {w}"),
                }
                .ok();
                ok &= d.controllable;
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Synth {
            scenario,
            refined,
            corollary2,
            out: dir,
        } => {
            let sc = load(scenario, cli.budget, err)?;
            let artifacts = if *refined {
                let parts: Vec<_> = sc
                    .plant
                    .groups()
                    .iter()
                    .map(|g| halves(g.count()))
                    .collect();
                synthesize_refined(&sc.plant, &sc.spec, &parts)?
            } else if *corollary2 {
                synthesize_corollary2(&sc.plant, &sc.spec, sc.budget)?
            } else {
                synthesize_scalable(&sc.plant, &sc.spec)?
            };
            writeln!(
                out,
                "relabeled plant: {}",
                artifacts.relabeled_plant.summary()
            )
            .ok();
            writeln!(out, "RSUP: {}", artifacts.rsup.summary()).ok();
            writeln!(out, "SSUP: {}", artifacts.ssup.summary()).ok();
            print_condition(&artifacts.condition, out);
            write_generator(dir, &format!("{}.rsup.json", sc.name), &artifacts.rsup, out)?;
            write_generator(dir, &format!("{}.ssup.json", sc.name), &artifacts.ssup, out)?;
            Ok(if artifacts.condition.passed() || *corollary2 {
                0
            } else {
                1
            })
        }
        Command::Localize { scenario, out: dir } => {
            let sc = load(scenario, cli.budget, err)?;
            let artifacts = synthesize_scalable(&sc.plant, &sc.spec)?;
            let set = localize(&artifacts)?;
            for (i, name) in set.groups.iter().enumerate() {
                writeln!(
                    out,
                    "group `{name}`: RLOC {} states, SLOC {} states",
                    set.rlocs[i].num_states(),
                    set.slocs[i].num_states()
                )
                .ok();
                write_generator(
                    dir,
                    &format!("{}.rloc.{name}.json", sc.name),
                    &set.rlocs[i],
                    out,
                )?;
                write_generator(
                    dir,
                    &format!("{}.sloc.{name}.json", sc.name),
                    &set.slocs[i],
                    out,
                )?;
            }
            writeln!(
                out,
                "relabeled control equivalence: {}",
                yes(set.certificate.relabeled_equal)
            )
            .ok();
            if set.certificate.fallback {
                writeln!(
                    err,
                    "warning: control cover failed; local controllers are the whole RSUP"
                )
                .ok();
            }
            Ok(0)
        }
        Command::Verify { scenario } => {
            let sc = load(scenario, cli.budget, err)?;
            let artifacts = synthesize_scalable(&sc.plant, &sc.spec)?;
            let rep = verify_sscsp(&artifacts, &sc.plant, &sc.spec, sc.budget)?;
            writeln!(
                out,
                "SUP: {} states, SUP1: {} states",
                rep.sup_states, rep.sup1_states
            )
            .ok();
            writeln!(
                out,
                "SSUP: {} states, controlled: {} states",
                rep.ssup_states, rep.controlled_states
            )
            .ok();
            writeln!(out, "SUP1 within SSUP∩G: {}", yes(rep.lower)).ok();
            writeln!(out, "SSUP∩G within SUP: {}", yes(rep.upper)).ok();
            writeln!(out, "SSUP∩G equals SUP: {}", yes(rep.equal)).ok();
            writeln!(out, "R(SUP) within RSUP: {}", yes(rep.sup_relabel_in_rsup)).ok();
            let set = localize(&artifacts)?;
            let eq = verify_control_equivalence(&set, &artifacts, &sc.plant, sc.budget)?;
            let full = eq.full.clone().unwrap_or(None);
            match &full {
                None => writeln!(out, "local controllers equivalent to SSUP: yes"),
                Some(w) => writeln!(
                    out,
                    "local controllers equivalent to SSUP: no (word {})",
                    w.join(".")
                ),
            }
            .ok();
            Ok(if rep.holds() && eq.relabeled_equal() && full.is_none() {
                0
            } else {
                1
            })
        }
        Command::Oracle { scenario, out: dir } => {
            let sc = load(scenario, cli.budget, err)?;
            let g = full_plant(&sc.plant, sc.budget)?;
            let sup = supcon(&g, &sc.spec)?;
            let s1 = sup1(&sc.plant, &sc.spec)?;
            writeln!(out, "plant: {}", g.summary()).ok();
            writeln!(out, "SUP: {}", sup.summary()).ok();
            writeln!(out, "SUP1: {}", s1.summary()).ok();
            write_generator(dir, &format!("{}.sup.json", sc.name), &sup, out)?;
            write_generator(dir, &format!("{}.sup1.json", sc.name), &s1, out)?;
            Ok(0)
        }
        Command::ExportDot {
            generator,
            out: path,
        } => {
            let g = load_generator(generator)?;
            let name = generator
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let dot = crate::dot::to_dot(&name, &g);
            match path {
                Some(p) => fs::write(p, dot).map_err(|e| CliError::io(p, e))?,
                None => write!(out, "{dot}").map_err(|e| CliError::io(Path::new("-"), e))?,
            }
            Ok(0)
        }
        Command::Selfcheck { cases } => {
            let mut r = rng(cli.seed);
            let budget = cli.budget.unwrap_or(scalsup_core::DEFAULT_STATE_BUDGET);
            let mut passed = 0;
            for case in 0..*cases {
                let plant = random_plant(&mut r, 3);
                if !check_condition_modular(&plant)?.passed() {
                    continue;
                }
                passed += 1;
                let direct = check_condition_direct(&plant, budget)?;
                if let Some(w) = direct.witness {
                    writeln!(out, "case {case}: modular pass but direct FAIL {w}").ok();
                    return Ok(1);
                }
            }
            writeln!(
                out,
                "{cases} cases, {passed} with the modular condition, no violations"
            )
            .ok();
            Ok(0)
        }
    }
}
