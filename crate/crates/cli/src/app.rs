//! Command-line driver. Exit codes: 0 success, 1 negative verdict, 2 bad
//! input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use covsynth_core::attack::{
    build_ac, build_ce, build_cea, check_consistency, check_safe, inconsistent_observation, GammaLimits,
};
use covsynth_core::synthesis::{build_ns, build_oc, build_ocnsa, build_sdown, build_sdown_a, Artifacts};
use covsynth_core::verify::{check_successful, enumerate_consistent_supervisors};
use covsynth_core::{synthesize, Automaton, Context};

use crate::dot::{export_dot, DotOptions};
use crate::error::CliError;
use crate::fsa_file::serialize_automaton;
use crate::scenario_file::{read_automaton_file, read_scenario_file, ScenarioFile};

pub const NO_ATTACKER: &str = "no covert damage-reachable attacker exists";

#[derive(Debug, Parser)]
#[command(
    name = "covsynth",
    version,
    about = "Covert sensor-actuator attack synthesis for supervised plants"
)]
pub struct Cli {
    /// Seed for supervisor sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write every pipeline artifact as `.fsa` and `.dot` into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub emit_intermediates: Option<PathBuf>,
    /// Refuse scenarios with more control commands than this.
    #[arg(long, global = true, value_name = "N")]
    pub max_commands: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize the supremal covert damage-reachable attacker.
    Synthesize {
        #[arg(long)]
        scenario: PathBuf,
        /// Where to write the attacker.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an attacker against supervisors for covertness and damage.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        attacker: PathBuf,
        /// Supervisor to check against; repeatable. Without any, a seeded
        /// sample of safe consistent supervisors is used.
        #[arg(long = "supervisor")]
        supervisors: Vec<PathBuf>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Check a supervisor for safety and consistency with the observations.
    Consistency {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        supervisor: PathBuf,
    },
    /// Build one intermediate automaton.
    Construct {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        stage: Stage,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit DOT instead of `.fsa`.
        #[arg(long)]
        dot: bool,
    },
    /// Render an `.fsa` file as Graphviz DOT.
    ExportDot {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    Ac,
    Ce,
    Cea,
    Ns,
    Ocnsa,
    SdownA,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn context(cli: &Cli, path: &Path, err: &mut dyn Write) -> Result<(ScenarioFile, Context), CliError> {
    let file = read_scenario_file(path)?;
    let limits = GammaLimits {
        max_commands: cli.max_commands,
        ..GammaLimits::default()
    };
    let ctx = Context::with_limits(file.scenario.clone(), limits)?;
    if let Some(w) = &ctx.warning {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok((file, ctx))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Synthesize { scenario, out: dest } => {
            let (file, ctx) = context(cli, scenario, err)?;
            let start = Instant::now();
            let (report, art) = synthesize(&ctx)?;
            let elapsed = start.elapsed();
            let mut files = Outputs::default();
            if let Some(dir) = &cli.emit_intermediates {
                intermediates(&mut files, dir, &art, report.attacker.as_ref());
            }
            if let (Some(path), Some(a)) = (dest, &report.attacker) {
                files.push(path, serialize_automaton(a));
            }
            files.commit()?;
            let s = report.sizes;
            let _ = writeln!(out, "scenario: {}", file.name);
            let _ = writeln!(out, "seed: {}", cli.seed);
            let _ = writeln!(out, "commands: {}", s.commands);
            let _ = writeln!(
                out,
                "states: ns {} ocns-a {} sdown-a {} attack-plant {} attacker {}",
                s.ns, s.ocnsa, s.sdown_a, s.plant, s.attacker
            );
            for d in &report.diagnostics {
                let _ = writeln!(out, "note: {d}");
            }
            let _ = writeln!(out, "elapsed: {:.3}s", elapsed.as_secs_f64());
            if report.exists {
                let _ = writeln!(out, "attacker: found ({} states)", s.attacker);
                Ok(0)
            } else {
                let _ = writeln!(out, "attacker: {NO_ATTACKER}");
                Ok(1)
            }
        }
        Command::Verify {
            scenario,
            attacker,
            supervisors,
            samples,
            depth,
        } => {
            let (_, ctx) = context(cli, scenario, err)?;
            let a = read_automaton_file(attacker).map_err(|e| e.in_file(attacker))?;
            let (names, list): (Vec<String>, Vec<Automaton>) = if supervisors.is_empty() {
                let sample = enumerate_consistent_supervisors(&ctx, *depth, *samples, cli.seed)?;
                if let Some(d) = &sample.diagnostic {
                    let _ = writeln!(err, "note: {d}");
                }
                let n = sample.supervisors.len();
                (
                    (0..n).map(|i| format!("sample {i}")).collect(),
                    sample.supervisors,
                )
            } else {
                let mut names = Vec::new();
                let mut list = Vec::new();
                for p in supervisors {
                    list.push(read_automaton_file(p).map_err(|e| e.in_file(p))?);
                    names.push(p.display().to_string());
                }
                (names, list)
            };
            let rep = check_successful(&ctx, &a, &list)?;
            let _ = writeln!(out, "seed: {}", cli.seed);
            for v in &rep.per_supervisor {
                match &v.excluded {
                    Some(why) => {
                        let _ = writeln!(out, "{}: excluded ({why})", names[v.index]);
                    }
                    None => {
                        let _ = writeln!(
                            out,
                            "{}: covert: {}, damage: {}",
                            names[v.index],
                            yes(v.covert),
                            yes(v.damage)
                        );
                    }
                }
            }
            let verdict = match (rep.successful, rep.vacuous) {
                (true, true) => "successful (vacuous: no supervisor to check)",
                (true, false) => "successful",
                (false, _) => "not successful",
            };
            let _ = writeln!(out, "verdict: {verdict}");
            Ok(if rep.successful { 0 } else { 1 })
        }
        Command::Consistency { scenario, supervisor } => {
            let (_, ctx) = context(cli, scenario, err)?;
            let s = read_automaton_file(supervisor).map_err(|e| e.in_file(supervisor))?;
            let safe = check_safe(&ctx, &s)?;
            let consistent = check_consistency(&ctx, &s)?;
            let _ = writeln!(out, "safe: {}", yes(safe));
            let _ = writeln!(out, "consistent: {}", yes(consistent));
            if let Some(w) = inconsistent_observation(&ctx, &s)? {
                let toks: Vec<String> = w.iter().map(|e| e.to_string()).collect();
                let _ = writeln!(out, "unexplained observation: {}", toks.join(" "));
            }
            Ok(if safe && consistent { 0 } else { 1 })
        }
        Command::Construct {
            scenario,
            stage,
            out: dest,
            dot,
        } => {
            let (_, ctx) = context(cli, scenario, err)?;
            let (name, a) = construct(&ctx, *stage)?;
            let text = if *dot {
                export_dot(
                    &a,
                    &DotOptions {
                        name: name.into(),
                        ..DotOptions::default()
                    },
                )
            } else {
                serialize_automaton(&a)
            };
            emit(dest.as_deref(), text, out)?;
            Ok(0)
        }
        Command::ExportDot { input, out: dest } => {
            let a = read_automaton_file(input).map_err(|e| e.in_file(input))?;
            let name = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            emit(
                dest.as_deref(),
                export_dot(
                    &a,
                    &DotOptions {
                        name,
                        ..DotOptions::default()
                    },
                ),
                out,
            )?;
            Ok(0)
        }
    }
}

fn construct(ctx: &Context, stage: Stage) -> Result<(&'static str, Automaton), CliError> {
    Ok(match stage {
        Stage::Ac => ("ac", build_ac(ctx)?),
        Stage::Ce => ("ce", build_ce(ctx)?),
        Stage::Cea => ("cea", build_cea(ctx)?),
        Stage::Ns => ("ns", build_ns(ctx)?.ns.automaton),
        Stage::Ocnsa => {
            let ns = build_ns(ctx)?;
            let oc = build_oc(ctx, &covsynth_core::attack::build_mo(ctx)?)?;
            ("ocnsa", build_ocnsa(ctx, &ns.ns, &oc)?.attacked.automaton)
        }
        Stage::SdownA => {
            let sdown = build_sdown(ctx, &covsynth_core::attack::build_mo(ctx)?)?;
            ("sdown-a", build_sdown_a(ctx, &sdown)?.automaton)
        }
    })
}

fn intermediates(files: &mut Outputs, dir: &Path, art: &Artifacts, attacker: Option<&Automaton>) {
    let mut all = art.named();
    if let Some(a) = attacker {
        all.push(("attacker", a));
    }
    for (name, a) in all {
        files.push(&dir.join(format!("{name}.fsa")), serialize_automaton(a));
        let opts = DotOptions {
            name: name.into(),
            ..DotOptions::default()
        };
        files.push(&dir.join(format!("{name}.dot")), export_dot(a, &opts));
    }
}

fn emit(dest: Option<&Path>, text: String, out: &mut dyn Write) -> Result<(), CliError> {
    match dest {
        Some(p) => {
            let mut files = Outputs::default();
            files.push(p, text);
            files.commit()
        }
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Write {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

/// Files written only once every one of them is staged in full.
#[derive(Default)]
struct Outputs {
    pending: Vec<(PathBuf, String)>,
}

impl Outputs {
    fn push(&mut self, path: &Path, text: String) {
        self.pending.push((path.to_path_buf(), text));
    }

    fn commit(self) -> Result<(), CliError> {
        let mut staged = Vec::new();
        for (path, text) in self.pending {
            let wrap = |source| CliError::Write {
                path: path.clone(),
                source,
            };
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => PathBuf::from("."),
            };
            std::fs::create_dir_all(&dir).map_err(wrap)?;
            let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(wrap)?;
            tmp.write_all(text.as_bytes()).map_err(wrap)?;
            tmp.flush().map_err(wrap)?;
            staged.push((tmp, path));
        }
        for (tmp, path) in staged {
            tmp.persist(&path).map_err(|e| CliError::Write {
                path,
                source: e.error,
            })?;
        }
        Ok(())
    }
}
