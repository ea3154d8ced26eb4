//! `desattack`: stealthy sensor/actuator attack analysis from model files.

use std::collections::BTreeSet;
use std::fmt::{Display, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use desattack_core::*;

#[derive(Parser)]
#[command(name = "desattack", version, about = "Synthesize stealthy attacks on partially observed supervisory control")]
struct Cli {
    /// Word length bound for the bounded stealth self-check in `verify`.
    #[arg(long, global = true, default_value_t = 8)]
    max_enum: usize,
    /// Sort printed states and transitions instead of using discovery order.
    #[arg(long, global = true)]
    canonical: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the observer Obs(G).
    Observe { file: PathBuf },
    /// Print the attacker observer Obs_att(G).
    AttackerObserver { file: PathBuf },
    /// Print the supervisor under attack S_Pa.
    SupAttack { file: PathBuf },
    /// Print the attack structure A with its node classification.
    AttackStructure { file: PathBuf },
    /// Print the supremal stealthy attack substructure A^ss.
    Supremal { file: PathBuf },
    /// Print the verdict. Exit 0 if robust, 2 if a stealthy effective attack exists.
    Verify { file: PathBuf },
    /// Print a shortest stealthy attack word.
    Witness { file: PathBuf },
    /// Walk an attack word through A step by step.
    Replay {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Write a Graphviz rendering of one construction.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        what: What,
        /// Output path, `-` for stdout.
        #[arg(long)]
        dot: PathBuf,
    },
    /// Print the model in canonical form.
    Fmt { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Obs,
    Attobs,
    Supatt,
    #[value(name = "A")]
    A,
    #[value(name = "Ass")]
    Ass,
}

const ATTACK_FOUND: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn load(path: &Path) -> Result<ModelFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_model(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn supervisor(m: &ModelFile) -> Result<&Plant, String> {
    m.supervisor.as_ref().ok_or_else(|| "model has no [supervisor] section".to_owned())
}

fn analysis(m: &ModelFile) -> Result<Analysis, String> {
    analyze_full(&m.plant, supervisor(m)?, &m.universe, &m.unsafe_states).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Observe { file } => {
            let m = load(file)?;
            print!("{}", listing(&build_observer(&m.plant, &m.universe), cli.canonical));
        }
        Command::AttackerObserver { file } => {
            let m = load(file)?;
            print!("{}", listing(&build_attacker_observer(&m.plant, &m.universe), cli.canonical));
        }
        Command::SupAttack { file } => {
            let m = load(file)?;
            let sa =
                build_supervisor_under_attack(&m.plant, supervisor(&m)?, &m.universe).map_err(|e| e.to_string())?;
            print!("{}", listing(&sa, cli.canonical));
        }
        Command::AttackStructure { file } => {
            let m = load(file)?;
            print!("{}", structure_listing(&analysis(&m)?.structure, cli.canonical));
        }
        Command::Supremal { file } => {
            let m = load(file)?;
            print!("{}", structure_listing(&analysis(&m)?.supremal, cli.canonical));
        }
        Command::Verify { file } => {
            let m = load(file)?;
            let a = analysis(&m)?;
            let v = &a.verdict;
            println!("effective={}", v.effective);
            println!("stealthy_effective={}", v.stealthy_effective);
            println!("robust={}", v.robust);
            match &v.witness {
                Some(w) => println!("witness={w}"),
                None => println!("witness=none"),
            }
            let sup = supervisor(&m)?;
            if let Some(w) = stealth_counterexample(&a.supremal, &m.plant, sup, &m.universe, cli.max_enum) {
                return Err(format!("self-check failed: `{w}` is not stealthy"));
            }
            println!("stealth-check=ok (words up to {})", cli.max_enum);
            return Ok(if v.stealthy_effective { ATTACK_FOUND } else { 0 });
        }
        Command::Witness { file } => {
            let m = load(file)?;
            match analysis(&m)?.verdict.witness {
                Some(w) if w.is_empty() => println!("ε"),
                Some(w) => println!("{w}"),
                None => println!("no stealthy effective attack"),
            }
        }
        Command::Replay { file, word } => {
            let m = load(file)?;
            let w = parse_attack_word(word, &m.universe).map_err(|e| e.to_string())?;
            let trace = replay(&m, &w).map_err(|e| e.to_string())?;
            print!("{}", trace_listing(&trace));
        }
        Command::Export { file, what, dot } => {
            let m = load(file)?;
            let text = match what {
                What::Obs => export_dot(&build_observer(&m.plant, &m.universe)),
                What::Attobs => export_dot(&build_attacker_observer(&m.plant, &m.universe)),
                What::Supatt => export_dot(
                    &build_supervisor_under_attack(&m.plant, supervisor(&m)?, &m.universe)
                        .map_err(|e| e.to_string())?,
                ),
                What::A => export_attack_structure_dot(&analysis(&m)?.structure),
                What::Ass => export_attack_structure_dot(&analysis(&m)?.supremal),
            };
            if dot.as_os_str() == "-" {
                print!("{text}");
            } else {
                fs::write(dot, text).map_err(|e| format!("{}: {e}", dot.display()))?;
            }
        }
        Command::Fmt { file } => print!("{}", serialize_model(&load(file)?)),
    }
    Ok(0)
}

fn listing<S, L>(aut: &Automaton<S, L>, canonical: bool) -> String
where
    S: Ord + Clone + Display,
    L: Ord + Clone + Display,
{
    let mut rows: Vec<[String; 3]> =
        aut.transitions().map(|(s, l, d)| [s.to_string(), l.to_string(), d.to_string()]).collect();
    if canonical {
        rows.sort();
    }
    let mut out = String::new();
    writeln!(out, "initial: {}", aut.initial()).unwrap();
    writeln!(out, "states: {}", aut.num_states()).unwrap();
    writeln!(out, "transitions: {}", rows.len()).unwrap();
    for [s, l, d] in rows {
        writeln!(out, "{s} {l} {d}").unwrap();
    }
    out
}

fn node_set(nodes: &BTreeSet<AttackNode>, canonical: bool) -> String {
    let mut names: Vec<String> = nodes.iter().map(ToString::to_string).collect();
    if canonical {
        names.sort();
    }
    names.iter().map(|n| format!(" {n}")).collect()
}

fn structure_listing(a: &AttackStructure, canonical: bool) -> String {
    let Some(g) = a.graph() else {
        return "empty\n".to_owned();
    };
    let mut out = listing(g, canonical);
    writeln!(out, "targets:{}", node_set(a.target_states(), canonical)).unwrap();
    writeln!(out, "exposing:{}", node_set(a.exposing_states(), canonical)).unwrap();
    writeln!(out, "weakly-exposing:{}", node_set(a.weakly_exposing(), canonical)).unwrap();
    out
}

fn trace_listing(t: &ReplayTrace) -> String {
    let show = |c: &Option<ControlInput>| c.as_ref().map_or("-".to_owned(), ToString::to_string);
    let mut out = String::new();
    writeln!(out, "start {}", t.start).unwrap();
    for (i, s) in t.steps.iter().enumerate() {
        writeln!(
            out,
            "{} {} -> {} control={} corrupted={} target={} exposing={}",
            i + 1,
            s.label,
            s.node,
            show(&s.control),
            show(&s.corrupted),
            s.target,
            s.exposing
        )
        .unwrap();
    }
    out
}
