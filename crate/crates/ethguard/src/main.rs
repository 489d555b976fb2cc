use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ethguard::{
    load_scenario, parse_formula_files, parse_scenario, run_simulation, DdeReport, LoadError,
    WallClock,
};
use ethguard_core::ethics::dde_compliant;
use ethguard_core::{Budget, ProveOutcome, Prover};
use serde::Serialize;

const EXIT_ERROR: u8 = 1;
const EXIT_LOCK: u8 = 2;
const EXIT_NO_PROOF: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "ethguard",
    version,
    about = "Ethical guard for a weapon-class actuator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Wall-clock limit per proof search, in milliseconds.
    #[arg(long, global = true, default_value_t = 10000, value_parser = clap::value_parser!(u64).range(1..))]
    timeout: u64,
    /// Nesting depth for modal schema instances.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    depth: u32,
    /// Cap on generated clauses per proof search.
    #[arg(long, global = true, default_value_t = 200000, value_parser = clap::value_parser!(u64).range(1..))]
    clauses: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print prover events to standard error.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse scenario (.scn) or formula files and print them back.
    Parse {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Prove a goal formula from assumption files.
    Prove {
        #[arg(long)]
        goal: PathBuf,
        /// Assumption files; the flag may be repeated or take several paths.
        #[arg(long, num_args = 1..)]
        from: Vec<PathBuf>,
    },
    /// Evaluate the double-effect clauses for a scenario's request.
    CheckDde { scenario: PathBuf },
    /// Adjudicate a scenario's request: LOCK or ALLOW.
    Simulate { scenario: PathBuf },
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_ERROR)
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit<T: Serialize>(format: Format, value: &T, text: String) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable")
        ),
        Format::Text => print!("{text}"),
    }
}

#[derive(Serialize)]
struct ParsedFile {
    path: String,
    kind: &'static str,
    formulas: Vec<String>,
}

fn parse_cmd(files: &[PathBuf], format: Format) -> Result<ExitCode, LoadError> {
    let mut out = Vec::new();
    let mut plain = Vec::new();
    for p in files {
        if p.extension().is_some_and(|e| e == "scn") {
            let s = load_scenario(p)?;
            let mut formulas: Vec<String> = s.facts.iter().map(ToString::to_string).collect();
            if let Ok(ax) = ethguard_core::guard::deprivation_axiom(&s) {
                formulas.push(ax.to_string());
            }
            out.push(ParsedFile {
                path: p.display().to_string(),
                kind: "scenario",
                formulas,
            });
        } else {
            plain.push((p.display().to_string(), read(p)?));
        }
    }
    if !plain.is_empty() {
        let (_, parsed) = parse_formula_files(&plain)?;
        for ((path, _), fs) in plain.iter().zip(parsed) {
            out.push(ParsedFile {
                path: path.clone(),
                kind: "formulas",
                formulas: fs.iter().map(ToString::to_string).collect(),
            });
        }
    }
    let mut text = String::new();
    for f in &out {
        text.push_str(&format!("; {} ({})\n", f.path, f.kind));
        for g in &f.formulas {
            text.push_str(g);
            text.push('\n');
        }
    }
    emit(format, &out, text);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ProveReport {
    result: &'static str,
    goal: String,
    proof: Option<Vec<String>>,
}

fn prove_cmd(
    goal: &Path,
    from: &[PathBuf],
    budget: Budget,
    cli: &Cli,
) -> Result<ExitCode, LoadError> {
    let mut files = vec![(goal.display().to_string(), read(goal)?)];
    for p in from {
        files.push((p.display().to_string(), read(p)?));
    }
    let (sig, parsed) = parse_formula_files(&files)?;
    let [g] = parsed[0].as_slice() else {
        return Err(LoadError::InFile {
            path: files[0].0.clone(),
            source: Box::new(LoadError::At {
                pos: ethguard_core::Pos { line: 1, col: 1 },
                msg: format!(
                    "the goal file must hold exactly one formula, found {}",
                    parsed[0].len()
                ),
            }),
        });
    };
    let assumptions: Vec<_> = parsed[1..].iter().flatten().cloned().collect();
    let clock = WallClock::new();
    let sink = |s: &str| eprintln!("{s}");
    let mut prover = Prover::new(&sig, budget, &clock);
    if cli.trace {
        prover = prover.with_trace(&sink);
    }
    let outcome = prover.prove(&assumptions, g);
    let (result, code) = match &outcome {
        ProveOutcome::Proved(_) => ("proved", ExitCode::SUCCESS),
        ProveOutcome::NoProof => ("no-proof", ExitCode::from(EXIT_NO_PROOF)),
        ProveOutcome::Timeout => ("timeout", ExitCode::from(EXIT_TIMEOUT)),
    };
    let report = ProveReport {
        result,
        goal: g.to_string(),
        proof: outcome.proof().map(|p| p.lines()),
    };
    let mut text = format!("result: {result}\ngoal: {}\n", report.goal);
    if let Some(lines) = &report.proof {
        text.push_str("proof:\n");
        for l in lines {
            text.push_str(&format!("  {l}\n"));
        }
    }
    emit(cli.format, &report, text);
    Ok(code)
}

fn check_dde_cmd(path: &Path, budget: Budget, cli: &Cli) -> Result<ExitCode, LoadError> {
    let src = read(path)?;
    let scenario = parse_scenario(&src).map_err(|e| LoadError::InFile {
        path: path.display().to_string(),
        source: Box::new(e),
    })?;
    let clock = WallClock::new();
    let sink = |s: &str| eprintln!("{s}");
    let mut prover = Prover::new(&scenario.sig, budget, &clock);
    if cli.trace {
        prover = prover.with_trace(&sink);
    }
    let verdict = dde_compliant(&scenario, &prover)?;
    let report = DdeReport::from_verdict(&verdict);
    emit(cli.format, &report, report.to_text());
    Ok(if report.compliant {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_LOCK)
    })
}

fn simulate_cmd(path: &Path, budget: Budget, cli: &Cli) -> Result<ExitCode, LoadError> {
    let sink = |s: &str| eprintln!("{s}");
    let trace: Option<&dyn Fn(&str)> = if cli.trace { Some(&sink) } else { None };
    let report = run_simulation(path, budget, trace)?;
    let text = report.to_text();
    emit(cli.format, &report, text);
    Ok(if report.decision == "LOCK" {
        ExitCode::from(EXIT_LOCK)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let Some(budget) = Budget::new(cli.timeout, cli.depth, cli.clauses as usize) else {
        eprintln!("error: budget values must be positive");
        return ExitCode::from(EXIT_USAGE);
    };
    let result = match &cli.command {
        Command::Parse { files } => parse_cmd(files, cli.format),
        Command::Prove { goal, from } => prove_cmd(goal, from, budget, &cli),
        Command::CheckDde { scenario } => check_dde_cmd(scenario, budget, &cli),
        Command::Simulate { scenario } => simulate_cmd(scenario, budget, &cli),
    };
    result.unwrap_or_else(fail)
}
