//! `ptt`: command-line front end for the kernel.

use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use ptt_core::error::{SyntaxError, TooLarge};
use ptt_core::normalize::beta_normalize;
use ptt_core::semantics::{eval, format_assignment, sequent_countermodel, Assignment, EvalError, Value};
use ptt_core::syntax::{parse_derivation_with, parse_source_with, parse_type, print_proof_file, print_sequent, print_term, Body, SourceUnit};
use ptt_core::{quote::quote, Checker, Guard, ProveError, Prover, Var};

#[derive(Parser, Debug)]
#[command(name = "ptt", version, about = "Minimal propositional type theory: evaluation, proofs and certificates")]
struct Cli {
    /// Largest number of values any type may have.
    #[arg(long, global = true, default_value_t = ptt_core::semantics::DEFAULT_GUARD, value_parser = parse_guard)]
    guard: u64,
    /// Print terms with connective and quantifier sugar.
    #[arg(long, global = true)]
    sugar: bool,
    /// Never colour the status line.
    #[arg(long, global = true)]
    no_color: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the type of a term.
    CheckType { file: PathBuf },
    /// Print the β-normal form of a term.
    Normalize { file: PathBuf },
    /// Evaluate a term under an assignment such as `x=1,f=[1,0]`.
    Eval {
        file: PathBuf,
        #[arg(long)]
        assign: Vec<String>,
    },
    /// Decide validity, printing a countermodel when there is one.
    Valid { file: PathBuf },
    /// Print the closed term denoting a value.
    Quote {
        #[arg(value_name = "TYPE")]
        ty: String,
        value: String,
    },
    /// Construct and check a derivation of a valid formula or sequent.
    Prove {
        file: PathBuf,
        #[arg(short, long, value_name = "PROOF")]
        output: Option<PathBuf>,
    },
    /// Check a derivation file.
    Verify { proof: PathBuf },
}

fn parse_guard(s: &str) -> Result<u64, String> {
    let n: u64 = s.parse().map_err(|e| format!("{}", e))?;
    if n < 2 {
        return Err("the guard must be at least 2".into());
    }
    Ok(n)
}

struct CliConfig {
    guard: Guard,
    sugar: bool,
    color: bool,
}

#[derive(Debug, Error)]
enum Failure {
    /// A negative answer: invalid formula or rejected proof.
    #[error("{0}")]
    Negative(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    TooLarge(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Usage(_) => 2,
            Failure::TooLarge(_) => 3,
        }
    }
}

impl From<SyntaxError> for Failure {
    fn from(e: SyntaxError) -> Self {
        match e {
            SyntaxError::TooLarge(t) => Failure::TooLarge(t.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<TooLarge> for Failure {
    fn from(e: TooLarge) -> Self {
        Failure::TooLarge(e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::TooLarge(t) => Failure::TooLarge(t.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ProveError> for Failure {
    fn from(e: ProveError) -> Self {
        match e {
            ProveError::TooLarge(_) | ProveError::TooWide { .. } => Failure::TooLarge(e.to_string()),
            ProveError::Type(_) | ProveError::ReservedName(_) | ProveError::Shape(_) => Failure::Usage(e.to_string()),
            e => Failure::Negative(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e)))
}

fn load(path: &Path, cfg: &CliConfig) -> Result<SourceUnit, Failure> {
    let text = read(path)?;
    parse_source_with(&text, cfg.guard).map_err(|e| match e {
        SyntaxError::TooLarge(t) => Failure::TooLarge(t.to_string()),
        e => Failure::Usage(format!("{}: {}", path.display(), e)),
    })
}

fn term_of(unit: &SourceUnit) -> Result<&ptt_core::Term, Failure> {
    match &unit.body {
        Body::Term(t) => Ok(t),
        Body::Sequent(_) => Err(Failure::Usage("expected a term, found a sequent".into())),
    }
}

/// Splits `x=1,f=[1,0]` at top-level commas.
fn split_bindings(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0usize, 0);
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().map(str::trim).filter(|b| !b.is_empty()).collect()
}

fn parse_assignment(specs: &[String], decls: &[Var]) -> Result<Assignment, Failure> {
    let mut asg = Assignment::new();
    for spec in specs {
        for binding in split_bindings(spec) {
            let (name, val) = binding
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("binding `{}` is not of the form name=value", binding)))?;
            let name = name.trim();
            let v = decls
                .iter()
                .find(|v| v.name() == name)
                .ok_or_else(|| Failure::Usage(format!("`{}` is not declared", name)))?;
            let value = Value::parse(val.trim(), v.ty()).map_err(|e| Failure::Usage(format!("value for `{}`: {}", name, e)))?;
            asg.insert(v.clone(), value);
        }
    }
    Ok(asg)
}

fn status(cfg: &CliConfig, word: &str, good: bool) -> String {
    if cfg.color {
        let code = if good { 32 } else { 31 };
        format!("\x1b[{}m{}\x1b[0m", code, word)
    } else {
        word.to_string()
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let cfg = CliConfig {
        guard: Guard(cli.guard),
        sugar: cli.sugar,
        color: !cli.no_color && std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal(),
    };
    match cli.command {
        Command::CheckType { file } => {
            let unit = load(&file, &cfg)?;
            Ok(match &unit.body {
                Body::Term(t) => format!("{} : {}\n", print_term(t, cfg.sugar), t.ty()),
                Body::Sequent(q) => format!("{} : sequent\n", print_sequent(q, cfg.sugar)),
            })
        }
        Command::Normalize { file } => {
            let unit = load(&file, &cfg)?;
            Ok(format!("{}\n", print_term(&beta_normalize(term_of(&unit)?), cfg.sugar)))
        }
        Command::Eval { file, assign } => {
            let unit = load(&file, &cfg)?;
            let asg = parse_assignment(&assign, &unit.declarations)?;
            let value = match &unit.body {
                Body::Term(t) => eval(t, &asg, cfg.guard)?,
                Body::Sequent(q) => {
                    let mut holds = true;
                    for a in q.assumptions() {
                        if eval(a, &asg, cfg.guard)? == Value::Bit(false) {
                            holds = false;
                        }
                    }
                    if holds {
                        eval(q.conclusion(), &asg, cfg.guard)?
                    } else {
                        Value::Bit(true)
                    }
                }
            };
            Ok(format!("{}\n", value))
        }
        Command::Valid { file } => {
            let unit = load(&file, &cfg)?;
            let q = unit.sequent().map_err(|e| Failure::Usage(e.to_string()))?;
            let a: Vec<_> = q.assumptions().iter().cloned().collect();
            match sequent_countermodel(&a, q.conclusion(), cfg.guard)? {
                None => Ok(format!("{}\n", status(&cfg, "valid", true))),
                Some(m) => {
                    print!("{}\n{}", status(&cfg, "invalid", false), format_assignment(&m));
                    Err(Failure::Negative("formula is not valid".into()))
                }
            }
        }
        Command::Quote { ty, value } => {
            let ty = parse_type(&ty).map_err(|e| Failure::Usage(format!("type: {}", e)))?;
            ptt_core::semantics::value_count(&ty, cfg.guard)?;
            let v = Value::parse(&value, &ty).map_err(|e| Failure::Usage(format!("value: {}", e)))?;
            Ok(format!("{}\n", print_term(&quote(&ty, &v, cfg.guard)?, cfg.sugar)))
        }
        Command::Prove { file, output } => {
            let unit = load(&file, &cfg)?;
            let q = unit.sequent().map_err(|e| Failure::Usage(e.to_string()))?;
            let mut prover = Prover::new(cfg.guard);
            let d = match prover.prove_sequent(&q) {
                Ok(d) => d,
                Err(ProveError::NotValid { countermodel }) => {
                    print!("{}\n{}", status(&cfg, "invalid", false), format_assignment(&countermodel));
                    return Err(Failure::Negative("formula is not valid".into()));
                }
                Err(e) => return Err(e.into()),
            };
            let text = print_proof_file(&d);
            match output {
                Some(path) => {
                    fs::write(&path, &text).map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e)))?;
                    Ok(format!("{} ({} nodes)\n", status(&cfg, "proved", true), d.dag_size()))
                }
                None => Ok(text),
            }
        }
        Command::Verify { proof } => {
            let text = read(&proof)?;
            let d = parse_derivation_with(&text, cfg.guard).map_err(|e| match e {
                SyntaxError::TooLarge(t) => Failure::TooLarge(t.to_string()),
                e => Failure::Usage(format!("{}: {}", proof.display(), e)),
            })?;
            Checker::new().check(&d).map_err(|e| Failure::Negative(format!("proof rejected: {}", e)))?;
            Ok(format!("{} {}\n", status(&cfg, "verified", true), print_sequent(d.conclusion(), cfg.sugar)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // derivations and terms are traversed recursively in places
    let worker = std::thread::Builder::new().stack_size(1 << 28).spawn(move || run(cli));
    let result = match worker {
        Ok(h) => h.join().unwrap_or_else(|_| Err(Failure::Usage("internal error".into()))),
        Err(e) => Err(Failure::Usage(format!("cannot start worker: {}", e))),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("ptt: {}", f);
            ExitCode::from(f.code())
        }
    }
}
