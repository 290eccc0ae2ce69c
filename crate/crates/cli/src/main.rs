//! `sleecgo`: validate goal models and SLEEC specs, translate one into the
//! other, check rules for conflicts and replay traces.
//!
//! Exit codes: 0 clean, 1 findings, 2 input errors, 3 environment errors.

mod render;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use sleecgo_core::checker::{check_spec, default_bound, CheckConfig, CheckError};
use sleecgo_core::goal::{assign_task_indices, parse_goal_model, validate_goal_model};
use sleecgo_core::semantics::{activations, is_compliant, SemanticsError, Trace};
use sleecgo_core::sleec::{check_names_and_types, parse_sleec, SleecSpec};
use sleecgo_core::translate::{translate_model, TraceabilityMap};

use report::{Input, RunReport};

/// Overrides the default check bound when `--bound` is absent.
const BOUND_ENV: &str = "SLEECGO_BOUND";

#[derive(Parser)]
#[command(name = "sleecgo", version, about = "Goal models to SLEEC rules, with bounded conflict checking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report syntax, name and sort errors in `.sleec` and `.gsl` files.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Translate a goal model into a SLEEC spec.
    Translate {
        goal: PathBuf,
        /// Output `.sleec` file; standard output when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Where to write the traceability map (JSON).
        #[arg(long)]
        trace_map: Option<PathBuf>,
    },
    /// Search for vacuous rules, situational conflicts and unreachable purposes.
    Check {
        spec: PathBuf,
        /// Trace length in ticks. Defaults to $SLEECGO_BOUND, then to the
        /// longest deadline plus three ticks.
        #[arg(long)]
        bound: Option<usize>,
        /// Events allowed in one tick.
        #[arg(long, default_value_t = 3)]
        max_simultaneous: usize,
        /// Search with every rule instead of the rules sharing events.
        #[arg(long)]
        no_slice: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Traceability map of a translated spec, for the value context.
        #[arg(long)]
        trace_map: Option<PathBuf>,
        /// Also write a run report (JSON, with timing) to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Replay a JSON trace against a spec and print the activation timeline.
    Replay { spec: PathBuf, trace: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Why a command stopped early.
enum Failure {
    Input(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { paths } => run_validate(&paths),
        Command::Translate { goal, out, trace_map } => run_translate(&goal, out.as_deref(), trace_map.as_deref()),
        Command::Check { spec, bound, max_simultaneous, no_slice, format, trace_map, report } => {
            run_check(CheckArgs { spec, bound, max_simultaneous, slicing: !no_slice, format, trace_map, report })
        }
        Command::Replay { spec, trace } => run_replay(&spec, &trace),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let (Failure::Input(msg) | Failure::Io(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

/// Parses and type-checks a spec, reporting problems as `path:line:col`.
fn load_spec(path: &Path, text: &str) -> Result<SleecSpec, Vec<String>> {
    let spec = parse_sleec(text).map_err(|e| vec![format!("{}:{e}", path.display())])?;
    let errors = check_names_and_types(&spec);
    if errors.is_empty() {
        Ok(spec)
    } else {
        Err(errors.iter().map(|e| format!("{}:{}:{}: {e}", path.display(), e.span.line, e.span.col)).collect())
    }
}

fn goal_errors(path: &Path, text: &str) -> Vec<String> {
    match parse_goal_model(text) {
        Err(e) => vec![format!("{}:{e}", path.display())],
        Ok(model) => validate_goal_model(&model).iter().map(|e| format!("{}:{e}", path.display())).collect(),
    }
}

fn run_validate(paths: &[PathBuf]) -> Result<u8, Failure> {
    let mut errors = Vec::new();
    for path in paths {
        let text = read(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("sleec") => errors.extend(load_spec(path, &text).err().unwrap_or_default()),
            Some("gsl") => errors.extend(goal_errors(path, &text)),
            _ => errors.push(format!("{}: not a .sleec or .gsl file", path.display())),
        }
    }
    for e in &errors {
        println!("{e}");
    }
    Ok(if errors.is_empty() { 0 } else { 2 })
}

fn run_translate(goal: &Path, out: Option<&Path>, trace_map: Option<&Path>) -> Result<u8, Failure> {
    let text = read(goal)?;
    let errors = goal_errors(goal, &text);
    if !errors.is_empty() {
        for e in &errors {
            println!("{e}");
        }
        return Ok(2);
    }
    let model = assign_task_indices(parse_goal_model(&text).expect("validated above"));
    let translation = translate_model(&model).map_err(|e| Failure::Input(format!("{}: {e}", goal.display())))?;
    let sleec = translation.to_sleec();
    match out {
        Some(path) => write(path, &sleec)?,
        None => print!("{sleec}"),
    }
    if let Some(path) = trace_map {
        write(path, &(translation.traceability.to_json() + "\n"))?;
    }
    Ok(0)
}

struct CheckArgs {
    spec: PathBuf,
    bound: Option<usize>,
    max_simultaneous: usize,
    slicing: bool,
    format: Format,
    trace_map: Option<PathBuf>,
    report: Option<PathBuf>,
}

fn run_check(args: CheckArgs) -> Result<u8, Failure> {
    let started = Instant::now();
    let text = read(&args.spec)?;
    let mut inputs = vec![Input::new(&args.spec, &text)];
    let spec = match load_spec(&args.spec, &text) {
        Ok(spec) => spec,
        Err(errors) => {
            for e in &errors {
                println!("{e}");
            }
            return Ok(2);
        }
    };
    let map = match &args.trace_map {
        Some(path) => {
            let json = read(path)?;
            inputs.push(Input::new(path, &json));
            Some(TraceabilityMap::from_json(&json).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?)
        }
        None => None,
    };
    let bound = match args.bound {
        Some(b) => b,
        None => match std::env::var(BOUND_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| Failure::Input(format!("{BOUND_ENV}=`{v}` is not a tick count")))?,
            Err(_) => default_bound(&spec).map_err(check_failure)?,
        },
    };
    let cfg =
        CheckConfig { max_events_per_tick: args.max_simultaneous, slicing: args.slicing, ..CheckConfig::new(bound) };
    let diagnoses = check_spec(&spec, &cfg, map.as_ref()).map_err(check_failure)?;

    let run = RunReport::new("check", inputs, &diagnoses);
    if let Some(path) = &args.report {
        write(path, &(run.to_json(Some(started.elapsed())) + "\n"))?;
    }
    match args.format {
        Format::Json => println!("{}", run.to_json(None)),
        Format::Text => print!("{}", render::diagnoses(&spec, bound, &diagnoses)),
    }
    Ok(if diagnoses.is_empty() { 0 } else { 1 })
}

fn check_failure(e: CheckError) -> Failure {
    match e {
        CheckError::BoundTooSmall { bound, minimum } => {
            Failure::Input(format!("bound {bound} is too small for this spec; use --bound {minimum} or more"))
        }
        other => Failure::Input(other.to_string()),
    }
}

fn run_replay(spec_path: &Path, trace_path: &Path) -> Result<u8, Failure> {
    let text = read(spec_path)?;
    let spec = match load_spec(spec_path, &text) {
        Ok(spec) => spec,
        Err(errors) => {
            for e in &errors {
                println!("{e}");
            }
            return Ok(2);
        }
    };
    let json = read(trace_path)?;
    let malformed = |e: SemanticsError| Failure::Input(format!("{}: {e}", trace_path.display()));
    let trace = Trace::from_json(&json).map_err(|e| Failure::Input(format!("{}: {e}", trace_path.display())))?;
    let acts = activations(&spec, &trace).map_err(malformed)?;
    let verdict = is_compliant(&spec, &trace).map_err(malformed)?;
    print!("{}", render::replay(&spec, &trace, &acts, &verdict));
    Ok(if verdict.class() == sleecgo_core::semantics::VerdictClass::Compliant { 0 } else { 1 })
}
