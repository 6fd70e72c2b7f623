use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bqual_core::explorer::{explore_with_domains, infer_domains, Limits};
use bqual_core::lts::Label;
use bqual_core::mutation::{Counts, Sampler};
use bqual_core::report::{
    evaluate, load_machine, render_json, render_table, ErrorClass, EvalError, EvaluationConfig, MutationConfig,
    RequiredSource, DEFAULT_TRIALS, DEFAULT_WORD_LIMIT,
};
use bqual_core::alignment::DEFAULT_THRESHOLD;
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_TRUNCATED: u8 = 4;
const EXIT_NOT_COMPUTED: u8 = 5;

#[derive(Parser)]
#[command(name = "bqual", version, about = "Quality evaluation of bounded B abstract machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Explore a machine and compute its quality report.
    Evaluate(EvaluateArgs),
    /// Explore a machine and print a summary (and optionally its transitions).
    Explore(ExploreArgs),
    /// Draw a seeded mutation plan for a machine.
    Plan(PlanArgs),
}

#[derive(Args)]
struct LimitArgs {
    /// Stop exploring after this many distinct states.
    #[arg(long, default_value_t = Limits::default().max_states)]
    max_states: usize,
    /// Stop exploring after this many transitions.
    #[arg(long, default_value_t = Limits::default().max_transitions)]
    max_transitions: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_states: self.max_states,
            max_transitions: self.max_transitions,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Machine to evaluate.
    #[arg(long)]
    machine: PathBuf,
    /// Required transitions, one JSON object per line.
    #[arg(long, conflicts_with = "reference")]
    required: Option<PathBuf>,
    /// Reference machine whose derived transitions are the requirements.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Goal predicates, one `NAME: predicate` per line.
    #[arg(long)]
    goals: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_WORD_LIMIT)]
    word_limit: u64,
    #[command(flatten)]
    limits: LimitArgs,
    /// Number of seeded mutation trials.
    #[arg(long, conflicts_with = "plan")]
    trials: Option<usize>,
    /// Extra transitions injected per trial (default: 1% of derived, at least 1).
    #[arg(long, conflicts_with = "plan")]
    n_extra: Option<usize>,
    /// Transitions removed per trial (default: 1% of derived, at least 1).
    #[arg(long, conflicts_with = "plan")]
    n_missing: Option<usize>,
    /// Base seed for mutation trials.
    #[arg(long, env = "BQUAL_SEED", default_value_t = 0)]
    seed: u64,
    /// Apply this explicit mutation plan instead of seeded trials.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Refuse alignments whose unmatched sides both exceed this size.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    similarity_threshold: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Fail on truncated exploration or metrics that cannot be computed.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ExploreArgs {
    #[arg(long)]
    machine: PathBuf,
    #[command(flatten)]
    limits: LimitArgs,
    /// Also write every derived transition as JSON lines to this file.
    #[arg(long)]
    transitions: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    machine: PathBuf,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(long)]
    n_extra: Option<usize>,
    #[arg(long)]
    n_missing: Option<usize>,
    #[arg(long, env = "BQUAL_SEED", default_value_t = 0)]
    seed: u64,
    /// Only touch transitions of this operation.
    #[arg(long)]
    label: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        let code = match e.class() {
            ErrorClass::Parse => EXIT_PARSE,
            ErrorClass::Failure => EXIT_FAILURE,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn fail(msg: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        msg: msg.to_string(),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| fail(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| fail(format!("stdout: {e}"))),
    }
}

fn run_evaluate(args: EvaluateArgs) -> Result<(), Failure> {
    let mut config = EvaluationConfig::new(&args.machine);
    config.required = match (args.required, args.reference) {
        (Some(p), _) => Some(RequiredSource::Transitions(p)),
        (None, Some(p)) => Some(RequiredSource::Reference(p)),
        (None, None) => None,
    };
    config.goals_path = args.goals;
    config.word_limit = args.word_limit;
    config.limits = args.limits.limits();
    config.similarity_threshold = args.similarity_threshold;
    config.mutation = match args.plan {
        Some(p) => MutationConfig::Plan(p),
        None => MutationConfig::Seeded {
            trials: args.trials.unwrap_or(DEFAULT_TRIALS),
            n_extra: args.n_extra,
            n_missing: args.n_missing,
            seed: args.seed,
        },
    };
    let report = evaluate(&config)?;
    if args.strict {
        if report.truncated() {
            return Err(Failure {
                code: EXIT_TRUNCATED,
                msg: "exploration was truncated by a state or transition limit".into(),
            });
        }
        if let Some((name, reason)) = report.not_computed().next() {
            return Err(Failure {
                code: EXIT_NOT_COMPUTED,
                msg: format!("{name} could not be computed: {reason}"),
            });
        }
    }
    let text = match args.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&render_json(&report)).map_err(fail)?;
            s.push('\n');
            s
        }
        OutputFormat::Table => render_table(&report),
    };
    emit(args.out.as_deref(), &text)
}

fn run_explore(args: ExploreArgs) -> Result<(), Failure> {
    let (_, machine) = load_machine(&args.machine)?;
    let explore_err = |e| fail(format!("{}: {e}", args.machine.display()));
    let domains = infer_domains(&machine).map_err(explore_err)?;
    let result = explore_with_domains(&machine, &domains, args.limits.limits()).map_err(explore_err)?;
    if let Some(path) = &args.transitions {
        emit(Some(path), &result.transitions_jsonl())?;
    }
    let mut summary = result.summary_json();
    summary["machine"] = serde_json::json!(machine.name);
    summary["cpu_seconds"] = serde_json::json!(result.metering.cpu_seconds);
    summary["peak_memory_bytes"] = serde_json::json!(result.metering.peak_memory_bytes);
    let mut text = serde_json::to_string_pretty(&summary).map_err(fail)?;
    text.push('\n');
    emit(None, &text)
}

fn run_plan(args: PlanArgs) -> Result<(), Failure> {
    let (_, machine) = load_machine(&args.machine)?;
    let explore_err = |e| fail(format!("{}: {e}", args.machine.display()));
    let domains = infer_domains(&machine).map_err(explore_err)?;
    let result = explore_with_domains(&machine, &domains, args.limits.limits()).map_err(explore_err)?;
    let sampler = Sampler::for_machine(&result, &domains, &machine);
    let scope = args.label.as_deref().map(Label::new);
    if let Some(l) = &scope {
        if machine.operation(l.as_str()).is_none() {
            return Err(fail(format!("machine has no operation `{l}`")));
        }
    }
    let base = match &scope {
        Some(l) => result.transitions().with_label(l.as_str()).len(),
        None => result.transitions().len(),
    };
    let defaults = Counts::default_for(base);
    let counts = Counts {
        n_extra: args.n_extra.unwrap_or(defaults.n_extra),
        n_missing: args.n_missing.unwrap_or(defaults.n_missing),
    };
    let plan = sampler.generate_plan(counts, args.seed, scope.as_ref()).map_err(fail)?;
    let mut text = serde_json::to_string_pretty(&plan.to_json()).map_err(fail)?;
    text.push('\n');
    emit(args.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Evaluate(a) => run_evaluate(a),
        Command::Explore(a) => run_explore(a),
        Command::Plan(a) => run_plan(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("bqual: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
