//! End-to-end evaluation: load inputs, explore, compute every metric and
//! assemble a [`QualityReport`].

mod render;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::alignment::DEFAULT_THRESHOLD;
use crate::bmachine::{parse_machine, parse_predicate, word_count, Machine, ParseError};
use crate::explorer::{explore_with_domains, infer_domains, ExplorationResult, ExploreError, Limits, Metering};
use crate::lts::{transition_from_json, EnumTable, Label, State, Transition, TransitionSet, VarOrder};
use crate::metrics::{self, GoalSpec, MetricError, RequirementSpec};
use crate::mutation::{self, Counts, MutationError, MutationPlan, Sampler};
use crate::ratio::Ratio;

pub use render::{metric_from_json, render_json, render_table, Format};

/// Report fields holding ratios, in report order.
pub const METRIC_FIELDS: [&str; 17] = [
    "tfcomp",
    "pfcomp",
    "tfcorr",
    "pfcorr",
    "tfappr",
    "pfappr",
    "invariant_satisfiability",
    "availability",
    "accountability",
    "fault_tolerance",
    "recoverability",
    "functional_analysability",
    "fault_analysability",
    "modularity",
    "reusability",
    "goal_appropriateness",
    "learnability",
];

pub const DEFAULT_WORD_LIMIT: u64 = 10_000;
pub const DEFAULT_TRIALS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RequiredSource {
    /// JSON lines of canonical transitions.
    Transitions(PathBuf),
    /// A machine whose derived transitions are the requirements.
    Reference(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MutationConfig {
    Seeded {
        trials: usize,
        n_extra: Option<usize>,
        n_missing: Option<usize>,
        seed: u64,
    },
    Plan(PathBuf),
}

impl Default for MutationConfig {
    fn default() -> Self {
        MutationConfig::Seeded {
            trials: DEFAULT_TRIALS,
            n_extra: None,
            n_missing: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationConfig {
    pub machine_path: PathBuf,
    pub required: Option<RequiredSource>,
    pub goals_path: Option<PathBuf>,
    pub word_limit: u64,
    pub limits: Limits,
    pub mutation: MutationConfig,
    pub similarity_threshold: usize,
}

impl EvaluationConfig {
    pub fn new(machine_path: impl Into<PathBuf>) -> Self {
        EvaluationConfig {
            machine_path: machine_path.into(),
            required: None,
            goals_path: None,
            word_limit: DEFAULT_WORD_LIMIT,
            limits: Limits::default(),
            mutation: MutationConfig::default(),
            similarity_threshold: DEFAULT_THRESHOLD,
        }
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("{path}:{err}")]
    Parse { path: PathBuf, err: ParseError },
    #[error("{path}:{line}: {msg}")]
    Input { path: PathBuf, line: usize, msg: String },
    #[error("{path}: {err}")]
    Explore { path: PathBuf, err: ExploreError },
    #[error("{0}")]
    Required(String),
    #[error("{path}: {err}")]
    Plan { path: PathBuf, err: MutationError },
}

/// Exit-status classes shared by the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Failure,
    Parse,
}

impl EvalError {
    pub fn class(&self) -> ErrorClass {
        match self {
            EvalError::Parse { .. } | EvalError::Input { .. } => ErrorClass::Parse,
            EvalError::Plan {
                err: MutationError::Lts(_),
                ..
            } => ErrorClass::Parse,
            _ => ErrorClass::Failure,
        }
    }
}

fn read(path: &Path) -> Result<String, EvalError> {
    std::fs::read_to_string(path).map_err(|e| EvalError::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

pub fn load_machine(path: &Path) -> Result<(String, Machine), EvalError> {
    let source = read(path)?;
    let machine = parse_machine(&source).map_err(|err| EvalError::Parse {
        path: path.to_path_buf(),
        err,
    })?;
    Ok((source, machine))
}

/// Required transitions from JSON lines; blank lines are skipped.
pub fn parse_required(text: &str, vars: &VarOrder, enums: &EnumTable) -> Result<TransitionSet, (usize, String)> {
    let mut out = TransitionSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let json: serde_json::Value = serde_json::from_str(line).map_err(|e| (i + 1, e.to_string()))?;
        out.insert(transition_from_json(&json, vars, enums).map_err(|e| (i + 1, e.to_string()))?);
    }
    if out.is_empty() {
        return Err((0, "no required transitions".into()));
    }
    Ok(out)
}

/// Requirements plus a note on how they were obtained.
pub struct LoadedRequirements {
    pub spec: RequirementSpec,
    pub description: String,
    pub reference_truncated: bool,
}

pub fn load_required(source: &RequiredSource, machine: &Machine, limits: Limits) -> Result<LoadedRequirements, EvalError> {
    let vars = machine.var_order();
    match source {
        RequiredSource::Transitions(path) => {
            let text = read(path)?;
            let set = parse_required(&text, &vars, &machine.enum_table()).map_err(|(line, msg)| EvalError::Input {
                path: path.clone(),
                line,
                msg,
            })?;
            Ok(LoadedRequirements {
                spec: RequirementSpec::new(set),
                description: format!("transitions:{}", path.display()),
                reference_truncated: false,
            })
        }
        RequiredSource::Reference(path) => {
            let (_, reference) = load_machine(path)?;
            let ref_vars = reference.var_order();
            let mut a: Vec<&String> = vars.names().iter().collect();
            let mut b: Vec<&String> = ref_vars.names().iter().collect();
            a.sort();
            b.sort();
            if a != b {
                return Err(EvalError::Required(format!(
                    "reference machine variables ({}) differ from machine variables ({})",
                    ref_vars.names().join(", "),
                    vars.names().join(", ")
                )));
            }
            let domains = infer_domains(&reference).map_err(|err| EvalError::Explore {
                path: path.clone(),
                err,
            })?;
            let result = explore_with_domains(&reference, &domains, limits).map_err(|err| EvalError::Explore {
                path: path.clone(),
                err,
            })?;
            let reorder = |s: &State| {
                s.reorder(&vars).map_err(|e| EvalError::Required(e.to_string()))
            };
            let set = result
                .transitions()
                .iter()
                .map(|t| {
                    Ok(Transition {
                        pre: reorder(&t.pre)?,
                        label: t.label.clone(),
                        post: reorder(&t.post)?,
                    })
                })
                .collect::<Result<TransitionSet, EvalError>>()?;
            Ok(LoadedRequirements {
                spec: RequirementSpec::new(set),
                description: format!("reference:{}", path.display()),
                reference_truncated: result.truncated(),
            })
        }
    }
}

/// Goals file: one `NAME: predicate` per line; blank lines and `//`
/// comment lines are ignored. Errors carry the 1-based line number.
pub fn parse_goals(text: &str, machine: &Machine) -> Result<GoalSpec, (usize, String)> {
    let mut goals: Vec<(String, crate::bmachine::Pred)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with("//") {
            continue;
        }
        let (name, pred) = trimmed
            .split_once(':')
            .ok_or_else(|| (i + 1, "expected `NAME: predicate`".to_string()))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err((i + 1, format!("invalid goal name `{name}`")));
        }
        if goals.iter().any(|(n, _)| n == name) {
            return Err((i + 1, format!("duplicate goal `{name}`")));
        }
        let pred = parse_predicate(pred, machine).map_err(|e| (i + 1, e.to_string()))?;
        goals.push((name.to_string(), pred));
    }
    Ok(GoalSpec { goals })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricValue {
    Computed(Ratio),
    NotComputed(String),
}

impl MetricValue {
    pub fn ratio(&self) -> Option<&Ratio> {
        match self {
            MetricValue::Computed(r) => Some(r),
            MetricValue::NotComputed(_) => None,
        }
    }
}

impl From<Result<Ratio, MetricError>> for MetricValue {
    fn from(r: Result<Ratio, MetricError>) -> Self {
        match r {
            Ok(r) => MetricValue::Computed(r),
            Err(e) => MetricValue::NotComputed(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplorationSummary {
    pub variables: Vec<String>,
    pub initial_states: usize,
    pub states: usize,
    pub transitions: usize,
    pub violating: usize,
    pub deadlock_states: usize,
    pub invariant_violating_states: usize,
    pub truncated: bool,
}

impl ExplorationSummary {
    pub fn of(r: &ExplorationResult) -> Self {
        ExplorationSummary {
            variables: r.var_order().names().to_vec(),
            initial_states: r.initial_states().len(),
            states: r.states().len(),
            transitions: r.transitions().len(),
            violating: r.violating().len(),
            deadlock_states: r.deadlock_states().len(),
            invariant_violating_states: r.invariant_violating_states().len(),
            truncated: r.truncated(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationSummary {
    /// `"seeded"` or `"plan"`.
    pub mode: &'static str,
    pub trials: usize,
    pub n_extra: usize,
    pub n_missing: usize,
    pub seed: u64,
    pub plan: Option<String>,
    /// Trials excluded per metric because the metric was not computable.
    pub excluded: BTreeMap<&'static str, usize>,
    pub modularity_per_operation: BTreeMap<String, MetricValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub machine_path: String,
    pub required: Option<String>,
    pub reference_truncated: bool,
    pub goals: Option<String>,
    pub max_states: usize,
    pub max_transitions: usize,
    pub word_limit: u64,
    pub n_words: u64,
    pub similarity_threshold: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub machine: String,
    /// One entry per name in [`METRIC_FIELDS`], in that order.
    pub metrics: Vec<(&'static str, MetricValue)>,
    pub capacity: u64,
    pub metering: Metering,
    pub exploration: ExplorationSummary,
    pub mutation: Option<MutationSummary>,
    pub provenance: Provenance,
}

impl QualityReport {
    pub fn get(&self, name: &str) -> Option<&MetricValue> {
        self.metrics.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    pub fn ratio(&self, name: &str) -> Option<&Ratio> {
        self.get(name).and_then(MetricValue::ratio)
    }

    pub fn truncated(&self) -> bool {
        self.exploration.truncated || self.provenance.reference_truncated
    }

    pub fn not_computed(&self) -> impl Iterator<Item = (&'static str, &str)> + '_ {
        self.metrics.iter().filter_map(|(n, v)| match v {
            MetricValue::NotComputed(reason) => Some((*n, reason.as_str())),
            MetricValue::Computed(_) => None,
        })
    }
}

struct Metrics(BTreeMap<&'static str, MetricValue>);

impl Metrics {
    fn set(&mut self, name: &'static str, v: impl Into<MetricValue>) {
        debug_assert!(METRIC_FIELDS.contains(&name));
        self.0.insert(name, v.into());
    }

    fn missing(&mut self, name: &'static str, reason: &str) {
        self.set(name, MetricValue::NotComputed(reason.to_string()));
    }

    fn into_ordered(mut self) -> Vec<(&'static str, MetricValue)> {
        METRIC_FIELDS
            .iter()
            .map(|&n| {
                let v = self
                    .0
                    .remove(n)
                    .unwrap_or_else(|| MetricValue::NotComputed("not evaluated".into()));
                (n, v)
            })
            .collect()
    }
}

/// Run the whole pipeline described by `config`.
pub fn evaluate(config: &EvaluationConfig) -> Result<QualityReport, EvalError> {
    let (source, machine) = load_machine(&config.machine_path)?;
    let path = config.machine_path.clone();
    let domains = infer_domains(&machine).map_err(|err| EvalError::Explore {
        path: path.clone(),
        err,
    })?;
    let result = explore_with_domains(&machine, &domains, config.limits).map_err(|err| EvalError::Explore {
        path: path.clone(),
        err,
    })?;
    let vars = result.var_order().clone();
    let td = result.transitions();
    let mut m = Metrics(BTreeMap::new());

    let required = match &config.required {
        Some(src) => Some(load_required(src, &machine, config.limits)?),
        None => None,
    };
    match &required {
        Some(req) => {
            let f = metrics::functional(td, &req.spec, &vars, config.similarity_threshold);
            m.set("tfcomp", f.tfcomp);
            m.set("pfcomp", f.pfcomp);
            m.set("tfcorr", f.tfcorr);
            m.set("pfcorr", f.pfcorr);
            m.set("tfappr", f.tfappr);
            m.set("pfappr", f.pfappr);
            m.set("availability", metrics::availability(&result, &req.spec.operations));
        }
        None => {
            for name in ["tfcomp", "pfcomp", "tfcorr", "pfcorr", "tfappr", "pfappr", "availability"] {
                m.missing(name, "no required transitions supplied");
            }
        }
    }

    m.set("invariant_satisfiability", metrics::invariant_satisfiability(&result));
    m.set("accountability", metrics::accountability(&result));
    m.set("reusability", metrics::reusability(td));

    let mutation = run_mutation(config, &machine, &domains, &result, &mut m)?;

    let goals_desc = match &config.goals_path {
        Some(p) => {
            let text = read(p)?;
            let goals = parse_goals(&text, &machine).map_err(|(line, msg)| EvalError::Input {
                path: p.clone(),
                line,
                msg,
            })?;
            m.set("goal_appropriateness", metrics::goal_appropriateness(&result, &goals));
            Some(p.display().to_string())
        }
        None => {
            m.missing("goal_appropriateness", "no goals supplied");
            None
        }
    };

    let n_words = word_count(&source) as u64;
    m.set("learnability", metrics::learnability(n_words, config.word_limit));

    Ok(QualityReport {
        machine: machine.name.clone(),
        metrics: m.into_ordered(),
        capacity: metrics::capacity(&result),
        metering: result.metering,
        exploration: ExplorationSummary::of(&result),
        mutation,
        provenance: Provenance {
            machine_path: path.display().to_string(),
            required: required.as_ref().map(|r| r.description.clone()),
            reference_truncated: required.as_ref().is_some_and(|r| r.reference_truncated),
            goals: goals_desc,
            max_states: config.limits.max_states,
            max_transitions: config.limits.max_transitions,
            word_limit: config.word_limit,
            n_words,
            similarity_threshold: config.similarity_threshold,
        },
    })
}

const MUTATION_FIELDS: [&str; 4] = [
    "fault_tolerance",
    "recoverability",
    "functional_analysability",
    "fault_analysability",
];

fn run_mutation(
    config: &EvaluationConfig,
    machine: &Machine,
    domains: &crate::explorer::DomainMap,
    result: &ExplorationResult,
    m: &mut Metrics,
) -> Result<Option<MutationSummary>, EvalError> {
    let td = result.transitions();
    let not_computed = |m: &mut Metrics, reason: &str| {
        for f in MUTATION_FIELDS {
            m.missing(f, reason);
        }
        m.missing("modularity", reason);
    };
    if td.is_empty() {
        not_computed(m, "the derived transition set is empty");
        return Ok(None);
    }
    let sampler = Sampler::for_machine(result, domains, machine);
    match &config.mutation {
        MutationConfig::Plan(path) => {
            let text = read(path)?;
            let plan_err = |err| EvalError::Plan { path: path.clone(), err };
            let json: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| plan_err(MutationError::Lts(crate::lts::LtsError::Json(e.to_string()))))?;
            let plan = MutationPlan::from_json(&json, result.var_order(), &machine.enum_table()).map_err(plan_err)?;
            plan.validate(td).map_err(plan_err)?;
            let changed = mutation::apply_plan(result, &plan, &machine.invariant).map_err(plan_err)?;
            let tm = mutation::trial_metrics(result, &changed);
            m.set("fault_tolerance", tm.fault_tolerance.clone());
            m.set("recoverability", tm.recoverability.clone());
            m.set("functional_analysability", tm.functional_analysability.clone());
            m.set("fault_analysability", Ok(tm.fault_analysability.clone()));
            let excluded = MUTATION_FIELDS
                .iter()
                .map(|&f| (f, usize::from(m.0.get(f).and_then(MetricValue::ratio).is_none())))
                .collect();
            let modularity = mutation::modularity_with(result, &machine.invariant, |_, label| {
                Ok(plan.restricted_to(label))
            })
            .map_err(plan_err)?;
            m.set("modularity", modularity.weighted.clone());
            Ok(Some(MutationSummary {
                mode: "plan",
                trials: 1,
                n_extra: plan.extra.len(),
                n_missing: plan.missing.len(),
                seed: plan.seed,
                plan: Some(path.display().to_string()),
                excluded,
                modularity_per_operation: per_op(modularity.per_operation),
            }))
        }
        MutationConfig::Seeded {
            trials,
            n_extra,
            n_missing,
            seed,
        } => {
            let defaults = Counts::default_for(td.len());
            let counts = Counts {
                n_extra: n_extra.unwrap_or(defaults.n_extra),
                n_missing: n_missing.unwrap_or(defaults.n_missing),
            };
            let mut summary = MutationSummary {
                mode: "seeded",
                trials: *trials,
                n_extra: counts.n_extra,
                n_missing: counts.n_missing,
                seed: *seed,
                plan: None,
                excluded: BTreeMap::new(),
                modularity_per_operation: BTreeMap::new(),
            };
            match mutation::run_trials(&sampler, &machine.invariant, *trials, counts, *seed) {
                Ok(s) => {
                    for (name, avg) in [
                        ("fault_tolerance", &s.fault_tolerance),
                        ("recoverability", &s.recoverability),
                        ("functional_analysability", &s.functional_analysability),
                        ("fault_analysability", &s.fault_analysability),
                    ] {
                        summary.excluded.insert(name, avg.excluded);
                        match &avg.mean {
                            Some(r) => m.set(name, MetricValue::Computed(r.clone())),
                            None => m.missing(
                                name,
                                avg.reason.as_deref().unwrap_or("no trial produced a value"),
                            ),
                        }
                    }
                }
                Err(e) => {
                    for f in MUTATION_FIELDS {
                        m.missing(f, &e.to_string());
                    }
                }
            }
            match mutation::modularity_sweep(&sampler, &machine.invariant, *seed) {
                Ok(out) => {
                    m.set("modularity", out.weighted.clone());
                    summary.modularity_per_operation = per_op(out.per_operation);
                }
                Err(e) => m.missing("modularity", &e.to_string()),
            }
            Ok(Some(summary))
        }
    }
}

fn per_op(map: BTreeMap<Label, Result<Ratio, MetricError>>) -> BTreeMap<String, MetricValue> {
    map.into_iter().map(|(l, v)| (l.to_string(), v.into())).collect()
}
