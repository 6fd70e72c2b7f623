//! Quality metrics over derived and required behaviour.
//!
//! Every ratio is exact. A ratio whose denominator would be zero is an
//! error rather than a guess; reports show such metrics as not computed.

use std::collections::{BTreeMap, BTreeSet};

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::alignment::{similarity_total, AlignError};
use crate::bmachine::Pred;
use crate::explorer::{check_goal, ExplorationResult, ExploreError};
use crate::lts::{labels_of, pairs_of, set_size, Label, PairSet, State, TransitionSet, VarOrder};
use crate::ratio::Ratio;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("no modularity value for operation `{0}`")]
    MissingLabel(String),
    #[error("word limit must be positive")]
    WordLimit,
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Explore(#[from] ExploreError),
}

type Result<T> = std::result::Result<T, MetricError>;

pub(crate) fn ratio(num: usize, den: usize, what: &'static str) -> Result<Ratio> {
    Ratio::new(num as u64, den as u64).ok_or(MetricError::Empty(what))
}

fn ratio64(num: u64, den: u64, what: &'static str) -> Result<Ratio> {
    Ratio::new(num, den).ok_or(MetricError::Empty(what))
}

/// Required behaviour, with its pair and operation projections.
#[derive(Debug, Clone)]
pub struct RequirementSpec {
    pub transitions: TransitionSet,
    pub pairs: PairSet,
    pub operations: BTreeSet<Label>,
}

impl RequirementSpec {
    pub fn new(transitions: TransitionSet) -> Self {
        RequirementSpec {
            pairs: pairs_of(&transitions),
            operations: labels_of(&transitions),
            transitions,
        }
    }
}

/// Named goal predicates, in file order.
#[derive(Debug, Clone, Default)]
pub struct GoalSpec {
    pub goals: Vec<(String, Pred)>,
}

pub fn tfcomp(td: &TransitionSet, tr: &TransitionSet) -> Result<Ratio> {
    ratio(td.intersection_len(tr), tr.len(), "the required transition set")
}

pub fn pfcomp(td: &TransitionSet, tr: &TransitionSet, vars: &VarOrder, threshold: usize) -> Result<Ratio> {
    if tr.is_empty() {
        return Err(MetricError::Empty("the required transition set"));
    }
    let sim = similarity_total(td, tr, vars, threshold)?;
    ratio64(sim, size(tr, vars)?, "the required transition set")
}

pub fn tfcorr(td: &TransitionSet, tr: &TransitionSet) -> Result<Ratio> {
    ratio(td.intersection_len(tr), td.len(), "the derived transition set")
}

pub fn pfcorr(td: &TransitionSet, tr: &TransitionSet, vars: &VarOrder, threshold: usize) -> Result<Ratio> {
    if td.is_empty() {
        return Err(MetricError::Empty("the derived transition set"));
    }
    let sim = similarity_total(td, tr, vars, threshold)?;
    ratio64(sim, size(td, vars)?, "the derived transition set")
}

pub fn tfappr(td: &TransitionSet, tr: &TransitionSet) -> Result<Ratio> {
    let pd = pairs_of(td);
    let pr = pairs_of(tr);
    ratio(pd.intersection_len(&pr), pr.len(), "the required pair set")
}

pub fn pfappr(td: &TransitionSet, tr: &TransitionSet, vars: &VarOrder, threshold: usize) -> Result<Ratio> {
    let pd = pairs_of(td);
    let pr = pairs_of(tr);
    if pr.is_empty() {
        return Err(MetricError::Empty("the required pair set"));
    }
    let sim = similarity_total(&pd, &pr, vars, threshold)?;
    ratio64(sim, size(&pr, vars)?, "the required pair set")
}

fn size<T: crate::lts::Flatten>(set: &crate::lts::Set<T>, vars: &VarOrder) -> Result<u64> {
    set_size(set, vars).map_err(|e| MetricError::Align(e.into()))
}

/// The six functional-suitability values, computing each similarity once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functional {
    pub tfcomp: Result<Ratio>,
    pub pfcomp: Result<Ratio>,
    pub tfcorr: Result<Ratio>,
    pub pfcorr: Result<Ratio>,
    pub tfappr: Result<Ratio>,
    pub pfappr: Result<Ratio>,
}

pub fn functional(td: &TransitionSet, req: &RequirementSpec, vars: &VarOrder, threshold: usize) -> Functional {
    let tr = &req.transitions;
    let common = td.intersection_len(tr);
    let sim = similarity_total(td, tr, vars, threshold);
    let pd = pairs_of(td);
    let pair_sim = similarity_total(&pd, &req.pairs, vars, threshold);
    let over = |sim: &std::result::Result<u64, AlignError>, set_len: usize, sz: Result<u64>, what| -> Result<Ratio> {
        if set_len == 0 {
            return Err(MetricError::Empty(what));
        }
        let sim = sim.clone()?;
        ratio64(sim, sz?, what)
    };
    Functional {
        tfcomp: ratio(common, tr.len(), "the required transition set"),
        pfcomp: over(&sim, tr.len(), size(tr, vars), "the required transition set"),
        tfcorr: ratio(common, td.len(), "the derived transition set"),
        pfcorr: over(&sim, td.len(), size(td, vars), "the derived transition set"),
        tfappr: ratio(pd.intersection_len(&req.pairs), req.pairs.len(), "the required pair set"),
        pfappr: over(&pair_sim, req.pairs.len(), size(&req.pairs, vars), "the required pair set"),
    }
}

pub fn invariant_satisfiability(result: &ExplorationResult) -> Result<Ratio> {
    let total = result.transitions().len();
    ratio(total - result.violating().len(), total, "the derived transition set")
}

/// Share of required operations that occur and never trigger a violation.
pub fn availability(result: &ExplorationResult, required: &BTreeSet<Label>) -> Result<Ratio> {
    let bad = labels_of(result.violating());
    let good = labels_of(result.transitions())
        .into_iter()
        .filter(|l| !bad.contains(l) && required.contains(l))
        .count();
    ratio(good, required.len(), "the required operation set")
}

/// Share of states with at most one ingoing transition.
pub fn accountability_of(states: &[State], transitions: &TransitionSet) -> Result<Ratio> {
    let mut ingoing: FxHashMap<&State, usize> = FxHashMap::default();
    for t in transitions.iter() {
        *ingoing.entry(&t.post).or_default() += 1;
    }
    let traceable = states
        .iter()
        .filter(|s| ingoing.get(s).copied().unwrap_or(0) <= 1)
        .count();
    ratio(traceable, states.len(), "the derived state set")
}

pub fn accountability(result: &ExplorationResult) -> Result<Ratio> {
    accountability_of(result.states(), result.transitions())
}

pub fn fault_tolerance(u_changed: &TransitionSet, u_violating: &TransitionSet) -> Result<Ratio> {
    Ok(ratio(u_violating.len(), u_changed.len(), "the changed transition set")?.one_minus())
}

pub fn recoverability(u_ok: &TransitionSet, td: &TransitionSet) -> Result<Ratio> {
    ratio(u_ok.intersection_len(td), td.len(), "the derived transition set")
}

pub fn functional_analysability(td: &TransitionSet, u_changed: &TransitionSet) -> Result<Ratio> {
    Ok(ratio(
        td.intersection_len(u_changed),
        td.union_len(u_changed),
        "the union of derived and changed transitions",
    )?
    .one_minus())
}

/// One minus the Jaccard similarity of the violating sets; 0 when both are
/// empty.
pub fn fault_analysability(t_violating: &TransitionSet, u_violating: &TransitionSet) -> Ratio {
    match Ratio::new(
        t_violating.intersection_len(u_violating) as u64,
        t_violating.union_len(u_violating) as u64,
    ) {
        Some(r) => r.one_minus(),
        None => Ratio::zero(),
    }
}

/// Jaccard similarity of the two sets restricted to labels other than `op`.
pub fn modularity_of(op: &str, td: &TransitionSet, t_delta: &TransitionSet) -> Result<Ratio> {
    let a = td.without_label(op);
    let b = t_delta.without_label(op);
    ratio(
        a.intersection_len(&b),
        a.union_len(&b),
        "the union of transitions with other labels",
    )
}

/// Per-operation modularity weighted by each label's share of `td`.
pub fn weighted_modularity(per_op: &BTreeMap<Label, Ratio>, td: &TransitionSet) -> Result<Ratio> {
    if td.is_empty() {
        return Err(MetricError::Empty("the derived transition set"));
    }
    let mut counts: Vec<(Label, usize)> = td.label_counts().into_iter().collect();
    counts.sort();
    let mut total = Ratio::zero();
    for (label, n) in counts {
        let m = per_op
            .get(&label)
            .ok_or_else(|| MetricError::MissingLabel(label.to_string()))?;
        total = total + ratio(n, td.len(), "the derived transition set")? * m.clone();
    }
    Ok(total)
}

pub fn reusability(td: &TransitionSet) -> Result<Ratio> {
    Ok(ratio(labels_of(td).len(), td.len(), "the derived transition set")?.one_minus())
}

pub fn capacity(result: &ExplorationResult) -> u64 {
    (result.states().len() + result.transitions().len()) as u64
}

/// Share of goals satisfied by some derived state.
pub fn goal_appropriateness(result: &ExplorationResult, goals: &GoalSpec) -> Result<Ratio> {
    let mut achieved = 0;
    for (_, g) in &goals.goals {
        if check_goal(result, g)? {
            achieved += 1;
        }
    }
    ratio(achieved, goals.goals.len(), "the goal list")
}

pub fn learnability(n_words: u64, limit: u64) -> Result<Ratio> {
    if limit == 0 {
        return Err(MetricError::WordLimit);
    }
    Ok(ratio64(n_words.min(limit), limit, "the word limit")?.one_minus())
}
