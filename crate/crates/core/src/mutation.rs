//! Fault injection at the transition-system level.
//!
//! A plan adds extra transitions and removes existing ones. Applying it
//! recomputes which transitions stay reachable from the initial states, then
//! masks the injected faults back out to obtain `U_changed`, the set the
//! reliability and analysability metrics are computed over.

use std::collections::{BTreeMap, VecDeque};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::bmachine::{Machine, Pred};
use crate::explorer::{holds, Domain, DomainMap, ExplorationResult, ExploreError};
use crate::lts::{transition_from_json, EnumTable, Label, LtsError, State, Transition, TransitionSet, VarOrder};
use crate::metrics::{self, ratio, MetricError};
use crate::ratio::Ratio;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MutationError {
    #[error("cannot draw {requested} {what}: only {available} available")]
    Capacity {
        what: &'static str,
        requested: u64,
        available: u64,
    },
    #[error("invalid plan: {0}")]
    Invalid(String),
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error(transparent)]
    Explore(#[from] ExploreError),
}

type Result<T> = std::result::Result<T, MutationError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationPlan {
    pub extra: TransitionSet,
    pub missing: TransitionSet,
    pub seed: u64,
    pub label_scope: Option<Label>,
}

impl MutationPlan {
    pub fn empty(seed: u64) -> Self {
        MutationPlan {
            extra: TransitionSet::new(),
            missing: TransitionSet::new(),
            seed,
            label_scope: None,
        }
    }

    /// The part of this plan that touches `label`.
    pub fn restricted_to(&self, label: &Label) -> MutationPlan {
        MutationPlan {
            extra: self.extra.with_label(label.as_str()),
            missing: self.missing.with_label(label.as_str()),
            seed: self.seed,
            label_scope: Some(label.clone()),
        }
    }

    /// Check the plan against the derived transitions it will be applied to.
    pub fn validate(&self, td: &TransitionSet) -> Result<()> {
        if let Some(t) = self.extra.sorted().into_iter().find(|t| td.contains(t)) {
            return Err(MutationError::Invalid(format!("extra transition {t} is already derived")));
        }
        if let Some(t) = self.missing.sorted().into_iter().find(|t| !td.contains(t)) {
            return Err(MutationError::Invalid(format!("missing transition {t} is not derived")));
        }
        if let Some(scope) = &self.label_scope {
            let stray = self
                .extra
                .iter()
                .chain(self.missing.iter())
                .find(|t| &t.label != scope);
            if let Some(t) = stray {
                return Err(MutationError::Invalid(format!(
                    "transition {t} is outside the label scope `{scope}`"
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Json {
        let list = |s: &TransitionSet| Json::Array(s.sorted().iter().map(Transition::to_json).collect());
        let mut obj = json!({
            "extra": list(&self.extra),
            "missing": list(&self.missing),
            "seed": self.seed,
        });
        if let Some(l) = &self.label_scope {
            obj["label_scope"] = json!(l.as_str());
        }
        obj
    }

    pub fn from_json(json: &Json, vars: &VarOrder, enums: &EnumTable) -> Result<Self> {
        let obj = json
            .as_object()
            .ok_or_else(|| MutationError::Invalid("plan must be a JSON object".into()))?;
        if let Some(k) = obj
            .keys()
            .find(|k| !matches!(k.as_str(), "extra" | "missing" | "seed" | "label_scope"))
        {
            return Err(MutationError::Invalid(format!("unknown field `{k}`")));
        }
        let list = |key: &str| -> Result<TransitionSet> {
            match obj.get(key) {
                None => Ok(TransitionSet::new()),
                Some(Json::Array(items)) => items
                    .iter()
                    .map(|t| transition_from_json(t, vars, enums).map_err(MutationError::from))
                    .collect(),
                Some(_) => Err(MutationError::Invalid(format!("`{key}` must be an array"))),
            }
        };
        let seed = match obj.get("seed") {
            None => 0,
            Some(s) => s
                .as_u64()
                .ok_or_else(|| MutationError::Invalid("`seed` must be a non-negative integer".into()))?,
        };
        let label_scope = match obj.get("label_scope") {
            None | Some(Json::Null) => None,
            Some(Json::String(s)) => Some(Label::new(s)),
            Some(_) => return Err(MutationError::Invalid("`label_scope` must be a string".into())),
        };
        let extra = list("extra")?;
        let missing = list("missing")?;
        if !extra.is_disjoint(&missing) {
            return Err(MutationError::Invalid("a transition is both extra and missing".into()));
        }
        Ok(MutationPlan {
            extra,
            missing,
            seed,
            label_scope,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub n_extra: usize,
    pub n_missing: usize,
}

impl Counts {
    /// One percent of `n`, rounded up, and at least one.
    pub fn default_for(n: usize) -> Self {
        let k = n.div_ceil(100).max(1);
        Counts {
            n_extra: k,
            n_missing: k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangedSystem {
    pub t_changed: TransitionSet,
    pub u_changed: TransitionSet,
    pub u_ok: TransitionSet,
    pub u_violating: TransitionSet,
}

/// Seeded plan generation over one exploration result.
pub struct Sampler<'a> {
    result: &'a ExplorationResult,
    domains: &'a DomainMap,
    labels: Vec<Label>,
    live_states: Vec<State>,
    /// Edge ids in transition order, so plans do not depend on discovery
    /// numbering.
    canonical: Vec<u32>,
    /// Per graph label: derived transitions that an extra with that label
    /// could have collided with.
    taken: Vec<u64>,
}

impl<'a> Sampler<'a> {
    /// `labels` are the operations extras may carry, in declaration order.
    pub fn new(result: &'a ExplorationResult, domains: &'a DomainMap, labels: Vec<Label>) -> Self {
        let g = result.graph();
        let states = result.states();
        let mut live_states: Vec<State> = (0..g.state_count())
            .filter(|&i| g.inv_ok[i])
            .map(|i| states[i].clone())
            .collect();
        live_states.sort();
        let in_domain: Vec<bool> = states.iter().map(|s| domains.contains(s)).collect();
        let mut taken = vec![0u64; g.labels.len()];
        for e in &g.edges {
            if g.inv_ok[e.pre as usize] && in_domain[e.post as usize] {
                taken[e.label as usize] += 1;
            }
        }
        let mut canonical: Vec<u32> = (0..g.edges.len() as u32).collect();
        let key = |e: &u32| {
            let e = &g.edges[*e as usize];
            (&states[e.pre as usize], &g.labels[e.label as usize], &states[e.post as usize])
        };
        canonical.par_sort_unstable_by(|a, b| key(a).cmp(&key(b)));
        Sampler {
            result,
            domains,
            labels,
            live_states,
            canonical,
            taken,
        }
    }

    pub fn for_machine(result: &'a ExplorationResult, domains: &'a DomainMap, machine: &Machine) -> Self {
        let labels = machine.operations.iter().map(|o| Label::new(&o.name)).collect();
        Sampler::new(result, domains, labels)
    }

    pub fn result(&self) -> &ExplorationResult {
        self.result
    }

    fn scope_labels(&self, scope: Option<&Label>) -> Vec<Label> {
        match scope {
            Some(l) => vec![l.clone()],
            None => self.labels.clone(),
        }
    }

    /// How many distinct extra transitions a plan with this scope can draw.
    pub fn extra_capacity(&self, scope: Option<&Label>) -> u128 {
        let labels = self.scope_labels(scope);
        let g = self.result.graph();
        let taken: u128 = labels
            .iter()
            .filter_map(|l| g.label_id(l))
            .map(|id| self.taken[id as usize] as u128)
            .sum();
        let space = (self.live_states.len() as u128 * labels.len() as u128).saturating_mul(self.domains.product_size());
        space - taken
    }

    /// Draw a plan. Missing transitions are sampled without replacement from
    /// the derived transitions; extras combine a derived non-violating
    /// pre-state, a label and a post-state from the domain product, redrawn
    /// until new.
    pub fn generate_plan(&self, counts: Counts, seed: u64, scope: Option<&Label>) -> Result<MutationPlan> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = self.result.graph();
        let states = self.result.states();

        let eligible: Vec<u32> = match scope.map(|l| g.label_id(l)) {
            None => self.canonical.clone(),
            Some(None) => Vec::new(),
            Some(Some(id)) => self
                .canonical
                .iter()
                .copied()
                .filter(|&e| g.edges[e as usize].label == id)
                .collect(),
        };
        if counts.n_missing > eligible.len() {
            return Err(MutationError::Capacity {
                what: "missing transitions",
                requested: counts.n_missing as u64,
                available: eligible.len() as u64,
            });
        }
        let mut picks = index::sample(&mut rng, eligible.len(), counts.n_missing).into_vec();
        picks.sort_unstable();
        let missing: TransitionSet = picks
            .into_iter()
            .map(|i| g.transition(states, &g.edges[eligible[i] as usize]))
            .collect();

        let extra = self.draw_extras(&mut rng, scope, counts.n_extra)?;
        Ok(MutationPlan {
            extra,
            missing,
            seed,
            label_scope: scope.cloned(),
        })
    }

    fn draw_extras(&self, rng: &mut ChaCha8Rng, scope: Option<&Label>, n: usize) -> Result<TransitionSet> {
        if n == 0 {
            return Ok(TransitionSet::new());
        }
        let available = self.extra_capacity(scope);
        if (n as u128) > available {
            return Err(MutationError::Capacity {
                what: "extra transitions",
                requested: n as u64,
                available: available.min(u64::MAX as u128) as u64,
            });
        }
        let labels = self.scope_labels(scope);
        let vars = self.result.var_order();
        let domains: Vec<&Domain> = self.domains.domains().collect();
        let td = self.result.transitions();
        let mut extra = TransitionSet::with_capacity(n);
        if (n as u128) * 2 > available {
            // Dense request: enumerate the candidates and sample among them.
            let product = self.domains.product_size() as usize;
            let mut candidates = Vec::new();
            for pre in &self.live_states {
                for label in &labels {
                    for k in 0..product {
                        let t = Transition {
                            pre: pre.clone(),
                            label: label.clone(),
                            post: post_at(vars, &domains, k)?,
                        };
                        if !td.contains(&t) {
                            candidates.push(t);
                        }
                    }
                }
            }
            let mut picks = index::sample(rng, candidates.len(), n).into_vec();
            picks.sort_unstable();
            extra.extend(picks.into_iter().map(|i| candidates[i].clone()));
            return Ok(extra);
        }
        while extra.len() < n {
            let pre = self.live_states[rng.random_range(0..self.live_states.len())].clone();
            let label = labels[rng.random_range(0..labels.len())].clone();
            let values = domains.iter().map(|d| d.value_at(rng.random_range(0..d.len()))).collect();
            let t = Transition {
                pre,
                label,
                post: State::new(vars.clone(), values)?,
            };
            if !td.contains(&t) {
                extra.insert(t);
            }
        }
        Ok(extra)
    }
}

/// The `k`-th state of the domain product, last variable fastest.
fn post_at(vars: &VarOrder, domains: &[&Domain], mut k: usize) -> Result<State> {
    let mut values = Vec::with_capacity(domains.len());
    for d in domains.iter().rev() {
        values.push(d.value_at(k % d.len()));
        k /= d.len();
    }
    values.reverse();
    Ok(State::new(vars.clone(), values)?)
}

/// A plan applied to a derived system, held as flags over the derived edges.
///
/// `U_changed` never leaves the derived transitions: reachable extras are
/// masked out again and missing transitions are derived by definition.
pub struct Applied<'a> {
    result: &'a ExplorationResult,
    /// Derived edge reached in the changed system.
    reached: Vec<bool>,
    /// Derived edge in `U_changed`.
    in_u: Vec<bool>,
    /// Derived edge in `U_changed` that is violating there.
    u_violating: Vec<bool>,
    extras: Vec<Transition>,
    extra_reached: Vec<bool>,
}

/// Apply `plan` to the derived system. The plan is validated first.
pub fn apply<'a>(result: &'a ExplorationResult, plan: &MutationPlan, invariant: &Pred) -> Result<Applied<'a>> {
    plan.validate(result.transitions())?;
    let g = result.graph();
    let n = g.state_count();
    let mut removed = vec![false; g.edges.len()];
    for t in plan.missing.iter() {
        let e = g.edge_id(t).expect("validated missing transition is derived");
        removed[e] = true;
    }

    // extras may mention states that were never derived
    let extras = plan.extra.sorted();
    let mut fresh: FxHashMap<&State, u32> = FxHashMap::default();
    let mut fresh_ok: Vec<bool> = Vec::new();
    let mut extra_ends: Vec<(u32, u32)> = Vec::with_capacity(extras.len());
    for t in &extras {
        let mut id = |s| -> Result<u32> {
            if let Some(&i) = g.index.get(s) {
                return Ok(i);
            }
            if let Some(&i) = fresh.get(s) {
                return Ok(i);
            }
            let i = (n + fresh_ok.len()) as u32;
            fresh_ok.push(holds(invariant, s)?);
            fresh.insert(s, i);
            Ok(i)
        };
        extra_ends.push((id(&t.pre)?, id(&t.post)?));
    }
    let total = n + fresh_ok.len();
    let inv_ok = |s: u32| if (s as usize) < n { g.inv_ok[s as usize] } else { fresh_ok[s as usize - n] };
    let mut extra_out: FxHashMap<u32, Vec<usize>> = FxHashMap::default();
    for (i, &(pre, _)) in extra_ends.iter().enumerate() {
        extra_out.entry(pre).or_default().push(i);
    }

    let mut reached = vec![false; g.edges.len()];
    let mut extra_reached = vec![false; extras.len()];
    let mut seen = vec![false; total];
    let mut queue: VecDeque<u32> = VecDeque::new();
    for &s in &g.initial {
        if !seen[s as usize] {
            seen[s as usize] = true;
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        // states breaking the invariant are not expanded, as in exploration
        if !inv_ok(s) {
            continue;
        }
        let mut visit = |post: u32, queue: &mut VecDeque<u32>| {
            if !seen[post as usize] {
                seen[post as usize] = true;
                queue.push_back(post);
            }
        };
        if (s as usize) < n {
            for e in g.out_edges(s) {
                if !removed[e] {
                    reached[e] = true;
                    visit(g.edges[e].post, &mut queue);
                }
            }
        }
        for &i in extra_out.get(&s).map(Vec::as_slice).unwrap_or(&[]) {
            extra_reached[i] = true;
            visit(extra_ends[i].1, &mut queue);
        }
    }

    let in_u: Vec<bool> = reached.iter().zip(&removed).map(|(&r, &m)| r || m).collect();
    let mut has_out = vec![false; n];
    for (e, edge) in g.edges.iter().enumerate() {
        if in_u[e] {
            has_out[edge.pre as usize] = true;
        }
    }
    let u_violating = g
        .edges
        .iter()
        .zip(&in_u)
        .map(|(edge, &u)| u && (!g.inv_ok[edge.post as usize] || !has_out[edge.post as usize]))
        .collect();
    Ok(Applied {
        result,
        reached,
        in_u,
        u_violating,
        extras,
        extra_reached,
    })
}

/// Apply `plan` and materialise the changed transition sets.
pub fn apply_plan(result: &ExplorationResult, plan: &MutationPlan, invariant: &Pred) -> Result<ChangedSystem> {
    Ok(apply(result, plan, invariant)?.changed_system())
}

impl Applied<'_> {
    fn derived_where(&self, flag: impl Fn(usize) -> bool) -> TransitionSet {
        let g = self.result.graph();
        let states = self.result.states();
        (0..g.edges.len())
            .filter(|&e| flag(e))
            .map(|e| g.transition(states, &g.edges[e]))
            .collect()
    }

    pub fn changed_system(&self) -> ChangedSystem {
        let mut t_changed = self.derived_where(|e| self.reached[e]);
        t_changed.extend(
            self.extras
                .iter()
                .zip(&self.extra_reached)
                .filter(|(_, &r)| r)
                .map(|(t, _)| t.clone()),
        );
        ChangedSystem {
            t_changed,
            u_changed: self.derived_where(|e| self.in_u[e]),
            u_ok: self.derived_where(|e| self.in_u[e] && !self.u_violating[e]),
            u_violating: self.derived_where(|e| self.u_violating[e]),
        }
    }

    pub fn u_changed_len(&self) -> usize {
        self.in_u.iter().filter(|&&u| u).count()
    }

    pub fn u_violating_len(&self) -> usize {
        self.u_violating.iter().filter(|&&v| v).count()
    }

    pub fn metrics(&self) -> TrialMetrics {
        let g = self.result.graph();
        let td = g.edges.len();
        let u = self.u_changed_len();
        let uv = self.u_violating_len();
        let tv = g.edge_violating.iter().filter(|&&v| v).count();
        let both = g
            .edge_violating
            .iter()
            .zip(&self.u_violating)
            .filter(|(&a, &b)| a && b)
            .count();
        TrialMetrics {
            u_changed: u,
            u_violating: uv,
            fault_tolerance: ratio(uv, u, "the changed transition set").map(|r| r.one_minus()),
            recoverability: ratio(u - uv, td, "the derived transition set"),
            functional_analysability: ratio(u, td, "the union of derived and changed transitions")
                .map(|r| r.one_minus()),
            fault_analysability: Ratio::new(both as u64, (tv + uv - both) as u64)
                .map_or_else(Ratio::zero, |r| r.one_minus()),
        }
    }

    /// Modularity of `label` with this system as its `Δ(α)`.
    pub fn modularity(&self, label: &Label) -> std::result::Result<Ratio, MetricError> {
        let g = self.result.graph();
        let own = g.label_id(label);
        let other = |e: usize| Some(g.edges[e].label) != own;
        let derived = (0..g.edges.len()).filter(|&e| other(e)).count();
        let kept = (0..g.edges.len()).filter(|&e| other(e) && self.reached[e]).count();
        let added = self
            .extras
            .iter()
            .zip(&self.extra_reached)
            .filter(|(t, &r)| r && &t.label != label)
            .count();
        ratio(kept, derived + added, "the union of transitions with other labels")
    }
}

/// The four fault-injection metrics of one applied plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialMetrics {
    pub u_changed: usize,
    pub u_violating: usize,
    pub fault_tolerance: std::result::Result<Ratio, MetricError>,
    pub recoverability: std::result::Result<Ratio, MetricError>,
    pub functional_analysability: std::result::Result<Ratio, MetricError>,
    pub fault_analysability: Ratio,
}

/// The same metrics computed from materialised sets.
pub fn trial_metrics(result: &ExplorationResult, changed: &ChangedSystem) -> TrialMetrics {
    let td = result.transitions();
    TrialMetrics {
        u_changed: changed.u_changed.len(),
        u_violating: changed.u_violating.len(),
        fault_tolerance: metrics::fault_tolerance(&changed.u_changed, &changed.u_violating),
        recoverability: metrics::recoverability(&changed.u_ok, td),
        functional_analysability: metrics::functional_analysability(td, &changed.u_changed),
        fault_analysability: metrics::fault_analysability(result.violating(), &changed.u_violating),
    }
}

/// Mean over the trials where a metric was computable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Averaged {
    pub mean: Option<Ratio>,
    pub excluded: usize,
    /// Reason given by the first excluded trial.
    pub reason: Option<String>,
}

impl Averaged {
    fn of<'a>(values: impl Iterator<Item = std::result::Result<&'a Ratio, &'a MetricError>>) -> Self {
        let mut ok = Vec::new();
        let mut excluded = 0;
        let mut reason = None;
        for v in values {
            match v {
                Ok(r) => ok.push(r),
                Err(e) => {
                    excluded += 1;
                    reason.get_or_insert_with(|| e.to_string());
                }
            }
        }
        Averaged {
            mean: Ratio::mean(ok),
            excluded,
            reason,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialSummary {
    pub trials: usize,
    pub fault_tolerance: Averaged,
    pub recoverability: Averaged,
    pub functional_analysability: Averaged,
    pub fault_analysability: Averaged,
}

pub fn summarize(per_trial: &[TrialMetrics]) -> TrialSummary {
    TrialSummary {
        trials: per_trial.len(),
        fault_tolerance: Averaged::of(per_trial.iter().map(|m| m.fault_tolerance.as_ref())),
        recoverability: Averaged::of(per_trial.iter().map(|m| m.recoverability.as_ref())),
        functional_analysability: Averaged::of(per_trial.iter().map(|m| m.functional_analysability.as_ref())),
        fault_analysability: Averaged::of(per_trial.iter().map(|m| Ok(&m.fault_analysability))),
    }
}

/// Seed of trial `i`.
pub fn trial_seed(seed: u64, i: usize) -> u64 {
    seed ^ i as u64
}

/// Run `trials` independently seeded plans and average their metrics.
/// Trials run in parallel; results are folded in trial order.
pub fn run_trials(
    sampler: &Sampler,
    invariant: &Pred,
    trials: usize,
    counts: Counts,
    seed: u64,
) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(MutationError::NoTrials);
    }
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|i| {
            let plan = sampler.generate_plan(counts, trial_seed(seed, i), None)?;
            Ok(apply(sampler.result(), &plan, invariant)?.metrics())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(&per_trial))
}

/// Seed of the modularity plan for the operation at `op_index`.
pub fn operation_seed(seed: u64, op_index: usize) -> u64 {
    seed ^ ((op_index as u64 + 1) << 32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularityOutcome {
    pub per_operation: BTreeMap<Label, std::result::Result<Ratio, MetricError>>,
    pub weighted: std::result::Result<Ratio, MetricError>,
}

/// Modularity of one operation given its changed system `Δ(α)`.
pub fn operation_modularity(
    result: &ExplorationResult,
    label: &Label,
    plan: &MutationPlan,
    invariant: &Pred,
) -> Result<std::result::Result<Ratio, MetricError>> {
    Ok(apply(result, plan, invariant)?.modularity(label))
}

/// Per-operation modularity from one label-scoped plan per derived label,
/// plus the weighted total. `plan_for` supplies each operation's plan.
pub fn modularity_with(
    result: &ExplorationResult,
    invariant: &Pred,
    mut plan_for: impl FnMut(usize, &Label) -> Result<MutationPlan>,
) -> Result<ModularityOutcome> {
    let labels = crate::lts::labels_of(result.transitions());
    let mut per_operation = BTreeMap::new();
    for (k, label) in labels.iter().enumerate() {
        let plan = plan_for(k, label)?;
        per_operation.insert(label.clone(), operation_modularity(result, label, &plan, invariant)?);
    }
    let mut computed = BTreeMap::new();
    let mut first_err = None;
    for (l, m) in &per_operation {
        match m {
            Ok(r) => {
                computed.insert(l.clone(), r.clone());
            }
            Err(e) => {
                first_err.get_or_insert_with(|| e.clone());
            }
        }
    }
    let weighted = match first_err {
        Some(e) => Err(e),
        None => metrics::weighted_modularity(&computed, result.transitions()),
    };
    Ok(ModularityOutcome {
        per_operation,
        weighted,
    })
}

/// Seeded modularity sweep: each derived label gets a plan scoped to it,
/// sized at one percent (at least one) of that label's transitions. The
/// extra count is capped by how many new transitions the label admits.
pub fn modularity_sweep(sampler: &Sampler, invariant: &Pred, seed: u64) -> Result<ModularityOutcome> {
    let counts = sampler.result().transitions().label_counts();
    modularity_with(sampler.result(), invariant, |k, label| {
        let mut c = Counts::default_for(counts[label]);
        let room = sampler.extra_capacity(Some(label));
        c.n_extra = c.n_extra.min(room.min(usize::MAX as u128) as usize);
        sampler.generate_plan(c, operation_seed(seed, k), Some(label))
    })
}
