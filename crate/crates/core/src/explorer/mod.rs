//! Bounded explicit-state exploration of a machine.
//!
//! States are derived breadth-first from the initial states. For every
//! expanded state `s`, every operation `f` and every post-state `t` of `f`'s
//! body, the transition `[s, f, t]` is recorded. States that break the
//! invariant are recorded but never expanded. A transition is classified as
//! violating when its post-state breaks the invariant or deadlocks
//! (deadlock-freeness is checked whether or not the machine states it).

pub mod domains;
pub mod eval;
mod graph;
pub mod meter;

use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use serde_json::json;
use thiserror::Error;

use crate::bmachine::{Machine, Pred};
use crate::lts::{Label, LtsError, State, TransitionSet, Value, VarOrder};

pub use domains::{infer_domains, Domain, DomainMap};
pub use eval::{enumerate_substitution, holds};
pub(crate) use graph::{Edge, Graph};
pub use meter::Metering;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExploreError {
    #[error("domain inference: {0}")]
    Domain(String),
    #[error("evaluation: {0}")]
    Eval(String),
    #[error("variable `{0}` is not assigned by the initialisation")]
    Uninitialised(String),
    #[error("the initialisation yields no initial state")]
    NoInitialState,
    #[error(transparent)]
    Lts(#[from] LtsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    pub max_states: usize,
    pub max_transitions: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 100_000,
            max_transitions: 10_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExplorationResult {
    vars: VarOrder,
    initial_states: Vec<State>,
    states: Vec<State>,
    transitions: TransitionSet,
    violating: TransitionSet,
    deadlock_states: Vec<State>,
    invariant_violating_states: Vec<State>,
    truncated: bool,
    graph: Graph,
    pub metering: Metering,
}

/// Raw exploration output before classification.
struct Parts {
    vars: VarOrder,
    states: Vec<State>,
    index: FxHashMap<State, u32>,
    inv_ok: Vec<bool>,
    expanded: Vec<bool>,
    labels: Vec<Label>,
    edges: Vec<Edge>,
    initial: Vec<u32>,
    truncated: bool,
    metering: Metering,
}

impl Parts {
    fn assemble(self) -> ExplorationResult {
        let graph = Graph::new(self.index, self.labels, self.edges, self.inv_ok, &self.expanded, self.initial);
        let states = self.states;
        let n = states.len();
        let mut transitions = TransitionSet::with_capacity(graph.edges.len());
        let mut violating = TransitionSet::new();
        for (e, bad) in graph.edges.iter().zip(&graph.edge_violating) {
            let t = graph.transition(&states, e);
            if *bad {
                violating.insert(t.clone());
            }
            transitions.insert(t);
        }
        let deadlock_states = (0..n)
            .filter(|&i| graph.inv_ok[i] && graph.deadlocked[i])
            .map(|i| states[i].clone())
            .collect();
        let invariant_violating_states = (0..n)
            .filter(|&i| !graph.inv_ok[i])
            .map(|i| states[i].clone())
            .collect();
        let initial_states = graph.initial.iter().map(|&i| states[i as usize].clone()).collect();
        ExplorationResult {
            vars: self.vars,
            initial_states,
            states,
            transitions,
            violating,
            deadlock_states,
            invariant_violating_states,
            truncated: self.truncated,
            graph,
            metering: self.metering,
        }
    }
}

impl ExplorationResult {
    /// Assemble a result from an explicit transition relation, classifying
    /// it the same way `explore` does. Every state is considered expanded.
    pub fn from_transitions(
        vars: VarOrder,
        initial_states: Vec<State>,
        transitions: TransitionSet,
        invariant: &Pred,
    ) -> Result<Self, ExploreError> {
        let mut states = Vec::new();
        let mut index: FxHashMap<State, u32> = FxHashMap::default();
        let mut id_of = |s: &State, states: &mut Vec<State>| -> u32 {
            *index.entry(s.clone()).or_insert_with(|| {
                states.push(s.clone());
                states.len() as u32 - 1
            })
        };
        let initial: Vec<u32> = initial_states.iter().map(|s| id_of(s, &mut states)).collect();
        let labels: Vec<Label> = crate::lts::labels_of(&transitions).into_iter().collect();
        let mut edges = Vec::with_capacity(transitions.len());
        for t in transitions.sorted() {
            let pre = id_of(&t.pre, &mut states);
            let post = id_of(&t.post, &mut states);
            let label = labels.iter().position(|l| *l == t.label).unwrap_or(0) as u32;
            edges.push(Edge { pre, label, post });
        }
        let inv_ok = states
            .iter()
            .map(|s| holds(invariant, s))
            .collect::<Result<Vec<bool>, _>>()?;
        let expanded = vec![true; states.len()];
        Ok(Parts {
            vars,
            states,
            index,
            inv_ok,
            expanded,
            labels,
            edges,
            initial,
            truncated: false,
            metering: Metering::default(),
        }
        .assemble())
    }

    pub fn var_order(&self) -> &VarOrder {
        &self.vars
    }

    pub fn initial_states(&self) -> &[State] {
        &self.initial_states
    }

    /// Derived states in discovery order.
    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn transitions(&self) -> &TransitionSet {
        &self.transitions
    }

    pub fn violating(&self) -> &TransitionSet {
        &self.violating
    }

    /// Transitions that trigger no violation.
    pub fn ok(&self) -> TransitionSet {
        self.transitions.difference(&self.violating)
    }

    pub fn deadlock_states(&self) -> &[State] {
        &self.deadlock_states
    }

    pub fn invariant_violating_states(&self) -> &[State] {
        &self.invariant_violating_states
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub(crate) fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "variables": self.vars.names(),
            "initial_states": self.initial_states.len(),
            "states": self.states.len(),
            "transitions": self.transitions.len(),
            "violating": self.violating.len(),
            "deadlock_states": self.deadlock_states.len(),
            "invariant_violating_states": self.invariant_violating_states.len(),
            "truncated": self.truncated,
        })
    }

    /// One canonical transition object per line, in canonical order.
    pub fn transitions_jsonl(&self) -> String {
        let mut out = String::new();
        for t in self.transitions.sorted() {
            out.push_str(&t.to_json().to_string());
            out.push('\n');
        }
        out
    }
}

pub fn explore(machine: &Machine, limits: Limits) -> Result<ExplorationResult, ExploreError> {
    let domains = infer_domains(machine)?;
    explore_with_domains(machine, &domains, limits)
}

struct Frontier<'a> {
    invariant: &'a Pred,
    max_states: usize,
    states: Vec<State>,
    index: FxHashMap<State, u32>,
    inv_ok: Vec<bool>,
    expanded: Vec<bool>,
    queue: VecDeque<u32>,
}

impl Frontier<'_> {
    /// Id of `s`, registering it if new; `None` when the state limit is hit.
    fn admit(&mut self, s: State) -> Result<Option<u32>, ExploreError> {
        if let Some(&id) = self.index.get(&s) {
            return Ok(Some(id));
        }
        if self.states.len() >= self.max_states {
            return Ok(None);
        }
        let ok = holds(self.invariant, &s)?;
        let id = self.states.len() as u32;
        self.index.insert(s.clone(), id);
        self.states.push(s);
        self.inv_ok.push(ok);
        self.expanded.push(false);
        if ok {
            self.queue.push_back(id);
        }
        Ok(Some(id))
    }
}

pub fn explore_with_domains(
    machine: &Machine,
    domains: &DomainMap,
    limits: Limits,
) -> Result<ExplorationResult, ExploreError> {
    let meter = meter::Meter::start();
    let vars = machine.var_order();
    let labels: Vec<Label> = machine
        .operations
        .iter()
        .map(|o| Label::new(&o.name))
        .collect();

    let blank: Vec<Option<Value>> = vec![None; vars.len()];
    let mut initial_states = Vec::new();
    for vals in eval::enumerate(&machine.initialisation, &vars, &blank, &mut Vec::new(), domains)? {
        initial_states.push(eval::complete(&vars, vals)?);
    }
    if initial_states.is_empty() {
        return Err(ExploreError::NoInitialState);
    }

    let mut f = Frontier {
        invariant: &machine.invariant,
        max_states: limits.max_states,
        states: Vec::new(),
        index: FxHashMap::default(),
        inv_ok: Vec::new(),
        expanded: Vec::new(),
        queue: VecDeque::new(),
    };
    let mut truncated = false;
    let mut initial = Vec::new();
    for s in initial_states {
        match f.admit(s)? {
            Some(id) => initial.push(id),
            None => truncated = true,
        }
    }

    let mut edges: Vec<Edge> = Vec::new();
    let mut bound = Vec::new();
    'search: while let Some(id) = f.queue.pop_front() {
        let mut dropped = false;
        let pre = f.states[id as usize].clone();
        let pre_vals: Vec<Option<Value>> = pre.values().iter().cloned().map(Some).collect();
        for (k, op) in machine.operations.iter().enumerate() {
            bound.clear();
            let posts = eval::enumerate(&op.body, &vars, &pre_vals, &mut bound, domains)?;
            for vals in posts {
                if edges.len() >= limits.max_transitions {
                    truncated = true;
                    break 'search;
                }
                match f.admit(eval::complete(&vars, vals)?)? {
                    Some(post) => edges.push(Edge {
                        pre: id,
                        label: k as u32,
                        post,
                    }),
                    None => {
                        truncated = true;
                        dropped = true;
                    }
                }
            }
        }
        // a state that lost successors to truncation cannot be judged deadlocked
        f.expanded[id as usize] = !dropped;
    }

    let mut result = Parts {
        vars,
        states: f.states,
        index: f.index,
        inv_ok: f.inv_ok,
        expanded: f.expanded,
        labels,
        edges,
        initial,
        truncated,
        metering: Metering::default(),
    }
    .assemble();
    result.metering = meter.finish();
    Ok(result)
}

/// Whether some derived state satisfies `goal`.
pub fn check_goal(result: &ExplorationResult, goal: &Pred) -> Result<bool, ExploreError> {
    for s in result.states() {
        if holds(goal, s)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmachine::{parse_machine, parse_predicate};
    use crate::lts::Transition;

    fn corpus(name: &str) -> Machine {
        let path = format!("{}/../../corpus/{name}.mch", env!("CARGO_MANIFEST_DIR"));
        parse_machine(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    fn machine(src: &str) -> Machine {
        parse_machine(src).unwrap()
    }

    #[test]
    fn cm1_domains() {
        let d = infer_domains(&corpus("cm1")).unwrap();
        assert_eq!(d.get("hour"), Some(&Domain::Range(0, 23)));
        assert_eq!(d.get("minute"), Some(&Domain::Range(0, 59)));
    }

    #[test]
    fn singleton_domain() {
        let m = machine("MACHINE X VARIABLES x INVARIANT x : 0..0 INITIALISATION x := 0 OPERATIONS END");
        assert_eq!(infer_domains(&m).unwrap().get("x"), Some(&Domain::Range(0, 0)));
    }

    #[test]
    fn domain_requires_membership() {
        let m = machine("MACHINE X VARIABLES x INVARIANT x < 5 INITIALISATION x := 0 OPERATIONS END");
        assert!(matches!(infer_domains(&m), Err(ExploreError::Domain(_))));
        let m = machine(
            "MACHINE X VARIABLES x, y INVARIANT y : 0..3 & x : 0..y INITIALISATION x := 0; y := 0 OPERATIONS END",
        );
        assert!(matches!(infer_domains(&m), Err(ExploreError::Domain(_))));
    }

    #[test]
    fn inc_minute_successor() {
        let m = corpus("cm1");
        let d = infer_domains(&m).unwrap();
        let vars = m.var_order();
        let s = State::ints(&vars, &[0, 0]).unwrap();
        let posts = enumerate_substitution(&m.operations[0].body, &s, &d).unwrap();
        assert_eq!(posts, vec![State::ints(&vars, &[0, 1]).unwrap()]);
        let posts = enumerate_substitution(&m.operations[1].body, &s, &d).unwrap();
        assert!(posts.is_empty());
    }

    #[test]
    fn set_time_reaches_every_state() {
        let m = corpus("cm6");
        let d = infer_domains(&m).unwrap();
        let s = State::ints(&m.var_order(), &[7, 13]).unwrap();
        let posts = enumerate_substitution(&m.operations[3].body, &s, &d).unwrap();
        assert_eq!(posts.len(), 1440);
    }

    #[test]
    fn cm1_exploration() {
        let r = explore(&corpus("cm1"), Limits::default()).unwrap();
        assert_eq!(r.states().len(), 1440);
        assert_eq!(r.transitions().len(), 1440);
        assert!(r.violating().is_empty());
        assert!(r.deadlock_states().is_empty());
        assert!(!r.truncated());
    }

    #[test]
    fn cm4_exploration() {
        let r = explore(&corpus("cm4"), Limits::default()).unwrap();
        assert_eq!(r.transitions().len(), 1465);
        assert_eq!(r.violating().len(), 25);
        let vars = r.var_order().clone();
        let overflow_hour = Transition::new(
            State::ints(&vars, &[23, 59]).unwrap(),
            "inc_hour",
            State::ints(&vars, &[24, 0]).unwrap(),
        )
        .unwrap();
        assert!(r.violating().contains(&overflow_hour));
        assert_eq!(
            r.violating()
                .iter()
                .filter(|t| t.post.get("minute") == Some(&Value::Int(60)))
                .count(),
            24
        );
        assert_eq!(r.ok().len() + r.violating().len(), r.transitions().len());
    }

    #[test]
    fn small_cm6_matches_closed_form() {
        // n states on the clock cycle plus n*n set_time transitions.
        let src = std::fs::read_to_string(format!("{}/../../corpus/cm6.mch", env!("CARGO_MANIFEST_DIR")))
            .unwrap()
            .replace("23", "1")
            .replace("59", "2")
            .replace("58", "1");
        let r = explore(&machine(&src), Limits::default()).unwrap();
        assert_eq!(r.states().len(), 6);
        assert_eq!(r.transitions().len(), 6 + 36);
        assert!(r.violating().is_empty());
    }

    #[test]
    fn deadlock_is_violation() {
        let m = machine(
            "MACHINE D VARIABLES x INVARIANT x : 0..3 INITIALISATION x := 0 \
             OPERATIONS step = PRE x < 2 THEN x := x + 1 END END",
        );
        let r = explore(&m, Limits::default()).unwrap();
        assert_eq!(r.transitions().len(), 2);
        assert_eq!(r.violating().len(), 1);
        assert_eq!(r.deadlock_states(), &[State::ints(r.var_order(), &[2]).unwrap()]);
    }

    #[test]
    fn unsatisfiable_initialisation() {
        let m = machine(
            "MACHINE E VARIABLES x INVARIANT x : 0..3 \
             INITIALISATION ANY v WHERE v : 0..3 & v > 5 THEN x := v END OPERATIONS END",
        );
        assert_eq!(explore(&m, Limits::default()).unwrap_err(), ExploreError::NoInitialState);
    }

    #[test]
    fn multiple_initial_states() {
        let m = machine(
            "MACHINE E VARIABLES x INVARIANT x : 0..3 \
             INITIALISATION ANY v WHERE v : 0..3 & v > 1 THEN x := v END \
             OPERATIONS spin = skip END",
        );
        let r = explore(&m, Limits::default()).unwrap();
        assert_eq!(r.initial_states().len(), 2);
        assert_eq!(r.transitions().len(), 2);
    }

    #[test]
    fn truncation() {
        let r = explore(
            &corpus("cm1"),
            Limits {
                max_states: 10,
                max_transitions: 1_000,
            },
        )
        .unwrap();
        assert!(r.truncated());
        assert_eq!(r.states().len(), 10);
        let r = explore(
            &corpus("cm1"),
            Limits {
                max_states: 10_000,
                max_transitions: 5,
            },
        )
        .unwrap();
        assert!(r.truncated());
        assert_eq!(r.transitions().len(), 5);
        // the unexpanded frontier is not reported as deadlocked
        assert!(r.deadlock_states().is_empty());
    }

    #[test]
    fn goals() {
        let m = corpus("cm1");
        let r = explore(&m, Limits::default()).unwrap();
        let g1 = parse_predicate("hour + minute < 10", &m).unwrap();
        let g2 = parse_predicate("hour > 26 & minute < 10", &m).unwrap();
        assert!(check_goal(&r, &g1).unwrap());
        assert!(!check_goal(&r, &g2).unwrap());
        assert!(check_goal(&r, &parse_predicate("1 = 1", &m).unwrap()).unwrap());
    }

    #[test]
    fn ill_typed_goal() {
        let m = machine(
            "MACHINE B VARIABLES b INVARIANT b : BOOL INITIALISATION b := FALSE \
             OPERATIONS flip = PRE b = FALSE THEN b := TRUE END; back = PRE b = TRUE THEN b := FALSE END END",
        );
        let r = explore(&m, Limits::default()).unwrap();
        assert_eq!(r.transitions().len(), 2);
        assert!(r.violating().is_empty());
        let bad = parse_predicate("b < 1", &m).unwrap();
        assert!(matches!(check_goal(&r, &bad), Err(ExploreError::Eval(_))));
    }

    #[test]
    fn enumerated_machine() {
        let m = machine(
            "MACHINE L SETS COLOUR = {red, green, amber} VARIABLES light \
             INVARIANT light : COLOUR INITIALISATION light := red \
             OPERATIONS go = SELECT light = red THEN light := green WHEN light = green THEN light := amber \
             WHEN light = amber THEN light := red END; \
             reset = ANY c WHERE c : COLOUR THEN light := c END END",
        );
        let r = explore(&m, Limits::default()).unwrap();
        assert_eq!(r.states().len(), 3);
        assert_eq!(r.transitions().len(), 3 + 9);
    }

    #[test]
    fn parallel_reads_pre_state() {
        let m = machine(
            "MACHINE P VARIABLES x, y INVARIANT x : 0..1 & y : 0..1 INITIALISATION x := 0 || y := 1 \
             OPERATIONS swap = x := y || y := x END",
        );
        let r = explore(&m, Limits::default()).unwrap();
        let vars = r.var_order().clone();
        let expected = Transition::new(
            State::ints(&vars, &[0, 1]).unwrap(),
            "swap",
            State::ints(&vars, &[1, 0]).unwrap(),
        )
        .unwrap();
        assert!(r.transitions().contains(&expected));
    }

    #[test]
    fn from_transitions_matches_explore() {
        let m = corpus("cm4");
        let r = explore(&m, Limits::default()).unwrap();
        let rebuilt = ExplorationResult::from_transitions(
            r.var_order().clone(),
            r.initial_states().to_vec(),
            r.transitions().clone(),
            &m.invariant,
        )
        .unwrap();
        assert_eq!(rebuilt.violating(), r.violating());
        assert_eq!(rebuilt.states().len(), r.states().len());
    }
}
