#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::PathBuf;

use bqual_core::alignment::agreement;
use bqual_core::bmachine::{parse_machine, Machine, Pred};
use bqual_core::explorer::holds;
use bqual_core::lts::Flatten;
use bqual_core::mutation::{ChangedSystem, MutationPlan};
use bqual_core::{ExplorationResult, State, Transition, TransitionSet, VarOrder};
use proptest::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus(name)).unwrap()
}

pub fn corpus_machine(name: &str) -> Machine {
    parse_machine(&corpus_text(name)).unwrap()
}

pub fn clock_vars() -> VarOrder {
    VarOrder::new(["hour", "minute"])
}

pub fn tr(vars: &VarOrder, pre: [i64; 2], op: &str, post: [i64; 2]) -> Transition {
    Transition::new(State::ints(vars, &pre).unwrap(), op, State::ints(vars, &post).unwrap()).unwrap()
}

/// Maximum total agreement over every injective partial matching, by
/// exhaustive search.
pub fn brute_force_similarity<T: Flatten>(a: &[T], b: &[T], vars: &VarOrder) -> u64 {
    let fa: Vec<_> = a.iter().map(|x| x.flatten(vars).unwrap()).collect();
    let fb: Vec<_> = b.iter().map(|x| x.flatten(vars).unwrap()).collect();
    let w: Vec<Vec<u64>> = fa
        .iter()
        .map(|x| fb.iter().map(|y| agreement(x, y).unwrap() as u64).collect())
        .collect();
    fn go(i: usize, used: &mut Vec<bool>, w: &[Vec<u64>]) -> u64 {
        if i == w.len() {
            return 0;
        }
        // row i left unmatched
        let mut best = go(i + 1, used, w);
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                best = best.max(w[i][j] + go(i + 1, used, w));
                used[j] = false;
            }
        }
        best
    }
    go(0, &mut vec![false; fb.len()], &w)
}

/// Small transition sets over two variables with a tiny value range, so
/// partial agreements are common.
pub fn small_transitions(max: usize) -> impl Strategy<Value = Vec<Transition>> {
    let vars = clock_vars();
    let one = (0..3i64, 0..3i64, 0..3usize, 0..3i64, 0..3i64).prop_map(move |(a, b, l, c, d)| {
        tr(&vars, [a, b], ["p", "q", "r"][l], [c, d])
    });
    prop::collection::btree_set(one, 0..=max).prop_map(|s| s.into_iter().collect())
}

pub fn set_of(items: &[Transition]) -> TransitionSet {
    items.iter().cloned().collect()
}

/// Applies a plan by plain set operations on the materialised transitions.
pub fn apply_plan_by_sets(result: &ExplorationResult, plan: &MutationPlan, invariant: &Pred) -> ChangedSystem {
    let td = result.transitions();
    let r: Vec<&Transition> = td
        .iter()
        .chain(plan.extra.iter())
        .filter(|t| !plan.missing.contains(t))
        .collect();
    let mut t_changed = TransitionSet::new();
    let mut seen: FxHashSet<State> = result.initial_states().iter().cloned().collect();
    let mut queue: VecDeque<State> = result.initial_states().iter().cloned().collect();
    while let Some(s) = queue.pop_front() {
        if !holds(invariant, &s).unwrap() {
            continue;
        }
        for t in r.iter().filter(|t| t.pre == s) {
            t_changed.insert((*t).clone());
            if seen.insert(t.post.clone()) {
                queue.push_back(t.post.clone());
            }
        }
    }
    let mut u_changed = t_changed.union(&plan.missing);
    u_changed.retain(|t| !plan.extra.contains(t));
    let mut has_out: FxHashMap<&State, bool> = FxHashMap::default();
    for t in u_changed.iter() {
        has_out.insert(&t.pre, true);
    }
    let (mut u_ok, mut u_violating) = (TransitionSet::new(), TransitionSet::new());
    for t in u_changed.iter() {
        if holds(invariant, &t.post).unwrap() && has_out.contains_key(&t.post) {
            u_ok.insert(t.clone());
        } else {
            u_violating.insert(t.clone());
        }
    }
    ChangedSystem {
        t_changed,
        u_changed,
        u_ok,
        u_violating,
    }
}

fn in_unit(name: &str, r: Result<bqual_core::Ratio, bqual_core::metrics::MetricError>) -> Result<Option<bqual_core::Ratio>, String> {
    match r {
        Ok(v) if v.is_within_unit() => Ok(Some(v)),
        Ok(v) => Err(format!("{name} = {v} is outside [0, 1]")),
        Err(_) => Ok(None),
    }
}

/// The metric invariants over one derived/required pair of sets: every
/// ratio in [0, 1], partial scores dominating total ones, and similarity
/// symmetric, bounded by either side's size and repeatable.
pub fn check_metric_properties(derived: &[Transition], required: &[Transition]) -> Result<(), String> {
    use bqual_core::alignment::{similarity, DEFAULT_THRESHOLD};
    use bqual_core::lts::{pairs_of, set_size};
    use bqual_core::metrics::*;

    let v = clock_vars();
    let (td, tr) = (set_of(derived), set_of(required));
    let t = DEFAULT_THRESHOLD;
    let tfcomp_v = in_unit("tfcomp", tfcomp(&td, &tr))?;
    let pfcomp_v = in_unit("pfcomp", pfcomp(&td, &tr, &v, t))?;
    let tfcorr_v = in_unit("tfcorr", tfcorr(&td, &tr))?;
    let pfcorr_v = in_unit("pfcorr", pfcorr(&td, &tr, &v, t))?;
    in_unit("tfappr", tfappr(&td, &tr))?;
    in_unit("pfappr", pfappr(&td, &tr, &v, t))?;
    in_unit("reusability", reusability(&td))?;
    for label in bqual_core::lts::labels_of(&td) {
        in_unit("modularity", modularity_of(label.as_str(), &td, &tr))?;
    }
    let states: Vec<State> = td.iter().flat_map(|x| [x.pre.clone(), x.post.clone()]).collect();
    in_unit("accountability", accountability_of(&states, &td))?;
    in_unit("fault_tolerance", fault_tolerance(&td, &td.intersection(&tr)))?;
    in_unit("recoverability", recoverability(&tr, &td))?;
    in_unit("functional_analysability", functional_analysability(&td, &tr))?;
    if !fault_analysability(&td, &tr).is_within_unit() {
        return Err("fault_analysability outside [0, 1]".into());
    }
    if let (Some(p), Some(q)) = (&pfcomp_v, &tfcomp_v) {
        if p < q {
            return Err(format!("pfcomp {p} < tfcomp {q}"));
        }
    }
    if let (Some(p), Some(q)) = (&pfcorr_v, &tfcorr_v) {
        if p < q {
            return Err(format!("pfcorr {p} < tfcorr {q}"));
        }
    }

    let ab = similarity(&td, &tr, &v, t).unwrap();
    let ba = similarity(&tr, &td, &v, t).unwrap();
    if ab.total_agreement != ba.total_agreement {
        return Err(format!("similarity not symmetric: {} vs {}", ab.total_agreement, ba.total_agreement));
    }
    let bound = set_size(&td, &v).unwrap().min(set_size(&tr, &v).unwrap());
    if ab.total_agreement > bound {
        return Err(format!("similarity {} above size bound {bound}", ab.total_agreement));
    }
    if similarity(&td, &td, &v, t).unwrap().total_agreement != set_size(&td, &v).unwrap() {
        return Err("self-similarity differs from size".into());
    }
    let again = similarity(&td, &tr, &v, t).unwrap();
    if again.matching != ab.matching {
        return Err("similarity matching not repeatable".into());
    }
    let (pd, pr) = (pairs_of(&td), pairs_of(&tr));
    let p1 = similarity(&pd, &pr, &v, t).unwrap().total_agreement;
    let p2 = similarity(&pr, &pd, &v, t).unwrap().total_agreement;
    if p1 != p2 {
        return Err(format!("pair similarity not symmetric: {p1} vs {p2}"));
    }
    Ok(())
}
