mod common;

use bqual_core::explorer::{explore_with_domains, infer_domains};
use bqual_core::metrics;
use bqual_core::mutation::{
    apply, apply_plan, run_trials, trial_metrics, Counts, MutationError, MutationPlan, Sampler,
};
use bqual_core::{ExplorationResult, Label, Limits, Machine, Ratio};
use common::*;
use proptest::prelude::*;

fn explored(name: &str) -> (Machine, ExplorationResult) {
    let m = corpus_machine(name);
    let d = infer_domains(&m).unwrap();
    let r = explore_with_domains(&m, &d, Limits::default()).unwrap();
    (m, r)
}

fn check_against_oracle(m: &Machine, r: &ExplorationResult, plan: &MutationPlan) {
    let fast = apply(r, plan, &m.invariant).unwrap();
    let slow = apply_plan_by_sets(r, plan, &m.invariant);
    assert_eq!(fast.changed_system(), slow);
    assert_eq!(fast.metrics(), trial_metrics(r, &slow));
    for label in bqual_core::lts::labels_of(r.transitions()) {
        assert_eq!(
            fast.modularity(&label),
            metrics::modularity_of(label.as_str(), r.transitions(), &slow.t_changed),
            "{label}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn seeded_plans_match_set_oracle_on_cm1(seed in any::<u64>(), n_extra in 0usize..30, n_missing in 0usize..30) {
        let (m, r) = explored("cm1.mch");
        let d = infer_domains(&m).unwrap();
        let s = Sampler::for_machine(&r, &d, &m);
        let plan = s.generate_plan(Counts { n_extra, n_missing }, seed, None).unwrap();
        check_against_oracle(&m, &r, &plan);
    }

    #[test]
    fn scoped_plans_match_set_oracle_on_cm4(seed in any::<u64>(), op in 0usize..3, n in 1usize..8) {
        let (m, r) = explored("cm4.mch");
        let d = infer_domains(&m).unwrap();
        let s = Sampler::for_machine(&r, &d, &m);
        let label = Label::new(&m.operations[op].name);
        let n_missing = n.min(r.transitions().with_label(label.as_str()).len());
        let plan = s.generate_plan(Counts { n_extra: n, n_missing }, seed, Some(&label)).unwrap();
        prop_assert!(plan.extra.iter().chain(plan.missing.iter()).all(|t| t.label == label));
        check_against_oracle(&m, &r, &plan);
    }
}

#[test]
fn extras_into_undiscovered_states() {
    let (m, r) = explored("cm4.mch");
    let v = clock_vars();
    let mut plan = MutationPlan::empty(0);
    // out of range, and a chain through a state exploration never saw
    plan.extra.insert(tr(&v, [0, 0], "inc_minute", [30, 99]));
    plan.extra.insert(tr(&v, [0, 1], "inc_hour", [24, 0]));
    plan.extra.insert(tr(&v, [24, 0], "next_day", [0, 2]));
    plan.extra.insert(tr(&v, [40, 40], "next_day", [0, 0]));
    plan.missing.insert(tr(&v, [0, 0], "inc_minute", [0, 1]));
    check_against_oracle(&m, &r, &plan);
}

#[test]
fn cm5_plan_through_both_routes() {
    let (m, r) = explored("cm1.mch");
    let v = clock_vars();
    let mut plan = MutationPlan::empty(0);
    plan.extra.insert(tr(&v, [3, 0], "inc_minute", [12, 0]));
    plan.missing.insert(tr(&v, [5, 29], "inc_minute", [5, 30]));
    check_against_oracle(&m, &r, &plan);
    let c = apply_plan(&r, &plan, &m.invariant).unwrap();
    assert_eq!(c.u_changed.len(), 1050);
    assert_eq!(c.u_violating.len(), 1);
}

#[test]
fn invalid_plans_are_rejected() {
    let (m, r) = explored("cm1.mch");
    let v = clock_vars();
    let mut plan = MutationPlan::empty(0);
    plan.extra.insert(tr(&v, [0, 0], "inc_minute", [0, 1]));
    assert!(matches!(apply(&r, &plan, &m.invariant), Err(MutationError::Invalid(_))));
    let mut plan = MutationPlan::empty(0);
    plan.missing.insert(tr(&v, [0, 0], "inc_minute", [0, 2]));
    assert!(matches!(apply(&r, &plan, &m.invariant), Err(MutationError::Invalid(_))));
}

/// Trial means on CM1 with the default counts (15 extra, 15 missing),
/// recomputed from materialised sets and pinned.
#[test]
fn golden_trial_means() {
    let (m, r) = explored("cm1.mch");
    let d = infer_domains(&m).unwrap();
    let s = Sampler::for_machine(&r, &d, &m);
    let counts = Counts::default_for(r.transitions().len());
    assert_eq!(counts, Counts { n_extra: 15, n_missing: 15 });

    let mut per_trial = Vec::new();
    for i in 0..5 {
        let plan = s.generate_plan(counts, bqual_core::mutation::trial_seed(7, i), None).unwrap();
        per_trial.push(trial_metrics(&r, &apply_plan_by_sets(&r, &plan, &m.invariant)));
    }
    let oracle = bqual_core::mutation::summarize(&per_trial);
    let summary = run_trials(&s, &m.invariant, 5, counts, 7).unwrap();
    assert_eq!(summary, oracle);

    let shown = |r: &Option<Ratio>| r.as_ref().unwrap().to_string();
    assert_eq!(shown(&summary.fault_tolerance.mean), GOLDEN[0]);
    assert_eq!(shown(&summary.recoverability.mean), GOLDEN[1]);
    assert_eq!(shown(&summary.functional_analysability.mean), GOLDEN[2]);
    assert_eq!(shown(&summary.fault_analysability.mean), GOLDEN[3]);
}

const GOLDEN: [&str; 4] = ["244482049/307226425", "311/1800", "5881/7200", "1"];

#[test]
fn plan_order_is_independent_of_discovery_order() {
    // Same transitions, explored from a differently ordered source: plans
    // are drawn over canonical transition order.
    let (m, r) = explored("cm1.mch");
    let d = infer_domains(&m).unwrap();
    let mut reversed = m.clone();
    reversed.operations.reverse();
    let r2 = explore_with_domains(&reversed, &d, Limits::default()).unwrap();
    assert_eq!(r.transitions(), r2.transitions());
    let labels: Vec<Label> = m.operations.iter().map(|o| Label::new(&o.name)).collect();
    let a = Sampler::new(&r, &d, labels.clone()).generate_plan(Counts { n_extra: 9, n_missing: 9 }, 3, None);
    let b = Sampler::new(&r2, &d, labels).generate_plan(Counts { n_extra: 9, n_missing: 9 }, 3, None);
    assert_eq!(a.unwrap(), b.unwrap());
}

#[test]
fn extra_capacity_counts_free_slots() {
    let (m, r) = explored("cm6.mch");
    let d = infer_domains(&m).unwrap();
    let s = Sampler::for_machine(&r, &d, &m);
    assert_eq!(s.extra_capacity(Some(&Label::new("set_time"))), 0);
    assert_eq!(s.extra_capacity(Some(&Label::new("inc_minute"))), 1440 * 1440 - 1416);
}
