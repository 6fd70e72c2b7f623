use std::fmt::Write as _;

use serde_json::{json, Map, Value as Json};

use super::{MetricValue, QualityReport, METRIC_FIELDS};
use crate::ratio::Ratio;

pub const SCHEMA_VERSION: u64 = 1;
const NOT_COMPUTED: &str = "not-computed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

/// ISO/IEC 25010 sub-characteristics and the computed values that measure
/// each of them.
const CHARACTERISTICS: &[(&str, &[(&str, &[&str])])] = &[
    (
        "functional_suitability",
        &[
            ("functional_completeness", &["tfcomp", "pfcomp"]),
            ("functional_correctness", &["tfcorr", "pfcorr"]),
            ("functional_appropriateness", &["tfappr", "pfappr"]),
        ],
    ),
    (
        "security",
        &[
            ("confidentiality", &["invariant_satisfiability"]),
            ("integrity", &["invariant_satisfiability"]),
            ("non_repudiation", &["availability"]),
            ("accountability", &["accountability"]),
            ("authenticity", &["invariant_satisfiability"]),
        ],
    ),
    (
        "reliability",
        &[
            ("maturity", &["tfcomp", "pfcomp", "tfcorr", "pfcorr", "invariant_satisfiability"]),
            ("availability", &["availability"]),
            ("fault_tolerance", &["fault_tolerance"]),
            ("recoverability", &["recoverability"]),
        ],
    ),
    (
        "maintainability",
        &[
            ("analysability", &["functional_analysability", "fault_analysability"]),
            (
                "modifiability",
                &[
                    "functional_analysability",
                    "fault_analysability",
                    "recoverability",
                    "modularity",
                    "learnability",
                ],
            ),
            ("modularity", &["modularity"]),
            ("reusability", &["reusability"]),
            ("testability", &["cpu_seconds"]),
        ],
    ),
    (
        "performance_efficiency",
        &[
            ("time_behaviour", &["cpu_seconds"]),
            ("resource_utilisation", &["peak_memory_bytes"]),
            ("capacity", &["capacity"]),
        ],
    ),
    (
        "usability",
        &[
            ("appropriateness_recognisability", &["tfappr", "pfappr", "goal_appropriateness"]),
            (
                "user_error_protection",
                &[
                    "invariant_satisfiability",
                    "availability",
                    "accountability",
                    "fault_tolerance",
                    "recoverability",
                ],
            ),
            ("learnability", &["learnability"]),
        ],
    ),
];

fn metric_json(v: &MetricValue) -> Json {
    match v {
        MetricValue::Computed(r) => json!(r.round3()),
        MetricValue::NotComputed(_) => json!(NOT_COMPUTED),
    }
}

pub fn render_json(report: &QualityReport) -> Json {
    let mut metrics = Map::new();
    let mut exact = Map::new();
    let mut missing = Map::new();
    for (name, v) in &report.metrics {
        metrics.insert(name.to_string(), metric_json(v));
        match v {
            MetricValue::Computed(r) => {
                exact.insert(name.to_string(), json!(r.to_string()));
            }
            MetricValue::NotComputed(reason) => {
                missing.insert(name.to_string(), json!(reason));
            }
        }
    }
    metrics.insert("capacity".into(), json!(report.capacity));

    let e = &report.exploration;
    let exploration = json!({
        "variables": e.variables,
        "initial_states": e.initial_states,
        "states": e.states,
        "transitions": e.transitions,
        "violating": e.violating,
        "deadlock_states": e.deadlock_states,
        "invariant_violating_states": e.invariant_violating_states,
        "truncated": e.truncated,
    });

    let mutation = match &report.mutation {
        None => Json::Null,
        Some(m) => {
            let per_op: Map<String, Json> = m
                .modularity_per_operation
                .iter()
                .map(|(k, v)| (k.clone(), metric_json(v)))
                .collect();
            let per_op_exact: Map<String, Json> = m
                .modularity_per_operation
                .iter()
                .filter_map(|(k, v)| v.ratio().map(|r| (k.clone(), json!(r.to_string()))))
                .collect();
            json!({
                "mode": m.mode,
                "trials": m.trials,
                "n_extra": m.n_extra,
                "n_missing": m.n_missing,
                "seed": m.seed,
                "plan": m.plan,
                "excluded_trials": m.excluded,
                "modularity_per_operation": per_op,
                "modularity_per_operation_exact": per_op_exact,
            })
        }
    };

    let p = &report.provenance;
    let provenance = json!({
        "machine_path": p.machine_path,
        "required": p.required,
        "reference_truncated": p.reference_truncated,
        "goals": p.goals,
        "max_states": p.max_states,
        "max_transitions": p.max_transitions,
        "word_limit": p.word_limit,
        "n_words": p.n_words,
        "similarity_threshold": p.similarity_threshold,
    });

    let characteristics: Map<String, Json> = CHARACTERISTICS
        .iter()
        .map(|(c, subs)| {
            let inner: Map<String, Json> = subs
                .iter()
                .map(|(s, fields)| (s.to_string(), json!(fields)))
                .collect();
            (c.to_string(), Json::Object(inner))
        })
        .collect();

    json!({
        "schema_version": SCHEMA_VERSION,
        "machine": report.machine,
        "metrics": metrics,
        "exact": exact,
        "not_computed": missing,
        "metering": {
            "cpu_seconds": report.metering.cpu_seconds,
            "peak_memory_bytes": report.metering.peak_memory_bytes,
        },
        "exploration": exploration,
        "mutation": mutation,
        "provenance": provenance,
        "characteristics": characteristics,
    })
}

/// Read one metric back from a rendered report, preferring the exact value.
/// The misspelt `invariant_satisfability` is accepted as an alias.
pub fn metric_from_json(report: &Json, name: &str) -> Option<MetricValue> {
    let names: &[&str] = if name == "invariant_satisfiability" || name == "invariant_satisfability" {
        &["invariant_satisfiability", "invariant_satisfability"]
    } else {
        std::slice::from_ref(&name)
    };
    for n in names {
        if let Some(s) = report["exact"][*n].as_str() {
            return Ratio::parse(s).map(MetricValue::Computed);
        }
        if let Some(reason) = report["not_computed"][*n].as_str() {
            return Some(MetricValue::NotComputed(reason.to_string()));
        }
    }
    None
}

fn cell(report: &QualityReport, name: &str) -> String {
    match name {
        "cpu_seconds" => format!("{:.3} (s)", report.metering.cpu_seconds),
        "peak_memory_bytes" => format!("{:.3} (GB)", report.metering.peak_memory_bytes as f64 / 1e9),
        "capacity" => report.capacity.to_string(),
        _ => match report.get(name) {
            Some(MetricValue::Computed(r)) => format!("{:.3}", r.round3()),
            _ => NOT_COMPUTED.to_string(),
        },
    }
}

const TABLE_ROWS: [[(&str, &str); 4]; 5] = [
    [("TFComp", "tfcomp"), ("PFComp", "pfcomp"), ("TFCorr", "tfcorr"), ("PFCorr", "pfcorr")],
    [
        ("TFAppr", "tfappr"),
        ("PFAppr", "pfappr"),
        ("Inv. Sat.", "invariant_satisfiability"),
        ("Availability", "availability"),
    ],
    [
        ("Accountability", "accountability"),
        ("Fau. Tol.", "fault_tolerance"),
        ("Recoverability", "recoverability"),
        ("Fun. Ana.", "functional_analysability"),
    ],
    [
        ("Fau. Ana.", "fault_analysability"),
        ("Modularity", "modularity"),
        ("Reusability", "reusability"),
        ("CPU Time", "cpu_seconds"),
    ],
    [
        ("Peak Mem.", "peak_memory_bytes"),
        ("Capacity", "capacity"),
        ("GAppr", "goal_appropriateness"),
        ("Learnability", "learnability"),
    ],
];

/// Aligned text table: five rows of four measurements, headers above
/// values, followed by the reasons for any value not computed.
pub fn render_table(report: &QualityReport) -> String {
    const WIDTH: usize = 16;
    let mut out = String::new();
    let _ = writeln!(out, "Model {}", report.machine);
    for row in TABLE_ROWS {
        out.push('\n');
        let header: Vec<String> = row.iter().map(|(h, _)| format!("{h:<WIDTH$}")).collect();
        let values: Vec<String> = row.iter().map(|(_, f)| format!("{:<WIDTH$}", cell(report, f))).collect();
        let _ = writeln!(out, "{}", header.join(" ").trim_end());
        let _ = writeln!(out, "{}", values.join(" ").trim_end());
    }
    let missing: Vec<_> = report.not_computed().collect();
    if !missing.is_empty() {
        out.push_str("\nnot computed:\n");
        for (name, reason) in missing {
            let _ = writeln!(out, "  {name}: {reason}");
        }
    }
    if report.truncated() {
        out.push_str("\nwarning: exploration was truncated by a state or transition limit\n");
    }
    debug_assert!(METRIC_FIELDS.iter().all(|f| TABLE_ROWS.iter().flatten().any(|(_, n)| n == f)));
    out
}
