use std::sync::Arc;

use super::ExploreError;
use crate::bmachine::{Expr, Machine, Pred};
use crate::lts::{EnumElement, Value};

/// Finite domain of one variable or bound identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Range(i64, i64),
    Bool,
    Enum(Vec<EnumElement>),
}

impl Domain {
    pub fn len(&self) -> usize {
        match self {
            Domain::Range(lo, hi) => (hi - lo + 1) as usize,
            Domain::Bool => 2,
            Domain::Enum(items) => items.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value_at(&self, i: usize) -> Value {
        match self {
            Domain::Range(lo, _) => Value::Int(lo + i as i64),
            Domain::Bool => Value::Bool(i == 1),
            Domain::Enum(items) => Value::Enum(items[i].clone()),
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Domain::Range(lo, hi), Value::Int(i)) => lo <= i && i <= hi,
            (Domain::Bool, Value::Bool(_)) => true,
            (Domain::Enum(items), Value::Enum(e)) => items.contains(e),
            _ => false,
        }
    }

    pub fn values(&self) -> impl Iterator<Item = Value> + '_ {
        (0..self.len()).map(|i| self.value_at(i))
    }
}

/// One domain per machine variable, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainMap {
    entries: Vec<(String, Domain)>,
    /// Enumerated sets of the machine, for `ANY` identifiers ranging over them.
    sets: Vec<(String, Vec<String>)>,
}

impl DomainMap {
    pub fn new(entries: Vec<(String, Domain)>) -> Self {
        DomainMap {
            entries,
            sets: Vec::new(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Domain> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Domain)> {
        self.entries.iter().map(|(n, d)| (n.as_str(), d))
    }

    pub fn domains(&self) -> impl Iterator<Item = &Domain> {
        self.entries.iter().map(|(_, d)| d)
    }

    /// Whether every value of `state` lies in its variable's domain.
    pub fn contains(&self, state: &crate::lts::State) -> bool {
        self.entries
            .iter()
            .all(|(n, d)| state.get(n).is_some_and(|v| d.contains(v)))
    }

    /// Size of the Cartesian product (saturating).
    pub fn product_size(&self) -> u128 {
        self.entries
            .iter()
            .fold(1u128, |acc, (_, d)| acc.saturating_mul(d.len() as u128))
    }
}

fn literal(e: &Expr) -> Option<i64> {
    match e {
        Expr::Int(i) => Some(*i),
        Expr::Neg(inner) => literal(inner).map(|i| -i),
        _ => None,
    }
}

/// Domain for `name` read off the first top-level membership conjunct.
fn domain_from(name: &str, bound: bool, pred: &Pred, sets: &[(String, Vec<String>)]) -> Result<Domain, ExploreError> {
    for c in pred.conjuncts() {
        let (lhs, dom) = match c {
            Pred::InRange(lhs, lo, hi) => (lhs, Ok((lo, hi))),
            Pred::InSet(lhs, set) => (lhs, Err(set)),
            _ => continue,
        };
        let mentions = match lhs {
            Expr::Var(v) if !bound => v == name,
            Expr::Bound(v) if bound => v == name,
            _ => false,
        };
        if !mentions {
            continue;
        }
        return match dom {
            Ok((lo, hi)) => match (literal(lo), literal(hi)) {
                (Some(lo), Some(hi)) if lo <= hi => Ok(Domain::Range(lo, hi)),
                (Some(lo), Some(hi)) => Err(ExploreError::Domain(format!(
                    "`{name}` has empty domain {lo}..{hi}"
                ))),
                _ => Err(ExploreError::Domain(format!(
                    "bounds of `{name}` must be integer literals"
                ))),
            },
            Err(set) if set == "BOOL" => Ok(Domain::Bool),
            Err(set) => {
                let (set_name, elems) = sets
                    .iter()
                    .find(|(s, _)| s == set)
                    .ok_or_else(|| ExploreError::Domain(format!("unknown set `{set}`")))?;
                let set_arc: Arc<str> = Arc::from(set_name.as_str());
                Ok(Domain::Enum(
                    elems
                        .iter()
                        .map(|e| EnumElement {
                            set: set_arc.clone(),
                            name: Arc::from(e.as_str()),
                        })
                        .collect(),
                ))
            }
        };
    }
    Err(ExploreError::Domain(format!(
        "no membership conjunct constrains `{name}`"
    )))
}

/// Read each variable's finite domain off the invariant's membership
/// conjuncts (`x : lo..hi`, `x : SET`, `x : BOOL`).
pub fn infer_domains(machine: &Machine) -> Result<DomainMap, ExploreError> {
    let sets: Vec<(String, Vec<String>)> = machine
        .sets
        .iter()
        .map(|s| (s.name.clone(), s.elements.clone()))
        .collect();
    let entries = machine
        .variables
        .iter()
        .map(|v| Ok((v.clone(), domain_from(v, false, &machine.invariant, &sets)?)))
        .collect::<Result<_, ExploreError>>()?;
    Ok(DomainMap { entries, sets })
}

/// Domains of `ANY` identifiers from their `WHERE` clause.
pub(crate) fn bound_domains(
    ids: &[String],
    guard: &Pred,
    domains: &DomainMap,
) -> Result<Vec<Domain>, ExploreError> {
    ids.iter()
        .map(|id| domain_from(id, true, guard, &domains.sets))
        .collect()
}
