//! Expression and predicate evaluation, and post-state enumeration for
//! substitutions.

use std::sync::Arc;

use rustc_hash::FxHashSet;

use super::domains::{bound_domains, DomainMap};
use super::ExploreError;
use crate::bmachine::{ArithOp, CmpOp, Expr, Pred, Subst};
use crate::lts::{EnumElement, State, Value, VarOrder};

/// Working valuation: machine variables (possibly unset during
/// initialisation) plus a stack of `ANY`-bound identifiers.
pub(crate) struct Env<'a> {
    pub vars: &'a VarOrder,
    pub values: &'a [Option<Value>],
    pub bound: &'a [(&'a str, Value)],
}

impl Env<'_> {
    fn var(&self, name: &str) -> Result<Value, ExploreError> {
        let i = self
            .vars
            .index_of(name)
            .ok_or_else(|| ExploreError::Eval(format!("unknown variable `{name}`")))?;
        self.values[i]
            .clone()
            .ok_or_else(|| ExploreError::Eval(format!("variable `{name}` read before assignment")))
    }

    fn bound(&self, name: &str) -> Result<Value, ExploreError> {
        self.bound
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| ExploreError::Eval(format!("unbound identifier `{name}`")))
    }
}

pub(crate) fn eval_expr(e: &Expr, env: &Env) -> Result<Value, ExploreError> {
    Ok(match e {
        Expr::Int(i) => Value::Int(*i),
        Expr::Bool(b) => Value::Bool(*b),
        Expr::Var(v) => env.var(v)?,
        Expr::Bound(v) => env.bound(v)?,
        Expr::Element(set, name) => Value::Enum(EnumElement {
            set: Arc::from(set.as_str()),
            name: Arc::from(name.as_str()),
        }),
        Expr::Neg(inner) => {
            let v = int(eval_expr(inner, env)?)?;
            Value::Int(v.checked_neg().ok_or_else(overflow)?)
        }
        Expr::Arith(op, a, b) => {
            let a = int(eval_expr(a, env)?)?;
            let b = int(eval_expr(b, env)?)?;
            let r = match op {
                ArithOp::Add => a.checked_add(b),
                ArithOp::Sub => a.checked_sub(b),
                ArithOp::Mul => a.checked_mul(b),
            };
            Value::Int(r.ok_or_else(overflow)?)
        }
    })
}

fn overflow() -> ExploreError {
    ExploreError::Eval("integer overflow".into())
}

fn int(v: Value) -> Result<i64, ExploreError> {
    match v {
        Value::Int(i) => Ok(i),
        other => Err(ExploreError::Eval(format!(
            "expected an integer, found {} `{other}`",
            other.kind()
        ))),
    }
}

pub(crate) fn eval_pred(p: &Pred, env: &Env) -> Result<bool, ExploreError> {
    Ok(match p {
        Pred::True => true,
        Pred::Cmp(op, a, b) => {
            let a = eval_expr(a, env)?;
            let b = eval_expr(b, env)?;
            match op {
                CmpOp::Eq | CmpOp::Neq => {
                    if std::mem::discriminant(&a) != std::mem::discriminant(&b) {
                        return Err(ExploreError::Eval(format!(
                            "cannot compare {} `{a}` with {} `{b}`",
                            a.kind(),
                            b.kind()
                        )));
                    }
                    (a == b) == (*op == CmpOp::Eq)
                }
                _ => {
                    let (a, b) = (int(a)?, int(b)?);
                    match op {
                        CmpOp::Lt => a < b,
                        CmpOp::Le => a <= b,
                        CmpOp::Gt => a > b,
                        CmpOp::Ge => a >= b,
                        CmpOp::Eq | CmpOp::Neq => unreachable!(),
                    }
                }
            }
        }
        Pred::InRange(e, lo, hi) => {
            let v = int(eval_expr(e, env)?)?;
            let lo = int(eval_expr(lo, env)?)?;
            let hi = int(eval_expr(hi, env)?)?;
            lo <= v && v <= hi
        }
        Pred::InSet(e, set) => match eval_expr(e, env)? {
            Value::Bool(_) => set == "BOOL",
            Value::Enum(el) => &*el.set == set,
            Value::Int(i) => {
                return Err(ExploreError::Eval(format!(
                    "integer `{i}` tested for membership in set `{set}`"
                )))
            }
        },
        Pred::And(a, b) => eval_pred(a, env)? && eval_pred(b, env)?,
        Pred::Or(a, b) => eval_pred(a, env)? || eval_pred(b, env)?,
        Pred::Not(inner) => !eval_pred(inner, env)?,
    })
}

/// Evaluate `p` on a complete state.
pub fn holds(p: &Pred, state: &State) -> Result<bool, ExploreError> {
    let values: Vec<Option<Value>> = state.values().iter().cloned().map(Some).collect();
    eval_pred(
        p,
        &Env {
            vars: state.vars(),
            values: &values,
            bound: &[],
        },
    )
}

/// Collects distinct results preserving first-occurrence order.
struct Results {
    seen: FxHashSet<Vec<Option<Value>>>,
    out: Vec<Vec<Option<Value>>>,
}

impl Results {
    fn new() -> Self {
        Results {
            seen: FxHashSet::default(),
            out: Vec::new(),
        }
    }

    fn push(&mut self, v: Vec<Option<Value>>) {
        if self.seen.insert(v.clone()) {
            self.out.push(v);
        }
    }
}

pub(crate) fn enumerate<'a>(
    sub: &'a Subst,
    vars: &VarOrder,
    values: &[Option<Value>],
    bound: &mut Vec<(&'a str, Value)>,
    domains: &DomainMap,
) -> Result<Vec<Vec<Option<Value>>>, ExploreError> {
    match sub {
        Subst::Skip => Ok(vec![values.to_vec()]),
        Subst::Assign(var, e) => {
            let v = eval_expr(
                e,
                &Env {
                    vars,
                    values,
                    bound,
                },
            )?;
            let i = vars
                .index_of(var)
                .ok_or_else(|| ExploreError::Eval(format!("unknown variable `{var}`")))?;
            let mut next = values.to_vec();
            next[i] = Some(v);
            Ok(vec![next])
        }
        Subst::Seq(items) => {
            let mut current = vec![values.to_vec()];
            for item in items {
                let mut next = Results::new();
                for state in &current {
                    for r in enumerate(item, vars, state, bound, domains)? {
                        next.push(r);
                    }
                }
                current = next.out;
                if current.is_empty() {
                    break;
                }
            }
            Ok(current)
        }
        Subst::Parallel(items) => {
            // Every branch reads the pre-state; results merge on the
            // (disjoint) variables each branch assigns.
            let mut current = vec![values.to_vec()];
            for item in items {
                let assigned: Vec<usize> = item
                    .assigned()
                    .into_iter()
                    .filter_map(|v| vars.index_of(v))
                    .collect();
                let branch = enumerate(item, vars, values, bound, domains)?;
                let mut next = Results::new();
                for acc in &current {
                    for r in &branch {
                        let mut merged = acc.clone();
                        for &i in &assigned {
                            merged[i] = r[i].clone();
                        }
                        next.push(merged);
                    }
                }
                current = next.out;
            }
            Ok(current)
        }
        Subst::Pre(guard, body) => {
            let ok = eval_pred(
                guard,
                &Env {
                    vars,
                    values,
                    bound,
                },
            )?;
            if ok {
                enumerate(body, vars, values, bound, domains)
            } else {
                Ok(Vec::new())
            }
        }
        Subst::Select(branches) => {
            let mut results = Results::new();
            for (guard, body) in branches {
                let ok = eval_pred(
                    guard,
                    &Env {
                        vars,
                        values,
                        bound,
                    },
                )?;
                if ok {
                    for r in enumerate(body, vars, values, bound, domains)? {
                        results.push(r);
                    }
                }
            }
            Ok(results.out)
        }
        Subst::Any(ids, guard, body) => {
            let id_domains = bound_domains(ids, guard, domains)?;
            let mut results = Results::new();
            let depth = bound.len();
            let mut odometer = vec![0usize; ids.len()];
            'outer: loop {
                bound.truncate(depth);
                for (k, id) in ids.iter().enumerate() {
                    bound.push((id.as_str(), id_domains[k].value_at(odometer[k])));
                }
                let ok = eval_pred(
                    guard,
                    &Env {
                        vars,
                        values,
                        bound,
                    },
                );
                let step = match ok {
                    Ok(true) => enumerate(body, vars, values, bound, domains),
                    Ok(false) => Ok(Vec::new()),
                    Err(e) => Err(e),
                };
                match step {
                    Ok(rs) => rs.into_iter().for_each(|r| results.push(r)),
                    Err(e) => {
                        bound.truncate(depth);
                        return Err(e);
                    }
                }
                // advance, last identifier fastest
                let mut k = ids.len();
                loop {
                    if k == 0 {
                        break 'outer;
                    }
                    k -= 1;
                    odometer[k] += 1;
                    if odometer[k] < id_domains[k].len() {
                        break;
                    }
                    odometer[k] = 0;
                }
            }
            bound.truncate(depth);
            Ok(results.out)
        }
    }
}

/// All post-states of `sub` from `state`, deduplicated, in generation order.
pub fn enumerate_substitution(
    sub: &Subst,
    state: &State,
    domains: &DomainMap,
) -> Result<Vec<State>, ExploreError> {
    let values: Vec<Option<Value>> = state.values().iter().cloned().map(Some).collect();
    let mut bound = Vec::new();
    enumerate(sub, state.vars(), &values, &mut bound, domains)?
        .into_iter()
        .map(|vals| complete(state.vars(), vals))
        .collect()
}

pub(crate) fn complete(vars: &VarOrder, values: Vec<Option<Value>>) -> Result<State, ExploreError> {
    let mut out = Vec::with_capacity(values.len());
    for (name, v) in vars.names().iter().zip(values) {
        out.push(v.ok_or_else(|| ExploreError::Uninitialised(name.clone()))?);
    }
    Ok(State::new(vars.clone(), out)?)
}
