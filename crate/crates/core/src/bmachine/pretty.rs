//! Canonical source rendering. `parse_machine(&pretty(m)) == m` for every
//! machine the parser produces.

use std::fmt::Write;

use super::ast::*;

pub fn pretty_machine(m: &Machine) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "MACHINE {}", m.name);
    if !m.sets.is_empty() {
        let sets: Vec<String> = m
            .sets
            .iter()
            .map(|s| format!("{} = {{{}}}", s.name, s.elements.join(", ")))
            .collect();
        let _ = writeln!(out, "SETS {}", sets.join("; "));
    }
    let _ = writeln!(out, "VARIABLES {}", m.variables.join(", "));
    let _ = writeln!(out, "INVARIANT {}", pretty_pred(&m.invariant));
    let _ = writeln!(out, "INITIALISATION {}", pretty_subst(&m.initialisation));
    out.push_str("OPERATIONS\n");
    for (i, op) in m.operations.iter().enumerate() {
        let sep = if i + 1 < m.operations.len() { ";" } else { "" };
        let _ = writeln!(out, "  {} = {}{}", op.name, pretty_subst(&op.body), sep);
    }
    out.push_str("END\n");
    out
}

pub fn pretty_subst(s: &Subst) -> String {
    match s {
        Subst::Skip => "skip".into(),
        Subst::Assign(v, e) => format!("{v} := {}", pretty_expr(e)),
        Subst::Seq(items) => items.iter().map(pretty_subst).collect::<Vec<_>>().join("; "),
        Subst::Parallel(items) => items.iter().map(pretty_subst).collect::<Vec<_>>().join(" || "),
        Subst::Pre(p, body) => format!("PRE {} THEN {} END", pretty_pred(p), pretty_subst(body)),
        Subst::Select(branches) => {
            let mut out = String::from("SELECT ");
            for (i, (p, body)) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(" WHEN ");
                }
                let _ = write!(out, "{} THEN {}", pretty_pred(p), pretty_subst(body));
            }
            out.push_str(" END");
            out
        }
        Subst::Any(ids, p, body) => format!(
            "ANY {} WHERE {} THEN {} END",
            ids.join(", "),
            pretty_pred(p),
            pretty_subst(body)
        ),
    }
}

fn pred_level(p: &Pred) -> u8 {
    match p {
        Pred::Or(..) => 0,
        Pred::And(..) => 1,
        _ => 2,
    }
}

pub fn pretty_pred(p: &Pred) -> String {
    let wrap = |child: &Pred, min: u8| {
        let s = pretty_pred(child);
        if pred_level(child) < min {
            format!("({s})")
        } else {
            s
        }
    };
    match p {
        Pred::True => "btrue".into(),
        Pred::Cmp(op, a, b) => format!("{} {} {}", pretty_expr(a), op.symbol(), pretty_expr(b)),
        Pred::InRange(e, lo, hi) => {
            format!("{} : {}..{}", pretty_expr(e), pretty_expr(lo), pretty_expr(hi))
        }
        Pred::InSet(e, set) => format!("{} : {set}", pretty_expr(e)),
        // Left-associative: the right operand needs parentheses at equal level.
        Pred::And(a, b) => format!("{} & {}", wrap(a, 1), wrap(b, 2)),
        Pred::Or(a, b) => format!("{} or {}", wrap(a, 0), wrap(b, 1)),
        Pred::Not(inner) => format!("not({})", pretty_pred(inner)),
    }
}

fn expr_level(e: &Expr) -> u8 {
    match e {
        Expr::Arith(ArithOp::Add | ArithOp::Sub, ..) => 0,
        Expr::Arith(ArithOp::Mul, ..) => 1,
        _ => 2,
    }
}

pub fn pretty_expr(e: &Expr) -> String {
    let wrap = |child: &Expr, min: u8| {
        let s = pretty_expr(child);
        if expr_level(child) < min {
            format!("({s})")
        } else {
            s
        }
    };
    match e {
        Expr::Int(i) => i.to_string(),
        Expr::Bool(true) => "TRUE".into(),
        Expr::Bool(false) => "FALSE".into(),
        Expr::Var(v) | Expr::Bound(v) | Expr::Element(_, v) => v.clone(),
        Expr::Neg(inner) => format!("-({})", pretty_expr(inner)),
        Expr::Arith(ArithOp::Add, a, b) => format!("{} + {}", wrap(a, 0), wrap(b, 1)),
        Expr::Arith(ArithOp::Sub, a, b) => format!("{} - {}", wrap(a, 0), wrap(b, 1)),
        Expr::Arith(ArithOp::Mul, a, b) => format!("{} * {}", wrap(a, 1), wrap(b, 2)),
    }
}
