mod common;

use bqual_core::bmachine::*;
use proptest::prelude::*;

const VARS: [&str; 4] = ["x", "y", "b", "c"];

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-50i64..50).prop_map(Expr::Int),
        any::<bool>().prop_map(Expr::Bool),
        prop::sample::select(&VARS[..]).prop_map(|v| Expr::Var(v.to_string())),
        Just(Expr::Bound("k".into())),
        prop::sample::select(vec!["red", "green"]).prop_map(|e| Expr::Element("COLOR".into(), e.into())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let op = prop::sample::select(vec![ArithOp::Add, ArithOp::Sub, ArithOp::Mul]);
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (op, inner.clone(), inner).prop_map(|(o, a, b)| Expr::Arith(o, Box::new(a), Box::new(b))),
        ]
    })
}

fn pred() -> impl Strategy<Value = Pred> {
    let cmp = prop::sample::select(vec![CmpOp::Eq, CmpOp::Neq, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge]);
    let leaf = prop_oneof![
        Just(Pred::True),
        (cmp, expr(), expr()).prop_map(|(o, a, b)| Pred::Cmp(o, a, b)),
        (expr(), expr(), expr()).prop_map(|(e, lo, hi)| Pred::InRange(e, lo, hi)),
        (expr(), prop::sample::select(vec!["BOOL", "COLOR"])).prop_map(|(e, s)| Pred::InSet(e, s.into())),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Pred::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Pred::Or(Box::new(a), Box::new(b))),
            inner.prop_map(|p| Pred::Not(Box::new(p))),
        ]
    })
}

fn assign() -> impl Strategy<Value = Subst> {
    (prop::sample::select(&VARS[..]), expr()).prop_map(|(v, e)| Subst::Assign(v.into(), e))
}

fn subst() -> impl Strategy<Value = Subst> {
    let leaf = prop_oneof![Just(Subst::Skip), assign()];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (pred(), inner.clone()).prop_map(|(p, s)| Subst::Pre(p, Box::new(s))),
            prop::collection::vec((pred(), inner.clone()), 1..3).prop_map(Subst::Select),
            (pred(), inner.clone()).prop_map(|(p, s)| Subst::Any(vec!["k".into()], p, Box::new(s))),
            prop::collection::vec(inner, 2..4).prop_map(Subst::Seq),
            prop::sample::subsequence(VARS.to_vec(), 2..=4).prop_flat_map(|vs| {
                let n = vs.len();
                prop::collection::vec(expr(), n).prop_map(move |es| {
                    Subst::Parallel(vs.iter().zip(es).map(|(v, e)| Subst::Assign(v.to_string(), e)).collect())
                })
            }),
        ]
    })
}

/// Bring a generated tree into the shape the parser produces: bound names
/// only inside a binding `ANY` (fresh per nesting level), and no `Seq`
/// directly inside a `Seq`.
fn normalise_subst(s: Subst, bound: &mut Vec<String>) -> Subst {
    match s {
        Subst::Skip => Subst::Skip,
        Subst::Assign(v, e) => Subst::Assign(v, normalise_expr(e, bound)),
        Subst::Seq(items) => {
            let mut flat = Vec::new();
            for item in items {
                match normalise_subst(item, bound) {
                    Subst::Seq(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            Subst::Seq(flat)
        }
        Subst::Parallel(items) => Subst::Parallel(items.into_iter().map(|i| normalise_subst(i, bound)).collect()),
        Subst::Pre(p, body) => Subst::Pre(normalise_pred(p, bound), Box::new(normalise_subst(*body, bound))),
        Subst::Select(branches) => Subst::Select(
            branches
                .into_iter()
                .map(|(p, s)| (normalise_pred(p, bound), normalise_subst(s, bound)))
                .collect(),
        ),
        Subst::Any(_, p, body) => {
            bound.push(format!("k{}", bound.len()));
            let p = normalise_pred(p, bound);
            let body = normalise_subst(*body, bound);
            let id = bound.pop().unwrap();
            Subst::Any(vec![id], p, Box::new(body))
        }
    }
}

fn normalise_pred(p: Pred, bound: &[String]) -> Pred {
    let e = |x| normalise_expr(x, bound);
    match p {
        Pred::True => Pred::True,
        Pred::Cmp(o, a, b) => Pred::Cmp(o, e(a), e(b)),
        Pred::InRange(x, lo, hi) => Pred::InRange(e(x), e(lo), e(hi)),
        Pred::InSet(x, s) => Pred::InSet(e(x), s),
        Pred::And(a, b) => Pred::And(Box::new(normalise_pred(*a, bound)), Box::new(normalise_pred(*b, bound))),
        Pred::Or(a, b) => Pred::Or(Box::new(normalise_pred(*a, bound)), Box::new(normalise_pred(*b, bound))),
        Pred::Not(a) => Pred::Not(Box::new(normalise_pred(*a, bound))),
    }
}

fn normalise_expr(e: Expr, bound: &[String]) -> Expr {
    match e {
        Expr::Bound(_) => match bound.last() {
            Some(k) => Expr::Bound(k.clone()),
            None => Expr::Var("x".into()),
        },
        Expr::Neg(a) => Expr::Neg(Box::new(normalise_expr(*a, bound))),
        Expr::Arith(o, a, b) => Expr::Arith(o, Box::new(normalise_expr(*a, bound)), Box::new(normalise_expr(*b, bound))),
        other => other,
    }
}

fn machine() -> impl Strategy<Value = Machine> {
    (pred(), subst(), prop::collection::vec(subst(), 1..4)).prop_map(|(inv, init, ops)| Machine {
        name: "Gen".into(),
        sets: vec![EnumSet {
            name: "COLOR".into(),
            elements: vec!["red".into(), "green".into()],
        }],
        variables: VARS.iter().map(|v| v.to_string()).collect(),
        invariant: normalise_pred(inv, &[]),
        initialisation: normalise_subst(init, &mut Vec::new()),
        operations: ops
            .into_iter()
            .enumerate()
            .map(|(i, body)| Operation {
                name: format!("op{i}"),
                body: normalise_subst(body, &mut Vec::new()),
            })
            .collect(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn pretty_print_round_trips(m in machine()) {
        let text = pretty_machine(&m);
        let parsed = parse_machine(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(parsed, m);
    }

    #[test]
    fn comments_do_not_change_the_machine(m in machine()) {
        let text = pretty_machine(&m);
        let commented = format!("(* note *) {}// trailing\n", text.replace("OPERATIONS", "OPERATIONS // ops"));
        prop_assert_eq!(parse_machine(&commented).unwrap(), m);
    }
}

#[test]
fn corpus_machines_round_trip() {
    for name in ["cm1.mch", "cm2.mch", "cm3.mch", "cm4.mch", "cm5.mch", "cm6.mch"] {
        let m = common::corpus_machine(name);
        assert_eq!(parse_machine(&pretty_machine(&m)).unwrap(), m, "{name}");
    }
}

#[test]
fn cm1_word_count() {
    assert_eq!(word_count(&common::corpus_text("cm1.mch")), 73);
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_machine("MACHINE M\nVARIABLES x\nINVARIANT x : 0..3\nINITIALISATION x := \nOPERATIONS a = skip END")
        .unwrap_err();
    assert_eq!(err.pos().line, 5);
    let err = parse_machine("MACHINE M VARIABLES x INVARIANT y : 0..3 INITIALISATION x := 0 OPERATIONS a = skip END")
        .unwrap_err();
    assert!(matches!(err, ParseError::Undeclared { ref name, .. } if name == "y"));
}
