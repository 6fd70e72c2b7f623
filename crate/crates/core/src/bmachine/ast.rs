use std::collections::BTreeSet;

use crate::lts::{EnumTable, VarOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    /// Machine variable.
    Var(String),
    /// Identifier bound by an enclosing `ANY`.
    Bound(String),
    /// Element of an enumerated set: (set, element).
    Element(String, String),
    Neg(Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Neq => "/=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pred {
    True,
    Cmp(CmpOp, Expr, Expr),
    /// `e : low..high`
    InRange(Expr, Expr, Expr),
    /// `e : SET`; `BOOL` is built in.
    InSet(Expr, String),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
    Not(Box<Pred>),
}

impl Pred {
    /// Top-level `&` conjuncts, left to right.
    pub fn conjuncts(&self) -> Vec<&Pred> {
        let mut out = Vec::new();
        fn walk<'a>(p: &'a Pred, out: &mut Vec<&'a Pred>) {
            match p {
                Pred::And(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subst {
    Skip,
    Assign(String, Expr),
    Seq(Vec<Subst>),
    /// `S1 || S2`, assigned variables pairwise disjoint.
    Parallel(Vec<Subst>),
    Pre(Pred, Box<Subst>),
    Select(Vec<(Pred, Subst)>),
    Any(Vec<String>, Pred, Box<Subst>),
}

impl Subst {
    /// Variables this substitution may assign.
    pub fn assigned(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        fn walk<'a>(s: &'a Subst, out: &mut BTreeSet<&'a str>) {
            match s {
                Subst::Skip => {}
                Subst::Assign(v, _) => {
                    out.insert(v);
                }
                Subst::Seq(items) | Subst::Parallel(items) => {
                    items.iter().for_each(|s| walk(s, out))
                }
                Subst::Pre(_, body) | Subst::Any(_, _, body) => walk(body, out),
                Subst::Select(branches) => branches.iter().for_each(|(_, s)| walk(s, out)),
            }
        }
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumSet {
    pub name: String,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    pub name: String,
    pub body: Subst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    pub name: String,
    pub sets: Vec<EnumSet>,
    pub variables: Vec<String>,
    pub invariant: Pred,
    pub initialisation: Subst,
    pub operations: Vec<Operation>,
}

impl Machine {
    pub fn var_order(&self) -> VarOrder {
        VarOrder::new(self.variables.iter().cloned())
    }

    pub fn enum_table(&self) -> EnumTable {
        let mut table = EnumTable::default();
        for set in &self.sets {
            for e in &set.elements {
                table.insert(&set.name, e);
            }
        }
        table
    }

    pub fn operation_names(&self) -> Vec<&str> {
        self.operations.iter().map(|o| o.name.as_str()).collect()
    }

    pub fn operation(&self, name: &str) -> Option<&Operation> {
        self.operations.iter().find(|o| o.name == name)
    }
}
