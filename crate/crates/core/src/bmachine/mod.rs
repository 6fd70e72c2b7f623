//! Front end for the bounded B-machine subset: `MACHINE`, optional `SETS`,
//! `VARIABLES`, `INVARIANT`, `INITIALISATION` and `OPERATIONS` with
//! `PRE`/`SELECT`/`ANY` substitutions. See `docs/grammar.md` for the EBNF.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod pretty;

use thiserror::Error;

pub use ast::{ArithOp, CmpOp, EnumSet, Expr, Machine, Operation, Pred, Subst};
pub use lexer::{strip_comments, tokenize, word_count, Lexed, Pos, Tok};
pub use parser::{parse_machine, parse_predicate};
pub use pretty::{pretty_expr, pretty_machine, pretty_pred, pretty_subst};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{pos}: {msg}")]
    Lex { pos: Pos, msg: String },
    #[error("{pos}: found {found}, expected one of: {}", expected.join(", "))]
    Syntax {
        pos: Pos,
        found: String,
        expected: Vec<String>,
    },
    #[error("{pos}: undeclared identifier `{name}`")]
    Undeclared { pos: Pos, name: String },
    #[error("{pos}: duplicate {kind} `{name}`")]
    Duplicate {
        pos: Pos,
        kind: &'static str,
        name: String,
    },
    #[error("{pos}: {msg}")]
    Invalid { pos: Pos, msg: String },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Lex { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::Undeclared { pos, .. }
            | ParseError::Duplicate { pos, .. }
            | ParseError::Invalid { pos, .. } => *pos,
        }
    }
}
