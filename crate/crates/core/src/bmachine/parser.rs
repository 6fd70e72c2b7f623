use std::collections::{BTreeSet, HashMap};

use super::ast::*;
use super::lexer::{tokenize, Pos, Tok, Token};
use super::ParseError;

/// Parse a machine in the supported B subset.
pub fn parse_machine(source: &str) -> Result<Machine, ParseError> {
    let lexed = tokenize(source)?;
    let mut p = Parser::new(lexed.tokens, lexed.eof);
    let machine = p.machine()?;
    p.finish()?;
    Ok(machine)
}

/// Parse a standalone predicate over `machine`'s variables and enumerated
/// elements (goal predicates).
pub fn parse_predicate(source: &str, machine: &Machine) -> Result<Pred, ParseError> {
    let lexed = tokenize(source)?;
    let mut p = Parser::new(lexed.tokens, lexed.eof);
    p.declare_sets(&machine.sets, Pos::default())?;
    for v in &machine.variables {
        p.vars.insert(v.clone(), Pos::default());
    }
    let pred = p.pred()?;
    p.finish()?;
    Ok(pred)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    eof: Pos,
    vars: HashMap<String, Pos>,
    /// element -> set
    elements: HashMap<String, String>,
    sets: BTreeSet<String>,
    bound: Vec<String>,
}

impl Parser {
    fn new(tokens: Vec<Token>, eof: Pos) -> Self {
        Parser {
            tokens,
            at: 0,
            eof,
            vars: HashMap::new(),
            elements: HashMap::new(),
            sets: BTreeSet::new(),
            bound: Vec::new(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.at).map(|t| &t.tok)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.tokens.get(self.at + n).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.tokens.get(self.at).map_or(self.eof, |t| t.pos)
    }

    fn found(&self) -> String {
        self.peek()
            .map_or_else(|| "end of input".to_string(), |t| t.to_string())
    }

    fn syntax(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            found: self.found(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.syntax(&[&tok.to_string()]))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.at += 1;
                Ok((name, pos))
            }
            _ => Err(self.syntax(&["identifier"])),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at < self.tokens.len() {
            Err(self.syntax(&["end of input"]))
        } else {
            Ok(())
        }
    }

    fn machine(&mut self) -> Result<Machine, ParseError> {
        self.expect(Tok::Machine)?;
        let (name, _) = self.ident()?;

        let mut sets = Vec::new();
        if self.eat(&Tok::Sets) {
            loop {
                let (set, pos) = self.ident()?;
                self.expect(Tok::Eq)?;
                self.expect(Tok::LBrace)?;
                let mut elements = vec![self.ident()?.0];
                while self.eat(&Tok::Comma) {
                    elements.push(self.ident()?.0);
                }
                self.expect(Tok::RBrace)?;
                let decl = EnumSet {
                    name: set,
                    elements,
                };
                self.declare_sets(std::slice::from_ref(&decl), pos)?;
                sets.push(decl);
                if !self.eat(&Tok::Semi) {
                    break;
                }
            }
        }

        self.expect_clause(Tok::Variables, &sets)?;
        let mut variables = Vec::new();
        loop {
            let (v, pos) = self.ident()?;
            if self.vars.contains_key(&v) || self.elements.contains_key(&v) || self.sets.contains(&v)
            {
                return Err(ParseError::Duplicate {
                    pos,
                    kind: "variable",
                    name: v,
                });
            }
            self.vars.insert(v.clone(), pos);
            variables.push(v);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }

        self.expect(Tok::Invariant)?;
        let invariant = self.pred()?;
        self.expect(Tok::Initialisation)?;
        let initialisation = self.subst()?;
        self.expect(Tok::Operations)?;

        let mut operations: Vec<Operation> = Vec::new();
        if !matches!(self.peek(), Some(Tok::End)) {
            loop {
                let (op, pos) = self.ident()?;
                if operations.iter().any(|o| o.name == op) {
                    return Err(ParseError::Duplicate {
                        pos,
                        kind: "operation",
                        name: op,
                    });
                }
                self.expect(Tok::Eq)?;
                let body = self.subst()?;
                operations.push(Operation { name: op, body });
                if !self.eat(&Tok::Semi) {
                    break;
                }
            }
        }
        self.expect(Tok::End)?;

        Ok(Machine {
            name,
            sets,
            variables,
            invariant,
            initialisation,
            operations,
        })
    }

    fn expect_clause(&mut self, tok: Tok, sets: &[EnumSet]) -> Result<(), ParseError> {
        if self.eat(&tok) {
            return Ok(());
        }
        let mut expected = vec![tok.to_string()];
        if sets.is_empty() {
            expected.insert(0, Tok::Sets.to_string());
        }
        let expected: Vec<&str> = expected.iter().map(String::as_str).collect();
        Err(self.syntax(&expected))
    }

    fn declare_sets(&mut self, sets: &[EnumSet], pos: Pos) -> Result<(), ParseError> {
        for set in sets {
            if set.name == "BOOL" || !self.sets.insert(set.name.clone()) {
                return Err(ParseError::Duplicate {
                    pos,
                    kind: "set",
                    name: set.name.clone(),
                });
            }
            for e in &set.elements {
                if self.elements.contains_key(e) || self.sets.contains(e) {
                    return Err(ParseError::Duplicate {
                        pos,
                        kind: "set element",
                        name: e.clone(),
                    });
                }
                self.elements.insert(e.clone(), set.name.clone());
            }
        }
        Ok(())
    }

    // Substitutions: seq := par (';' par)* ; par := basic ('||' basic)*

    fn subst(&mut self) -> Result<Subst, ParseError> {
        let mut items = vec![self.parallel()?];
        // `; name =` starts the next operation, `; name :=` continues.
        while self.peek() == Some(&Tok::Semi) && !self.next_is_operation_header() {
            self.at += 1;
            items.push(self.parallel()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Subst::Seq(items)
        })
    }

    fn next_is_operation_header(&self) -> bool {
        matches!(self.peek_at(1), Some(Tok::Ident(_))) && self.peek_at(2) == Some(&Tok::Eq)
    }

    fn parallel(&mut self) -> Result<Subst, ParseError> {
        let pos = self.pos();
        let mut items = vec![self.basic()?];
        while self.eat(&Tok::Parallel) {
            items.push(self.basic()?);
        }
        if items.len() == 1 {
            return Ok(items.pop().unwrap());
        }
        let mut seen = BTreeSet::new();
        for item in &items {
            for v in item.assigned() {
                if !seen.insert(v.to_string()) {
                    return Err(ParseError::Invalid {
                        pos,
                        msg: format!("variable `{v}` assigned in more than one branch of `||`"),
                    });
                }
            }
        }
        Ok(Subst::Parallel(items))
    }

    fn basic(&mut self) -> Result<Subst, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Skip) => {
                self.at += 1;
                Ok(Subst::Skip)
            }
            Some(Tok::Pre) => {
                self.at += 1;
                let guard = self.pred()?;
                self.expect(Tok::Then)?;
                let body = self.subst()?;
                self.expect(Tok::End)?;
                Ok(Subst::Pre(guard, Box::new(body)))
            }
            Some(Tok::Select) => {
                self.at += 1;
                let mut branches = Vec::new();
                loop {
                    let guard = self.pred()?;
                    self.expect(Tok::Then)?;
                    let body = self.subst()?;
                    branches.push((guard, body));
                    if !self.eat(&Tok::When) {
                        break;
                    }
                }
                if self.peek() != Some(&Tok::End) {
                    return Err(self.syntax(&["`WHEN`", "`END`"]));
                }
                self.at += 1;
                Ok(Subst::Select(branches))
            }
            Some(Tok::Any) => {
                self.at += 1;
                let mut ids = Vec::new();
                loop {
                    let (id, pos) = self.ident()?;
                    if self.vars.contains_key(&id)
                        || self.elements.contains_key(&id)
                        || self.sets.contains(&id)
                        || self.bound.contains(&id)
                        || ids.contains(&id)
                    {
                        return Err(ParseError::Invalid {
                            pos,
                            msg: format!("bound identifier `{id}` shadows an existing name"),
                        });
                    }
                    ids.push(id);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::Where)?;
                let depth = self.bound.len();
                self.bound.extend(ids.iter().cloned());
                let result = (|| {
                    let guard = self.pred()?;
                    self.expect(Tok::Then)?;
                    let body = self.subst()?;
                    self.expect(Tok::End)?;
                    Ok((guard, body))
                })();
                self.bound.truncate(depth);
                let (guard, body) = result?;
                Ok(Subst::Any(ids, guard, Box::new(body)))
            }
            Some(Tok::Ident(_)) => {
                let (name, _) = self.ident()?;
                self.expect(Tok::Becomes)?;
                if !self.vars.contains_key(&name) {
                    return Err(if self.bound.contains(&name) {
                        ParseError::Invalid {
                            pos,
                            msg: format!("cannot assign to bound identifier `{name}`"),
                        }
                    } else {
                        ParseError::Undeclared { pos, name }
                    });
                }
                let value = self.expr()?;
                Ok(Subst::Assign(name, value))
            }
            _ => Err(self.syntax(&["`skip`", "`PRE`", "`SELECT`", "`ANY`", "identifier"])),
        }
    }

    // Predicates: or := and ('or' and)* ; and := unary ('&' unary)*

    fn pred(&mut self) -> Result<Pred, ParseError> {
        let mut lhs = self.conj()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conj()?;
            lhs = Pred::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Pred, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Pred::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Pred, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(Pred::Not(Box::new(self.unary()?)));
        }
        if let Some(Tok::Ident(name)) = self.peek() {
            if name == "btrue" {
                self.at += 1;
                return Ok(Pred::True);
            }
        }
        let start = self.at;
        match self.comparison() {
            Ok(p) => Ok(p),
            Err(first) if self.tokens.get(start).map(|t| &t.tok) == Some(&Tok::LParen) => {
                let first_at = self.at;
                self.at = start + 1;
                let nested = self.pred().and_then(|p| {
                    self.expect(Tok::RParen)?;
                    Ok(p)
                });
                match nested {
                    Ok(p) => Ok(p),
                    // Report whichever attempt got further.
                    Err(second) if self.at >= first_at => Err(second),
                    Err(_) => Err(first),
                }
            }
            Err(e) => Err(e),
        }
    }

    fn comparison(&mut self) -> Result<Pred, ParseError> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Some(Tok::Eq) => CmpOp::Eq,
            Some(Tok::Neq) => CmpOp::Neq,
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Le) => CmpOp::Le,
            Some(Tok::Gt) => CmpOp::Gt,
            Some(Tok::Ge) => CmpOp::Ge,
            Some(Tok::Colon) => {
                self.at += 1;
                if let Some(Tok::Ident(name)) = self.peek() {
                    if (name == "BOOL" || self.sets.contains(name))
                        && self.peek_at(1) != Some(&Tok::DotDot)
                    {
                        let name = name.clone();
                        self.at += 1;
                        return Ok(Pred::InSet(lhs, name));
                    }
                }
                let low = self.expr()?;
                self.expect(Tok::DotDot)?;
                let high = self.expr()?;
                return Ok(Pred::InRange(lhs, low, high));
            }
            _ => return Err(self.syntax(&["`=`", "`/=`", "`<`", "`<=`", "`>`", "`>=`", "`:`"])),
        };
        self.at += 1;
        let rhs = self.expr()?;
        Ok(Pred::Cmp(op, lhs, rhs))
    }

    // Expressions: sum := term (('+'|'-') term)* ; term := factor ('*' factor)*

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => ArithOp::Add,
                Some(Tok::Minus) => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.at += 1;
            let rhs = self.term()?;
            lhs = Expr::Arith(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.eat(&Tok::Star) {
            let rhs = self.factor()?;
            lhs = Expr::Arith(ArithOp::Mul, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(i)) => {
                self.at += 1;
                Ok(Expr::Int(i))
            }
            Some(Tok::Minus) => {
                self.at += 1;
                if let Some(Tok::Int(i)) = self.peek() {
                    let i = *i;
                    self.at += 1;
                    return Ok(Expr::Int(-i));
                }
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some(Tok::True) => {
                self.at += 1;
                Ok(Expr::Bool(true))
            }
            Some(Tok::False) => {
                self.at += 1;
                Ok(Expr::Bool(false))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                self.resolve(name, pos)
            }
            _ => Err(self.syntax(&["integer", "identifier", "`(`", "`-`", "`TRUE`", "`FALSE`"])),
        }
    }

    fn resolve(&self, name: String, pos: Pos) -> Result<Expr, ParseError> {
        if self.bound.contains(&name) {
            Ok(Expr::Bound(name))
        } else if self.vars.contains_key(&name) {
            Ok(Expr::Var(name))
        } else if let Some(set) = self.elements.get(&name) {
            Ok(Expr::Element(set.clone(), name))
        } else {
            Err(ParseError::Undeclared { pos, name })
        }
    }
}
