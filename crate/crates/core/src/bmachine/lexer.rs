use std::fmt;

use super::ParseError;

/// Line/column position, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Byte range in the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Machine,
    Sets,
    Variables,
    Invariant,
    Initialisation,
    Operations,
    Pre,
    Select,
    When,
    Any,
    Where,
    Then,
    End,
    Skip,
    Not,
    Or,
    True,
    False,
    Ident(String),
    Int(i64),
    Becomes,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    Amp,
    Colon,
    DotDot,
    Semi,
    Parallel,
    Comma,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    LBrace,
    RBrace,
}

impl Tok {
    fn keyword(word: &str) -> Option<Tok> {
        Some(match word {
            "MACHINE" => Tok::Machine,
            "SETS" => Tok::Sets,
            "VARIABLES" => Tok::Variables,
            "INVARIANT" => Tok::Invariant,
            "INITIALISATION" | "INITIALIZATION" => Tok::Initialisation,
            "OPERATIONS" => Tok::Operations,
            "PRE" => Tok::Pre,
            "SELECT" => Tok::Select,
            "WHEN" => Tok::When,
            "ANY" => Tok::Any,
            "WHERE" => Tok::Where,
            "THEN" => Tok::Then,
            "END" => Tok::End,
            "skip" => Tok::Skip,
            "not" => Tok::Not,
            "or" => Tok::Or,
            "TRUE" => Tok::True,
            "FALSE" => Tok::False,
            _ => return None,
        })
    }
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Machine => "MACHINE",
            Tok::Sets => "SETS",
            Tok::Variables => "VARIABLES",
            Tok::Invariant => "INVARIANT",
            Tok::Initialisation => "INITIALISATION",
            Tok::Operations => "OPERATIONS",
            Tok::Pre => "PRE",
            Tok::Select => "SELECT",
            Tok::When => "WHEN",
            Tok::Any => "ANY",
            Tok::Where => "WHERE",
            Tok::Then => "THEN",
            Tok::End => "END",
            Tok::Skip => "skip",
            Tok::Not => "not",
            Tok::Or => "or",
            Tok::True => "TRUE",
            Tok::False => "FALSE",
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::Int(i) => return write!(f, "integer {i}"),
            Tok::Becomes => ":=",
            Tok::Eq => "=",
            Tok::Neq => "/=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Amp => "&",
            Tok::Colon => ":",
            Tok::DotDot => "..",
            Tok::Semi => ";",
            Tok::Parallel => "||",
            Tok::Comma => ",",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

#[derive(Debug, Clone, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    /// Comment spans that were skipped.
    pub comments: Vec<Span>,
    /// Position just past the last character.
    pub eof: Pos,
}

struct Cursor<'a> {
    src: &'a str,
    offset: usize,
    pos: Pos,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.offset..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        self.src[self.offset..].starts_with(s)
    }
}

/// Split B source into tokens, dropping `(* ... *)` and `// ...` comments.
pub fn tokenize(source: &str) -> Result<Lexed, ParseError> {
    let mut cur = Cursor {
        src: source,
        offset: 0,
        pos: Pos { line: 1, col: 1 },
    };
    let mut out = Lexed::default();
    while let Some(c) = cur.peek() {
        let start = cur.pos;
        let start_offset = cur.offset;
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if cur.starts_with("(*") {
            cur.bump();
            cur.bump();
            loop {
                if cur.starts_with("*)") {
                    cur.bump();
                    cur.bump();
                    break;
                }
                if cur.bump().is_none() {
                    return Err(ParseError::Lex {
                        pos: start,
                        msg: "unterminated comment".into(),
                    });
                }
            }
            out.comments.push(Span {
                start: start_offset,
                end: cur.offset,
            });
            continue;
        }
        if cur.starts_with("//") {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            out.comments.push(Span {
                start: start_offset,
                end: cur.offset,
            });
            continue;
        }
        let tok = if c.is_ascii_alphabetic() {
            let mut word = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            Tok::keyword(&word).unwrap_or(Tok::Ident(word))
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
                digits.push(c);
                cur.bump();
            }
            let value = digits.parse().map_err(|_| ParseError::Lex {
                pos: start,
                msg: format!("integer literal {digits} out of range"),
            })?;
            Tok::Int(value)
        } else {
            let two = |cur: &mut Cursor, t: Tok| {
                cur.bump();
                cur.bump();
                t
            };
            let one = |cur: &mut Cursor, t: Tok| {
                cur.bump();
                t
            };
            match (c, cur.peek2()) {
                (':', Some('=')) => two(&mut cur, Tok::Becomes),
                ('/', Some('=')) => two(&mut cur, Tok::Neq),
                ('<', Some('=')) => two(&mut cur, Tok::Le),
                ('>', Some('=')) => two(&mut cur, Tok::Ge),
                ('.', Some('.')) => two(&mut cur, Tok::DotDot),
                ('|', Some('|')) => two(&mut cur, Tok::Parallel),
                (':', _) => one(&mut cur, Tok::Colon),
                ('=', _) => one(&mut cur, Tok::Eq),
                ('<', _) => one(&mut cur, Tok::Lt),
                ('>', _) => one(&mut cur, Tok::Gt),
                ('&', _) => one(&mut cur, Tok::Amp),
                (';', _) => one(&mut cur, Tok::Semi),
                (',', _) => one(&mut cur, Tok::Comma),
                ('+', _) => one(&mut cur, Tok::Plus),
                ('-', _) => one(&mut cur, Tok::Minus),
                ('*', _) => one(&mut cur, Tok::Star),
                ('(', _) => one(&mut cur, Tok::LParen),
                (')', _) => one(&mut cur, Tok::RParen),
                ('{', _) => one(&mut cur, Tok::LBrace),
                ('}', _) => one(&mut cur, Tok::RBrace),
                (other, _) => {
                    return Err(ParseError::Lex {
                        pos: start,
                        msg: format!("illegal character {other:?}"),
                    })
                }
            }
        };
        out.tokens.push(Token { tok, pos: start });
    }
    out.eof = cur.pos;
    Ok(out)
}

/// Remove comments, replacing each with a single space.
///
/// An unterminated `(*` swallows the rest of the input.
pub fn strip_comments(source: &str) -> String {
    let mut out = String::with_capacity(source.len());
    let mut rest = source;
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix("(*") {
            rest = match after.find("*)") {
                Some(i) => &after[i + 2..],
                None => "",
            };
            out.push(' ');
        } else if rest.starts_with("//") {
            rest = match rest.find('\n') {
                Some(i) => &rest[i..],
                None => "",
            };
            out.push(' ');
        } else {
            let c = rest.chars().next().unwrap();
            out.push(c);
            rest = &rest[c.len_utf8()..];
        }
    }
    out
}

/// Number of whitespace-delimited words once comments are removed.
pub fn word_count(source: &str) -> usize {
    strip_comments(source).split_whitespace().count()
}
