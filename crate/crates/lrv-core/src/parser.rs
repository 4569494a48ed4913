//! Text format for formula files: declaration lines followed by `formula: EXPR`.
//!
//! ```text
//! env bool lf ;
//! sys data proc, log ;
//! formula: G(eq(proc, 1, log))
//! ```
//!
//! Operator precedence, loosest to tightest: `->`, `|`, `&`, binary temporal
//! (`U`, `S`, `R`, `T`), unary. `->` and the binary temporal operators are
//! right-associative. `#` starts a comment that runs to end of line.

use crate::ast::{Dir, Formula, Owner, Signature, VarKind};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    True,
    False,
    Eq,
    Env,
    Sys,
    Bool,
    Data,
    FormulaKw,
    // unary / binary temporal operators
    X,
    Y,
    Wx,
    Wy,
    F,
    G,
    O,
    H,
    U,
    S,
    R,
    T,
    // obligation heads
    FutEq,
    FutNeq,
    PastEq,
    PastNeq,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Eq => "`eq`".into(),
            Tok::Env => "`env`".into(),
            Tok::Sys => "`sys`".into(),
            Tok::Bool => "`bool`".into(),
            Tok::Data => "`data`".into(),
            Tok::FormulaKw => "`formula`".into(),
            Tok::X => "`X`".into(),
            Tok::Y => "`Y`".into(),
            Tok::Wx => "`WX`".into(),
            Tok::Wy => "`WY`".into(),
            Tok::F => "`F`".into(),
            Tok::G => "`G`".into(),
            Tok::O => "`O`".into(),
            Tok::H => "`H`".into(),
            Tok::U => "`U`".into(),
            Tok::S => "`S`".into(),
            Tok::R => "`R`".into(),
            Tok::T => "`T`".into(),
            Tok::FutEq => "`E+`".into(),
            Tok::FutNeq => "`D+`".into(),
            Tok::PastEq => "`E-`".into(),
            Tok::PastNeq => "`D-`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, col, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    macro_rules! push {
        ($tok:expr, $l:expr, $c:expr) => {
            out.push(Spanned { tok: $tok, line: $l, col: $c })
        };
    }
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                push!(Tok::LParen, tl, tc);
                i += 1;
                col += 1;
            }
            ')' => {
                push!(Tok::RParen, tl, tc);
                i += 1;
                col += 1;
            }
            ',' => {
                push!(Tok::Comma, tl, tc);
                i += 1;
                col += 1;
            }
            ';' => {
                push!(Tok::Semi, tl, tc);
                i += 1;
                col += 1;
            }
            ':' => {
                push!(Tok::Colon, tl, tc);
                i += 1;
                col += 1;
            }
            '!' => {
                push!(Tok::Not, tl, tc);
                i += 1;
                col += 1;
            }
            '&' => {
                push!(Tok::And, tl, tc);
                i += 1;
                col += 1;
            }
            '|' => {
                push!(Tok::Or, tl, tc);
                i += 1;
                col += 1;
            }
            '-' => {
                if i + 1 < chars.len() && chars[i + 1] == '>' {
                    push!(Tok::Arrow, tl, tc);
                    i += 2;
                    col += 2;
                } else if i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    let mut j = i + 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let s: String = chars[i..j].iter().collect();
                    let n = s
                        .parse::<i64>()
                        .map_err(|_| err(tl, tc, format!("integer out of range: {s}")))?;
                    push!(Tok::Int(n), tl, tc);
                    col += j - i;
                    i = j;
                } else {
                    return Err(err(tl, tc, "stray `-`; expected `->` or a negative integer"));
                }
            }
            _ if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let n = s
                    .parse::<i64>()
                    .map_err(|_| err(tl, tc, format!("integer out of range: {s}")))?;
                push!(Tok::Int(n), tl, tc);
                col += j - i;
                i = j;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let advance = j - i;
                // E and D fuse with a directly following sign into obligation heads;
                // `E->…` keeps the arrow intact.
                let compound = if (word == "E" || word == "D") && j < chars.len() {
                    match chars[j] {
                        '+' => Some(if word == "E" { Tok::FutEq } else { Tok::FutNeq }),
                        '-' if !(j + 1 < chars.len() && chars[j + 1] == '>') => {
                            Some(if word == "E" { Tok::PastEq } else { Tok::PastNeq })
                        }
                        _ => None,
                    }
                } else {
                    None
                };
                if let Some(tok) = compound {
                    push!(tok, tl, tc);
                    col += advance + 1;
                    i = j + 1;
                    continue;
                }
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "eq" => Tok::Eq,
                    "env" => Tok::Env,
                    "sys" => Tok::Sys,
                    "bool" => Tok::Bool,
                    "data" => Tok::Data,
                    "formula" => Tok::FormulaKw,
                    "X" => Tok::X,
                    "Y" => Tok::Y,
                    "WX" => Tok::Wx,
                    "WY" => Tok::Wy,
                    "F" => Tok::F,
                    "G" => Tok::G,
                    "O" => Tok::O,
                    "H" => Tok::H,
                    "U" => Tok::U,
                    "S" => Tok::S,
                    "R" => Tok::R,
                    "T" => Tok::T,
                    _ => Tok::Ident(word),
                };
                push!(tok, tl, tc);
                col += advance;
                i = j;
            }
            _ => return Err(err(tl, tc, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    sig: Signature,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        let (l, c) = self.here();
        match self.bump() {
            Some(s) if &s.tok == want => Ok(()),
            Some(s) => Err(err(s.line, s.col, format!("expected {what}, found {}", s.tok.describe()))),
            None => Err(err(l, c, format!("expected {what}, found end of input"))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, usize, usize), ParseError> {
        let (l, c) = self.here();
        match self.bump() {
            Some(Spanned { tok: Tok::Ident(s), line, col }) => Ok((s, line, col)),
            Some(s) => Err(err(s.line, s.col, format!("expected {what}, found {}", s.tok.describe()))),
            None => Err(err(l, c, format!("expected {what}, found end of input"))),
        }
    }

    fn parse_decls(&mut self) -> Result<(), ParseError> {
        loop {
            let owner = match self.peek() {
                Some(Tok::Env) => Owner::Env,
                Some(Tok::Sys) => Owner::Sys,
                _ => return Ok(()),
            };
            self.bump();
            let kind = {
                let (l, c) = self.here();
                match self.bump() {
                    Some(Spanned { tok: Tok::Bool, .. }) => VarKind::Bool,
                    Some(Spanned { tok: Tok::Data, .. }) => VarKind::Data,
                    Some(s) => {
                        return Err(err(
                            s.line,
                            s.col,
                            format!("expected `bool` or `data`, found {}", s.tok.describe()),
                        ))
                    }
                    None => return Err(err(l, c, "expected `bool` or `data`, found end of input")),
                }
            };
            loop {
                let (name, l, c) = self.expect_ident("a variable name")?;
                self.sig
                    .declare(owner, kind, &name)
                    .map_err(|m| err(l, c, m))?;
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.bump();
                    }
                    _ => break,
                }
            }
            self.expect(&Tok::Semi, "`;` after declarations")?;
        }
    }

    fn check_data(&self, name: &str, l: usize, c: usize) -> Result<(), ParseError> {
        match self.sig.lookup(name) {
            Some((_, VarKind::Data)) => Ok(()),
            Some((_, VarKind::Bool)) => {
                Err(err(l, c, format!("`{name}` is a boolean variable, but a data variable is required here")))
            }
            None => Err(err(l, c, format!("undeclared variable `{name}`"))),
        }
    }

    fn parse_expr(&mut self) -> Result<Formula, ParseError> {
        self.parse_implies()
    }

    fn parse_implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_or()?;
        if let Some(Tok::Arrow) = self.peek() {
            self.bump();
            let rhs = self.parse_implies()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_and()?;
        while let Some(Tok::Or) = self.peek() {
            self.bump();
            let rhs = self.parse_and()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_temporal()?;
        while let Some(Tok::And) = self.peek() {
            self.bump();
            let rhs = self.parse_temporal()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn parse_temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_unary()?;
        let op = match self.peek() {
            Some(Tok::U) => Tok::U,
            Some(Tok::S) => Tok::S,
            Some(Tok::R) => Tok::R,
            Some(Tok::T) => Tok::T,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.parse_temporal()?;
        Ok(match op {
            Tok::U => Formula::Until(Box::new(lhs), Box::new(rhs)),
            Tok::S => Formula::Since(Box::new(lhs), Box::new(rhs)),
            Tok::R => Formula::Release(Box::new(lhs), Box::new(rhs)),
            _ => Formula::Trigger(Box::new(lhs), Box::new(rhs)),
        })
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        let wrap = match self.peek() {
            Some(Tok::Not) => Some(Formula::not as fn(Formula) -> Formula),
            Some(Tok::X) => Some(Formula::next as fn(Formula) -> Formula),
            Some(Tok::Y) => Some(Formula::prev as fn(Formula) -> Formula),
            Some(Tok::Wx) => Some((|f| Formula::WeakNext(Box::new(f))) as fn(Formula) -> Formula),
            Some(Tok::Wy) => Some((|f| Formula::WeakPrev(Box::new(f))) as fn(Formula) -> Formula),
            Some(Tok::F) => Some(Formula::finally as fn(Formula) -> Formula),
            Some(Tok::G) => Some(Formula::globally as fn(Formula) -> Formula),
            Some(Tok::O) => Some(Formula::once as fn(Formula) -> Formula),
            Some(Tok::H) => Some(Formula::historically as fn(Formula) -> Formula),
            _ => None,
        };
        if let Some(wrap) = wrap {
            self.bump();
            let inner = self.parse_unary()?;
            return Ok(wrap(inner));
        }
        self.parse_atom()
    }

    fn parse_obligation(&mut self, dir: Dir, neq: bool) -> Result<Formula, ParseError> {
        self.expect(&Tok::LParen, "`(`")?;
        let (x, xl, xc) = self.expect_ident("a data variable")?;
        self.check_data(&x, xl, xc)?;
        self.expect(&Tok::Comma, "`,`")?;
        let (y, yl, yc) = self.expect_ident("a data variable")?;
        self.check_data(&y, yl, yc)?;
        self.expect(&Tok::Semi, "`;` before the nested formula")?;
        let nested = self.parse_expr()?;
        self.expect(&Tok::RParen, "`)`")?;
        Ok(Formula::Oblig { dir, neq, x, y, nested: Box::new(nested) })
    }

    fn parse_atom(&mut self) -> Result<Formula, ParseError> {
        let (l, c) = self.here();
        match self.bump() {
            Some(Spanned { tok: Tok::True, .. }) => Ok(Formula::True),
            Some(Spanned { tok: Tok::False, .. }) => Ok(Formula::False),
            Some(Spanned { tok: Tok::LParen, .. }) => {
                let inner = self.parse_expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Spanned { tok: Tok::Eq, .. }) => {
                self.expect(&Tok::LParen, "`(`")?;
                let (x, xl, xc) = self.expect_ident("a data variable")?;
                self.check_data(&x, xl, xc)?;
                self.expect(&Tok::Comma, "`,`")?;
                let (jl, jc) = self.here();
                let j = match self.bump() {
                    Some(Spanned { tok: Tok::Int(n), .. }) => n,
                    Some(s) => {
                        return Err(err(s.line, s.col, format!("expected an integer offset, found {}", s.tok.describe())))
                    }
                    None => return Err(err(jl, jc, "expected an integer offset, found end of input")),
                };
                let j = i32::try_from(j).map_err(|_| err(jl, jc, format!("offset out of range: {j}")))?;
                self.expect(&Tok::Comma, "`,`")?;
                let (y, yl, yc) = self.expect_ident("a data variable")?;
                self.check_data(&y, yl, yc)?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Formula::LocalEq { x, j, y })
            }
            Some(Spanned { tok: Tok::FutEq, .. }) => self.parse_obligation(Dir::Future, false),
            Some(Spanned { tok: Tok::FutNeq, .. }) => self.parse_obligation(Dir::Future, true),
            Some(Spanned { tok: Tok::PastEq, .. }) => self.parse_obligation(Dir::Past, false),
            Some(Spanned { tok: Tok::PastNeq, .. }) => self.parse_obligation(Dir::Past, true),
            Some(Spanned { tok: Tok::Ident(name), line, col }) => match self.sig.lookup(&name) {
                Some((_, VarKind::Bool)) => Ok(Formula::Bool(name)),
                Some((_, VarKind::Data)) => Err(err(
                    line,
                    col,
                    format!("`{name}` is a data variable; data variables occur only inside eq(...) and obligations"),
                )),
                None => Err(err(line, col, format!("undeclared variable `{name}`"))),
            },
            Some(s) => Err(err(s.line, s.col, format!("expected a formula, found {}", s.tok.describe()))),
            None => Err(err(l, c, "expected a formula, found end of input")),
        }
    }
}

/// Parses a complete formula file: declarations, then `formula: EXPR`.
pub fn parse_formula(text: &str) -> Result<(Signature, Formula), ParseError> {
    let toks = lex(text)?;
    let (end_line, end_col) = toks
        .last()
        .map(|s| (s.line, s.col + 1))
        .unwrap_or((1, 1));
    let mut p = Parser { toks, pos: 0, sig: Signature::new(), end_line, end_col };
    p.parse_decls()?;
    p.expect(&Tok::FormulaKw, "`formula`")?;
    p.expect(&Tok::Colon, "`:` after `formula`")?;
    let f = p.parse_expr()?;
    if let Some(s) = p.bump() {
        return Err(err(s.line, s.col, format!("unexpected {} after the formula", s.tok.describe())));
    }
    Ok((p.sig, f))
}

/// Parses just an expression against an existing signature. Used by tests and
/// by tooling that already holds declarations.
pub fn parse_expr_with(sig: &Signature, text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let (end_line, end_col) = toks
        .last()
        .map(|s| (s.line, s.col + 1))
        .unwrap_or((1, 1));
    let mut p = Parser { toks, pos: 0, sig: sig.clone(), end_line, end_col };
    let f = p.parse_expr()?;
    if let Some(s) = p.bump() {
        return Err(err(s.line, s.col, format!("unexpected {} after the formula", s.tok.describe())));
    }
    Ok(f)
}
