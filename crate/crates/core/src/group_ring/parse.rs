//! Parser for the presentation file format:
//!
//! ```text
//! # comment
//! p=3; n=2; gens=1;
//! rel: p
//! rel: y - 2*x + 1
//! ```
//!
//! Statements are separated by `;` or newlines. A relation row lists one
//! entry per generator, separated by `|`. Each entry is a sum of monomials
//! `c*x^e*y^f` with integer `c` and signed integer exponents; the bare
//! symbol `p` stands for the prime. Variables are `x, y` (rank 2), `x`
//! (rank 1) or `x1..xn`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::primes::ensure_prime;

use super::{variable_names, LaurentPoly, ModulePresentation};

/// Exponents beyond this magnitude are rejected.
const MAX_EXPONENT: i64 = 1 << 31;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Pipe,
    Colon,
    Equals,
    LParen,
    RParen,
    Sep,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let ch = chars[i];
        let (start_line, start_col) = (line, col);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        match ch {
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
                continue;
            }
            '\n' => {
                push(&mut out, Tok::Sep);
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            ';' => push(&mut out, Tok::Sep),
            '+' => push(&mut out, Tok::Plus),
            '-' => push(&mut out, Tok::Minus),
            '*' => push(&mut out, Tok::Star),
            '^' => push(&mut out, Tok::Caret),
            '|' => push(&mut out, Tok::Pipe),
            ':' => push(&mut out, Tok::Colon),
            '=' => push(&mut out, Tok::Equals),
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().collect();
                push(&mut out, Tok::Int(digits.parse().expect("ascii digits")));
                col += j - i;
                i = j;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                push(&mut out, Tok::Ident(chars[i..j].iter().collect()));
                col += j - i;
                i = j;
                continue;
            }
            other => return Err(syntax(line, col, format!("unexpected character {other:?}"))),
        }
        i += 1;
        col += 1;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    p: Option<u64>,
    n: Option<usize>,
    gens: Option<usize>,
    relations: Vec<Vec<LaurentPoly>>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = self.peek();
        syntax(t.line, t.column, message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.error_here(format!("expected {what}")))
        }
    }

    fn program(&mut self) -> Result<()> {
        loop {
            match self.peek().tok.clone() {
                Tok::Eof => return Ok(()),
                Tok::Sep => {
                    self.next();
                }
                Tok::Ident(name) => {
                    self.statement(&name)?;
                    match self.peek().tok {
                        Tok::Sep | Tok::Eof => {}
                        _ => return Err(self.error_here("expected `;` or end of line")),
                    }
                }
                _ => return Err(self.error_here("expected a header assignment or `rel:`")),
            }
        }
    }

    fn statement(&mut self, name: &str) -> Result<()> {
        let head = self.next();
        match name {
            "rel" => {
                self.expect(Tok::Colon, "`:` after `rel`")?;
                let (Some(_), Some(n), gens) = (self.p, self.n, self.gens) else {
                    return Err(syntax(
                        head.line,
                        head.column,
                        "`p` and `n` must be set before the first relation",
                    ));
                };
                let gens = gens.unwrap_or(1);
                self.gens = Some(gens);
                let mut row = vec![self.expression(n)?];
                while self.peek().tok == Tok::Pipe {
                    self.next();
                    row.push(self.expression(n)?);
                }
                if row.len() != gens {
                    return Err(syntax(
                        head.line,
                        head.column,
                        format!("relation has {} entries but gens = {gens}", row.len()),
                    ));
                }
                self.relations.push(row);
                Ok(())
            }
            "p" | "n" | "gens" => {
                self.expect(Tok::Equals, "`=`")?;
                let value_tok = self.peek().clone();
                let Tok::Int(v) = self.next().tok else {
                    return Err(syntax(
                        value_tok.line,
                        value_tok.column,
                        "expected an integer",
                    ));
                };
                let at = |msg: String| syntax(value_tok.line, value_tok.column, msg);
                if !self.relations.is_empty() {
                    return Err(syntax(
                        head.line,
                        head.column,
                        format!("`{name}` must precede the relations"),
                    ));
                }
                let v = v
                    .to_u64()
                    .ok_or_else(|| at(format!("{name} is too large")))?;
                match name {
                    "p" => {
                        if self.p.is_some() {
                            return Err(syntax(head.line, head.column, "`p` set twice"));
                        }
                        ensure_prime(v).map_err(|_| at(format!("p = {v} is not prime")))?;
                        self.p = Some(v);
                    }
                    "n" => {
                        if self.n.is_some() {
                            return Err(syntax(head.line, head.column, "`n` set twice"));
                        }
                        if v == 0 || v > 16 {
                            return Err(at(format!("rank n = {v} is outside 1..=16")));
                        }
                        self.n = Some(v as usize);
                    }
                    _ => {
                        if self.gens.is_some() {
                            return Err(syntax(head.line, head.column, "`gens` set twice"));
                        }
                        if v == 0 || v > 1 << 16 {
                            return Err(at(format!("gens = {v} is outside 1..=65536")));
                        }
                        self.gens = Some(v as usize);
                    }
                }
                Ok(())
            }
            other => Err(syntax(
                head.line,
                head.column,
                format!("unknown statement `{other}`"),
            )),
        }
    }

    fn expression(&mut self, n: usize) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero(n);
        let mut sign = match self.peek().tok {
            Tok::Minus => {
                self.next();
                -1
            }
            Tok::Plus => {
                self.next();
                1
            }
            _ => 1,
        };
        loop {
            let term = self.term(n)?;
            acc = if sign < 0 {
                acc.sub(&term)
            } else {
                acc.add(&term)
            };
            sign = match self.peek().tok {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(acc),
            };
            self.next();
        }
    }

    fn term(&mut self, n: usize) -> Result<LaurentPoly> {
        let mut coeff = BigInt::one();
        let mut exps = vec![0i64; n];
        loop {
            let t = self.next();
            match t.tok {
                Tok::Int(v) => coeff *= v,
                Tok::Ident(name) if name == "p" => coeff *= BigInt::from(self.p.expect("p is set")),
                Tok::Ident(name) => {
                    let idx = variable_index(&name, n).ok_or_else(|| {
                        syntax(t.line, t.column, format!("unknown symbol `{name}`"))
                    })?;
                    let e = if self.peek().tok == Tok::Caret {
                        self.next();
                        self.exponent()?
                    } else {
                        1
                    };
                    exps[idx] = exps[idx]
                        .checked_add(e)
                        .filter(|v| v.abs() <= MAX_EXPONENT)
                        .ok_or_else(|| syntax(t.line, t.column, "exponent overflow"))?;
                }
                _ => {
                    return Err(syntax(
                        t.line,
                        t.column,
                        "expected an integer, `p` or a variable",
                    ))
                }
            }
            if self.peek().tok != Tok::Star {
                break;
            }
            self.next();
        }
        Ok(LaurentPoly::monomial(exps, coeff))
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek().tok == Tok::LParen;
        if paren {
            self.next();
        }
        let negative = self.peek().tok == Tok::Minus;
        if negative {
            self.next();
        }
        let t = self.next();
        let Tok::Int(v) = t.tok else {
            return Err(syntax(t.line, t.column, "expected an integer exponent"));
        };
        let v = v
            .to_i64()
            .filter(|v| *v <= MAX_EXPONENT)
            .ok_or_else(|| syntax(t.line, t.column, "exponent overflow"))?;
        if paren {
            self.expect(Tok::RParen, "`)`")?;
        }
        Ok(if negative { -v } else { v })
    }
}

fn variable_index(name: &str, n: usize) -> Option<usize> {
    if let Some(i) = variable_names(n).iter().position(|v| v == name) {
        return Some(i);
    }
    let i: usize = name.strip_prefix('x')?.parse().ok()?;
    (1..=n).contains(&i).then(|| i - 1)
}

/// Parses the presentation grammar described in the module docs.
pub fn parse_presentation(text: &str) -> Result<ModulePresentation> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        p: None,
        n: None,
        gens: None,
        relations: Vec::new(),
    };
    parser.program()?;
    let end = parser.peek().clone();
    let p = parser
        .p
        .ok_or_else(|| syntax(end.line, end.column, "missing `p=`"))?;
    let n = parser
        .n
        .ok_or_else(|| syntax(end.line, end.column, "missing `n=`"))?;
    ModulePresentation::new(p, n, parser.gens.unwrap_or(1), parser.relations)
}
