//! Expression language for the product calculus.
//!
//! ```text
//! expr      := term (('+' | '-') term)*
//! term      := INT '*' atom | atom
//! atom      := IDENT
//!            | 'diamond(' expr ',' expr ')'
//!            | 'bulletL(' expr ',' expr ')'
//!            | 'wedge(' poly ',' expr ')'
//!            | 'dimpart(' expr ',' INT ')'
//!            | 'deg(' expr ')'
//!            | 'mult(' expr ',' IDENT ')'
//!            | '(' expr ')'
//! poly      := pterm (('+' | '-') pterm)*
//! pterm     := punary ('*' punary)*
//! punary    := '-' punary | ppow
//! ppow      := pprimary ('^' INT)?
//! pprimary  := INT | IDENT | '(' poly ')'
//! ```
//!
//! In a polynomial, identifiers are ring generators (`w`, `wx`, `wy`) or
//! `omega` for the polarization.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Ref(String),
    Scale(BigUint, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Diamond(Box<Expr>, Box<Expr>),
    BulletL(Box<Expr>, Box<Expr>),
    Wedge(Poly, Box<Expr>),
    DimPart(Box<Expr>, u32),
    Deg(Box<Expr>),
    Mult(Box<Expr>, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Poly {
    Int(BigUint),
    Var(String),
    Add(Box<Poly>, Box<Poly>),
    Sub(Box<Poly>, Box<Poly>),
    Mul(Box<Poly>, Box<Poly>),
    Neg(Box<Poly>),
    Pow(Box<Poly>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigUint),
    Ident(String),
    Punct(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            column += i - start;
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                column: c0,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            column += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
        } else if "()+-*^,".contains(c) {
            i += 1;
            column += 1;
            out.push(Token {
                tok: Tok::Punct(c),
                line: l0,
                column: c0,
            });
        } else {
            return Err(ParseError {
                line,
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: String) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError {
            line: t.line,
            column: t.column,
            message,
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", self.peek().tok))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.err(format!("expected {what}, found {t}")),
        }
    }

    fn small_int(&mut self) -> Result<u32, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => match u32::try_from(n) {
                Ok(v) => {
                    self.bump();
                    Ok(v)
                }
                Err(_) => self.err("integer too large".into()),
            },
            t => self.err(format!("expected an integer, found {t}")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        if let Tok::Int(n) = self.peek().tok.clone() {
            self.bump();
            if !self.eat('*') {
                return self.err(format!("expected `*` after integer {n}, found {}", self.peek().tok));
            }
            return Ok(Expr::Scale(n, Box::new(self.atom()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        let name = self.ident("a class name or function")?;
        if self.peek().tok != Tok::Punct('(') {
            return Ok(Expr::Ref(name));
        }
        let at = self.peek().clone();
        self.bump();
        let e = match name.as_str() {
            "diamond" | "bulletL" => {
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                if name == "diamond" {
                    Expr::Diamond(Box::new(a), Box::new(b))
                } else {
                    Expr::BulletL(Box::new(a), Box::new(b))
                }
            }
            "wedge" => {
                let p = self.poly()?;
                self.expect(',')?;
                Expr::Wedge(p, Box::new(self.expr()?))
            }
            "dimpart" => {
                let a = self.expr()?;
                self.expect(',')?;
                Expr::DimPart(Box::new(a), self.small_int()?)
            }
            "deg" => Expr::Deg(Box::new(self.expr()?)),
            "mult" => {
                let a = self.expr()?;
                self.expect(',')?;
                Expr::Mult(Box::new(a), self.ident("a point name")?)
            }
            _ => {
                return Err(ParseError {
                    line: at.line,
                    column: at.column - name.chars().count(),
                    message: format!("unknown function `{name}`"),
                })
            }
        };
        self.expect(')')?;
        Ok(e)
    }

    fn poly(&mut self) -> Result<Poly, ParseError> {
        let mut lhs = self.pterm()?;
        loop {
            if self.eat('+') {
                lhs = Poly::Add(Box::new(lhs), Box::new(self.pterm()?));
            } else if self.eat('-') {
                lhs = Poly::Sub(Box::new(lhs), Box::new(self.pterm()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn pterm(&mut self) -> Result<Poly, ParseError> {
        let mut lhs = self.punary()?;
        while self.eat('*') {
            lhs = Poly::Mul(Box::new(lhs), Box::new(self.punary()?));
        }
        Ok(lhs)
    }

    fn punary(&mut self) -> Result<Poly, ParseError> {
        if self.eat('-') {
            return Ok(Poly::Neg(Box::new(self.punary()?)));
        }
        let base = self.pprimary()?;
        if self.eat('^') {
            return Ok(Poly::Pow(Box::new(base), self.small_int()?));
        }
        Ok(base)
    }

    fn pprimary(&mut self) -> Result<Poly, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Poly::Int(n))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Poly::Var(s))
            }
            Tok::Punct('(') => {
                self.bump();
                let p = self.poly()?;
                self.expect(')')?;
                Ok(p)
            }
            t => self.err(format!("expected a polynomial, found {t}")),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return p.err(format!("unexpected {} after expression", p.peek().tok));
    }
    Ok(e)
}

pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.poly()?;
    if p.peek().tok != Tok::End {
        return p.err(format!("unexpected {} after polynomial", p.peek().tok));
    }
    Ok(e)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Ref(s) => f.write_str(s),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let op = if matches!(self, Expr::Add(..)) { '+' } else { '-' };
                write!(f, "{a} {op} ")?;
                match **b {
                    Expr::Add(..) | Expr::Sub(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            Expr::Scale(k, x) => match **x {
                Expr::Add(..) | Expr::Sub(..) | Expr::Scale(..) => write!(f, "{k}*({x})"),
                _ => write!(f, "{k}*{x}"),
            },
            Expr::Diamond(a, b) => write!(f, "diamond({a}, {b})"),
            Expr::BulletL(a, b) => write!(f, "bulletL({a}, {b})"),
            Expr::Wedge(p, e) => write!(f, "wedge({p}, {e})"),
            Expr::DimPart(e, l) => write!(f, "dimpart({e}, {l})"),
            Expr::Deg(e) => write!(f, "deg({e})"),
            Expr::Mult(e, p) => write!(f, "mult({e}, {p})"),
        }
    }
}

impl Poly {
    fn level(&self) -> u8 {
        match self {
            Poly::Add(..) | Poly::Sub(..) => 0,
            Poly::Mul(..) => 1,
            Poly::Neg(..) => 2,
            Poly::Pow(..) => 3,
            Poly::Int(_) | Poly::Var(_) => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Poly::Int(n) => write!(f, "{n}"),
            Poly::Var(s) => f.write_str(s),
            Poly::Add(a, b) | Poly::Sub(a, b) => {
                a.write_at(f, 0)?;
                f.write_str(if matches!(self, Poly::Add(..)) { " + " } else { " - " })?;
                b.write_at(f, 1)
            }
            Poly::Mul(a, b) => {
                a.write_at(f, 1)?;
                f.write_str("*")?;
                b.write_at(f, 2)
            }
            Poly::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 2)
            }
            Poly::Pow(a, e) => {
                a.write_at(f, 4)?;
                write!(f, "^{e}")
            }
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
