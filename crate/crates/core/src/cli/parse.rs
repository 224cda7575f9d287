//! Recursive-descent parser for polynomials and vector fields.
//!
//! ```text
//! expr   := [+-]? term (('+' | '-') term)*
//! term   := factor (('*' factor) | ('/' uint))*
//! factor := atom ('^' uint)*
//! atom   := uint | variable | '(' expr ')'
//! ```
//!
//! Division is only by integer literals, so `y/2` means `1/2*y` and
//! `x/(y)` is rejected. A vector field is a comma-separated list of
//! expressions, one per variable.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::foliation::{Mode, VectorField};
use crate::polyring::{Polynomial, Rational, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                column += 1;
            }
            Tok::Num(s.parse().expect("digits"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars
                .peek()
                .filter(|d| d.is_ascii_alphanumeric() || **d == '_')
            {
                s.push(d);
                chars.next();
                column += 1;
            }
            Tok::Ident(s)
        } else {
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                other => {
                    return Err(Error::Syntax {
                        line: l,
                        column: col,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            chars.next();
            column += 1;
            t
        };
        out.push(Token {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Ring, text: &str) -> Result<Self> {
        Ok(Parser {
            ring,
            tokens: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> Error {
        let t = &self.tokens[self.pos];
        Error::Syntax {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        self.error_here(format!(
            "expected {wanted}, found {}",
            self.peek().describe()
        ))
    }

    fn uint(&mut self, wanted: &str) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.advance();
                true
            }
            Tok::Plus => {
                self.advance();
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.advance();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.advance();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.advance();
                    acc = &acc * &self.factor()?;
                }
                Tok::Slash => {
                    self.advance();
                    let d = self.uint("an integer literal after `/`")?;
                    if d.is_zero() {
                        return Err(Error::ZeroDenominator);
                    }
                    acc = acc.scale(&Rational::new(BigInt::from(1), d));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let mut base = self.atom()?;
        while let Tok::Caret = self.peek() {
            self.advance();
            let e = self.uint("an exponent")?;
            let e = e
                .to_u32()
                .ok_or_else(|| self.error_here(format!("exponent {e} is too large")))?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.advance();
                Ok(self.ring.constant(Rational::from_integer(n)))
            }
            Tok::Ident(name) => {
                self.advance();
                let var = self
                    .ring
                    .index_of(&name)
                    .ok_or(Error::UnknownVariable(name))?;
                Ok(self.ring.var(var))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                match self.peek() {
                    Tok::RParen => {
                        self.advance();
                        Ok(inner)
                    }
                    _ => Err(self.unexpected("`)`")),
                }
            }
            _ => Err(self.unexpected("a number, variable or `(`")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => Err(self.unexpected("an operator or end of input")),
        }
    }
}

pub fn parse_polynomial(ring: &Ring, text: &str) -> Result<Polynomial> {
    let mut p = Parser::new(ring, text)?;
    let poly = p.expr()?;
    p.finish()?;
    Ok(poly)
}

/// Parses comma-separated component expressions.
pub fn parse_components(ring: &Ring, text: &str) -> Result<Vec<Polynomial>> {
    let mut p = Parser::new(ring, text)?;
    let mut out = vec![p.expr()?];
    while let Tok::Comma = p.peek() {
        p.advance();
        out.push(p.expr()?);
    }
    p.finish()?;
    Ok(out)
}

/// Parses a vector field with one component per variable. Without an
/// explicit mode the field's default mode is used.
pub fn parse_vector_field(ring: &Ring, text: &str, mode: Option<Mode>) -> Result<VectorField> {
    let components = parse_components(ring, text)?;
    if components.len() != ring.nvars() {
        return Err(Error::InvalidInput(format!(
            "vector field has {} components but {} variables are declared",
            components.len(),
            ring.nvars()
        )));
    }
    match mode {
        Some(m) => VectorField::new(components, m),
        None => VectorField::with_default_mode(components),
    }
}
