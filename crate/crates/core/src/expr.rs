//! Parser for rational expressions: `+ - * /`, `^` with integer exponents,
//! parentheses, integer literals, variables and field generators.

use thiserror::Error;

use crate::algebra::Coeff;
use crate::field::{DifferenceField, FieldElem};
use crate::poly::{Poly, RatFunc, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{msg} at offset {pos}")]
pub struct ParseError {
    /// Byte offset into the parsed text.
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let b: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < b.len() {
        let (pos, c) = b[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].1.is_ascii_digit() {
                i += 1;
            }
            out.push((pos, Tok::Num(b[start..i].iter().map(|x| x.1).collect())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].1.is_alphanumeric() || b[i].1 == '_' || b[i].1 == '\'') {
                i += 1;
            }
            out.push((pos, Tok::Ident(b[start..i].iter().map(|x| x.1).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return err(pos, format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    vars: &'a Vars,
    gens: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                let d = self.unary()?;
                match acc.div(&d) {
                    Ok(q) => acc = q,
                    Err(_) => return err(pos, "division by zero"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                let e: i32 = match n.parse() {
                    Ok(e) if e <= 10_000 => e,
                    _ => return err(pos, "exponent too large"),
                };
                let e = if neg { -e } else { e };
                base.pow(e).or_else(|_| err(pos, "zero raised to a negative power"))
            }
            _ => err(pos, "expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                let v: num_bigint::BigInt = n.parse().expect("digits");
                Ok(RatFunc::constant(self.vars, FieldElem::from_rational(v.into())))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if self.vars.contains(&name) {
                    Ok(RatFunc::var(self.vars, &name).expect("known variable"))
                } else if let Some(i) = self.gens.iter().position(|g| *g == name) {
                    Ok(RatFunc::constant(self.vars, FieldElem::generator(i)))
                } else {
                    err(pos, format!("unknown symbol `{name}`"))
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return err(self.pos(), "expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => err(pos, format!("unexpected `{c}`")),
            None => err(pos, "unexpected end of expression"),
        }
    }
}

/// Parses a rational function in `vars` with coefficients in the field
/// whose generators are `gens`.
pub fn parse_with(text: &str, vars: &Vars, gens: &[String]) -> Result<RatFunc, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), vars, gens };
    let r = p.expr()?;
    if p.at != p.toks.len() {
        return err(p.pos(), "unexpected trailing input");
    }
    Ok(r)
}

pub fn parse_ratfunc(text: &str, vars: &Vars, field: &DifferenceField) -> Result<RatFunc, ParseError> {
    parse_with(text, vars, field.names())
}

pub fn parse_poly(text: &str, vars: &Vars, field: &DifferenceField) -> Result<Poly, ParseError> {
    let r = parse_ratfunc(text, vars, field)?;
    if !r.is_polynomial() {
        return err(0, "expected a polynomial");
    }
    Ok(r.numer().clone())
}

/// Parses an element of `ℚ(gens)`.
pub fn parse_field_elem(text: &str, gens: &[String]) -> Result<FieldElem, ParseError> {
    let r = parse_with(text, &Vars::empty(), gens)?;
    Ok(r.constant_value().unwrap_or_else(FieldElem::zero))
}
