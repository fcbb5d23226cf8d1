//! Reader for the canonical polynomial text (and anything a little looser:
//! parentheses, repeated factors, division by constants).

use num_bigint::BigInt;

use super::Poly;
use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().map_err(|_| Error::Parse(text.clone()))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<F: Field>(&mut self) -> Result<Poly<F>> {
        let mut acc = if self.eat('-') {
            -self.term::<F>()?
        } else {
            self.eat('+');
            self.term::<F>()?
        };
        loop {
            if self.eat('+') {
                acc = acc + self.term::<F>()?;
            } else if self.eat('-') {
                acc = acc - self.term::<F>()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<F: Field>(&mut self) -> Result<Poly<F>> {
        let mut acc = self.power::<F>()?;
        loop {
            if self.eat('*') {
                acc = acc * self.power::<F>()?;
            } else if self.eat('/') {
                let d = self.power::<F>()?;
                let c = d.as_constant().ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                if c.is_zero() {
                    return Err(Error::Parse("division by zero".into()));
                }
                acc = acc.scale(&c.inv());
            } else {
                return Ok(acc);
            }
        }
    }

    fn power<F: Field>(&mut self) -> Result<Poly<F>> {
        let base = self.atom::<F>()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse("expected exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom<F: Field>(&mut self) -> Result<Poly<F>> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let q = Rational::from_integer(n);
                let c = F::from_rational(&q).ok_or_else(|| Error::Parse("constant not in field".into()))?;
                Ok(Poly::constant(c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Poly::var(&name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr::<F>()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.atom::<F>()?)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses polynomial text such as `x^2 - 1/2*x*y + 3`. Variables are listed
/// in order of first appearance.
pub fn parse_poly<F: Field>(s: &str) -> Result<Poly<F>> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut p = Parser { toks: &toks, pos: 0 };
    let out = p.expr::<F>()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

/// Parses with a prescribed variable order.
pub fn parse_poly_in<F: Field>(s: &str, vars: &[&str]) -> Result<Poly<F>> {
    let p = parse_poly::<F>(s)?;
    let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    p.with_vars(&vars)
}
