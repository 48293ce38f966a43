//! Text grammar for polynomials: integer or `a/b` coefficients, variables, `+ - * ^`
//! and parentheses. Printing is canonical and parses back to the same value.

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::RingRef;
use crate::scalar::{parse_scalar, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
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
            out.push(Token::Num(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` at offset {i}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a RingRef,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut first = true;
        loop {
            let negative = if self.eat_op('-') {
                true
            } else if self.eat_op('+') {
                false
            } else if first {
                false
            } else {
                break;
            };
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.eat_op('*') {
            let f = self.factor()?;
            acc = acc.try_mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| Error::Parse(format!("exponent `{n}` too large")))?;
                    if e > u16::MAX as u32 {
                        return Err(Error::ExponentOverflow);
                    }
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse("expected a non-negative integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                let mut text = n;
                if self.eat_op('/') {
                    match self.tokens.get(self.pos).cloned() {
                        Some(Token::Num(d)) => {
                            self.pos += 1;
                            text = format!("{text}/{d}");
                        }
                        _ => return Err(Error::Parse("expected a denominator after `/`".into())),
                    }
                }
                Ok(Polynomial::constant(self.ring, parse_scalar(self.ring.field(), &text)?))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Polynomial::var(self.ring, &name)
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat_op(')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                Ok(inner)
            }
            Some(tok) => Err(Error::Parse(format!("unexpected token {tok:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse_polynomial(ring: &RingRef, text: &str) -> Result<Polynomial> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { ring, tokens, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

fn format_monomial(ring: &RingRef, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.var_name(i).to_string()),
            _ => parts.push(format!("{}^{}", ring.var_name(i), e)),
        }
    }
    parts.join("*")
}

fn format_term(ring: &RingRef, m: &Monomial, c: &Scalar) -> String {
    let mono = format_monomial(ring, m);
    if mono.is_empty() {
        c.to_string()
    } else if c.is_one() {
        mono
    } else {
        format!("{c}*{mono}")
    }
}

pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let ring = p.ring();
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let (neg, abs) = if c.is_negative() { (true, c.neg()) } else { (false, c.clone()) };
        let body = format_term(ring, m, &abs);
        match (k, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}
