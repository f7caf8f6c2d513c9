//! The text grammar shared by every export: integers and fractions `a/b`,
//! monomials `c*x^k*y^m` joined by ` + ` / ` - `, and rational functions
//! `(num)/(den)`. Formatting is canonical, so `format(parse(s)) == s` for
//! any string this module produced.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::context::Ctx;
use super::poly::{MPoly, Monomial};
use super::rat::{format_rat, Rat};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

fn format_monomial(ctx: &Ctx, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (v, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ctx.vars()[v].clone()),
            _ => parts.push(format!("{}^{}", ctx.vars()[v], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if m.is_one() {
                format_rat(&abs)
            } else if abs.is_one() {
                format_monomial(self.ctx(), m)
            } else {
                format!("{}*{}", format_rat(&abs), format_monomial(self.ctx(), m))
            };
            match (i, neg) {
                (0, false) => f.write_str(&body)?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num())
        } else {
            write!(f, "({})/({})", self.num(), self.den())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(s[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ctx: &'a Ctx,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.at(), msg: msg.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.checked_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.checked_mul(&self.unary()?)?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                acc = acc.checked_div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.pos += 1;
                i32::try_from(n).or_else(|_| self.err("exponent too large"))?
            }
            _ => return self.err("expected integer exponent"),
        };
        base.pow(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(self.ctx, Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                RatFunc::var(self.ctx, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            _ => self.err("expected number, variable or `(`"),
        }
    }
}

/// Parses an expression in the shared grammar over `ctx`.
pub fn parse_ratfunc(s: &str, ctx: &Ctx) -> Result<RatFunc> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, ctx, len: s.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses an expression that must be a polynomial.
pub fn parse_poly(s: &str, ctx: &Ctx) -> Result<MPoly> {
    let f = parse_ratfunc(s, ctx)?;
    if !f.is_polynomial() {
        return Err(Error::Parse { pos: 0, msg: format!("`{s}` is not a polynomial") });
    }
    Ok(f.num().clone())
}

/// Identifiers occurring in `s`, in order of first appearance.
pub fn identifiers(s: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (_, t) in tokenize(s)? {
        if let Tok::Ident(name) = t {
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    #[test]
    fn formats_canonically() {
        let c = Ctx::new(&["z1", "z2", "h"]);
        let f = parse_ratfunc("-h + 1/2*z1^2*z2 - 3", &c).unwrap();
        assert_eq!(f.to_string(), "1/2*z1^2*z2 - h - 3");
        let g = parse_ratfunc("(z1 - z2)/(2*z1 + 4*h)", &c).unwrap();
        assert_eq!(g.to_string(), "(1/2*z1 - 1/2*z2)/(z1 + 2*h)");
        assert_eq!(parse_ratfunc("0", &c).unwrap().to_string(), "0");
        assert_eq!(RatFunc::constant(&c, rat(-3, 4)).to_string(), "-3/4");
    }

    #[test]
    fn parses_operators() {
        let c = Ctx::new(&["p"]);
        let p = RatFunc::var(&c, "p").unwrap();
        assert_eq!(parse_ratfunc("p^-2", &c).unwrap(), p.pow(-2).unwrap());
        assert_eq!(parse_ratfunc("-(p)*2", &c).unwrap(), p.scale(&int(-2)));
        assert_eq!(parse_ratfunc("1/2*p", &c).unwrap(), p.scale(&rat(1, 2)));
    }

    #[test]
    fn errors() {
        let c = Ctx::new(&["p"]);
        assert!(matches!(parse_ratfunc("q", &c), Err(Error::UnknownVariable(_))));
        assert!(matches!(parse_ratfunc("p +", &c), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("(p", &c), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("p $", &c), Err(Error::Parse { pos: 2, .. })));
        assert_eq!(parse_ratfunc("1/(p - p)", &c), Err(Error::ZeroDenominator));
    }

    #[test]
    fn identifiers_in_order() {
        assert_eq!(identifiers("q*p + h - q").unwrap(), vec!["q", "p", "h"]);
    }
}
