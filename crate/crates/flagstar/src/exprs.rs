//! Tiny expression grammar for momentum polynomials on the command line.
//!
//! `expr := term (('+'|'-') term)*`, `term := factor ('*' factor)*`,
//! `factor := rational | ident | '(' expr ')'` where identifiers are basis
//! element names (`E12`, `H1`, ...) and rationals are `3`, `-1/2`, etc.
//! No floating literals.

use crate::flag::FlagModel;
use crate::poly::SymbolPoly;
use crate::scalar::GaussianRational;
use crate::{Error, Result};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Star,
    Plus,
    Minus,
    Slash,
    Open,
    Close,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn next(&mut self) -> Result<Tok> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(Tok::End);
        }
        let c = self.src[self.pos];
        self.pos += 1;
        match c {
            b'*' => Ok(Tok::Star),
            b'+' => Ok(Tok::Plus),
            b'-' => Ok(Tok::Minus),
            b'/' => Ok(Tok::Slash),
            b'(' => Ok(Tok::Open),
            b')' => Ok(Tok::Close),
            b'0'..=b'9' => {
                let mut v = (c - b'0') as i64;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    v = v * 10 + (self.src[self.pos] - b'0') as i64;
                    self.pos += 1;
                }
                Ok(Tok::Num(v))
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                let start = self.pos - 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(Tok::Ident(
                    std::str::from_utf8(&self.src[start..self.pos])
                        .expect("ascii")
                        .to_string(),
                ))
            }
            other => Err(Error::Parse(format!(
                "unexpected character `{}`",
                other as char
            ))),
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Tok,
    model: &'a FlagModel,
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<()> {
        self.current = self.lexer.next()?;
        Ok(())
    }

    fn expr(&mut self) -> Result<SymbolPoly> {
        let mut acc = self.term()?;
        loop {
            match self.current {
                Tok::Plus => {
                    self.advance()?;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.advance()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SymbolPoly> {
        let mut acc = self.factor()?;
        while self.current == Tok::Star {
            self.advance()?;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SymbolPoly> {
        let m = self.model.m;
        match self.current.clone() {
            Tok::Num(n) => {
                self.advance()?;
                let scalar = if self.current == Tok::Slash {
                    self.advance()?;
                    let Tok::Num(d) = self.current.clone() else {
                        return Err(Error::Parse("expected denominator after `/`".into()));
                    };
                    if d == 0 {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    self.advance()?;
                    GaussianRational::from_ratio(n, d)
                } else {
                    GaussianRational::from_int(n)
                };
                Ok(SymbolPoly::constant(m, scalar))
            }
            Tok::Minus => {
                self.advance()?;
                Ok(self.factor()?.neg())
            }
            Tok::Ident(name) => {
                self.advance()?;
                let idx = self
                    .model
                    .sl
                    .index_of_name(&name)
                    .ok_or_else(|| Error::Parse(format!("unknown basis element `{name}`")))?;
                Ok(self.model.mu[idx].clone())
            }
            Tok::Open => {
                self.advance()?;
                let inner = self.expr()?;
                if self.current != Tok::Close {
                    return Err(Error::Parse("expected `)`".into()));
                }
                self.advance()?;
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Evaluates an expression in momentum generators to a symbol polynomial.
pub fn parse_momentum_expr(src: &str, model: &FlagModel) -> Result<SymbolPoly> {
    let mut p = Parser {
        lexer: Lexer::new(src),
        current: Tok::End,
        model,
    };
    p.advance()?;
    let value = p.expr()?;
    if p.current != Tok::End {
        return Err(Error::Parse(format!(
            "trailing input at token {:?}",
            p.current
        )));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::FlagConfig;

    #[test]
    fn parses_generators_and_arithmetic() {
        let model = FlagModel::build(FlagConfig::projective(2)).unwrap();
        let e = model.sl.index_of_name("E12").unwrap();
        let f = model.sl.index_of_name("E21").unwrap();
        let h = model.sl.index_of_name("H1").unwrap();
        assert_eq!(parse_momentum_expr("E12", &model).unwrap(), model.mu[e]);
        let prod = parse_momentum_expr("E12*E21", &model).unwrap();
        assert_eq!(prod, model.mu[e].mul(&model.mu[f]));
        let mixed = parse_momentum_expr("1/2*H1*H1 + E12*E21 - 3", &model).unwrap();
        let expect = model.mu[h]
            .mul(&model.mu[h])
            .scale(&GaussianRational::from_ratio(1, 2))
            .add(&model.mu[e].mul(&model.mu[f]))
            .sub(&SymbolPoly::constant(1, GaussianRational::from_int(3)));
        assert_eq!(mixed, expect);
        let parens = parse_momentum_expr("2*(E12 + E21)", &model).unwrap();
        let expect2 = model.mu[e].add(&model.mu[f]).scale(&GaussianRational::from_int(2));
        assert_eq!(parens, expect2);
    }

    #[test]
    fn rejects_bad_input() {
        let model = FlagModel::build(FlagConfig::projective(2)).unwrap();
        assert!(parse_momentum_expr("E13", &model).is_err());
        assert!(parse_momentum_expr("1.5", &model).is_err());
        assert!(parse_momentum_expr("(E12", &model).is_err());
        assert!(parse_momentum_expr("E12 E21", &model).is_err());
    }
}
