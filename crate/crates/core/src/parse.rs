//! Operator input language.
//!
//! Either an expression over `z`, `D` (= d/dz), `T` (= θ = z·D), integers,
//! `+ - * / ^` and parentheses, or a JSON coefficient document
//! `{"P": [["-1"], ["1", "-1"]]}` listing `P_0, P_1, …` lowest degree first.
//! Juxtaposition multiplies, so `T(T-1)` and `2z D` are accepted.

use rug::Rational;

use crate::error::{Error, Result};
use crate::operator::{DiffOperator, WeylElement};
use crate::poly::RationalPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(rug::Integer),
    Z,
    D,
    T,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
            continue;
        }
        if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, c)) = it.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    it.next();
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Int(s.parse().unwrap())));
            continue;
        }
        if ch.is_alphabetic() {
            let mut s = String::new();
            while let Some(&(_, c)) = it.peek() {
                if c.is_alphanumeric() {
                    s.push(c);
                    it.next();
                } else {
                    break;
                }
            }
            let tok = match s.as_str() {
                "z" => Tok::Z,
                "D" => Tok::D,
                "T" | "θ" | "theta" => Tok::T,
                _ => {
                    return Err(Error::Syntax {
                        pos,
                        msg: format!("unknown identifier {s:?}"),
                    })
                }
            };
            out.push((pos, tok));
            continue;
        }
        let tok = match ch {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unexpected character {ch:?}"),
                })
            }
        };
        out.push((pos, tok));
        it.next();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.to_string(),
        })
    }

    fn expr(&mut self) -> Result<WeylElement> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.i += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.i += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylElement> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.i += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.i += 1;
                    let at = self.pos();
                    let rhs = self.unary()?;
                    let c = rhs
                        .as_scalar()
                        .filter(|p| p.degree() == Some(0))
                        .ok_or(Error::Syntax {
                            pos: at,
                            msg: "division only by a nonzero constant".into(),
                        })?;
                    let inv = Rational::from(c.coeff(0).recip_ref());
                    acc = acc.mul(&WeylElement::scalar(RationalPoly::constant(inv)));
                }
                Some(Tok::Int(_) | Tok::Z | Tok::D | Tok::T | Tok::LParen) => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<WeylElement> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.i += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.i += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<WeylElement> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.i += 1;
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.i += 1;
                    let e = n.to_u32().filter(|&e| e <= 4096);
                    match e {
                        Some(e) => Ok(base.pow(e)),
                        None => self.err("exponent too large"),
                    }
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<WeylElement> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(WeylElement::scalar(RationalPoly::constant(Rational::from(n))))
            }
            Some(Tok::Z) => {
                self.i += 1;
                Ok(WeylElement::z())
            }
            Some(Tok::D) => {
                self.i += 1;
                Ok(WeylElement::d())
            }
            Some(Tok::T) => {
                self.i += 1;
                Ok(WeylElement::theta())
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.i += 1;
                Ok(e)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse an operator expression into normal form `Σ P_j(z) D^j`.
pub fn parse_expression(text: &str) -> Result<WeylElement> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parse either form of operator document.
pub fn parse_operator(text: &str) -> Result<DiffOperator> {
    let t = text.trim();
    if t.starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(t).map_err(|e| Error::Document(e.to_string()))?;
        return operator_from_json(&v);
    }
    DiffOperator::from_weyl(parse_expression(t)?)
}

fn json_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => crate::poly::parse_rational(s).map_err(Error::Document),
        serde_json::Value::Number(n) if n.is_i64() => Ok(Rational::from(n.as_i64().unwrap())),
        _ => Err(Error::Document(format!("expected a rational string, got {v}"))),
    }
}

/// Operator from a JSON value: an expression string or a `{"P": …}` object.
pub fn operator_from_json(v: &serde_json::Value) -> Result<DiffOperator> {
    match v {
        serde_json::Value::String(s) => parse_operator(s),
        serde_json::Value::Object(m) => {
            let p = m
                .get("P")
                .and_then(|p| p.as_array())
                .ok_or_else(|| Error::Document("missing \"P\" coefficient list".into()))?;
            let coeffs = p
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Document("each P_j must be a list".into()))?
                        .iter()
                        .map(json_rational)
                        .collect::<Result<Vec<_>>>()
                        .map(RationalPoly::new)
                })
                .collect::<Result<Vec<_>>>()?;
            DiffOperator::new(coeffs)
        }
        _ => Err(Error::Document("operator must be a string or an object".into())),
    }
}
