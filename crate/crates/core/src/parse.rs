//! Parser for the canonical polynomial syntax: rational coefficients,
//! explicit `*`, `^` powers, `+`/`-`, and parentheses.

use crate::poly::Polynomial;
use crate::ring::Ring;
use crate::scalar::Scalar;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Result<(Tok, usize), ParseError> {
        let save = self.pos;
        let t = self.next()?;
        let at = self.pos;
        self.pos = save;
        Ok((t.0, at.min(t.1)))
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, start));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                return Ok((Tok::Int(s), start));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                return Ok((Tok::Ident(s), start));
            }
            other => {
                return Err(ParseError {
                    pos: start,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        self.pos += 1;
        Ok((tok, start))
    }
}

struct Parser<'a, K: Scalar> {
    lex: Lexer<'a>,
    ring: &'a Ring,
    _k: std::marker::PhantomData<K>,
}

impl<'a, K: Scalar> Parser<'a, K> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos,
            message: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial<K>, ParseError> {
        let mut acc;
        let (t, _) = self.lex.peek()?;
        let negate = matches!(t, Tok::Minus);
        if matches!(t, Tok::Minus | Tok::Plus) {
            self.lex.next()?;
        }
        acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            let (t, _) = self.lex.peek()?;
            match t {
                Tok::Plus => {
                    self.lex.next()?;
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.lex.next()?;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<K>, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let (t, _) = self.lex.peek()?;
            match t {
                Tok::Star => {
                    self.lex.next()?;
                    acc = acc * self.factor()?;
                }
                Tok::Slash => {
                    // rational coefficient written a/b
                    self.lex.next()?;
                    let (t2, p2) = self.lex.next()?;
                    let den = match t2 {
                        Tok::Int(s) => s,
                        _ => return self.err(p2, "expected integer denominator"),
                    };
                    let d: i64 = den
                        .parse()
                        .map_err(|_| ParseError {
                            pos: p2,
                            message: "denominator out of range".into(),
                        })?;
                    if d == 0 {
                        return self.err(p2, "zero denominator");
                    }
                    let inv = K::one() / K::from_int(d);
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial<K>, ParseError> {
        let n = self.ring.nvars();
        let (t, p) = self.lex.next()?;
        let base = match t {
            Tok::Int(s) => {
                let v: i64 = s.parse().map_err(|_| ParseError {
                    pos: p,
                    message: "integer out of range".into(),
                })?;
                Polynomial::constant(n, K::from_int(v))
            }
            Tok::Ident(name) => match self.ring.var_index(&name) {
                Some(i) => Polynomial::var(n, i),
                None => return self.err(p, format!("unknown variable `{name}`")),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let (t2, p2) = self.lex.next()?;
                if t2 != Tok::RParen {
                    return self.err(p2, "expected `)`");
                }
                inner
            }
            Tok::Minus => {
                let f = self.factor()?;
                -f
            }
            other => return self.err(p, format!("unexpected token {other:?}")),
        };
        let (t, _) = self.lex.peek()?;
        if t == Tok::Caret {
            self.lex.next()?;
            let (t2, p2) = self.lex.next()?;
            let e: u32 = match t2 {
                Tok::Int(s) => s.parse().map_err(|_| ParseError {
                    pos: p2,
                    message: "malformed exponent".into(),
                })?,
                _ => return self.err(p2, "expected integer exponent"),
            };
            let mut acc = Polynomial::one(n);
            for _ in 0..e {
                acc = acc * base.clone();
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

/// Parse a polynomial in the given ring.
pub fn parse_poly<K: Scalar>(ring: &Ring, src: &str) -> Result<Polynomial<K>, ParseError> {
    let mut p = Parser::<K> {
        lex: Lexer::new(src),
        ring,
        _k: std::marker::PhantomData,
    };
    let poly = p.expr()?;
    let (t, pos) = p.lex.next()?;
    if t != Tok::End {
        return Err(ParseError {
            pos,
            message: "trailing input after polynomial".into(),
        });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::MonomialOrder;
    use crate::Rat;

    #[test]
    fn parse_render_roundtrip() {
        let r = Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap();
        for s in [
            "w1^2",
            "z1*w2 - z2*w1",
            "2*z1^3 + 1/2*w1*w2 - 7",
            "-w1 + 1",
        ] {
            let p = parse_poly::<Rat>(&r, s).unwrap();
            let rendered = p.render(&r, MonomialOrder::DegRevLex);
            let q = parse_poly::<Rat>(&r, &rendered).unwrap();
            assert_eq!(p, q, "roundtrip failed for {s}");
        }
    }

    #[test]
    fn rejects_unknown_variable() {
        let r = Ring::new(&["z"], &["w"]).unwrap();
        assert!(parse_poly::<Rat>(&r, "z*y").is_err());
    }
}
