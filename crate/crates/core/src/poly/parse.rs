use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Poly, PolyError, Ring, Q};

/// Parses `c*x1^a*x2^b + ...`. Parentheses, products and integer powers of
/// subexpressions are accepted as well; rational literals are written `p/q`.
pub fn parse_poly(ring: &Ring, src: &str) -> Result<Poly, PolyError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, ring };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(PolyError::Parse(format!("unexpected token {:?}", p.toks[p.pos])));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
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
}

fn lex(src: &str) -> Result<Vec<Tok>, PolyError> {
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().unwrap()));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(PolyError::Parse(format!("unexpected character '{}'", c))),
        };
        out.push(t);
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            neg = true;
        } else if self.peek() == Some(&Tok::Plus) {
            self.bump();
        }
        let first = self.term()?;
        let mut acc = if neg { -first } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let k: u32 = n.try_into().map_err(|_| PolyError::Parse("exponent too large".into()))?;
                    return Ok(base.pow(k));
                }
                t => return Err(PolyError::Parse(format!("expected exponent, found {:?}", t))),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly, PolyError> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut q = Q::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) => {
                            if d.is_zero() {
                                return Err(PolyError::Parse("division by zero".into()));
                            }
                            q /= Q::from_integer(d);
                        }
                        t => return Err(PolyError::Parse(format!("expected denominator, found {:?}", t))),
                    }
                }
                Ok(Poly::constant(self.ring, q))
            }
            Some(Tok::Ident(name)) => match self.ring.var_index(&name) {
                Some(i) => Ok(Poly::var(self.ring, i)),
                None => Err(PolyError::UnknownVariable(name)),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    t => Err(PolyError::Parse(format!("expected ')', found {:?}", t))),
                }
            }
            Some(Tok::Minus) => {
                let f = self.factor()?;
                Ok(-f)
            }
            t => Err(PolyError::Parse(format!("unexpected token {:?}", t))),
        }
    }
}

/// Parses a rational literal `p` or `p/q` (optionally signed).
pub fn parse_rational(s: &str) -> Result<Q, PolyError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| PolyError::Parse(format!("bad rational '{}'", s)))?;
    let d: BigInt = den.parse().map_err(|_| PolyError::Parse(format!("bad rational '{}'", s)))?;
    if d.is_zero() {
        return Err(PolyError::Parse("zero denominator".into()));
    }
    Ok(Q::new(n, d))
}

/// Formats a rational as `p/q` (always with a denominator).
pub fn format_rational(q: &Q) -> String {
    let d = if q.denom().is_one() { BigInt::one() } else { q.denom().clone() };
    format!("{}/{}", q.numer(), d)
}
