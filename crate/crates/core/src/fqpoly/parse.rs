//! Polynomial syntax: integers, `x`, the field generator `a`, `+ - * ^`,
//! parentheses, and one optional top-level `/` for rational functions.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{Poly, PolyRing};
use crate::error::{Error, Result};
use crate::ffield::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigUint),
    X,
    A,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'s> {
    src: &'s [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

impl<'s> Parser<'s> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(c) if c.is_ascii_digit() || c == b'x' || c == b'a' || c == b'(' => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let n = self.integer()?;
            let e = n.to_u32().ok_or_else(|| Error::Parse { pos: start, msg: "exponent too large".into() })?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigUint> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Expr::X)
            }
            Some(b'a') => {
                self.pos += 1;
                Ok(Expr::A)
            }
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return err(self.pos, format!("unclosed parenthesis opened at {open}"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer()?)),
            Some(c) => err(self.pos, format!("unexpected character '{}'", c as char)),
            None => err(self.pos, "unexpected end of input"),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => err(self.pos, format!("unexpected character '{}'", c as char)),
        }
    }
}

/// Parse a polynomial expression.
pub fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parse `num` or `num / den`.
pub fn parse_ratio_expr(s: &str) -> Result<(Expr, Option<Expr>)> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let num = p.expr()?;
    if p.peek() == Some(b'/') {
        p.pos += 1;
        let den = p.expr()?;
        p.finish()?;
        return Ok((num, Some(den)));
    }
    p.finish()?;
    Ok((num, None))
}

impl Expr {
    /// Evaluate over `F`, with `a` bound to the given element.
    pub fn eval<F: Field>(&self, ring: &PolyRing<'_, F>, a: Option<&F::Elem>) -> Result<Poly<F::Elem>> {
        let f = ring.f;
        Ok(match self {
            Expr::Int(n) => {
                let p = BigUint::from(f.characteristic());
                ring.constant(f.from_u64((n % p).to_u64().unwrap()))
            }
            Expr::X => ring.x(),
            Expr::A => match a {
                Some(a) => ring.constant(a.clone()),
                None => return err(0, "the generator 'a' is not available over this field"),
            },
            Expr::Neg(e) => ring.neg(&e.eval(ring, a)?),
            Expr::Add(l, r) => ring.add(&l.eval(ring, a)?, &r.eval(ring, a)?),
            Expr::Sub(l, r) => ring.sub(&l.eval(ring, a)?, &r.eval(ring, a)?),
            Expr::Mul(l, r) => ring.mul(&l.eval(ring, a)?, &r.eval(ring, a)?),
            Expr::Pow(b, e) => ring.pow(&b.eval(ring, a)?, *e),
        })
    }
}

pub fn parse_poly<F: Field>(ring: &PolyRing<'_, F>, s: &str, a: Option<&F::Elem>) -> Result<Poly<F::Elem>> {
    parse_expr(s)?.eval(ring, a)
}

/// Parse a rational function; the denominator defaults to 1.
pub fn parse_ratio<F: Field>(
    ring: &PolyRing<'_, F>,
    s: &str,
    a: Option<&F::Elem>,
) -> Result<(Poly<F::Elem>, Poly<F::Elem>)> {
    let (n, d) = parse_ratio_expr(s)?;
    let num = n.eval(ring, a)?;
    let den = match d {
        Some(d) => d.eval(ring, a)?,
        None => ring.one(),
    };
    if den.is_zero() {
        let at = s.find('/').map(|i| i + 1).unwrap_or(0);
        return err(at, "denominator is zero");
    }
    Ok((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::SmallField;

    #[test]
    fn parses_standard_forms() {
        let f7 = SmallField::prime(7).unwrap();
        let r = PolyRing::new(&f7);
        assert_eq!(parse_poly(&r, "3*x^2 + 2*x + 1", None).unwrap(), Poly::new(vec![1, 2, 3]));
        assert_eq!(parse_poly(&r, "x(x+1)", None).unwrap(), Poly::new(vec![0, 1, 1]));
        assert_eq!(parse_poly(&r, "x^7 - x", None).unwrap(), Poly::new(vec![0, 6, 0, 0, 0, 0, 0, 1]));
        assert_eq!(parse_poly(&r, "-1 + 8x", None).unwrap(), Poly::new(vec![6, 1]));
        let (n, d) = parse_ratio(&r, "(x^2+1)/(x+1)", None).unwrap();
        assert_eq!((n, d), (Poly::new(vec![1, 0, 1]), Poly::new(vec![1, 1])));
        let (n, _) = parse_ratio(&r, "(x^2+a*x+3)/(x+1)", Some(&3)).unwrap();
        assert_eq!(n, Poly::new(vec![3, 3, 1]));
    }

    #[test]
    fn reports_positions() {
        let f7 = SmallField::prime(7).unwrap();
        let r = PolyRing::new(&f7);
        assert_eq!(
            parse_poly(&r, "x^2 + $", None),
            Err(Error::Parse { pos: 6, msg: "unexpected character '$'".into() })
        );
        assert!(matches!(parse_poly(&r, "(x+1", None), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_poly(&r, "x^", None), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_ratio(&r, "x/0", None), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_poly(&r, "a*x", None), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly(&r, "x y", None), Err(Error::Parse { pos: 2, .. })));
    }
}
