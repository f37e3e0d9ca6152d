//! Dense polynomials over a finite field, factoring, and the factorization
//! of `x^n - 1` by cyclotomic cosets.

mod arith;
mod cyclo;
mod factor;
mod parse;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::ffield::Field;

pub use arith::{poly_divisors, poly_mobius, poly_phi, poly_w, Divisor};
pub use cyclo::{count_xn_minus_1_factors, factor_xn_minus_1, xn_minus_1_degree_profile};
pub use parse::{parse_expr, parse_poly, parse_ratio, parse_ratio_expr, Expr};

/// Coefficients low degree first; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Poly<E> {
    pub coeffs: Vec<E>,
}

impl<E> Poly<E> {
    /// Wraps `coeffs` as given; the caller ensures there are no trailing zeros.
    pub fn new(coeffs: Vec<E>) -> Self {
        Poly { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

/// Factor list entry: monic irreducible with multiplicity.
pub type Factored<E> = Vec<(Poly<E>, u32)>;

/// Arithmetic in `F[x]`.
#[derive(Clone, Copy, Debug)]
pub struct PolyRing<'a, F: Field> {
    pub f: &'a F,
}

impl<'a, F: Field> PolyRing<'a, F> {
    pub fn new(f: &'a F) -> Self {
        PolyRing { f }
    }

    pub fn normalized(&self, mut v: Vec<F::Elem>) -> Poly<F::Elem> {
        while v.last().is_some_and(|c| self.f.is_zero(c)) {
            v.pop();
        }
        Poly { coeffs: v }
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: vec![] }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        Poly { coeffs: vec![self.f.one()] }
    }

    pub fn x(&self) -> Poly<F::Elem> {
        Poly { coeffs: vec![self.f.zero(), self.f.one()] }
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.normalized(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(&self, c: F::Elem, k: usize) -> Poly<F::Elem> {
        if self.f.is_zero(&c) {
            return self.zero();
        }
        let mut v = vec![self.f.zero(); k + 1];
        v[k] = c;
        Poly { coeffs: v }
    }

    /// `x - c`.
    pub fn linear(&self, c: &F::Elem) -> Poly<F::Elem> {
        Poly { coeffs: vec![self.f.neg(c), self.f.one()] }
    }

    /// `x^n - 1`.
    pub fn xn_minus_1(&self, n: usize) -> Poly<F::Elem> {
        let mut v = vec![self.f.zero(); n + 1];
        v[0] = self.f.neg(&self.f.one());
        v[n] = self.f.add(&v[n], &self.f.one());
        self.normalized(v)
    }

    pub fn is_one(&self, a: &Poly<F::Elem>) -> bool {
        a.coeffs.len() == 1 && self.f.is_one(&a.coeffs[0])
    }

    pub fn is_monic(&self, a: &Poly<F::Elem>) -> bool {
        a.lead().is_some_and(|l| self.f.is_one(l))
    }

    pub fn coeff(&self, a: &Poly<F::Elem>, i: usize) -> F::Elem {
        a.coeffs.get(i).cloned().unwrap_or_else(|| self.f.zero())
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let v = (0..n).map(|i| self.f.add(&self.coeff(a, i), &self.coeff(b, i))).collect();
        self.normalized(v)
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let v = (0..n).map(|i| self.f.sub(&self.coeff(a, i), &self.coeff(b, i))).collect();
        self.normalized(v)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly { coeffs: a.coeffs.iter().map(|c| self.f.neg(c)).collect() }
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.normalized(a.coeffs.iter().map(|x| self.f.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut v = vec![self.f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = self.f.add(&v[i + j], &self.f.mul(x, y));
            }
        }
        self.normalized(v)
    }

    pub fn pow(&self, a: &Poly<F::Elem>, k: u32) -> Poly<F::Elem> {
        let mut acc = self.one();
        for i in (0..32 - k.leading_zeros()).rev() {
            acc = self.mul(&acc, &acc);
            if (k >> i) & 1 == 1 {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn product<'b>(&self, it: impl IntoIterator<Item = &'b Poly<F::Elem>>) -> Poly<F::Elem>
    where
        F::Elem: 'b,
    {
        it.into_iter().fold(self.one(), |acc, p| self.mul(&acc, p))
    }

    /// Product of factors raised to their multiplicities.
    pub fn expand(&self, factors: &[(Poly<F::Elem>, u32)]) -> Poly<F::Elem> {
        factors.iter().fold(self.one(), |acc, (p, e)| self.mul(&acc, &self.pow(p, *e)))
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let db = b.degree().expect("division by zero polynomial");
        let Some(da) = a.degree() else {
            return (self.zero(), self.zero());
        };
        if da < db {
            return (self.zero(), a.clone());
        }
        let inv = self.f.inv(b.lead().unwrap()).unwrap();
        let mut r = a.coeffs.clone();
        let mut q = vec![self.f.zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let c = self.f.mul(&r[k + db], &inv);
            if self.f.is_zero(&c) {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                r[k + j] = self.f.sub(&r[k + j], &self.f.mul(&c, bj));
            }
            q[k] = c;
        }
        r.truncate(db);
        (self.normalized(q), self.normalized(r))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.coeffs.len() < b.coeffs.len() {
            return a.clone();
        }
        self.divrem(a, b).1
    }

    pub fn div(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.divrem(a, b).0
    }

    pub fn divides(&self, d: &Poly<F::Elem>, a: &Poly<F::Elem>) -> bool {
        self.rem(a, d).is_zero()
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.lead() {
            None => self.zero(),
            Some(l) => self.scale(a, &self.f.inv(l).unwrap()),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s a + t b = g` and `g` monic.
    pub fn xgcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = self.f.inv(l).unwrap();
                (self.scale(&r0, &li), self.scale(&s0, &li), self.scale(&t0, &li))
            }
        }
    }

    pub fn mulmod(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &Poly<F::Elem>, e: &BigUint, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let base = self.rem(a, m);
        let mut acc = self.rem(&self.one(), m);
        for i in (0..e.bits()).rev() {
            acc = self.mulmod(&acc, &acc, m);
            if e.bit(i) {
                acc = self.mulmod(&acc, &base, m);
            }
        }
        acc
    }

    pub fn derivative(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let v = a.coeffs.iter().enumerate().skip(1).map(|(i, c)| self.f.mul(&self.f.from_u64(i as u64), c)).collect();
        self.normalized(v)
    }

    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        a.coeffs.iter().rev().fold(self.f.zero(), |acc, c| self.f.add(&self.f.mul(&acc, x), c))
    }

    /// Evaluation at an element of an extension, via an embedding.
    pub fn eval_in<G: Field>(
        &self,
        a: &Poly<F::Elem>,
        g: &G,
        embed: impl Fn(&F::Elem) -> G::Elem,
        x: &G::Elem,
    ) -> G::Elem {
        a.coeffs.iter().rev().fold(g.zero(), |acc, c| g.add(&g.mul(&acc, x), &embed(c)))
    }

    /// Coefficient indices, used for canonical ordering.
    pub fn index_key(&self, a: &Poly<F::Elem>) -> (usize, Vec<u64>) {
        (a.coeffs.len(), a.coeffs.iter().map(|c| self.f.index_of(c)).collect())
    }

    /// Sort factors by degree, then lexicographically on coefficient indices
    /// starting from the constant term.
    pub fn sort_canonical(&self, v: &mut [(Poly<F::Elem>, u32)]) {
        v.sort_by_cached_key(|(p, _)| self.index_key(p));
    }

    pub fn display(&self, a: &Poly<F::Elem>) -> String
    where
        F::Elem: std::fmt::Display,
    {
        display_with(a, |c| c.to_string(), |c| self.f.is_one(c), |c| self.f.is_zero(c))
    }
}

/// Render as `c_k*x^k + ... + c_0`.
pub fn display_with<E>(
    a: &Poly<E>,
    coeff: impl Fn(&E) -> String,
    is_one: impl Fn(&E) -> bool,
    is_zero: impl Fn(&E) -> bool,
) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, c) in a.coeffs.iter().enumerate().rev() {
        if is_zero(c) {
            continue;
        }
        let cs = coeff(c);
        let cs = if cs.contains(['+', '-', ' ']) { format!("({cs})") } else { cs };
        let t = match i {
            0 => cs,
            1 if is_one(c) => "x".to_string(),
            1 => format!("{cs}*x"),
            _ if is_one(c) => format!("x^{i}"),
            _ => format!("{cs}*x^{i}"),
        };
        terms.push(t);
    }
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::SmallField;

    #[test]
    fn gcd_examples() {
        let f7 = SmallField::prime(7).unwrap();
        let r = PolyRing::new(&f7);
        let g = r.gcd(&r.xn_minus_1(4), &r.xn_minus_1(6));
        assert_eq!(g, r.xn_minus_1(2));
        let f = Poly::new(vec![3, 2, 5]);
        assert_eq!(r.gcd(&r.zero(), &f), r.monic(&f));
        assert!(r.is_monic(&r.monic(&f)));
    }

    #[test]
    fn divrem_reconstructs() {
        let f5 = SmallField::prime(5).unwrap();
        let r = PolyRing::new(&f5);
        let a = Poly::new(vec![1, 2, 3, 4, 1, 2]);
        let b = Poly::new(vec![2, 0, 3]);
        let (q, rem) = r.divrem(&a, &b);
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        assert!(rem.degree().unwrap() < 2);
        let (g, s, t) = r.xgcd(&a, &b);
        assert_eq!(r.add(&r.mul(&s, &a), &r.mul(&t, &b)), g);
    }

    #[test]
    fn display_format() {
        let f7 = SmallField::prime(7).unwrap();
        let r = PolyRing::new(&f7);
        assert_eq!(r.display(&Poly::new(vec![6, 0, 1])), "x^2 + 6");
        assert_eq!(r.display(&Poly::new(vec![0, 3, 2])), "2*x^2 + 3*x");
    }
}
