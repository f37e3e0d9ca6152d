use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use super::field::Field;
use crate::error::{Error, Result};
use crate::fqpoly::{Poly, PolyRing};

/// `F[x]/(f)` for an irreducible monic `f` of degree `n`. Elements are
/// coefficient vectors of length `n`, low degree first.
#[derive(Clone, Debug)]
pub struct ExtField<F: Field> {
    base: F,
    modulus: Poly<F::Elem>,
    n: usize,
    frob: Arc<Vec<Vec<F::Elem>>>,
}

impl<F: Field> ExtField<F> {
    /// Caller guarantees `modulus` is irreducible and monic.
    pub fn new(base: F, modulus: Poly<F::Elem>) -> Self {
        let n = modulus.degree().expect("nonzero modulus");
        assert!(n >= 1, "modulus degree must be at least 1");
        let ring = PolyRing::new(&base);
        assert!(base.is_one(modulus.lead().unwrap()), "modulus must be monic");
        let xq = ring.powmod(&ring.x(), &base.size(), &modulus);
        let mut rows = Vec::with_capacity(n);
        let mut cur = ring.one();
        for _ in 0..n {
            rows.push(pad(&base, &cur, n));
            cur = ring.rem(&ring.mul(&cur, &xq), &modulus);
        }
        ExtField { base, modulus, n, frob: Arc::new(rows) }
    }

    /// Checked construction.
    pub fn try_new(base: F, modulus: Poly<F::Elem>) -> Result<Self> {
        let ring = PolyRing::new(&base);
        match modulus.lead() {
            Some(l) if base.is_one(l) => {}
            _ => return Err(Error::InvalidArgument("modulus must be monic".into())),
        }
        if !ring.is_irreducible(&modulus) {
            return Err(Error::InvalidArgument("modulus is reducible".into()));
        }
        Ok(Self::new(base, modulus))
    }

    /// Extension of degree `n` by the first irreducible found from `seed`.
    pub fn with_degree(base: F, n: usize, seed: u64) -> Self {
        let modulus = PolyRing::new(&base).find_irreducible(n, seed);
        Self::new(base, modulus)
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Poly<F::Elem> {
        &self.modulus
    }

    /// Embedding of the base field.
    pub fn embed(&self, c: &F::Elem) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.n];
        v[0] = c.clone();
        v
    }

    /// The class of `x`.
    pub fn gen_x(&self) -> Vec<F::Elem> {
        if self.n == 1 {
            let m = &self.modulus.coeffs;
            return vec![self.base.neg(&m[0])];
        }
        let mut v = vec![self.base.zero(); self.n];
        v[1] = self.base.one();
        v
    }

    /// Base-field value when `a` lies in the base field.
    pub fn as_base(&self, a: &[F::Elem]) -> Option<F::Elem> {
        if a[1..].iter().all(|c| self.base.is_zero(c)) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    pub fn to_poly(&self, a: &[F::Elem]) -> Poly<F::Elem> {
        PolyRing::new(&self.base).normalized(a.to_vec())
    }

    pub fn from_poly(&self, p: &Poly<F::Elem>) -> Vec<F::Elem> {
        let ring = PolyRing::new(&self.base);
        pad(&self.base, &ring.rem(p, &self.modulus), self.n)
    }

    /// `a^|F|`, by the precomputed linear map.
    pub fn frobenius(&self, a: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![self.base.zero(); self.n];
        for (c, row) in a.iter().zip(self.frob.iter()) {
            if self.base.is_zero(c) {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                *o = self.base.add(o, &self.base.mul(c, r));
            }
        }
        out
    }

    pub fn frobenius_pow(&self, a: &[F::Elem], k: usize) -> Vec<F::Elem> {
        let mut x = a.to_vec();
        for _ in 0..k % self.n {
            x = self.frobenius(&x);
        }
        x
    }

    /// Relative trace to the base field.
    pub fn trace_to_base(&self, a: &[F::Elem]) -> F::Elem {
        let mut acc = a.to_vec();
        let mut x = a.to_vec();
        for _ in 1..self.n {
            x = self.frobenius(&x);
            acc = self.add(&acc, &x);
        }
        debug_assert!(self.as_base(&acc).is_some());
        acc[0].clone()
    }
}

fn pad<F: Field>(base: &F, p: &Poly<F::Elem>, n: usize) -> Vec<F::Elem> {
    let mut v = p.coeffs.clone();
    v.resize(n, base.zero());
    v
}

impl<F: Field> Field for ExtField<F> {
    type Elem = Vec<F::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.n]
    }
    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = self.n;
        let f = &self.base;
        let mut buf = vec![f.zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                buf[i + j] = f.add(&buf[i + j], &f.mul(x, y));
            }
        }
        let m = &self.modulus.coeffs;
        for k in (n..2 * n - 1).rev() {
            let c = buf[k].clone();
            if f.is_zero(&c) {
                continue;
            }
            for j in 0..n {
                buf[k - n + j] = f.sub(&buf[k - n + j], &f.mul(&c, &m[j]));
            }
        }
        buf.truncate(n);
        buf
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        let ring = PolyRing::new(&self.base);
        let (g, s, _) = ring.xgcd(&self.to_poly(a), &self.modulus);
        debug_assert!(ring.is_one(&g));
        Some(pad(&self.base, &ring.rem(&s, &self.modulus), self.n))
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn prime_degree(&self) -> u64 {
        self.base.prime_degree() * self.n as u64
    }
    fn from_u64(&self, v: u64) -> Self::Elem {
        self.embed(&self.base.from_u64(v))
    }
    fn from_index(&self, i: u64) -> Self::Elem {
        let q = self.base.size_u64().expect("base enumerable");
        let mut i = i;
        (0..self.n)
            .map(|_| {
                let d = i % q;
                i /= q;
                self.base.from_index(d)
            })
            .collect()
    }
    fn index_of(&self, a: &Self::Elem) -> u64 {
        let q = self.base.size_u64().expect("base enumerable");
        a.iter().rev().fold(0u64, |acc, c| acc.wrapping_mul(q).wrapping_add(self.base.index_of(c)))
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        (0..self.n).map(|_| self.base.random(rng)).collect()
    }
    fn size(&self) -> BigUint {
        self.base.size().pow(self.n as u32)
    }
    fn size_u64(&self) -> Option<u64> {
        self.base.size_u64()?.checked_pow(self.n as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::SmallField;
    use super::*;

    #[test]
    fn extension_inverse_and_frobenius() {
        let f3 = SmallField::new(3, 1, 0).unwrap();
        let e = ExtField::with_degree(f3, 4, 0);
        assert_eq!(e.size_u64(), Some(81));
        for a in e.elements() {
            if !e.is_zero(&a) {
                assert!(e.is_one(&e.mul(&a, &e.inv(&a).unwrap())));
            }
            assert_eq!(e.frobenius(&a), e.pow_u64(&a, 3));
            assert_eq!(e.frobenius_pow(&a, 4), a);
            let i = e.index_of(&a);
            assert_eq!(e.from_index(i), a);
        }
    }

    #[test]
    fn tower_over_nonprime_base() {
        let f9 = SmallField::new(3, 2, 0).unwrap();
        let e = ExtField::with_degree(f9, 2, 0);
        let mut fixed = 0;
        for a in e.elements() {
            assert_eq!(e.frobenius(&a), e.pow_u64(&a, 9));
            if e.frobenius(&a) == a {
                fixed += 1;
                assert!(e.as_base(&a).is_some());
            }
            let t = e.trace_to_base(&a);
            assert_eq!(e.embed(&t), e.add(&a, &e.frobenius(&a)));
        }
        assert_eq!(fixed, 9);
    }
}
