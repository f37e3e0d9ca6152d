use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Pow;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fqpoly::{Poly, PolyRing};
use crate::intnt::{factor_u64, is_prime_u64};

/// A finite field with value-typed elements.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn prime_degree(&self) -> u64;
    /// Image of an integer.
    fn from_u64(&self, v: u64) -> Self::Elem;
    /// Bijection with `0..size` (only meaningful when the size fits a `u64`).
    fn from_index(&self, i: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn size(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.prime_degree() as u32)
    }

    fn size_u64(&self) -> Option<u64> {
        self.characteristic().checked_pow(self.prime_degree() as u32)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..64 - e.leading_zeros()).rev() {
            acc = self.square(&acc);
            if (e >> i) & 1 == 1 {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// All elements in index order.
    fn elements(&self) -> Box<dyn Iterator<Item = Self::Elem> + '_> {
        let size = self.size_u64().expect("field too large to enumerate");
        Box::new((0..size).map(move |i| self.from_index(i)))
    }
}

/// Largest `q` for which a non-prime field keeps exp/log tables.
pub const SMALL_FIELD_CAP: u64 = 1 << 24;

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// `F_q` with `q = p^m`. Elements are `u32` indices whose base-`p` digits are
/// the coefficients of a polynomial basis over `F_p`.
#[derive(Clone, Debug)]
pub struct SmallField {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    tables: Option<Arc<Tables>>,
    trace_digits: Vec<u32>,
}

impl SmallField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime_u64(p) || p >= 1 << 31 {
            return Err(Error::InvalidArgument(format!("{p} is not a prime below 2^31")));
        }
        let p32 = p as u32;
        let mut f =
            SmallField { p: p32, m: 1, q: p32, modulus: vec![0, 1], generator: 1, tables: None, trace_digits: vec![1] };
        f.generator = f.find_prime_generator();
        f.modulus = vec![(p32 - f.generator) % p32, 1];
        Ok(f)
    }

    /// `F_{p^m}` built from the first irreducible monic of degree `m` at or
    /// after the candidate index `seed`.
    pub fn new(p: u64, m: u32, seed: u64) -> Result<Self> {
        let fp = SmallField::prime(p)?;
        if m == 1 {
            return Ok(fp);
        }
        let q = (p as u128).pow(m);
        if q > SMALL_FIELD_CAP as u128 {
            return Err(Error::SizeCap { size: q.to_string(), cap: SMALL_FIELD_CAP.to_string() });
        }
        let ring = PolyRing::new(&fp);
        let modulus = ring.find_irreducible(m as usize, seed);
        Self::with_modulus(&fp, modulus.coeffs, q as u32)
    }

    /// `F_{p^m}` from a given irreducible monic modulus over `F_p`.
    pub fn from_modulus(p: u64, modulus: &[u32]) -> Result<Self> {
        let fp = SmallField::prime(p)?;
        let m = modulus.len().saturating_sub(1) as u32;
        if m == 0 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidArgument("modulus must be monic of degree >= 1".into()));
        }
        if m == 1 {
            return Ok(fp);
        }
        let ring = PolyRing::new(&fp);
        let poly = Poly::new(modulus.to_vec());
        if !ring.is_irreducible(&poly) {
            return Err(Error::InvalidArgument("modulus is reducible".into()));
        }
        let q = (p as u128).pow(m);
        if q > SMALL_FIELD_CAP as u128 {
            return Err(Error::SizeCap { size: q.to_string(), cap: SMALL_FIELD_CAP.to_string() });
        }
        Self::with_modulus(&fp, modulus.to_vec(), q as u32)
    }

    fn with_modulus(fp: &SmallField, modulus: Vec<u32>, q: u32) -> Result<Self> {
        let p = fp.p;
        let m = (modulus.len() - 1) as u32;
        let ring = PolyRing::new(fp);
        let modp = Poly::new(modulus.clone());
        let to_index = |c: &Poly<u32>| -> u32 { c.coeffs.iter().rev().fold(0u32, |acc, &d| acc * p + d) };
        let from_index = |mut i: u32| -> Poly<u32> {
            let mut v = Vec::with_capacity(m as usize);
            for _ in 0..m {
                v.push(i % p);
                i /= p;
            }
            Poly::new(v)
        };
        let order = (q - 1) as u64;
        let primes = factor_u64(order).primes_u64().expect("small");
        let mut gen = None;
        for cand in p..q {
            let g = from_index(cand);
            let ok = primes.iter().all(|s| {
                let e = BigUint::from(order / s);
                !ring.is_one(&ring.powmod(&g, &e, &modp))
            });
            if ok {
                gen = Some(g);
                break;
            }
        }
        let g = gen.expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = ring.one();
        for i in 0..(q as usize - 1) {
            let idx = to_index(&cur);
            exp[i] = idx;
            exp[i + q as usize - 1] = idx;
            log[idx as usize] = i as u32;
            cur = ring.rem(&ring.mul(&cur, &g), &modp);
        }
        let mut f = SmallField {
            p,
            m,
            q,
            modulus,
            generator: to_index(&g),
            tables: Some(Arc::new(Tables { exp, log })),
            trace_digits: Vec::new(),
        };
        f.trace_digits = (0..m)
            .map(|i| {
                let mut acc = 0;
                let mut c = p.pow(i);
                for _ in 0..m {
                    acc = f.add(&acc, &c);
                    c = f.pow_u64(&c, p as u64);
                }
                acc
            })
            .collect();
        Ok(f)
    }

    fn find_prime_generator(&self) -> u32 {
        if self.p == 2 {
            return 1;
        }
        let order = self.p as u64 - 1;
        let primes = factor_u64(order).primes_u64().expect("small");
        (2..self.p).find(|&g| primes.iter().all(|s| self.pow_u64(&g, order / s) != 1)).expect("cyclic")
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    /// Defining polynomial over `F_p`, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// Coefficients over `F_p`, low degree first.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut a = a;
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d % self.p)
    }

    /// Absolute trace to `F_p`.
    pub fn trace(&self, a: u32) -> u32 {
        if self.m == 1 {
            return a;
        }
        let mut acc = 0u64;
        for (d, t) in self.digits(a).iter().zip(&self.trace_digits) {
            acc = (acc + *d as u64 * *t as u64) % self.p as u64;
        }
        acc as u32
    }

    /// Discrete log to the base [`Self::generator`].
    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[a as usize]),
            None => {
                let mut x = 1u32;
                for k in 0..self.q - 1 {
                    if x == a {
                        return Some(k);
                    }
                    x = self.mul(&x, &self.generator);
                }
                None
            }
        }
    }

    fn digit_op(&self, a: u32, b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.m {
            out += op(a % self.p, b % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }
}

impl PartialEq for SmallField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for SmallField {}

impl Field for SmallField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        if self.m == 1 {
            ((*a as u64 + *b as u64) % self.p as u64) as u32
        } else if self.p == 2 {
            a ^ b
        } else {
            let p = self.p;
            self.digit_op(*a, *b, |x, y| (x + y) % p)
        }
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if self.m == 1 {
            ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
        } else if self.p == 2 {
            a ^ b
        } else {
            let p = self.p;
            self.digit_op(*a, *b, |x, y| (x + p - y) % p)
        }
    }
    fn neg(&self, a: &u32) -> u32 {
        self.sub(&0, a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match &self.tables {
            None => ((*a as u64 * *b as u64) % self.p as u64) as u32,
            Some(t) => {
                if *a == 0 || *b == 0 {
                    0
                } else {
                    t.exp[(t.log[*a as usize] + t.log[*b as usize]) as usize]
                }
            }
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        match &self.tables {
            None => Some(self.pow_u64(a, self.p as u64 - 2)),
            Some(t) => {
                let l = t.log[*a as usize];
                Some(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
            }
        }
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn prime_degree(&self) -> u64 {
        self.m as u64
    }
    fn from_u64(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }
    fn from_index(&self, i: u64) -> u32 {
        debug_assert!(i < self.q as u64);
        i as u32
    }
    fn index_of(&self, a: &u32) -> u64 {
        *a as u64
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(0..self.q)
    }
    fn size(&self) -> BigUint {
        BigUint::from(self.q)
    }
    fn size_u64(&self) -> Option<u64> {
        Some(self.q as u64)
    }
    fn pow(&self, a: &u32, e: &BigUint) -> u32 {
        if *a == 0 {
            return if e.bits() == 0 { 1 } else { 0 };
        }
        let r = e % BigUint::from(self.q - 1);
        let r = r.iter_u64_digits().next().unwrap_or(0);
        self.pow_u64(a, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &SmallField) {
        let q = f.q();
        let elems: Vec<u32> = (0..q as u32).collect();
        for &a in &elems {
            assert_eq!(f.add(&a, &f.neg(&a)), 0);
            if a != 0 {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
            assert_eq!(f.pow_u64(&a, q), a);
        }
        for &a in elems.iter().step_by(3) {
            for &b in elems.iter().step_by(5) {
                for &c in elems.iter().step_by(7) {
                    let l = f.mul(&a, &f.add(&b, &c));
                    let r = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        for (p, m) in [(2, 1), (5, 1), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2), (2, 8)] {
            let f = SmallField::new(p, m, 0).unwrap();
            assert_eq!(f.q(), p.pow(m));
            check_axioms(&f);
        }
    }

    #[test]
    fn generator_has_full_order() {
        for (p, m) in [(3u64, 2u32), (7, 1), (2, 5), (13, 2)] {
            let f = SmallField::new(p, m, 0).unwrap();
            let g = f.generator();
            let q = f.q();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(&x, &g);
            }
            assert_eq!(seen.len() as u64, q - 1);
        }
    }

    #[test]
    fn trace_is_onto_and_additive() {
        for (p, m) in [(3u64, 2u32), (2, 4), (5, 3)] {
            let f = SmallField::new(p, m, 0).unwrap();
            let mut counts = vec![0u64; p as usize];
            for a in 0..f.q() as u32 {
                counts[f.trace(a) as usize] += 1;
                let b = (a * 7 + 3) % f.q() as u32;
                assert_eq!(f.trace(f.add(&a, &b)), (f.trace(a) + f.trace(b)) % p as u32);
            }
            assert!(counts.iter().all(|&c| c == f.q() / p));
        }
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(SmallField::prime(9).is_err());
        assert!(SmallField::from_modulus(3, &[1, 0, 1]).is_ok());
        assert!(SmallField::from_modulus(3, &[2, 0, 1]).is_err());
    }
}
