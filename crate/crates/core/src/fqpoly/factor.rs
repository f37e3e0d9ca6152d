use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Factored, Poly, PolyRing};
use crate::ffield::Field;

type P<F> = Poly<<F as Field>::Elem>;

impl<F: Field> PolyRing<'_, F> {
    /// True when `f` has no irreducible factor of degree at most `deg f / 2`.
    pub fn is_irreducible(&self, f: &P<F>) -> bool {
        let Some(d) = f.degree() else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        if self.f.is_zero(&f.coeffs[0]) {
            return false;
        }
        let q = self.f.size();
        let x = self.x();
        let mut h = self.rem(&x, f);
        for _ in 1..=d / 2 {
            h = self.powmod(&h, &q, f);
            let g = self.gcd(&self.sub(&h, &x), f);
            if !self.is_one(&g) {
                return false;
            }
        }
        true
    }

    /// Monic candidate of degree `d` whose lower coefficients are the base-`|F|`
    /// digits of `index`.
    pub fn monic_candidate(&self, d: usize, index: u64) -> P<F> {
        let q = self.f.size_u64().unwrap_or(u64::MAX);
        let mut i = index;
        let mut v: Vec<F::Elem> = (0..d)
            .map(|_| {
                let c = self.f.from_index(i % q);
                i /= q;
                c
            })
            .collect();
        v.push(self.f.one());
        Poly::new(v)
    }

    /// First irreducible monic of degree `d` among candidates `seed, seed+1, ...`
    /// (wrapping when the candidate space is finite and small).
    pub fn find_irreducible(&self, d: usize, seed: u64) -> P<F> {
        assert!(d >= 1);
        let space = self.f.size_u64().and_then(|q| q.checked_pow(d as u32));
        let mut k = 0u64;
        loop {
            let idx = match space {
                Some(s) => (seed % s + k) % s,
                None => seed.wrapping_add(k),
            };
            let cand = self.monic_candidate(d, idx);
            if self.is_irreducible(&cand) {
                return cand;
            }
            k += 1;
        }
    }

    fn pth_root(&self, f: &P<F>) -> P<F> {
        let p = self.f.characteristic() as usize;
        let e = self.f.size() / BigUint::from(p as u64);
        let v = f.coeffs.iter().step_by(p).map(|c| self.f.pow(c, &e)).collect();
        self.normalized(v)
    }

    /// Square-free decomposition of a monic polynomial: pairs `(g, i)` with
    /// `g` square-free and `f = prod g^i`.
    pub fn squarefree_decomposition(&self, f: &P<F>) -> Factored<F::Elem> {
        let mut out = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let fp = self.derivative(f);
        let mut c = self.gcd(f, &fp);
        let mut w = self.div(f, &c);
        let mut i = 1u32;
        while !self.is_one(&w) {
            let y = self.gcd(&w, &c);
            let fac = self.div(&w, &y);
            if !self.is_one(&fac) {
                out.push((fac, i));
            }
            w = y;
            c = self.div(&c, &w);
            i += 1;
        }
        if !self.is_one(&c) {
            let p = self.f.characteristic() as u32;
            let root = self.pth_root(&c);
            for (g, e) in self.squarefree_decomposition(&root) {
                out.push((g, e * p));
            }
        }
        out
    }

    /// Distinct-degree split of a square-free monic polynomial.
    pub fn distinct_degree(&self, f: &P<F>) -> Vec<(P<F>, usize)> {
        let q = self.f.size();
        let x = self.x();
        let mut rest = f.clone();
        let mut h = self.rem(&x, &rest);
        let mut out = Vec::new();
        let mut i = 0;
        while rest.degree().unwrap_or(0) >= 2 * (i + 1) {
            i += 1;
            h = self.powmod(&h, &q, &rest);
            let g = self.gcd(&self.sub(&h, &x), &rest);
            if !self.is_one(&g) {
                rest = self.div(&rest, &g);
                h = self.rem(&h, &rest);
                out.push((g, i));
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            let d = rest.degree().unwrap();
            out.push((rest, d));
        }
        out
    }

    /// Split a product of distinct irreducibles of common degree `d`.
    pub fn equal_degree(&self, f: &P<F>, d: usize, rng: &mut ChaCha8Rng) -> Vec<P<F>> {
        let n = f.degree().unwrap();
        if n == d {
            return vec![f.clone()];
        }
        let q = self.f.size();
        let char2 = self.f.characteristic() == 2;
        let exp = (q.pow(d as u32) - BigUint::one()) >> 1;
        loop {
            let a = self.normalized((0..n).map(|_| self.f.random(rng)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if char2 {
                let k = (self.f.prime_degree() as usize) * d;
                let mut t = a.clone();
                let mut s = a.clone();
                for _ in 1..k {
                    t = self.mulmod(&t, &t, f);
                    s = self.add(&s, &t);
                }
                s
            } else {
                self.sub(&self.powmod(&a, &exp, f), &self.one())
            };
            let g = self.gcd(&b, f);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let h = self.div(f, &g);
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&h, d, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles (the leading constant is
    /// dropped), in canonical order. Deterministic for a fixed `seed`.
    pub fn factor(&self, f: &P<F>, seed: u64) -> Factored<F::Elem> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = self.monic(f);
        let mut out = Vec::new();
        for (g, e) in self.squarefree_decomposition(&f) {
            for (h, d) in self.distinct_degree(&g) {
                for irr in self.equal_degree(&h, d, &mut rng) {
                    out.push((irr, e));
                }
            }
        }
        self.sort_canonical(&mut out);
        out
    }

    /// Distinct roots in the coefficient field.
    pub fn roots(&self, f: &P<F>) -> Vec<F::Elem> {
        if f.is_zero() {
            return Vec::new();
        }
        let f = self.monic(f);
        let x = self.x();
        let q = self.f.size();
        if f.degree().unwrap() == 0 {
            return Vec::new();
        }
        let xq = self.powmod(&x, &q, &f);
        let lin = self.gcd(&self.sub(&xq, &x), &f);
        if lin.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut r: Vec<F::Elem> =
            self.equal_degree(&lin, 1, &mut rng).iter().map(|l| self.f.neg(&l.coeffs[0])).collect();
        r.sort_by_key(|c| self.f.index_of(c));
        r
    }
}
