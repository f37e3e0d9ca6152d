use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ExtField, Field, SmallField};
use crate::error::{Error, Result};
use crate::fqpoly::{factor_xn_minus_1, Factored, Poly, PolyRing};
use crate::intnt::{factor_q_pow_n_minus_1, Factorization, DEFAULT_BUDGET};

/// Element of `F_{q^n}`: `n` coefficients in `F_q`, each an index whose
/// base-`p` digits are its residues.
pub type FieldElem = Vec<u32>;

/// Default field-size ceiling for discrete logs.
pub const DLOG_CAP: u64 = 1 << 32;

/// Immutable description of `F_p ⊂ F_q ⊂ F_{q^n}`.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    m: u32,
    n: u32,
    q: u64,
    seed: u64,
    fq: SmallField,
    fqn: ExtField<SmallField>,
    generator: FieldElem,
    order: BigUint,
    group_order_fact: Factorization,
    trace_table: Vec<Vec<u32>>,
    xn1: OnceLock<Factored<u32>>,
}

/// Canonical serialization of a [`FieldCtx`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtxManifest {
    pub p: u64,
    pub m: u32,
    pub n: u32,
    pub seed: u64,
    pub base_poly: Vec<u32>,
    pub ext_poly: Vec<Vec<u32>>,
    pub generator: Vec<Vec<u32>>,
    pub group_order: Factorization,
}

/// Build the tower with the default factoring budget.
pub fn make_ctx(p: u64, m: u32, n: u32, seed: u64) -> Result<FieldCtx> {
    FieldCtx::new(p, m, n, seed, DEFAULT_BUDGET)
}

impl FieldCtx {
    /// Irreducibles come from a search over monic candidates starting at
    /// index `seed`; the generator from seeded pseudorandom candidates.
    pub fn new(p: u64, m: u32, n: u32, seed: u64, budget: u64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("m and n must be positive".into()));
        }
        let fq = SmallField::new(p, m, seed)?;
        let ext_poly = PolyRing::new(&fq).find_irreducible(n as usize, seed);
        Self::assemble(fq, ext_poly, None, seed, budget)
    }

    /// Rebuild from a manifest, re-checking every invariant.
    pub fn from_manifest(man: &CtxManifest) -> Result<Self> {
        let fq = SmallField::from_modulus(man.p, &man.base_poly)?;
        if fq.m() != man.m {
            return Err(Error::InvalidArgument("base polynomial degree mismatch".into()));
        }
        let coeffs: Vec<u32> = man.ext_poly.iter().map(|r| fq.from_digits(r)).collect();
        let ext_poly = Poly::new(coeffs);
        if ext_poly.degree() != Some(man.n as usize) || !PolyRing::new(&fq).is_irreducible(&ext_poly) {
            return Err(Error::InvalidArgument("extension polynomial is not irreducible of degree n".into()));
        }
        let gen: FieldElem = man.generator.iter().map(|r| fq.from_digits(r)).collect();
        let ctx = Self::assemble(fq, ext_poly, Some(gen), man.seed, DEFAULT_BUDGET)?;
        Ok(ctx)
    }

    fn assemble(
        fq: SmallField,
        ext_poly: Poly<u32>,
        generator: Option<FieldElem>,
        seed: u64,
        budget: u64,
    ) -> Result<Self> {
        let p = fq.p();
        let m = fq.m();
        let q = fq.q();
        let n = ext_poly.degree().unwrap() as u32;
        let fqn = ExtField::new(fq.clone(), ext_poly);
        let order = fqn.size() - 1u32;
        let fact = factor_q_pow_n_minus_1(&BigUint::from(q), n as u64, budget);
        fact.require_complete()?;
        let mut ctx = FieldCtx {
            p,
            m,
            n,
            q,
            seed,
            fq,
            fqn,
            generator: Vec::new(),
            order,
            group_order_fact: fact,
            trace_table: Vec::new(),
            xn1: OnceLock::new(),
        };
        ctx.generator = match generator {
            Some(g) => {
                if g.len() != n as usize || !ctx.is_generator(&g) {
                    return Err(Error::InvalidArgument("generator does not have full order".into()));
                }
                g
            }
            None => ctx.find_generator(seed),
        };
        ctx.trace_table = (0..n as usize)
            .map(|j| {
                let mut xj = ctx.fqn.zero();
                xj[j] = 1;
                let tj = ctx.fqn.trace_to_base(&xj);
                (0..m)
                    .map(|i| {
                        let ti = (p as u32).pow(i);
                        ctx.fq.trace(ctx.fq.mul(&ti, &tj))
                    })
                    .collect()
            })
            .collect();
        Ok(ctx)
    }

    fn is_generator(&self, g: &FieldElem) -> bool {
        if self.fqn.is_zero(g) {
            return false;
        }
        if !self.fqn.is_one(&self.fqn.pow(g, &self.order)) {
            return false;
        }
        self.group_order_fact.factors.iter().all(|(s, _)| !self.fqn.is_one(&self.fqn.pow(g, &(&self.order / s))))
    }

    fn find_generator(&self, seed: u64) -> FieldElem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let c = self.fqn.random(&mut rng);
            if self.is_generator(&c) {
                return c;
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    /// `F_q`.
    pub fn base(&self) -> &SmallField {
        &self.fq
    }
    /// `F_{q^n}`.
    pub fn ext(&self) -> &ExtField<SmallField> {
        &self.fqn
    }
    pub fn generator(&self) -> &FieldElem {
        &self.generator
    }
    /// `q^n - 1`.
    pub fn order(&self) -> &BigUint {
        &self.order
    }
    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }
    pub fn group_order_fact(&self) -> &Factorization {
        &self.group_order_fact
    }
    /// `q^n` when it fits.
    pub fn size_u64(&self) -> Option<u64> {
        self.fqn.size_u64()
    }
    /// Irreducible factors of `x^n - 1` over `F_q`, in canonical order.
    pub fn xn1_factors(&self) -> &Factored<u32> {
        self.xn1.get_or_init(|| factor_xn_minus_1(&self.fq, self.n as u64))
    }

    /// `x^n - 1` over `F_q`.
    pub fn xn1(&self) -> Poly<u32> {
        PolyRing::new(&self.fq).xn_minus_1(self.n as usize)
    }

    pub fn ext_poly(&self) -> &Poly<u32> {
        self.fqn.modulus()
    }

    pub fn zero(&self) -> FieldElem {
        self.fqn.zero()
    }
    pub fn one(&self) -> FieldElem {
        self.fqn.one()
    }

    /// Embedding of `F_q`.
    pub fn embed(&self, c: u32) -> FieldElem {
        self.fqn.embed(&c)
    }

    /// `F_q`-residues of each coefficient.
    pub fn residues(&self, a: &FieldElem) -> Vec<Vec<u32>> {
        a.iter().map(|&c| self.fq.digits(c)).collect()
    }

    pub fn from_residues(&self, r: &[Vec<u32>]) -> Result<FieldElem> {
        if r.len() != self.n as usize || r.iter().any(|c| c.len() != self.m as usize) {
            return Err(Error::InvalidArgument("coefficient shape does not match the field".into()));
        }
        if r.iter().flatten().any(|&d| d as u64 >= self.p) {
            return Err(Error::InvalidArgument("residue out of range".into()));
        }
        Ok(r.iter().map(|c| self.fq.from_digits(c)).collect())
    }

    /// `a^q`.
    pub fn frobenius_q(&self, a: &FieldElem) -> FieldElem {
        self.fqn.frobenius(a)
    }

    /// Absolute trace to `F_p`.
    pub fn trace_to_prime(&self, a: &FieldElem) -> u32 {
        let p = self.p;
        let mut acc = 0u64;
        for (c, row) in a.iter().zip(&self.trace_table) {
            if *c == 0 {
                continue;
            }
            for (d, t) in self.fq.digits(*c).iter().zip(row) {
                acc = (acc + *d as u64 * *t as u64) % p;
            }
        }
        acc as u32
    }

    /// Multiplicative order, by dividing out prime factors of `q^n - 1`.
    pub fn mult_order(&self, a: &FieldElem) -> Result<BigUint> {
        if self.fqn.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        let mut ord = self.order.clone();
        for (s, e) in &self.group_order_fact.factors {
            for _ in 0..*e {
                let cand = &ord / s;
                if self.fqn.is_one(&self.fqn.pow(a, &cand)) {
                    ord = cand;
                } else {
                    break;
                }
            }
        }
        Ok(ord)
    }

    /// `generator^k`.
    pub fn gamma_pow(&self, k: &BigUint) -> FieldElem {
        self.fqn.pow(&self.generator, k)
    }

    /// Baby-step giant-step discrete log to the base of the generator.
    pub fn dlog(&self, a: &FieldElem) -> Result<u64> {
        self.dlog_capped(a, DLOG_CAP)
    }

    pub fn dlog_capped(&self, a: &FieldElem, cap: u64) -> Result<u64> {
        if self.fqn.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        let size = self
            .size_u64()
            .filter(|&s| s <= cap)
            .ok_or_else(|| Error::SizeCap { size: self.fqn.size().to_string(), cap: cap.to_string() })?;
        let order = size - 1;
        let step = (order as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = self.one();
        for j in 0..step {
            baby.entry(cur.clone()).or_insert(j);
            cur = self.fqn.mul(&cur, &self.generator);
        }
        let giant = self.fqn.inv(&self.fqn.pow_u64(&self.generator, step)).unwrap();
        let mut y = a.clone();
        for i in 0..=step {
            if let Some(&j) = baby.get(&y) {
                return Ok((i * step + j) % order);
            }
            y = self.fqn.mul(&y, &giant);
        }
        unreachable!("generator has full order")
    }

    /// Full table of discrete logs, indexed by element index.
    pub fn dlog_table(&self, cap: u64) -> Result<DlogTable> {
        let size = self
            .size_u64()
            .filter(|&s| s <= cap)
            .ok_or_else(|| Error::SizeCap { size: self.fqn.size().to_string(), cap: cap.to_string() })?;
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = self.one();
        for k in 0..size - 1 {
            log[self.fqn.index_of(&cur) as usize] = k as u32;
            cur = self.fqn.mul(&cur, &self.generator);
        }
        Ok(DlogTable { log })
    }

    pub fn manifest(&self) -> CtxManifest {
        CtxManifest {
            p: self.p,
            m: self.m,
            n: self.n,
            seed: self.seed,
            base_poly: self.fq.modulus().to_vec(),
            ext_poly: self.fqn.modulus().coeffs.iter().map(|&c| self.fq.digits(c)).collect(),
            generator: self.residues(&self.generator),
            group_order: self.group_order_fact.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.manifest()).expect("serializable")
    }

    /// Multiplicative order of `generator^k`.
    pub fn order_of_gamma_pow(&self, k: &BigUint) -> BigUint {
        &self.order / k.gcd(&self.order)
    }

    /// Iterator over all elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let size = self.size_u64().expect("enumerable");
        (0..size).map(move |i| self.fqn.from_index(i))
    }

    pub fn is_in_base(&self, a: &FieldElem) -> bool {
        self.fqn.as_base(a).is_some()
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self, a: &FieldElem) -> bool {
        self.fqn.is_one(a)
    }

    pub fn pow_big(&self, a: &FieldElem, e: &BigUint) -> FieldElem {
        if e.is_zero() {
            return self.one();
        }
        self.fqn.pow(a, e)
    }
}

/// Discrete logs of every nonzero element.
#[derive(Clone, Debug)]
pub struct DlogTable {
    log: Vec<u32>,
}

impl DlogTable {
    pub fn get(&self, index: u64) -> Option<u32> {
        match self.log.get(index as usize) {
            Some(&u32::MAX) | None => None,
            Some(&l) => Some(l),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ctx_examples() {
        let c = make_ctx(7, 1, 7, 0).unwrap();
        assert_eq!(c.q(), 7);
        assert_eq!(c.order(), &BigUint::from(823542u32));
        assert_eq!(c.mult_order(c.generator()).unwrap(), BigUint::from(823542u32));

        let c = make_ctx(5, 1, 1, 0).unwrap();
        assert_eq!(c.mult_order(c.generator()).unwrap(), BigUint::from(4u32));

        let c = make_ctx(3, 2, 2, 0).unwrap();
        assert_eq!(c.q(), 9);
        assert_eq!(c.order(), &BigUint::from(80u32));
        // brute-force orders of every element
        for a in c.elements().skip(1) {
            let mut k = 1u64;
            let mut x = a.clone();
            while !c.is_one(&x) {
                x = c.ext().mul(&x, &a);
                k += 1;
            }
            assert_eq!(c.mult_order(&a).unwrap(), BigUint::from(k));
        }
        assert!(matches!(c.mult_order(&c.zero()), Err(Error::ZeroElement)));
    }

    #[test]
    fn frobenius_fixes_subfield() {
        let c = make_ctx(3, 2, 2, 0).unwrap();
        let fixed: Vec<_> = c.elements().filter(|a| c.frobenius_q(a) == *a).collect();
        assert_eq!(fixed.len(), 9);
        assert!(fixed.iter().all(|a| c.is_in_base(a)));
        for a in c.elements() {
            let mut x = a.clone();
            for _ in 0..c.n() {
                x = c.frobenius_q(&x);
            }
            assert_eq!(x, a);
        }
    }

    #[test]
    fn index_two_subgroup() {
        let c = make_ctx(7, 1, 3, 0).unwrap();
        let g2 = c.ext().square(c.generator());
        assert_eq!(c.mult_order(&g2).unwrap(), c.order() / 2u32);
    }

    #[test]
    fn trace_is_linear_and_onto() {
        for (p, m, n) in [(3u64, 1u32, 4u32), (2, 2, 3), (5, 2, 2), (7, 1, 1), (3, 2, 1)] {
            let c = make_ctx(p, m, n, 0).unwrap();
            let mut counts = vec![0u64; p as usize];
            for a in c.elements() {
                counts[c.trace_to_prime(&a) as usize] += 1;
            }
            let size = c.size_u64().unwrap();
            assert!(counts.iter().all(|&k| k == size / p), "{p} {m} {n}");
            // direct oracle: sum of p-power conjugates
            let k = (m * n) as u64;
            for a in c.elements().take(40) {
                let mut acc = c.zero();
                let mut x = a.clone();
                for _ in 0..k {
                    acc = c.ext().add(&acc, &x);
                    x = c.ext().pow_u64(&x, p);
                }
                assert_eq!(acc, c.embed(c.trace_to_prime(&a)));
            }
        }
    }

    #[test]
    fn dlog_roundtrip() {
        let c = make_ctx(3, 2, 3, 1).unwrap();
        assert_eq!(c.dlog(&c.one()).unwrap(), 0);
        assert_eq!(c.dlog(c.generator()).unwrap(), 1);
        let table = c.dlog_table(1 << 20).unwrap();
        let ord = c.order_u64().unwrap();
        for k in (0..ord).step_by(37) {
            let a = c.gamma_pow(&BigUint::from(k));
            assert_eq!(c.dlog(&a).unwrap(), k);
            assert_eq!(table.get(c.ext().index_of(&a)), Some(k as u32));
        }
        assert!(matches!(c.dlog_capped(&c.one(), 10), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn order_census_matches_phi() {
        use crate::intnt::{divisors_u64, euler_phi_u64};
        for (p, m, n) in [(2u64, 1u32, 6u32), (3, 1, 4), (5, 1, 2), (2, 2, 3), (7, 1, 4)] {
            let c = make_ctx(p, m, n, 0).unwrap();
            let ord = c.order_u64().unwrap();
            let mut counts = HashMap::new();
            for a in c.elements().skip(1) {
                *counts.entry(c.mult_order(&a).unwrap().to_u64().unwrap()).or_insert(0u64) += 1;
            }
            for d in divisors_u64(ord) {
                assert_eq!(counts.get(&d).copied().unwrap_or(0), euler_phi_u64(d));
            }
        }
    }

    #[test]
    fn manifest_roundtrip() {
        let c = make_ctx(5, 2, 3, 4).unwrap();
        let js = c.to_json();
        let man: CtxManifest = serde_json::from_str(&js).unwrap();
        let back = FieldCtx::from_manifest(&man).unwrap();
        assert_eq!(back.generator(), c.generator());
        assert_eq!(back.to_json(), js);
        let mut bad = man.clone();
        bad.generator = c.residues(&c.one());
        assert!(FieldCtx::from_manifest(&bad).is_err());
    }

    #[test]
    fn seeded_construction_is_deterministic() {
        let a = make_ctx(7, 2, 3, 11).unwrap();
        let b = make_ctx(7, 2, 3, 11).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
