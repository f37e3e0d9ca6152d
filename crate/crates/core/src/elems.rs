//! Element classification: F_q-order, k-normality, r-primitivity,
//! (R,r)-freeness and g-freeness.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{ExtField, Field, FieldCtx, FieldElem, SmallField};
use crate::fqpoly::{Poly, PolyRing};

/// Classification of one element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElemProfile {
    pub element: FieldElem,
    /// Zero for the zero element.
    #[serde(with = "crate::intnt::decimal")]
    pub mult_order: BigUint,
    pub fq_order: Poly<u32>,
    pub k: usize,
}

/// `alpha, alpha^q, ..., alpha^(q^(n-1))`.
pub fn conjugates(ctx: &FieldCtx, a: &FieldElem) -> Vec<FieldElem> {
    let n = ctx.n() as usize;
    let mut out = Vec::with_capacity(n);
    let mut x = a.clone();
    for _ in 0..n {
        let next = ctx.frobenius_q(&x);
        out.push(x);
        x = next;
    }
    out
}

/// `f ∘ alpha` from precomputed conjugates.
pub fn action_from_conjugates(ctx: &FieldCtx, f: &Poly<u32>, conj: &[FieldElem]) -> FieldElem {
    let ext = ctx.ext();
    let fq = ctx.base();
    let n = conj.len();
    let mut acc = ext.zero();
    for (i, c) in f.coeffs.iter().enumerate() {
        if *c == 0 {
            continue;
        }
        let x = &conj[i % n];
        for (o, xi) in acc.iter_mut().zip(x) {
            *o = fq.add(o, &fq.mul(c, xi));
        }
    }
    acc
}

/// `f ∘ alpha = sum f_i alpha^(q^i)`.
pub fn additive_action(ctx: &FieldCtx, f: &Poly<u32>, a: &FieldElem) -> FieldElem {
    action_from_conjugates(ctx, f, &conjugates(ctx, a))
}

/// Exponents of `Ord(alpha)` against [`FieldCtx::xn1_factors`].
pub fn fq_order_exps(ctx: &FieldCtx, conj: &[FieldElem]) -> Vec<u32> {
    let fq = ctx.base();
    let ring = PolyRing::new(fq);
    let factors = ctx.xn1_factors();
    let mut exps: Vec<u32> = factors.iter().map(|(_, e)| *e).collect();
    let mut current = ctx.xn1();
    for (i, (p, _)) in factors.iter().enumerate() {
        while exps[i] > 0 {
            let cand = ring.div(&current, p);
            if ctx.ext().is_zero(&action_from_conjugates(ctx, &cand, conj)) {
                current = cand;
                exps[i] -= 1;
            } else {
                break;
            }
        }
    }
    exps
}

fn poly_from_exps(ctx: &FieldCtx, exps: &[u32]) -> Poly<u32> {
    let ring = PolyRing::new(ctx.base());
    ctx.xn1_factors().iter().zip(exps).fold(ring.one(), |acc, ((p, _), &e)| ring.mul(&acc, &ring.pow(p, e)))
}

/// Minimal monic `h | x^n - 1` with `h ∘ alpha = 0`.
pub fn fq_order(ctx: &FieldCtx, a: &FieldElem) -> Poly<u32> {
    let exps = fq_order_exps(ctx, &conjugates(ctx, a));
    poly_from_exps(ctx, &exps)
}

/// `deg gcd(g_alpha, x^n - 1)` with `g_alpha = sum alpha^(q^i) x^(n-1-i)`.
pub fn normality_k(ctx: &FieldCtx, a: &FieldElem) -> usize {
    let ext: &ExtField<SmallField> = ctx.ext();
    let ring = PolyRing::new(ext);
    let n = ctx.n() as usize;
    let conj = conjugates(ctx, a);
    let mut coeffs = vec![ext.zero(); n];
    for (i, c) in conj.into_iter().enumerate() {
        coeffs[n - 1 - i] = c;
    }
    let g = ring.normalized(coeffs);
    let xn1 = ring.xn_minus_1(n);
    ring.gcd(&g, &xn1).degree().unwrap_or(0)
}

/// `n - deg Ord(alpha)`.
pub fn k_from_order(ctx: &FieldCtx, a: &FieldElem) -> usize {
    ctx.n() as usize - fq_order(ctx, a).degree().unwrap()
}

pub fn profile(ctx: &FieldCtx, a: &FieldElem) -> ElemProfile {
    let ord = fq_order(ctx, a);
    let k = ctx.n() as usize - ord.degree().unwrap();
    let mult_order = if ctx.is_zero(a) { BigUint::zero() } else { ctx.mult_order(a).expect("nonzero") };
    ElemProfile { element: a.clone(), mult_order, fq_order: ord, k }
}

fn check_divides_xn1(ctx: &FieldCtx, g: &Poly<u32>) -> Result<()> {
    let ring = PolyRing::new(ctx.base());
    if g.is_zero() || !ring.is_monic(g) || !ring.divides(g, &ctx.xn1()) {
        return Err(Error::InvalidArgument("g must be a monic divisor of x^n - 1".into()));
    }
    Ok(())
}

/// Order route: `gcd(g, (x^n - 1) / Ord(alpha)) = 1`.
pub fn is_g_free(ctx: &FieldCtx, a: &FieldElem, g: &Poly<u32>) -> Result<bool> {
    check_divides_xn1(ctx, g)?;
    let ring = PolyRing::new(ctx.base());
    let co = ring.div(&ctx.xn1(), &fq_order(ctx, a));
    Ok(ring.is_one(&ring.gcd(g, &co)))
}

/// Solvability route: for each irreducible `h | g`, `alpha = h ∘ beta` is
/// solvable iff `((x^n - 1) / h) ∘ alpha = 0`.
pub fn is_g_free_direct(ctx: &FieldCtx, a: &FieldElem, g: &Poly<u32>) -> Result<bool> {
    check_divides_xn1(ctx, g)?;
    let ring = PolyRing::new(ctx.base());
    let conj = conjugates(ctx, a);
    let xn1 = ctx.xn1();
    for (h, _) in ctx.xn1_factors() {
        if !ring.divides(h, g) {
            continue;
        }
        let co = ring.div(&xn1, h);
        if ctx.ext().is_zero(&action_from_conjugates(ctx, &co, &conj)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_rr(ctx: &FieldCtx, big_r: &BigUint, r: &BigUint) -> Result<()> {
    let n = ctx.order();
    if r.is_zero() || big_r.is_zero() || !(n % r).is_zero() || !((n / r) % big_r).is_zero() {
        return Err(Error::InvalidArgument("need r | q^n - 1 and R | (q^n - 1)/r".into()));
    }
    Ok(())
}

/// Membership in the index-`r` subgroup and `R`-freeness within it.
pub fn is_rr_free(ctx: &FieldCtx, a: &FieldElem, big_r: &BigUint, r: &BigUint) -> Result<bool> {
    check_rr(ctx, big_r, r)?;
    if ctx.is_zero(a) {
        return Ok(false);
    }
    let e = ctx.order() / r;
    if !ctx.is_one(&ctx.pow_big(a, &e)) {
        return Ok(false);
    }
    for (s, _) in &ctx.group_order_fact().factors {
        if (big_r % s).is_zero() && ctx.is_one(&ctx.pow_big(a, &(&e / s))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Multiplicative order `(q^n - 1) / r`.
pub fn is_r_primitive(ctx: &FieldCtx, a: &FieldElem, r: &BigUint) -> Result<bool> {
    if r.is_zero() || !(ctx.order() % r).is_zero() {
        return Err(Error::InvalidArgument("r must divide q^n - 1".into()));
    }
    if ctx.is_zero(a) {
        return Ok(false);
    }
    Ok(ctx.mult_order(a)? == ctx.order() / r)
}

/// `f ∘ beta` for a normal `beta`; has k-normality `deg f`.
pub fn construct_k_normal(ctx: &FieldCtx, f: &Poly<u32>, beta: &FieldElem) -> Result<FieldElem> {
    check_divides_xn1(ctx, f)?;
    if k_from_order(ctx, beta) != 0 {
        return Err(Error::NotNormal);
    }
    Ok(additive_action(ctx, f, beta))
}

/// First normal element in a seeded pseudorandom scan.
pub fn find_normal(ctx: &FieldCtx, seed: u64) -> FieldElem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a = ctx.ext().random(&mut rng);
        if k_from_order(ctx, &a) == 0 {
            return a;
        }
    }
}

/// Prime factors of `q^n - 1` dividing `t`.
pub fn primes_dividing(ctx: &FieldCtx, t: &BigUint) -> Vec<BigUint> {
    ctx.group_order_fact().factors.iter().filter(|(s, _)| (t % s).is_zero()).map(|(s, _)| s.clone()).collect()
}

/// `gcd(j, q^n - 1)`, the `r` for which `generator^j` is r-primitive.
pub fn primitivity_index(ctx: &FieldCtx, j: &BigUint) -> BigUint {
    j.gcd(ctx.order())
}

/// Exhaustive identity checks on a small field.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FieldIdentityReport {
    pub field: String,
    pub elements: u64,
    /// Elements where the gcd and order routes for k disagree.
    pub k_mismatches: u64,
    /// `(element, g)` pairs where the two g-freeness routes disagree.
    pub g_free_mismatches: u64,
    pub g_free_checks: u64,
    /// Divisors `d` of `x^n - 1` with `#{Ord = d} != Phi_q(d)`.
    pub order_census_failures: u64,
    /// Divisors `r` of `q^n - 1` with `#{r-primitive} != phi((q^n - 1)/r)`.
    pub primitive_census_failures: u64,
}

impl FieldIdentityReport {
    pub fn passed(&self) -> bool {
        self.k_mismatches == 0
            && self.g_free_mismatches == 0
            && self.order_census_failures == 0
            && self.primitive_census_failures == 0
    }
}

/// Dual-route k-normality and g-freeness over every element, plus the
/// F_q-order and multiplicative-order censuses.
pub fn field_identities(ctx: &FieldCtx) -> Result<FieldIdentityReport> {
    use std::collections::HashMap;
    let size =
        ctx.size_u64().ok_or_else(|| Error::SizeCap { size: ctx.order().to_string(), cap: u64::MAX.to_string() })?;
    let ring = PolyRing::new(ctx.base());
    let fac = ctx.xn1_factors();
    let divs = crate::fqpoly::poly_divisors(&ring, fac);
    let gs: Vec<Poly<u32>> = if divs.len() <= 64 {
        divs.iter().map(|d| d.poly.clone()).collect()
    } else {
        fac.iter().map(|(g, _)| g.clone()).chain(std::iter::once(ctx.xn1())).collect()
    };
    let mut rep =
        FieldIdentityReport { field: format!("F_{}^{}", ctx.q(), ctx.n()), elements: size, ..Default::default() };
    let mut by_ord: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut by_mult: HashMap<BigUint, u64> = HashMap::new();
    for a in ctx.elements() {
        let conj = conjugates(ctx, &a);
        let exps = fq_order_exps(ctx, &conj);
        if normality_k(ctx, &a) != k_from_order(ctx, &a) {
            rep.k_mismatches += 1;
        }
        for g in &gs {
            rep.g_free_checks += 1;
            if is_g_free(ctx, &a, g)? != is_g_free_direct(ctx, &a, g)? {
                rep.g_free_mismatches += 1;
            }
        }
        *by_ord.entry(exps).or_default() += 1;
        if !ctx.is_zero(&a) {
            *by_mult.entry(ctx.mult_order(&a)?).or_default() += 1;
        }
    }
    let q = BigUint::from(ctx.q());
    for (exps, cnt) in &by_ord {
        let sub: Vec<_> = fac.iter().zip(exps).filter(|(_, &e)| e > 0).map(|((p, _), &e)| (p.clone(), e)).collect();
        if crate::fqpoly::poly_phi(&sub, &q) != BigUint::from(*cnt) {
            rep.order_census_failures += 1;
        }
    }
    let order = ctx.order_u64().expect("small field");
    for r in crate::intnt::divisors_u64(order) {
        let got = by_mult.get(&BigUint::from(order / r)).copied().unwrap_or(0);
        if got != crate::intnt::euler_phi_u64(order / r) {
            rep.primitive_census_failures += 1;
        }
    }
    Ok(rep)
}
