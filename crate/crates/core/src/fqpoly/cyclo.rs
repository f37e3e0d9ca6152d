use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Factored, PolyRing};
use crate::ffield::{ExtField, Field};
use crate::intnt::{divisors_u64, euler_phi_u64, factor_u64, prime_power};

fn split_p(n: u64, p: u64) -> (u64, u32) {
    let mut n0 = n;
    let mut a = 0;
    while n0.is_multiple_of(p) {
        n0 /= p;
        a += 1;
    }
    (n0, a)
}

fn mult_order_mod(q: u64, d: u64) -> u64 {
    if d == 1 {
        return 1;
    }
    let qm = q % d;
    let mut x = qm;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * qm as u128) % d as u128) as u64;
        k += 1;
    }
    k
}

/// Irreducible factors of `x^n - 1` over `f`, with multiplicities.
///
/// Writing `n = p^a n0`, the roots of `x^n0 - 1` are powers of an element
/// `zeta` of order `n0` in the extension of degree `ord_n0(q)`. Each cyclotomic
/// coset `{j, jq, jq^2, ...} mod n0` gives one irreducible factor whose
/// coefficients lie in `f`. Every factor has multiplicity `p^a`.
///
/// Factors are ordered by degree, then lexicographically on coefficient
/// indices read from the constant term upward.
pub fn factor_xn_minus_1<F: Field>(f: &F, n: u64) -> Factored<F::Elem> {
    assert!(n >= 1);
    let p = f.characteristic();
    let q = f.size_u64().expect("coefficient field must be enumerable");
    let (n0, a) = split_p(n, p);
    let mult = (p as u32).pow(a);
    let ring = PolyRing::new(f);
    if n0 == 1 {
        return vec![(ring.linear(&f.one()), mult)];
    }
    let d = mult_order_mod(q, n0) as usize;
    let ext = ExtField::with_degree(f.clone(), d, 0);
    let er = PolyRing::new(&ext);
    let group = ext.size() - 1u32;
    let cofactor = &group / BigUint::from(n0);
    let primes = factor_u64(n0).primes_u64().expect("small");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let zeta = loop {
        let beta = ext.random(&mut rng);
        if ext.is_zero(&beta) {
            continue;
        }
        let z = ext.pow(&beta, &cofactor);
        if primes.iter().all(|s| !ext.is_one(&ext.pow_u64(&z, n0 / s))) {
            break z;
        }
    };
    let mut powers = Vec::with_capacity(n0 as usize);
    let mut cur = ext.one();
    for _ in 0..n0 {
        powers.push(cur.clone());
        cur = ext.mul(&cur, &zeta);
    }
    let mut seen = vec![false; n0 as usize];
    let mut out = Vec::new();
    for j in 0..n0 {
        if seen[j as usize] {
            continue;
        }
        let mut poly = er.one();
        let mut k = j;
        loop {
            seen[k as usize] = true;
            poly = er.mul(&poly, &er.linear(&powers[k as usize]));
            k = ((k as u128 * q as u128) % n0 as u128) as u64;
            if k == j {
                break;
            }
        }
        let coeffs = poly
            .coeffs
            .iter()
            .map(|c| ext.as_base(c).expect("coset product has coefficients in the base field"))
            .collect();
        out.push((ring.normalized(coeffs), mult));
    }
    ring.sort_canonical(&mut out);
    out
}

/// Number of distinct irreducible factors of `x^n - 1` over `F_q`:
/// `sum_{d | n0} phi(d) / ord_d(q)`.
pub fn count_xn_minus_1_factors(q: u64, n: u64) -> u64 {
    xn_minus_1_degree_profile(q, n).values().sum()
}

/// Map from factor degree to the number of distinct irreducible factors of
/// that degree.
pub fn xn_minus_1_degree_profile(q: u64, n: u64) -> BTreeMap<u64, u64> {
    let (p, _) = prime_power(q).expect("q must be a prime power");
    let (n0, _) = split_p(n, p);
    let mut out = BTreeMap::new();
    for d in divisors_u64(n0) {
        let o = mult_order_mod(q, d);
        *out.entry(o).or_insert(0) += euler_phi_u64(d) / o;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::SmallField;
    use crate::fqpoly::Poly;

    fn degrees(f: &Factored<u32>) -> Vec<(usize, u32)> {
        f.iter().map(|(p, e)| (p.degree().unwrap(), *e)).collect()
    }

    #[test]
    fn q5_examples() {
        let f5 = SmallField::prime(5).unwrap();
        let f8 = factor_xn_minus_1(&f5, 8);
        assert_eq!(degrees(&f8), vec![(1, 1), (1, 1), (1, 1), (1, 1), (2, 1), (2, 1)]);
        let f10 = factor_xn_minus_1(&f5, 10);
        assert_eq!(f10, vec![(Poly::new(vec![1, 1]), 5), (Poly::new(vec![4, 1]), 5)]);
        let f7 = factor_xn_minus_1(&f5, 7);
        assert_eq!(degrees(&f7), vec![(1, 1), (6, 1)]);
    }

    #[test]
    fn ordering_is_canonical() {
        let f7 = SmallField::prime(7).unwrap();
        let f = factor_xn_minus_1(&f7, 3);
        // x - 1, x - 2, x - 4 as x+6, x+5, x+3: sorted by constant term
        let consts: Vec<u32> = f.iter().map(|(p, _)| p.coeffs[0]).collect();
        assert_eq!(consts, vec![3, 5, 6]);
    }

    #[test]
    fn matches_generic_factoring() {
        for (p, m) in [(2u64, 1u32), (3, 1), (3, 2), (5, 1), (7, 1), (2, 3), (13, 1)] {
            let f = SmallField::new(p, m, 0).unwrap();
            let r = PolyRing::new(&f);
            for n in 1..=24u64 {
                let a = factor_xn_minus_1(&f, n);
                let b = r.factor(&r.xn_minus_1(n as usize), 0);
                assert_eq!(a, b, "q={} n={n}", f.q());
                assert_eq!(a.len() as u64, count_xn_minus_1_factors(f.q(), n));
            }
        }
    }
}
