//! Integer factorization: trial division, probable-prime tests, Pollard p-1
//! and Brent's variant of Pollard rho, plus the algebraic split of `q^n - 1`
//! into cyclotomic values.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::primes::{is_prime_u64, primes_below};
use super::Factorization;

/// Trial division bound.
pub const TRIAL_BOUND: u64 = 1_000_000;
/// Default rho iteration budget per composite.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
/// Strong probable-prime rounds for multi-word candidates.
pub const MR_ROUNDS: usize = 64;

const P_MINUS_1_BOUND: u64 = 100_000;

fn trial_primes() -> &'static [u64] {
    static CACHE: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| primes_below(TRIAL_BOUND))
}

// ---------------------------------------------------------------------------
// primality

fn jacobi(a: &BigUint, n: &BigUint) -> i32 {
    debug_assert!(n.is_odd());
    let mut a = a % n;
    let mut n = n.clone();
    let mut t = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigUint::from(3u32) && (&n % 4u32) == BigUint::from(3u32) {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

fn strong_mr_round(n: &BigUint, d: &BigUint, s: u32, a: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let mut x = a.modpow(d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

fn mod_sub(a: &BigUint, b: &BigUint, n: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        n - (b - a)
    }
}

fn half_mod(x: BigUint, n: &BigUint) -> BigUint {
    if x.is_even() {
        x >> 1
    } else {
        (x + n) >> 1
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters (P = 1).
pub fn strong_lucas(n: &BigUint) -> bool {
    if n < &BigUint::from(3u32) || n.is_even() {
        return n == &BigUint::from(2u32);
    }
    // perfect squares never yield a D with Jacobi -1
    let r = n.sqrt();
    if &(&r * &r) == n {
        return false;
    }
    // D in 5, -7, 9, -11, ...
    let mut d_abs: u64 = 5;
    let mut neg = false;
    loop {
        let dm = if neg { mod_sub(&BigUint::zero(), &(BigUint::from(d_abs) % n), n) } else { BigUint::from(d_abs) % n };
        let j = jacobi(&dm, n);
        if j == -1 {
            break;
        }
        if j == 0 && BigUint::from(d_abs) % n != BigUint::zero() {
            return false;
        }
        d_abs += 2;
        neg = !neg;
    }
    let d_signed: i64 = if neg { -(d_abs as i64) } else { d_abs as i64 };
    // Q = (1 - D) / 4
    let q_signed = (1 - d_signed) / 4;
    let to_mod = |v: i64| -> BigUint {
        if v >= 0 {
            BigUint::from(v as u64) % n
        } else {
            mod_sub(&BigUint::zero(), &(BigUint::from((-v) as u64) % n), n)
        }
    };
    let dm = to_mod(d_signed);
    let qm = to_mod(q_signed);
    let two = BigUint::from(2u32);

    let np1 = n + 1u32;
    let s = np1.trailing_zeros().unwrap() as u32;
    let d = &np1 >> s;

    let mut u = BigUint::one();
    let mut v = BigUint::one(); // V_1 = P = 1
    let mut qk = qm.clone();
    let bits = d.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v) % n;
        v = mod_sub(&((&v * &v) % n), &((&two * &qk) % n), n);
        qk = (&qk * &qk) % n;
        if d.bit(i) {
            let nu = half_mod(&u + &v, n);
            let nv = half_mod((&dm * &u) % n + &v, n);
            u = nu % n;
            v = nv % n;
            qk = (&qk * &qm) % n;
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = mod_sub(&((&v * &v) % n), &((&two * &qk) % n), n);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk) % n;
    }
    false
}

/// Probable-prime test: deterministic below 2^64, otherwise a strong Lucas
/// test plus [`MR_ROUNDS`] strong Miller-Rabin rounds (base 2 and seeded
/// pseudo-random bases).
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_even() {
        return false;
    }
    for &p in &trial_primes()[..200] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap() as u32;
    let d = &nm1 >> s;
    if !strong_mr_round(n, &d, s, &BigUint::from(2u32)) {
        return false;
    }
    if !strong_lucas(n) {
        return false;
    }
    let seed = n.iter_u64_digits().next().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nm3 = n - 3u32;
    for _ in 1..MR_ROUNDS {
        let a = random_below(&mut rng, &nm3) + 2u32;
        if !strong_mr_round(n, &d, s, &a) {
            return false;
        }
    }
    true
}

fn random_below(rng: &mut impl Rng, bound: &BigUint) -> BigUint {
    let words = bound.iter_u64_digits().count();
    let digits: Vec<u64> = (0..words + 1).map(|_| rng.random()).collect();
    let mut bytes = Vec::with_capacity(digits.len() * 8);
    for w in digits {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    BigUint::from_bytes_le(&bytes) % bound
}

// ---------------------------------------------------------------------------
// splitting

trait ModArith {
    type T: Clone + PartialEq;
    fn modulus(&self) -> &Self::T;
    fn from_u64(&self, v: u64) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn absdiff(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn gcd_n(&self, a: &Self::T) -> Self::T;
    fn is_one(&self, a: &Self::T) -> bool;
}

struct U64Mod(u64);

impl ModArith for U64Mod {
    type T = u64;
    fn modulus(&self) -> &u64 {
        &self.0
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.0 as u128) as u64
    }
    fn absdiff(&self, a: &u64, b: &u64) -> u64 {
        a.abs_diff(*b)
    }
    fn gcd_n(&self, a: &u64) -> u64 {
        a.gcd(&self.0)
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
}

struct BigMod(BigUint);

impl ModArith for BigMod {
    type T = BigUint;
    fn modulus(&self) -> &BigUint {
        &self.0
    }
    fn from_u64(&self, v: u64) -> BigUint {
        BigUint::from(v) % &self.0
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.0
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.0 {
            s - &self.0
        } else {
            s
        }
    }
    fn absdiff(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            b - a
        }
    }
    fn gcd_n(&self, a: &BigUint) -> BigUint {
        a.gcd(&self.0)
    }
    fn is_one(&self, a: &BigUint) -> bool {
        a.is_one()
    }
}

/// Brent's cycle-finding rho with batched gcds. `budget` counts polynomial
/// evaluations and is decremented in place.
fn brent_rho<M: ModArith>(m: &M, c: u64, x0: u64, budget: &mut u64) -> Option<M::T> {
    const BATCH: u64 = 128;
    let n = m.modulus().clone();
    let c = m.from_u64(c);
    let f = |x: &M::T| m.add(&m.mul(x, x), &c);
    let mut y = m.from_u64(x0);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = m.from_u64(1);
    let mut g = m.from_u64(1);
    let mut r: u64 = 1;
    while m.is_one(&g) {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && m.is_one(&g) {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            if *budget < steps {
                *budget = 0;
                return None;
            }
            *budget -= steps;
            for _ in 0..steps {
                y = f(&y);
                q = m.mul(&q, &m.absdiff(&x, &y));
            }
            g = m.gcd_n(&q);
            k += steps;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(&ys);
            g = m.gcd_n(&m.absdiff(&x, &ys));
            if !m.is_one(&g) {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn pollard_p_minus_1(n: &BigUint) -> Option<BigUint> {
    let mut a = BigUint::from(2u32);
    let bound = P_MINUS_1_BOUND;
    for (i, &p) in trial_primes().iter().take_while(|&&p| p <= bound).enumerate() {
        let mut pk = p;
        while pk * p <= bound {
            pk *= p;
        }
        a = a.modpow(&BigUint::from(pk), n);
        if i % 512 == 511 || p * 2 > bound {
            let g = (&a + n - 1u32).gcd(n);
            if g.is_one() {
                continue;
            }
            if &g == n {
                return None;
            }
            return Some(g);
        }
    }
    let g = (&a + n - 1u32).gcd(n);
    if !g.is_one() && &g != n {
        Some(g)
    } else {
        None
    }
}

/// Find a nontrivial divisor of the composite `n`.
fn split(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(small) = n.to_u64() {
        let m = U64Mod(small);
        let mut c = 1;
        while *budget > 0 {
            if let Some(g) = brent_rho(&m, c, 2, budget) {
                return Some(BigUint::from(g));
            }
            c += 1;
        }
        return None;
    }
    if let Some(g) = pollard_p_minus_1(n) {
        return Some(g);
    }
    let m = BigMod(n.clone());
    let mut c = 1;
    while *budget > 0 {
        if let Some(g) = brent_rho(&m, c, 2, budget) {
            return Some(g);
        }
        c += 1;
    }
    None
}

/// Pieces of a partially factored number: prime -> exponent, plus leftover
/// composites.
#[derive(Debug, Default)]
struct Pieces {
    primes: BTreeMap<BigUint, u32>,
    composites: Vec<BigUint>,
}

fn factor_into(n: BigUint, budget: u64, out: &mut Pieces) {
    let mut rest = n;
    for &p in trial_primes() {
        if rest.is_one() {
            return;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            *out.primes.entry(pb).or_insert(0) += e;
        }
    }
    if rest.is_one() {
        return;
    }
    let mut stack = vec![rest];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        // no factor below TRIAL_BOUND, so anything below its square is prime
        if c < BigUint::from(TRIAL_BOUND) * BigUint::from(TRIAL_BOUND) || is_probable_prime(&c) {
            *out.primes.entry(c).or_insert(0) += 1;
            continue;
        }
        let mut b = budget;
        match split(&c, &mut b) {
            Some(g) => {
                let h = &c / &g;
                stack.push(g);
                stack.push(h);
            }
            None => out.composites.push(c),
        }
    }
}

fn finish(value: BigUint, pieces: Pieces) -> Factorization {
    let mut primes: Vec<BigUint> = pieces.primes.into_keys().collect();
    let mut composites = pieces.composites;
    // reduce leftover composites by known primes and by each other
    loop {
        let mut changed = false;
        let mut next = Vec::new();
        for mut c in composites.drain(..) {
            for p in &primes {
                while (&c % p).is_zero() {
                    c /= p;
                }
            }
            if c.is_one() {
                changed = true;
            } else if is_probable_prime(&c) {
                primes.push(c);
                changed = true;
            } else {
                next.push(c);
            }
        }
        'pairs: for i in 0..next.len() {
            for j in i + 1..next.len() {
                let g = next[i].gcd(&next[j]);
                if !g.is_one() && g != next[i] && g != next[j] {
                    let a = &next[i] / &g;
                    let b = &next[j] / &g;
                    next[i] = a;
                    next[j] = b;
                    next.push(g);
                    changed = true;
                    break 'pairs;
                }
            }
        }
        next.retain(|c| !c.is_one());
        composites = next;
        primes.sort();
        primes.dedup();
        if !changed {
            break;
        }
    }
    let mut rest = value.clone();
    let mut factors = Vec::new();
    for p in primes {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    Factorization { value, factors, cofactor: rest }
}

/// Factor `n >= 1`. Composites that resist `budget` rho iterations are left
/// in the cofactor.
pub fn factor_integer(n: &BigUint, budget: u64) -> Factorization {
    assert!(!n.is_zero(), "factor_integer(0)");
    let mut pieces = Pieces::default();
    factor_into(n.clone(), budget, &mut pieces);
    finish(n.clone(), pieces)
}

pub fn factor_u64(n: u64) -> Factorization {
    factor_integer(&BigUint::from(n), DEFAULT_BUDGET)
}

/// Value of the d-th cyclotomic polynomial at `q`.
pub fn cyclotomic_value(d: u64, q: &BigUint) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in divisors_u64(d) {
        let mu = mobius_u64(d / e);
        if mu == 0 {
            continue;
        }
        let v = q.pow(e as u32) - 1u32;
        if mu > 0 {
            num *= v;
        } else {
            den *= v;
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// Factor `q^n - 1` through its cyclotomic parts `prod_{d | n} Phi_d(q)`.
pub fn factor_q_pow_n_minus_1(q: &BigUint, n: u64, budget: u64) -> Factorization {
    let value = q.pow(n as u32) - 1u32;
    let mut pieces = Pieces::default();
    for d in divisors_u64(n) {
        let part = cyclotomic_value(d, q);
        if !part.is_one() {
            factor_into(part, budget, &mut pieces);
        }
    }
    finish(value, pieces)
}

pub(crate) fn divisors_u64(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub(crate) fn mobius_u64(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    #[test]
    fn small_examples() {
        let f = factor_u64(2400);
        assert_eq!(f.factors, vec![(big("2"), 5), (big("3"), 1), (big("5"), 2)]);
        assert!(f.cofactor.is_one());
    }

    #[test]
    fn seven_to_seven_minus_one() {
        // trial division oracle
        let mut n = 823542u64;
        let mut want = Vec::new();
        let mut p = 2;
        while n > 1 {
            if n.is_multiple_of(p) {
                let mut e = 0;
                while n.is_multiple_of(p) {
                    n /= p;
                    e += 1;
                }
                want.push((BigUint::from(p), e));
            }
            p += 1;
        }
        let f = factor_q_pow_n_minus_1(&BigUint::from(7u32), 7, DEFAULT_BUDGET);
        assert_eq!(f.factors, want);
        let primes: Vec<u64> = f.factors.iter().map(|(p, _)| p.to_u64().unwrap()).collect();
        assert_eq!(primes, vec![2, 3, 29, 4733]);
    }

    #[test]
    fn large_semiprime_exhausts_budget() {
        // 80-digit product of two 40-digit primes
        let p = big("3000000000000000000000000000000000000037");
        let q = big("4000000000000000000000000000000000000007");
        assert!(is_probable_prime(&p) && is_probable_prime(&q));
        let n = &p * &q;
        let f = factor_integer(&n, 10_000);
        assert_eq!(f.cofactor, n);
        assert!(f.factors.is_empty());
        assert!(!f.is_complete());
    }

    #[test]
    fn rho_splits_two_word_semiprime() {
        let p = big("1000000007");
        let q = big("998244353");
        let r = big("1000000000039");
        let n = &p * &q * &r;
        let f = factor_integer(&n, DEFAULT_BUDGET);
        assert!(f.is_complete());
        assert_eq!(f.factors.len(), 3);
    }

    #[test]
    fn lucas_rejects_known_pseudoprimes() {
        // strong pseudoprimes to base 2
        for n in [2047u64, 3277, 4033, 4681, 8321, 3215031751] {
            assert!(!strong_lucas(&BigUint::from(n)), "{n}");
        }
        // Lucas accepts primes
        for p in [3u64, 5, 7, 101, 1000003, 998244353] {
            assert!(strong_lucas(&BigUint::from(p)), "{p}");
        }
    }

    #[test]
    fn mersenne_prime_detected() {
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_probable_prime(&m127));
        let m128 = (BigUint::one() << 128) - 1u32;
        assert!(!is_probable_prime(&m128));
    }

    #[test]
    fn cyclotomic_split_matches_direct() {
        for q in [5u64, 7, 11, 13, 49, 121] {
            for n in 1..=12u64 {
                let qb = BigUint::from(q);
                let a = factor_q_pow_n_minus_1(&qb, n, DEFAULT_BUDGET);
                let b = factor_integer(&(qb.pow(n as u32) - 1u32), DEFAULT_BUDGET);
                assert_eq!(a, b, "q={q} n={n}");
            }
        }
        assert_eq!(cyclotomic_value(12, &BigUint::from(2u32)), BigUint::from(13u32));
    }
}
