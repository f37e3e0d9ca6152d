//! Per-(q, n) decision procedures for the existence of pairs
//! (alpha, F(alpha)) with alpha 2-primitive 2-normal and F(alpha)
//! 3-primitive 1-normal.
//!
//! Inequalities between integers and rationals are decided exactly by
//! squaring; only [`test_theorem`] works in log space.

mod sweep;

pub use sweep::{
    load_checkpoint, sweep, CellRecord, P0Policy, QBound, SieveReport, Stage, StageCount, SweepConfig, UpperBound,
};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::ffield::SmallField;
use crate::fqpoly::{count_xn_minus_1_factors, factor_xn_minus_1, xn_minus_1_degree_profile, Poly};
use crate::intnt::{factor_q_pow_n_minus_1, next_prime, partial_weight_constant, prime_power};

/// Three-way outcome of a sieve criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub enum Verdict {
    Proven,
    NotProven,
    Indeterminate,
}

/// Outcome of a log-space test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    True,
    False,
    Borderline,
}

/// Split `(i1, i2, j1, j2)`: how many leading entries of `L1, L2, G1, G2`
/// stay in the kernel (B1, B2, H1, H2); the rest are sieved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub i1: usize,
    pub i2: usize,
    pub j1: usize,
    pub j2: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveOutcome {
    pub verdict: Verdict,
    pub stage: String,
    #[serde(serialize_with = "ser_ratio")]
    pub delta: Option<BigRational>,
    #[serde(rename = "Delta", serialize_with = "ser_ratio")]
    pub big_delta: Option<BigRational>,
    pub witness_split: Option<Split>,
}

fn ser_ratio<S: Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(r) => s.serialize_str(&r.to_string()),
    }
}

impl SieveOutcome {
    fn bare(verdict: Verdict, stage: &str) -> Self {
        SieveOutcome { verdict, stage: stage.into(), delta: None, big_delta: None, witness_split: None }
    }

    pub fn delta_f64(&self) -> Option<f64> {
        self.delta.as_ref().and_then(|d| d.to_f64())
    }

    pub fn big_delta_f64(&self) -> Option<f64> {
        self.big_delta.as_ref().and_then(|d| d.to_f64())
    }
}

/// `M = max(2(m1 + m2), m1 + 3 m2 + 1)`.
pub fn m_constant(m1: u64, m2: u64) -> u64 {
    assert!(m1 + m2 >= 1, "m1 + m2 must be positive");
    (2 * (m1 + m2)).max(m1 + 3 * m2 + 1)
}

/// `q^(e/2) >= rhs` for a rational `rhs`, decided by squaring.
pub fn half_power_ge(q: &BigUint, twice_exp: i64, rhs: &BigRational) -> bool {
    if !rhs.is_positive() {
        return true;
    }
    let a = rhs.numer().magnitude();
    let b = rhs.denom().magnitude();
    let qe = q.pow(twice_exp.unsigned_abs() as u32);
    if twice_exp >= 0 {
        qe * b * b >= a * a
    } else {
        b * b >= a * a * qe
    }
}

/// Parameters of the main existence inequality.
#[derive(Clone, Debug)]
pub struct TheoremParams {
    pub r1: u64,
    pub r2: u64,
    pub k1: u64,
    pub k2: u64,
    pub m1: u64,
    pub m2: u64,
}

impl TheoremParams {
    /// `(r1, r2, k1, k2, m1, m2) = (2, 3, 2, 1, 2, 1)`.
    pub fn standard() -> Self {
        TheoremParams { r1: 2, r2: 3, k1: 2, k2: 1, m1: 2, m2: 1 }
    }
}

/// `q^(n/2 - k1 - k2) >= M r1 r2 W1 W2 Wf1 Wf2`, exactly.
pub fn theorem_main_check(q: u64, n: u64, p: &TheoremParams, w: [&BigUint; 4]) -> bool {
    let rhs = BigUint::from(m_constant(p.m1, p.m2) * p.r1 * p.r2) * w[0] * w[1] * w[2] * w[3];
    let e = n as i64 - 2 * (p.k1 + p.k2) as i64;
    half_power_ge(&BigUint::from(q), e, &BigRational::from_integer(BigInt::from(rhs)))
}

/// Number of distinct monic irreducible factors of `x^n - 1` over `F_q`.
pub fn xn1_factor_count(q: u64, n: u64) -> u64 {
    count_xn_minus_1_factors(q, n)
}

/// Exponents `(w1, w2)` with `W((x^n - 1)/f_i) = 2^(w_i)`.
pub fn number_pol_factors(q: u64, n: u64) -> Option<(u64, u64)> {
    let w = xn1_factor_count(q, n);
    if q.gcd(&n) > 1 {
        Some((w, w))
    } else if (q - 1).gcd(&n) > 1 {
        Some((w - 1, w - 2))
    } else if (q + 1).gcd(&n) > 1 {
        Some((w - 1, w - 1))
    } else {
        None
    }
}

/// log10 margin of `q^(n/2-3) >= 6^(2-1/t) A_t^2 q^(2n/t) 2^(w1+w2)`.
pub fn test_theorem_margin(q: u64, n: u64, t: f64) -> Option<f64> {
    let (w1, w2) = number_pol_factors(q, n)?;
    let lq = (q as f64).log10();
    let plimit = 2f64.powf(t).ceil() as u64;
    let a = partial_weight_constant(t, plimit).log10;
    let lhs = (n as f64 / 2.0 - 3.0) * lq;
    let rhs = (2.0 - 1.0 / t) * 6f64.log10() + 2.0 * a + 2.0 * n as f64 / t * lq + (w1 + w2) as f64 * 2f64.log10();
    Some(lhs - rhs)
}

/// Log-space margin required for a definite answer.
pub const LOG_MARGIN: f64 = 1e-6;

pub fn test_theorem(q: u64, n: u64, t: f64) -> Tri {
    assert!(t > 4.0, "t must exceed 4");
    match test_theorem_margin(q, n, t) {
        None => Tri::False,
        Some(m) if m > LOG_MARGIN => Tri::True,
        Some(m) if m < -LOG_MARGIN => Tri::False,
        Some(_) => Tri::Borderline,
    }
}

/// The two-loop bounding heuristic: `(S, u0)` with `S` an overestimate of
/// the inverse sum and `u0` of the count of prime divisors `>= p0` of `T`.
pub fn sum_factors(t: &BigUint, p0: u64) -> (BigRational, u64) {
    let mut t = BigRational::from_integer(BigInt::from(t.clone()));
    let mut p = p0;
    let mut p1 = p;
    let mut s = BigRational::zero();
    let mut u0 = 0u64;
    let recip = |p: u64| BigRational::new(BigInt::one(), BigInt::from(p));
    let ge = |t: &BigRational, p: u64| *t >= BigRational::from_integer(BigInt::from(p));
    while ge(&t, p) && p < 1000 {
        let pb = BigInt::from(p);
        if t.is_integer() && (t.numer() % &pb).is_zero() {
            t = BigRational::from_integer(t.numer() / &pb);
            if p == p1 {
                s += recip(p);
                u0 += 1;
            }
            p1 = next_prime(p);
        } else {
            p = next_prime(p);
            p1 = p;
        }
    }
    p = p1;
    while t > BigRational::from_integer(BigInt::from(p)) {
        s += recip(p);
        u0 += 1;
        t /= BigRational::from_integer(BigInt::from(p));
        p = next_prime(p);
    }
    (s, u0)
}

fn pow_mod_u64(q: u64, n: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut b = (q % m) as u128;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    r as u64
}

/// `6 | q^n - 1` and `gcd(q^3 - q, n) != 1`.
pub fn condition_qn(q: u64, n: u64) -> bool {
    let six = pow_mod_u64(q, n, 6) == 1;
    let q = q as u128;
    let c = q * q * q - q;
    six && c.gcd(&(n as u128)) != 1
}

fn qn_minus_1(q: u64, n: u64) -> BigUint {
    BigUint::from(q).pow(n as u32) - 1u32
}

fn omega_small(mut x: u64) -> u64 {
    let mut c = 0;
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            c += 1;
            while x.is_multiple_of(p) {
                x /= p;
            }
        }
        p += 1;
    }
    c + u64::from(x > 1)
}

/// Sieve with all primes `< p0` kept and the rest charged through
/// [`sum_factors`].
pub fn special_sieve(q: u64, n: u64, p0: u64) -> SieveOutcome {
    const STAGE: &str = "special_sieve";
    let Some((w1, w2)) = number_pol_factors(q, n) else {
        return SieveOutcome::bare(Verdict::NotProven, STAGE);
    };
    let mut t = qn_minus_1(q, n);
    let mut ell = 1u64;
    let mut p = 2u64;
    while p < p0 {
        let (d, r) = t.div_rem(&BigUint::from(p));
        if r.is_zero() && !t.is_zero() {
            t = d;
            ell = ell.saturating_mul(p);
        } else {
            p = next_prime(p);
        }
    }
    if !ell.is_multiple_of(6) {
        return SieveOutcome::bare(Verdict::NotProven, STAGE);
    }
    let wl1 = omega_small(ell / 2);
    let wl2 = omega_small(ell / 3);
    let (s, u0) = sum_factors(&t, p0);
    let delta = BigRational::one() - s * BigInt::from(2);
    if !delta.is_positive() {
        return SieveOutcome { delta: Some(delta), ..SieveOutcome::bare(Verdict::NotProven, STAGE) };
    }
    let big_delta =
        BigRational::from_integer(2.into()) + BigRational::from_integer(BigInt::from(2 * u0 as i64 - 1)) / &delta;
    let rhs = &big_delta * BigRational::from_integer(BigInt::from(36) << (w1 + w2 + wl1 + wl2) as usize);
    let ok = half_power_ge(&BigUint::from(q), n as i64 - 6, &rhs);
    SieveOutcome {
        verdict: if ok { Verdict::Proven } else { Verdict::NotProven },
        stage: STAGE.into(),
        delta: Some(delta),
        big_delta: Some(big_delta),
        witness_split: None,
    }
}

fn small_field(q: u64) -> SmallField {
    let (p, m) = prime_power(q).expect("q must be a prime power");
    if m == 1 {
        SmallField::prime(p).expect("prime field")
    } else {
        SmallField::new(p, m, 0).expect("field size within cap")
    }
}

/// Which positions of the canonical factor list each of `G1`, `G2` drops.
fn monic_drop(q: u64, n: u64) -> Option<(Vec<usize>, Vec<usize>)> {
    if q.gcd(&n) > 1 {
        Some((vec![], vec![]))
    } else if (q - 1).gcd(&n) > 1 {
        Some((vec![0, 1], vec![0]))
    } else if (q + 1).gcd(&n) > 1 {
        Some((vec![1], vec![0]))
    } else {
        None
    }
}

/// Distinct irreducible factors of `x^n - 1` kept in the two sieving lists,
/// ordered by degree.
pub fn monic_factors(q: u64, n: u64) -> Option<(Vec<Poly<u32>>, Vec<Poly<u32>>)> {
    let (d1, d2) = monic_drop(q, n)?;
    let f = small_field(q);
    let all: Vec<Poly<u32>> = factor_xn_minus_1(&f, n).into_iter().map(|(g, _)| g).collect();
    let keep = |drop: &[usize]| {
        all.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, g)| g.clone()).collect::<Vec<_>>()
    };
    Some((keep(&d1), keep(&d2)))
}

/// Degrees of the entries of [`monic_factors`], without factoring.
pub fn monic_factor_degrees(q: u64, n: u64) -> Option<(Vec<u64>, Vec<u64>)> {
    let (d1, d2) = monic_drop(q, n)?;
    let all: Vec<u64> =
        xn_minus_1_degree_profile(q, n).into_iter().flat_map(|(d, c)| std::iter::repeat_n(d, c as usize)).collect();
    let keep =
        |drop: &[usize]| all.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, &d)| d).collect::<Vec<_>>();
    Some((keep(&d1), keep(&d2)))
}

/// Leading constant of the total sieve inequality.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum SieveConstant {
    /// `M r1 r2 = 36`.
    #[default]
    ThirtySix,
    /// The literal `6` of the original pseudocode.
    Six,
}

impl SieveConstant {
    pub fn value(self) -> u64 {
        match self {
            SieveConstant::ThirtySix => 36,
            SieveConstant::Six => 6,
        }
    }
}

/// Suffix sums `sum_{k >= i} num_k` with every term over the common
/// denominator `den`.
fn suffix_numerators(terms: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); terms.len() + 1];
    for i in (0..terms.len()).rev() {
        out[i] = &out[i + 1] + &terms[i];
    }
    out
}

/// Exhaustive split search over kernel/sieving choices.
pub fn total_sieve(q: u64, n: u64, constant: SieveConstant, budget: u64) -> SieveOutcome {
    const STAGE: &str = "total_sieve";
    let Some((g1, g2)) = monic_factor_degrees(q, n) else {
        return SieveOutcome::bare(Verdict::NotProven, STAGE);
    };
    let qb = BigUint::from(q);
    let fact = factor_q_pow_n_minus_1(&qb, n, budget);
    if !fact.is_complete() {
        return SieveOutcome::bare(Verdict::Indeterminate, STAGE);
    }
    let value = &fact.value;
    let primes_of = |d: u32| -> Vec<BigUint> {
        fact.primes()
            .into_iter()
            .filter(|p| {
                let e = fact.factors.iter().find(|(x, _)| x == p).unwrap().1;
                // p divides value/d unless all of p's multiplicity is used by d
                !(BigUint::from(d) % p).is_zero() || e > 1
            })
            .collect()
    };
    if !(value % 6u32).is_zero() {
        return SieveOutcome::bare(Verdict::NotProven, STAGE);
    }
    let l1 = primes_of(2);
    let l2 = primes_of(3);
    let maxdeg = g1.iter().chain(&g2).copied().max().unwrap_or(0) as u32;
    let mut den = qb.pow(maxdeg);
    let mut distinct: Vec<&BigUint> = l1.iter().chain(&l2).collect();
    distinct.sort();
    distinct.dedup();
    for p in &distinct {
        den *= *p;
    }
    let over = |d: &BigUint| &den / d;
    let s1 = suffix_numerators(&l1.iter().map(over).collect::<Vec<_>>());
    let s2 = suffix_numerators(&l2.iter().map(over).collect::<Vec<_>>());
    let k1 = suffix_numerators(&g1.iter().map(|&d| over(&qb.pow(d as u32))).collect::<Vec<_>>());
    let k2 = suffix_numerators(&g2.iter().map(|&d| over(&qb.pow(d as u32))).collect::<Vec<_>>());
    let k = BigUint::from(constant.value());
    let qe = qb.pow((n as i64 - 6).unsigned_abs() as u32);
    let lhs_scale = n >= 6;
    let mut last_delta = None;
    for i1 in 0..=l1.len() {
        for i2 in 0..=l2.len() {
            for j1 in 0..=g1.len() {
                for j2 in 0..=g2.len() {
                    let sieved = &s1[i1] + &s2[i2] + &k1[j1] + &k2[j2];
                    if sieved >= den {
                        continue;
                    }
                    // delta = dn / den
                    let dn = &den - &sieved;
                    let count = (l1.len() - i1) + (l2.len() - i2) + (g1.len() - j1) + (g2.len() - j2);
                    let bits = i1 + i2 + j1 + j2;
                    // Delta = (2 dn + (count - 1) den) / dn, may be < 2 when count = 0
                    let num = BigInt::from(&dn * 2u32) + BigInt::from(count as i64 - 1) * BigInt::from(den.clone());
                    let ok = if !num.is_positive() {
                        true
                    } else {
                        let rhs = (&k << bits) * num.magnitude();
                        let (l, r) =
                            if lhs_scale { (&qe * &dn * &dn, &rhs * &rhs) } else { (&dn * &dn, &rhs * &rhs * &qe) };
                        l >= r
                    };
                    if ok {
                        let delta = BigRational::new(BigInt::from(dn.clone()), BigInt::from(den.clone()));
                        let big_delta = BigRational::new(num, BigInt::from(dn));
                        return SieveOutcome {
                            verdict: Verdict::Proven,
                            stage: STAGE.into(),
                            delta: Some(delta),
                            big_delta: Some(big_delta),
                            witness_split: Some(Split { i1, i2, j1, j2 }),
                        };
                    }
                    last_delta = Some((dn, den.clone()));
                }
            }
        }
    }
    SieveOutcome {
        delta: last_delta.map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b))),
        ..SieveOutcome::bare(Verdict::NotProven, STAGE)
    }
}

/// Per-pair result of the factor-count bound `count <= n/a + b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma41 {
    pub count: u64,
    /// `(a, b)` as exact rationals `b = num/den`, and whether the bound holds.
    pub pairs: Vec<(u64, String, bool)>,
}

/// The five `(a, b)` choices, with `b` as `(numerator, denominator)`.
pub fn lemma41_pairs(q: u64) -> [(u64, i128, i128); 5] {
    let q = q as i128;
    [
        (1, 0, 1),
        (2, q - 1, 2),
        (3, q * q + 3 * q - 4, 6),
        (4, q * q * q + 3 * q * q + 5 * q - 9, 12),
        (5, 3 * q.pow(4) + 8 * q.pow(3) + 15 * q * q + 22 * q - 48, 60),
    ]
}

pub fn lemma41_detail(q: u64, n: u64) -> Lemma41 {
    let count = xn1_factor_count(q, n);
    let pairs = lemma41_pairs(q)
        .iter()
        .map(|&(a, bn, bd)| {
            // count <= n/a + bn/bd  <=>  count a bd <= n bd + a bn
            let ok = count as i128 * a as i128 * bd <= n as i128 * bd + a as i128 * bn;
            (a, format!("{bn}/{bd}"), ok)
        })
        .collect();
    Lemma41 { count, pairs }
}

pub fn lemma41_check(q: u64, n: u64) -> bool {
    lemma41_detail(q, n).pairs.iter().all(|p| p.2)
}

/// Full factorization helper that maps budget exhaustion to an error.
pub fn factor_qn(q: u64, n: u64, budget: u64) -> Result<crate::intnt::Factorization> {
    let f = factor_q_pow_n_minus_1(&BigUint::from(q), n, budget);
    f.require_complete()?;
    Ok(f)
}
