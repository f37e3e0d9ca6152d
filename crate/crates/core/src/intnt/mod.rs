//! Exact integer number theory: factorization, arithmetic functions, prime
//! streams, and prime products in log space.

pub mod factor;
pub mod logmag;
pub mod primes;
pub mod sum;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use factor::{
    cyclotomic_value, factor_integer, factor_q_pow_n_minus_1, factor_u64, is_probable_prime, DEFAULT_BUDGET,
};
pub use logmag::LogMagnitude;
pub use primes::{
    census, is_prime_u64, next_prime, prime_pi, prime_power, prime_powers_in, primes_below, small_primes, Census,
    ClassFilter, PrimeStream,
};
pub use sum::CompensatedSum;

/// Serde helpers writing big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }

    pub mod pairs {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[(BigUint, u32)], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for (p, e) in v {
                seq.serialize_element(&(p.to_str_radix(10), e))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigUint, u32)>, D::Error> {
            let raw: Vec<(String, u32)> = Vec::deserialize(d)?;
            raw.into_iter().map(|(p, e)| Ok((p.parse().map_err(D::Error::custom)?, e))).collect()
        }
    }
}

/// An integer with its prime factors. A cofactor other than 1 is a composite
/// that could not be split within the factoring budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "decimal")]
    pub value: BigUint,
    #[serde(with = "decimal::pairs")]
    pub factors: Vec<(BigUint, u32)>,
    #[serde(with = "decimal")]
    pub cofactor: BigUint,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { value: BigUint::one(), factors: Vec::new(), cofactor: BigUint::one() }
    }

    /// Build from known prime powers. Caller guarantees primality.
    pub fn from_prime_powers(mut factors: Vec<(BigUint, u32)>) -> Self {
        factors.sort();
        let value = factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        Factorization { value, factors, cofactor: BigUint::one() }
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::Indeterminate(self.cofactor.to_string()))
        }
    }

    pub fn primes(&self) -> Vec<BigUint> {
        self.factors.iter().map(|(p, _)| p.clone()).collect()
    }

    /// Distinct primes as machine words, when they all fit.
    pub fn primes_u64(&self) -> Option<Vec<u64>> {
        self.factors.iter().map(|(p, _)| p.to_u64()).collect()
    }

    pub fn omega(&self) -> Result<usize> {
        self.require_complete()?;
        Ok(self.factors.len())
    }

    pub fn radical(&self) -> Result<BigUint> {
        self.require_complete()?;
        Ok(self.factors.iter().fold(BigUint::one(), |a, (p, _)| a * p))
    }

    /// Factorization of a divisor given by exponents aligned with `factors`.
    pub fn sub(&self, exps: &[u32]) -> Factorization {
        let factors: Vec<_> =
            self.factors.iter().zip(exps).filter(|(_, &e)| e > 0).map(|((p, _), &e)| (p.clone(), e)).collect();
        Factorization::from_prime_powers(factors)
    }

    /// Factorization of `value / d` for a divisor `d`.
    pub fn quotient(&self, d: &BigUint) -> Result<Factorization> {
        self.require_complete()?;
        if !(&self.value % d).is_zero() {
            return Err(Error::InvalidArgument(format!("{d} does not divide {}", self.value)));
        }
        let mut d = d.clone();
        let mut out = Vec::new();
        for (p, e) in &self.factors {
            let mut k = 0;
            while k < *e && (&d % p).is_zero() {
                d /= p;
                k += 1;
            }
            if e - k > 0 {
                out.push((p.clone(), e - k));
            }
        }
        Ok(Factorization::from_prime_powers(out))
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Result<Vec<BigUint>> {
        self.require_complete()?;
        let mut ds = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(ds.len() * (*e as usize + 1));
            for d in &ds {
                let mut pk = d.clone();
                next.push(pk.clone());
                for _ in 0..*e {
                    pk *= p;
                    next.push(pk.clone());
                }
            }
            ds = next;
        }
        ds.sort();
        Ok(ds)
    }

    /// Squarefree divisors with their Moebius sign, in increasing order.
    pub fn squarefree_divisors(&self) -> Result<Vec<(BigUint, i32)>> {
        self.require_complete()?;
        let mut ds = vec![(BigUint::one(), 1)];
        for (p, _) in &self.factors {
            let extra: Vec<_> = ds.iter().map(|(d, s)| (d * p, -s)).collect();
            ds.extend(extra);
        }
        ds.sort();
        Ok(ds)
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> =
            self.factors.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        if !self.is_complete() {
            parts.push(format!("[{}]", self.cofactor));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join(" * "))
    }
}

pub fn euler_phi(f: &Factorization) -> Result<BigUint> {
    f.require_complete()?;
    Ok(f.factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(e - 1) * (p - 1u32)))
}

pub fn mobius(f: &Factorization) -> Result<i32> {
    f.require_complete()?;
    if f.factors.iter().any(|(_, e)| *e > 1) {
        return Ok(0);
    }
    Ok(if f.factors.len().is_multiple_of(2) { 1 } else { -1 })
}

/// Number of squarefree divisors, `2^omega`.
pub fn big_w(f: &Factorization) -> Result<BigUint> {
    f.require_complete()?;
    Ok(BigUint::one() << f.factors.len())
}

pub fn euler_phi_u64(n: u64) -> u64 {
    let mut n0 = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= n0 {
        if n0.is_multiple_of(p) {
            while n0.is_multiple_of(p) {
                n0 /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n0 > 1 {
        phi -= phi / n0;
    }
    phi
}

pub fn mobius_u64(n: u64) -> i32 {
    factor::mobius_u64(n)
}

pub fn divisors_u64(n: u64) -> Vec<u64> {
    factor::divisors_u64(n)
}

/// `a / gcd(a, b)`.
pub fn rel_part<T: Integer + Clone>(a: &T, b: &T) -> T {
    a.clone() / a.gcd(b)
}

/// Both sides of the divisor-sum identity
/// `sum_{d | R} |mu(d_(r))| / phi(d_(r)) * phi(d) = gcd(R, r) * W(gcd(R, R_(r)))`.
pub fn lemma23_both_sides(big_r: u64, r: u64) -> Result<(u64, u64)> {
    if big_r == 0 || r == 0 {
        return Err(Error::InvalidArgument("R and r must be positive".into()));
    }
    let mut lhs = BigRational::zero();
    for d in divisors_u64(big_r) {
        let dr = rel_part(&d, &r);
        let mu = mobius_u64(dr);
        if mu == 0 {
            continue;
        }
        lhs += BigRational::new(euler_phi_u64(d).into(), euler_phi_u64(dr).into());
    }
    if !lhs.is_integer() {
        return Err(Error::InvalidArgument(format!("left side {lhs} is not integral")));
    }
    let lhs = lhs.to_integer().to_u64().expect("small");
    let g = big_r.gcd(&r);
    let rr = rel_part(&big_r, &r);
    let w = 1u64 << factor_u64(big_r.gcd(&rr)).factors.len();
    Ok((lhs, g * w))
}

/// `log10` of the product of the first `m` primes.
pub fn primorial_log(m: usize) -> LogMagnitude {
    let s: CompensatedSum = PrimeStream::from(2).take(m).map(|p| (p as f64).log10()).collect();
    LogMagnitude::from_log10(s.value())
}

/// Product (log space) and inverse sum of the first `u` primes `>= p0`
/// accepted by `filter`.
pub fn prime_products(p0: u64, u: usize, filter: ClassFilter) -> (LogMagnitude, f64) {
    let mut logs = CompensatedSum::new();
    let mut inv = CompensatedSum::new();
    for p in PrimeStream::from(p0).filtered(filter).take(u) {
        logs.add((p as f64).log10());
        inv.add(1.0 / p as f64);
    }
    (LogMagnitude::from_log10(logs.value()), inv.value())
}

/// `prod_{p < plimit} 2 / p^(1/t)` in log space.
pub fn partial_weight_constant(t: f64, plimit: u64) -> LogMagnitude {
    assert!(t > 0.0, "t must be positive");
    let l2 = 2f64.log10();
    let s: CompensatedSum =
        PrimeStream::from(2).take_while(|&p| p < plimit).map(|p| l2 - (p as f64).log10() / t).collect();
    LogMagnitude::from_log10(s.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn arithmetic_functions_of_twelve() {
        let f = factor_u64(12);
        assert_eq!(euler_phi(&f).unwrap(), BigUint::from(4u32));
        assert_eq!(mobius(&f).unwrap(), 0);
        assert_eq!(big_w(&f).unwrap(), BigUint::from(4u32));
        // divisor enumeration oracle
        let ds: Vec<u64> = (1..=12).filter(|d| 12 % d == 0).collect();
        let got: Vec<u64> = f.divisors().unwrap().iter().map(|d| d.to_u64().unwrap()).collect();
        assert_eq!(got, ds);
        let sqf = ds.iter().filter(|&&d| mobius_u64(d) != 0).count();
        assert_eq!(sqf, 4);
    }

    #[test]
    fn arithmetic_functions_of_one() {
        let f = Factorization::one();
        assert_eq!(euler_phi(&f).unwrap(), BigUint::one());
        assert_eq!(mobius(&f).unwrap(), 1);
        assert_eq!(big_w(&f).unwrap(), BigUint::one());
        assert_eq!(factor_u64(1), f);
    }

    #[test]
    fn big_w_of_seven_to_seventh() {
        let f = factor_u64(823542);
        assert_eq!(big_w(&f).unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn indeterminate_rejected() {
        let f = Factorization { value: BigUint::from(15u32), factors: vec![], cofactor: BigUint::from(15u32) };
        assert!(matches!(euler_phi(&f), Err(Error::Indeterminate(_))));
        assert!(matches!(mobius(&f), Err(Error::Indeterminate(_))));
        assert!(matches!(big_w(&f), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn rel_part_examples() {
        assert_eq!(rel_part(&12u64, &8), 3);
        assert_eq!(rel_part(&17u64, &1), 17);
        assert_eq!(rel_part(&6u64, &6), 1);
    }

    #[test]
    fn lemma23_examples() {
        assert_eq!(lemma23_both_sides(4, 2).unwrap(), (4, 4));
        for r in 1..10 {
            assert_eq!(lemma23_both_sides(1, r).unwrap(), (1, 1));
        }
    }

    #[test]
    fn lemma23_exhaustive() {
        for big_r in 1..=200 {
            for r in 1..=30 {
                let (l, rh) = lemma23_both_sides(big_r, r).unwrap();
                assert_eq!(l, rh, "R={big_r} r={r}");
            }
        }
    }

    #[test]
    fn primorial_checkpoints() {
        assert!((primorial_log(1).log10 - 2f64.log10()).abs() < 1e-15);
        let three_p = LogMagnitude::from_u64(3) * primorial_log(265);
        let (m, e) = three_p.mantissa_exponent();
        assert_eq!(e, 718);
        assert!((m - 6.18).abs() < 0.005, "{m}");
        assert!((primorial_log(265).log10 - 718.31).abs() < 0.01);
    }

    #[test]
    fn primorial_increments() {
        let ps = primes_below(2000);
        let mut prev = primorial_log(1);
        for m in 1..ps.len() {
            let next = primorial_log(m + 1);
            let step = next.log10 - prev.log10;
            let want = (ps[m] as f64).log10();
            assert!(((step - want) / want).abs() < 1e-12, "m={m}");
            prev = next;
        }
    }

    #[test]
    fn prime_products_filters() {
        let (prod, inv) = prime_products(5, 3, ClassFilter::All);
        assert!((prod.log10 - (5.0f64 * 7.0 * 11.0).log10()).abs() < 1e-12);
        assert!((inv - (1.0 / 5.0 + 1.0 / 7.0 + 1.0 / 11.0)).abs() < 1e-15);
        let (prod, _) = prime_products(2, 3, ClassFilter::OneMod(14));
        assert!((prod.log10 - (29.0f64 * 43.0 * 71.0).log10()).abs() < 1e-12);
        let (prod, _) = prime_products(2, 3, ClassFilter::NotOneMod(3));
        assert!((prod.log10 - (2.0f64 * 3.0 * 5.0).log10()).abs() < 1e-12);
    }

    #[test]
    fn partial_weight_examples() {
        assert_eq!(partial_weight_constant(8.0, 2), LogMagnitude::ONE);
        let b = partial_weight_constant(30.0, 1 << 20);
        assert!(b < LogMagnitude::sci(6.8777, 9530));
        assert!(b > LogMagnitude::sci(6.87, 9530));
        // direct log-sum oracle
        let mut direct = 0.0;
        for p in primes_below(256) {
            direct += (2.0 / (p as f64).powf(1.0 / 8.0)).log10();
        }
        assert!((partial_weight_constant(8.0, 256).log10 - direct).abs() < 1e-10);
    }

    #[test]
    fn partial_weight_monotone_past_threshold() {
        // factors 2/p^(1/t) drop below 1 once p > 2^t
        let t = 4.0;
        let mut prev = partial_weight_constant(t, 17);
        for lim in [20u64, 50, 100, 500, 1000] {
            let v = partial_weight_constant(t, lim);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn factorization_json_roundtrip() {
        let f = factor_u64(823542);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"value":"823542","factors":[["2",1],["3",1],["29",1],["4733",1]],"cofactor":"1"}"#);
        let back: Factorization = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(n in 1u64..u64::MAX) {
            let f = factor_u64(n);
            prop_assert!(f.is_complete());
            let mut prod = BigUint::one();
            let mut last = BigUint::zero();
            for (p, e) in &f.factors {
                prop_assert!(p > &last);
                prop_assert!(is_probable_prime(p));
                prod *= p.pow(*e);
                last = p.clone();
            }
            prop_assert_eq!(prod, BigUint::from(n));
        }

        #[test]
        fn phi_multiplicative(a in 1u64..5000, b in 1u64..5000) {
            prop_assume!(a.gcd(&b) == 1);
            prop_assert_eq!(euler_phi_u64(a * b), euler_phi_u64(a) * euler_phi_u64(b));
            let fa = factor_u64(a * b);
            prop_assert_eq!(euler_phi(&fa).unwrap(), BigUint::from(euler_phi_u64(a * b)));
        }

        #[test]
        fn partial_weight_order_independent(t in 1.0f64..40.0, lim in 2u64..5000) {
            let fwd = partial_weight_constant(t, lim).log10;
            let mut rev = CompensatedSum::new();
            for p in primes_below(lim).into_iter().rev() {
                rev.add(2f64.log10() - (p as f64).log10() / t);
            }
            prop_assert!((fwd - rev.value()).abs() < 1e-9);
        }
    }
}
