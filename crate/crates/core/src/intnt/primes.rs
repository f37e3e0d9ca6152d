//! Prime generation: small sieves, unbounded prime streams, and a parallel
//! segmented census.

use std::sync::OnceLock;

use rayon::prelude::*;

use super::sum::CompensatedSum;

/// All primes `< limit`, by an odd-only Eratosthenes sieve.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit <= 2 {
        return Vec::new();
    }
    // index i represents 2i+1
    let len = (limit as usize).div_ceil(2);
    let mut composite = vec![false; len];
    composite[0] = true;
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) < limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < len {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(len / 8 + 1);
    out.push(2);
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(i, c)| !**c && ((2 * *i + 1) as u64) < limit)
            .map(|(i, _)| (2 * i + 1) as u64),
    );
    out
}

const CACHE_LIMIT: u64 = 1 << 24;

/// Shared table of the primes below 2^24.
pub fn small_primes() -> &'static [u64] {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    CACHE.get_or_init(|| primes_below(CACHE_LIMIT))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `p`.
pub fn next_prime(p: u64) -> u64 {
    let sp = small_primes();
    if p + 1 < CACHE_LIMIT {
        let idx = sp.partition_point(|&x| x <= p);
        if idx < sp.len() {
            return sp[idx];
        }
    }
    let mut c = p + 1;
    while !is_prime_u64(c) {
        c += 1;
    }
    c
}

/// `pi(x)`: number of primes `<= x`.
pub fn prime_pi(x: u64) -> usize {
    if x < CACHE_LIMIT {
        small_primes().partition_point(|&p| p <= x)
    } else {
        PrimeStream::from(2).take_while(|&p| p <= x).count()
    }
}

/// Prime powers `p^k` (k >= 1): returns `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    if is_prime_u64(q) {
        return Some((q, 1));
    }
    for &p in small_primes() {
        if p * p > q {
            break;
        }
        if q.is_multiple_of(p) {
            let mut r = q;
            let mut k = 0;
            while r.is_multiple_of(p) {
                r /= p;
                k += 1;
            }
            return if r == 1 { Some((p, k)) } else { None };
        }
    }
    None
}

/// Which primes a stream or product keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ClassFilter {
    All,
    /// primes `p` with `p mod modulus != 1`
    NotOneMod(u64),
    /// primes `p` with `p mod modulus == 1`
    OneMod(u64),
}

impl ClassFilter {
    pub fn accepts(self, p: u64) -> bool {
        match self {
            ClassFilter::All => true,
            ClassFilter::NotOneMod(m) => p % m != 1 % m,
            ClassFilter::OneMod(m) => p % m == 1 % m,
        }
    }
}

/// Unbounded ascending iterator over primes `>= start`.
#[derive(Debug, Clone)]
pub struct PrimeStream {
    next_candidate: u64,
    cache_idx: Option<usize>,
}

impl PrimeStream {
    pub fn from(start: u64) -> Self {
        let sp = small_primes();
        if start < CACHE_LIMIT {
            let idx = sp.partition_point(|&p| p < start);
            PrimeStream { next_candidate: start, cache_idx: Some(idx) }
        } else {
            PrimeStream { next_candidate: start, cache_idx: None }
        }
    }

    pub fn filtered(self, filter: ClassFilter) -> impl Iterator<Item = u64> {
        self.filter(move |&p| filter.accepts(p))
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if let Some(i) = self.cache_idx {
            let sp = small_primes();
            if i < sp.len() {
                self.cache_idx = Some(i + 1);
                self.next_candidate = sp[i] + 1;
                return Some(sp[i]);
            }
            self.cache_idx = None;
            self.next_candidate = CACHE_LIMIT;
        }
        let mut c = self.next_candidate;
        while !is_prime_u64(c) {
            c += 1;
        }
        self.next_candidate = c + 1;
        Some(c)
    }
}

/// Count and reciprocal sum of the primes in an interval.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Census {
    pub count: u64,
    pub inverse_sum: f64,
}

/// Odd numbers per segment.
pub const SEGMENT_ODDS: u64 = 1 << 20;

/// Primes `p` with `lo < p < hi`, sieved in parallel odd-only segments.
///
/// Partial results are merged in segment order, so the result does not depend
/// on the thread schedule.
pub fn census(lo: u64, hi: u64, filter: ClassFilter) -> Census {
    if hi <= lo + 1 {
        return Census { count: 0, inverse_sum: 0.0 };
    }
    let root = (hi as f64).sqrt() as u64 + 2;
    let base: Vec<u64> = primes_below(root + 1).into_iter().filter(|&p| p > 2).collect();
    let mut count_two = 0u64;
    let mut sum_two = CompensatedSum::new();
    if lo < 2 && 2 < hi && filter.accepts(2) {
        count_two = 1;
        sum_two.add(0.5);
    }
    // odd numbers in (lo, hi): first = smallest odd > lo (and >= 3)
    let first = if lo < 3 {
        3
    } else if lo.is_multiple_of(2) {
        lo + 1
    } else {
        lo + 2
    };
    if first >= hi {
        return Census { count: count_two, inverse_sum: sum_two.value() };
    }
    let total_odds = (hi - 1 - first) / 2 + 1;
    let nseg = total_odds.div_ceil(SEGMENT_ODDS);
    let parts: Vec<(u64, CompensatedSum)> = (0..nseg)
        .into_par_iter()
        .map(|s| {
            let start = first + 2 * s * SEGMENT_ODDS;
            let len = SEGMENT_ODDS.min(total_odds - s * SEGMENT_ODDS) as usize;
            let mut comp = vec![false; len];
            let end = start + 2 * len as u64; // exclusive
            for &p in &base {
                if p * p >= end {
                    break;
                }
                // smallest odd multiple of p >= max(start, p*p)
                let mut m = (start.div_ceil(p)).max(p) * p;
                if m % 2 == 0 {
                    m += p;
                }
                while m < end {
                    comp[((m - start) / 2) as usize] = true;
                    m += 2 * p;
                }
            }
            let mut cnt = 0u64;
            let mut sum = CompensatedSum::new();
            for (i, c) in comp.iter().enumerate() {
                if !c {
                    let n = start + 2 * i as u64;
                    if n > 1 && filter.accepts(n) {
                        cnt += 1;
                        sum.add(1.0 / n as f64);
                    }
                }
            }
            (cnt, sum)
        })
        .collect();
    let mut count = count_two;
    let mut sum = sum_two;
    for (c, s) in &parts {
        count += c;
        sum.merge(s);
    }
    Census { count, inverse_sum: sum.value() }
}

/// Prime powers `q` with `lo <= q < hi` and `q mod modulus == residue`.
pub fn prime_powers_in(lo: u64, hi: u64, modulus: u64, residue: u64) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    if hi <= 2 {
        return out;
    }
    // primes via sieve when feasible, plus proper powers of small primes
    let ps = if hi <= CACHE_LIMIT {
        small_primes()[..small_primes().partition_point(|&p| p < hi)].to_vec()
    } else {
        primes_below(hi)
    };
    for &p in &ps {
        let mut q = p;
        loop {
            if q >= lo && q % modulus == residue % modulus {
                out.push(q);
            }
            match q.checked_mul(p) {
                Some(n) if n < hi => q = n,
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sieve() {
        assert_eq!(primes_below(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_below(2), Vec::<u64>::new());
        assert_eq!(primes_below(3), vec![2]);
        assert_eq!(primes_below(1_000_000).len(), 78498);
    }

    #[test]
    fn stream_crosses_cache_boundary() {
        let ps: Vec<u64> = PrimeStream::from(CACHE_LIMIT - 100).take(12).collect();
        for w in ps.windows(2) {
            assert_eq!(next_prime(w[0]), w[1]);
        }
        assert!(ps.iter().all(|&p| is_prime_u64(p)));
    }

    #[test]
    fn primality_u64() {
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to 2,3,5,7
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(2));
    }

    #[test]
    fn census_matches_plain_sieve() {
        let ps = primes_below(5_000_000);
        let lo = 1000;
        let hi = 4_321_001;
        let want: Vec<u64> = ps.iter().copied().filter(|&p| p > lo && p < hi).collect();
        let c = census(lo, hi, ClassFilter::All);
        assert_eq!(c.count, want.len() as u64);
        let s: CompensatedSum = want.iter().map(|&p| 1.0 / p as f64).collect();
        assert!((c.inverse_sum - s.value()).abs() < 1e-13);
        let c14 = census(0, hi, ClassFilter::OneMod(14));
        assert_eq!(c14.count, ps.iter().filter(|&&p| p < hi && p % 14 == 1).count() as u64);
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(125), Some((5, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn class_filter() {
        assert!(ClassFilter::OneMod(14).accepts(29));
        assert!(!ClassFilter::OneMod(14).accepts(2));
        assert!(ClassFilter::NotOneMod(8).accepts(2));
        assert!(!ClassFilter::NotOneMod(8).accepts(17));
    }
}
