use num_bigint::BigUint;
use num_traits::One;

use super::{Poly, PolyRing};
use crate::ffield::Field;

/// Order of the unit group of `F_q[x]/(f)`, from the factorization of `f`.
pub fn poly_phi<E>(factored: &[(Poly<E>, u32)], q: &BigUint) -> BigUint {
    factored.iter().fold(BigUint::one(), |acc, (p, e)| {
        let d = p.degree().expect("nonzero factor") as u32;
        acc * (q.pow(e * d) - q.pow((e - 1) * d))
    })
}

pub fn poly_mobius<E>(factored: &[(Poly<E>, u32)]) -> i32 {
    if factored.iter().any(|(_, e)| *e > 1) {
        0
    } else if factored.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Number of square-free monic divisors.
pub fn poly_w<E>(factored: &[(Poly<E>, u32)]) -> BigUint {
    BigUint::one() << factored.len()
}

/// A monic divisor with its exponent vector against the parent factor list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor<E> {
    pub poly: Poly<E>,
    pub exps: Vec<u32>,
}

/// All monic divisors, graded by degree and then in canonical order.
pub fn poly_divisors<F: Field>(ring: &PolyRing<'_, F>, factored: &[(Poly<F::Elem>, u32)]) -> Vec<Divisor<F::Elem>> {
    let mut out = vec![Divisor { poly: ring.one(), exps: vec![0; factored.len()] }];
    for (i, (p, e)) in factored.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*e {
                cur.poly = ring.mul(&cur.poly, p);
                cur.exps[i] += 1;
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out.sort_by_cached_key(|d| ring.index_key(&d.poly));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::SmallField;
    use crate::fqpoly::factor_xn_minus_1;

    #[test]
    fn phi_examples() {
        let f5 = SmallField::prime(5).unwrap();
        let r = PolyRing::new(&f5);
        let q = BigUint::from(5u32);
        assert_eq!(poly_phi(&[(r.linear(&1), 1)], &q), BigUint::from(4u32));
        let fac = factor_xn_minus_1(&f5, 8);
        assert_eq!(poly_phi(&fac, &q), BigUint::from(147456u32));
        assert_eq!(poly_w(&fac), BigUint::from(64u32));
        assert_eq!(poly_mobius(&[(r.linear(&1), 2)]), 0);
        assert_eq!(poly_mobius(&fac), 1);
    }

    #[test]
    fn phi_sums_to_q_power() {
        for (p, m) in [(2u64, 1u32), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2)] {
            let f = SmallField::new(p, m, 0).unwrap();
            let r = PolyRing::new(&f);
            let q = f.size();
            for n in 1..=16u64 {
                let fac = factor_xn_minus_1(&f, n);
                let divs = poly_divisors(&r, &fac);
                let total =
                    divs.iter().fold(BigUint::from(0u32), |acc, d| acc + poly_phi(&d_factored(&fac, &d.exps), &q));
                assert_eq!(total, q.pow(n as u32), "q={q} n={n}");
                let degs: Vec<usize> = divs.iter().map(|d| d.poly.degree().unwrap()).collect();
                assert!(degs.windows(2).all(|w| w[0] <= w[1]));
                for d in &divs {
                    assert!(r.divides(&d.poly, &r.xn_minus_1(n as usize)));
                }
            }
        }
    }

    fn d_factored(fac: &[(Poly<u32>, u32)], exps: &[u32]) -> Vec<(Poly<u32>, u32)> {
        fac.iter().zip(exps).filter(|(_, &e)| e > 0).map(|((p, _), &e)| (p.clone(), e)).collect()
    }
}
