//! Rational functions over `F_{q^n}`, membership in the class Υ(m1, m2),
//! evaluation and the exceptional set.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{ExtField, Field, FieldCtx, FieldElem, SmallField};
use crate::fqpoly::{parse_ratio, Poly, PolyRing};

type Ext = ExtField<SmallField>;

/// `num / den` in lowest terms with `den` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly<FieldElem>,
    pub den: Poly<FieldElem>,
}

/// Field over which Υ membership is decided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffField {
    /// `F_{q^n}`: factor over the big field, require `gcd(m, q^n - 1) = 1`.
    #[default]
    Ext,
    /// `F_q`: coefficients must lie in `F_q`; require `gcd(m, q - 1) = 1`.
    Base,
}

/// Result of a Υ membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Upsilon {
    pub member: bool,
    /// Irreducible `g != x` with `g^m || num * den` and `gcd(m, Q - 1) = 1`.
    pub witness: Option<(Poly<FieldElem>, u32)>,
    pub reason: Option<String>,
}

fn ring(ctx: &FieldCtx) -> PolyRing<'_, Ext> {
    PolyRing::new(ctx.ext())
}

impl RatFunc {
    pub fn new(ctx: &FieldCtx, num: Poly<FieldElem>, den: Poly<FieldElem>) -> Result<Self> {
        let r = ring(ctx);
        if den.is_zero() {
            return Err(Error::Pole);
        }
        let g = r.gcd(&num, &den);
        let (mut num, mut den) = (r.div(&num, &g), r.div(&den, &g));
        let li = ctx.ext().inv(den.lead().unwrap()).unwrap();
        num = r.scale(&num, &li);
        den = r.scale(&den, &li);
        Ok(RatFunc { num, den })
    }

    pub fn polynomial(ctx: &FieldCtx, num: Poly<FieldElem>) -> Self {
        RatFunc { num, den: ring(ctx).one() }
    }

    /// The identity function `x`.
    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::polynomial(ctx, ring(ctx).x())
    }

    /// Parse `num` or `num/den`; `a` is the generator of `F_{q^n}`.
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<Self> {
        let (n, d) = parse_ratio(&ring(ctx), s, Some(ctx.generator()))?;
        Self::new(ctx, n, d)
    }

    /// Embed polynomials with `F_q` coefficients.
    pub fn from_base(ctx: &FieldCtx, num: &Poly<u32>, den: &Poly<u32>) -> Result<Self> {
        let lift = |p: &Poly<u32>| Poly::new(p.coeffs.iter().map(|&c| ctx.embed(c)).collect());
        Self::new(ctx, lift(num), lift(den))
    }

    pub fn deg_num(&self) -> usize {
        self.num.degree().unwrap_or(0)
    }

    pub fn deg_den(&self) -> usize {
        self.den.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    /// Multiply numerator and denominator by a nonzero constant. The stored
    /// form is renormalized, so the result equals `self`.
    pub fn rescaled(&self, ctx: &FieldCtx, c: &FieldElem) -> Result<Self> {
        let r = ring(ctx);
        Self::new(ctx, r.scale(&self.num, c), r.scale(&self.den, c))
    }

    /// `num(alpha) / den(alpha)`.
    pub fn evaluate(&self, ctx: &FieldCtx, a: &FieldElem) -> Result<FieldElem> {
        let r = ring(ctx);
        let d = r.eval(&self.den, a);
        let inv = ctx.ext().inv(&d).ok_or(Error::Pole)?;
        Ok(ctx.ext().mul(&r.eval(&self.num, a), &inv))
    }

    /// True when `alpha` is a zero or pole.
    pub fn is_exceptional(&self, ctx: &FieldCtx, a: &FieldElem) -> bool {
        let r = ring(ctx);
        ctx.is_zero(&r.eval(&self.num, a)) || ctx.is_zero(&r.eval(&self.den, a))
    }

    /// Zeros and poles in `F_{q^n}`, by root extraction, sorted by index.
    pub fn exceptional_set(&self, ctx: &FieldCtx) -> Vec<FieldElem> {
        let r = ring(ctx);
        let mut out = r.roots(&self.num);
        out.extend(r.roots(&self.den));
        out.sort_by_key(|a| ctx.ext().index_of(a));
        out.dedup();
        out
    }

    /// Same set by a full scan of the field.
    pub fn exceptional_set_scan(&self, ctx: &FieldCtx) -> Vec<FieldElem> {
        ctx.elements().filter(|a| self.is_exceptional(ctx, a)).collect()
    }

    /// Render with coefficients as integers when in `F_p`, otherwise as
    /// powers of the generator `a` (so the result parses back).
    pub fn display(&self, ctx: &FieldCtx) -> String {
        let n = poly_string(ctx, &self.num);
        if ring(ctx).is_one(&self.den) {
            return n;
        }
        format!("({n})/({})", poly_string(ctx, &self.den))
    }

    /// Υ(m1, m2) membership over the chosen coefficient field.
    pub fn in_upsilon(&self, ctx: &FieldCtx, m1: usize, m2: usize, field: CoeffField) -> Upsilon {
        let no = |why: &str| Upsilon { member: false, witness: None, reason: Some(why.into()) };
        if self.num.is_zero() {
            return no("numerator is zero");
        }
        if self.deg_num() > m1 || self.deg_den() > m2 {
            return no("degree bound exceeded");
        }
        let r = ring(ctx);
        if !r.is_one(&r.gcd(&self.num, &self.den)) {
            return no("numerator and denominator share a factor");
        }
        let prod = r.mul(&self.num, &self.den);
        let (factors, group): (Vec<(Poly<FieldElem>, u32)>, num_bigint::BigUint) = match field {
            CoeffField::Ext => (r.factor(&prod, 0), ctx.order().clone()),
            CoeffField::Base => {
                let fq = ctx.base();
                let br = PolyRing::new(fq);
                let Some(base) = prod.coeffs.iter().map(|c| ctx.ext().as_base(c)).collect::<Option<Vec<u32>>>() else {
                    return no("coefficients are not in F_q");
                };
                let fac = br.factor(&br.normalized(base), 0);
                let lifted = fac
                    .into_iter()
                    .map(|(p, e)| (Poly::new(p.coeffs.iter().map(|&c| ctx.embed(c)).collect()), e))
                    .collect();
                (lifted, num_bigint::BigUint::from(ctx.q() - 1))
            }
        };
        let x = r.x();
        for (g, m) in factors {
            if g == x {
                continue;
            }
            if num_bigint::BigUint::from(m).gcd(&group) == num_bigint::BigUint::from(1u32) {
                return Upsilon { member: true, witness: Some((g, m)), reason: None };
            }
        }
        no("no irreducible g != x with admissible exact multiplicity")
    }
}

fn coeff_string(ctx: &FieldCtx, c: &FieldElem) -> String {
    if let Some(b) = ctx.ext().as_base(c) {
        if (b as u64) < ctx.p() {
            return b.to_string();
        }
    }
    match ctx.dlog(c) {
        Ok(k) => format!("a^{k}"),
        Err(_) => format!("{:?}", ctx.residues(c)),
    }
}

pub fn poly_string(ctx: &FieldCtx, p: &Poly<FieldElem>) -> String {
    let ext = ctx.ext();
    crate::fqpoly::display_with(p, |c| coeff_string(ctx, c), |c| ext.is_one(c), |c| ext.is_zero(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_ctx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn upsilon_examples() {
        let c = make_ctx(7, 1, 2, 0).unwrap();
        let f = RatFunc::parse(&c, "x(x+1)").unwrap();
        let u = f.in_upsilon(&c, 2, 1, CoeffField::Ext);
        assert!(u.member);
        assert_eq!(u.witness.unwrap().0, RatFunc::parse(&c, "x+1").unwrap().num);
        let u = f.in_upsilon(&c, 2, 1, CoeffField::Base);
        assert!(u.member);

        let f = RatFunc::parse(&c, "x^2").unwrap();
        assert!(!f.in_upsilon(&c, 2, 1, CoeffField::Ext).member);

        let f = RatFunc::parse(&c, "(x+1)^6").unwrap();
        assert!(!f.in_upsilon(&c, 6, 0, CoeffField::Ext).member);
        assert!(!f.in_upsilon(&c, 6, 0, CoeffField::Base).member);
        let f = RatFunc::parse(&c, "(x+1)^6 (x+2)").unwrap();
        assert!(f.in_upsilon(&c, 7, 0, CoeffField::Ext).member);
    }

    #[test]
    fn upsilon_modulus_follows_field() {
        // multiplicity 5: gcd(5, 7-1) = 1 but gcd(5, 7^2-1) = 1 too; use 3
        let c = make_ctx(7, 1, 2, 0).unwrap();
        let f = RatFunc::parse(&c, "(x+1)^5").unwrap();
        assert!(f.in_upsilon(&c, 5, 0, CoeffField::Base).member);
        assert!(f.in_upsilon(&c, 5, 0, CoeffField::Ext).member);
        let c = make_ctx(5, 1, 2, 0).unwrap();
        let f = RatFunc::parse(&c, "(x+1)^3").unwrap();
        // gcd(3, 4) = 1, gcd(3, 24) = 3
        assert!(f.in_upsilon(&c, 3, 0, CoeffField::Base).member);
        assert!(!f.in_upsilon(&c, 3, 0, CoeffField::Ext).member);
    }

    #[test]
    fn exceptional_examples() {
        let c = make_ctx(7, 1, 2, 0).unwrap();
        let id = RatFunc::identity(&c);
        assert_eq!(id.exceptional_set(&c), vec![c.zero()]);
        let f = RatFunc::parse(&c, "(x^2+1)/(x+1)").unwrap();
        let s = f.exceptional_set(&c);
        assert_eq!(s, f.exceptional_set_scan(&c));
        assert!(s.len() <= 3);
        assert!(s.contains(&c.embed(6)));
        for a in c.elements() {
            assert_eq!(id.evaluate(&c, &a).unwrap(), a);
        }
        assert_eq!(f.evaluate(&c, &c.embed(6)), Err(Error::Pole));
    }

    #[test]
    fn random_functions_respect_bounds() {
        let c = make_ctx(3, 1, 4, 0).unwrap();
        let r = ring(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let dn = rng.random_range(0..4usize);
            let dd = rng.random_range(0..3usize);
            let num = r.normalized((0..=dn).map(|_| c.ext().random(&mut rng)).collect());
            let den = r.normalized((0..=dd).map(|_| c.ext().random(&mut rng)).collect());
            if den.is_zero() || num.is_zero() {
                continue;
            }
            let f = RatFunc::new(&c, num.clone(), den.clone()).unwrap();
            assert!(f.exceptional_set(&c).len() <= f.deg_num() + f.deg_den());
            assert_eq!(f.exceptional_set(&c), f.exceptional_set_scan(&c));
            let a = c.ext().random(&mut rng);
            // long-division oracle
            let dv = r.eval(&den, &a);
            if !c.is_zero(&dv) {
                let (qt, rm) = r.divrem(&num, &den);
                let lhs = f.evaluate(&c, &a).unwrap();
                let rhs = c.ext().add(&r.eval(&qt, &a), &c.ext().div(&r.eval(&rm, &a), &dv).unwrap());
                assert_eq!(lhs, rhs);
            }
            let k = c.ext().random(&mut rng);
            if !c.is_zero(&k) {
                let g = f.rescaled(&c, &k).unwrap();
                assert_eq!(g.in_upsilon(&c, 3, 2, CoeffField::Ext), f.in_upsilon(&c, 3, 2, CoeffField::Ext));
            }
        }
    }

    #[test]
    fn display_roundtrip() {
        let c = make_ctx(5, 1, 3, 0).unwrap();
        for s in ["x(x+1)", "(x^2+1)/(x+2)", "(x^2+a*x+1)/(x+1)", "3*x^3 + a^7"] {
            let f = RatFunc::parse(&c, s).unwrap();
            let back = RatFunc::parse(&c, &f.display(&c)).unwrap();
            assert_eq!(back, f, "{s} -> {}", f.display(&c));
        }
    }
}
