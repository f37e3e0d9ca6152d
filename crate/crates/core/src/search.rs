//! Exhaustive ground truth: element classes, triple counts and certified
//! witnesses `(alpha, F(alpha))`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::condition_qn;
use crate::elems::{fq_order, is_g_free, is_r_primitive, is_rr_free, k_from_order, normality_k, profile, ElemProfile};
use crate::error::{Error, Result};
use crate::ffield::{make_ctx, CtxManifest, Field, FieldCtx, FieldElem};
use crate::fqpoly::{Poly, PolyRing};
use crate::intnt::prime_power;
use crate::ratfun::{CoeffField, RatFunc};

/// Default ceiling on the number of field elements scanned.
pub const SEARCH_CAP: u64 = 100_000_000;

/// Ceiling for triple counting.
pub const TRIPLE_CAP: u64 = 1_000_000;

/// `(r1, k1, r2, k2)`: alpha is r1-primitive k1-normal, F(alpha) is
/// r2-primitive k2-normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairParams {
    pub r1: u64,
    pub k1: usize,
    pub r2: u64,
    pub k2: usize,
}

impl PairParams {
    /// `(2, 2, 3, 1)`.
    pub const STANDARD: PairParams = PairParams { r1: 2, k1: 2, r2: 3, k2: 1 };
}

fn check_size(ctx: &FieldCtx, cap: u64) -> Result<u64> {
    ctx.size_u64()
        .filter(|&s| s <= cap)
        .ok_or_else(|| Error::SizeCap { size: ctx.ext().size().to_string(), cap: cap.to_string() })
}

/// Exponents `j < q^n - 1` with `gcd(j, q^n - 1) = r`, walked in blocks.
fn blocks(order: u64, r: u64, block: u64) -> impl Iterator<Item = (u64, u64)> {
    let count = order / r;
    (0..count.div_ceil(block)).map(move |b| (b * block, ((b + 1) * block).min(count)))
}

/// Elements `gamma^(r i)` for `i` in `[lo, hi)` with `gcd(i, N/r) = 1`.
fn for_each_in_block(
    ctx: &FieldCtx,
    r: u64,
    lo: u64,
    hi: u64,
    mut f: impl FnMut(u64, &FieldElem) -> bool,
) -> Option<u64> {
    let order = ctx.order_u64().unwrap();
    let cof = order / r;
    let ext = ctx.ext();
    let step = ctx.gamma_pow(&BigUint::from(r));
    let mut cur = ext.pow_u64(&step, lo);
    for i in lo..hi {
        if i.gcd(&cof) == 1 && f(r * i, &cur) {
            return Some(r * i);
        }
        cur = ext.mul(&cur, &step);
    }
    None
}

/// `#{alpha : alpha r-primitive and k-normal}` by a full scan.
pub fn count_class(ctx: &FieldCtx, r: u64, k: usize, cap: u64) -> Result<u64> {
    check_size(ctx, cap)?;
    let order = ctx.order_u64().unwrap();
    if r == 0 || !order.is_multiple_of(r) {
        return Ok(0);
    }
    let bs: Vec<(u64, u64)> = blocks(order, r, 1 << 14).collect();
    Ok(bs
        .par_iter()
        .map(|&(lo, hi)| {
            let mut c = 0u64;
            for_each_in_block(ctx, r, lo, hi, |_, a| {
                if k_from_order(ctx, a) == k {
                    c += 1;
                }
                false
            });
            c
        })
        .sum())
}

/// Options of [`find_witness`].
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub cap: u64,
    /// Reject `F` outside Υ(2, 1).
    pub check_upsilon: bool,
    /// Restrict to `Ord(alpha) = alpha_ord`.
    pub alpha_ord: Option<Poly<u32>>,
    /// Restrict to `Ord(F(alpha)) = image_ord`.
    pub image_ord: Option<Poly<u32>>,
    pub block: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { cap: SEARCH_CAP, check_upsilon: true, alpha_ord: None, image_ord: None, block: 1 << 12 }
    }
}

/// A certified pair `(alpha, F(alpha))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    /// `alpha = generator^j`.
    #[serde(with = "crate::intnt::decimal")]
    pub j: BigUint,
    pub alpha: FieldElem,
    pub alpha_profile: ElemProfile,
    pub image: FieldElem,
    pub image_profile: ElemProfile,
    #[serde(rename = "F")]
    pub f: String,
    pub params: PairParams,
}

/// Self-contained JSON form of a witness, re-verifiable from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub field: CtxManifest,
    pub j: String,
    /// Residue digits of alpha, one row per power of `x`.
    pub alpha: Vec<Vec<u32>>,
    pub image: Vec<Vec<u32>>,
    #[serde(rename = "F")]
    pub f: String,
    pub params: PairParams,
    pub alpha_order: String,
    pub alpha_fq_order: Vec<u32>,
    pub alpha_k: usize,
    pub image_order: String,
    pub image_fq_order: Vec<u32>,
    pub image_k: usize,
}

fn verify_fails(what: &str) -> Error {
    Error::InvalidArgument(format!("witness check failed: {what}"))
}

impl PairWitness {
    /// Build from `j`, checking every property.
    pub fn certify(ctx: &FieldCtx, f: &RatFunc, j: &BigUint, params: PairParams) -> Result<Self> {
        let alpha = ctx.gamma_pow(j);
        if f.is_exceptional(ctx, &alpha) {
            return Err(verify_fails("alpha is a zero or pole of F"));
        }
        let image = f.evaluate(ctx, &alpha)?;
        let ap = profile(ctx, &alpha);
        let ip = profile(ctx, &image);
        let w =
            PairWitness { j: j.clone(), alpha, alpha_profile: ap, image, image_profile: ip, f: f.display(ctx), params };
        w.verify(ctx, f)?;
        Ok(w)
    }

    /// Recompute every property with the gcd route for normality and the
    /// order route for primitivity.
    pub fn verify(&self, ctx: &FieldCtx, f: &RatFunc) -> Result<()> {
        let p = self.params;
        if ctx.gamma_pow(&self.j) != self.alpha {
            return Err(verify_fails("alpha != generator^j"));
        }
        if f.is_exceptional(ctx, &self.alpha) {
            return Err(verify_fails("alpha in exceptional set"));
        }
        if !is_r_primitive(ctx, &self.alpha, &BigUint::from(p.r1))? {
            return Err(verify_fails("alpha order"));
        }
        if normality_k(ctx, &self.alpha) != p.k1 || self.alpha_profile.k != p.k1 {
            return Err(verify_fails("alpha normality"));
        }
        if f.evaluate(ctx, &self.alpha)? != self.image {
            return Err(verify_fails("image != F(alpha)"));
        }
        if !is_r_primitive(ctx, &self.image, &BigUint::from(p.r2))? {
            return Err(verify_fails("image order"));
        }
        if normality_k(ctx, &self.image) != p.k2 || self.image_profile.k != p.k2 {
            return Err(verify_fails("image normality"));
        }
        if profile(ctx, &self.alpha) != self.alpha_profile || profile(ctx, &self.image) != self.image_profile {
            return Err(verify_fails("profile mismatch"));
        }
        Ok(())
    }

    pub fn to_record(&self, ctx: &FieldCtx) -> WitnessRecord {
        WitnessRecord {
            field: ctx.manifest(),
            j: self.j.to_string(),
            alpha: ctx.residues(&self.alpha),
            image: ctx.residues(&self.image),
            f: self.f.clone(),
            params: self.params,
            alpha_order: self.alpha_profile.mult_order.to_string(),
            alpha_fq_order: self.alpha_profile.fq_order.coeffs.clone(),
            alpha_k: self.alpha_profile.k,
            image_order: self.image_profile.mult_order.to_string(),
            image_fq_order: self.image_profile.fq_order.coeffs.clone(),
            image_k: self.image_profile.k,
        }
    }
}

impl WitnessRecord {
    /// Rebuild the field from the manifest, reparse `F` and check the
    /// recorded values against fresh computations.
    pub fn verify(&self) -> Result<PairWitness> {
        let ctx = FieldCtx::from_manifest(&self.field)?;
        let f = RatFunc::parse(&ctx, &self.f)?;
        let j: BigUint = self.j.parse().map_err(|_| verify_fails("j is not an integer"))?;
        let w = PairWitness::certify(&ctx, &f, &j, self.params)?;
        if w.to_record(&ctx) != *self {
            return Err(verify_fails("recorded values differ from recomputation"));
        }
        Ok(w)
    }
}

/// Minimal-`j` witness, scanning `alpha = generator^j` over r1-primitive
/// exponents in ascending order.
pub fn find_witness(
    ctx: &FieldCtx,
    f: &RatFunc,
    params: PairParams,
    opts: &SearchOptions,
) -> Result<Option<PairWitness>> {
    check_size(ctx, opts.cap)?;
    if opts.check_upsilon && !f.in_upsilon(ctx, 2, 1, CoeffField::Ext).member {
        return Err(Error::InvalidArgument(format!("{} is not in Υ(2,1)", f.display(ctx))));
    }
    let order = ctx.order_u64().unwrap();
    if !order.is_multiple_of(params.r1) || !order.is_multiple_of(params.r2) {
        return Ok(None);
    }
    let r2 = BigUint::from(params.r2);
    let n = ctx.n() as usize;
    let test = |a: &FieldElem| -> bool {
        if let Some(o) = &opts.alpha_ord {
            if fq_order(ctx, a) != *o {
                return false;
            }
        } else if n - fq_order(ctx, a).degree().unwrap() != params.k1 {
            return false;
        }
        let Ok(img) = f.evaluate(ctx, a) else { return false };
        if ctx.is_zero(&img) || f.is_exceptional(ctx, a) {
            return false;
        }
        if !is_r_primitive(ctx, &img, &r2).unwrap_or(false) {
            return false;
        }
        match &opts.image_ord {
            Some(o) => fq_order(ctx, &img) == *o,
            None => n - fq_order(ctx, &img).degree().unwrap() == params.k2,
        }
    };
    let bs: Vec<(u64, u64)> = blocks(order, params.r1, opts.block).collect();
    let batch = rayon::current_num_threads().max(1) * 4;
    for chunk in bs.chunks(batch) {
        let hit =
            chunk.par_iter().filter_map(|&(lo, hi)| for_each_in_block(ctx, params.r1, lo, hi, |_, a| test(a))).min();
        if let Some(j) = hit {
            return PairWitness::certify(ctx, f, &BigUint::from(j), params).map(Some);
        }
    }
    Ok(None)
}

/// Which divisors `f1, f2` a triple count ranges over.
#[derive(Clone, Debug)]
pub enum CountMode {
    /// The given `f1`, `f2`.
    Fixed { f1: Poly<u32>, f2: Poly<u32> },
    /// Sum over all monic `f1, f2 | x^n - 1` with `deg f1 = k1`, `deg f2 = k2`.
    AnyDegree { k1: usize, k2: usize },
}

/// Inputs to a triple count.
#[derive(Clone, Debug)]
pub struct TripleSpec {
    pub big_r1: u64,
    pub big_r2: u64,
    pub r1: u64,
    pub r2: u64,
    pub g1: Poly<u32>,
    pub g2: Poly<u32>,
}

impl TripleSpec {
    /// `R_i = (q^n - 1)/r_i`, `g_i = x^n - 1`.
    pub fn full(ctx: &FieldCtx, r1: u64, r2: u64) -> Self {
        let order = ctx.order_u64().expect("small field");
        TripleSpec { big_r1: order / r1, big_r2: order / r2, r1, r2, g1: ctx.xn1(), g2: ctx.xn1() }
    }
}

/// `#{beta : beta g-free, f ∘ beta = y}` indexed by `y`.
fn preimage_counts(ctx: &FieldCtx, elems: &[FieldElem], f: &Poly<u32>, g: &Poly<u32>) -> Result<Vec<u64>> {
    let mut out = vec![0u64; elems.len()];
    let free: Vec<bool> = elems.par_iter().map(|b| is_g_free(ctx, b, g)).collect::<Result<_>>()?;
    for (b, ok) in elems.iter().zip(free) {
        if ok {
            let y = crate::elems::additive_action(ctx, f, b);
            out[ctx.ext().index_of(&y) as usize] += 1;
        }
    }
    Ok(out)
}

fn count_fixed(
    ctx: &FieldCtx,
    elems: &[FieldElem],
    valid: &[(usize, usize)],
    spec: &TripleSpec,
    f1: &Poly<u32>,
    f2: &Poly<u32>,
) -> Result<u64> {
    let c1 = preimage_counts(ctx, elems, f1, &spec.g1)?;
    let c2 = preimage_counts(ctx, elems, f2, &spec.g2)?;
    Ok(valid.iter().map(|&(a, b)| c1[a] * c2[b]).sum())
}

/// Number of `(alpha, beta1, beta2)` with `alpha` outside the exceptional
/// set and `(R1, r1)`-free, `F(alpha)` `(R2, r2)`-free, `beta_i` `g_i`-free,
/// `alpha = f1 ∘ beta1` and `F(alpha) = f2 ∘ beta2`.
pub fn count_triples(ctx: &FieldCtx, f: &RatFunc, spec: &TripleSpec, mode: &CountMode) -> Result<u64> {
    check_size(ctx, TRIPLE_CAP)?;
    let elems: Vec<FieldElem> = ctx.elements().collect();
    let (br1, r1) = (BigUint::from(spec.big_r1), BigUint::from(spec.r1));
    let (br2, r2) = (BigUint::from(spec.big_r2), BigUint::from(spec.r2));
    let valid: Vec<(usize, usize)> = elems
        .par_iter()
        .enumerate()
        .skip(1)
        .filter_map(|(i, a)| {
            if f.is_exceptional(ctx, a) {
                return None;
            }
            let img = f.evaluate(ctx, a).ok()?;
            let ok = is_rr_free(ctx, a, &br1, &r1).ok()? && is_rr_free(ctx, &img, &br2, &r2).ok()?;
            ok.then(|| (i, ctx.ext().index_of(&img) as usize))
        })
        .collect();
    match mode {
        CountMode::Fixed { f1, f2 } => count_fixed(ctx, &elems, &valid, spec, f1, f2),
        CountMode::AnyDegree { k1, k2 } => {
            let ring = PolyRing::new(ctx.base());
            let divs = crate::fqpoly::poly_divisors(&ring, ctx.xn1_factors());
            let of_deg = |k: usize| -> Vec<Poly<u32>> {
                divs.iter().filter(|d| d.poly.degree() == Some(k)).map(|d| d.poly.clone()).collect()
            };
            let mut total = 0;
            for f1 in of_deg(*k1) {
                for f2 in of_deg(*k2) {
                    total += count_fixed(ctx, &elems, &valid, spec, &f1, &f2)?;
                }
            }
            Ok(total)
        }
    }
}

/// The fixed test family: `x(x+1)`, `(x^2+1)/(x+c)` for the first `c` (by
/// index) giving a member of Υ(2,1), and `(x^2+ax+1)/(x+1)` with `a` the
/// generator. Entries outside Υ(2,1) in this field are `None`.
pub fn test_family(ctx: &FieldCtx) -> Vec<(String, Option<RatFunc>)> {
    let ring = PolyRing::new(ctx.ext());
    let member = |r: &RatFunc| r.in_upsilon(ctx, 2, 1, CoeffField::Ext).member;
    let mut out = Vec::new();
    let f1 = RatFunc::parse(ctx, "x(x+1)").expect("valid");
    out.push(("x(x+1)".to_string(), member(&f1).then_some(f1)));
    let num = ring.normalized(vec![ctx.one(), ctx.zero(), ctx.one()]);
    let size = ctx.size_u64().unwrap_or(u64::MAX);
    let mut second = None;
    for i in 0..size.min(1 << 16) {
        let c = ctx.ext().from_index(i);
        let den = ring.normalized(vec![c, ctx.one()]);
        if let Ok(r) = RatFunc::new(ctx, num.clone(), den) {
            if r.deg_den() == 1 && member(&r) {
                second = Some(r);
                break;
            }
        }
    }
    out.push(("(x^2+1)/(x+c)".to_string(), second));
    let f3 = RatFunc::parse(ctx, "(x^2+a*x+1)/(x+1)").expect("valid");
    let ok = f3.deg_num() == 2 && f3.deg_den() == 1 && member(&f3);
    out.push(("(x^2+a*x+1)/(x+1)".to_string(), ok.then_some(f3)));
    out
}

/// Search outcome for one family member.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyResult {
    pub label: String,
    #[serde(rename = "F")]
    pub f: Option<String>,
    pub found: Option<bool>,
    pub j: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExistenceCell {
    pub q: u64,
    pub n: u64,
    pub condition: bool,
    pub results: Vec<FamilyResult>,
    /// Set when the observed existence contradicts the condition.
    pub violation: Option<String>,
}

/// Build a field for `(q, n)`.
pub fn ctx_for(q: u64, n: u64, seed: u64) -> Result<FieldCtx> {
    let (p, m) = prime_power(q).ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
    make_ctx(p, m, n as u32, seed)
}

/// Scan each cell with every family member. Absence of witnesses where the
/// condition holds is flagged for `n >= 8`; presence where it fails is
/// flagged for every `n`.
pub fn existence_table(
    cells: &[(u64, u64)],
    family_size: usize,
    params: PairParams,
    opts: &SearchOptions,
    seed: u64,
) -> Result<Vec<ExistenceCell>> {
    let mut out = Vec::new();
    for &(q, n) in cells {
        let ctx = ctx_for(q, n, seed)?;
        let cond = condition_qn(q, n);
        let mut results = Vec::new();
        for (label, f) in test_family(&ctx).into_iter().take(family_size) {
            let r = match f {
                None => FamilyResult { label, f: None, found: None, j: None },
                Some(f) => {
                    let w = find_witness(&ctx, &f, params, opts)?;
                    FamilyResult {
                        label,
                        f: Some(f.display(&ctx)),
                        found: Some(w.is_some()),
                        j: w.map(|w| w.j.to_string()),
                    }
                }
            };
            results.push(r);
        }
        let any = results.iter().any(|r| r.found == Some(true));
        let all = results.iter().all(|r| r.found != Some(false));
        let violation = if !cond && any {
            Some("witness found although the condition fails".into())
        } else if cond && !all && n >= 8 {
            Some("no witness although the condition holds".into())
        } else {
            None
        };
        out.push(ExistenceCell { q, n, condition: cond, results, violation });
    }
    Ok(out)
}

/// `phi((q^n - 1)/r)` for small fields.
pub fn r_primitive_count(ctx: &FieldCtx, r: u64) -> u64 {
    let order = ctx.order_u64().unwrap();
    if !order.is_multiple_of(r) {
        return 0;
    }
    crate::intnt::euler_phi_u64(order / r)
}

/// `j` as `u64`, when it fits.
pub fn witness_j(w: &PairWitness) -> Option<u64> {
    if w.j.is_zero() {
        Some(0)
    } else {
        w.j.to_u64()
    }
}
