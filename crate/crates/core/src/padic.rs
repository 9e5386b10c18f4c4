//! p-adic valuations and modular evaluation of the auxiliary integers
//! δ_a, γ_a, λ_a and μ_a that control exponent relations in Macdonald groups.
//!
//! Everything here works on residues modulo a [`ModulusContext`]; the
//! integers themselves are astronomically large (δ_a has about a·log₂a bits,
//! λ_a is a sum with δ_a terms) and are never expanded, except δ_a itself when
//! it is needed as a summation length for λ_a.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Default bound on `a` for [`lambda_mod`].
pub const DEFAULT_LAMBDA_BOUND: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("valuation of zero is infinite")]
    InfiniteValuation,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(BigUint),
    #[error("{what} is only defined for a > 1, got a = {a}")]
    Domain { what: &'static str, a: BigInt },
    #[error("lambda_a requires a <= {bound}, got a = {a}")]
    TooLarge { a: BigInt, bound: u64 },
}

/// A p-adic valuation, possibly infinite (the valuation of zero).
///
/// `Infinite` compares above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialEq<u32> for Valuation {
    fn eq(&self, other: &u32) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<u32> for Valuation {
    fn partial_cmp(&self, other: &u32) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// `x = p^valuation · unit` with `p ∤ unit`; the sign of `x` lives in `unit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicSplit {
    pub p: u64,
    pub valuation: u32,
    pub unit: BigInt,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits off the full power of `p` dividing `x`.
pub fn split(x: &BigInt, p: u64) -> Result<PAdicSplit, PadicError> {
    if !is_prime(p) {
        return Err(PadicError::NotPrime(p));
    }
    if x.is_zero() {
        return Err(PadicError::InfiniteValuation);
    }
    let pb = BigInt::from(p);
    let mut unit = x.clone();
    let mut valuation = 0u32;
    loop {
        let (q, r) = unit.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        unit = q;
        valuation += 1;
    }
    Ok(PAdicSplit { p, valuation, unit })
}

/// `v_p(x)`, with `Infinite` for `x = 0`.
pub fn valuation(x: &BigInt, p: u64) -> Valuation {
    match split(x, p) {
        Ok(s) => Valuation::Finite(s.valuation),
        Err(_) => Valuation::Infinite,
    }
}

/// `v_p(x)` for machine integers.
pub fn valuation_i128(x: i128, p: u64) -> Valuation {
    if x == 0 {
        return Valuation::Infinite;
    }
    let p = p as i128;
    let mut x = x;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Valuation::Finite(v)
}

/// A modulus `M ≥ 2`; in practice always a prime power `p^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusContext {
    modulus: BigUint,
}

impl ModulusContext {
    pub fn new(modulus: BigUint) -> Result<Self, PadicError> {
        if modulus < BigUint::from(2u32) {
            return Err(PadicError::BadModulus(modulus));
        }
        Ok(ModulusContext { modulus })
    }

    pub fn prime_power(p: u64, exponent: u32) -> Self {
        ModulusContext {
            modulus: BigUint::from(p).pow(exponent).max(BigUint::from(2u32)),
        }
    }

    pub fn from_u64(modulus: u64) -> Result<Self, PadicError> {
        Self::new(BigUint::from(modulus))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// Canonical residue of a signed integer in `[0, M)`.
    pub fn reduce(&self, x: &BigInt) -> BigUint {
        let m = BigInt::from_biguint(Sign::Plus, self.modulus.clone());
        x.mod_floor(&m)
            .to_biguint()
            .expect("mod_floor with positive modulus is non-negative")
    }

    fn mul(&self, x: &BigUint, y: &BigUint) -> BigUint {
        (x * y) % &self.modulus
    }

    fn add(&self, x: &BigUint, y: &BigUint) -> BigUint {
        (x + y) % &self.modulus
    }

    fn sub(&self, x: &BigUint, y: &BigUint) -> BigUint {
        let y = y % &self.modulus;
        ((x + &self.modulus) - y) % &self.modulus
    }

    fn pow(&self, base: &BigUint, exponent: &BigUint) -> BigUint {
        base.modpow(exponent, &self.modulus)
    }
}

/// Running state `(S(t), W(t), a^t)` for the doubling evaluation of
/// `S(t) = Σ_{i<t} a^i` and `W(t) = Σ_{i<t} i·a^i`.
struct SumState {
    geo: BigUint,
    weighted: BigUint,
    power: BigUint,
}

fn sums(a: &BigInt, count: &BigUint, ctx: &ModulusContext) -> SumState {
    let a = ctx.reduce(a);
    let mut st = SumState {
        geo: BigUint::zero(),
        weighted: BigUint::zero(),
        power: BigUint::one() % ctx.modulus(),
    };
    // t tracks the prefix of `count` consumed so far, reduced mod M.
    let mut t = BigUint::zero();
    for bit in (0..count.bits()).rev() {
        // t -> 2t: W(2t) = W(t) + a^t (W(t) + t S(t)); S(2t) = S(t)(1 + a^t)
        let t_s = ctx.mul(&t, &st.geo);
        let inner = ctx.add(&st.weighted, &t_s);
        st.weighted = ctx.add(&st.weighted, &ctx.mul(&st.power, &inner));
        st.geo = ctx.mul(&st.geo, &ctx.add(&BigUint::one(), &st.power));
        st.power = ctx.mul(&st.power, &st.power);
        t = ctx.add(&t, &t);
        if count.bit(bit) {
            // t -> t+1: W += t a^t; S += a^t; a^{t+1} = a^t a
            st.weighted = ctx.add(&st.weighted, &ctx.mul(&t, &st.power));
            st.geo = ctx.add(&st.geo, &st.power);
            st.power = ctx.mul(&st.power, &a);
            t = ctx.add(&t, &BigUint::one());
        }
    }
    st
}

/// `Σ_{i=0}^{count-1} a^i mod M` in O(log count) modular steps.
pub fn geo_sum(a: &BigInt, count: &BigUint, ctx: &ModulusContext) -> BigUint {
    sums(a, count, ctx).geo
}

/// `Σ_{i=1}^{count-1} i·a^i mod M` in O(log count) modular steps.
pub fn weighted_sum(a: &BigInt, count: &BigUint, ctx: &ModulusContext) -> BigUint {
    sums(a, count, ctx).weighted
}

fn require_gt_one(a: &BigInt, what: &'static str) -> Result<BigUint, PadicError> {
    if *a <= BigInt::one() {
        return Err(PadicError::Domain { what, a: a.clone() });
    }
    Ok(a.to_biguint().expect("a > 1"))
}

/// `δ_a = (a-1)(a + 2a² + … + (a-1)a^{a-1}) mod M`.
pub fn delta_mod(a: &BigInt, ctx: &ModulusContext) -> Result<BigUint, PadicError> {
    let count = require_gt_one(a, "delta")?;
    let w = weighted_sum(a, &count, ctx);
    Ok(ctx.mul(&ctx.reduce(&(a - 1)), &w))
}

/// `γ_a = a^a - (1 + a + … + a^{a-1}) mod M`.
pub fn gamma_mod(a: &BigInt, ctx: &ModulusContext) -> Result<BigUint, PadicError> {
    let count = require_gt_one(a, "gamma")?;
    let st = sums(a, &count, ctx);
    // a^count is exactly the power left in the state
    Ok(ctx.sub(&st.power, &st.geo))
}

/// `μ_a = a^{a²+2} - a(1 + a + … + a^{a²-1}) mod M`, zero for `a ∈ {-1, 0, 1}`.
pub fn mu_mod(a: &BigInt, ctx: &ModulusContext) -> BigUint {
    if a.abs() <= BigInt::one() {
        return BigUint::zero();
    }
    let sq = (a * a).to_biguint().expect("square is non-negative");
    let ar = ctx.reduce(a);
    let lead = ctx.pow(&ar, &(&sq + 2u32));
    let tail = ctx.mul(&ar, &geo_sum(a, &sq, ctx));
    ctx.sub(&lead, &tail)
}

/// The exact integer δ_a, via `δ_a = (a + (a-2)·a^{a+1}) / (a-1)`.
pub fn delta_exact(a: &BigInt) -> Result<BigInt, PadicError> {
    let e = require_gt_one(a, "delta")?;
    let e = e.to_u32().ok_or_else(|| PadicError::TooLarge {
        a: a.clone(),
        bound: u32::MAX as u64,
    })?;
    let num: BigInt = a + (a - 2) * a.pow(e + 1);
    let den: BigInt = a - 1;
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// `λ_a = (a-1)(a + 2a² + … + (δ_a - 1)a^{δ_a - 1}) mod M` for `1 < a ≤ bound`.
pub fn lambda_mod_bounded(
    a: &BigInt,
    ctx: &ModulusContext,
    bound: u64,
) -> Result<BigUint, PadicError> {
    require_gt_one(a, "lambda")?;
    if *a > BigInt::from(bound) {
        return Err(PadicError::TooLarge {
            a: a.clone(),
            bound,
        });
    }
    let delta = delta_exact(a)?
        .to_biguint()
        .expect("delta_a is positive for a > 1");
    let w = weighted_sum(a, &delta, ctx);
    Ok(ctx.mul(&ctx.reduce(&(a - 1)), &w))
}

pub fn lambda_mod(a: &BigInt, ctx: &ModulusContext) -> Result<BigUint, PadicError> {
    lambda_mod_bounded(a, ctx, DEFAULT_LAMBDA_BOUND)
}

/// `ε = gcd(α-1, β-1)`, always positive.
pub fn epsilon(alpha: i64, beta: i64) -> Result<u64, PadicError> {
    if alpha == 1 || beta == 1 {
        let a = if alpha == 1 { alpha } else { beta };
        return Err(PadicError::Domain {
            what: "epsilon",
            a: BigInt::from(a),
        });
    }
    let x = (alpha as i128 - 1).unsigned_abs();
    let y = (beta as i128 - 1).unsigned_abs();
    Ok(x.gcd(&y) as u64)
}

/// What can be read off about `v_p(x)` from `x mod p^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValuationBound {
    Exact(u32),
    AtLeast(u32),
}

/// Reads `v_p` of a residue taken modulo `p^precision`. Never claims an exact
/// value when the residue is zero.
pub fn residue_valuation(residue: &BigUint, p: u64, precision: u32) -> ValuationBound {
    if residue.is_zero() {
        return ValuationBound::AtLeast(precision);
    }
    match valuation(&BigInt::from(residue.clone()), p) {
        Valuation::Finite(v) if v < precision => ValuationBound::Exact(v),
        _ => ValuationBound::AtLeast(precision),
    }
}

/// Computes the valuation of a quantity available only through residues,
/// starting at precision `expected + 4` and doubling while the residue
/// vanishes. Gives up at `max_precision` with a lower bound.
pub fn valuation_by_residue<F>(
    p: u64,
    expected: u32,
    max_precision: u32,
    mut residue_at: F,
) -> ValuationBound
where
    F: FnMut(&ModulusContext) -> BigUint,
{
    let mut precision = expected + 4;
    loop {
        let ctx = ModulusContext::prime_power(p, precision);
        match residue_valuation(&residue_at(&ctx), p, precision) {
            ValuationBound::Exact(v) => return ValuationBound::Exact(v),
            ValuationBound::AtLeast(n) if n >= max_precision => return ValuationBound::AtLeast(n),
            ValuationBound::AtLeast(_) => precision = (precision * 2).min(max_precision),
        }
    }
}

/// Inverse of `x` modulo `m`, if it exists.
pub fn mod_inverse(x: &BigInt, m: &BigUint) -> Option<BigUint> {
    let m = BigInt::from(m.clone());
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let ext = x.mod_floor(&m).extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    ext.x.mod_floor(&m).to_biguint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn ctx(m: u64) -> ModulusContext {
        ModulusContext::from_u64(m).unwrap()
    }

    fn naive_geo(a: i64, count: u64, m: u64) -> u64 {
        let m = m as i128;
        let mut s = 0i128;
        let mut p = 1i128;
        for _ in 0..count {
            s = (s + p).rem_euclid(m);
            p = (p * a as i128).rem_euclid(m);
        }
        s as u64
    }

    fn naive_weighted(a: i64, count: u64, m: u64) -> u64 {
        let m = m as i128;
        let mut s = 0i128;
        let mut p = 1i128;
        for i in 0..count {
            s = (s + (i as i128 % m) * p).rem_euclid(m);
            p = (p * a as i128).rem_euclid(m);
        }
        s as u64
    }

    #[test]
    fn split_examples() {
        let s = split(&big(54), 3).unwrap();
        assert_eq!((s.valuation, s.unit), (3, big(2)));
        let s = split(&big(-27), 3).unwrap();
        assert_eq!((s.valuation, s.unit), (3, big(-1)));
        let s = split(&big(20), 5).unwrap();
        assert_eq!((s.valuation, s.unit), (1, big(4)));
        assert_eq!(split(&big(0), 5), Err(PadicError::InfiniteValuation));
        assert_eq!(split(&big(10), 4), Err(PadicError::NotPrime(4)));
    }

    #[test]
    fn infinite_valuation_orders_above_finite() {
        assert!(Valuation::Infinite > Valuation::Finite(u32::MAX));
        assert!(Valuation::Finite(3) < Valuation::Finite(4));
        assert!(Valuation::Infinite >= 7u32);
        assert_eq!(valuation(&big(0), 7), Valuation::Infinite);
        assert_eq!(valuation_i128(-96, 2), Valuation::Finite(5));
    }

    #[test]
    fn geo_sum_examples() {
        assert_eq!(
            geo_sum(&big(7), &BigUint::zero(), &ctx(1000)),
            BigUint::zero()
        );
        // 1 + 7 + ... + 7^6, checked by direct summation
        assert_eq!(naive_geo(7, 7, 1_000_000_000), 137257);
        assert_eq!(
            geo_sum(&big(7), &BigUint::from(7u32), &ctx(1_000_000_000)),
            BigUint::from(137257u32)
        );
        assert_eq!(
            geo_sum(&big(2), &BigUint::from(10u32), &ctx(1024)),
            BigUint::from(1023u32)
        );
    }

    #[test]
    fn weighted_sum_examples() {
        assert_eq!(
            weighted_sum(&big(5), &BigUint::one(), &ctx(97)),
            BigUint::zero()
        );
        assert_eq!(
            weighted_sum(&big(2), &BigUint::from(2u32), &ctx(1000)),
            BigUint::from(2u32)
        );
        assert_eq!(naive_weighted(3, 4, 1_000_000), 102);
        assert_eq!(
            weighted_sum(&big(3), &BigUint::from(4u32), &ctx(1_000_000)),
            BigUint::from(102u32)
        );
    }

    #[test]
    fn negative_bases_give_canonical_residues() {
        for count in 0..40u64 {
            let got = geo_sum(&big(-4), &BigUint::from(count), &ctx(1001));
            assert_eq!(got, BigUint::from(naive_geo(-4, count, 1001)));
            let got = weighted_sum(&big(-4), &BigUint::from(count), &ctx(1001));
            assert_eq!(got, BigUint::from(naive_weighted(-4, count, 1001)));
        }
    }

    #[test]
    fn delta_and_gamma_small_values() {
        assert_eq!(
            delta_mod(&big(2), &ctx(1_000_000)).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(gamma_mod(&big(2), &ctx(1000)).unwrap(), BigUint::one());
        assert!(matches!(
            delta_mod(&big(1), &ctx(10)),
            Err(PadicError::Domain { .. })
        ));
        assert!(gamma_mod(&big(-3), &ctx(10)).is_err());
        assert_eq!(delta_exact(&big(3)).unwrap(), big(42));
    }

    #[test]
    fn mu_convention_and_small_value() {
        assert_eq!(mu_mod(&big(0), &ctx(1000)), BigUint::zero());
        assert_eq!(mu_mod(&big(1), &ctx(1000)), BigUint::zero());
        assert_eq!(mu_mod(&big(-1), &ctx(1000)), BigUint::zero());
        assert_eq!(mu_mod(&big(2), &ctx(1_000_000_000)), BigUint::from(34u32));
    }

    #[test]
    fn lambda_smallest_case_and_bound() {
        assert_eq!(
            lambda_mod(&big(2), &ctx(1_000_000_000)).unwrap(),
            BigUint::from(2u32)
        );
        assert!(matches!(
            lambda_mod_bounded(&big(50), &ctx(7), 10),
            Err(PadicError::TooLarge { .. })
        ));
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(7, 34).unwrap(), 3);
        assert_eq!(epsilon(4, 6).unwrap(), 1);
        assert_eq!(epsilon(-2, 7).unwrap(), 3);
        assert!(epsilon(1, 7).is_err());
    }

    #[test]
    fn residue_valuation_never_overclaims() {
        assert_eq!(
            residue_valuation(&BigUint::zero(), 3, 5),
            ValuationBound::AtLeast(5)
        );
        assert_eq!(
            residue_valuation(&BigUint::from(54u32), 3, 5),
            ValuationBound::Exact(3)
        );
        assert_eq!(
            residue_valuation(&BigUint::from(81u32), 3, 4),
            ValuationBound::AtLeast(4)
        );
    }

    #[test]
    fn mod_inverse_works() {
        assert_eq!(
            mod_inverse(&big(2), &BigUint::from(25u32)),
            Some(BigUint::from(13u32))
        );
        assert_eq!(
            mod_inverse(&big(-7), &BigUint::from(81u32)).map(|x| (x * 7u32) % 81u32),
            Some(BigUint::from(80u32))
        );
        assert_eq!(mod_inverse(&big(3), &BigUint::from(81u32)), None);
    }
}
