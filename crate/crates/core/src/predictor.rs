//! Closed-form structure of the Sylow subgroups of `G(α, β)`.
//!
//! For each prime `p` dividing `(α−1)(β−1)` the local invariants `m`, `n`,
//! `ℓ`, `u`, `v`, `k` (and `s` where needed) select one case of the
//! classification, which fixes the order exponent `e`, the class `f`, and the
//! orders of `A`, `B` and `C = [A, B]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use thiserror::Error;

use crate::padic::{is_prime, split, valuation, PadicError, Valuation};

/// Trial-division bound for the prime support.
pub const FACTOR_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PredictError {
    #[error("alpha and beta must differ from 1 (got alpha = {alpha}, beta = {beta})")]
    Domain { alpha: i64, beta: i64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{p} does not divide (alpha - 1)(beta - 1) = {product}")]
    NotInSupport { p: u64, product: i128 },
    #[error("cannot factor cofactor {cofactor}: no prime factor up to {bound}, and it exceeds {bound}^2")]
    Factorization { cofactor: u128, bound: u64 },
    #[error("no case applies to {0}")]
    Unreachable(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// The pair `(α, β)` with `ε = gcd(α−1, β−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupParams {
    pub alpha: i64,
    pub beta: i64,
    pub epsilon: u64,
}

impl GroupParams {
    pub fn new(alpha: i64, beta: i64) -> Result<Self, PredictError> {
        let epsilon =
            crate::padic::epsilon(alpha, beta).map_err(|_| PredictError::Domain { alpha, beta })?;
        Ok(GroupParams {
            alpha,
            beta,
            epsilon,
        })
    }

    /// `(α−1)(β−1)`.
    pub fn product(&self) -> i128 {
        (self.alpha as i128 - 1) * (self.beta as i128 - 1)
    }
}

/// Classification case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    Cyclic,
    T1,
    T2,
    T3,
    T4,
    T5a,
    T5b,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
    T14,
    T15,
    T16,
    T17a,
    T17b,
    T18,
    T19,
}

impl CaseId {
    pub const ALL: [CaseId; 22] = [
        CaseId::Cyclic,
        CaseId::T1,
        CaseId::T2,
        CaseId::T3,
        CaseId::T4,
        CaseId::T5a,
        CaseId::T5b,
        CaseId::T6,
        CaseId::T7,
        CaseId::T8,
        CaseId::T9,
        CaseId::T10,
        CaseId::T11,
        CaseId::T12,
        CaseId::T13,
        CaseId::T14,
        CaseId::T15,
        CaseId::T16,
        CaseId::T17a,
        CaseId::T17b,
        CaseId::T18,
        CaseId::T19,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Cyclic => "CYCLIC",
            CaseId::T1 => "T1",
            CaseId::T2 => "T2",
            CaseId::T3 => "T3",
            CaseId::T4 => "T4",
            CaseId::T5a => "T5a",
            CaseId::T5b => "T5b",
            CaseId::T6 => "T6",
            CaseId::T7 => "T7",
            CaseId::T8 => "T8",
            CaseId::T9 => "T9",
            CaseId::T10 => "T10",
            CaseId::T11 => "T11",
            CaseId::T12 => "T12",
            CaseId::T13 => "T13",
            CaseId::T14 => "T14",
            CaseId::T15 => "T15",
            CaseId::T16 => "T16",
            CaseId::T17a => "T17a",
            CaseId::T17b => "T17b",
            CaseId::T18 => "T18",
            CaseId::T19 => "T19",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown case '{s}'"))
    }
}

/// Per-prime data of the normalized pair `(α′, β′)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalInvariants {
    pub p: u64,
    pub m: u32,
    pub n: u32,
    pub u: BigInt,
    pub v: BigInt,
    pub ell: Valuation,
    /// Unit part of `α′ − β′`; `None` when `α = β`.
    pub k: Option<BigInt>,
    /// Secondary valuation for the T5 and T17 boundaries; `Infinite` when
    /// the defining quantity vanishes.
    pub s: Option<Valuation>,
    /// Whether `(α, β)` was exchanged to normalize.
    pub swapped: bool,
    /// The normalized pair.
    pub alpha: i64,
    pub beta: i64,
}

/// Predicted structure of one Sylow subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub p: u64,
    /// `|G_p| = p^e`.
    pub e: u32,
    /// Nilpotency class.
    pub f: u32,
    /// `o(A) = p^{v_a}` for the original generator `A`.
    pub v_a: u32,
    pub v_b: u32,
    pub v_c: u32,
    pub case: CaseId,
}

impl StructureReport {
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.e)
    }

    pub fn order_a(&self) -> BigUint {
        BigUint::from(self.p).pow(self.v_a)
    }

    pub fn order_b(&self) -> BigUint {
        BigUint::from(self.p).pow(self.v_b)
    }

    pub fn order_c(&self) -> BigUint {
        BigUint::from(self.p).pow(self.v_c)
    }
}

/// Distinct prime factors of `n`, or a factorization error.
fn factor(mut n: u128, primes: &mut Vec<u64>) -> Result<(), PredictError> {
    let mut d = 2u64;
    while d <= FACTOR_BOUND && (d as u128) * (d as u128) <= n {
        if n.is_multiple_of(d as u128) {
            primes.push(d);
            while n.is_multiple_of(d as u128) {
                n /= d as u128;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let bound = FACTOR_BOUND as u128;
        if n >= bound * bound && (d as u128) * (d as u128) <= n {
            return Err(PredictError::Factorization {
                cofactor: n,
                bound: FACTOR_BOUND,
            });
        }
        primes.push(n as u64);
    }
    Ok(())
}

/// Sorted distinct primes dividing `(α−1)(β−1)`.
pub fn prime_support(params: &GroupParams) -> Result<Vec<u64>, PredictError> {
    let mut primes = Vec::new();
    factor((params.alpha as i128 - 1).unsigned_abs(), &mut primes)?;
    factor((params.beta as i128 - 1).unsigned_abs(), &mut primes)?;
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

fn finite(v: Valuation) -> u32 {
    v.finite().expect("nonzero argument")
}

/// Whether `x ≡ 7 (mod 9)`.
fn is_seven_mod_nine(x: i64) -> bool {
    x.rem_euclid(9) == 7
}

/// Local invariants at `p`, normalized so that `m ≥ n`, except for `p = 3`
/// with exactly one of `α, β ≡ 7 (mod 9)`, where that one becomes `α′`.
pub fn local_invariants(params: &GroupParams, p: u64) -> Result<LocalInvariants, PredictError> {
    if !is_prime(p) {
        return Err(PredictError::NotPrime(p));
    }
    let (alpha, beta) = (params.alpha, params.beta);
    let m_raw = finite(valuation(&BigInt::from(alpha as i128 - 1), p));
    let n_raw = finite(valuation(&BigInt::from(beta as i128 - 1), p));
    if m_raw == 0 && n_raw == 0 {
        return Err(PredictError::NotInSupport {
            p,
            product: params.product(),
        });
    }
    let swapped = if p == 3
        && m_raw > 0
        && n_raw > 0
        && is_seven_mod_nine(alpha) != is_seven_mod_nine(beta)
    {
        is_seven_mod_nine(beta)
    } else {
        n_raw > m_raw
    };
    let (a, b) = if swapped {
        (beta, alpha)
    } else {
        (alpha, beta)
    };
    let sa = split(&BigInt::from(a as i128 - 1), p)?;
    let sb = split(&BigInt::from(b as i128 - 1), p)?;
    let (ell, k) = if a == b {
        (Valuation::Infinite, None)
    } else {
        let d = split(&BigInt::from(a as i128 - b as i128), p)?;
        (Valuation::Finite(d.valuation), Some(d.unit))
    };
    let mut inv = LocalInvariants {
        p,
        m: sa.valuation,
        n: sb.valuation,
        u: sa.unit,
        v: sb.unit,
        ell,
        k,
        s: None,
        swapped,
        alpha: a,
        beta: b,
    };
    inv.s = secondary_valuation(&inv);
    Ok(inv)
}

/// `s` for the T5 boundary (`v_p(2k² − u³)`, `2ℓ = 3m`) and the T17
/// boundary (`v_2(u³ − k²)`, `2ℓ + 2 = 3m + 1`).
fn secondary_valuation(inv: &LocalInvariants) -> Option<Valuation> {
    let (m, n) = (inv.m, inv.n);
    let ell = inv.ell.finite()?;
    let k = inv.k.as_ref()?;
    if m != n || m == 0 {
        return None;
    }
    let u3 = &inv.u * &inv.u * &inv.u;
    let k2 = k * k;
    let general =
        inv.p > 3 || (inv.p == 3 && !is_seven_mod_nine(inv.alpha) && !is_seven_mod_nine(inv.beta));
    if general && 2 * ell == 3 * m {
        Some(valuation(&(BigInt::from(2) * k2 - u3), inv.p))
    } else if inv.p == 2 && 2 * ell + 2 == 3 * m + 1 && ell + 3 <= 2 * m {
        Some(valuation(&(u3 - k2), 2))
    } else {
        None
    }
}

fn ell_at_least(ell: Valuation, x: u32) -> bool {
    ell >= x
}

/// The unique case for `inv`.
pub fn classify(inv: &LocalInvariants) -> Result<CaseId, PredictError> {
    let (p, m, n, ell) = (inv.p, inv.m, inv.n, inv.ell);
    let fail = || PredictError::Unreachable(format!("{inv:?}"));
    if m.min(n) == 0 {
        return Ok(CaseId::Cyclic);
    }
    if p == 3 && (is_seven_mod_nine(inv.alpha) || is_seven_mod_nine(inv.beta)) {
        if is_seven_mod_nine(inv.alpha) && is_seven_mod_nine(inv.beta) {
            return if ell_at_least(ell, 3) {
                Ok(CaseId::T6)
            } else if ell == Valuation::Finite(2) {
                Ok(CaseId::T7)
            } else {
                Err(fail())
            };
        }
        // normalized so that α′ ≡ 7 (mod 9)
        return match inv.beta.rem_euclid(9) {
            4 => Ok(CaseId::T8),
            1 => Ok(CaseId::T9),
            _ => Err(fail()),
        };
    }
    if p == 2 {
        if n == 1 {
            return Ok(match m {
                1 => CaseId::T10,
                2 => CaseId::T12,
                _ => CaseId::T11,
            });
        }
        if m > n {
            return if ell == Valuation::Finite(n) {
                Ok(CaseId::T13)
            } else {
                Err(fail())
            };
        }
        if ell_at_least(ell, 2 * m) {
            return Ok(CaseId::T14);
        }
        let l = ell.finite().ok_or_else(fail)?;
        if l == 2 * m - 1 {
            return Ok(CaseId::T15);
        }
        if l == 2 * m - 2 {
            return Ok(CaseId::T16);
        }
        if l <= m {
            return Err(fail());
        }
        return if 2 * l + 2 == 3 * m + 1 {
            let s = inv.s.ok_or_else(fail)?;
            // s < (m − 3)/2  ⇔  2s + 3 < m
            Ok(match s {
                Valuation::Finite(s) if 2 * s + 3 < m => CaseId::T17a,
                _ => CaseId::T17b,
            })
        } else if 2 * l + 2 > 3 * m + 1 {
            Ok(CaseId::T18)
        } else {
            Ok(CaseId::T19)
        };
    }
    if ell == Valuation::Finite(n) {
        return Ok(CaseId::T1);
    }
    if m != n {
        return Err(fail());
    }
    if ell_at_least(ell, 2 * m) {
        return Ok(CaseId::T2);
    }
    let l = ell.finite().ok_or_else(fail)?;
    if l <= m {
        return Err(fail());
    }
    if 2 * l < 3 * m {
        Ok(CaseId::T3)
    } else if 2 * l > 3 * m {
        Ok(CaseId::T4)
    } else {
        let s = inv.s.ok_or_else(fail)?;
        // s < m/2  ⇔  2s < m
        Ok(match s {
            Valuation::Finite(s) if 2 * s < m => CaseId::T5a,
            _ => CaseId::T5b,
        })
    }
}

/// Predicted structure of `G_p` for `p` in the prime support.
pub fn predict(params: &GroupParams, p: u64) -> Result<StructureReport, PredictError> {
    let inv = local_invariants(params, p)?;
    let case = classify(&inv)?;
    let (m, n) = (inv.m, inv.n);
    let ell = inv.ell.finite();
    let l = || ell.expect("finite ell in this case");
    let s = || match inv.s {
        Some(Valuation::Finite(s)) => s,
        _ => unreachable!("finite s in this case"),
    };
    // (e, f, o(a), o(b), o(c)) exponents for the normalized generators
    let (e, f, va, vb, vc) = match case {
        CaseId::Cyclic => {
            let e = m.max(n);
            (e, u32::from(e > 0), m, n, 0)
        }
        CaseId::T1 => (4 * n + m, 3, m + n, 2 * n, n),
        CaseId::T2 => (7 * m, 5, 3 * m, 3 * m, 2 * m),
        CaseId::T3 => (2 * m + 3 * l(), 5, m + l(), m + l(), 2 * l() - m),
        CaseId::T4 => (5 * m + l(), 5, m + l(), m + l(), 2 * m),
        CaseId::T5a => {
            let s = s();
            let f = if s == 0 { 5 } else { 6 };
            (s + 13 * m / 2, f, s + 5 * m / 2, s + 5 * m / 2, 2 * m + s)
        }
        CaseId::T5b => (7 * m, 6, 3 * m, 3 * m, 5 * m / 2),
        CaseId::T6 => (10, 7, 4, 4, 3),
        CaseId::T7 => (8, 5, 3, 3, 2),
        CaseId::T8 => (5, 3, 2, 2, 1),
        CaseId::T9 => (n + 4, 3, 2, n + 1, 1),
        CaseId::T10 => (4, 3, 2, 2, 2),
        CaseId::T11 => (m + 4, 3, m + 1, 2, 2),
        CaseId::T12 => (7, 4, 4, 2, 2),
        CaseId::T13 => (m + 4 * n, 3, m + n, 2 * n, n + 1),
        CaseId::T14 | CaseId::T15 => (7 * m - 3, 5, 3 * m - 1, 3 * m - 1, 2 * m),
        CaseId::T16 => (7 * m - 3, 5, 3 * m - 1, 3 * m - 1, 2 * m - 1),
        CaseId::T17a => {
            let s = s();
            let o = (5 * m + 2 * s).div_ceil(2);
            ((13 * m + 2 * s - 3) / 2, 6, o, o, 2 * m + s)
        }
        CaseId::T17b => (7 * m - 3, 6, 3 * m - 1, 3 * m - 1, (5 * m - 3) / 2),
        CaseId::T18 => (5 * m + l() - 1, 5, l() + m + 1, l() + m + 1, 2 * m),
        CaseId::T19 => (2 * m + 3 * l(), 5, l() + m, l() + m, 2 * l() - m + 1),
    };
    let (v_a, v_b) = if inv.swapped { (vb, va) } else { (va, vb) };
    Ok(StructureReport {
        p,
        e,
        f,
        v_a,
        v_b,
        v_c: vc,
        case,
    })
}

/// Reports for every support prime and the resulting `|G|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPrediction {
    pub reports: Vec<StructureReport>,
    pub order: BigUint,
}

pub fn predict_all(params: &GroupParams) -> Result<GroupPrediction, PredictError> {
    let reports = prime_support(params)?
        .into_iter()
        .map(|p| predict(params, p))
        .collect::<Result<Vec<_>, _>>()?;
    let order = reports
        .iter()
        .fold(BigUint::one(), |acc, r| acc * r.order());
    Ok(GroupPrediction { reports, order })
}

/// Structural bounds every report satisfies; returns the violated ones.
pub fn report_violations(report: &StructureReport, inv: &LocalInvariants) -> Vec<String> {
    let mut out = Vec::new();
    let (lo, hi) = (inv.m.min(inv.n), inv.m.max(inv.n));
    if report.v_c > report.v_a.min(report.v_b) {
        out.push(format!("vC = {} exceeds min(vA, vB)", report.v_c));
    }
    if report.e > report.v_a + report.v_b + report.v_c {
        out.push(format!("e = {} exceeds vA + vB + vC", report.e));
    }
    let bound = 9 * lo + hi + if report.p == 3 { 3 } else { 0 };
    if report.e > bound {
        out.push(format!("e = {} exceeds {bound}", report.e));
    }
    if report.f > 7 || (report.f == 7) != (report.case == CaseId::T6) {
        out.push(format!("class {} in case {}", report.f, report.case));
    }
    out
}

/// `Some(|G|)` when `G(α, β)` is cyclic (`ε = 1`), `None` otherwise.
pub fn is_cyclic(params: &GroupParams) -> Option<BigUint> {
    (params.epsilon == 1).then(|| {
        BigInt::from(params.product())
            .abs()
            .to_biguint()
            .expect("absolute value")
    })
}
