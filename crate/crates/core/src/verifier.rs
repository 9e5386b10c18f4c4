//! Prediction against measurement: builds the Sylow subgroup from its
//! presentation, measures it as a permutation group and checks the standard
//! exponent relations inside it.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::{
    macdonald_presentation, sylow_presentation, todd_coxeter, EnumerationLimits, FpGroupError,
    Presentation,
};
use crate::padic::{delta_mod, mod_inverse, mu_mod, ModulusContext};
use crate::permgroup::{element_order, PermGroup, Permutation};
use crate::pquotient::{p_quotient, PQuotientError, PQuotientLimits};
use crate::predictor::{local_invariants, predict, prime_support, GroupParams, StructureReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("group of order {0} is not of order 16")]
    NotOrder16(BigUint),
}

/// How the concrete group is obtained from its presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    /// Consistent power-commutator presentation of the largest p-quotient,
    /// then its regular representation.
    #[default]
    PQuotient,
    /// Coset enumeration over the trivial subgroup.
    ToddCoxeter,
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pq" | "p-quotient" | "pquotient" => Ok(Engine::PQuotient),
            "tc" | "todd-coxeter" | "coset" => Ok(Engine::ToddCoxeter),
            other => Err(format!("unknown engine '{other}' (expected pq or tc)")),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::PQuotient => "pq",
            Engine::ToddCoxeter => "tc",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyOptions {
    /// `max_cosets` caps the group order for either engine.
    pub limits: EnumerationLimits,
    pub engine: Engine,
}

impl VerifyOptions {
    pub fn with_max_cosets(max_cosets: usize) -> Self {
        VerifyOptions {
            limits: EnumerationLimits::with_max_cosets(max_cosets),
            engine: Engine::default(),
        }
    }
}

/// Measured structure of a concrete Sylow subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasuredStructure {
    pub order: BigUint,
    pub class: u32,
    pub nilpotent: bool,
    pub ord_a: BigUint,
    pub ord_b: BigUint,
    pub ord_c: BigUint,
    pub abelianization_order: BigUint,
}

/// A concrete group: the regular action of `a`, `b` and `c = [a, b]`.
#[derive(Debug, Clone)]
pub struct ConcreteGroup {
    pub group: PermGroup,
    pub a: Permutation,
    pub b: Permutation,
    pub c: Permutation,
    /// Points of the action (cosets for enumeration).
    pub points: usize,
}

impl ConcreteGroup {
    pub fn from_generators(a: Permutation, b: Permutation) -> Self {
        let points = a.degree();
        let c = Permutation::commutator(&a, &b);
        let group = PermGroup::new(points, vec![a.clone(), b.clone()]).expect("equal degrees");
        ConcreteGroup {
            group,
            a,
            b,
            c,
            points,
        }
    }

    pub fn measure(&self) -> MeasuredStructure {
        let lcs = self.group.lower_central_series();
        let order = lcs.orders[0].clone();
        let derived = lcs.orders.get(1).cloned().unwrap_or_else(BigUint::one);
        MeasuredStructure {
            abelianization_order: &order / &derived,
            order,
            class: lcs.class as u32,
            nilpotent: lcs.nilpotent,
            ord_a: element_order(&self.a),
            ord_b: element_order(&self.b),
            ord_c: element_order(&self.c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    Resource(String),
    Other(String),
}

/// Builds the Sylow `p`-subgroup of `G(α, β)` as a permutation group.
///
/// With `m, n > 0` the Sylow presentation is used; otherwise (cyclic Sylow
/// subgroup) the p-quotient of the full presentation.
pub fn build_group(
    alpha: i64,
    beta: i64,
    p: u64,
    options: &VerifyOptions,
) -> Result<ConcreteGroup, BuildError> {
    let pres = match sylow_presentation(alpha, beta, p) {
        Ok(pres) => pres,
        Err(FpGroupError::Domain(_)) => {
            macdonald_presentation(alpha, beta).map_err(|e| BuildError::Other(e.to_string()))?
        }
        Err(e) => return Err(BuildError::Other(e.to_string())),
    };
    let cyclic = pres.relators.len() == 2;
    match (options.engine, cyclic) {
        (Engine::ToddCoxeter, false) => build_by_enumeration(&pres, &options.limits),
        _ => build_by_p_quotient(&pres, p, options.limits.max_cosets),
    }
}

fn build_by_p_quotient(
    pres: &Presentation,
    p: u64,
    max_points: usize,
) -> Result<ConcreteGroup, BuildError> {
    let limits = PQuotientLimits {
        max_points,
        ..Default::default()
    };
    let q = p_quotient(pres, p, &limits).map_err(|e| match e {
        PQuotientError::ResourceExceeded { .. } => BuildError::Resource(e.to_string()),
        other => BuildError::Other(other.to_string()),
    })?;
    let gens = q.group.regular_generators();
    let degree = (p as usize).pow(q.order_exponent() as u32);
    let perm = |i: usize| {
        let images = if gens.is_empty() {
            vec![0u32; degree]
        } else {
            q.group.regular_image(&gens, &q.images[i])
        };
        Permutation::from_images(images).map_err(|e| BuildError::Other(e.to_string()))
    };
    Ok(ConcreteGroup::from_generators(perm(0)?, perm(1)?))
}

fn build_by_enumeration(
    pres: &Presentation,
    limits: &EnumerationLimits,
) -> Result<ConcreteGroup, BuildError> {
    let table = todd_coxeter(pres, &[], limits).map_err(|e| match e {
        FpGroupError::ResourceExceeded { .. } => BuildError::Resource(e.to_string()),
        other => BuildError::Other(other.to_string()),
    })?;
    let mut perms = table
        .to_permutations()
        .map_err(|e| BuildError::Other(e.to_string()))?
        .into_iter()
        .map(|images| {
            Permutation::from_images(images).map_err(|e| BuildError::Other(e.to_string()))
        });
    let a = perms.next().expect("two generators")?;
    let b = perms.next().expect("two generators")?;
    Ok(ConcreteGroup::from_generators(a, b))
}

/// `x^E` with `E` given as a residue modulo `o(x)` by `exponent`.
fn power_mod_order<F>(x: &Permutation, exponent: F) -> Permutation
where
    F: Fn(&ModulusContext) -> BigUint,
{
    let o = element_order(x);
    if o.is_one() {
        return x.clone();
    }
    let ctx = ModulusContext::new(o).expect("order at least 2");
    x.pow(&BigInt::from(exponent(&ctx)))
}

fn reduce(x: BigInt, ctx: &ModulusContext) -> BigUint {
    ctx.reduce(&x)
}

/// `base^E mod` the context modulus, inverting `base` for negative `E`.
fn unit_pow(base: i64, e: &BigInt, ctx: &ModulusContext) -> BigUint {
    let m = ctx.modulus();
    let b = if e.sign() == num_bigint::Sign::Minus {
        mod_inverse(&BigInt::from(base), m).expect("unit modulo a p-power")
    } else {
        reduce(BigInt::from(base), ctx)
    };
    let e = e.magnitude();
    b.modpow(e, m)
}

/// Outcome of one relation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationResult {
    pub id: String,
    pub holds: bool,
}

fn result(id: &str, holds: bool) -> RelationResult {
    RelationResult {
        id: id.to_string(),
        holds,
    }
}

/// Evaluates the exponent relations `R1`–`R6` in the concrete group.
/// `R1`–`R5` need `α, β > 1` and are omitted otherwise.
pub fn relation_checks(g: &ConcreteGroup, alpha: i64, beta: i64) -> Vec<RelationResult> {
    let mut out = Vec::new();
    let (a, b, c) = (&g.a, &g.b, &g.c);
    if alpha > 1 && beta > 1 {
        let (al, be) = (BigInt::from(alpha), BigInt::from(beta));
        let eps = BigInt::from((alpha - 1).gcd(&(beta - 1)));
        let delta = |x: &BigInt, ctx: &ModulusContext| delta_mod(x, ctx).expect("argument above 1");

        // R1: A^{δ_α(α−1)} = B^{δ_β(β−1)}, central
        let lhs = power_mod_order(a, |ctx| {
            reduce(BigInt::from(delta(&al, ctx)) * (alpha - 1), ctx)
        });
        let rhs = power_mod_order(b, |ctx| {
            reduce(BigInt::from(delta(&be, ctx)) * (beta - 1), ctx)
        });
        out.push(result(
            "R1",
            lhs == rhs && lhs.commutes_with(a) && lhs.commutes_with(b),
        ));

        // R2: A^{ε(α−1)μ_α} = 1 = B^{ε(β−1)μ_β}
        let ra = power_mod_order(a, |ctx| {
            reduce(&eps * (alpha - 1) * BigInt::from(mu_mod(&al, ctx)), ctx)
        });
        let rb = power_mod_order(b, |ctx| {
            reduce(&eps * (beta - 1) * BigInt::from(mu_mod(&be, ctx)), ctx)
        });
        out.push(result("R2", ra.is_identity() && rb.is_identity()));

        // R3: A^{(α−1)μ_α} = B^{(β−1)μ_β}
        let ra = power_mod_order(a, |ctx| {
            reduce(
                BigInt::from(alpha - 1) * BigInt::from(mu_mod(&al, ctx)),
                ctx,
            )
        });
        let rb = power_mod_order(b, |ctx| {
            reduce(BigInt::from(beta - 1) * BigInt::from(mu_mod(&be, ctx)), ctx)
        });
        out.push(result("R3", ra == rb));

        // R4: A^{α^{(α−β)(β−1)}−1} = 1 = B^{β^{(β−α)(α−1)}−1}
        let ea = BigInt::from(alpha - beta) * (beta - 1);
        let eb = BigInt::from(beta - alpha) * (alpha - 1);
        let ra = power_mod_order(a, |ctx| {
            reduce(BigInt::from(unit_pow(alpha, &ea, ctx)) - 1, ctx)
        });
        let rb = power_mod_order(b, |ctx| {
            reduce(BigInt::from(unit_pow(beta, &eb, ctx)) - 1, ctx)
        });
        out.push(result("R4", ra.is_identity() && rb.is_identity()));

        // R5: b^{β₀^{β+1}δ_β} a^{δ_α} = c^{α−β}, β₀ = β⁻¹ mod o(b)
        let bp = power_mod_order(b, |ctx| {
            let b0 = unit_pow(beta, &BigInt::from(-1), ctx);
            let e = b0.modpow(&BigUint::from((beta + 1) as u64), ctx.modulus());
            reduce(BigInt::from(e) * BigInt::from(delta(&be, ctx)), ctx)
        });
        let ap = power_mod_order(a, |ctx| delta(&al, ctx));
        let cp = power_mod_order(c, |ctx| reduce(BigInt::from(alpha - beta), ctx));
        out.push(result("R5", bp.compose(&ap) == cp));
    }

    // R6: o(a)o(b)o(c) >= |G|, o(c) | gcd(o(a), o(b))
    let (oa, ob, oc) = (element_order(a), element_order(b), element_order(c));
    let product_bound = &oa * &ob * &oc >= g.group.order();
    out.push(result(
        "R6",
        product_bound && oa.gcd(&ob).is_multiple_of(&oc),
    ));
    out
}

/// True iff `g` is the generalized quaternion group of order 16: non-abelian,
/// a unique involution and an element of order 8.
pub fn q16_fingerprint(g: &PermGroup) -> Result<bool, VerifyError> {
    let order = g.order();
    if order != BigUint::from(16u32) {
        return Err(VerifyError::NotOrder16(order));
    }
    let elements = g.elements(16).expect("order 16");
    let orders: Vec<BigUint> = elements.iter().map(element_order).collect();
    let involutions = orders.iter().filter(|o| **o == BigUint::from(2u32)).count();
    let has_eight = orders.iter().any(|o| *o == BigUint::from(8u32));
    Ok(!g.is_abelian() && involutions == 1 && has_eight)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Match,
    Mismatch,
    SkippedResource,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Match => "MATCH",
            Status::Mismatch => "MISMATCH",
            Status::SkippedResource => "SKIPPED_RESOURCE",
            Status::Error => "ERROR",
        })
    }
}

/// Serialized predicted structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicted {
    pub e: u32,
    pub f: u32,
    #[serde(rename = "vA")]
    pub v_a: u32,
    #[serde(rename = "vB")]
    pub v_b: u32,
    #[serde(rename = "vC")]
    pub v_c: u32,
    pub case: String,
}

impl From<&StructureReport> for Predicted {
    fn from(r: &StructureReport) -> Self {
        Predicted {
            e: r.e,
            f: r.f,
            v_a: r.v_a,
            v_b: r.v_b,
            v_c: r.v_c,
            case: r.case.to_string(),
        }
    }
}

/// Serialized measurement; integers as decimal strings so that no order
/// overflows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measured {
    pub order: String,
    pub class: u32,
    #[serde(rename = "ordA")]
    pub ord_a: String,
    #[serde(rename = "ordB")]
    pub ord_b: String,
    #[serde(rename = "ordC")]
    pub ord_c: String,
    pub abelianization: String,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub nilpotent: bool,
}

fn yes() -> bool {
    true
}

fn is_true(x: &bool) -> bool {
    *x
}

impl From<&MeasuredStructure> for Measured {
    fn from(m: &MeasuredStructure) -> Self {
        Measured {
            order: m.order.to_string(),
            class: m.class,
            ord_a: m.ord_a.to_string(),
            ord_b: m.ord_b.to_string(),
            ord_c: m.ord_c.to_string(),
            abelianization: m.abelianization_order.to_string(),
            nilpotent: m.nilpotent,
        }
    }
}

/// One line of verification output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub alpha: i64,
    pub beta: i64,
    pub prime: Option<u64>,
    pub predicted: Option<Predicted>,
    pub measured: Option<Measured>,
    pub relations: Vec<RelationResult>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q16: Option<bool>,
    pub cosets: u64,
    pub millis: u64,
}

impl VerificationReport {
    fn error(alpha: i64, beta: i64, prime: Option<u64>, message: String) -> Self {
        VerificationReport {
            alpha,
            beta,
            prime,
            predicted: None,
            measured: None,
            relations: Vec::new(),
            status: Status::Error,
            message: Some(message),
            q16: None,
            cosets: 0,
            millis: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    /// The same report with the wall time zeroed.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            millis: 0,
            ..self.clone()
        }
    }
}

/// Whether measurement and prediction agree on order exponent, class and the
/// three generator orders.
pub fn agrees(predicted: &StructureReport, measured: &MeasuredStructure) -> bool {
    measured.order == predicted.order()
        && measured.class == predicted.f
        && measured.ord_a == predicted.order_a()
        && measured.ord_b == predicted.order_b()
        && measured.ord_c == predicted.order_c()
}

/// Predicts and measures the Sylow `p`-subgroup of `G(α, β)`.
pub fn verify(alpha: i64, beta: i64, p: u64, options: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let mut report = verify_inner(alpha, beta, p, options);
    report.millis = start.elapsed().as_millis() as u64;
    report
}

fn verify_inner(alpha: i64, beta: i64, p: u64, options: &VerifyOptions) -> VerificationReport {
    let prime = Some(p);
    let params = match GroupParams::new(alpha, beta) {
        Ok(x) => x,
        Err(e) => return VerificationReport::error(alpha, beta, prime, e.to_string()),
    };
    let predicted = match local_invariants(&params, p).and_then(|_| predict(&params, p)) {
        Ok(x) => x,
        Err(e) => return VerificationReport::error(alpha, beta, prime, e.to_string()),
    };
    let mut report = VerificationReport {
        alpha,
        beta,
        prime,
        predicted: Some(Predicted::from(&predicted)),
        measured: None,
        relations: Vec::new(),
        status: Status::Error,
        message: None,
        q16: None,
        cosets: 0,
        millis: 0,
    };
    let group = match build_group(alpha, beta, p, options) {
        Ok(g) => g,
        Err(BuildError::Resource(msg)) => {
            report.status = Status::SkippedResource;
            report.message = Some(msg);
            return report;
        }
        Err(BuildError::Other(msg)) => {
            report.message = Some(msg);
            return report;
        }
    };
    report.cosets = group.points as u64;
    let measured = group.measure();
    report.relations = relation_checks(&group, alpha, beta);
    if measured.order == BigUint::from(16u32) {
        report.q16 = q16_fingerprint(&group.group).ok();
    }
    let relations_hold = report.relations.iter().all(|r| r.holds);
    report.status = if agrees(&predicted, &measured) && relations_hold {
        Status::Match
    } else {
        Status::Mismatch
    };
    report.measured = Some(Measured::from(&measured));
    report
}

/// One corpus line: a pair, optionally a prime (all support primes when
/// absent) and a per-entry cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub alpha: i64,
    pub beta: i64,
    pub prime: Option<u64>,
    pub max_cosets: Option<usize>,
}

/// Verifies every entry, in input order, on up to `jobs` threads.
pub fn run_corpus(
    entries: &[CorpusEntry],
    options: &VerifyOptions,
    jobs: usize,
) -> Vec<VerificationReport> {
    let tasks: Vec<Result<(i64, i64, u64, VerifyOptions), VerificationReport>> = entries
        .iter()
        .flat_map(|entry| expand(entry, options))
        .collect();
    let run = |t: &Result<(i64, i64, u64, VerifyOptions), VerificationReport>| match t {
        Ok((alpha, beta, p, opts)) => verify(*alpha, *beta, *p, opts),
        Err(report) => report.clone(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| tasks.par_iter().map(run).collect())
}

fn expand(
    entry: &CorpusEntry,
    options: &VerifyOptions,
) -> Vec<Result<(i64, i64, u64, VerifyOptions), VerificationReport>> {
    let mut opts = options.clone();
    if let Some(cap) = entry.max_cosets {
        opts.limits.max_cosets = cap.max(1);
    }
    let (alpha, beta) = (entry.alpha, entry.beta);
    let params = match GroupParams::new(alpha, beta) {
        Ok(x) => x,
        Err(e) => {
            return vec![Err(VerificationReport::error(
                alpha,
                beta,
                entry.prime,
                e.to_string(),
            ))]
        }
    };
    let primes = match entry.prime {
        Some(p) => vec![p],
        None => match prime_support(&params) {
            Ok(ps) => ps,
            Err(e) => {
                return vec![Err(VerificationReport::error(
                    alpha,
                    beta,
                    None,
                    e.to_string(),
                ))]
            }
        },
    };
    primes
        .into_iter()
        .map(|p| Ok((alpha, beta, p, opts.clone())))
        .collect()
}

/// Counts of each status.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CorpusSummary {
    pub matched: usize,
    pub mismatched: usize,
    pub skipped: usize,
    pub errors: usize,
}

impl CorpusSummary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut s = CorpusSummary::default();
        for r in reports {
            match r.status {
                Status::Match => s.matched += 1,
                Status::Mismatch => s.mismatched += 1,
                Status::SkippedResource => s.skipped += 1,
                Status::Error => s.errors += 1,
            }
        }
        s
    }
}

impl fmt::Display for CorpusSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} match, {} mismatch, {} skipped, {} error",
            self.matched, self.mismatched, self.skipped, self.errors
        )
    }
}

/// `p`-adic order exponent of a measured order, when it is a power of `p`.
pub fn order_exponent(order: &BigUint, p: u64) -> Option<u32> {
    let mut x = order.clone();
    let mut e = 0;
    let pb = BigUint::from(p);
    while !x.is_one() {
        if x.is_zero() || !(&x % &pb).is_zero() {
            return None;
        }
        x /= &pb;
        e += 1;
    }
    Some(e)
}

/// Parses a decimal string produced by the report serializer.
pub fn parse_count(s: &str) -> Option<u64> {
    s.parse::<BigUint>().ok()?.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(alpha: i64, beta: i64, p: u64) -> VerificationReport {
        verify(alpha, beta, p, &VerifyOptions::default())
    }

    #[test]
    fn quaternion() {
        let r = run(3, 3, 2);
        assert_eq!(r.status, Status::Match, "{r:?}");
        assert_eq!(r.q16, Some(true));
        let m = r.measured.unwrap();
        assert_eq!((m.order.as_str(), m.class), ("16", 3));
    }

    #[test]
    fn cyclic_is_measured() {
        let r = run(4, 6, 5);
        assert_eq!(r.status, Status::Match, "{r:?}");
        assert_eq!(r.measured.unwrap().order, "5");
        let r = run(7, 34, 11);
        assert_eq!(r.status, Status::Match, "{r:?}");
    }

    #[test]
    fn both_engines() {
        let tc = VerifyOptions {
            engine: Engine::ToddCoxeter,
            ..Default::default()
        };
        for (a, b, p) in [(3, 3, 2), (3, 5, 2), (3, -3, 2), (-1, 3, 2)] {
            let x = verify(a, b, p, &tc);
            let y = run(a, b, p);
            assert_eq!(x.status, Status::Match, "{x:?}");
            assert_eq!(x.measured, y.measured);
            assert_eq!(x.relations, y.relations);
        }
    }

    #[test]
    fn resource_and_errors() {
        let r = verify(9, 25, 2, &VerifyOptions::with_max_cosets(100));
        assert_eq!(r.status, Status::SkippedResource);
        assert_eq!(run(1, 5, 2).status, Status::Error);
        assert_eq!(run(7, 34, 5).status, Status::Error);
    }

    #[test]
    fn fingerprint_rejects() {
        let c16 = Permutation::from_images((0..16).map(|i| (i + 1) % 16).collect()).unwrap();
        let g = PermGroup::new(16, vec![c16]).unwrap();
        assert_eq!(q16_fingerprint(&g), Ok(false));
        // D8 x C2 on 6 points
        let r = Permutation::from_cycles(6, &[&[0, 1, 2, 3]]).unwrap();
        let s = Permutation::from_cycles(6, &[&[0, 2]]).unwrap();
        let t = Permutation::from_cycles(6, &[&[4, 5]]).unwrap();
        let g = PermGroup::new(6, vec![r, s, t]).unwrap();
        assert_eq!(q16_fingerprint(&g), Ok(false));
        let g =
            PermGroup::new(3, vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()]).unwrap();
        assert!(q16_fingerprint(&g).is_err());
    }

    #[test]
    fn corpus_order_and_json() {
        let entries = vec![
            CorpusEntry {
                alpha: 4,
                beta: 6,
                prime: None,
                max_cosets: None,
            },
            CorpusEntry {
                alpha: 1,
                beta: 6,
                prime: None,
                max_cosets: None,
            },
            CorpusEntry {
                alpha: 3,
                beta: 3,
                prime: Some(2),
                max_cosets: None,
            },
        ];
        let reports = run_corpus(&entries, &VerifyOptions::default(), 2);
        let keys: Vec<_> = reports
            .iter()
            .map(|r| (r.alpha, r.prime, r.status))
            .collect();
        assert_eq!(
            keys,
            vec![
                (4, Some(3), Status::Match),
                (4, Some(5), Status::Match),
                (1, None, Status::Error),
                (3, Some(2), Status::Match),
            ]
        );
        for r in &reports {
            let json = r.to_json();
            let back: VerificationReport = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_json(), json);
        }
        assert!(run_corpus(&[], &VerifyOptions::default(), 1).is_empty());
    }
}
