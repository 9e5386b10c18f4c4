//! Smith normal form over the integers and orders of finitely presented
//! abelian groups, plus the abelian seed groups used to bound `|G_p|` from
//! below at the two delicate boundaries (`2ℓ = 3m` and `2ℓ + 2 = 3m + 1`).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::padic::{is_prime, mod_inverse, valuation, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnfError {
    #[error("matrix of {rows}x{cols} needs {expected} entries, got {found}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
        found: usize,
    },
    #[error("inadmissible parameters: {0}")]
    Domain(String),
}

/// Integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, SnfError> {
        if entries.len() != rows * cols {
            return Err(SnfError::Shape {
                rows,
                cols,
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    /// From equal-length rows.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, SnfError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(SnfError::Shape {
                    rows: rows.len(),
                    cols,
                    expected: rows.len() * cols,
                    found: entries.len() + r.len(),
                });
            }
            entries.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: BigInt) {
        self.entries[r * self.cols + c] = x;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.entries.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.entries.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] -= q · row[src]`.
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let t = &self.entries[src * self.cols + c] * q;
            self.entries[dst * self.cols + c] -= t;
        }
    }

    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let t = &self.entries[r * self.cols + src] * q;
            self.entries[r * self.cols + dst] -= t;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Nonzero invariant factors `d₁ | d₂ | …`, all positive.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigUint> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut factors = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // pivot: nonzero entry of least absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let x = a.get(r, c);
                    if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < a.get(br, bc).abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                return finish(factors);
            };
            a.swap_rows(t, br);
            a.swap_cols(t, bc);
            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for r in t + 1..rows {
                let q = a.get(r, t).div_floor(&pivot);
                if !q.is_zero() {
                    a.sub_row(r, t, &q);
                }
                clean &= a.get(r, t).is_zero();
            }
            for c in t + 1..cols {
                let q = a.get(t, c).div_floor(&pivot);
                if !q.is_zero() {
                    a.sub_col(c, t, &q);
                }
                clean &= a.get(t, c).is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !a.get(r, c).is_multiple_of(&pivot));
            match offender {
                Some((r, _)) => {
                    a.sub_row(t, r, &BigInt::from(-1));
                }
                None => {
                    factors.push(pivot.abs().to_biguint().expect("absolute value"));
                    break;
                }
            }
        }
    }
    finish(factors)
}

fn finish(factors: Vec<BigUint>) -> Vec<BigUint> {
    debug_assert!(factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    factors
}

/// Order of an abelian group presented by relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbelianOrder {
    Finite(BigUint),
    Infinite,
}

impl AbelianOrder {
    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            AbelianOrder::Finite(n) => Some(n),
            AbelianOrder::Infinite => None,
        }
    }
}

impl fmt::Display for AbelianOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbelianOrder::Finite(n) => write!(f, "{n}"),
            AbelianOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// Order of `Z^rows` modulo the span of the columns of `relations`.
pub fn abelian_order(relations: &IntMatrix) -> AbelianOrder {
    let d = smith_normal_form(relations);
    if d.len() < relations.rows {
        AbelianOrder::Infinite
    } else {
        AbelianOrder::Finite(d.iter().fold(BigUint::one(), |acc, x| acc * x))
    }
}

/// Exponent-sum matrix of relators: one row per generator, one column per
/// relator.
pub fn exponent_sum_matrix(pres: &crate::fpgroup::Presentation) -> IntMatrix {
    let mut m = IntMatrix::zeros(pres.generator_count, pres.relators.len());
    for (c, r) in pres.relators.iter().enumerate() {
        for g in 0..pres.generator_count {
            m.set(g, c, BigInt::from(r.exponent_sum(g)));
        }
    }
    m
}

/// `p`-part of a positive integer.
pub fn p_part(x: &BigUint, p: u64) -> BigUint {
    match valuation(&BigInt::from(x.clone()), p) {
        Valuation::Finite(v) => BigUint::from(p).pow(v),
        Valuation::Infinite => BigUint::zero(),
    }
}

fn pow(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

fn is_unit(x: &BigInt, p: u64) -> bool {
    !x.is_zero() && !(x % BigInt::from(p)).is_zero()
}

/// Solves `2w ≡ t (mod p^m)` with `t = x²` for `p > 3` and
/// `t = x² − 2·3^{m−1}x` for `p = 3`; canonical residue.
pub fn solve_w(x: &BigInt, p: u64, m: u32) -> BigInt {
    let modulus = pow(p, m);
    let mut t = x * x;
    if p == 3 {
        t -= BigInt::from(2) * pow(3, m - 1) * x;
    }
    let half =
        mod_inverse(&BigInt::from(2), &modulus.to_biguint().expect("positive")).expect("p odd");
    (t * BigInt::from(half)).mod_floor(&modulus)
}

/// Parameters of the seed group at `2ℓ = 3m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedClaim {
    pub matrix: IntMatrix,
    /// The order the construction asserts (a power of `p`).
    pub claimed: BigUint,
    pub p: u64,
}

impl SeedClaim {
    /// `p`-part of the computed order.
    pub fn computed(&self) -> AbelianOrder {
        match abelian_order(&self.matrix) {
            AbelianOrder::Finite(n) => AbelianOrder::Finite(p_part(&n, self.p)),
            AbelianOrder::Infinite => AbelianOrder::Infinite,
        }
    }

    pub fn holds(&self) -> bool {
        self.computed() == AbelianOrder::Finite(self.claimed.clone())
    }
}

/// `v_p(2k² − u³)`.
pub fn teo5_s(p: u64, k: &BigInt, u: &BigInt) -> Valuation {
    valuation(&(BigInt::from(2) * k * k - u * u * u), p)
}

/// `v_2(u³ − k²)`.
pub fn teo17_s(k: &BigInt, u: &BigInt) -> Valuation {
    valuation(&(u * u * u - k * k), 2)
}

fn check_q(q: u32, s: Valuation, cap: u32) -> Result<(), SnfError> {
    let expected = match s {
        Valuation::Finite(s) => s.min(cap),
        Valuation::Infinite => cap,
    };
    if q != expected {
        return Err(SnfError::Domain(format!(
            "q must be min(s, {cap}) = {expected} (s = {s}), got {q}"
        )));
    }
    Ok(())
}

/// The 3×4 relation matrix of the abelian seed group at `2ℓ = 3m`
/// (columns: `x^{p^{ℓ+q}}`, the `z^{p^{m/2}k}` relation, `x^{p^ℓ} = y^{p^m}`,
/// `x^{2p^ℓk} = z^{p^m u}`), with claimed order `p^{3m+q}`.
pub fn teo5_seed_matrix(
    p: u64,
    m: u32,
    ell: u32,
    k: &BigInt,
    u: &BigInt,
    v: &BigInt,
    q: u32,
) -> Result<SeedClaim, SnfError> {
    if !is_prime(p) || p < 3 {
        return Err(SnfError::Domain(format!("p = {p} must be an odd prime")));
    }
    if m == 0 || !m.is_multiple_of(2) {
        return Err(SnfError::Domain(format!(
            "m = {m} must be even and positive"
        )));
    }
    if 2 * ell != 3 * m {
        return Err(SnfError::Domain(format!(
            "2ℓ = {} differs from 3m = {}",
            2 * ell,
            3 * m
        )));
    }
    for (name, x) in [("k", k), ("u", u), ("v", v)] {
        if !is_unit(x, p) {
            return Err(SnfError::Domain(format!(
                "{name} = {x} must be prime to {p}"
            )));
        }
    }
    if !(u - v).is_multiple_of(&pow(p, ell - m)) {
        return Err(SnfError::Domain(format!("u ≢ v (mod {p}^{})", ell - m)));
    }
    check_q(q, teo5_s(p, k, u), m / 2)?;
    let w_a = solve_w(u, p, m);
    let w_b = solve_w(v, p, m);
    let pm = pow(p, m);
    let ph = pow(p, m / 2);
    let pl = pow(p, ell);
    let z = BigInt::zero;
    let matrix = IntMatrix::new(
        3,
        4,
        vec![
            pow(p, ell + q),
            &pm * &w_a,
            pl.clone(),
            BigInt::from(2) * &pl * k,
            z(),
            &ph * &w_b,
            -&pm,
            z(),
            z(),
            -&ph * k,
            z(),
            -&pm * u,
        ],
    )?;
    Ok(SeedClaim {
        matrix,
        claimed: BigUint::from(p).pow(3 * m + q),
        p,
    })
}

/// The 3×4 relation matrix of the abelian seed group at `2ℓ + 2 = 3m + 1`
/// with `t = 1 − 2^{(m−3)/2}`, claimed order `2^{(7m−1)/2}`.
pub fn teo17_seed_matrix(
    m: u32,
    ell: u32,
    k: &BigInt,
    u: &BigInt,
    v: &BigInt,
    q: u32,
) -> Result<SeedClaim, SnfError> {
    if m < 5 || m.is_multiple_of(2) {
        return Err(SnfError::Domain(format!(
            "m = {m} must be odd and at least 5"
        )));
    }
    if 2 * ell + 2 != 3 * m + 1 {
        return Err(SnfError::Domain(format!(
            "2ℓ + 2 = {} differs from 3m + 1 = {}",
            2 * ell + 2,
            3 * m + 1
        )));
    }
    for (name, x) in [("k", k), ("u", u), ("v", v)] {
        if !is_unit(x, 2) {
            return Err(SnfError::Domain(format!("{name} = {x} must be odd")));
        }
    }
    if !(u - v).is_multiple_of(&pow(2, ell - m)) {
        return Err(SnfError::Domain(format!("u ≢ v (mod 2^{})", ell - m)));
    }
    let r = (m - 3) / 2;
    check_q(q, teo17_s(k, u), r)?;
    let t = BigInt::one() - pow(2, r);
    let z = BigInt::zero;
    let matrix = IntMatrix::new(
        3,
        4,
        vec![
            pow(2, ell + q + 1),
            pow(2, m - 1) * u * u,
            pow(2, ell),
            pow(2, ell) * &t * k,
            z(),
            pow(2, m - q - 1) * v * v,
            -pow(2, ell - q),
            z(),
            z(),
            -pow(2, ell - m + 1) * k,
            z(),
            -pow(2, m) * u,
        ],
    )?;
    Ok(SeedClaim {
        matrix,
        claimed: BigUint::from(2u32).pow((7 * m - 1) / 2),
        p: 2,
    })
}

/// `q = min(s, m/2)` for the `2ℓ = 3m` seed.
pub fn teo5_q(p: u64, m: u32, k: &BigInt, u: &BigInt) -> u32 {
    match teo5_s(p, k, u) {
        Valuation::Finite(s) => s.min(m / 2),
        Valuation::Infinite => m / 2,
    }
}

/// `q = min(s, (m−3)/2)` for the `2ℓ + 2 = 3m + 1` seed.
pub fn teo17_q(m: u32, k: &BigInt, u: &BigInt) -> u32 {
    let r = m.saturating_sub(3) / 2;
    match teo17_s(k, u) {
        Valuation::Finite(s) => s.min(r),
        Valuation::Infinite => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn factors(rows: &[Vec<i64>]) -> Vec<u64> {
        smith_normal_form(&mat(rows))
            .iter()
            .map(|d| d.try_into().unwrap())
            .collect()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn small_normal_forms() {
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[vec![4, 0], vec![0, 6]]), vec![2, 12]);
        assert_eq!(factors(&[vec![0, 0], vec![0, 0]]), Vec::<u64>::new());
        assert_eq!(
            factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
            vec![2, 6, 12]
        );
    }

    #[test]
    fn orders() {
        let d = mat(&[vec![25, 0], vec![0, 125]]);
        assert_eq!(
            abelian_order(&d),
            AbelianOrder::Finite(BigUint::from(3125u32))
        );
        assert_eq!(
            abelian_order(&mat(&[vec![0], vec![0]])),
            AbelianOrder::Infinite
        );
        assert_eq!(
            abelian_order(&mat(&[vec![6, 0, 0], vec![0, 6, 3]])),
            AbelianOrder::Finite(BigUint::from(18u32))
        );
    }

    #[test]
    fn teo5_examples() {
        let s = teo5_seed_matrix(5, 2, 3, &big(1), &big(1), &big(6), 0).unwrap();
        assert_eq!(s.claimed, BigUint::from(5u32).pow(6));
        assert!(s.holds());
        // 2·2² − 2³ = 0: s infinite, q = m/2
        for p in [5u64, 7] {
            let s = teo5_seed_matrix(p, 2, 3, &big(2), &big(2), &big(2), 1).unwrap();
            assert_eq!(s.claimed, BigUint::from(p).pow(7));
            assert!(s.holds());
        }
        assert!(teo5_seed_matrix(5, 2, 3, &big(1), &big(5), &big(5), 0).is_err());
        assert!(teo5_seed_matrix(5, 2, 3, &big(1), &big(1), &big(6), 1).is_err());
        assert_eq!(solve_w(&big(1), 5, 2), big(13));
    }

    #[test]
    fn teo17_examples() {
        let s = teo17_seed_matrix(5, 7, &big(1), &big(1), &big(1), 1).unwrap();
        assert_eq!(s.claimed, BigUint::from(2u32).pow(17));
        assert!(s.holds());
        assert!(teo17_seed_matrix(4, 5, &big(1), &big(1), &big(1), 0).is_err());
    }
}
