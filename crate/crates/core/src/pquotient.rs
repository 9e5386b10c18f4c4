//! Largest finite p-quotient of a finitely presented group, computed one
//! layer of the lower exponent-p central series at a time.
//!
//! Each step forms the p-covering group by attaching a fresh central tail to
//! every non-defining relation, forces consistency, then imposes the defining
//! relators. When a step adds no generators the quotient has stabilized, and
//! for a group whose Sylow p-subgroup is a direct factor (any finite nilpotent
//! group) the result is that Sylow subgroup.

use thiserror::Error;

use crate::fpgroup::{Presentation, Word};
use crate::padic::is_prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PQuotientError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("p-quotient exceeded {limit} points (reached {p}^{generators} at class {class})")]
    ResourceExceeded {
        limit: usize,
        p: u64,
        generators: usize,
        class: usize,
    },
    #[error("p-quotient did not stabilize within class {0}")]
    ClassLimit(usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Sparse normal word: `(generator, exponent)` with increasing generators.
type Sparse = Vec<(usize, u32)>;

/// How a power-commutator generator was introduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definition {
    /// Image of a defining generator.
    Image(usize),
    /// `g_i^p`.
    Power(usize),
    /// `[g_j, g_i]`, `j > i`.
    Commutator(usize, usize),
}

/// A power-commutator presentation of a finite p-group with all relative
/// orders `p`: `g_i^p = power[i]`, `[g_j, g_i] = comm[j][i]` for `j > i`,
/// right-hand sides in normal form over later generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcGroup {
    p: u32,
    weights: Vec<u32>,
    power: Vec<Sparse>,
    comm: Vec<Vec<Sparse>>,
    /// `g_j^{g_i} = g_j · comm[j][i]`.
    conj: Vec<Vec<Sparse>>,
}

fn add_sparse(e: &mut [u32], w: &Sparse, p: u32) {
    for &(g, x) in w {
        e[g] = (e[g] + x) % p;
    }
}

fn to_sparse(e: &[u32]) -> Sparse {
    e.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(g, &x)| (g, x))
        .collect()
}

impl PcGroup {
    fn new(p: u32, weights: Vec<u32>, power: Vec<Sparse>, comm: Vec<Vec<Sparse>>) -> Self {
        let conj = comm
            .iter()
            .enumerate()
            .map(|(j, row)| {
                row.iter()
                    .map(|c| {
                        let mut w = vec![(j, 1)];
                        w.extend_from_slice(c);
                        w
                    })
                    .collect()
            })
            .collect();
        PcGroup {
            p,
            weights,
            power,
            comm,
            conj,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p as u64
    }

    /// Composition length: the order is `p^len`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn identity(&self) -> Vec<u32> {
        vec![0; self.len()]
    }

    /// Multiplies the normal form `e` on the right by `word`.
    pub fn collect(&self, e: &mut [u32], word: &[(usize, u32)]) {
        let p = self.p;
        let n = self.len();
        let mut stack: Vec<(usize, u32)> = word.iter().rev().copied().collect();
        while let Some((i, k)) = stack.pop() {
            if k == 0 {
                continue;
            }
            let tail_start = i + 1;
            let has_tail = e[tail_start..].iter().any(|&x| x != 0);
            if !has_tail {
                let s = e[i] + k;
                e[i] = s % p;
                let q = s / p;
                if q > 0 {
                    for &(g, x) in &self.power[i] {
                        e[g] = x;
                    }
                    for _ in 1..q {
                        stack.extend(self.power[i].iter().rev().copied());
                    }
                }
                continue;
            }
            // x·g_i = (head·g_i)·tail^{g_i}
            let tail: Vec<(usize, u32)> = (tail_start..n)
                .filter_map(|j| {
                    let x = std::mem::take(&mut e[j]);
                    (x != 0).then_some((j, x))
                })
                .collect();
            if k > 1 {
                stack.push((i, k - 1));
            }
            for &(j, x) in tail.iter().rev() {
                for _ in 0..x {
                    stack.extend(self.conj[j][i].iter().rev().copied());
                }
            }
            e[i] += 1;
            if e[i] == p {
                e[i] = 0;
                for &(g, x) in &self.power[i] {
                    e[g] = x;
                }
            }
        }
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let mut e = x.to_vec();
        self.collect(&mut e, &to_sparse(y));
        e
    }

    pub fn inverse(&self, x: &[u32]) -> Vec<u32> {
        let mut z = x.to_vec();
        let mut y = self.identity();
        for i in 0..self.len() {
            if z[i] != 0 {
                let k = self.p - z[i];
                self.collect(&mut z, &[(i, k)]);
                y[i] = k;
            }
        }
        debug_assert!(z.iter().all(|&v| v == 0));
        y
    }

    /// `x^k` for any integer `k`, by repeated squaring.
    pub fn pow(&self, x: &[u32], k: i128) -> Vec<u32> {
        let base = if k < 0 { self.inverse(x) } else { x.to_vec() };
        let mut k = k.unsigned_abs();
        let mut result = self.identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(&result, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        result
    }

    /// Index of a normal form in `0..p^len`.
    pub fn index_of(&self, e: &[u32]) -> usize {
        e.iter()
            .fold(0usize, |acc, &x| acc * self.p as usize + x as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> Vec<u32> {
        let mut e = vec![0; self.len()];
        for slot in e.iter_mut().rev() {
            *slot = (idx % self.p as usize) as u32;
            idx /= self.p as usize;
        }
        e
    }

    /// Right regular action of each pc generator on `0..p^len`, indexed as
    /// in [`PcGroup::index_of`].
    pub fn regular_generators(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let degree = (self.p as usize).pow(n as u32);
        let mut perms: Vec<Vec<u32>> = vec![Vec::new(); n];
        for i in (0..n).rev() {
            let mut img = vec![0u32; degree];
            for (x, slot) in img.iter_mut().enumerate() {
                let e = self.element_at(x);
                let mut h = e.clone();
                for v in &mut h[i + 1..] {
                    *v = 0;
                }
                h[i] += 1;
                if h[i] == self.p {
                    h[i] = 0;
                    for &(g, v) in &self.power[i] {
                        h[g] = v;
                    }
                }
                let mut pos = self.index_of(&h);
                for j in i + 1..n {
                    for _ in 0..e[j] {
                        for &(g, v) in &self.conj[j][i] {
                            for _ in 0..v {
                                pos = perms[g][pos] as usize;
                            }
                        }
                    }
                }
                *slot = pos as u32;
            }
            perms[i] = img;
        }
        perms
    }

    /// Right action of an arbitrary element, composed from `generators`
    /// (the output of [`PcGroup::regular_generators`]).
    pub fn regular_image(&self, generators: &[Vec<u32>], e: &[u32]) -> Vec<u32> {
        let degree = generators.first().map_or(1, |g| g.len());
        (0..degree)
            .map(|x| {
                let mut pos = x;
                for (g, &k) in e.iter().enumerate() {
                    for _ in 0..k {
                        pos = generators[g][pos] as usize;
                    }
                }
                pos as u32
            })
            .collect()
    }

    /// `[g_j, g_i]` as stored.
    pub fn commutator_relation(&self, j: usize, i: usize) -> &[(usize, u32)] {
        &self.comm[j][i]
    }

    pub fn power_relation(&self, i: usize) -> &[(usize, u32)] {
        &self.power[i]
    }
}

/// Resource limits for [`p_quotient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PQuotientLimits {
    /// Largest admissible order `p^len`.
    pub max_points: usize,
    pub max_class: usize,
}

impl Default for PQuotientLimits {
    fn default() -> Self {
        PQuotientLimits {
            max_points: crate::fpgroup::DEFAULT_MAX_COSETS,
            max_class: 64,
        }
    }
}

/// The stabilized p-quotient together with the images of the defining
/// generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PQuotient {
    pub group: PcGroup,
    pub images: Vec<Vec<u32>>,
    pub definitions: Vec<Definition>,
    /// Lower exponent-p class reached.
    pub p_class: usize,
}

impl PQuotient {
    pub fn order_exponent(&self) -> usize {
        self.group.len()
    }

    /// Evaluates a word in the defining generators.
    pub fn evaluate(&self, w: &Word) -> Vec<u32> {
        evaluate(&self.group, &self.images, w)
    }
}

fn evaluate(g: &PcGroup, images: &[Vec<u32>], w: &Word) -> Vec<u32> {
    let mut acc = g.identity();
    for s in w.syllables() {
        let x = g.pow(&images[s.generator], s.power as i128);
        acc = g.mul(&acc, &x);
    }
    acc
}

/// Reduced row echelon form over `F_p`; returns the nonzero rows.
fn row_reduce(rows: &mut Vec<Vec<u32>>, p: u32) -> Vec<(usize, Vec<u32>)> {
    let inv = |x: u32| -> u32 {
        let (mut r, mut base, mut exp) = (1u64, x as u64, (p - 2) as u64);
        while exp > 0 {
            if exp & 1 == 1 {
                r = r * base % p as u64;
            }
            base = base * base % p as u64;
            exp >>= 1;
        }
        r as u32
    };
    let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
    for mut row in rows.drain(..) {
        for (piv, b) in &basis {
            let c = row[*piv];
            if c != 0 {
                for (x, y) in row.iter_mut().zip(b) {
                    *x = (*x + (p - c) * y % p) % p;
                }
            }
        }
        if let Some(piv) = row.iter().position(|&x| x != 0) {
            let s = inv(row[piv]);
            for x in row.iter_mut() {
                *x = *x * s % p;
            }
            for (_, b) in basis.iter_mut() {
                let c = b[piv];
                if c != 0 {
                    for (x, y) in b.iter_mut().zip(&row) {
                        *x = (*x + (p - c) * y % p) % p;
                    }
                }
            }
            basis.push((piv, row));
        }
    }
    basis.sort_by_key(|(piv, _)| *piv);
    basis
}

/// Where each tail of the covering group is attached.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Power(usize),
    Commutator(usize, usize),
    Image(usize),
}

struct State {
    group: PcGroup,
    images: Vec<Vec<u32>>,
    definitions: Vec<Definition>,
}

fn class_one(pres: &Presentation, p: u32) -> State {
    let gens = pres.generator_count;
    let mut rows: Vec<Vec<u32>> = pres
        .relators
        .iter()
        .map(|r| {
            (0..gens)
                .map(|g| r.exponent_sum(g).rem_euclid(p as i64) as u32)
                .collect()
        })
        .collect();
    let basis = row_reduce(&mut rows, p);
    let pivots: Vec<usize> = basis.iter().map(|(piv, _)| *piv).collect();
    let free: Vec<usize> = (0..gens).filter(|g| !pivots.contains(g)).collect();
    let d = free.len();
    let mut images = vec![vec![0u32; d]; gens];
    for (k, &g) in free.iter().enumerate() {
        images[g][k] = 1;
    }
    for (piv, row) in &basis {
        for (k, &g) in free.iter().enumerate() {
            images[*piv][k] = (p - row[g]) % p;
        }
    }
    let definitions = free.iter().map(|&g| Definition::Image(g)).collect();
    State {
        group: PcGroup::new(
            p,
            vec![1; d],
            vec![Vec::new(); d],
            (0..d).map(|j| vec![Vec::new(); j]).collect(),
        ),
        images,
        definitions,
    }
}

/// One covering step; `None` once no new generators arise.
fn next_class(
    pres: &Presentation,
    st: &State,
    class: u32,
) -> Result<Option<State>, PQuotientError> {
    let g = &st.group;
    let p = g.p;
    let n = g.len();
    let defined = |d: Definition| st.definitions.contains(&d);
    let mut slots: Vec<Slot> = Vec::new();
    let mut power_slot = vec![None; n];
    let mut comm_slot = vec![vec![None; n]; n];
    let mut image_slot = vec![None; st.images.len()];
    for i in 0..n {
        if !defined(Definition::Power(i)) {
            power_slot[i] = Some(slots.len());
            slots.push(Slot::Power(i));
        }
    }
    for j in 0..n {
        for i in 0..j {
            if !defined(Definition::Commutator(j, i)) {
                comm_slot[j][i] = Some(slots.len());
                slots.push(Slot::Commutator(j, i));
            }
        }
    }
    for (x, img) in st.images.iter().enumerate() {
        let is_gen = img.iter().filter(|&&v| v != 0).count() == 1
            && st
                .definitions
                .iter()
                .enumerate()
                .any(|(k, d)| *d == Definition::Image(x) && img[k] == 1);
        if !is_gen {
            image_slot[x] = Some(slots.len());
            slots.push(Slot::Image(x));
        }
    }
    let t = slots.len();
    let total = n + t;
    let with_tail = |w: &Sparse, slot: Option<usize>| -> Sparse {
        let mut w = w.clone();
        if let Some(s) = slot {
            w.push((n + s, 1));
        }
        w
    };
    let mut power = Vec::with_capacity(total);
    let mut comm = Vec::with_capacity(total);
    let mut weights = g.weights.clone();
    for i in 0..n {
        power.push(with_tail(&g.power[i], power_slot[i]));
    }
    for j in 0..n {
        comm.push(
            (0..j)
                .map(|i| with_tail(&g.comm[j][i], comm_slot[j][i]))
                .collect::<Vec<_>>(),
        );
    }
    for j in n..total {
        power.push(Vec::new());
        comm.push(vec![Vec::new(); j]);
        weights.push(class + 1);
    }
    let cover = PcGroup::new(p, weights, power, comm);
    let images: Vec<Vec<u32>> = st
        .images
        .iter()
        .enumerate()
        .map(|(x, img)| {
            let mut e = img.clone();
            e.resize(total, 0);
            if let Some(s) = image_slot[x] {
                e[n + s] = 1;
            }
            e
        })
        .collect();

    let mut relations: Vec<Vec<u32>> = Vec::new();
    let mut record = |a: Vec<u32>, b: Vec<u32>| -> Result<(), PQuotientError> {
        if a[..n] != b[..n] {
            return Err(PQuotientError::Internal(
                "consistency check differs outside the tails".into(),
            ));
        }
        let diff: Vec<u32> = (n..total).map(|q| (a[q] + p - b[q]) % p).collect();
        if diff.iter().any(|&x| x != 0) {
            relations.push(diff);
        }
        Ok(())
    };
    let unit = |i: usize| -> Vec<u32> {
        let mut e = vec![0; total];
        e[i] = 1;
        e
    };
    let word = |w: &[(usize, u32)]| -> Vec<u32> {
        let mut e = vec![0; total];
        cover.collect(&mut e, w);
        e
    };
    // (g_k g_j) g_i = g_k (g_j g_i)
    for k in 0..n {
        for j in 0..k {
            let kj = word(&[(k, 1), (j, 1)]);
            for i in 0..j {
                let lhs = cover.mul(&kj, &unit(i));
                let ji = word(&[(j, 1), (i, 1)]);
                let rhs = cover.mul(&unit(k), &ji);
                record(lhs, rhs)?;
            }
        }
    }
    for j in 0..n {
        let pw = word(&[(j, p)]);
        let pm1 = word(&[(j, p - 1)]);
        // g_j^p g_j = g_j g_j^p
        record(cover.mul(&pw, &unit(j)), cover.mul(&unit(j), &pw))?;
        for i in 0..j {
            // (g_j^{p-1} g_j) g_i = g_j^{p-1} (g_j g_i)
            let ji = word(&[(j, 1), (i, 1)]);
            record(cover.mul(&pw, &unit(i)), cover.mul(&pm1, &ji))?;
            // (g_j g_i^{p-1}) g_i = g_j (g_i^{p-1} g_i)
            let jip = word(&[(j, 1), (i, p - 1)]);
            let ip = word(&[(i, p)]);
            record(cover.mul(&jip, &unit(i)), cover.mul(&unit(j), &ip))?;
        }
    }
    for r in &pres.relators {
        let v = evaluate(&cover, &images, r);
        if v[..n].iter().any(|&x| x != 0) {
            return Err(PQuotientError::Internal(
                "relator is nontrivial in the previous quotient".into(),
            ));
        }
        let tails: Vec<u32> = v[n..].to_vec();
        if tails.iter().any(|&x| x != 0) {
            relations.push(tails);
        }
    }

    let basis = row_reduce(&mut relations, p);
    let pivots: Vec<usize> = basis.iter().map(|(piv, _)| *piv).collect();
    let free: Vec<usize> = (0..t).filter(|q| !pivots.contains(q)).collect();
    if free.is_empty() {
        return Ok(None);
    }
    let new_n = n + free.len();
    // tail q as a sparse word in the new generators
    let mut tail_value: Vec<Sparse> = vec![Vec::new(); t];
    for (k, &q) in free.iter().enumerate() {
        tail_value[q] = vec![(n + k, 1)];
    }
    for (piv, row) in &basis {
        tail_value[*piv] = free
            .iter()
            .enumerate()
            .filter(|(_, &q)| row[q] != 0)
            .map(|(k, &q)| (n + k, (p - row[q]) % p))
            .collect();
    }
    let substitute = |w: &Sparse, slot: Option<usize>| -> Sparse {
        let mut w = w.clone();
        if let Some(s) = slot {
            w.extend_from_slice(&tail_value[s]);
        }
        w
    };
    let mut power = Vec::with_capacity(new_n);
    let mut comm = Vec::with_capacity(new_n);
    let mut weights = g.weights.clone();
    for i in 0..n {
        power.push(substitute(&g.power[i], power_slot[i]));
    }
    for j in 0..n {
        comm.push(
            (0..j)
                .map(|i| substitute(&g.comm[j][i], comm_slot[j][i]))
                .collect::<Vec<_>>(),
        );
    }
    for j in n..new_n {
        power.push(Vec::new());
        comm.push(vec![Vec::new(); j]);
        weights.push(class + 1);
    }
    let mut definitions = st.definitions.clone();
    for &q in &free {
        definitions.push(match slots[q] {
            Slot::Power(i) => Definition::Power(i),
            Slot::Commutator(j, i) => Definition::Commutator(j, i),
            Slot::Image(x) => Definition::Image(x),
        });
    }
    let images = st
        .images
        .iter()
        .enumerate()
        .map(|(x, img)| {
            let mut e = img.clone();
            e.resize(new_n, 0);
            if let Some(s) = image_slot[x] {
                let mut sp = vec![0; new_n];
                for &(gg, v) in &tail_value[s] {
                    sp[gg] = v;
                }
                add_sparse(&mut e, &to_sparse(&sp), p);
            }
            e
        })
        .collect();
    Ok(Some(State {
        group: PcGroup::new(p, weights, power, comm),
        images,
        definitions,
    }))
}

/// Computes the largest finite p-quotient of `pres`, failing if it has not
/// stabilized within the limits.
pub fn p_quotient(
    pres: &Presentation,
    p: u64,
    limits: &PQuotientLimits,
) -> Result<PQuotient, PQuotientError> {
    if !is_prime(p) || p > u16::MAX as u64 {
        return Err(PQuotientError::NotPrime(p));
    }
    let pp = p as u32;
    let fits = |len: usize| -> bool {
        (p as u128)
            .checked_pow(len as u32)
            .is_some_and(|o| o <= limits.max_points as u128)
    };
    let mut st = class_one(pres, pp);
    let mut class = 1usize;
    loop {
        if !fits(st.group.len()) {
            return Err(PQuotientError::ResourceExceeded {
                limit: limits.max_points,
                p,
                generators: st.group.len(),
                class,
            });
        }
        if st.group.is_empty() {
            break;
        }
        if class > limits.max_class {
            return Err(PQuotientError::ClassLimit(limits.max_class));
        }
        match next_class(pres, &st, class as u32)? {
            Some(next) => {
                st = next;
                class += 1;
            }
            None => break,
        }
    }
    Ok(PQuotient {
        group: st.group,
        images: st.images,
        definitions: st.definitions,
        p_class: class,
    })
}
