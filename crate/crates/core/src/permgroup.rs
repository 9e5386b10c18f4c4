//! Permutation groups: element arithmetic, base and strong generating sets,
//! normal closures and the lower central series.
//!
//! Groups acting regularly (the usual output of an enumeration) take a fast
//! path. Regularity is certified by building, for each generator `g`, the
//! permutation `σ_g` that commutes with every generator and sends `0` to
//! `0^g`; if these exist and move `0` around every point, the centralizer is
//! transitive and the group is regular. Subgroups then act semiregularly, so
//! base `[0]` suffices and the order is the orbit length of `0`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("images do not form a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: u32, degree: usize },
}

/// A permutation of `0..degree`, acting on the right: `x^(gh) = (x^g)^h`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() <= 32 {
            write!(f, "Permutation{:?}", self.images)
        } else {
            write!(f, "Permutation(degree {})", self.degree())
        }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.iter().all(|c| c.len() == 1) {
            return write!(f, "()");
        }
        for c in cycles.iter().filter(|c| c.len() > 1) {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if x as usize >= degree {
                    return Err(PermError::PointOutOfRange { point: x, degree });
                }
                images[x as usize] = c[(i + 1) % c.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn image(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `x⁻¹ y⁻¹ x y`.
    pub fn commutator(x: &Permutation, y: &Permutation) -> Permutation {
        x.inverse().compose(&y.inverse()).compose(x).compose(y)
    }

    /// `by⁻¹ · self · by`.
    pub fn conjugate(&self, by: &Permutation) -> Permutation {
        by.inverse().compose(self).compose(by)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| other.images[x as usize] == self.images[other.images[i] as usize])
    }

    /// Cycles (including fixed points), each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                c.push(x);
                x = self.image(x);
            }
            out.push(c);
        }
        out
    }

    /// `self^k` for any integer `k`, one cycle at a time.
    pub fn pow(&self, k: &BigInt) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for c in self.cycles() {
            let len = BigInt::from(c.len());
            let shift = k.mod_floor(&len).to_usize().unwrap_or(0);
            for (i, &x) in c.iter().enumerate() {
                images[x as usize] = c[(i + shift) % c.len()];
            }
        }
        Permutation { images }
    }

    pub fn pow_i64(&self, k: i64) -> Permutation {
        self.pow(&BigInt::from(k))
    }

    /// Order as the lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        element_order(self)
    }
}

/// Order of a permutation: the lcm of its cycle lengths.
pub fn element_order(x: &Permutation) -> BigUint {
    let mut lengths: Vec<usize> = x.cycles().iter().map(|c| c.len()).collect();
    lengths.sort_unstable();
    lengths.dedup();
    lengths
        .into_iter()
        .fold(BigUint::one(), |acc, l| acc.lcm(&BigUint::from(l)))
}

fn orbit(degree: usize, gens: &[Permutation], start: u32) -> Vec<u32> {
    let mut seen = vec![false; degree];
    seen[start as usize] = true;
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        for g in gens {
            let y = g.image(x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                out.push(y);
            }
        }
        i += 1;
    }
    out
}

/// Centralizing permutations proving a regular action.
#[derive(Debug)]
struct RegularAmbient {
    sigmas: Vec<Permutation>,
}

impl RegularAmbient {
    /// `Some` iff `gens` generate a regular group on `0..degree`.
    fn certify(degree: usize, gens: &[Permutation]) -> Option<RegularAmbient> {
        if degree == 0 {
            return None;
        }
        // Schreier tree from 0
        let mut parent: Vec<Option<(u32, usize)>> = vec![None; degree];
        let mut order = vec![0u32];
        let mut seen = vec![false; degree];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for (gi, g) in gens.iter().enumerate() {
                let y = g.image(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = Some((x, gi));
                    order.push(y);
                }
            }
            i += 1;
        }
        if order.len() != degree {
            return None;
        }
        let build = |target: u32| -> Option<Permutation> {
            let mut img = vec![u32::MAX; degree];
            img[0] = target;
            for &z in &order[1..] {
                let (par, gi) = parent[z as usize].unwrap();
                img[z as usize] = gens[gi].image(img[par as usize]);
            }
            let sigma = Permutation::from_images(img).ok()?;
            gens.iter().all(|g| sigma.commutes_with(g)).then_some(sigma)
        };
        let mut sigmas = Vec::new();
        for g in gens {
            if !g.is_identity() {
                sigmas.push(build(g.image(0))?);
            }
        }
        (orbit(degree, &sigmas, 0).len() == degree).then_some(RegularAmbient { sigmas })
    }

    fn contains(&self, x: &Permutation) -> bool {
        self.sigmas.iter().all(|s| s.commutes_with(x))
    }
}

/// One level of a stabilizer chain.
#[derive(Debug, Clone)]
struct Level {
    point: u32,
    /// Generators of the stabilizer of the earlier base points.
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// `reps[β]` maps the base point to `β`.
    reps: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, point: u32, gens: Vec<Permutation>) -> Level {
        let mut reps: Vec<Option<Permutation>> = vec![None; degree];
        reps[point as usize] = Some(Permutation::identity(degree));
        let mut orbit = vec![point];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            let u = reps[x as usize].clone().unwrap();
            for g in &gens {
                let y = g.image(x);
                if reps[y as usize].is_none() {
                    reps[y as usize] = Some(u.compose(g));
                    orbit.push(y);
                }
            }
            i += 1;
        }
        Level {
            point,
            gens,
            orbit,
            reps,
        }
    }
}

#[derive(Debug, Clone)]
enum Chain {
    /// Semiregular subgroup of a certified regular group.
    Semiregular {
        in_orbit: Vec<bool>,
        size: usize,
        ambient: Arc<RegularAmbient>,
    },
    General(Vec<Level>),
}

/// A permutation group given by generators, with its stabilizer chain built
/// on first use.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    ambient: Option<Arc<RegularAmbient>>,
    chain: OnceLock<Chain>,
}

/// Lower central series of a group.
#[derive(Debug, Clone)]
pub struct CentralSeriesReport {
    /// `γ₁ = G ⊇ γ₂ ⊇ …`, ending with the trivial group or a stable term.
    pub terms: Vec<PermGroup>,
    pub orders: Vec<BigUint>,
    /// Index of the last nontrivial term (0 for the trivial group); for a
    /// stalled series, the index of the stable term.
    pub class: usize,
    /// False when the series stalls at a nontrivial term.
    pub nilpotent: bool,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            ambient: None,
            chain: OnceLock::new(),
        })
    }

    /// Builds the group and its stabilizer chain in one go.
    pub fn schreier_sims(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        let g = PermGroup::new(degree, generators)?;
        g.chain();
        Ok(g)
    }

    fn subgroup(&self, generators: Vec<Permutation>) -> PermGroup {
        PermGroup {
            degree: self.degree,
            generators,
            ambient: self.regular_ambient(),
            chain: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    fn regular_ambient(&self) -> Option<Arc<RegularAmbient>> {
        if let Some(a) = &self.ambient {
            return Some(a.clone());
        }
        match self.chain() {
            Chain::Semiregular { ambient, .. } => Some(ambient.clone()),
            Chain::General(_) => None,
        }
    }

    fn chain(&self) -> &Chain {
        self.chain.get_or_init(|| {
            let gens: Vec<Permutation> = self
                .generators
                .iter()
                .filter(|g| !g.is_identity())
                .cloned()
                .collect();
            let ambient = self
                .ambient
                .clone()
                .or_else(|| RegularAmbient::certify(self.degree, &gens).map(Arc::new));
            match ambient {
                Some(ambient) => {
                    let orb = if self.degree == 0 {
                        Vec::new()
                    } else {
                        orbit(self.degree, &gens, 0)
                    };
                    let mut in_orbit = vec![false; self.degree];
                    for &x in &orb {
                        in_orbit[x as usize] = true;
                    }
                    Chain::Semiregular {
                        in_orbit,
                        size: orb.len(),
                        ambient,
                    }
                }
                None => Chain::General(build_chain(self.degree, &gens)),
            }
        })
    }

    /// Whether the group is known to act semiregularly (regular ambient).
    pub fn is_semiregular(&self) -> bool {
        matches!(self.chain(), Chain::Semiregular { .. })
    }

    pub fn base(&self) -> Vec<u32> {
        match self.chain() {
            Chain::Semiregular { size, .. } => {
                if *size > 1 {
                    vec![0]
                } else {
                    Vec::new()
                }
            }
            Chain::General(levels) => levels.iter().map(|l| l.point).collect(),
        }
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        match self.chain() {
            Chain::Semiregular { .. } => self
                .generators
                .iter()
                .filter(|g| !g.is_identity())
                .cloned()
                .collect(),
            Chain::General(levels) => levels.first().map(|l| l.gens.clone()).unwrap_or_default(),
        }
    }

    pub fn order(&self) -> BigUint {
        match self.chain() {
            Chain::Semiregular { size, .. } => BigUint::from(*size),
            Chain::General(levels) => levels
                .iter()
                .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len())),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.is_identity())
    }

    /// Exact membership test.
    pub fn contains(&self, x: &Permutation) -> Result<bool, PermError> {
        if x.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                expected: self.degree,
                found: x.degree(),
            });
        }
        Ok(match self.chain() {
            Chain::Semiregular {
                in_orbit, ambient, ..
            } => ambient.contains(x) && in_orbit[x.image(0) as usize],
            Chain::General(levels) => sift(levels, x).0.is_identity(),
        })
    }

    /// For `x` in the regular ambient group, `x` lies in this subgroup iff
    /// `0^x` is in the orbit of `0`.
    fn contains_ambient(&self, x: &Permutation) -> bool {
        match self.chain() {
            Chain::Semiregular { in_orbit, .. } => in_orbit[x.image(0) as usize],
            Chain::General(levels) => sift(levels, x).0.is_identity(),
        }
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> Result<PermGroup, PermError> {
        for s in seeds {
            if s.degree() != self.degree {
                return Err(PermError::DegreeMismatch {
                    expected: self.degree,
                    found: s.degree(),
                });
            }
        }
        let mut closure = self.subgroup(Vec::new());
        let mut queue: VecDeque<Permutation> = VecDeque::new();
        // the orbit shortcut is only sound inside a regular parent
        let regular = self.regular_ambient().is_some();
        let add = |closure: &mut PermGroup, x: Permutation, queue: &mut VecDeque<Permutation>| {
            let known = if regular {
                closure.contains_ambient(&x)
            } else {
                closure.contains(&x).expect("same degree")
            };
            if x.is_identity() || known {
                return;
            }
            let mut gens = std::mem::take(&mut closure.generators);
            gens.push(x.clone());
            *closure = self.subgroup(gens);
            queue.push_back(x);
        };
        for s in seeds {
            add(&mut closure, s.clone(), &mut queue);
        }
        while let Some(h) = queue.pop_front() {
            for g in &self.generators {
                add(&mut closure, h.conjugate(g), &mut queue);
            }
        }
        Ok(closure)
    }

    /// `[G, G]`.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut seeds = Vec::new();
        for (i, x) in self.generators.iter().enumerate() {
            for y in &self.generators[i + 1..] {
                seeds.push(Permutation::commutator(x, y));
            }
        }
        self.normal_closure(&seeds).expect("same degree")
    }

    /// `γ₁ = G`, `γ_{i+1} = [γ_i, G]`, stopping at the trivial group or at
    /// the first repeated order.
    pub fn lower_central_series(&self) -> CentralSeriesReport {
        let mut terms = vec![self.clone()];
        let mut orders = vec![self.order()];
        loop {
            let last = terms.last().unwrap();
            if orders.last().unwrap().is_one() {
                break;
            }
            let mut seeds = Vec::new();
            for s in last.strong_generators() {
                for t in &self.generators {
                    seeds.push(Permutation::commutator(&s, t));
                }
            }
            let next = self.normal_closure(&seeds).expect("same degree");
            let ord = next.order();
            let stalled = &ord == orders.last().unwrap();
            terms.push(next);
            orders.push(ord);
            if stalled {
                break;
            }
        }
        let nilpotent = orders.last().unwrap().is_one();
        let class = orders.len() - 1;
        CentralSeriesReport {
            terms,
            orders,
            class,
            nilpotent,
        }
    }

    /// All elements, breadth first from the identity; `None` above `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<Permutation>> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
                let y = out[i].compose(g);
                if !seen.contains(&y) {
                    if out.len() >= limit {
                        return None;
                    }
                    seen.insert(y.clone());
                    out.push(y);
                }
            }
            i += 1;
        }
        Some(out)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, x)| self.generators[i + 1..].iter().all(|y| x.commutes_with(y)))
    }
}

/// Sifts `x` through the chain; returns the residue and the level reached.
fn sift(levels: &[Level], x: &Permutation) -> (Permutation, usize) {
    let mut h = x.clone();
    for (i, l) in levels.iter().enumerate() {
        let beta = h.image(l.point);
        match &l.reps[beta as usize] {
            Some(u) => h = h.compose(&u.inverse()),
            None => return (h, i),
        }
    }
    (h, levels.len())
}

/// Deterministic Schreier–Sims; base points are the smallest moved points.
fn build_chain(degree: usize, gens: &[Permutation]) -> Vec<Level> {
    let mut base: Vec<u32> = Vec::new();
    let mut strong: Vec<Permutation> = Vec::new();
    let first_moved = |g: &Permutation| (0..degree as u32).find(|&x| g.image(x) != x);
    for g in gens {
        if base.iter().all(|&b| g.image(b) == b) {
            if let Some(x) = first_moved(g) {
                base.push(x);
            }
        }
        strong.push(g.clone());
    }
    let fixes_prefix =
        |g: &Permutation, base: &[u32], i: usize| base[..i].iter().all(|&b| g.image(b) == b);
    let level_gens = |strong: &[Permutation], base: &[u32], i: usize| -> Vec<Permutation> {
        strong
            .iter()
            .filter(|g| fixes_prefix(g, base, i))
            .cloned()
            .collect()
    };
    let mut levels: Vec<Level> = (0..base.len())
        .map(|i| Level::new(degree, base[i], level_gens(&strong, &base, i)))
        .collect();
    let mut i = levels.len();
    while i > 0 {
        let lvl = i - 1;
        let mut restart = None;
        'search: for &beta in &levels[lvl].orbit.clone() {
            let u = levels[lvl].reps[beta as usize].clone().unwrap();
            for s in &levels[lvl].gens.clone() {
                let img = s.image(beta);
                let ui = levels[lvl].reps[img as usize].as_ref().unwrap().inverse();
                let schreier = u.compose(s).compose(&ui);
                if schreier.is_identity() {
                    continue;
                }
                let (h, j) = sift(&levels[lvl + 1..], &schreier);
                let j = j + lvl + 1;
                if j < levels.len() || !h.is_identity() {
                    if j == levels.len() {
                        let x = first_moved(&h).expect("nontrivial residue");
                        base.push(x);
                        levels.push(Level::new(degree, x, Vec::new()));
                    }
                    strong.push(h);
                    for (k, level) in levels.iter_mut().enumerate().take(j + 1).skip(lvl + 1) {
                        *level = Level::new(degree, base[k], level_gens(&strong, &base, k));
                    }
                    restart = Some(j + 1);
                    break 'search;
                }
            }
        }
        match restart {
            Some(r) => i = r,
            None => i -= 1,
        }
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(degree, cycles).unwrap()
    }

    #[test]
    fn element_orders() {
        assert_eq!(element_order(&Permutation::identity(4)), BigUint::one());
        assert_eq!(element_order(&perm(3, &[&[0, 1, 2]])), BigUint::from(3u32));
        assert_eq!(
            element_order(&perm(5, &[&[0, 1], &[2, 3, 4]])),
            BigUint::from(6u32)
        );
    }

    #[test]
    fn symmetric_group_orders() {
        let g =
            PermGroup::schreier_sims(3, vec![perm(3, &[&[0, 1, 2]]), perm(3, &[&[0, 1]])]).unwrap();
        assert_eq!(g.order(), BigUint::from(6u32));
        let s5 =
            PermGroup::new(5, vec![perm(5, &[&[0, 1, 2, 3, 4]]), perm(5, &[&[0, 1]])]).unwrap();
        assert_eq!(s5.order(), BigUint::from(120u32));
        let triv = PermGroup::new(4, vec![Permutation::identity(4)]).unwrap();
        assert_eq!(triv.order(), BigUint::one());
        assert_eq!(triv.lower_central_series().class, 0);
    }

    #[test]
    fn membership() {
        let c3 = PermGroup::new(3, vec![perm(3, &[&[0, 1, 2]])]).unwrap();
        assert!(c3.contains(&Permutation::identity(3)).unwrap());
        assert!(!c3.contains(&perm(3, &[&[0, 1]])).unwrap());
        assert!(c3.contains(&perm(3, &[&[0, 2, 1]])).unwrap());
        assert!(c3.contains(&Permutation::identity(4)).is_err());
        let a4 = PermGroup::new(4, vec![perm(4, &[&[0, 1, 2]]), perm(4, &[&[1, 2, 3]])]).unwrap();
        assert_eq!(a4.order(), BigUint::from(12u32));
        assert!(!a4.contains(&perm(4, &[&[0, 1]])).unwrap());
        assert!(a4.contains(&perm(4, &[&[0, 1], &[2, 3]])).unwrap());
    }

    #[test]
    fn closures_in_s3() {
        let s3 = PermGroup::new(3, vec![perm(3, &[&[0, 1, 2]]), perm(3, &[&[0, 1]])]).unwrap();
        let a3 = s3.normal_closure(&[perm(3, &[&[0, 1, 2]])]).unwrap();
        assert_eq!(a3.order(), BigUint::from(3u32));
        assert_eq!(s3.derived_subgroup().order(), BigUint::from(3u32));
        assert_eq!(
            s3.normal_closure(&[Permutation::identity(3)])
                .unwrap()
                .order(),
            BigUint::one()
        );
        let lcs = s3.lower_central_series();
        assert!(!lcs.nilpotent);
        assert_eq!(lcs.orders.last().unwrap(), &BigUint::from(3u32));
    }

    #[test]
    fn regular_cyclic_group() {
        let c = perm(12, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]]);
        let g = PermGroup::new(12, vec![c.clone()]).unwrap();
        assert!(g.is_semiregular());
        assert_eq!(g.order(), BigUint::from(12u32));
        let lcs = g.lower_central_series();
        assert_eq!(lcs.class, 1);
        let sub = g.normal_closure(&[c.pow_i64(4)]).unwrap();
        assert_eq!(sub.order(), BigUint::from(3u32));
        assert!(sub.contains(&c.pow_i64(8)).unwrap());
        assert!(!sub.contains(&c.pow_i64(2)).unwrap());
        assert!(!sub.contains(&perm(12, &[&[0, 4, 8]])).unwrap());
    }

    #[test]
    fn regular_dihedral_class() {
        // D8 acting on itself: elements r^i s^j indexed i + 4j
        let idx = |i: u32, j: u32| (i % 4) + 4 * j;
        let r: Vec<u32> = (0..8)
            .map(|x| {
                let (i, j) = (x % 4, x / 4);
                // (r^i s^j) r = r^{i ± 1} s^j
                if j == 0 {
                    idx(i + 1, 0)
                } else {
                    idx(i + 3, 1)
                }
            })
            .collect();
        let s: Vec<u32> = (0..8).map(|x| idx(x % 4, 1 - x / 4)).collect();
        let g = PermGroup::new(
            8,
            vec![
                Permutation::from_images(r).unwrap(),
                Permutation::from_images(s).unwrap(),
            ],
        )
        .unwrap();
        assert!(g.is_semiregular());
        assert_eq!(g.order(), BigUint::from(8u32));
        let lcs = g.lower_central_series();
        assert_eq!(lcs.class, 2);
        assert!(lcs.nilpotent);
        assert_eq!(g.derived_subgroup().order(), BigUint::from(2u32));
    }

    #[test]
    fn non_regular_transitive() {
        // S3 on 3 points is transitive but not regular
        let s3 = PermGroup::new(3, vec![perm(3, &[&[0, 1, 2]]), perm(3, &[&[0, 1]])]).unwrap();
        assert!(!s3.is_semiregular());
        assert_eq!(s3.order(), BigUint::from(6u32));
    }

    #[test]
    fn big_powers() {
        let c = perm(6, &[&[0, 1, 2], &[3, 4]]);
        assert_eq!(c.pow_i64(-1), c.inverse());
        assert!(c.pow(&BigInt::from(6_000_000_000_000i64)).is_identity());
        assert_eq!(c.pow_i64(7), c);
        assert_eq!(c.to_string(), "(0 1 2)(3 4)");
    }
}
