//! Finite presentations of Macdonald groups and their Sylow subgroups, and a
//! Todd–Coxeter coset enumerator producing the permutation action on cosets.
//!
//! Words are stored as syllables `x^k` so that power relators such as
//! `a^(5^8)` cost one entry; the enumerator scans a syllable by walking the
//! `x`-chain and, once the chain closes into a cycle, skips whole turns of it.

use std::fmt;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use thiserror::Error;

use crate::padic::{valuation_i128, Valuation};

pub const DEFAULT_MAX_COSETS: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpGroupError {
    #[error("{0}")]
    Domain(String),
    #[error("generator index {index} out of range for {count} generators")]
    BadGenerator { index: usize, count: usize },
    #[error("coset enumeration exceeded {limit}: {cosets} cosets allocated (high-water mark {high_water})")]
    ResourceExceeded {
        limit: String,
        cosets: usize,
        high_water: usize,
    },
    #[error("coset table is incomplete")]
    Incomplete,
}

/// One syllable `x^power` of a word; `power` is never zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub generator: usize,
    pub power: i64,
}

/// A freely reduced word in the generators, run-length encoded.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(g: usize) -> Self {
        Word::power(g, 1)
    }

    pub fn power(g: usize, k: i64) -> Self {
        let mut w = Word::default();
        w.push(g, k);
        w
    }

    /// Builds a word from `(generator, sign)` letters.
    pub fn from_letters(letters: &[(usize, i8)]) -> Self {
        let mut w = Word::default();
        for &(g, s) in letters {
            w.push(g, if s < 0 { -1 } else { 1 });
        }
        w
    }

    /// Appends `g^k`, merging with the last syllable when possible.
    pub fn push(&mut self, g: usize, k: i64) {
        if k == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.generator == g {
                last.power += k;
                if last.power == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable {
            generator: g,
            power: k,
        });
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for s in &other.syllables {
            w.push(s.generator, s.power);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator,
                    power: -s.power,
                })
                .collect(),
        }
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.inverse().mul(&y.inverse()).mul(x).mul(y)
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Number of letters.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|s| s.power.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Expands into `(generator, sign)` letters.
    pub fn letters(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.syllables.iter().flat_map(|s| {
            let sign = if s.power < 0 { -1 } else { 1 };
            std::iter::repeat_n((s.generator, sign), s.power.unsigned_abs() as usize)
        })
    }

    /// Exponent sum of generator `g`.
    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.syllables
            .iter()
            .filter(|s| s.generator == g)
            .map(|s| s.power)
            .sum()
    }

    /// The cyclically reduced conjugate used for scanning.
    fn cyclically_reduced(&self) -> Word {
        let mut syl = self.syllables.clone();
        loop {
            if syl.len() >= 2 && syl[0].generator == syl[syl.len() - 1].generator {
                let last = syl.pop().unwrap();
                syl[0].power += last.power;
                if syl[0].power == 0 {
                    syl.remove(0);
                }
            } else {
                break;
            }
        }
        Word { syllables: syl }
    }
}

/// A finite presentation `⟨generators | relators⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generator_count: usize,
    pub relators: Vec<Word>,
    pub names: Vec<String>,
}

impl Presentation {
    pub fn new(names: &[&str], relators: Vec<Word>) -> Result<Self, FpGroupError> {
        let pres = Presentation {
            generator_count: names.len(),
            relators,
            names: names.iter().map(|s| s.to_string()).collect(),
        };
        pres.check_word_range(&pres.relators)?;
        Ok(pres)
    }

    fn check_word_range(&self, words: &[Word]) -> Result<(), FpGroupError> {
        for w in words {
            for s in w.syllables() {
                if s.generator >= self.generator_count {
                    return Err(FpGroupError::BadGenerator {
                        index: s.generator,
                        count: self.generator_count,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.syllables()
            .iter()
            .map(|s| {
                let name = &self.names[s.generator];
                if s.power == 1 {
                    name.clone()
                } else {
                    format!("{}^{}", name, s.power)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "< {} | {} >", self.names.join(", "), rels.join(", "))
    }
}

fn check_params(alpha: i64, beta: i64) -> Result<(), FpGroupError> {
    if alpha == 1 || beta == 1 {
        return Err(FpGroupError::Domain(format!(
            "G({alpha}, {beta}) is infinite: alpha and beta must differ from 1"
        )));
    }
    Ok(())
}

/// `⟨a, b | a^[a,b] = a^α, b^[b,a] = b^β⟩` as the relators
/// `[a,b]⁻¹ a [a,b] a^{-α}` and `[b,a]⁻¹ b [b,a] b^{-β}`.
pub fn macdonald_presentation(alpha: i64, beta: i64) -> Result<Presentation, FpGroupError> {
    check_params(alpha, beta)?;
    let a = Word::generator(0);
    let b = Word::generator(1);
    let conj_rel = |x: &Word, y: &Word, gen: usize, exp: i64| {
        let c = Word::commutator(x, y);
        c.inverse().mul(x).mul(&c).mul(&Word::power(gen, -exp))
    };
    let r1 = conj_rel(&a, &b, 0, alpha);
    let r2 = conj_rel(&b, &a, 1, beta);
    Presentation::new(&["a", "b"], vec![r1, r2])
}

/// Exponents `(r, s)` with `a^{p^r} = 1 = b^{p^s}` in the Sylow p-subgroup.
pub fn sylow_exponents(alpha: i64, beta: i64, p: u64) -> Result<(u32, u32), FpGroupError> {
    check_params(alpha, beta)?;
    let m = valuation_i128(alpha as i128 - 1, p);
    let n = valuation_i128(beta as i128 - 1, p);
    let (m, n) = match (m, n) {
        (Valuation::Finite(m), Valuation::Finite(n)) if m > 0 && n > 0 => (m, n),
        _ => {
            return Err(FpGroupError::Domain(format!(
                "p = {p} must divide both alpha - 1 and beta - 1; otherwise the Sylow subgroup is cyclic"
            )))
        }
    };
    let bound = |x: i64, v: u32| -> u32 {
        match p {
            2 => 4 * v - 1,
            3 if x.rem_euclid(9) == 7 => 5,
            _ => 4 * v,
        }
    };
    Ok((bound(alpha, m), bound(beta, n)))
}

/// The Macdonald relators plus `a^{p^r}`, `b^{p^s}`.
pub fn sylow_presentation(alpha: i64, beta: i64, p: u64) -> Result<Presentation, FpGroupError> {
    let (r, s) = sylow_exponents(alpha, beta, p)?;
    let mut pres = macdonald_presentation(alpha, beta)?;
    let pow = |e: u32| -> Result<i64, FpGroupError> {
        (p as i64)
            .checked_pow(e)
            .ok_or_else(|| FpGroupError::Domain(format!("{p}^{e} overflows a word exponent")))
    };
    pres.relators.push(Word::power(0, pow(r)?));
    pres.relators.push(Word::power(1, pow(s)?));
    Ok(pres)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Hasselgrove–Leech–Trotter with lookahead when the table fills.
    Hlt,
    /// Felsch: define the first undefined entry, then close all deductions.
    Felsch,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hlt" => Ok(Strategy::Hlt),
            "felsch" => Ok(Strategy::Felsch),
            other => Err(format!(
                "unknown strategy '{other}' (expected hlt or felsch)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_cosets: usize,
    pub strategy: Strategy,
    pub time_budget: Option<Duration>,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_cosets: DEFAULT_MAX_COSETS,
            strategy: Strategy::Hlt,
            time_budget: None,
        }
    }
}

impl EnumerationLimits {
    pub fn with_max_cosets(max_cosets: usize) -> Self {
        EnumerationLimits {
            max_cosets: max_cosets.max(1),
            ..Default::default()
        }
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }
}

/// Counters from one enumeration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    /// Largest number of simultaneously allocated cosets.
    pub high_water: usize,
    /// Total number of coset definitions made.
    pub defined: usize,
}

/// A coset table with cosets numbered from 0 (the subgroup coset).
///
/// Column `2g` is the action of generator `g`, column `2g + 1` that of its
/// inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    generator_count: usize,
    coset_count: usize,
    rows: Vec<u32>,
    complete: bool,
    pub stats: EnumerationStats,
}

pub const UNDEFINED: u32 = u32::MAX;

impl CosetTable {
    pub fn coset_count(&self) -> usize {
        self.coset_count
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn columns(&self) -> usize {
        2 * self.generator_count
    }

    /// Image of `coset` under column `col`, or `None` if undefined.
    pub fn entry(&self, coset: usize, col: usize) -> Option<usize> {
        let v = self.rows[coset * self.columns() + col];
        (v != UNDEFINED).then_some(v as usize)
    }

    /// Image of `start` under `w`; `None` if the trace hits an undefined entry.
    pub fn trace_word(&self, w: &Word, start: usize) -> Option<usize> {
        let mut c = start;
        for s in w.syllables() {
            let col = 2 * s.generator + usize::from(s.power < 0);
            let steps = s.power.unsigned_abs();
            let origin = c;
            let mut done = 0u64;
            while done < steps {
                c = self.entry(c, col)?;
                done += 1;
                if c == origin && done < steps {
                    let rest = (steps - done) % done;
                    for _ in 0..rest {
                        c = self.entry(c, col)?;
                    }
                    break;
                }
            }
        }
        Some(c)
    }

    /// Whether every relator closes at every coset.
    pub fn relators_hold(&self, pres: &Presentation) -> bool {
        (0..self.coset_count).all(|c| {
            pres.relators
                .iter()
                .all(|r| self.trace_word(r, c) == Some(c))
        })
    }

    /// Generator actions as images arrays: `perm[g][c] = c·g`.
    pub fn to_permutations(&self) -> Result<Vec<Vec<u32>>, FpGroupError> {
        if !self.complete {
            return Err(FpGroupError::Incomplete);
        }
        Ok((0..self.generator_count)
            .map(|g| {
                (0..self.coset_count)
                    .map(|c| self.rows[c * self.columns() + 2 * g])
                    .collect()
            })
            .collect())
    }

    /// Tab-separated dump: a header naming the columns, then one line per
    /// coset with its images.
    pub fn write_dump<W: Write>(&self, names: &[String], mut out: W) -> io::Result<()> {
        let mut header = vec!["coset".to_string()];
        for n in names.iter().take(self.generator_count) {
            header.push(n.clone());
            header.push(format!("{n}^-1"));
        }
        writeln!(out, "{}", header.join("\t"))?;
        for c in 0..self.coset_count {
            let mut line = c.to_string();
            for col in 0..self.columns() {
                line.push('\t');
                match self.entry(c, col) {
                    Some(d) => line.push_str(&d.to_string()),
                    None => line.push('-'),
                }
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// A relator (or cyclic conjugate) as runs of `(column, count)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Runs {
    runs: Vec<(u8, u64)>,
    /// Letter offset at which each run starts.
    starts: Vec<u64>,
    total: u64,
}

impl Runs {
    fn new(runs: Vec<(u8, u64)>) -> Runs {
        let mut starts = Vec::with_capacity(runs.len());
        let mut total = 0;
        for &(_, k) in &runs {
            starts.push(total);
            total += k;
        }
        Runs {
            runs,
            starts,
            total,
        }
    }

    fn from_word(w: &Word) -> Runs {
        Runs::new(
            w.syllables()
                .iter()
                .map(|s| {
                    (
                        (2 * s.generator + usize::from(s.power < 0)) as u8,
                        s.power.unsigned_abs(),
                    )
                })
                .collect(),
        )
    }

    fn inverse(&self) -> Runs {
        Runs::new(self.runs.iter().rev().map(|&(c, k)| (c ^ 1, k)).collect())
    }

    /// All distinct cyclic conjugates, grouped by first column. A
    /// single-syllable power has only one.
    fn conjugates(&self, out: &mut [Vec<Runs>]) {
        let runs = &self.runs;
        if runs.is_empty() {
            return;
        }
        let mut push = |r: Runs| {
            let col = r.runs[0].0 as usize;
            if !out[col].contains(&r) {
                out[col].push(r);
            }
        };
        if runs.len() == 1 {
            push(self.clone());
            return;
        }
        for (i, &(col, k)) in runs.iter().enumerate() {
            for j in 0..k {
                // conjugate starting at letter j of run i
                let mut v = Vec::with_capacity(runs.len() + 1);
                v.push((col, k - j));
                v.extend_from_slice(&runs[i + 1..]);
                v.extend_from_slice(&runs[..i]);
                if j > 0 {
                    v.push((col, j));
                }
                push(Runs::new(v));
            }
        }
    }
}

enum ScanOutcome {
    Done,
    Full,
}

struct Enumerator {
    ncols: usize,
    /// Row `c` occupies `table[c*ncols..(c+1)*ncols]`; row 0 is unused and
    /// 0 means undefined.
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    max_cosets: usize,
    queue: Vec<u32>,
    deductions: Vec<(u32, u8)>,
    track_deductions: bool,
    stats: EnumerationStats,
    deadline: Option<Instant>,
    ops: u64,
}

const CHECK_EVERY: u64 = 1 << 16;

impl Enumerator {
    fn new(ncols: usize, max_cosets: usize, deadline: Option<Instant>) -> Self {
        let mut e = Enumerator {
            ncols,
            table: vec![0; 2 * ncols],
            parent: vec![0, 1],
            live: 1,
            max_cosets,
            queue: Vec::new(),
            deductions: Vec::new(),
            track_deductions: false,
            stats: EnumerationStats::default(),
            deadline,
            ops: 0,
        };
        e.stats.high_water = 1;
        e
    }

    #[inline]
    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.ncols + col]
    }

    #[inline]
    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.ncols + col] = d;
    }

    fn allocated(&self) -> usize {
        self.parent.len() - 1
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn out_of_time(&mut self) -> bool {
        self.ops += 1;
        if !self.ops.is_multiple_of(CHECK_EVERY) {
            return false;
        }
        matches!(self.deadline, Some(d) if Instant::now() > d)
    }

    /// Allocates a fresh coset, or `None` if the table is full.
    fn new_coset(&mut self) -> Option<u32> {
        if self.allocated() >= self.max_cosets {
            return None;
        }
        let c = self.parent.len() as u32;
        self.parent.push(c);
        self.table.extend(std::iter::repeat_n(0, self.ncols));
        self.live += 1;
        self.stats.defined += 1;
        self.stats.high_water = self.stats.high_water.max(self.allocated());
        Some(c)
    }

    fn link(&mut self, c: u32, col: usize, d: u32) {
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        if self.track_deductions {
            self.deductions.push((c, col as u8));
        }
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, k: u32, l: u32) {
        let k = self.rep(k);
        let l = self.rep(l);
        if k == l {
            return;
        }
        let (lo, hi) = if k < l { (k, l) } else { (l, k) };
        self.parent[hi as usize] = lo;
        self.live -= 1;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for col in 0..self.ncols {
                let d = self.get(g, col);
                if d == 0 {
                    continue;
                }
                let inv = col ^ 1;
                if self.get(d, inv) == g {
                    self.set(d, inv, 0);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mu_x = self.get(mu, col);
                if mu_x != 0 {
                    self.merge(nu, mu_x);
                } else {
                    let nu_inv = self.get(nu, inv);
                    if nu_inv != 0 {
                        self.merge(mu, nu_inv);
                    } else {
                        self.link(mu, col, nu);
                    }
                }
            }
        }
    }

    /// Scans `rel` at coset `c`. With `fill`, defines cosets to close the
    /// cycle; otherwise only records a deduction or coincidence.
    fn scan(&mut self, c: u32, rel: &Runs, fill: bool) -> ScanOutcome {
        let runs = &rel.runs;
        let nruns = runs.len();
        if nruns == 0 {
            return ScanOutcome::Done;
        }
        // Forward: coset f after the first `fpos` letters, inside run fi at
        // offset fo. Backward: coset b before the last `total - bpos` letters.
        let total = rel.total;
        let mut f = c;
        let mut fi = 0usize;
        let mut fo = 0u64;
        let mut b = c;
        let mut bpos = total;
        let mut backward_done = false;
        loop {
            let mut blocked = false;
            while fi < nruns {
                let (col, k) = runs[fi];
                let col = col as usize;
                let end = k.min(bpos - rel.starts[fi]);
                let origin = f;
                let from = fo;
                while fo < end {
                    let next = self.get(f, col);
                    if next == 0 {
                        blocked = true;
                        break;
                    }
                    f = next;
                    fo += 1;
                    if f == origin && fo < end {
                        let rest = (end - fo) % (fo - from);
                        for _ in 0..rest {
                            f = self.get(f, col);
                        }
                        fo = end;
                    }
                }
                if blocked || rel.starts[fi] + fo == bpos {
                    break;
                }
                fi += 1;
                fo = 0;
            }
            let fpos = if fi < nruns {
                rel.starts[fi] + fo
            } else {
                total
            };
            if !blocked || fpos == bpos {
                if f != b {
                    self.coincidence(f, b);
                }
                return ScanOutcome::Done;
            }
            if !backward_done {
                backward_done = true;
                let mut bi = nruns - 1;
                'back: while bpos > fpos {
                    while rel.starts[bi] >= bpos {
                        bi -= 1;
                    }
                    let inv = (runs[bi].0 as usize) ^ 1;
                    let floor = rel.starts[bi].max(fpos);
                    let origin = b;
                    let from = bpos;
                    while bpos > floor {
                        let next = self.get(b, inv);
                        if next == 0 {
                            break 'back;
                        }
                        b = next;
                        bpos -= 1;
                        if b == origin && bpos > floor {
                            let rest = (bpos - floor) % (from - bpos);
                            for _ in 0..rest {
                                b = self.get(b, inv);
                            }
                            bpos = floor;
                        }
                    }
                }
            }
            let gap = bpos - fpos;
            if gap == 0 {
                if f != b {
                    self.coincidence(f, b);
                }
                return ScanOutcome::Done;
            }
            let col = runs[fi].0 as usize;
            if gap == 1 {
                self.link(f, col, b);
                return ScanOutcome::Done;
            }
            if !fill {
                return ScanOutcome::Done;
            }
            match self.new_coset() {
                Some(d) => {
                    self.link(f, col, d);
                    f = d;
                    fo += 1;
                    if fo == runs[fi].1 {
                        fi += 1;
                        fo = 0;
                    }
                }
                None => return ScanOutcome::Full,
            }
        }
    }

    fn process_deductions(&mut self, conjugates: &[Vec<Runs>]) -> Result<(), ()> {
        while let Some((c, col)) = self.deductions.pop() {
            if !self.is_live(c) {
                continue;
            }
            let col = col as usize;
            let d = self.get(c, col);
            for rel in &conjugates[col] {
                if !self.is_live(c) {
                    break;
                }
                self.scan(c, rel, false);
            }
            if d != 0 && self.is_live(d) {
                for rel in &conjugates[col ^ 1] {
                    if !self.is_live(d) {
                        break;
                    }
                    self.scan(d, rel, false);
                }
            }
            if self.out_of_time() {
                return Err(());
            }
        }
        Ok(())
    }

    /// Renumbers live cosets consecutively, preserving order. Returns the
    /// new number of each old coset (0 for dead ones).
    fn compact(&mut self) -> Vec<u32> {
        let n = self.parent.len();
        let mut map = vec![0u32; n];
        let mut next = 1u32;
        for c in 1..n {
            if self.parent[c] == c as u32 {
                map[c] = next;
                next += 1;
            }
        }
        let ncols = self.ncols;
        let mut table = vec![0u32; next as usize * ncols];
        for c in 1..n {
            let nc = map[c];
            if nc == 0 {
                continue;
            }
            for col in 0..ncols {
                let d = self.table[c * ncols + col];
                if d != 0 {
                    let rd = self.rep(d);
                    table[nc as usize * ncols + col] = map[rd as usize];
                }
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.live = next as usize - 1;
        map
    }

    fn lookahead(&mut self, relators: &[Runs]) -> Result<(), ()> {
        let mut c = 1u32;
        while (c as usize) < self.parent.len() {
            if self.is_live(c) {
                for r in relators {
                    if !self.is_live(c) {
                        break;
                    }
                    self.scan(c, r, false);
                }
                if self.out_of_time() {
                    return Err(());
                }
            }
            c += 1;
        }
        Ok(())
    }

    fn first_live_at_or_after(&self, c: u32) -> u32 {
        let mut c = c;
        while (c as usize) < self.parent.len() && !self.is_live(c) {
            c += 1;
        }
        c
    }

    fn resource_error(&self, what: &str) -> FpGroupError {
        FpGroupError::ResourceExceeded {
            limit: what.to_string(),
            cosets: self.allocated(),
            high_water: self.stats.high_water,
        }
    }

    fn run_hlt(&mut self, relators: &[Runs], subgroup: &[Runs]) -> Result<(), FpGroupError> {
        for w in subgroup {
            while let ScanOutcome::Full = self.scan(1, w, true) {
                self.make_room(relators)?;
            }
        }
        let mut c = 1u32;
        'cosets: while (c as usize) < self.parent.len() {
            if !self.is_live(c) {
                c += 1;
                continue;
            }
            let mut ri = 0;
            while ri < relators.len() {
                if !self.is_live(c) {
                    c += 1;
                    continue 'cosets;
                }
                match self.scan(c, &relators[ri], true) {
                    ScanOutcome::Done => ri += 1,
                    ScanOutcome::Full => {
                        let map = self.make_room(relators)?;
                        c = self.remap_pointer(c, &map);
                        continue 'cosets;
                    }
                }
                if self.out_of_time() {
                    return Err(self.resource_error("time budget"));
                }
            }
            for col in 0..self.ncols {
                if !self.is_live(c) {
                    break;
                }
                if self.get(c, col) == 0 {
                    match self.new_coset() {
                        Some(d) => self.link(c, col, d),
                        None => {
                            let map = self.make_room(relators)?;
                            c = self.remap_pointer(c, &map);
                            continue 'cosets;
                        }
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Maps the HLT pointer through a compaction. A dead pointer coset moves
    /// to the next live one, which has not been processed yet.
    fn remap_pointer(&self, c: u32, map: &[u32]) -> u32 {
        let mut c = c as usize;
        while c < map.len() && map[c] == 0 {
            c += 1;
        }
        if c < map.len() {
            map[c]
        } else {
            self.parent.len() as u32
        }
    }

    fn make_room(&mut self, relators: &[Runs]) -> Result<Vec<u32>, FpGroupError> {
        if self.lookahead(relators).is_err() {
            return Err(self.resource_error("time budget"));
        }
        let map = self.compact();
        // require some headroom to avoid thrashing
        if self.allocated() + self.max_cosets / 64 + 1 > self.max_cosets {
            return Err(self.resource_error(&format!("coset limit {}", self.max_cosets)));
        }
        Ok(map)
    }

    fn run_felsch(
        &mut self,
        conjugates: &[Vec<Runs>],
        subgroup: &[Runs],
    ) -> Result<(), FpGroupError> {
        self.track_deductions = true;
        for w in subgroup {
            if let ScanOutcome::Full = self.scan(1, w, true) {
                return Err(self.resource_error(&format!("coset limit {}", self.max_cosets)));
            }
        }
        if self.process_deductions(conjugates).is_err() {
            return Err(self.resource_error("time budget"));
        }
        let mut c = 1u32;
        let mut col = 0usize;
        loop {
            c = self.first_live_at_or_after(c);
            if c as usize >= self.parent.len() {
                break;
            }
            while col < self.ncols && self.get(c, col) != 0 {
                col += 1;
            }
            if col == self.ncols {
                c += 1;
                col = 0;
                continue;
            }
            let d = match self.new_coset() {
                Some(d) => d,
                None => {
                    let map = self.compact();
                    c = self.remap_pointer(c, &map);
                    col = 0;
                    if self.allocated() >= self.max_cosets {
                        return Err(
                            self.resource_error(&format!("coset limit {}", self.max_cosets))
                        );
                    }
                    continue;
                }
            };
            self.link(c, col, d);
            if self.process_deductions(conjugates).is_err() {
                return Err(self.resource_error("time budget"));
            }
        }
        Ok(())
    }

    /// Standardizes the live table into a [`CosetTable`] (breadth-first
    /// numbering from the subgroup coset).
    fn finish(mut self, generator_count: usize) -> CosetTable {
        self.compact();
        let n = self.parent.len() - 1;
        let ncols = self.ncols;
        let mut order = Vec::with_capacity(n);
        let mut newnum = vec![UNDEFINED; n + 1];
        newnum[1] = 0;
        order.push(1u32);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for col in 0..ncols {
                let d = self.get(c, col);
                if d != 0 && newnum[d as usize] == UNDEFINED {
                    newnum[d as usize] = order.len() as u32;
                    order.push(d);
                }
            }
        }
        let count = order.len();
        let mut rows = vec![UNDEFINED; count * ncols];
        let mut complete = true;
        for (new_c, &old_c) in order.iter().enumerate() {
            for col in 0..ncols {
                let d = self.get(old_c, col);
                if d == 0 {
                    complete = false;
                } else {
                    rows[new_c * ncols + col] = newnum[d as usize];
                }
            }
        }
        CosetTable {
            generator_count,
            coset_count: count,
            rows,
            complete,
            stats: self.stats,
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` (the trivial
/// subgroup when empty) and returns the standardized, complete coset table.
pub fn todd_coxeter(
    pres: &Presentation,
    subgroup: &[Word],
    limits: &EnumerationLimits,
) -> Result<CosetTable, FpGroupError> {
    pres.check_word_range(subgroup)?;
    let ncols = 2 * pres.generator_count;
    if ncols == 0 {
        return Ok(CosetTable {
            generator_count: 0,
            coset_count: 1,
            rows: Vec::new(),
            complete: true,
            stats: EnumerationStats {
                high_water: 1,
                defined: 0,
            },
        });
    }
    let mut relators: Vec<Runs> = pres
        .relators
        .iter()
        .map(|r| r.cyclically_reduced())
        .filter(|r| !r.is_empty())
        .map(|r| Runs::from_word(&r))
        .collect();
    // shorter relators first: they close cycles with fewer definitions
    relators.sort_by_key(|r| r.total);
    let subgroup: Vec<Runs> = subgroup
        .iter()
        .filter(|w| !w.is_empty())
        .map(Runs::from_word)
        .collect();
    let deadline = limits.time_budget.map(|t| Instant::now() + t);
    let mut en = Enumerator::new(ncols, limits.max_cosets.max(1), deadline);
    match limits.strategy {
        Strategy::Hlt => en.run_hlt(&relators, &subgroup)?,
        Strategy::Felsch => {
            let mut conjugates = vec![Vec::new(); ncols];
            for r in &relators {
                r.conjugates(&mut conjugates);
                r.inverse().conjugates(&mut conjugates);
            }
            en.run_felsch(&conjugates, &subgroup)?
        }
    }
    let table = en.finish(pres.generator_count);
    debug_assert!(table.complete);
    Ok(table)
}

/// Integer exponent helper used by callers that build power words from big
/// exponents already reduced modulo an element order.
pub fn power_word(g: usize, k: &BigInt) -> Result<Word, FpGroupError> {
    let k: i64 = k
        .try_into()
        .map_err(|_| FpGroupError::Domain(format!("exponent {k} does not fit a word")))?;
    Ok(Word::power(g, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits(strategy: Strategy) -> EnumerationLimits {
        EnumerationLimits::with_max_cosets(200_000).strategy(strategy)
    }

    fn order_of(pres: &Presentation, strategy: Strategy) -> usize {
        let t = todd_coxeter(pres, &[], &limits(strategy)).unwrap();
        assert!(t.is_complete());
        assert!(t.relators_hold(pres));
        t.coset_count()
    }

    #[test]
    fn word_reduction_and_inverse() {
        let w = Word::from_letters(&[(0, 1), (1, 1), (1, -1), (0, 1)]);
        assert_eq!(w, Word::power(0, 2));
        let c = Word::commutator(&Word::generator(0), &Word::generator(1));
        assert_eq!(c.len(), 4);
        assert!(c.mul(&c.inverse()).is_empty());
        assert_eq!(Word::power(1, -3).letters().count(), 3);
        assert_eq!(c.exponent_sum(0), 0);
    }

    #[test]
    fn cyclic_reduction() {
        let w = Word::from_letters(&[(1, -1), (0, 1), (1, 1)]);
        assert_eq!(w.cyclically_reduced(), Word::generator(0));
        let w = Word::from_letters(&[(0, 1), (1, 1), (0, 1)]);
        let r = w.cyclically_reduced();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn macdonald_relator_shapes() {
        let p = macdonald_presentation(3, 3).unwrap();
        assert_eq!(p.relators.len(), 2);
        // [a,b]^-1 a [a,b] a^-3 reduces to b^-1 a^-1 b a b^-1 a b a^-3
        assert_eq!(p.relators[0].len(), 7 + 3);
        assert_eq!(p.relators[1].len(), 7 + 3);
        let p = macdonald_presentation(-2, 7).unwrap();
        let last = *p.relators[0].syllables().last().unwrap();
        assert_eq!(
            last,
            Syllable {
                generator: 0,
                power: 2
            }
        );
        let p = macdonald_presentation(7, 34).unwrap();
        assert_eq!(p.relators[0].syllables().last().unwrap().power, -7);
        assert_eq!(p.relators[1].syllables().last().unwrap().power, -34);
        assert!(macdonald_presentation(1, 5).is_err());
    }

    #[test]
    fn sylow_power_relators() {
        let p = sylow_presentation(3, 3, 2).unwrap();
        assert_eq!(p.relators[2], Word::power(0, 8));
        assert_eq!(p.relators[3], Word::power(1, 8));
        let p = sylow_presentation(7, 34, 3).unwrap();
        assert_eq!(p.relators[2], Word::power(0, 243));
        assert_eq!(p.relators[3], Word::power(1, 243));
        let p = sylow_presentation(26, 6, 5).unwrap();
        assert_eq!(p.relators[2], Word::power(0, 390_625));
        assert_eq!(p.relators[3], Word::power(1, 625));
        // 7 ≡ -2 (mod 9) and 13 ≡ 4 (mod 9)
        assert_eq!(sylow_exponents(7, 13, 3).unwrap(), (5, 4));
        assert_eq!(sylow_exponents(-2, 4, 3).unwrap(), (5, 4));
        assert!(sylow_presentation(4, 6, 5).is_err());
    }

    #[test]
    fn cyclic_group() {
        let p = Presentation::new(&["a"], vec![Word::power(0, 6)]).unwrap();
        for s in [Strategy::Hlt, Strategy::Felsch] {
            let t = todd_coxeter(&p, &[], &limits(s)).unwrap();
            assert_eq!(t.coset_count(), 6);
            let perms = t.to_permutations().unwrap();
            // a single 6-cycle
            let mut x = 0usize;
            for i in 1..=6 {
                x = perms[0][x] as usize;
                assert_eq!(x == 0, i == 6);
            }
        }
    }

    #[test]
    fn symmetric_group_s3() {
        let p = Presentation::new(
            &["a", "b"],
            vec![
                Word::power(0, 2),
                Word::power(1, 2),
                Word::from_letters(&[(0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 1)]),
            ],
        )
        .unwrap();
        assert_eq!(order_of(&p, Strategy::Hlt), 6);
        assert_eq!(order_of(&p, Strategy::Felsch), 6);
    }

    #[test]
    fn subgroup_cosets() {
        // S3 over <a>: index 3
        let p = Presentation::new(
            &["a", "b"],
            vec![
                Word::power(0, 2),
                Word::power(1, 3),
                Word::from_letters(&[(0, 1), (1, 1), (0, 1), (1, 1)]),
            ],
        )
        .unwrap();
        for s in [Strategy::Hlt, Strategy::Felsch] {
            let t = todd_coxeter(&p, &[Word::generator(0)], &limits(s)).unwrap();
            assert_eq!(t.coset_count(), 3);
            assert_eq!(t.trace_word(&Word::generator(0), 0), Some(0));
        }
    }

    #[test]
    fn quaternion_sylow_of_g33() {
        let p = sylow_presentation(3, 3, 2).unwrap();
        assert_eq!(order_of(&p, Strategy::Hlt), 16);
        assert_eq!(order_of(&p, Strategy::Felsch), 16);
    }

    #[test]
    fn trace_word_basics() {
        let p = sylow_presentation(3, 3, 2).unwrap();
        let t = todd_coxeter(&p, &[], &limits(Strategy::Hlt)).unwrap();
        for c in 0..t.coset_count() {
            assert_eq!(t.trace_word(&Word::identity(), c), Some(c));
            assert_eq!(t.trace_word(&Word::power(0, 4), c), Some(c));
            assert_eq!(t.trace_word(&Word::power(0, 4000), c), Some(c));
        }
        for r in &p.relators {
            assert_eq!(t.trace_word(r, 0), Some(0));
        }
    }

    #[test]
    fn standardized_numbering_is_breadth_first() {
        let p = sylow_presentation(3, 3, 2).unwrap();
        let t1 = todd_coxeter(&p, &[], &limits(Strategy::Hlt)).unwrap();
        let t2 = todd_coxeter(&p, &[], &limits(Strategy::Felsch)).unwrap();
        assert_eq!(t1.rows, t2.rows);
        assert_eq!(t1.entry(0, 0), Some(1));
    }

    #[test]
    fn coset_cap_is_reported() {
        let p = sylow_presentation(3, 3, 2).unwrap();
        let err = todd_coxeter(&p, &[], &EnumerationLimits::with_max_cosets(5)).unwrap_err();
        assert!(matches!(err, FpGroupError::ResourceExceeded { .. }));
    }

    #[test]
    fn dump_format() {
        let p = Presentation::new(&["a"], vec![Word::power(0, 3)]).unwrap();
        let t = todd_coxeter(&p, &[], &limits(Strategy::Hlt)).unwrap();
        let mut buf = Vec::new();
        t.write_dump(&p.names, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "coset\ta\ta^-1\n0\t1\t2\n1\t2\t0\n2\t0\t1\n");
    }
}
