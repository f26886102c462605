//! Admissible, light and heavy paths and spiders, the threshold function
//! `f(j, L)`, and the extraction procedures that go with them.
//!
//! A path of length `j >= 2` is admissible when each proper subpath of
//! length `l` is light, meaning it is admissible and its endpoint pair
//! carries fewer than `threshold(l)` admissible `l`-paths. A pair with at
//! least `threshold(j)` admissible `j`-paths is heavy. Every edge is light.
//!
//! The exact thresholds `f(j, L)` grow so fast that nothing on a desk-sized
//! graph is ever heavy, so a [`ThresholdConfig`] may carry an override table
//! instead.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rational::Rational;

/// Path and spider enumeration stops with [`Error::Budget`] after this many
/// extension steps.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

/// Exact thresholds wider than this many bits are reported as [`Threshold::Huge`].
const HUGE_BITS: u64 = 4096;

/// A count threshold. `Huge` stands for an exact value too large to be
/// worth materializing; it exceeds every count this crate can produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    Finite(BigUint),
    Huge,
    Infinite,
}

impl Threshold {
    pub fn finite(value: u64) -> Self {
        Threshold::Finite(BigUint::from(value))
    }

    /// Whether `count < self`.
    pub fn exceeds(&self, count: u64) -> bool {
        match self {
            Threshold::Finite(t) => BigUint::from(count) < *t,
            Threshold::Huge | Threshold::Infinite => true,
        }
    }

    /// Whether `count <= self`.
    pub fn admits(&self, count: u64) -> bool {
        match self {
            Threshold::Finite(t) => BigUint::from(count) <= *t,
            Threshold::Huge | Threshold::Infinite => true,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Threshold::Finite(_) => 0,
            Threshold::Huge => 1,
            Threshold::Infinite => 2,
        }
    }

    fn times(&self, other: &Threshold) -> Threshold {
        match (self, other) {
            (Threshold::Finite(a), Threshold::Finite(b)) => Threshold::Finite(a * b),
            (a, b) if a.rank().max(b.rank()) == 2 => Threshold::Infinite,
            _ => Threshold::Huge,
        }
    }

    /// `ceil(size / (j² · self²))`, the packing guarantee for a family of
    /// `size` objects of total length `j` when `self` bounds shorter counts.
    pub fn packing_bound(&self, size: u64, j: usize) -> u64 {
        match self {
            Threshold::Finite(t) => {
                let denom = BigUint::from(j * j) * t * t;
                let size = BigUint::from(size);
                let q = (&size + &denom - BigUint::one()) / &denom;
                q.to_u64().expect("quotient at most size")
            }
            _ => size.min(1),
        }
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match (self, other) {
            (Threshold::Finite(a), Threshold::Finite(b)) => Some(a.cmp(b)),
            (Threshold::Finite(_), _) | (_, Threshold::Finite(_)) => {
                Some(self.rank().cmp(&other.rank()))
            }
            (Threshold::Huge, Threshold::Huge) => None,
            _ => Some(self.rank().cmp(&other.rank())),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(t) => write!(f, "{t}"),
            Threshold::Huge => write!(f, ">2^{HUGE_BITS}"),
            Threshold::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" => Ok(Threshold::Infinite),
            t => t
                .parse::<BigUint>()
                .map(Threshold::Finite)
                .map_err(|_| Error::Threshold(format!("bad threshold {s:?}"))),
        }
    }
}

/// Parameters of `f(j, L)` and an optional override table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdConfig {
    l: BigUint,
    k: BigUint,
    s: u32,
    overrides: Option<BTreeMap<usize, Threshold>>,
}

impl ThresholdConfig {
    /// Thresholds `f(j, L)` with the given `L >= 1`, `K >= 1`, `s >= 2`.
    pub fn exact(l: impl Into<BigUint>, k: impl Into<BigUint>, s: u32) -> Result<Self> {
        let (l, k) = (l.into(), k.into());
        if l.is_zero() || k.is_zero() || s < 2 {
            return Err(Error::Parameter(format!(
                "need L >= 1, K >= 1 and s >= 2, got L={l}, K={k}, s={s}"
            )));
        }
        Ok(ThresholdConfig {
            l,
            k,
            s,
            overrides: None,
        })
    }

    /// Replaces the thresholds for `j >= 2` by `table`. Values must be
    /// positive and nondecreasing in `j`. An entry for `j = 1` only feeds
    /// the packing bounds at `j = 2` and defaults to 1.
    pub fn with_overrides(mut self, table: BTreeMap<usize, Threshold>) -> Result<Self> {
        let mut previous: Option<&Threshold> = None;
        for (&j, t) in &table {
            if j == 0 {
                return Err(Error::Threshold("lengths start at 1".into()));
            }
            if matches!(t, Threshold::Finite(v) if v.is_zero()) {
                return Err(Error::Threshold(format!("threshold for j={j} must be positive")));
            }
            if let Some(p) = previous {
                if !matches!(p.partial_cmp(t), Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)) {
                    return Err(Error::Threshold(format!(
                        "thresholds must be nondecreasing, j={j} has {t} after {p}"
                    )));
                }
            }
            previous = Some(t);
        }
        self.overrides = Some(table);
        Ok(self)
    }

    /// Same override value for every `j` in `1..=j_max`.
    pub fn with_uniform_override(self, j_max: usize, value: Threshold) -> Result<Self> {
        self.with_overrides((1..=j_max).map(|j| (j, value.clone())).collect())
    }

    pub fn l(&self) -> &BigUint {
        &self.l
    }

    pub fn k(&self) -> &BigUint {
        &self.k
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_override(&self) -> bool {
        self.overrides.is_some()
    }

    /// `threshold(j)` for `j` in `1..=j_max`, at index `j`; index 0 is unused.
    pub fn thresholds(&self, j_max: usize) -> Result<Vec<Threshold>> {
        match &self.overrides {
            Some(table) => {
                let mut out = vec![Threshold::Infinite, table.get(&1).cloned().unwrap_or(Threshold::finite(1))];
                for j in 2..=j_max {
                    let t = table
                        .get(&j)
                        .ok_or_else(|| Error::Threshold(format!("no override threshold for j={j}")))?;
                    out.push(t.clone());
                }
                out.truncate(j_max + 1);
                Ok(out)
            }
            None => {
                let mut out = vec![Threshold::Infinite];
                let mut previous = BigUint::zero();
                let mut huge = false;
                for j in 1..=j_max {
                    if !huge && j >= 2 && f_bits_lower_bound(&previous, self) > HUGE_BITS {
                        huge = true;
                    }
                    if huge {
                        out.push(Threshold::Huge);
                        continue;
                    }
                    let f = if j == 1 {
                        self.l.clone()
                    } else {
                        f_step(j, &previous, self)
                    };
                    if f.bits() > HUGE_BITS {
                        huge = true;
                        out.push(Threshold::Huge);
                    } else {
                        out.push(Threshold::Finite(f.clone()));
                        previous = f;
                    }
                }
                Ok(out)
            }
        }
    }
}

/// `f(j, L)` from `f(j - 1, L)` by the defining recurrence.
fn f_step(j: usize, previous: &BigUint, cfg: &ThresholdConfig) -> BigUint {
    let bracket = BigUint::from(2u32) * Pow::pow(&cfg.k, j as u32) * &cfg.l * previous * previous;
    BigUint::from(10 * (j as u64).pow(4)) * Pow::pow(bracket, cfg.s + 3)
}

/// A cheap lower bound on the bit length of `f(j, L)`.
fn f_bits_lower_bound(previous: &BigUint, cfg: &ThresholdConfig) -> u64 {
    // The bracket is at least f(j-1)², which has at least 2·bits - 1 bits.
    let bracket_bits = (2 * previous.bits()).saturating_sub(1).max(1);
    (cfg.s as u64 + 3) * (bracket_bits - 1) + 1
}

/// Exact `f(j, L)`: `f(1, L) = L`, `f(j, L) = 10 j⁴ [2 K^j L f(j-1, L)²]^(s+3)`.
pub fn compute_f(j: usize, cfg: &ThresholdConfig) -> Result<BigUint> {
    Ok(f_sequence(j, cfg)?.pop().expect("j >= 1"))
}

/// `f(1, L), ..., f(j_max, L)`.
pub fn f_sequence(j_max: usize, cfg: &ThresholdConfig) -> Result<Vec<BigUint>> {
    if j_max == 0 {
        return Err(Error::Parameter("f is defined for j >= 1".into()));
    }
    let mut out = vec![cfg.l.clone()];
    for j in 2..=j_max {
        let next = f_step(j, out.last().expect("nonempty"), cfg);
        out.push(next);
    }
    Ok(out)
}

/// `D = 2 K^j L f(j-1, L)²`, `M = D^(s+1)` and `N = M / D = D^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedConstants {
    pub j: usize,
    pub d: BigUint,
    pub m: BigUint,
    pub n: BigUint,
}

impl DerivedConstants {
    /// `10 j⁴ D² M`, which should equal `f(j, L)`.
    pub fn f_from_constants(&self) -> BigUint {
        BigUint::from(10 * (self.j as u64).pow(4)) * &self.d * &self.d * &self.m
    }
}

/// Constants for `j >= 2`, given `f(j - 1, L)`.
pub fn derived_constants(j: usize, f_previous: &BigUint, cfg: &ThresholdConfig) -> Result<DerivedConstants> {
    if j < 2 {
        return Err(Error::Parameter("derived constants need j >= 2".into()));
    }
    let d = BigUint::from(2u32) * Pow::pow(&cfg.k, j as u32) * &cfg.l * f_previous * f_previous;
    let n = Pow::pow(&d, cfg.s);
    let m = &n * &d;
    Ok(DerivedConstants { j, d, m, n })
}

/// Whether `f(j, L) / (j² f(j-1, L)²) >= max{2L², f(j-1, L)}`, decided
/// exactly. `f_values` holds `f(1, L), ..., f(j, L)`.
pub fn check_f_gap_with(j: usize, f_values: &[BigUint], cfg: &ThresholdConfig) -> Result<bool> {
    if j < 2 || f_values.len() < j {
        return Err(Error::Parameter(format!("gap check needs 2 <= j <= {}", f_values.len())));
    }
    let (f, prev) = (&f_values[j - 1], &f_values[j - 2]);
    let two_l_sq = BigUint::from(2u32) * &cfg.l * &cfg.l;
    let max = if two_l_sq > *prev { &two_l_sq } else { prev };
    let j_sq = BigUint::from(j * j);
    // Compare f with j² prev² max; bit lengths settle it unless they are close.
    let rhs_bits_upper = j_sq.bits() + 2 * prev.bits() + max.bits();
    if f.bits() > rhs_bits_upper {
        return Ok(true);
    }
    Ok(*f >= j_sq * prev * prev * max)
}

pub fn check_f_gap(j: usize, cfg: &ThresholdConfig) -> Result<bool> {
    let values = f_sequence(j, cfg)?;
    check_f_gap_with(j, &values, cfg)
}

/// A positive integer stored as its prime factorisation.
///
/// Every quantity in the recurrence for `f` is a product of powers of `2`,
/// `10`, `j`, `K` and `L`, so exponent vectors settle equality and
/// divisibility at once where the expanded values run to millions of bits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factored(BTreeMap<u64, u64>);

/// [`Factored::of`] factors by trial division and refuses larger inputs.
const FACTOR_LIMIT: u64 = 1 << 40;

impl Factored {
    pub fn one() -> Self {
        Factored::default()
    }

    /// Factors `1 <= n < 2^40`.
    pub fn of(n: u64) -> Result<Self> {
        if n == 0 || n >= FACTOR_LIMIT {
            return Err(Error::Parameter(format!("cannot factor {n}")));
        }
        let mut rest = n;
        let mut out = BTreeMap::new();
        let mut p = 2;
        while p * p <= rest {
            while rest % p == 0 {
                *out.entry(p).or_insert(0) += 1;
                rest /= p;
            }
            p += 1;
        }
        if rest > 1 {
            *out.entry(rest).or_insert(0) += 1;
        }
        Ok(Factored(out))
    }

    fn of_big(n: &BigUint) -> Result<Self> {
        let small = n
            .to_u64()
            .ok_or_else(|| Error::Parameter(format!("cannot factor {n}")))?;
        Self::of(small)
    }

    pub fn times(&self, other: &Factored) -> Result<Self> {
        let mut out = self.0.clone();
        for (&p, &e) in &other.0 {
            let slot = out.entry(p).or_insert(0);
            *slot = slot.checked_add(e).ok_or_else(overflow)?;
        }
        Ok(Factored(out))
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (&p, &x) in &self.0 {
            out.insert(p, x.checked_mul(e).ok_or_else(overflow)?);
        }
        Ok(Factored(out))
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Factored) -> bool {
        self.0
            .iter()
            .all(|(p, &e)| other.0.get(p).is_some_and(|&x| x >= e))
    }

    /// Prime to exponent.
    pub fn exponents(&self) -> &BTreeMap<u64, u64> {
        &self.0
    }

    pub fn to_biguint(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, (&p, &e)| {
            acc * Pow::pow(BigUint::from(p), BigUint::from(e))
        })
    }
}

fn overflow() -> Error {
    Error::Parameter("exponent overflow".into())
}

/// `f(1, L), ..., f(j_max, L)` in factored form.
pub fn f_factored_sequence(j_max: usize, cfg: &ThresholdConfig) -> Result<Vec<Factored>> {
    if j_max == 0 {
        return Err(Error::Parameter("f is defined for j >= 1".into()));
    }
    let l = Factored::of_big(&cfg.l)?;
    let k = Factored::of_big(&cfg.k)?;
    let mut out = vec![l.clone()];
    for j in 2..=j_max {
        let prev = out.last().expect("nonempty");
        let bracket = Factored::of(2)?
            .times(&k.pow(j as u64)?)?
            .times(&l)?
            .times(&prev.pow(2)?)?;
        let next = Factored::of(10 * (j as u64).pow(4))?.times(&bracket.pow(cfg.s as u64 + 3)?)?;
        out.push(next);
    }
    Ok(out)
}

/// [`DerivedConstants`] in factored form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredConstants {
    pub j: usize,
    pub d: Factored,
    pub m: Factored,
    pub n: Factored,
}

impl FactoredConstants {
    /// `10 j⁴ D² M`.
    pub fn f_from_constants(&self) -> Result<Factored> {
        Factored::of(10 * (self.j as u64).pow(4))?
            .times(&self.d.pow(2)?)?
            .times(&self.m)
    }
}

pub fn derived_constants_factored(
    j: usize,
    f_previous: &Factored,
    cfg: &ThresholdConfig,
) -> Result<FactoredConstants> {
    if j < 2 {
        return Err(Error::Parameter("derived constants need j >= 2".into()));
    }
    let d = Factored::of(2)?
        .times(&Factored::of_big(&cfg.k)?.pow(j as u64)?)?
        .times(&Factored::of_big(&cfg.l)?)?
        .times(&f_previous.pow(2)?)?;
    let n = d.pow(cfg.s as u64)?;
    let m = n.times(&d)?;
    Ok(FactoredConstants { j, d, m, n })
}

/// The gap inequality on factored values. It holds whenever
/// `j² f(j-1)² · 2L²` and `j² f(j-1)³` both divide `f(j)`; otherwise the
/// expanded integers are compared.
pub fn check_f_gap_factored(j: usize, f_values: &[Factored], cfg: &ThresholdConfig) -> Result<bool> {
    if j < 2 || f_values.len() < j {
        return Err(Error::Parameter(format!("gap check needs 2 <= j <= {}", f_values.len())));
    }
    let (f, prev) = (&f_values[j - 1], &f_values[j - 2]);
    let j_sq = Factored::of((j * j) as u64)?;
    let l = Factored::of_big(&cfg.l)?;
    let with_l = j_sq.times(&prev.pow(2)?)?.times(&Factored::of(2)?)?.times(&l.pow(2)?)?;
    let with_prev = j_sq.times(&prev.pow(3)?)?;
    if with_l.divides(f) && with_prev.divides(f) {
        return Ok(true);
    }
    let expanded: Vec<BigUint> = f_values[..j].iter().map(Factored::to_biguint).collect();
    check_f_gap_with(j, &expanded, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Light,
    Heavy,
    None,
}

/// One `(pair, j)` cell of a [`PathClassification`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathEntry {
    pub pair: [usize; 2],
    pub j: usize,
    pub count: u64,
    pub status: Status,
}

/// Admissible-path counts for every unordered pair and every length up to
/// `j_max`.
#[derive(Clone, Debug)]
pub struct PathClassification {
    graph: Graph,
    j_max: usize,
    thresholds: Vec<Threshold>,
    /// `counts[j][(x, y)]` with `x < y`.
    counts: Vec<HashMap<(usize, usize), u64>>,
}

fn key(x: usize, y: usize) -> (usize, usize) {
    (x.min(y), x.max(y))
}

struct Budget(u64);

impl Budget {
    fn spend(&mut self) -> Result<()> {
        self.0 += 1;
        if self.0 > ENUMERATION_BUDGET {
            return Err(Error::Budget(format!(
                "more than {ENUMERATION_BUDGET} enumeration steps"
            )));
        }
        Ok(())
    }
}

/// Classifies all pairs at lengths `1..=j_max`, shortest first.
pub fn classify_paths(g: &Graph, j_max: usize, cfg: &ThresholdConfig) -> Result<PathClassification> {
    if !(1..=6).contains(&j_max) {
        return Err(Error::Parameter(format!("j_max must be in 1..=6, got {j_max}")));
    }
    let mut pc = PathClassification {
        graph: g.clone(),
        j_max: 0,
        thresholds: cfg.thresholds(j_max)?,
        counts: vec![HashMap::new()],
    };
    let mut budget = Budget(0);
    for j in 1..=j_max {
        let mut counts = HashMap::new();
        for start in g.vertices().iter() {
            let mut path = vec![start];
            pc.walk(j, &mut path, &mut budget, &mut |p| {
                if p[0] < p[j] {
                    *counts.entry((p[0], p[j])).or_insert(0u64) += 1;
                }
            })?;
        }
        pc.counts.push(counts);
        pc.j_max = j;
    }
    Ok(pc)
}

impl PathClassification {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn threshold(&self, j: usize) -> &Threshold {
        &self.thresholds[j]
    }

    /// Number of admissible `j`-paths with ends `x` and `y`.
    pub fn count(&self, x: usize, y: usize, j: usize) -> u64 {
        self.counts
            .get(j)
            .and_then(|c| c.get(&key(x, y)))
            .copied()
            .unwrap_or(0)
    }

    pub fn status(&self, x: usize, y: usize, j: usize) -> Status {
        match self.count(x, y, j) {
            0 => Status::None,
            _ if j == 1 => Status::Light,
            c if self.thresholds[j].exceeds(c) => Status::Light,
            _ => Status::Heavy,
        }
    }

    /// Whether the pair carries fewer than `threshold(len)` admissible paths
    /// of length `len`; edges always qualify.
    fn pair_light(&self, x: usize, y: usize, len: usize) -> bool {
        len == 1 || self.thresholds[len].exceeds(self.count(x, y, len))
    }

    /// Whether the newest vertex of `path` closes only light proper
    /// subpaths. `full` is the length the path is being grown to.
    fn last_segments_light(&self, path: &[usize], full: usize) -> bool {
        let m = path.len() - 1;
        (0..m).all(|i| {
            let len = m - i;
            len == full || self.pair_light(path[i], path[m], len)
        })
    }

    /// Extends `path` to simple paths of length `j` whose proper subpaths are
    /// all light, calling `found` on each.
    fn walk(
        &self,
        j: usize,
        path: &mut Vec<usize>,
        budget: &mut Budget,
        found: &mut dyn FnMut(&[usize]),
    ) -> Result<()> {
        if path.len() == j + 1 {
            found(path);
            return Ok(());
        }
        let used: VertexSet = path.iter().copied().collect();
        let last = *path.last().expect("nonempty");
        for v in self.graph.neighbors(last).difference(used).iter() {
            budget.spend()?;
            path.push(v);
            if self.last_segments_light(path, j) {
                self.walk(j, path, budget, found)?;
            }
            path.pop();
        }
        Ok(())
    }

    /// Whether `path` (a vertex sequence) is an admissible path of `G`.
    pub fn is_admissible(&self, path: &[usize]) -> bool {
        let j = path.len().saturating_sub(1);
        if j == 0 || j > self.j_max || !self.is_simple_path(path) {
            return false;
        }
        (1..path.len()).all(|m| self.last_segments_light(&path[..=m], j))
    }

    /// Admissible and with a light endpoint pair.
    pub fn is_light(&self, path: &[usize]) -> bool {
        let j = path.len().saturating_sub(1);
        self.is_admissible(path) && self.pair_light(path[0], path[j], j)
    }

    fn is_simple_path(&self, path: &[usize]) -> bool {
        let set: VertexSet = path.iter().copied().collect();
        set.len() == path.len()
            && path.iter().all(|&v| v < self.graph.order())
            && path.windows(2).all(|w| self.graph.has_edge(w[0], w[1]))
    }

    /// All admissible `j`-paths from `x` to `y`, oriented from `x`.
    pub fn admissible_paths(&self, x: usize, y: usize, j: usize) -> Result<Vec<Vec<usize>>> {
        self.check_length(j)?;
        let mut out = Vec::new();
        if x == y {
            return Ok(out);
        }
        let mut path = vec![x];
        self.walk(j, &mut path, &mut Budget(0), &mut |p| {
            if p[j] == y {
                out.push(p.to_vec());
            }
        })?;
        Ok(out)
    }

    /// All admissible `j`-paths starting at `x`, oriented from `x`.
    pub fn admissible_paths_from(&self, x: usize, j: usize) -> Result<Vec<Vec<usize>>> {
        self.check_length(j)?;
        let mut out = Vec::new();
        let mut path = vec![x];
        self.walk(j, &mut path, &mut Budget(0), &mut |p| out.push(p.to_vec()))?;
        Ok(out)
    }

    fn check_length(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.j_max {
            return Err(Error::MissingCoverage(j));
        }
        Ok(())
    }

    /// Every pair with at least one admissible path, by length then pair.
    pub fn entries(&self) -> Vec<PathEntry> {
        let mut out = Vec::new();
        for j in 1..=self.j_max {
            let mut pairs: Vec<_> = self.counts[j].iter().collect();
            pairs.sort();
            for (&(x, y), &count) in pairs {
                out.push(PathEntry {
                    pair: [x, y],
                    j,
                    count,
                    status: self.status(x, y, j),
                });
            }
        }
        out
    }
}

/// Exact count of admissible `j`-paths with `x`, `w`, `y` as first,
/// `(i+1)`-th and last vertex, and the guaranteed upper bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThroughCount {
    pub exact: u64,
    /// `None` when `i = j`, where no bound independent of `x` holds.
    pub bound: Option<Threshold>,
}

/// Counts admissible paths through a fixed interior vertex. The bound is
/// `threshold(i) · threshold(j - i)` and `threshold(j - 1)` when the fixed
/// vertex is next to an end.
pub fn count_admissible_through(
    pc: &PathClassification,
    x: usize,
    w: usize,
    y: usize,
    i: usize,
    j: usize,
) -> Result<ThroughCount> {
    if i == 0 || i > j {
        return Err(Error::Parameter(format!("need 1 <= i <= j, got i={i}, j={j}")));
    }
    pc.check_length(j)?;
    let exact = pc
        .admissible_paths(x, y, j)?
        .iter()
        .filter(|p| p[i] == w)
        .count() as u64;
    let bound = if i == j {
        None
    } else if i == 1 || i == j - 1 {
        Some(pc.threshold(j - 1).clone())
    } else {
        Some(pc.threshold(i).times(pc.threshold(j - i)))
    };
    if let Some(b) = &bound {
        if !b.admits(exact) {
            return Err(Error::BoundViolated(format!(
                "{exact} admissible paths through {w} exceed {b}"
            )));
        }
    }
    Ok(ThroughCount { exact, bound })
}

fn interior_mask(path: &[usize]) -> u64 {
    path[1..path.len() - 1].iter().map(|&v| 1u64 << v).sum()
}

/// Greedy maximal subfamily of paths that are pairwise vertex disjoint
/// outside their common ends, scanning in input order.
pub fn pack_disjoint_paths(family: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    if first.len() < 2 {
        return Err(Error::Parameter("paths need at least one edge".into()));
    }
    let ends = key(first[0], first[first.len() - 1]);
    if family
        .iter()
        .any(|p| p.len() != first.len() || key(p[0], p[p.len() - 1]) != ends)
    {
        return Err(Error::Parameter("paths must share ends and length".into()));
    }
    let mut used = 0u64;
    let mut kept = Vec::new();
    for p in family {
        let inner = interior_mask(p);
        if inner & used == 0 {
            used |= inner;
            kept.push(p.clone());
        }
    }
    Ok(kept)
}

/// A spider embedded in a graph. Each leg is listed from the centre to its
/// leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpiderCopy {
    pub center: usize,
    pub legs: Vec<Vec<usize>>,
}

impl SpiderCopy {
    pub fn leaves(&self) -> Vec<usize> {
        self.legs.iter().map(|l| *l.last().expect("nonempty leg")).collect()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.legs.iter().map(|l| l.len() - 1).collect()
    }

    /// Centre and internal leg vertices.
    pub fn body_mask(&self) -> u64 {
        let mut mask = 1u64 << self.center;
        for leg in &self.legs {
            mask |= interior_mask(leg);
        }
        mask
    }

    /// The sub-spider with legs cut to `lengths`.
    pub fn truncate(&self, lengths: &[usize]) -> SpiderCopy {
        SpiderCopy {
            center: self.center,
            legs: self
                .legs
                .iter()
                .zip(lengths)
                .map(|(leg, &l)| leg[..=l].to_vec())
                .collect(),
        }
    }
}

/// Greedy maximal subfamily of spiders that are pairwise vertex disjoint
/// outside their common leaves.
pub fn pack_disjoint_spiders(family: &[SpiderCopy]) -> Result<Vec<SpiderCopy>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let (leaves, lengths) = (first.leaves(), first.lengths());
    if family
        .iter()
        .any(|s| s.leaves() != leaves || s.lengths() != lengths)
    {
        return Err(Error::Parameter(
            "spiders must share leaf vector and length vector".into(),
        ));
    }
    let mut used = 0u64;
    let mut kept = Vec::new();
    for s in family {
        let body = s.body_mask();
        if body & used == 0 {
            used |= body;
            kept.push(s.clone());
        }
    }
    Ok(kept)
}

/// Which length vectors count as proper sub-spiders of a spider with the
/// given length vector.
pub trait SubSpiderRule: Sync {
    fn sub_vectors(&self, lengths: &[usize]) -> Vec<Vec<usize>>;
}

/// Same centre, every leg cut to a length between 1 and its own, at least
/// one strictly shorter.
#[derive(Clone, Copy, Debug, Default)]
pub struct Truncation;

impl SubSpiderRule for Truncation {
    fn sub_vectors(&self, lengths: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &l in lengths {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (1..=l).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out.retain(|v| v.as_slice() != lengths);
        out
    }
}

/// How spiders whose legs all have length 1 are classified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HeightOnePolicy {
    /// By count against `threshold(s)`, like every other length vector. A
    /// `(1, 1)` spider is then heavy exactly when its ends are heavy as a
    /// pair of 2-paths.
    #[default]
    CountBased,
    /// Always light, whatever the count.
    AlwaysLight,
}

/// Admissible spider counts for every length vector up to `lengths`.
#[derive(Clone, Debug)]
pub struct SpiderClassification {
    lengths: Vec<usize>,
    policy: HeightOnePolicy,
    thresholds: Vec<Threshold>,
    /// `(length vector, leaf vector) -> count`.
    counts: HashMap<(Vec<usize>, Vec<usize>), u64>,
    /// Admissible spiders with the full length vector, by leaf vector.
    top: BTreeMap<Vec<usize>, Vec<SpiderCopy>>,
}

/// One `(leaf vector, length vector)` cell of a [`SpiderClassification`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpiderEntry {
    pub leaves: Vec<usize>,
    pub lengths: Vec<usize>,
    pub count: u64,
    pub status: Status,
}

pub fn classify_spiders(
    lengths: &[usize],
    cfg: &ThresholdConfig,
    pc: &PathClassification,
) -> Result<SpiderClassification> {
    classify_spiders_with(lengths, cfg, pc, &Truncation, HeightOnePolicy::default())
}

/// Classifies spiders by increasing total length so that every proper
/// sub-spider is settled before it is consulted.
pub fn classify_spiders_with(
    lengths: &[usize],
    cfg: &ThresholdConfig,
    pc: &PathClassification,
    rule: &dyn SubSpiderRule,
    policy: HeightOnePolicy,
) -> Result<SpiderClassification> {
    if lengths.len() < 2 || lengths.contains(&0) {
        return Err(Error::InvalidSpider(format!(
            "need at least two positive legs, got {lengths:?}"
        )));
    }
    if let Some(&l) = lengths.iter().find(|&&l| l > pc.j_max()) {
        return Err(Error::MissingCoverage(l));
    }
    let total: usize = lengths.iter().sum();
    let mut sc = SpiderClassification {
        lengths: lengths.to_vec(),
        policy,
        thresholds: cfg.thresholds(total)?,
        counts: HashMap::new(),
        top: BTreeMap::new(),
    };
    let mut vectors = rule.sub_vectors(lengths);
    vectors.push(lengths.to_vec());
    vectors.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    vectors.dedup();
    let mut budget = Budget(0);
    for vector in vectors {
        let subs = rule.sub_vectors(&vector);
        let keep = vector.as_slice() == lengths;
        let mut found: Vec<SpiderCopy> = Vec::new();
        for center in pc.graph().vertices().iter() {
            let mut legs = Vec::new();
            sc.grow(pc, &vector, &subs, center, 1 << center, &mut legs, &mut budget, &mut found)?;
        }
        for spider in found {
            *sc.counts.entry((vector.clone(), spider.leaves())).or_insert(0) += 1;
            if keep {
                sc.top.entry(spider.leaves()).or_default().push(spider);
            }
        }
    }
    Ok(sc)
}

impl SpiderClassification {
    #[allow(clippy::too_many_arguments)]
    fn grow(
        &self,
        pc: &PathClassification,
        vector: &[usize],
        subs: &[Vec<usize>],
        center: usize,
        used: u64,
        legs: &mut Vec<Vec<usize>>,
        budget: &mut Budget,
        found: &mut Vec<SpiderCopy>,
    ) -> Result<()> {
        let i = legs.len();
        if i == vector.len() {
            let spider = SpiderCopy {
                center,
                legs: legs.clone(),
            };
            if subs.iter().all(|sub| self.is_light_sub(&spider.truncate(sub), sub)) {
                found.push(spider);
            }
            return Ok(());
        }
        let mut candidates = Vec::new();
        let mut path = vec![center];
        pc.walk(vector[i], &mut path, budget, &mut |p| {
            if interior_and_end(p) & used == 0 && pc.pair_light(p[0], p[p.len() - 1], p.len() - 1) {
                candidates.push(p.to_vec());
            }
        })?;
        for leg in candidates {
            let mask = interior_and_end(&leg);
            legs.push(leg);
            self.grow(pc, vector, subs, center, used | mask, legs, budget, found)?;
            legs.pop();
        }
        Ok(())
    }

    fn is_light_sub(&self, spider: &SpiderCopy, vector: &[usize]) -> bool {
        if self.policy == HeightOnePolicy::AlwaysLight && vector.iter().all(|&l| l == 1) {
            return true;
        }
        let count = self
            .counts
            .get(&(vector.to_vec(), spider.leaves()))
            .copied()
            .unwrap_or(0);
        let total: usize = vector.iter().sum();
        // The spider itself is admissible, so the count is at least one.
        count > 0 && self.thresholds[total].exceeds(count)
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn count(&self, leaves: &[usize], lengths: &[usize]) -> u64 {
        self.counts
            .get(&(lengths.to_vec(), leaves.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn status(&self, leaves: &[usize], lengths: &[usize]) -> Status {
        let count = self.count(leaves, lengths);
        let total: usize = lengths.iter().sum();
        if count == 0 {
            Status::None
        } else if self.policy == HeightOnePolicy::AlwaysLight && lengths.iter().all(|&l| l == 1)
        {
            Status::Light
        } else if self.thresholds[total].exceeds(count) {
            Status::Light
        } else {
            Status::Heavy
        }
    }

    /// Admissible spiders with the full length vector and these leaves.
    pub fn admissible_spiders(&self, leaves: &[usize]) -> &[SpiderCopy] {
        self.top.get(leaves).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Leaf vectors carrying at least one admissible spider of full length.
    pub fn leaf_vectors(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.top.keys()
    }

    pub fn threshold(&self, j: usize) -> &Threshold {
        &self.thresholds[j]
    }

    /// Entries for the full length vector, by leaf vector.
    pub fn entries(&self) -> Vec<SpiderEntry> {
        self.top
            .keys()
            .map(|leaves| SpiderEntry {
                leaves: leaves.clone(),
                lengths: self.lengths.clone(),
                count: self.count(leaves, &self.lengths),
                status: self.status(leaves, &self.lengths),
            })
            .collect()
    }
}

fn interior_and_end(path: &[usize]) -> u64 {
    path[1..].iter().map(|&v| 1u64 << v).sum()
}

/// Guaranteed size of a greedy packing of a full admissible path family.
pub fn path_packing_bound(size: u64, j: usize, cfg: &ThresholdConfig) -> Result<u64> {
    if j < 2 {
        return Ok(size.min(1));
    }
    let t = cfg.thresholds(j - 1)?.pop().expect("nonempty");
    Ok(t.packing_bound(size, j))
}

/// Same for spiders with the given length vector.
pub fn spider_packing_bound(size: u64, lengths: &[usize], cfg: &ThresholdConfig) -> Result<u64> {
    let j: usize = lengths.iter().sum();
    let t = cfg.thresholds(j - 1)?.pop().expect("nonempty");
    Ok(t.packing_bound(size, j))
}

/// Legs guaranteed by [`shrink_to_spider`]: `ceil(|family| / (h Δ^(h-1)))`.
pub fn shrink_bound(size: u64, h: usize, max_degree: usize) -> u64 {
    let denom = BigUint::from(h) * Pow::pow(BigUint::from(max_degree.max(1)), (h - 1) as u32);
    let size = BigUint::from(size);
    ((&size + &denom - BigUint::one()) / denom)
        .to_u64()
        .expect("at most size")
}

/// Search-node cap for the exact leg packing in [`shrink_to_spider`];
/// beyond it the greedy packing is kept.
const SHRINK_NODE_CAP: u64 = 1_000_000;

/// From `h`-paths that start at `x` and end in a target set, builds a
/// spider of height `i` whose leaves are path ends.
///
/// For `i < h` the candidate centres are the vertices at distance `h - i`
/// from `x` along the paths; for `i = h` it is `x`. Each centre's distinct
/// suffixes are packed into legs that are disjoint apart from the centre
/// and have distinct leaves, and the centre with the most legs wins.
pub fn shrink_to_spider(g: &Graph, family: &[Vec<usize>], i: usize) -> Result<SpiderCopy> {
    let first = family
        .first()
        .ok_or_else(|| Error::Parameter("empty path family".into()))?;
    let h = first.len() - 1;
    if h == 0 || i == 0 || i > h {
        return Err(Error::Parameter(format!("need 1 <= i <= h, got i={i}, h={h}")));
    }
    let x = first[0];
    for p in family {
        let set: VertexSet = p.iter().copied().collect();
        if p.len() != h + 1
            || p[0] != x
            || set.len() != p.len()
            || !p.windows(2).all(|w| g.has_edge(w[0], w[1]))
        {
            return Err(Error::Parameter(format!(
                "family members must be paths of length {h} from {x} in the graph"
            )));
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for p in family {
        groups.entry(p[h - i]).or_default().push(p[h - i..].to_vec());
    }
    let mut best: Option<SpiderCopy> = None;
    for (center, mut suffixes) in groups {
        suffixes.sort();
        suffixes.dedup();
        let legs = best_leg_packing(&suffixes);
        if best.as_ref().is_none_or(|b| legs.len() > b.legs.len()) {
            best = Some(SpiderCopy { center, legs });
        }
    }
    Ok(best.expect("nonempty family"))
}

/// Largest set of legs pairwise disjoint apart from their shared first
/// vertex, exact up to [`SHRINK_NODE_CAP`] search nodes.
fn best_leg_packing(legs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let masks: Vec<u64> = legs.iter().map(|l| interior_and_end(l)).collect();
    let mut greedy = Vec::new();
    let mut used = 0;
    for (idx, &m) in masks.iter().enumerate() {
        if m & used == 0 {
            used |= m;
            greedy.push(idx);
        }
    }
    let mut best = greedy;
    let mut current = Vec::new();
    let mut nodes = 0;
    exact_packing(&masks, 0, 0, &mut current, &mut best, &mut nodes);
    best.into_iter().map(|idx| legs[idx].clone()).collect()
}

fn exact_packing(
    masks: &[u64],
    start: usize,
    used: u64,
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
    nodes: &mut u64,
) {
    *nodes += 1;
    if current.len() > best.len() {
        *best = current.clone();
    }
    if *nodes > SHRINK_NODE_CAP {
        return;
    }
    let available = masks[start..].iter().filter(|&&m| m & used == 0).count();
    if current.len() + available <= best.len() {
        return;
    }
    for idx in start..masks.len() {
        if masks[idx] & used == 0 {
            current.push(idx);
            exact_packing(masks, idx + 1, used | masks[idx], current, best, nodes);
            current.pop();
        }
    }
}

/// A bipartite graph with a fixed side `X`; `Y` is every other vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartite {
    graph: Graph,
    x: VertexSet,
}

impl Bipartite {
    pub fn new(graph: Graph, x: VertexSet) -> Result<Self> {
        if !x.is_subset(graph.vertices()) {
            return Err(Error::Bipartite("X is not a set of vertices".into()));
        }
        let y = graph.vertices().difference(x);
        if x.is_empty() || y.is_empty() {
            return Err(Error::Bipartite("both parts must be nonempty".into()));
        }
        if let Some((u, v)) = graph
            .edges()
            .find(|&(u, v)| x.contains(u) == x.contains(v))
        {
            return Err(Error::Bipartite(format!("edge {u}-{v} lies inside a part")));
        }
        Ok(Bipartite { graph, x })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn x(&self) -> VertexSet {
        self.x
    }

    pub fn y(&self) -> VertexSet {
        self.graph.vertices().difference(self.x)
    }

    /// `e(B) / (|X| |Y|)`.
    pub fn edge_density(&self) -> Rational {
        Rational::ratio(
            self.graph.edge_count() as u64,
            (self.x.len() * self.y().len()) as u64,
        )
    }
}

/// An `m`-set of `Y` with its common neighbourhood in `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonNeighborhood {
    pub subset: Vec<usize>,
    pub common: VertexSet,
    /// `(c/2)^m |X|`.
    pub bound: Rational,
}

/// Searches all `m`-subsets of `Y` for the largest common neighbourhood,
/// which must reach `(c/2)^m |X|` whenever `c |Y| >= 2m`.
pub fn common_neighborhood_extract(b: &Bipartite, m: usize) -> Result<CommonNeighborhood> {
    if m == 0 {
        return Err(Error::Parameter("m must be positive".into()));
    }
    let c = b.edge_density();
    let y: Vec<usize> = b.y().iter().collect();
    if c.clone() * Rational::integer(y.len() as u64) < Rational::integer(2 * m as u64) {
        return Err(Error::Precondition(format!(
            "c|Y| = {} is below 2m = {}",
            c.clone() * Rational::integer(y.len() as u64),
            2 * m
        )));
    }
    let half = c / Rational::two();
    let mut bound = Rational::integer(b.x().len() as u64);
    for _ in 0..m {
        bound = &bound * &half;
    }
    let mut best: Option<(Vec<usize>, VertexSet)> = None;
    let mut chosen = Vec::with_capacity(m);
    best_subset(b, &y, m, 0, b.x(), &mut chosen, &mut best);
    let (subset, common) = best.expect("c|Y| >= 2m gives |Y| >= m");
    if Rational::integer(common.len() as u64) < bound {
        return Err(Error::BoundViolated(format!(
            "best common neighbourhood has {} vertices, below {bound}",
            common.len()
        )));
    }
    Ok(CommonNeighborhood {
        subset,
        common,
        bound,
    })
}

fn best_subset(
    b: &Bipartite,
    y: &[usize],
    m: usize,
    start: usize,
    common: VertexSet,
    chosen: &mut Vec<usize>,
    best: &mut Option<(Vec<usize>, VertexSet)>,
) {
    if chosen.len() == m {
        if best.as_ref().is_none_or(|(_, c)| common.len() > c.len()) {
            *best = Some((chosen.clone(), common));
        }
        return;
    }
    for idx in start..y.len() {
        if y.len() - idx < m - chosen.len() {
            break;
        }
        let next = common.intersection(b.graph.neighbors(y[idx]));
        // Intersections only shrink, so a worse partial set cannot win.
        if best.as_ref().is_some_and(|(_, c)| next.len() <= c.len()) {
            continue;
        }
        chosen.push(y[idx]);
        best_subset(b, y, m, idx + 1, next, chosen, best);
        chosen.pop();
    }
}

/// Result of [`clean_min_degree`]: surviving vertices, their subgraph, and
/// the degree floors taken from the original graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cleaned {
    pub graph: Graph,
    pub alive: VertexSet,
    pub x_floor: Rational,
    pub y_floor: Rational,
}

/// Repeatedly deletes vertices of `X` with degree below `e(B) / (4|X|)` and
/// of `Y` below `e(B) / (4|Y|)`, the floors fixed from the input.
pub fn clean_min_degree(b: &Bipartite) -> Result<Cleaned> {
    let e = b.graph.edge_count() as u64;
    if e == 0 {
        return Err(Error::Edgeless);
    }
    let x_floor = Rational::ratio(e, 4 * b.x().len() as u64);
    let y_floor = Rational::ratio(e, 4 * b.y().len() as u64);
    let mut graph = b.graph.clone();
    let mut alive = graph.vertices();
    loop {
        let doomed = alive.iter().find(|&v| {
            let floor = if b.x.contains(v) { &x_floor } else { &y_floor };
            Rational::integer(graph.degree(v) as u64) < *floor
        });
        let Some(v) = doomed else { break };
        for u in graph.neighbors(v).iter() {
            graph.remove_edge(u, v);
        }
        alive.remove(v);
    }
    if 2 * graph.edge_count() < e as usize {
        return Err(Error::BoundViolated(format!(
            "cleaning kept {} of {e} edges",
            graph.edge_count()
        )));
    }
    Ok(Cleaned {
        graph,
        alive,
        x_floor,
        y_floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete, complete_bipartite, cycle};

    fn cfg(l: u32, k: u32, s: u32) -> ThresholdConfig {
        ThresholdConfig::exact(l, k, s).unwrap()
    }

    #[test]
    fn f_examples() {
        assert_eq!(compute_f(1, &cfg(7, 3, 2)).unwrap(), BigUint::from(7u32));
        assert_eq!(compute_f(2, &cfg(1, 1, 2)).unwrap(), BigUint::from(5120u32));
        assert_eq!(compute_f(2, &cfg(2, 1, 2)).unwrap(), BigUint::from(167_772_160u64));
        assert!(compute_f(0, &cfg(1, 1, 2)).is_err());
    }

    #[test]
    fn constants_match_f() {
        let c = cfg(2, 2, 3);
        let f = f_sequence(4, &c).unwrap();
        for j in 2..=4 {
            let d = derived_constants(j, &f[j - 2], &c).unwrap();
            assert_eq!(d.f_from_constants(), f[j - 1]);
            assert_eq!(&d.n * &d.d, d.m);
        }
    }

    #[test]
    fn factored_matches_expanded() {
        assert_eq!(Factored::of(360).unwrap().to_biguint(), BigUint::from(360u32));
        assert!(Factored::of(0).is_err());
        assert!(Factored::of(12).unwrap().divides(&Factored::of(36).unwrap()));
        assert!(!Factored::of(8).unwrap().divides(&Factored::of(36).unwrap()));
        for (l, k, s) in [(1, 1, 2), (2, 3, 3), (6, 5, 4)] {
            let c = cfg(l, k, s);
            let big = f_sequence(4, &c).unwrap();
            let fac = f_factored_sequence(4, &c).unwrap();
            for j in 0..4 {
                assert_eq!(fac[j].to_biguint(), big[j]);
            }
            for j in 2..=4 {
                let d = derived_constants_factored(j, &fac[j - 2], &c).unwrap();
                assert_eq!(d.f_from_constants().unwrap(), fac[j - 1]);
                assert_eq!(d.d.to_biguint(), derived_constants(j, &big[j - 2], &c).unwrap().d);
                assert!(check_f_gap_factored(j, &fac, &c).unwrap());
            }
        }
    }

    #[test]
    fn gap_examples() {
        assert!(check_f_gap(2, &cfg(1, 1, 2)).unwrap());
        assert!(check_f_gap(3, &cfg(5, 2, 2)).unwrap());
        assert!(check_f_gap(1, &cfg(1, 1, 2)).is_err());
    }

    #[test]
    fn gap_shortcut_agrees_with_full_product() {
        let c = cfg(3, 2, 2);
        let f = f_sequence(3, &c).unwrap();
        for j in 2..=3 {
            let (fj, prev) = (&f[j - 1], &f[j - 2]);
            let two_l_sq = BigUint::from(18u32);
            let max = two_l_sq.max(prev.clone());
            let full = *fj >= BigUint::from(j * j) * prev * prev * max;
            assert_eq!(check_f_gap_with(j, &f, &c).unwrap(), full);
        }
    }

    #[test]
    fn exact_thresholds_turn_huge() {
        let t = cfg(1, 1, 2).thresholds(6).unwrap();
        assert_eq!(t[1], Threshold::finite(1));
        assert_eq!(t[2], Threshold::finite(5120));
        assert_eq!(t[6], Threshold::Huge);
    }

    #[test]
    fn override_validation() {
        let base = cfg(1, 1, 2);
        let table = |pairs: &[(usize, u64)]| {
            pairs
                .iter()
                .map(|&(j, t)| (j, Threshold::finite(t)))
                .collect::<BTreeMap<_, _>>()
        };
        assert!(base.clone().with_overrides(table(&[(2, 2), (3, 3)])).is_ok());
        assert!(base.clone().with_overrides(table(&[(2, 3), (3, 2)])).is_err());
        assert!(base.clone().with_overrides(table(&[(2, 0)])).is_err());
        let partial = base.with_overrides(table(&[(2, 2)])).unwrap();
        assert!(partial.thresholds(3).is_err());
    }

    #[test]
    fn c5_all_light() {
        let g = cycle(5).unwrap();
        let pc = classify_paths(&g, 2, &cfg(1, 1, 2)).unwrap();
        for (x, y) in [(0, 2), (1, 3), (2, 4), (3, 0), (4, 1)] {
            assert_eq!(pc.count(x, y, 2), 1);
            assert_eq!(pc.status(x, y, 2), Status::Light);
        }
        assert_eq!(pc.status(0, 1, 1), Status::Light);
        assert_eq!(pc.status(0, 2, 1), Status::None);
    }

    #[test]
    fn k4_heavy_under_override() {
        let g = complete(4).unwrap();
        let c = cfg(1, 1, 2).with_uniform_override(2, Threshold::finite(2)).unwrap();
        let pc = classify_paths(&g, 2, &c).unwrap();
        assert_eq!(pc.count(0, 1, 2), 2);
        assert_eq!(pc.status(0, 1, 2), Status::Heavy);
    }

    #[test]
    fn heavy_subpaths_block_longer_paths() {
        // In K4 every pair is 2-heavy at threshold 2, so no 3-path is
        // admissible.
        let g = complete(4).unwrap();
        let c = cfg(1, 1, 2)
            .with_overrides([(2, Threshold::finite(2)), (3, Threshold::finite(2))].into())
            .unwrap();
        let pc = classify_paths(&g, 3, &c).unwrap();
        assert!(pc.entries().iter().all(|e| e.j < 3));
        assert!(!pc.is_admissible(&[0, 1, 2, 3]));
        assert!(pc.is_admissible(&[0, 1, 2]));
        assert!(!pc.is_light(&[0, 1, 2]));
    }

    #[test]
    fn through_counts() {
        let g = complete(4).unwrap();
        let pc = classify_paths(&g, 3, &cfg(2, 1, 2)).unwrap();
        let r = count_admissible_through(&pc, 0, 2, 1, 1, 2).unwrap();
        assert_eq!(r.exact, 1);
        assert_eq!(r.bound, Some(Threshold::finite(2)));
        assert_eq!(count_admissible_through(&pc, 0, 2, 0, 1, 2).unwrap().exact, 0);
        assert_eq!(count_admissible_through(&pc, 0, 1, 1, 2, 2).unwrap().bound, None);
        assert!(count_admissible_through(&pc, 0, 1, 2, 0, 2).is_err());
    }

    #[test]
    fn path_packing() {
        let two = vec![vec![0, 1, 2], vec![0, 3, 2]];
        assert_eq!(pack_disjoint_paths(&two).unwrap().len(), 2);
        let reversed = vec![vec![0, 1, 2], vec![2, 3, 0]];
        assert_eq!(pack_disjoint_paths(&reversed).unwrap().len(), 2);
        let shared = vec![vec![0, 1, 2, 5], vec![0, 1, 3, 5], vec![0, 4, 1, 5]];
        assert_eq!(pack_disjoint_paths(&shared).unwrap().len(), 1);
        assert!(pack_disjoint_paths(&[vec![0, 1, 2], vec![0, 1, 3]]).is_err());
        assert_eq!(path_packing_bound(2, 2, &cfg(1, 1, 2)).unwrap(), 1);
    }

    #[test]
    fn spider_packing_on_k2t() {
        let g = complete_bipartite(2, 4).unwrap();
        let c = cfg(1, 1, 2);
        let pc = classify_paths(&g, 1, &c).unwrap();
        let sc = classify_spiders(&[1, 1], &c, &pc).unwrap();
        let family = sc.admissible_spiders(&[0, 1]);
        assert_eq!(family.len(), 4);
        assert_eq!(pack_disjoint_spiders(family).unwrap().len(), 4);
        assert_eq!(pack_disjoint_spiders(&family[..1]).unwrap().len(), 1);
    }

    #[test]
    fn spider_examples() {
        let g = complete_bipartite(2, 3).unwrap();
        let c = cfg(1, 1, 2).with_uniform_override(2, Threshold::finite(2)).unwrap();
        let pc = classify_paths(&g, 2, &c).unwrap();
        let sc = classify_spiders(&[1, 1], &c, &pc).unwrap();
        assert_eq!(sc.count(&[2, 3], &[1, 1]), 2);
        assert_eq!(sc.status(&[2, 3], &[1, 1]), Status::Heavy);
        assert_eq!(pc.status(2, 3, 2), Status::Heavy);
        let always = classify_spiders_with(&[1, 1], &c, &pc, &Truncation, HeightOnePolicy::AlwaysLight).unwrap();
        assert_eq!(always.status(&[2, 3], &[1, 1]), Status::Light);

        let g = cycle(6).unwrap();
        let c = cfg(1, 1, 2);
        let pc = classify_paths(&g, 2, &c).unwrap();
        let sc = classify_spiders(&[1, 2], &c, &pc).unwrap();
        let entries = sc.entries();
        // Leaves three apart: one spider centred on each side of the cycle.
        assert_eq!(entries.len(), 6);
        assert!(entries.iter().all(|e| e.count == 2 && e.status == Status::Light));
        assert!(entries.iter().all(|e| (e.leaves[0] + 3) % 6 == e.leaves[1]));
    }

    #[test]
    fn truncations() {
        let subs = Truncation.sub_vectors(&[2, 3]);
        assert_eq!(subs.len(), 5);
        assert!(!subs.contains(&vec![2, 3]));
        assert!(Truncation.sub_vectors(&[1, 1]).is_empty());
    }

    #[test]
    fn shrinking() {
        // Three 2-paths from 0 through 1 to leaves 2, 3, 4.
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (1, 4)]).unwrap();
        let family = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]];
        let s = shrink_to_spider(&g, &family, 1).unwrap();
        assert_eq!(s.center, 1);
        assert_eq!(s.legs.len(), 3);
        let s = shrink_to_spider(&g, &family, 2).unwrap();
        assert_eq!(s.center, 0);
        assert_eq!(s.legs.len(), 1);
        assert!(shrink_to_spider(&g, &[], 1).is_err());
        assert_eq!(shrink_bound(3, 2, 4), 1);
    }

    #[test]
    fn common_neighborhoods() {
        let g = complete_bipartite(3, 4).unwrap();
        let b = Bipartite::new(g, (0..3).collect()).unwrap();
        let r = common_neighborhood_extract(&b, 2).unwrap();
        assert_eq!(r.common.len(), 3);
        let matching = Graph::from_edges(8, &[(0, 4), (1, 5), (2, 6), (3, 7)]).unwrap();
        let b = Bipartite::new(matching, (0..4).collect()).unwrap();
        assert!(matches!(
            common_neighborhood_extract(&b, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cleaning() {
        let g = complete_bipartite(3, 3).unwrap();
        let b = Bipartite::new(g.clone(), (0..3).collect()).unwrap();
        let cleaned = clean_min_degree(&b).unwrap();
        assert_eq!(cleaned.graph, g);
        // Star K_{1,4} from 0, plus pendant edge 5-6 far from it: floors
        // are 5/8 on X = {0, 6} and 5/20 on Y; nothing falls below.
        let g = Graph::from_edges(8, &[(0, 1), (0, 2), (0, 3), (0, 4), (6, 5)]).unwrap();
        let b = Bipartite::new(g, [0, 6, 7].into_iter().collect()).unwrap();
        let cleaned = clean_min_degree(&b).unwrap();
        assert!(!cleaned.alive.contains(7));
        assert_eq!(cleaned.graph.edge_count(), 5);
        assert!(Bipartite::new(complete(3).unwrap(), [0].into_iter().collect()).is_err());
        let empty = Bipartite::new(Graph::new(2).unwrap(), [0].into_iter().collect()).unwrap();
        assert!(matches!(clean_min_degree(&empty), Err(Error::Edgeless)));
    }
}
