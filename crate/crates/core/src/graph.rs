//! Small simple undirected graphs with one `u64` adjacency row per vertex.
//!
//! Everything in the crate is built on [`Graph`]: vertex sets are bitmasks,
//! so neighbourhood intersections and the inner loops of the embedders are
//! single machine instructions.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// A set of vertex indices in `0..64`, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const fn empty() -> Self {
        VertexSet(0)
    }

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// The set `{0, 1, ..., n-1}`.
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub const fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub const fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub const fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = VertexSet::empty();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

/// Iterator over the members of a [`VertexSet`].
#[derive(Clone, Debug)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Members {}

/// A simple undirected graph on the vertices `0..n`, `1 <= n <= 64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: [u64; MAX_VERTICES],
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::VertexCount {
                got: n,
                max: MAX_VERTICES,
            });
        }
        Ok(Graph {
            n,
            adj: [0; MAX_VERTICES],
        })
    }

    /// Builds a graph from an edge list. Repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// Inserts the edge `uv`; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let fresh = self.adj[u] >> v & 1 == 0;
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(fresh)
    }

    /// Deletes the edge `uv` if present.
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.adj[u] &= !(1 << v);
            self.adj[v] &= !(1 << u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    /// `N_G(v)`.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(if v < self.n { self.adj[v] } else { 0 })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    /// `e(G)`.
    pub fn edge_count(&self) -> usize {
        self.adj[..self.n]
            .iter()
            .map(|row| row.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet(self.adj[u] & !((2u64 << u) - 1))
                .iter()
                .map(move |v| (u, v))
        })
    }

    /// `Δ(G)`.
    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `δ(G)`.
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let all = self.vertices().bits();
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            for v in VertexSet(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen & all == all
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        let mut seen = VertexSet::empty();
        if perm.len() != self.n {
            return Err(Error::Parameter(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.n
            )));
        }
        for &p in perm {
            self.check_vertex(p)?;
            if seen.contains(p) {
                return Err(Error::Parameter("relabeling is not a permutation".into()));
            }
            seen.insert(p);
        }
        let mut out = Graph::new(self.n)?;
        for (u, v) in self.edges() {
            out.add_edge(perm[u], perm[v])?;
        }
        Ok(out)
    }

    /// Disjoint union, with `other`'s vertices shifted past ours.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let mut out = Graph::new(self.n + other.n)?;
        for (u, v) in self.edges() {
            out.add_edge(u, v)?;
        }
        for (u, v) in other.edges() {
            out.add_edge(self.n + u, self.n + v)?;
        }
        Ok(out)
    }

    /// `Γ_i(w)`: vertices `z` joined to `w` by a path of length exactly `i`.
    ///
    /// Paths have distinct vertices, so this is not a BFS layer once `i >= 2`.
    pub fn distance_sphere(&self, w: usize, i: usize) -> Result<VertexSet> {
        self.check_vertex(w)?;
        let mut found = 0u64;
        self.sphere_walk(w, 1 << w, i, &mut found);
        Ok(VertexSet(found))
    }

    fn sphere_walk(&self, at: usize, visited: u64, remaining: usize, found: &mut u64) {
        if remaining == 0 {
            *found |= 1 << at;
            return;
        }
        for next in VertexSet(self.adj[at] & !visited) {
            if remaining == 1 {
                *found |= 1 << next;
            } else {
                self.sphere_walk(next, visited | 1 << next, remaining - 1, found);
            }
        }
    }

    /// `N*_G(S)`, the vertices adjacent to every member of `S`.
    pub fn common_neighborhood(&self, set: VertexSet) -> Result<VertexSet> {
        if set.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        for v in set {
            self.check_vertex(v)?;
        }
        Ok(set
            .iter()
            .fold(self.vertices(), |acc, v| acc.intersection(self.neighbors(v))))
    }

    /// Whether `Δ(G) <= K·δ(G)`.
    ///
    /// The edgeless graph passes vacuously; any other graph with an isolated
    /// vertex fails for every finite `K`.
    pub fn is_k_almost_regular(&self, k: &BigRational) -> Result<bool> {
        if *k <= BigRational::zero() {
            return Err(Error::Parameter(format!("K must be positive, got {k}")));
        }
        let (max, min) = (self.max_degree(), self.min_degree());
        if max == 0 {
            return Ok(true);
        }
        if min == 0 {
            return Ok(false);
        }
        Ok(BigRational::from_integer(max.into()) <= k * BigRational::from_integer(min.into()))
    }

    pub(crate) fn rows(&self) -> &[u64] {
        &self.adj[..self.n]
    }

    /// Encodes the graph in graph6 format (without the optional header).
    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 0x3f) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = acc << 1 | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are printable ASCII")
    }

    /// Decodes a graph6 string. A leading `>>graph6<<` header and
    /// surrounding whitespace are accepted.
    pub fn from_graph6(text: &str) -> Result<Graph> {
        let text = text.trim();
        let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
        let bytes = text.as_bytes();
        let bad = |why: &str| Error::Graph6(why.to_string());
        if let Some(&c) = bytes.iter().find(|&&c| !(63..=126).contains(&c)) {
            return Err(Error::Graph6(format!("byte {c:#04x} outside 63..=126")));
        }
        let (n, body) = match bytes {
            [] => return Err(bad("empty input")),
            [126, 126, ..] => return Err(bad("graphs with more than 258047 vertices")),
            [126, rest @ ..] => {
                if rest.len() < 3 {
                    return Err(bad("truncated vertex count"));
                }
                let n = rest[..3]
                    .iter()
                    .fold(0usize, |acc, &c| acc << 6 | (c - 63) as usize);
                (n, &rest[3..])
            }
            [c, rest @ ..] => ((c - 63) as usize, rest),
        };
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::VertexCount {
                got: n,
                max: MAX_VERTICES,
            });
        }
        let bits = n * (n - 1) / 2;
        if body.len() != bits.div_ceil(6) {
            return Err(Error::Graph6(format!(
                "expected {} adjacency bytes for n = {n}, found {}",
                bits.div_ceil(6),
                body.len()
            )));
        }
        let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
        if (bits..body.len() * 6).any(bit) {
            return Err(bad("nonzero padding bits"));
        }
        let mut g = Graph::new(n)?;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bit(k) {
                    g.add_edge(i, j)?;
                }
                k += 1;
            }
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> EdgeList {
        EdgeList {
            n: self.n,
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_edge_list(list: &EdgeList) -> Result<Graph> {
        let mut g = Graph::new(list.n)?;
        for &[u, v] in &list.edges {
            g.add_edge(u, v)
                .map_err(|e| Error::EdgeList(format!("edge [{u}, {v}]: {e}")))?;
        }
        Ok(g)
    }

    /// Parses `{"n": .., "edges": [[u, v], ..]}`.
    pub fn from_json(text: &str) -> Result<Graph> {
        let list: EdgeList =
            serde_json::from_str(text).map_err(|e| Error::EdgeList(e.to_string()))?;
        Graph::from_edge_list(&list)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_edge_list()).expect("edge lists always serialize")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// JSON edge-list form of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_edge_list().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let list = EdgeList::deserialize(d)?;
        Graph::from_edge_list(&list).map_err(serde::de::Error::custom)
    }
}

/// Exact isomorphism test.
///
/// Vertices of `g` are matched in BFS order against vertices of `h` of equal
/// degree; each candidate must reproduce adjacency and non-adjacency to every
/// vertex already placed.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    let (g_deg, h_deg) = (dg.clone(), dh.clone());
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    let n = g.order();
    let mut by_degree = vec![0u64; n];
    for (v, &d) in h_deg.iter().enumerate() {
        by_degree[d] |= 1 << v;
    }
    let order = search_order(g, VertexSet::empty());
    let mut map = vec![usize::MAX; n];
    iso_extend(g, h, &order, &g_deg, &by_degree, 0, 0, &mut map)
}

#[allow(clippy::too_many_arguments)]
fn iso_extend(
    g: &Graph,
    h: &Graph,
    order: &[usize],
    g_deg: &[usize],
    by_degree: &[u64],
    depth: usize,
    used: u64,
    map: &mut [usize],
) -> bool {
    let Some(&p) = order.get(depth) else {
        return true;
    };
    let mut cand = by_degree[g_deg[p]] & !used;
    for &q in &order[..depth] {
        let image = h.rows()[map[q]];
        if g.has_edge(p, q) {
            cand &= image;
        } else {
            cand &= !image;
        }
    }
    for c in VertexSet(cand) {
        map[p] = c;
        if iso_extend(g, h, order, g_deg, by_degree, depth + 1, used | 1 << c, map) {
            return true;
        }
    }
    map[p] = usize::MAX;
    false
}

/// Orders vertices so each one (after the first of its component) has an
/// earlier neighbour. `seed` vertices come first; components are started
/// from their highest-degree vertex.
pub(crate) fn search_order(g: &Graph, seed: VertexSet) -> Vec<usize> {
    let mut order: Vec<usize> = seed.iter().collect();
    let mut placed = seed.bits();
    let all = g.vertices().bits();
    while placed != all {
        // Prefer the unplaced vertex with most placed neighbours, then degree.
        let next = VertexSet(all & !placed)
            .iter()
            .max_by_key(|&v| {
                (
                    (g.rows()[v] & placed).count_ones(),
                    g.degree(v),
                    std::cmp::Reverse(v),
                )
            })
            .expect("unplaced vertex exists");
        order.push(next);
        placed |= 1 << next;
    }
    order
}
