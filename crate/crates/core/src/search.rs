//! Subgraph containment and exact Turán numbers for small `n`.
//!
//! [`turan_number`] runs a branch and bound over the edge slots of the
//! upper triangle. After each added edge it only looks for copies of `H`
//! through that edge, which is enough because the parent graph was
//! `H`-free. Vertex 0 is taken to have maximum degree with neighbours
//! `1..=d`; every graph has a relabelling of that shape, so the restriction
//! never changes the optimum. The same prefix rule is applied in later rows
//! to vertices that no earlier row can tell apart.
//!
//! `ex(m, H)` is computed for each `m` up to `n` in turn. The previous value
//! seeds the incumbent and gives two cuts: `ex(m) <= ex(m-1) m / (m-2)`, and
//! a graph with `e` edges all of whose vertex deletions are `H`-free has
//! minimum degree at least `e - ex(m-1)`.

use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{Family, Spider};
use crate::graph::{search_order, Graph, VertexSet};
use crate::rational::Rational;

/// Largest `n` accepted by [`turan_number`].
pub const MAX_SEARCH_ORDER: usize = 12;

/// Largest `n` accepted by [`naive_turan_oracle`].
pub const MAX_ORACLE_ORDER: usize = 7;

/// Automorphisms examined when grouping pattern edges into orbits. Stopping
/// early only makes the grouping finer, which costs time but not
/// correctness.
const AUTOMORPHISM_CAP: usize = 20_000;

/// Backtracking embedder that places pattern vertices in a fixed order.
#[derive(Clone, Debug)]
struct Embedder {
    order: Vec<usize>,
    /// For each position, the earlier positions adjacent to it in `H`.
    back: Vec<Vec<usize>>,
    degree: Vec<usize>,
}

impl Embedder {
    fn new(h: &Graph, prefix: &[usize]) -> Self {
        let seed: VertexSet = prefix.iter().copied().collect();
        let mut order = prefix.to_vec();
        order.extend(search_order(h, seed).into_iter().filter(|&v| !seed.contains(v)));
        let mut position = vec![usize::MAX; h.order()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                h.neighbors(v)
                    .iter()
                    .map(|u| position[u])
                    .filter(|&p| p < i)
                    .collect()
            })
            .collect();
        let degree = order.iter().map(|&v| h.degree(v)).collect();
        Embedder {
            order,
            back,
            degree,
        }
    }

    /// Calls `visit` with each embedding (indexed by position) extending
    /// `fixed`; stops and returns `true` as soon as `visit` does.
    fn search(
        &self,
        g: &Graph,
        fixed: &[usize],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if self.order.len() > g.order() {
            return false;
        }
        let degrees = g.degrees();
        let mut image = vec![0; self.order.len()];
        self.extend(g, &degrees, fixed, 0, &mut image, 0, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        g: &Graph,
        degrees: &[usize],
        fixed: &[usize],
        pos: usize,
        image: &mut [usize],
        used: u64,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if pos == self.order.len() {
            return visit(image);
        }
        let mut cand = g.vertices().bits() & !used;
        if let Some(&v) = fixed.get(pos) {
            cand &= 1 << v;
        }
        for &p in &self.back[pos] {
            cand &= g.rows()[image[p]];
        }
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if degrees[v] < self.degree[pos] {
                continue;
            }
            image[pos] = v;
            if self.extend(g, degrees, fixed, pos + 1, image, used | 1 << v, visit) {
                return true;
            }
        }
        false
    }

    fn embeds(&self, g: &Graph, fixed: &[usize]) -> bool {
        self.search(g, fixed, &mut |_| true)
    }
}

/// Whether `g` contains `h` as a (not necessarily induced) subgraph.
pub fn contains(g: &Graph, h: &Graph) -> bool {
    if h.order() > g.order() || h.edge_count() > g.edge_count() || h.max_degree() > g.max_degree()
    {
        return false;
    }
    Embedder::new(h, &[]).embeds(g, &[])
}

/// Embedder for `t * S` with the roots at the leaves of the spider `S`.
///
/// Places the roots first, lists every copy of the spider body that reaches
/// them, and then looks for `t` pairwise disjoint bodies.
#[derive(Clone, Debug)]
struct BlowupEmbedder {
    /// Leg lengths, ascending so equal legs are adjacent.
    legs: Vec<usize>,
    t: usize,
}

impl BlowupEmbedder {
    fn new(spider: &Spider, t: usize) -> Self {
        let mut legs = spider.legs().to_vec();
        legs.sort_unstable();
        BlowupEmbedder { legs, t }
    }

    fn order(&self) -> usize {
        let body: usize = 1 + self.legs.iter().map(|l| l - 1).sum::<usize>();
        self.legs.len() + self.t * body
    }

    fn contains(&self, g: &Graph) -> bool {
        if self.order() > g.order() {
            return false;
        }
        let eligible = g
            .vertices()
            .iter()
            .filter(|&v| g.degree(v) >= self.t)
            .collect::<VertexSet>();
        let mut roots = Vec::with_capacity(self.legs.len());
        self.place_roots(g, eligible, &mut roots)
    }

    fn place_roots(&self, g: &Graph, eligible: VertexSet, roots: &mut Vec<usize>) -> bool {
        let i = roots.len();
        if i == self.legs.len() {
            return self.pack_bodies(g, roots);
        }
        for r in eligible.iter() {
            // Permuting legs of equal length is a symmetry of the blowup.
            if i > 0 && self.legs[i] == self.legs[i - 1] && r <= roots[i - 1] {
                continue;
            }
            if roots.contains(&r) {
                continue;
            }
            roots.push(r);
            let found = self.place_roots(g, eligible, roots);
            roots.pop();
            if found {
                return true;
            }
        }
        false
    }

    fn pack_bodies(&self, g: &Graph, roots: &[usize]) -> bool {
        let root_mask: u64 = roots.iter().map(|&r| 1u64 << r).sum();
        let mut bodies = Vec::new();
        for c in g.vertices().iter() {
            if root_mask >> c & 1 == 1 || g.degree(c) < self.legs.len() {
                continue;
            }
            self.bodies_from(g, roots, root_mask, 0, 1 << c, c, &mut bodies);
        }
        bodies.sort_unstable_by_key(|m: &u64| (m.count_ones(), *m));
        bodies.dedup();
        // A body containing another body is never needed.
        let mut minimal: Vec<u64> = Vec::new();
        for m in bodies {
            if minimal.iter().all(|&k| k & m != k) {
                minimal.push(m);
            }
        }
        choose_disjoint(&minimal, 0, self.t, 0)
    }

    #[allow(clippy::too_many_arguments)]
    fn bodies_from(
        &self,
        g: &Graph,
        roots: &[usize],
        root_mask: u64,
        leg: usize,
        body: u64,
        center: usize,
        out: &mut Vec<u64>,
    ) {
        if leg == self.legs.len() {
            out.push(body);
            return;
        }
        let mut on_path = |path: u64| {
            self.bodies_from(g, roots, root_mask, leg + 1, body | path, center, out);
        };
        leg_paths(
            g,
            center,
            self.legs[leg],
            roots[leg],
            root_mask | body,
            0,
            &mut on_path,
        );
    }
}

/// Paths of exactly `len` edges from `from` to `to` whose internal vertices
/// avoid `avoid`; reports the set of internal vertices of each.
fn leg_paths(
    g: &Graph,
    from: usize,
    len: usize,
    to: usize,
    avoid: u64,
    internal: u64,
    out: &mut dyn FnMut(u64),
) {
    if len == 1 {
        if g.has_edge(from, to) {
            out(internal);
        }
        return;
    }
    let mut next = g.rows()[from] & !avoid & !internal & !(1 << to);
    while next != 0 {
        let v = next.trailing_zeros() as usize;
        next &= next - 1;
        leg_paths(g, v, len - 1, to, avoid, internal | 1 << v, out);
    }
}

fn choose_disjoint(masks: &[u64], start: usize, need: usize, used: u64) -> bool {
    if need == 0 {
        return true;
    }
    if masks.len() - start < need {
        return false;
    }
    (start..masks.len()).any(|i| {
        masks[i] & used == 0 && choose_disjoint(masks, i + 1, need - 1, used | masks[i])
    })
}

/// A forbidden graph with everything the searches precompute about it.
#[derive(Clone, Debug)]
pub struct Pattern {
    graph: Graph,
    label: String,
    blowup: Option<BlowupEmbedder>,
    whole: Embedder,
    /// One embedder per edge-orbit representative `(x, y)`, starting at
    /// `x, y`.
    through: Vec<Embedder>,
}

impl Pattern {
    /// Pattern labelled by its graph6 string.
    pub fn new(graph: Graph) -> Self {
        let label = format!("g6:{}", graph.to_graph6());
        Self::build(graph, label, None)
    }

    /// Pattern for a family descriptor; blowups of spiders get the
    /// structure-aware embedder.
    pub fn from_family(family: &Family) -> Result<Self> {
        let graph = family.graph()?;
        let blowup = family
            .blowup_structure()
            .map(|(spider, t)| BlowupEmbedder::new(&spider, t));
        Ok(Self::build(graph, family.to_string(), blowup))
    }

    fn build(graph: Graph, label: String, blowup: Option<BlowupEmbedder>) -> Self {
        let whole = Embedder::new(&graph, &[]);
        let through = edge_orbit_representatives(&graph, &whole)
            .into_iter()
            .map(|(x, y)| Embedder::new(&graph, &[x, y]))
            .collect();
        Pattern {
            graph,
            label,
            blowup,
            whole,
            through,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_blowup_structure(&self) -> bool {
        self.blowup.is_some()
    }

    /// Number of edge classes tried by [`Pattern::contains_through`].
    pub fn edge_representatives(&self) -> usize {
        self.through.len()
    }

    /// Generic containment test.
    pub fn contained_in(&self, g: &Graph) -> bool {
        self.fits(g) && self.whole.embeds(g, &[])
    }

    fn fits(&self, g: &Graph) -> bool {
        self.graph.order() <= g.order()
            && self.graph.edge_count() <= g.edge_count()
            && self.graph.max_degree() <= g.max_degree()
    }

    /// Containment through the blowup embedder when one exists.
    pub fn contained_in_structured(&self, g: &Graph) -> Option<bool> {
        self.blowup.as_ref().map(|b| b.contains(g))
    }

    /// Whether some copy of the pattern in `g` uses the edge `ab`.
    pub fn contains_through(&self, g: &Graph, a: usize, b: usize) -> bool {
        debug_assert!(g.has_edge(a, b));
        self.through
            .iter()
            .any(|e| e.embeds(g, &[a, b]) || e.embeds(g, &[b, a]))
    }
}

/// Groups the edges of `h` into classes closed under the automorphisms found
/// (up to [`AUTOMORPHISM_CAP`]) and returns the smallest edge of each class.
fn edge_orbit_representatives(h: &Graph, whole: &Embedder) -> Vec<(usize, usize)> {
    let edges: Vec<(usize, usize)> = h.edges().collect();
    let index: HashMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut seen = 0;
    let mut map = vec![0; h.order()];
    whole.search(h, &[], &mut |image| {
        for (pos, &v) in whole.order.iter().enumerate() {
            map[v] = image[pos];
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            let (a, b) = (map[u].min(map[v]), map[u].max(map[v]));
            let j = index[&(a, b)];
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri.max(rj)] = ri.min(rj);
        }
        seen += 1;
        seen >= AUTOMORPHISM_CAP
    });
    (0..edges.len())
        .filter(|&i| find(&mut parent, i) == i)
        .map(|i| edges[i])
        .collect()
}

/// Containment using the structure-aware embedder when the pattern is a
/// blowup of a spider, and the generic one otherwise.
pub fn contains_pattern(g: &Graph, pattern: &Pattern) -> bool {
    pattern
        .contained_in_structured(g)
        .unwrap_or_else(|| pattern.contained_in(g))
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads; 1 runs the search sequentially and deterministically.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { threads: 1 }
    }
}

/// Outcome of [`turan_number`].
#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub n: usize,
    #[serde(rename = "h")]
    pub h_spec: String,
    #[serde(rename = "ex")]
    pub ex_value: usize,
    #[serde(serialize_with = "graph6_string")]
    pub witness: Graph,
    pub nodes_explored: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

fn graph6_string<S: Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_graph6())
}

fn check_pattern(pattern: &Pattern) -> Result<()> {
    let h = pattern.graph();
    if h.order() < 2 || !h.is_connected() {
        return Err(Error::Parameter(
            "forbidden graph must be connected with at least 2 vertices".into(),
        ));
    }
    Ok(())
}

fn complete_graph(n: usize) -> Result<Graph> {
    let mut g = Graph::new(n)?;
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

#[derive(Clone)]
struct Node {
    graph: Graph,
    edges: usize,
    /// Next slot to decide.
    slot: usize,
    /// Set once some edge `0j` has been skipped: the rest of row 0 is empty.
    row_closed: bool,
}

struct Search<'a> {
    pattern: &'a Pattern,
    n: usize,
    slots: Vec<(usize, usize)>,
    /// `incident[i][v]`: slots at index `>= i` touching `v`.
    incident: Vec<Vec<usize>>,
    best: AtomicUsize,
    witness: Mutex<Graph>,
    nodes: AtomicU64,
    /// `ex(n - 1, H)` when known. Deleting a vertex `v` from an `H`-free
    /// graph `G` leaves `e(G) - deg(v) <= ex(n - 1, H)`.
    previous: Option<usize>,
}

impl<'a> Search<'a> {
    fn new(n: usize, pattern: &'a Pattern, previous: Option<(usize, &Graph)>) -> Result<Self> {
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let mut incident = vec![vec![0; n]; slots.len() + 1];
        for i in (0..slots.len()).rev() {
            incident[i] = incident[i + 1].clone();
            incident[i][slots[i].0] += 1;
            incident[i][slots[i].1] += 1;
        }
        // the smaller witness plus an isolated vertex is a valid start
        let (best, witness) = match previous {
            Some((ex, g)) => (ex, g.disjoint_union(&Graph::new(1)?)?),
            None => (0, Graph::new(n)?),
        };
        Ok(Search {
            pattern,
            n,
            slots,
            incident,
            best: AtomicUsize::new(best),
            witness: Mutex::new(witness),
            nodes: AtomicU64::new(0),
            previous: previous.map(|(ex, _)| ex),
        })
    }

    /// Degree cap once row 0 is settled.
    fn cap(&self, node: &Node) -> Option<usize> {
        (node.row_closed || node.slot >= self.n - 1).then(|| node.graph.degree(0))
    }

    /// Averaging over vertex deletions: `ex(n) <= ex(n-1) n / (n-2)`.
    fn global_bound(&self) -> usize {
        match self.previous {
            Some(ex) if self.n > 2 => ex * self.n / (self.n - 2),
            _ => self.slots.len(),
        }
    }

    /// Edges still addable at `v`.
    fn room(&self, node: &Node, cap: Option<usize>, v: usize) -> usize {
        let free = self.incident[node.slot][v];
        match cap {
            Some(d) => free.min(d.saturating_sub(node.graph.degree(v))),
            None => free,
        }
    }

    fn upper_bound(&self, node: &Node) -> usize {
        let remaining = self.slots.len() - node.slot;
        let cap = self.cap(node);
        let extra = match cap {
            Some(_) => {
                let room: usize = (0..self.n).map(|v| self.room(node, cap, v)).sum();
                remaining.min(room / 2)
            }
            None => remaining,
        };
        (node.edges + extra).min(self.global_bound())
    }

    /// Whether every vertex can still reach the minimum degree that a graph
    /// beating `best` needs.
    fn degrees_feasible(&self, node: &Node, best: usize) -> bool {
        let Some(ex) = self.previous else {
            return true;
        };
        let need = (best + 1).saturating_sub(ex);
        let cap = self.cap(node);
        (0..self.n).all(|v| node.graph.degree(v) + self.room(node, cap, v) >= need)
    }

    /// Counts the node, records it as incumbent if it improves, and says
    /// whether its subtree can still beat the incumbent.
    fn enter(&self, node: &Node) -> bool {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        if node.edges > self.best.load(Ordering::Relaxed) {
            let mut witness = self.witness.lock().expect("witness lock");
            if node.edges > self.best.load(Ordering::Relaxed) {
                *witness = node.graph.clone();
                self.best.store(node.edges, Ordering::Relaxed);
            }
        }
        let best = self.best.load(Ordering::Relaxed);
        node.slot < self.slots.len() && self.upper_bound(node) > best && self.degrees_feasible(node, best)
    }

    /// Vertices after `u` with the same neighbours among `0..u` can be
    /// swapped without touching any decided slot, so within each such class
    /// the neighbours of `u` may be taken to be a prefix. Adding `uv` is
    /// allowed only if the nearest earlier member of `v`'s class is already
    /// joined to `u`.
    fn first_in_cell(&self, node: &Node, u: usize, v: usize) -> bool {
        let below = VertexSet::full(u);
        let sig = node.graph.neighbors(v).intersection(below);
        match (u + 1..v).rev().find(|&a| node.graph.neighbors(a).intersection(below) == sig) {
            Some(a) => node.graph.has_edge(u, a),
            None => true,
        }
    }

    fn children(&self, node: &Node) -> Vec<Node> {
        let (u, v) = self.slots[node.slot];
        let mut out = Vec::with_capacity(2);
        let may_add = if u == 0 {
            !node.row_closed
        } else {
            let d = self.cap(node).expect("row 0 settled");
            node.graph.degree(u) < d && node.graph.degree(v) < d && self.first_in_cell(node, u, v)
        };
        if may_add {
            let mut graph = node.graph.clone();
            graph.add_edge(u, v).expect("slot in range");
            if !self.pattern.contains_through(&graph, u, v) {
                out.push(Node {
                    graph,
                    edges: node.edges + 1,
                    slot: node.slot + 1,
                    row_closed: node.row_closed,
                });
            }
        }
        out.push(Node {
            graph: node.graph.clone(),
            edges: node.edges,
            slot: node.slot + 1,
            row_closed: node.row_closed || u == 0,
        });
        out
    }

    fn visit(&self, node: Node) {
        if self.enter(&node) {
            for child in self.children(&node) {
                self.visit(child);
            }
        }
    }

    fn run(&self, threads: usize) -> Result<()> {
        let root = Node {
            graph: Graph::new(self.n)?,
            edges: 0,
            slot: 0,
            row_closed: false,
        };
        if threads <= 1 {
            self.visit(root);
            return Ok(());
        }
        // Expand breadth-first until there is enough work to share.
        let mut frontier = vec![root];
        while !frontier.is_empty() && frontier.len() < 64 * threads {
            let mut next = Vec::new();
            for node in &frontier {
                if self.enter(node) {
                    next.extend(self.children(node));
                }
            }
            frontier = next;
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
        pool.install(|| frontier.into_par_iter().for_each(|node| self.visit(node)));
        Ok(())
    }
}

/// `ex(n, H)` with an extremal witness.
pub fn turan_number(n: usize, pattern: &Pattern) -> Result<SearchResult> {
    turan_number_with(n, pattern, &SearchOptions::default())
}

pub fn turan_number_with(
    n: usize,
    pattern: &Pattern,
    options: &SearchOptions,
) -> Result<SearchResult> {
    if n == 0 || n > MAX_SEARCH_ORDER {
        return Err(Error::Parameter(format!(
            "n must be in 1..={MAX_SEARCH_ORDER}, got {n}"
        )));
    }
    check_pattern(pattern)?;
    let start = Instant::now();
    // ex(m, H) for m < n feeds the bounds at m + 1
    let mut nodes = 0;
    let mut witness = complete_graph(n.min(pattern.graph().order() - 1))?;
    for m in pattern.graph().order()..=n {
        let search = Search::new(m, pattern, Some((witness.edge_count(), &witness)))?;
        search.run(options.threads)?;
        nodes += search.nodes.load(Ordering::Relaxed);
        witness = search.witness.into_inner().expect("witness lock");
    }
    if pattern.contained_in(&witness) {
        return Err(Error::BoundViolated(format!(
            "witness {} contains the pattern",
            witness.to_graph6()
        )));
    }
    Ok(SearchResult {
        n,
        h_spec: pattern.label().to_string(),
        ex_value: witness.edge_count(),
        witness,
        nodes_explored: nodes,
        wall_time: start.elapsed(),
    })
}

/// `ex(n, H)` by checking every labelled graph on `n <= 7` vertices.
pub fn naive_turan_oracle(n: usize, h: &Graph) -> Result<usize> {
    if n == 0 || n > MAX_ORACLE_ORDER {
        return Err(Error::Parameter(format!(
            "oracle supports n in 1..={MAX_ORACLE_ORDER}, got {n}"
        )));
    }
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut best = 0;
    for mask in 0u64..1 << slots.len() {
        if (mask.count_ones() as usize) <= best {
            continue;
        }
        let mut g = Graph::new(n)?;
        for (i, &(u, v)) in slots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v)?;
            }
        }
        if !contains(&g, h) {
            best = mask.count_ones() as usize;
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExRow {
    pub n: usize,
    pub ex: usize,
}

/// `ex(n, H)` over a range of `n`.
#[derive(Clone, Debug, Serialize)]
pub struct ExTable {
    pub h: String,
    pub rows: Vec<ExRow>,
    /// Least-squares slope of `ln ex` against `ln n`, rounded to a fraction
    /// with denominator at most 1000. Diagnostic only: small `n` says
    /// little about asymptotics.
    pub fitted_slope: Option<Rational>,
}

pub fn ex_table(
    pattern: &Pattern,
    range: RangeInclusive<usize>,
    options: &SearchOptions,
) -> Result<ExTable> {
    let rows = range
        .map(|n| {
            turan_number_with(n, pattern, options).map(|r| ExRow {
                n,
                ex: r.ex_value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExTable {
        h: pattern.label().to_string(),
        fitted_slope: fitted_slope(&rows),
        rows,
    })
}

fn fitted_slope(rows: &[ExRow]) -> Option<Rational> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= 1 && r.ex >= 1)
        .map(|r| ((r.n as f64).ln(), (r.ex as f64).ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (sxx, sxy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x * x, b + x * y));
    let denom = m * sxx - sx * sx;
    if denom.abs() < f64::EPSILON {
        return None;
    }
    approximate((m * sxy - sx * sy) / denom, 1000)
}

/// Best rational approximation with bounded denominator, by continued
/// fractions.
fn approximate(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = x;
    loop {
        let a = rest.floor();
        if a > 1e12 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a as f64;
        if frac < 1e-12 {
            break;
        }
        rest = 1.0 / frac;
    }
    (q1 != 0).then(|| Rational::ratio(p1, q1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete, complete_bipartite, cycle, petersen, star};

    #[test]
    fn containment_examples() {
        assert!(contains(&complete(4).unwrap(), &cycle(4).unwrap()));
        assert!(!contains(&petersen(), &cycle(4).unwrap()));
        assert!(contains(&petersen(), &cycle(5).unwrap()));
        assert!(contains(
            &complete_bipartite(3, 3).unwrap(),
            &complete_bipartite(2, 3).unwrap()
        ));
        assert!(!contains(&cycle(5).unwrap(), &complete(3).unwrap()));
        assert!(!contains(&complete(3).unwrap(), &complete(4).unwrap()));
    }

    #[test]
    fn orbit_representatives() {
        let p = Pattern::new(cycle(6).unwrap());
        assert_eq!(p.edge_representatives(), 1);
        let p = Pattern::new(complete_bipartite(2, 3).unwrap());
        assert_eq!(p.edge_representatives(), 1);
        // Path with 3 edges: the middle edge and the two end edges.
        let p = Pattern::new(crate::families::path(3).unwrap());
        assert_eq!(p.edge_representatives(), 2);
    }

    #[test]
    fn structured_embedder_on_known_cases() {
        let family: Family = "blowup:t=2:spider:1,1".parse().unwrap();
        let p = Pattern::from_family(&family).unwrap();
        assert!(p.has_blowup_structure());
        assert_eq!(p.contained_in_structured(&cycle(4).unwrap()), Some(true));
        assert_eq!(p.contained_in_structured(&cycle(5).unwrap()), Some(false));
        assert_eq!(p.contained_in_structured(&petersen()), Some(false));

        let family: Family = "Kst:s=2,t=3".parse().unwrap();
        let p = Pattern::from_family(&family).unwrap();
        let k33 = complete_bipartite(3, 3).unwrap();
        assert_eq!(p.contained_in_structured(&k33), Some(true));
        assert_eq!(p.contained_in_structured(&complete_bipartite(2, 2).unwrap()), Some(false));
    }

    #[test]
    fn small_turan_numbers() {
        let c4 = Pattern::new(cycle(4).unwrap());
        assert_eq!(turan_number(4, &c4).unwrap().ex_value, 4);
        assert_eq!(turan_number(3, &c4).unwrap().ex_value, 3);
        let k3 = Pattern::new(complete(3).unwrap());
        assert_eq!(turan_number(5, &k3).unwrap().ex_value, 6);
        let k2 = Pattern::new(complete(2).unwrap());
        assert_eq!(turan_number(5, &k2).unwrap().ex_value, 0);
        // K_{1,3}-free means maximum degree 2.
        let claw = Pattern::new(star(3).unwrap());
        assert_eq!(turan_number(6, &claw).unwrap().ex_value, 6);
    }

    #[test]
    fn search_rejects_bad_input() {
        let c4 = Pattern::new(cycle(4).unwrap());
        assert!(turan_number(0, &c4).is_err());
        assert!(turan_number(13, &c4).is_err());
        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(turan_number(5, &Pattern::new(two_edges)).is_err());
        assert!(naive_turan_oracle(8, cycle(4).as_ref().unwrap()).is_err());
    }

    #[test]
    fn oracle_examples() {
        let c4 = cycle(4).unwrap();
        assert_eq!(naive_turan_oracle(3, &c4).unwrap(), 3);
        assert_eq!(naive_turan_oracle(4, &c4).unwrap(), 4);
        assert_eq!(naive_turan_oracle(5, &complete(3).unwrap()).unwrap(), 6);
    }

    #[test]
    fn slope_approximation() {
        assert_eq!(approximate(1.5, 1000), Some(Rational::ratio(3, 2)));
        assert_eq!(approximate(0.333_333_333_3, 1000), Some(Rational::ratio(1, 3)));
        let rows = [ExRow { n: 2, ex: 4 }, ExRow { n: 4, ex: 16 }];
        assert_eq!(fitted_slope(&rows), Some(Rational::integer(2)));
        assert_eq!(fitted_slope(&rows[..1]), None);
    }
}
