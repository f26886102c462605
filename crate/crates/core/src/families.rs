//! Rooted trees, spiders, blowups and the named graph families built from
//! them, together with tree density and balancedness.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet, MAX_VERTICES};
use crate::rational::Rational;

/// Largest number of non-root vertices [`density`] will enumerate subsets of.
pub const DENSITY_ENUMERATION_CAP: usize = 24;

/// A tree together with an independent set of roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    tree: Graph,
    roots: VertexSet,
}

impl RootedTree {
    pub fn new(tree: Graph, roots: VertexSet) -> Result<Self> {
        if !roots.is_subset(tree.vertices()) {
            return Err(Error::InvalidTree("roots are not vertices of the tree".into()));
        }
        if tree.edge_count() + 1 != tree.order() || !tree.is_connected() {
            return Err(Error::InvalidTree("graph is not a tree".into()));
        }
        if roots == tree.vertices() {
            return Err(Error::InvalidTree("every vertex is a root".into()));
        }
        if let Some((u, v)) = tree
            .edges()
            .find(|&(u, v)| roots.contains(u) && roots.contains(v))
        {
            return Err(Error::InvalidTree(format!(
                "roots {u} and {v} are adjacent"
            )));
        }
        Ok(RootedTree { tree, roots })
    }

    pub fn tree(&self) -> &Graph {
        &self.tree
    }

    pub fn roots(&self) -> VertexSet {
        self.roots
    }

    pub fn non_roots(&self) -> VertexSet {
        self.tree.vertices().difference(self.roots)
    }
}

/// An `s`-legged spider, described by its length vector.
///
/// Vertex 0 is the centre; leg `i` occupies the next `legs[i]` indices in
/// order of increasing distance from the centre, so its last vertex is the
/// leaf `x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Spider {
    legs: Vec<usize>,
}

/// Builds the spider with the given leg lengths, in order.
pub fn make_spider(lengths: &[usize]) -> Result<Spider> {
    Spider::new(lengths.to_vec())
}

impl Spider {
    pub fn new(legs: Vec<usize>) -> Result<Self> {
        if legs.len() < 2 {
            return Err(Error::InvalidSpider(format!(
                "need at least 2 legs, got {}",
                legs.len()
            )));
        }
        if legs.contains(&0) {
            return Err(Error::InvalidSpider("leg lengths must be positive".into()));
        }
        Ok(Spider { legs })
    }

    /// `S^s_{b,k}`: length vector `(b, k, ..., k)` with `s` entries.
    pub fn b_k(s: usize, b: usize, k: usize) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidSpider(format!("need s >= 2, got {s}")));
        }
        let mut legs = vec![k; s];
        legs[0] = b;
        Spider::new(legs)
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    /// `e(S)`, the sum of the leg lengths.
    pub fn edge_count(&self) -> usize {
        self.legs.iter().sum()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.edge_count()
    }

    pub fn longest_leg(&self) -> usize {
        self.legs.iter().copied().max().unwrap_or(0)
    }

    pub fn center(&self) -> usize {
        0
    }

    /// Vertices of leg `i` from the centre (inclusive) to the leaf.
    pub fn leg_vertices(&self, i: usize) -> Vec<usize> {
        let start = 1 + self.legs[..i].iter().sum::<usize>();
        std::iter::once(0)
            .chain(start..start + self.legs[i])
            .collect()
    }

    /// The leaf vector `(x_1, ..., x_s)`.
    pub fn leaves(&self) -> Vec<usize> {
        let mut at = 0;
        self.legs
            .iter()
            .map(|&len| {
                at += len;
                at
            })
            .collect()
    }

    pub fn graph(&self) -> Result<Graph> {
        let mut g = Graph::new(self.vertex_count())?;
        for i in 0..self.legs.len() {
            for pair in self.leg_vertices(i).windows(2) {
                g.add_edge(pair[0], pair[1])?;
            }
        }
        Ok(g)
    }

    /// The spider as a rooted tree whose roots are its leaves.
    pub fn rooted_at_leaves(&self) -> Result<RootedTree> {
        RootedTree::new(self.graph()?, self.leaves().into_iter().collect())
    }
}

impl fmt::Display for Spider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let legs: Vec<String> = self.legs.iter().map(usize::to_string).collect();
        write!(f, "spider:{}", legs.join(","))
    }
}

/// `t * T_R`: `t` copies of the tree glued along the roots.
///
/// Roots come first, in increasing order of their index in `T`; copy `c`
/// (for `c = 0..t`) then lists the non-roots of `T` in increasing order.
pub fn blowup(tree: &RootedTree, t: usize) -> Result<Graph> {
    let layout = BlowupLayout::new(tree, t)?;
    let mut g = Graph::new(layout.order)?;
    for copy in 0..t {
        for (u, v) in tree.tree().edges() {
            g.add_edge(layout.image(copy, u), layout.image(copy, v))?;
        }
    }
    Ok(g)
}

/// Vertex numbering used by [`blowup`].
#[derive(Clone, Debug)]
pub struct BlowupLayout {
    slot: Vec<usize>,
    is_root: Vec<bool>,
    roots: usize,
    per_copy: usize,
    order: usize,
}

impl BlowupLayout {
    pub fn new(tree: &RootedTree, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::Parameter("blowup needs t >= 1".into()));
        }
        let n = tree.tree().order();
        let roots = tree.roots().len();
        let per_copy = n - roots;
        let order = roots + t * per_copy;
        if order > MAX_VERTICES {
            return Err(Error::VertexCount {
                got: order,
                max: MAX_VERTICES,
            });
        }
        let (mut next_root, mut next_other) = (0, 0);
        let mut slot = vec![0; n];
        let mut is_root = vec![false; n];
        for v in 0..n {
            if tree.roots().contains(v) {
                slot[v] = next_root;
                is_root[v] = true;
                next_root += 1;
            } else {
                slot[v] = next_other;
                next_other += 1;
            }
        }
        Ok(BlowupLayout {
            slot,
            is_root,
            roots,
            per_copy,
            order,
        })
    }

    /// Vertex of the blowup playing the role of `v` in copy `copy`.
    pub fn image(&self, copy: usize, v: usize) -> usize {
        if self.is_root[v] {
            self.slot[v]
        } else {
            self.roots + copy * self.per_copy + self.slot[v]
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// Density of a rooted tree and the sparsest non-root subset.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DensityReport {
    /// `ρ_T = e(V∖R)/|V∖R|`.
    pub rho: Rational,
    /// A nonempty non-root subset minimising `ρ_T(S)`.
    pub witness: Vec<usize>,
    pub witness_rho: Rational,
    pub balanced: bool,
}

/// Exact density and balancedness by enumerating every nonempty subset of
/// non-root vertices.
///
/// `e(S)` counts the edges with at least one end in `S`. Among subsets of
/// minimum density the witness is the one with the smallest bitmask.
pub fn density(tree: &RootedTree) -> Result<DensityReport> {
    let g = tree.tree();
    let free: Vec<usize> = tree.non_roots().iter().collect();
    if free.len() > DENSITY_ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            non_roots: free.len(),
            cap: DENSITY_ENUMERATION_CAP,
        });
    }
    let deg: Vec<u64> = free.iter().map(|&v| g.degree(v) as u64).collect();

    // Walk the subsets in Gray-code order, updating e(S) one vertex at a time.
    let mut set = 0u64;
    let mut size = 0u64;
    let mut edges = 0u64;
    let mut best: Option<(u64, u64, u64)> = None; // (edges, size, mask)
    for step in 1u64..1 << free.len() {
        let flip = step.trailing_zeros() as usize;
        let v = free[flip];
        let inside = (g.neighbors(v).bits() & set).count_ones() as u64;
        if set >> v & 1 == 0 {
            set |= 1 << v;
            size += 1;
            edges += deg[flip] - inside;
        } else {
            set &= !(1 << v);
            size -= 1;
            edges -= deg[flip] - inside;
        }
        let better = match best {
            None => true,
            Some((be, bs, bm)) => {
                let (lhs, rhs) = (edges * bs, be * size);
                lhs < rhs || (lhs == rhs && set < bm)
            }
        };
        if better {
            best = Some((edges, size, set));
        }
    }
    let (be, bs, bm) = best.ok_or(Error::InvalidTree("no non-root vertices".into()))?;
    let rho = Rational::ratio(tree_edges_touching(g, tree.non_roots()), free.len() as u64);
    let witness_rho = Rational::ratio(be, bs);
    Ok(DensityReport {
        balanced: witness_rho >= rho,
        rho,
        witness: VertexSet::from_bits(bm).iter().collect(),
        witness_rho,
    })
}

fn tree_edges_touching(g: &Graph, set: VertexSet) -> u64 {
    g.edges()
        .filter(|&(u, v)| set.contains(u) || set.contains(v))
        .count() as u64
}

/// Closed-form balancedness of a spider rooted at its leaves:
/// `e(S) >= (s - 1) * k` with `k` the longest leg.
pub fn spider_balanced_criterion(spider: &Spider) -> bool {
    spider.edge_count() >= (spider.leg_count() - 1) * spider.longest_leg()
}

/// The exponent `2 - 1/ρ` attached to a balanced tree of density `ρ`.
pub fn exponent_of_density(rho: &Rational) -> Result<Rational> {
    if !rho.is_positive() {
        return Err(Error::Parameter(format!("density must be positive, got {rho}")));
    }
    Ok(Rational::two() - rho.recip()?)
}

pub fn complete(n: usize) -> Result<Graph> {
    let mut g = Graph::new(n)?;
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Parameter(format!("cycles need n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// The path with `edges` edges.
pub fn path(edges: usize) -> Result<Graph> {
    let list: Vec<_> = (0..edges).map(|i| (i, i + 1)).collect();
    Graph::from_edges(edges + 1, &list)
}

/// `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

/// `K_{s,t}` with parts `0..s` and `s..s+t`.
pub fn complete_bipartite(s: usize, t: usize) -> Result<Graph> {
    subdivided_complete_bipartite(s, t, 1)
}

/// `K^k_{s,t}`: `K_{s,t}` with every edge replaced by a path of length `k`.
///
/// The branch vertices are `0..s` and `s..s+t`; the `k - 1` subdivision
/// vertices of each edge follow, edge by edge.
pub fn subdivided_complete_bipartite(s: usize, t: usize, k: usize) -> Result<Graph> {
    if s == 0 || t == 0 || k == 0 {
        return Err(Error::Parameter(format!(
            "K^k_(s,t) needs s, t, k >= 1, got s={s}, t={t}, k={k}"
        )));
    }
    let order = s + t + s * t * (k - 1);
    let mut g = Graph::new(order)?;
    let mut next = s + t;
    for a in 0..s {
        for b in s..s + t {
            let mut prev = a;
            for _ in 1..k {
                g.add_edge(prev, next)?;
                prev = next;
                next += 1;
            }
            g.add_edge(prev, b)?;
        }
    }
    Ok(g)
}

/// `L_{s,t}(k)`: `K^k_{s,t}` plus one vertex (the last) joined to the whole
/// part of size `t`.
pub fn l_graph(s: usize, t: usize, k: usize) -> Result<Graph> {
    let base = subdivided_complete_bipartite(s, t, k)?;
    let apex = base.order();
    let mut g = Graph::new(apex + 1)?;
    for (u, v) in base.edges() {
        g.add_edge(u, v)?;
    }
    for b in s..s + t {
        g.add_edge(apex, b)?;
    }
    Ok(g)
}

/// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
pub fn petersen() -> Graph {
    let mut g = Graph::new(10).expect("10 vertices");
    for i in 0..5 {
        g.add_edge(i, (i + 1) % 5).expect("valid");
        g.add_edge(i, i + 5).expect("valid");
        g.add_edge(i + 5, (i + 2) % 5 + 5).expect("valid");
    }
    g
}

/// Graph families accepted on the command line.
///
/// ```text
/// spider:1,2,2            blowup:t=3:spider:2,2
/// Kst^k:s=2,t=3,k=2       Kst:s=2,t=3
/// Lst:s=2,t=3,k=2         complete:4   cycle:5   star:3   path:4
/// petersen                g6:<graph6 string>
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Spider(Spider),
    Blowup { t: usize, spider: Spider },
    Subdivision { s: usize, t: usize, k: usize },
    LGraph { s: usize, t: usize, k: usize },
    Complete(usize),
    Cycle(usize),
    Star(usize),
    Path(usize),
    Petersen,
    Graph6(Graph),
}

impl Family {
    pub fn graph(&self) -> Result<Graph> {
        match self {
            Family::Spider(spider) => spider.graph(),
            Family::Blowup { t, spider } => blowup(&spider.rooted_at_leaves()?, *t),
            Family::Subdivision { s, t, k } => subdivided_complete_bipartite(*s, *t, *k),
            Family::LGraph { s, t, k } => l_graph(*s, *t, *k),
            Family::Complete(n) => complete(*n),
            Family::Cycle(n) => cycle(*n),
            Family::Star(n) => star(*n),
            Family::Path(n) => path(*n),
            Family::Petersen => Ok(petersen()),
            Family::Graph6(g) => Ok(g.clone()),
        }
    }

    /// The spider `S` and multiplicity `t` when the family is `t * S` with
    /// roots at the leaves.
    pub fn blowup_structure(&self) -> Option<(Spider, usize)> {
        match self {
            Family::Blowup { t, spider } => Some((spider.clone(), *t)),
            Family::Subdivision { s, t, k } if *s >= 2 => {
                Some((Spider::new(vec![*k; *s]).ok()?, *t))
            }
            Family::LGraph { s, t, k } => {
                let mut legs = vec![*k; s + 1];
                legs[0] = 1;
                Some((Spider::new(legs).ok()?, *t))
            }
            _ => None,
        }
    }

    /// Rooted-tree reading of the family, for the spider form only.
    pub fn spider(&self) -> Option<&Spider> {
        match self {
            Family::Spider(spider) => Some(spider),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Spider(spider) => write!(f, "{spider}"),
            Family::Blowup { t, spider } => write!(f, "blowup:t={t}:{spider}"),
            Family::Subdivision { s, t, k } => write!(f, "Kst^k:s={s},t={t},k={k}"),
            Family::LGraph { s, t, k } => write!(f, "Lst:s={s},t={t},k={k}"),
            Family::Complete(n) => write!(f, "complete:{n}"),
            Family::Cycle(n) => write!(f, "cycle:{n}"),
            Family::Star(n) => write!(f, "star:{n}"),
            Family::Path(n) => write!(f, "path:{n}"),
            Family::Petersen => write!(f, "petersen"),
            Family::Graph6(g) => write!(f, "g6:{}", g.to_graph6()),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let spec = text.trim();
        let fail = |reason: &str| Error::FamilySpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let number = |s: &str| -> Result<usize> {
            s.trim()
                .parse::<usize>()
                .map_err(|_| fail(&format!("`{s}` is not a nonnegative integer")))
        };
        let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let family = match head {
            "spider" => {
                let legs = rest.split(',').map(number).collect::<Result<Vec<_>>>()?;
                Family::Spider(Spider::new(legs).map_err(|e| fail(&e.to_string()))?)
            }
            "blowup" => {
                let (t_part, inner) = rest
                    .split_once(':')
                    .ok_or_else(|| fail("expected blowup:t=<t>:spider:<legs>"))?;
                let t = t_part
                    .strip_prefix("t=")
                    .ok_or_else(|| fail("expected t=<t>"))
                    .and_then(number)?;
                if t == 0 {
                    return Err(fail("t must be positive"));
                }
                match inner.parse::<Family>()? {
                    Family::Spider(spider) => Family::Blowup { t, spider },
                    _ => return Err(fail("only spiders rooted at their leaves can be blown up")),
                }
            }
            "Kst^k" | "Kst" | "Lst" => {
                let mut params = [None; 3];
                for item in rest.split(',').filter(|s| !s.is_empty()) {
                    let (key, value) = item
                        .split_once('=')
                        .ok_or_else(|| fail("expected key=value"))?;
                    let slot = match key.trim() {
                        "s" => 0,
                        "t" => 1,
                        "k" => 2,
                        other => return Err(fail(&format!("unknown parameter `{other}`"))),
                    };
                    params[slot] = Some(number(value)?);
                }
                let s = params[0].ok_or_else(|| fail("missing s"))?;
                let t = params[1].ok_or_else(|| fail("missing t"))?;
                let k = match (head, params[2]) {
                    ("Kst", Some(_)) => return Err(fail("Kst takes no k; use Kst^k")),
                    ("Kst", None) => 1,
                    (_, Some(k)) => k,
                    (_, None) => return Err(fail("missing k")),
                };
                if s == 0 || t == 0 || k == 0 {
                    return Err(fail("s, t and k must be positive"));
                }
                if head == "Lst" {
                    Family::LGraph { s, t, k }
                } else {
                    Family::Subdivision { s, t, k }
                }
            }
            "complete" => Family::Complete(number(rest)?),
            "cycle" => Family::Cycle(number(rest)?),
            "star" => Family::Star(number(rest)?),
            "path" => Family::Path(number(rest)?),
            "petersen" if rest.is_empty() => Family::Petersen,
            "g6" => Family::Graph6(Graph::from_graph6(rest).map_err(|e| fail(&e.to_string()))?),
            _ => return Err(fail("unknown family")),
        };
        // Surface size errors at parse time rather than on first use.
        family.graph().map_err(|e| fail(&e.to_string()))?;
        Ok(family)
    }
}
