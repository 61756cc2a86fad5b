//! Shadow-graph analysis and detection of monochromatic Berge copies.
//!
//! A pair `{a, b}` is *light* in color `i` when fewer than `C(r, 2)`
//! hyperedges of color `i` contain it, and *heavy* otherwise. A copy of the
//! target whose image pairs are all heavy in `i` always extends to a Berge
//! copy in color `i`: each pair has at least `C(r,2)` candidate hyperedges and
//! each hyperedge serves at most `C(r,2)` pairs, so Hall's condition holds.
//!
//! General detection enumerates core embeddings and decides each one with a
//! maximum bipartite matching between target edges and candidate hyperedges.

use std::fmt;

use serde::Serialize;

use crate::coloring::{Color, ColoredHypergraph};
use crate::combinatorics::{binomial, next_colex, pair_rank, rank_colex_unchecked, unrank_colex};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::matching::perfect_matching;
use crate::parallel::{ordered_search, Parallelism, Search, Stop, Ticker};
use crate::target::TargetGraph;
use crate::witness::BergeWitness;
pub use crate::witness::verify_witness;

/// For each color and each pair of vertices, the ranks of the hyperedges of
/// that color containing the pair, in insertion order.
#[derive(Clone, Debug)]
pub struct PairIndex {
    n: usize,
    r: usize,
    lists: Vec<Vec<Vec<u64>>>,
}

impl PairIndex {
    pub fn empty(n: usize, r: usize, c: usize) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        PairIndex {
            n,
            r,
            lists: vec![vec![Vec::new(); pairs]; c],
        }
    }

    pub fn build(h: &ColoredHypergraph) -> Self {
        let mut index = Self::empty(h.num_vertices(), h.uniformity(), h.num_colors());
        let mut set: Vec<usize> = (0..h.uniformity()).collect();
        for &col in h.colors() {
            index.push(&set, col);
            next_colex(&mut set, h.num_vertices());
        }
        index
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn num_colors(&self) -> usize {
        self.lists.len()
    }

    /// Registers the sorted hyperedge `set` under `color`.
    pub fn push(&mut self, set: &[usize], color: Color) {
        let rank = rank_colex_unchecked(set);
        let lists = &mut self.lists[usize::from(color) - 1];
        for (i, &b) in set.iter().enumerate() {
            for &a in &set[..i] {
                lists[pair_rank(a, b)].push(rank);
            }
        }
    }

    /// Undoes the latest [`push`](Self::push) of `set` under `color`.
    pub fn pop(&mut self, set: &[usize], color: Color) {
        let lists = &mut self.lists[usize::from(color) - 1];
        for (i, &b) in set.iter().enumerate() {
            for &a in &set[..i] {
                lists[pair_rank(a, b)].pop();
            }
        }
    }

    /// Removes `set` from `color` wherever it sits in the lists.
    pub fn remove(&mut self, set: &[usize], color: Color) {
        let rank = rank_colex_unchecked(set);
        let lists = &mut self.lists[usize::from(color) - 1];
        for (i, &b) in set.iter().enumerate() {
            for &a in &set[..i] {
                let list = &mut lists[pair_rank(a, b)];
                if let Some(pos) = list.iter().position(|&x| x == rank) {
                    list.remove(pos);
                }
            }
        }
    }

    #[inline]
    pub fn candidates(&self, color: Color, a: usize, b: usize) -> &[u64] {
        &self.lists[usize::from(color) - 1][pair_rank(a, b)]
    }

    #[inline]
    pub fn cover(&self, color: Color, a: usize, b: usize) -> usize {
        self.candidates(color, a, b).len()
    }
}

/// Light-pair threshold `C(r, 2)`.
pub fn heavy_threshold(r: usize) -> usize {
    r * (r - 1) / 2
}

/// Per-color light pairs `E_i`, light vertices `V_i`, and `|V_i ∩ V_j|`.
#[derive(Clone, Debug, Serialize)]
pub struct ShadowReport {
    pub r: usize,
    pub c: usize,
    pub n: usize,
    pub threshold: usize,
    /// `cover_counts[i - 1][pair_rank]`: color-`i` hyperedges containing the pair.
    #[serde(skip)]
    pub cover_counts: Vec<Vec<usize>>,
    pub light_pairs: Vec<Vec<(usize, usize)>>,
    pub light_vertices: Vec<Vec<usize>>,
    /// Symmetric `c × c` matrix; the diagonal holds `|V_i|`.
    pub intersections: Vec<Vec<usize>>,
}

pub fn shadow_report(h: &ColoredHypergraph) -> ShadowReport {
    let index = PairIndex::build(h);
    let (n, c) = (h.num_vertices(), h.num_colors());
    let threshold = heavy_threshold(h.uniformity());
    let cover_counts: Vec<Vec<usize>> = index
        .lists
        .iter()
        .map(|per_pair| per_pair.iter().map(Vec::len).collect())
        .collect();
    let mut light_pairs = vec![Vec::new(); c];
    let mut marks = vec![vec![false; n]; c];
    for b in 0..n {
        for a in 0..b {
            for i in 0..c {
                if cover_counts[i][pair_rank(a, b)] < threshold {
                    light_pairs[i].push((a, b));
                    marks[i][a] = true;
                    marks[i][b] = true;
                }
            }
        }
    }
    let light_vertices: Vec<Vec<usize>> = marks
        .iter()
        .map(|m| (0..n).filter(|&v| m[v]).collect())
        .collect();
    let intersections = (0..c)
        .map(|i| (0..c).map(|j| (0..n).filter(|&v| marks[i][v] && marks[j][v]).count()).collect())
        .collect();
    ShadowReport {
        r: h.uniformity(),
        c,
        n,
        threshold,
        cover_counts,
        light_pairs,
        light_vertices,
        intersections,
    }
}

/// Pairs heavy in `color`.
pub fn heavy_graph(h: &ColoredHypergraph, color: Color) -> SimpleGraph {
    let index = PairIndex::build(h);
    let threshold = heavy_threshold(h.uniformity());
    let n = h.num_vertices();
    let mut g = SimpleGraph::empty(n);
    for b in 0..n {
        for a in 0..b {
            if index.cover(color, a, b) >= threshold {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Pairs covered by at least one hyperedge of `color`.
pub fn support_graph(h: &ColoredHypergraph, color: Color) -> SimpleGraph {
    let index = PairIndex::build(h);
    let n = h.num_vertices();
    SimpleGraph::from_edges(
        n,
        (0..n).flat_map(|b| (0..b).map(move |a| (a, b))).filter(|&(a, b)| index.cover(color, a, b) > 0),
    )
}

/// Builds a Berge copy from a core whose image pairs are all heavy.
///
/// `embedding[v]` is the hypergraph vertex of target vertex `v`.
pub fn heavy_to_berge(
    h: &ColoredHypergraph,
    color: Color,
    g: &TargetGraph,
    embedding: &[usize],
) -> Result<BergeWitness> {
    check_core(h.num_vertices(), g, embedding)?;
    let index = PairIndex::build(h);
    let threshold = heavy_threshold(h.uniformity());
    for &(a, b) in g.edges() {
        let (u, v) = (embedding[a], embedding[b]);
        let cover = index.cover(color, u, v);
        if cover < threshold {
            return Err(Error::Contract(format!(
                "pair ({u},{v}) is light in color {color}: {cover} < {threshold} hyperedges"
            )));
        }
    }
    match_core(&index, color, g, embedding).ok_or_else(|| {
        Error::Internal("Hall's condition holds but no perfect matching was found".into())
    })
}

fn check_core(n: usize, g: &TargetGraph, embedding: &[usize]) -> Result<()> {
    if embedding.len() != g.num_vertices() {
        return Err(Error::Contract(format!(
            "embedding has {} vertices, target has {}",
            embedding.len(),
            g.num_vertices()
        )));
    }
    let mut seen = vec![false; n];
    for &v in embedding {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::Contract(format!("embedding is not injective into 0..{n} at {v}")));
        }
    }
    Ok(())
}

/// Matches target edges to distinct candidate hyperedges for a fixed core.
fn match_core(index: &PairIndex, color: Color, g: &TargetGraph, core: &[usize]) -> Option<BergeWitness> {
    let mut right: Vec<u64> = Vec::new();
    let mut adj = Vec::with_capacity(g.num_edges());
    for &(a, b) in g.edges() {
        let cands = index.candidates(color, core[a], core[b]);
        if cands.is_empty() {
            return None;
        }
        adj.push(
            cands
                .iter()
                .map(|&rank| match right.iter().position(|&x| x == rank) {
                    Some(i) => i,
                    None => {
                        right.push(rank);
                        right.len() - 1
                    }
                })
                .collect::<Vec<_>>(),
        );
    }
    let matched = perfect_matching(right.len(), &adj)?;
    Some(BergeWitness {
        color,
        core: core.to_vec(),
        assignment: g.edges().iter().zip(matched).map(|(&e, j)| (e, right[j])).collect(),
    })
}

/// Options for budgeted detection.
#[derive(Clone, Copy, Debug)]
pub struct DetectOptions {
    /// Maximum number of core-enumeration nodes.
    pub budget: u64,
    pub parallelism: Parallelism,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            budget: u64::MAX,
            parallelism: Parallelism::default(),
        }
    }
}

impl DetectOptions {
    pub fn sequential() -> Self {
        DetectOptions {
            parallelism: Parallelism::Sequential,
            ..Self::default()
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

/// Core enumeration plan: target vertices in placement order with, for each,
/// the earlier positions it must be adjacent to.
struct Embedder<'a> {
    index: &'a PairIndex,
    color: Color,
    target: &'a TargetGraph,
    order: Vec<usize>,
    back: Vec<Vec<usize>>,
    clique: bool,
}

impl<'a> Embedder<'a> {
    fn new(index: &'a PairIndex, color: Color, target: &'a TargetGraph) -> Self {
        let k = target.num_vertices();
        let clique = target.is_complete();
        let mut order = Vec::with_capacity(k);
        let mut placed = vec![false; k];
        if clique {
            order.extend(0..k);
        } else {
            // most-constrained first: links to placed vertices, then degree
            while order.len() < k {
                let next = (0..k)
                    .filter(|&v| !placed[v])
                    .max_by_key(|&v| {
                        let links = order.iter().filter(|&&u| target.edge_index(u, v).is_some()).count();
                        (links, target.degree(v), std::cmp::Reverse(v))
                    })
                    .unwrap();
                placed[next] = true;
                order.push(next);
            }
        }
        let back = (0..k)
            .map(|i| (0..i).filter(|&j| target.edge_index(order[i], order[j]).is_some()).collect())
            .collect();
        Embedder {
            index,
            color,
            target,
            order,
            back,
            clique,
        }
    }

    fn host(&self) -> usize {
        self.index.num_vertices()
    }

    /// Explores every embedding whose first placed vertex maps to `first`,
    /// calling `leaf` on each complete core (indexed by target vertex).
    fn branch<T>(
        &self,
        first: usize,
        ticker: &mut Ticker<'_>,
        leaf: &mut dyn FnMut(&[usize]) -> Option<T>,
    ) -> Result<Option<T>, Stop> {
        let k = self.order.len();
        if self.clique && first + k > self.host() {
            return Ok(None);
        }
        let mut images = Vec::with_capacity(k);
        let mut used = vec![false; self.host()];
        let mut core = vec![0usize; k];
        images.push(first);
        used[first] = true;
        self.descend(&mut images, &mut used, &mut core, ticker, leaf)
    }

    fn descend<T>(
        &self,
        images: &mut Vec<usize>,
        used: &mut [bool],
        core: &mut [usize],
        ticker: &mut Ticker<'_>,
        leaf: &mut dyn FnMut(&[usize]) -> Option<T>,
    ) -> Result<Option<T>, Stop> {
        ticker.tick()?;
        let depth = images.len();
        let k = self.order.len();
        if depth == k {
            for (pos, &v) in self.order.iter().enumerate() {
                core[v] = images[pos];
            }
            return Ok(leaf(core));
        }
        let start = if self.clique { images[depth - 1] + 1 } else { 0 };
        let n = self.host();
        for v in start..n {
            if self.clique && n - v < k - depth {
                break;
            }
            if used[v] || !self.back[depth].iter().all(|&j| self.index.cover(self.color, images[j], v) > 0) {
                continue;
            }
            images.push(v);
            used[v] = true;
            let found = self.descend(images, used, core, ticker, leaf)?;
            used[v] = false;
            images.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Searches `index` for a Berge copy of `g` in `color`, reporting the node
/// count of the equivalent sequential run.
///
/// `touching`, when given, restricts attention to cores with some target edge
/// mapped inside that sorted vertex set.
pub fn search_index(
    index: &PairIndex,
    color: Color,
    g: &TargetGraph,
    opts: DetectOptions,
    touching: Option<&[usize]>,
) -> (Search<BergeWitness>, u64) {
    if g.num_vertices() == 0 {
        return if opts.budget == 0 {
            (Search::OutOfBudget, 0)
        } else {
            let w = BergeWitness {
                color,
                core: Vec::new(),
                assignment: Vec::new(),
            };
            (Search::Found(w), 1)
        };
    }
    let embedder = Embedder::new(index, color, g);
    let branches = if g.num_vertices() > index.num_vertices() {
        0
    } else {
        index.num_vertices()
    };
    ordered_search(branches, opts.budget, opts.parallelism, |first, ticker| {
        embedder.branch(first, ticker, &mut |core| {
            if let Some(e) = touching {
                let inside = |v: usize| e.binary_search(&core[v]).is_ok();
                if !g.edges().iter().any(|&(a, b)| inside(a) && inside(b)) {
                    return None;
                }
            }
            match_core(index, color, g, core)
        })
    })
}

/// Finds a monochromatic Berge copy of `g` in `color`: `Found` with a
/// witness, `Exhausted` when none exists, `OutOfBudget` when inconclusive.
pub fn find_berge(h: &ColoredHypergraph, color: Color, g: &TargetGraph, opts: DetectOptions) -> Search<BergeWitness> {
    search_index(&PairIndex::build(h), color, g, opts, None).0
}

/// Counts the cores (vertex subsets for complete targets, embeddings
/// otherwise) that carry a Berge copy in `color`.
pub fn count_witness_cores(index: &PairIndex, color: Color, g: &TargetGraph) -> usize {
    if g.num_vertices() > index.num_vertices() {
        return 0;
    }
    if g.num_vertices() == 0 {
        return 1;
    }
    let embedder = Embedder::new(index, color, g);
    let mut count = 0;
    for first in 0..index.num_vertices() {
        let mut ticker = Ticker::unlimited();
        let _ = embedder.branch(first, &mut ticker, &mut |core| {
            if match_core(index, color, embedder.target, core).is_some() {
                count += 1;
            }
            None::<()>
        });
    }
    count
}

/// Largest hyperedge count the brute-force oracle accepts.
pub const BRUTE_FORCE_MAX_EDGES: u64 = 40;
pub const BRUTE_FORCE_MAX_TARGET_EDGES: usize = 6;
pub const BRUTE_FORCE_MAX_VERTICES: usize = 10;

/// Detection by direct enumeration: every injective vertex map, then every
/// injective choice of containing hyperedges. Shares no code with
/// [`find_berge`] beyond ranking; only for tiny instances.
pub fn brute_force_berge(h: &ColoredHypergraph, color: Color, g: &TargetGraph) -> Result<Option<BergeWitness>> {
    let total = binomial(h.num_vertices() as u64, h.uniformity() as u64);
    if total > BRUTE_FORCE_MAX_EDGES
        || g.num_edges() > BRUTE_FORCE_MAX_TARGET_EDGES
        || h.num_vertices() > BRUTE_FORCE_MAX_VERTICES
    {
        return Err(Error::InvalidArgument(format!(
            "brute force is limited to {BRUTE_FORCE_MAX_EDGES} hyperedges, {BRUTE_FORCE_MAX_TARGET_EDGES} target edges and {BRUTE_FORCE_MAX_VERTICES} vertices"
        )));
    }
    let hyperedges: Vec<(u64, Vec<usize>)> = (0..total)
        .filter(|&rank| h.color(rank) == color)
        .map(|rank| (rank, unrank_colex(rank, h.uniformity())))
        .collect();

    fn assign(
        k: usize,
        g: &TargetGraph,
        core: &[usize],
        hyperedges: &[(u64, Vec<usize>)],
        taken: &mut Vec<usize>,
    ) -> bool {
        if k == g.num_edges() {
            return true;
        }
        let (a, b) = g.edges()[k];
        for (i, (_, set)) in hyperedges.iter().enumerate() {
            if !taken.contains(&i) && set.contains(&core[a]) && set.contains(&core[b]) {
                taken.push(i);
                if assign(k + 1, g, core, hyperedges, taken) {
                    return true;
                }
                taken.pop();
            }
        }
        false
    }

    fn maps(
        g: &TargetGraph,
        n: usize,
        core: &mut Vec<usize>,
        hyperedges: &[(u64, Vec<usize>)],
        color: Color,
    ) -> Option<BergeWitness> {
        if core.len() == g.num_vertices() {
            let mut taken = Vec::new();
            return assign(0, g, core, hyperedges, &mut taken).then(|| BergeWitness {
                color,
                core: core.clone(),
                assignment: g.edges().iter().zip(&taken).map(|(&e, &i)| (e, hyperedges[i].0)).collect(),
            });
        }
        for v in 0..n {
            if !core.contains(&v) {
                core.push(v);
                if let Some(w) = maps(g, n, core, hyperedges, color) {
                    return Some(w);
                }
                core.pop();
            }
        }
        None
    }

    Ok(maps(g, h.num_vertices(), &mut Vec::new(), &hyperedges, color))
}

/// Per-color detection outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColorStatus {
    Free,
    Witness(BergeWitness),
    Inconclusive,
}

impl fmt::Display for ColorStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColorStatus::Free => "FREE",
            ColorStatus::Witness(_) => "WITNESS",
            ColorStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

impl From<Search<BergeWitness>> for ColorStatus {
    fn from(s: Search<BergeWitness>) -> Self {
        match s {
            Search::Found(w) => ColorStatus::Witness(w),
            Search::Exhausted => ColorStatus::Free,
            Search::OutOfBudget => ColorStatus::Inconclusive,
        }
    }
}

/// Detection in every color, each with its own budget. `h` certifies a
/// Ramsey lower bound exactly when every entry is `Free`.
pub fn mono_free_colors(h: &ColoredHypergraph, g: &TargetGraph, opts: DetectOptions) -> Vec<ColorStatus> {
    let index = PairIndex::build(h);
    (1..=h.num_colors())
        .map(|i| search_index(&index, i as Color, g, opts, None).0.into())
        .collect()
}

/// Whether every color is free of Berge copies of `g`.
pub fn is_avoiding(h: &ColoredHypergraph, g: &TargetGraph, opts: DetectOptions) -> bool {
    mono_free_colors(h, g, opts).iter().all(|s| *s == ColorStatus::Free)
}

/// Verifies a witness and wraps the failure as a crate error.
pub fn check_witness(h: &ColoredHypergraph, g: &TargetGraph, w: &BergeWitness) -> Result<()> {
    verify_witness(h, g, w).map_err(Error::from)
}
