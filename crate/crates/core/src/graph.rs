//! Dense simple graphs and exact clique search.

/// Undirected simple graph on `0..n` with bitset adjacency rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        SimpleGraph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for b in 0..n {
            for a in 0..b {
                g.add_edge(a, b);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::empty(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.n && b < self.n, "bad edge ({a},{b})");
        self.adj[a * self.words + b / 64] |= 1 << (b % 64);
        self.adj[b * self.words + a / 64] |= 1 << (a % 64);
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn num_edges(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |b| (0..b).filter(move |&a| self.has_edge(a, b)).map(move |a| (a, b)))
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }
}

/// Returns the vertex set (sorted) of some `n`-clique of `g`, if one exists.
///
/// Exact backtracking over a degree-descending vertex order; a branch is cut
/// when the chosen vertices plus remaining candidates cannot reach `n`.
pub fn graph_contains_clique(g: &SimpleGraph, n: usize) -> Option<Vec<usize>> {
    if n == 0 {
        return Some(Vec::new());
    }
    if n > g.num_vertices() {
        return None;
    }
    let mut order: Vec<usize> = (0..g.num_vertices()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut chosen = Vec::with_capacity(n);
    if extend(g, &order, 0, n, &mut chosen) {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

fn extend(g: &SimpleGraph, order: &[usize], start: usize, n: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == n {
        return true;
    }
    for i in start..order.len() {
        if chosen.len() + (order.len() - i) < n {
            return false;
        }
        let v = order[i];
        if g.degree(v) + 1 < n || !chosen.iter().all(|&u| g.has_edge(u, v)) {
            continue;
        }
        chosen.push(v);
        if extend(g, order, i + 1, n, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Size of a largest clique.
pub fn clique_number(g: &SimpleGraph) -> usize {
    let mut k = usize::from(g.num_vertices() > 0);
    while graph_contains_clique(g, k + 1).is_some() {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ColexSubsets;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_clique(g: &SimpleGraph, n: usize) -> bool {
        if n == 0 {
            return true;
        }
        ColexSubsets::new(g.num_vertices(), n)
            .any(|s| s.iter().enumerate().all(|(i, &a)| s[..i].iter().all(|&b| g.has_edge(a, b))))
    }

    #[test]
    fn complete_graph_is_its_own_clique() {
        assert_eq!(graph_contains_clique(&SimpleGraph::complete(5), 5), Some(vec![0, 1, 2, 3, 4]));
    }

    #[test]
    fn bipartite_has_no_triangle() {
        let g = SimpleGraph::from_edges(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b))));
        assert_eq!(graph_contains_clique(&g, 2).map(|c| c.len()), Some(2));
        assert_eq!(graph_contains_clique(&g, 3), None);
        assert_eq!(clique_number(&g), 2);
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..400 {
            let n = rng.random_range(0..=9);
            let density = rng.random_range(0.1..0.95);
            let mut g = SimpleGraph::empty(n);
            for b in 0..n {
                for a in 0..b {
                    if rng.random_bool(density) {
                        g.add_edge(a, b);
                    }
                }
            }
            for k in 0..=n + 1 {
                let found = graph_contains_clique(&g, k);
                assert_eq!(found.is_some(), brute_clique(&g, k), "trial {trial}, k {k}");
                if let Some(c) = found {
                    assert_eq!(c.len(), k);
                    for (i, &a) in c.iter().enumerate() {
                        assert!(c[..i].iter().all(|&b| g.has_edge(a, b)));
                    }
                }
            }
        }
    }
}
