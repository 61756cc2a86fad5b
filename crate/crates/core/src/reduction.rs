//! Reduction of an `r`-uniform coloring to an `(r-1)`-uniform coloring that
//! avoids one color, with lifting of Berge witnesses back to the original.
//!
//! Repeatedly take the least pair `u < v` of surviving vertices that is light
//! in the dropped color, keep `v`, and delete `u` together with every vertex
//! sharing a dropped-color hyperedge with both. An `(r-1)`-set `R` of kept
//! vertices inherits the color of `R ∪ {u}`, where `u` is the partner of the
//! earliest kept vertex of `R`. That hyperedge never has the dropped color,
//! and distinct sets inherit from distinct hyperedges.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, ColoredHypergraph};
use crate::combinatorics::{rank_colex_unchecked, unrank_colex};
use crate::detection::{heavy_threshold, PairIndex};
use crate::error::{Error, Result};
use crate::target::TargetGraph;
use crate::witness::{verify_witness, BergeWitness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub r: usize,
    pub dropped: Color,
    /// Kept vertices `v_1..v_m` in pick order; reduced vertex `j` is `kept[j]`.
    pub kept: Vec<usize>,
    /// `partners[j]` is the light partner `u` deleted alongside `kept[j]`.
    pub partners: Vec<usize>,
    /// Vertices (other than the pair) sharing a dropped-color hyperedge with
    /// `partners[j]` and `kept[j]`.
    pub deleted: Vec<Vec<usize>>,
    /// Surviving vertices with no light pair among them when the loop stopped.
    pub leftover: Vec<usize>,
    /// Original hyperedge rank for every reduced hyperedge rank.
    pub provenance: Vec<u64>,
}

impl ReductionTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Whether light pairs ran out while two or more vertices survived.
    pub fn exhausted_early(&self) -> bool {
        self.leftover.len() >= 2
    }

    /// Rebuilds the reduced coloring from the original and the provenance map.
    pub fn reduced_coloring(&self, original: &ColoredHypergraph) -> Result<ColoredHypergraph> {
        let colors = self
            .provenance
            .iter()
            .map(|&rank| {
                if rank as usize >= original.num_edges() {
                    return Err(Error::InvalidArgument(format!("provenance rank {rank} out of range")));
                }
                Ok(original.color(rank))
            })
            .collect::<Result<Vec<_>>>()?;
        ColoredHypergraph::new(self.r - 1, original.num_colors(), self.kept.len(), colors)
    }
}

/// Performs the reduction. The output keeps the original color labels and
/// color count; `drop` never occurs in it.
pub fn reduce_coloring(h: &ColoredHypergraph, drop: Color) -> Result<(ColoredHypergraph, ReductionTrace)> {
    let r = h.uniformity();
    if r < 3 {
        return Err(Error::InvalidArgument(format!("reduction needs r >= 3, got {r}")));
    }
    if drop == 0 || usize::from(drop) > h.num_colors() {
        return Err(Error::InvalidArgument(format!("color {drop} outside 1..={}", h.num_colors())));
    }
    let n = h.num_vertices();
    let index = PairIndex::build(h);
    let threshold = heavy_threshold(r);
    let light = |a: usize, b: usize| index.cover(drop, a, b) < threshold;

    let mut alive = vec![true; n];
    let (mut kept, mut partners, mut deleted) = (Vec::new(), Vec::new(), Vec::new());
    'pick: loop {
        for u in 0..n {
            if !alive[u] {
                continue;
            }
            for v in u + 1..n {
                if !alive[v] || !light(u, v) {
                    continue;
                }
                let mut covered: Vec<usize> = index
                    .candidates(drop, u, v)
                    .iter()
                    .flat_map(|&rank| unrank_colex(rank, r))
                    .filter(|&x| x != u && x != v)
                    .collect();
                covered.sort_unstable();
                covered.dedup();
                alive[u] = false;
                alive[v] = false;
                for &x in &covered {
                    alive[x] = false;
                }
                kept.push(v);
                partners.push(u);
                deleted.push(covered);
                continue 'pick;
            }
        }
        break;
    }
    let leftover: Vec<usize> = (0..n).filter(|&x| alive[x]).collect();

    let m = kept.len();
    let mut trace = ReductionTrace {
        r,
        dropped: drop,
        kept,
        partners,
        deleted,
        leftover,
        provenance: Vec::new(),
    };
    if m < r - 1 {
        return Err(Error::DegenerateReduction {
            kept: m,
            needed: r - 1,
            trace: Box::new(trace),
        });
    }

    let mut colors = Vec::new();
    let mut image = Vec::with_capacity(r);
    for reduced in crate::combinatorics::ColexSubsets::new(m, r - 1) {
        // reduced sets are sorted by pick index, so reduced[0] is the earliest
        image.clear();
        image.extend(reduced.iter().map(|&j| trace.kept[j]));
        image.push(trace.partners[reduced[0]]);
        image.sort_unstable();
        let rank = rank_colex_unchecked(&image);
        let col = h.color(rank);
        if col == drop {
            return Err(Error::Internal(format!("inherited hyperedge {image:?} has the dropped color")));
        }
        trace.provenance.push(rank);
        colors.push(col);
    }
    let reduced = ColoredHypergraph::new(r - 1, h.num_colors(), m, colors)?;
    Ok((reduced, trace))
}

/// Maps a witness in the reduced coloring to one in the original.
pub fn lift_witness(
    trace: &ReductionTrace,
    original: &ColoredHypergraph,
    g: &TargetGraph,
    w: &BergeWitness,
) -> Result<BergeWitness> {
    let reduced = trace.reduced_coloring(original)?;
    verify_witness(&reduced, g, w)?;
    let lifted = BergeWitness {
        color: w.color,
        core: w.core.iter().map(|&j| trace.kept[j]).collect(),
        assignment: w
            .assignment
            .iter()
            .map(|&(e, rank)| (e, trace.provenance[rank as usize]))
            .collect(),
    };
    verify_witness(original, g, &lifted)?;
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::rank_colex;
    use crate::detection::{find_berge, DetectOptions};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn sparse_drop(seed: u64, n: usize, density: f64) -> ColoredHypergraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ColoredHypergraph::from_fn(3, 3, n, |_| {
            Ok(if rng.random_bool(density) { 1 } else { rng.random_range(2..=3) })
        })
        .unwrap()
    }

    #[test]
    fn no_dropped_hyperedges_halves_vertices() {
        for n in 4..12 {
            let h = ColoredHypergraph::monochromatic(3, 3, n, 2).unwrap();
            let (red, trace) = reduce_coloring(&h, 1).unwrap();
            assert_eq!(red.num_vertices(), n / 2);
            assert!(trace.deleted.iter().all(Vec::is_empty));
            assert!(red.colors().iter().all(|&c| c == 2));
        }
    }

    #[test]
    fn monochromatic_in_dropped_color() {
        // census oracle: with N >= r + 2 every pair lies in N - 2 >= 3 triples
        let h = ColoredHypergraph::monochromatic(3, 2, 7, 1).unwrap();
        let cover = (0..7).filter(|&x| x != 0 && x != 1).count();
        assert!(cover >= 3);
        match reduce_coloring(&h, 1) {
            Err(Error::DegenerateReduction { kept: 0, trace, .. }) => {
                assert_eq!(trace.leftover.len(), 7);
                assert!(trace.exhausted_early());
            }
            other => panic!("expected degenerate reduction, got {other:?}"),
        }
        // with N = r the single triple leaves every pair light
        let h = ColoredHypergraph::monochromatic(3, 2, 3, 1).unwrap();
        assert!(matches!(reduce_coloring(&h, 1), Err(Error::DegenerateReduction { kept: 1, .. })));
    }

    #[test]
    fn trace_invariants_on_random_inputs() {
        for seed in 0..40 {
            let h = sparse_drop(seed, 20, 0.08);
            let (red, trace) = match reduce_coloring(&h, 1) {
                Ok(x) => x,
                Err(Error::DegenerateReduction { trace, .. }) => {
                    assert!(trace.kept.len() < 2);
                    continue;
                }
                Err(e) => panic!("{e}"),
            };
            assert!(red.colors().iter().all(|&c| c != 1));
            let distinct: HashSet<u64> = trace.provenance.iter().copied().collect();
            assert_eq!(distinct.len(), trace.provenance.len());
            assert!(trace.deleted.iter().all(|u| u.len() <= 2));
            if !trace.exhausted_early() {
                assert!(trace.kept.len() >= 20 / 4);
            }
            for (j, set) in crate::combinatorics::ColexSubsets::new(trace.kept.len(), 2).enumerate() {
                let mut orig = vec![trace.kept[set[0]], trace.kept[set[1]], trace.partners[set[0]]];
                orig.sort_unstable();
                assert_eq!(trace.provenance[j], rank_colex(&orig).unwrap());
            }
            assert_eq!(trace.reduced_coloring(&h).unwrap(), red);
        }
    }

    #[test]
    fn lift_single_edge_and_triangle() {
        let h = sparse_drop(3, 20, 0.05);
        let (red, trace) = reduce_coloring(&h, 1).unwrap();
        let k2 = TargetGraph::complete(2);
        let rank = rank_colex(&[0, 1]).unwrap();
        let w = BergeWitness {
            color: red.color(rank),
            core: vec![0, 1],
            assignment: vec![((0, 1), rank)],
        };
        let lifted = lift_witness(&trace, &h, &k2, &w).unwrap();
        let mut expected = vec![trace.kept[0], trace.kept[1], trace.partners[0]];
        expected.sort_unstable();
        assert_eq!(lifted.assignment[0].1, rank_colex(&expected).unwrap());

        let empty = TargetGraph::new(0, []).unwrap();
        let none = BergeWitness { color: 2, core: vec![], assignment: vec![] };
        assert_eq!(lift_witness(&trace, &h, &empty, &none).unwrap(), none);

        let k3 = TargetGraph::complete(3);
        for col in 2..=3 {
            if let Some(w) = find_berge(&red, col, &k3, DetectOptions::default()).found() {
                let lifted = lift_witness(&trace, &h, &k3, &w).unwrap();
                assert_eq!(lifted.color, col);
            }
        }
    }

    #[test]
    fn lift_rejects_invalid_witness() {
        let h = sparse_drop(3, 20, 0.05);
        let (_, trace) = reduce_coloring(&h, 1).unwrap();
        let bad = BergeWitness {
            color: 1,
            core: vec![0, 1],
            assignment: vec![((0, 1), 0)],
        };
        assert!(matches!(lift_witness(&trace, &h, &TargetGraph::complete(2), &bad), Err(Error::Witness(_))));
    }
}
