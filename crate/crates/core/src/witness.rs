//! Monochromatic Berge copies as checkable certificates.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, ColoredHypergraph};
use crate::combinatorics::{binomial, unrank_colex};
use crate::error::Result;
use crate::target::TargetGraph;

/// A core embedding of the target plus an injective edge-to-hyperedge
/// assignment, all in one color.
///
/// JSON shape: `{"color": 1, "core": [..], "assignment": [[[u, v], rank], ..]}`
/// where `(u, v)` is a target edge and `rank` the colex rank of its hyperedge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BergeWitness {
    pub color: Color,
    pub core: Vec<usize>,
    pub assignment: Vec<((usize, usize), u64)>,
}

impl BergeWitness {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
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
}

/// First failed check of [`verify_witness`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("core has {found} vertices, target has {expected}")]
    CoreSize { expected: usize, found: usize },
    #[error("core vertex {0} is not a hypergraph vertex")]
    CoreOutOfRange(usize),
    #[error("core maps two target vertices to {0}")]
    CoreNotInjective(usize),
    #[error("({0},{1}) is not an edge of the target")]
    UnknownEdge(usize, usize),
    #[error("target edge ({0},{1}) is assigned twice")]
    EdgeRepeated(usize, usize),
    #[error("target edge ({0},{1}) is not assigned")]
    EdgeMissing(usize, usize),
    #[error("hyperedge rank {0} does not exist")]
    RankOutOfRange(u64),
    #[error("hyperedge rank {0} is used for two edges")]
    RankRepeated(u64),
    #[error("hyperedge {rank} does not contain the image of edge ({u},{v})")]
    NotContained { u: usize, v: usize, rank: u64 },
    #[error("hyperedge {rank} has color {found}, witness color is {expected}")]
    WrongColor { rank: u64, expected: Color, found: Color },
}

/// Checks core injectivity, bijectivity onto the target's edges, distinct
/// hyperedges, containment `e ⊂ f(e)` and color uniformity, in that order.
pub fn verify_witness(
    h: &ColoredHypergraph,
    g: &TargetGraph,
    w: &BergeWitness,
) -> std::result::Result<(), WitnessError> {
    if w.core.len() != g.num_vertices() {
        return Err(WitnessError::CoreSize {
            expected: g.num_vertices(),
            found: w.core.len(),
        });
    }
    let mut seen = HashSet::new();
    for &v in &w.core {
        if v >= h.num_vertices() {
            return Err(WitnessError::CoreOutOfRange(v));
        }
        if !seen.insert(v) {
            return Err(WitnessError::CoreNotInjective(v));
        }
    }

    let mut covered = vec![false; g.num_edges()];
    for &((a, b), _) in &w.assignment {
        let idx = g.edge_index(a, b).ok_or(WitnessError::UnknownEdge(a, b))?;
        if std::mem::replace(&mut covered[idx], true) {
            return Err(WitnessError::EdgeRepeated(a.min(b), a.max(b)));
        }
    }
    if let Some(idx) = covered.iter().position(|&c| !c) {
        let (a, b) = g.edges()[idx];
        return Err(WitnessError::EdgeMissing(a, b));
    }

    let total = binomial(h.num_vertices() as u64, h.uniformity() as u64);
    let mut ranks = HashSet::new();
    for &(_, rank) in &w.assignment {
        if rank >= total {
            return Err(WitnessError::RankOutOfRange(rank));
        }
        if !ranks.insert(rank) {
            return Err(WitnessError::RankRepeated(rank));
        }
    }

    for &((a, b), rank) in &w.assignment {
        let set = unrank_colex(rank, h.uniformity());
        let (u, v) = (w.core[a], w.core[b]);
        if set.binary_search(&u).is_err() || set.binary_search(&v).is_err() {
            return Err(WitnessError::NotContained { u, v, rank });
        }
    }

    for &(_, rank) in &w.assignment {
        let found = h.color(rank);
        if found != w.color {
            return Err(WitnessError::WrongColor {
                rank,
                expected: w.color,
                found,
            });
        }
    }
    Ok(())
}
