//! Layered color-set assignments `T ↦ S(T)` on all subsets of size `1..=r`.
//!
//! Required properties, checked by [`check_layered`]:
//! * nesting: `T ⊂ T'` implies `S(T') ⊆ S(T)`;
//! * size: `|S(T)| = r - |T| + 1`;
//! * witnesses: for `|T| <= r - 1` and every `s ∈ S(T)`, at least `β` sets
//!   `T ∪ {v}` carry exactly `S(T) \ {s}`;
//! * clique-freeness: for each color `i`, the graph of pairs `T` with
//!   `i ∈ S(T)` has no `K_n`.
//!
//! The builder starts from a random 2-coloring of a complete graph and stacks
//! disjoint copies one uniformity level at a time. Sets inside one copy keep
//! their old colors plus the new top color; a set spread over several copies
//! gets the smallest colors common to all of its parts.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{Color, ColoredHypergraph};
use crate::combinatorics::{binomial, rank_colex_unchecked, ColexSubsets};
use crate::error::{Error, Result};
use crate::graph::{clique_number, graph_contains_clique, SimpleGraph};

/// Bit `j` set means color `j + 1`.
pub type ColorMask = u32;

fn mask_colors(mask: ColorMask) -> Vec<Color> {
    (0..32).filter(|j| mask >> j & 1 == 1).map(|j| j as Color + 1).collect()
}

/// The `t` smallest colors of `mask`, if it has that many.
fn lowest_colors(mask: ColorMask, t: usize) -> Option<ColorMask> {
    let mut out = 0;
    let mut rest = mask;
    for _ in 0..t {
        if rest == 0 {
            return None;
        }
        let low = rest & rest.wrapping_neg();
        out |= low;
        rest &= !low;
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredAssignment {
    r: usize,
    ground: usize,
    beta: Option<usize>,
    /// `levels[t - 1][rank]` is `S(T)` for the `t`-set of that colex rank.
    levels: Vec<Vec<ColorMask>>,
}

#[derive(Serialize, Deserialize)]
struct LayeredFile {
    r: usize,
    ground: usize,
    beta: Option<usize>,
    levels: Vec<Vec<Vec<Color>>>,
}

impl LayeredAssignment {
    pub fn from_levels(r: usize, ground: usize, beta: Option<usize>, levels: Vec<Vec<ColorMask>>) -> Result<Self> {
        if !(2..32).contains(&r) {
            return Err(Error::InvalidArgument(format!("top uniformity {r} outside 2..32")));
        }
        if ground < r {
            return Err(Error::InvalidArgument(format!("ground set {ground} smaller than r = {r}")));
        }
        if levels.len() != r {
            return Err(Error::InvalidArgument(format!("expected {r} levels, got {}", levels.len())));
        }
        for (t, level) in (1..).zip(&levels) {
            if level.len() as u64 != binomial(ground as u64, t) {
                return Err(Error::InvalidArgument(format!("level {t} has {} entries", level.len())));
            }
            if let Some(m) = level.iter().find(|&&m| m >> r != 0) {
                return Err(Error::InvalidArgument(format!("color set {:?} exceeds 1..={r}", mask_colors(*m))));
            }
        }
        Ok(LayeredAssignment { r, ground, beta, levels })
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    /// Witness threshold the builder was asked to preserve.
    pub fn declared_beta(&self) -> Option<usize> {
        self.beta
    }

    /// `S(T)` for a sorted set of size `1..=r`.
    pub fn mask(&self, set: &[usize]) -> ColorMask {
        self.levels[set.len() - 1][rank_colex_unchecked(set) as usize]
    }

    pub fn colors(&self, set: &[usize]) -> Vec<Color> {
        mask_colors(self.mask(set))
    }

    pub fn set_mask(&mut self, set: &[usize], mask: ColorMask) {
        self.levels[set.len() - 1][rank_colex_unchecked(set) as usize] = mask;
    }

    /// `G_i`: pairs whose color set contains `color`.
    pub fn color_graph(&self, color: Color) -> SimpleGraph {
        let bit = 1 << (color - 1);
        SimpleGraph::from_edges(
            self.ground,
            ColexSubsets::new(self.ground, 2)
                .zip(&self.levels[1])
                .filter(|(_, &m)| m & bit != 0)
                .map(|(p, _)| (p[0], p[1])),
        )
    }

    /// Clique number of each `G_i`, colors `1..=r`.
    pub fn clique_numbers(&self) -> Vec<usize> {
        (1..=self.r).map(|i| clique_number(&self.color_graph(i as Color))).collect()
    }

    /// Least `n` such that no `G_i` contains `K_n`.
    pub fn certified_n(&self) -> usize {
        self.clique_numbers().into_iter().max().unwrap_or(0) + 1
    }

    pub fn to_json(&self) -> String {
        let file = LayeredFile {
            r: self.r,
            ground: self.ground,
            beta: self.beta,
            levels: self.levels.iter().map(|l| l.iter().map(|&m| mask_colors(m)).collect()).collect(),
        };
        serde_json::to_string(&file).expect("assignment serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LayeredFile = serde_json::from_str(text)?;
        let mut levels = Vec::with_capacity(file.levels.len());
        for level in file.levels {
            let mut masks = Vec::with_capacity(level.len());
            for colors in level {
                let mut m: ColorMask = 0;
                for c in colors {
                    if c == 0 || usize::from(c) > file.r {
                        return Err(Error::Parse(format!("color {c} outside 1..={}", file.r)));
                    }
                    m |= 1 << (c - 1);
                }
                masks.push(m);
            }
            levels.push(masks);
        }
        Self::from_levels(file.r, file.ground, file.beta, levels)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// Result of [`erdos_base`].
#[derive(Clone, Debug)]
pub struct ErdosBase {
    pub assignment: LayeredAssignment,
    /// Attempts used, counting the successful one.
    pub attempts: u64,
}

/// Random 2-colorings of `K_m` until one has no monochromatic `K_n` and
/// gives every vertex at least `beta` edges of each color.
///
/// Singletons get `{1, 2}`; each edge gets its own color.
pub fn erdos_base(m: usize, n: usize, beta: usize, seed: u64, max_attempts: u64) -> Result<ErdosBase> {
    if m < 2 || n < 3 {
        return Err(Error::InvalidArgument(format!("need m >= 2 and n >= 3, got m = {m}, n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = m * (m - 1) / 2;
    for attempt in 1..=max_attempts {
        let colors: Vec<Color> = (0..pairs).map(|_| rng.random_range(1..=2)).collect();
        let edges = || ColexSubsets::new(m, 2).zip(colors.iter().copied());
        let mut degree = vec![[0usize; 2]; m];
        for (p, col) in edges() {
            degree[p[0]][col as usize - 1] += 1;
            degree[p[1]][col as usize - 1] += 1;
        }
        if degree.iter().any(|d| d[0] < beta || d[1] < beta) {
            continue;
        }
        let mono_free = (1..=2).all(|c| {
            let g = SimpleGraph::from_edges(m, edges().filter(|e| e.1 == c).map(|(p, _)| (p[0], p[1])));
            graph_contains_clique(&g, n).is_none()
        });
        if !mono_free {
            continue;
        }
        let levels = vec![vec![0b11; m], colors.iter().map(|&c| 1 << (c - 1)).collect()];
        return Ok(ErdosBase {
            assignment: LayeredAssignment::from_levels(2, m, Some(beta), levels)?,
            attempts: attempt,
        });
    }
    Err(Error::Exhausted { attempts: max_attempts })
}

/// One level up: `copies` disjoint copies of `prev`'s ground set, top
/// uniformity `prev.r + 1`, with `beta` recorded as the declared threshold.
pub fn layered_step(prev: &LayeredAssignment, copies: usize, beta: usize) -> Result<LayeredAssignment> {
    if copies < 2 {
        return Err(Error::Contract(format!("need at least 2 copies, got {copies}")));
    }
    for (t, level) in (1..).zip(&prev.levels) {
        let want = prev.r + 1 - t;
        if let Some(m) = level.iter().find(|m| m.count_ones() as usize != want) {
            return Err(Error::Contract(format!(
                "previous assignment has a {t}-set with colors {:?}, expected {want} colors",
                mask_colors(*m)
            )));
        }
    }
    let r = prev.r + 1;
    if r >= 32 {
        return Err(Error::InvalidArgument("uniformity limited to 31".into()));
    }
    let width = prev.ground;
    let ground = width * copies;
    let top: ColorMask = 1 << (r - 1);

    let mut levels = Vec::with_capacity(r);
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); copies];
    for t in 1..=r {
        let mut level = Vec::with_capacity(binomial(ground as u64, t as u64) as usize);
        for set in ColexSubsets::new(ground, t) {
            parts.iter_mut().for_each(Vec::clear);
            for &v in &set {
                parts[v / width].push(v % width);
            }
            let touched: Vec<&Vec<usize>> = parts.iter().filter(|p| !p.is_empty()).collect();
            let old = |p: &[usize]| if p.len() <= prev.r { prev.mask(p) } else { 0 };
            let mask = if touched.len() == 1 {
                old(touched[0]) | top
            } else {
                let available = touched.iter().fold(!0, |acc, p| acc & old(p));
                lowest_colors(available, r + 1 - t).ok_or_else(|| {
                    Error::Internal(format!(
                        "{t}-set {set:?} has only {} available colors, needs {}",
                        available.count_ones(),
                        r + 1 - t
                    ))
                })?
            };
            level.push(mask);
        }
        levels.push(level);
    }
    LayeredAssignment::from_levels(r, ground, Some(beta), levels)
}

/// The r-uniform coloring carried by the top level: each r-set's unique color.
pub fn assignment_coloring(l: &LayeredAssignment) -> Result<ColoredHypergraph> {
    let top = &l.levels[l.r - 1];
    let mut colors = Vec::with_capacity(top.len());
    for (set, &m) in ColexSubsets::new(l.ground, l.r).zip(top) {
        if m.count_ones() != 1 {
            return Err(Error::Invariant(format!(
                "r-set {set:?} carries colors {:?}, expected exactly one",
                mask_colors(m)
            )));
        }
        colors.push(m.trailing_zeros() as Color + 1);
    }
    ColoredHypergraph::new(l.r, l.r, l.ground, colors)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeViolation {
    pub set: Vec<usize>,
    pub expected: usize,
    pub found: Vec<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NestingViolation {
    pub subset: Vec<usize>,
    pub superset: Vec<usize>,
    pub subset_colors: Vec<Color>,
    pub superset_colors: Vec<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessViolation {
    pub set: Vec<usize>,
    pub dropped: Color,
    pub witnesses: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueViolation {
    pub color: Color,
    pub clique: Vec<usize>,
}

/// Everything [`check_layered`] found. Empty violation lists mean pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredReport {
    pub n: usize,
    pub beta: usize,
    pub size: Vec<SizeViolation>,
    pub nesting: Vec<NestingViolation>,
    pub witness: Vec<WitnessViolation>,
    pub clique: Vec<CliqueViolation>,
    /// Fewest witnesses over all `(T, s)` with `|T| <= r - 1`.
    pub min_witnesses: Option<usize>,
    /// `(T, s)` pairs checked for witnesses.
    pub witness_pairs: usize,
}

impl LayeredReport {
    pub fn passes(&self) -> bool {
        self.size.is_empty() && self.nesting.is_empty() && self.witness.is_empty() && self.clique.is_empty()
    }
}

/// Checks size, nesting, the `beta` witness clause and `K_n`-freeness of
/// every color graph.
pub fn check_layered(l: &LayeredAssignment, n: usize, beta: usize) -> LayeredReport {
    let mut report = LayeredReport {
        n,
        beta,
        size: Vec::new(),
        nesting: Vec::new(),
        witness: Vec::new(),
        clique: Vec::new(),
        min_witnesses: None,
        witness_pairs: 0,
    };
    let mut bigger = Vec::with_capacity(l.r);
    for t in 1..=l.r {
        for (set, &m) in ColexSubsets::new(l.ground, t).zip(&l.levels[t - 1]) {
            let expected = l.r + 1 - t;
            if m.count_ones() as usize != expected {
                report.size.push(SizeViolation {
                    set: set.clone(),
                    expected,
                    found: mask_colors(m),
                });
            }
            if t == l.r {
                continue;
            }
            // per color of S(T): supersets carrying S(T) \ {s}
            let mut witnesses = [0usize; 32];
            for v in (0..l.ground).filter(|v| set.binary_search(v).is_err()) {
                bigger.clear();
                bigger.extend_from_slice(&set);
                let pos = bigger.partition_point(|&x| x < v);
                bigger.insert(pos, v);
                let sup = l.mask(&bigger);
                if sup & !m != 0 {
                    report.nesting.push(NestingViolation {
                        subset: set.clone(),
                        superset: bigger.clone(),
                        subset_colors: mask_colors(m),
                        superset_colors: mask_colors(sup),
                    });
                }
                let gone = m & !sup;
                if sup & !m == 0 && gone.count_ones() == 1 {
                    witnesses[gone.trailing_zeros() as usize] += 1;
                }
            }
            for j in (0..32).filter(|j| m >> j & 1 == 1) {
                report.witness_pairs += 1;
                report.min_witnesses = Some(report.min_witnesses.map_or(witnesses[j], |w| w.min(witnesses[j])));
                if witnesses[j] < beta {
                    report.witness.push(WitnessViolation {
                        set: set.clone(),
                        dropped: j as Color + 1,
                        witnesses: witnesses[j],
                    });
                }
            }
        }
    }
    for color in 1..=l.r {
        if let Some(clique) = graph_contains_clique(&l.color_graph(color as Color), n) {
            report.clique.push(CliqueViolation {
                color: color as Color,
                clique,
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn built(seed: u64) -> (LayeredAssignment, LayeredAssignment) {
        let base = erdos_base(8, 4, 3, seed, 100_000).unwrap().assignment;
        let step = layered_step(&base, 3, 3).unwrap();
        (base, step)
    }

    #[test]
    fn small_base_succeeds_quickly() {
        let b = erdos_base(4, 4, 1, 0, 1000).unwrap();
        assert!(b.attempts < 100);
        let l = &b.assignment;
        assert_eq!(l.colors(&[2]), vec![1, 2]);
        for v in 0..4 {
            let incident: Vec<Color> = (0..4).filter(|&u| u != v).flat_map(|u| l.colors(&[u.min(v), u.max(v)])).collect();
            assert!(incident.contains(&1) && incident.contains(&2));
        }
    }

    #[test]
    fn eight_vertices_beta_three() {
        let base = erdos_base(8, 4, 3, 1, 100_000).unwrap().assignment;
        let report = check_layered(&base, 4, 3);
        assert!(report.passes(), "{report:?}");
        // oracle: exhaustive scan of all 4-subsets for a monochromatic K_4
        for set in ColexSubsets::new(8, 4) {
            let cols: Vec<Color> = ColexSubsets::new(4, 2).map(|p| base.colors(&[set[p[0]], set[p[1]]])[0]).collect();
            assert!(cols.iter().any(|&c| c != cols[0]));
        }
    }

    #[test]
    fn single_edge_cannot_show_both_colors() {
        assert!(matches!(erdos_base(2, 3, 1, 0, 50), Err(Error::Exhausted { attempts: 50 })));
    }

    #[test]
    fn step_rules() {
        let (base, step) = built(5);
        assert_eq!(step.uniformity(), 3);
        assert_eq!(step.ground_size(), 24);
        // singleton inside a copy: old {1,2} plus the new top color
        assert_eq!(step.colors(&[3]), vec![1, 2, 3]);
        // cross-copy pair of singletons: both colors available, both kept
        assert_eq!(step.colors(&[1, 9]), vec![1, 2]);
        // in-copy pair: its base color plus the top color
        let c = base.colors(&[1, 2])[0];
        assert_eq!(step.colors(&[9, 10]), vec![c, 3]);
        // three vertices in three copies: the least color common to all singletons
        assert_eq!(step.colors(&[0, 8, 16]), vec![1]);
        // in-copy pair plus an outsider: available colors are the pair's base color
        assert_eq!(step.colors(&[1, 2, 20]), vec![c]);
        // three vertices in one copy: only the top color
        assert_eq!(step.colors(&[0, 1, 2]), vec![3]);
    }

    #[test]
    fn step_satisfies_properties() {
        let (_, step) = built(5);
        let n = step.certified_n();
        let numbers = step.clique_numbers();
        assert_eq!(numbers[2], 8, "top color is a union of disjoint K_8");
        let report = check_layered(&step, n, 3);
        assert!(report.passes(), "{report:?}");
        assert!(report.min_witnesses.unwrap() >= 3);
        let tight = check_layered(&step, n - 1, 3);
        assert!(!tight.clique.is_empty());
        let coloring = assignment_coloring(&step).unwrap();
        assert_eq!(coloring.num_colors(), 3);
        assert_eq!(coloring.num_edges(), 2024);
    }

    #[test]
    fn single_copy_rejected() {
        let (base, _) = built(5);
        assert!(matches!(layered_step(&base, 1, 3), Err(Error::Contract(_))));
    }

    #[test]
    fn two_colors_on_an_r_set_rejected() {
        let (_, mut step) = built(5);
        step.set_mask(&[0, 1, 2], 0b101);
        assert!(matches!(assignment_coloring(&step), Err(Error::Invariant(_))));
    }

    #[test]
    fn fault_injection_reports_only_the_injected_set() {
        let (_, mut step) = built(5);
        let target = [3usize, 11, 12];
        let before = step.mask(&target);
        let extra = (0..3).map(|j| 1 << j).find(|b| before & b == 0).unwrap();
        step.set_mask(&target, before | extra);
        let report = check_layered(&step, step.certified_n(), 1);
        assert_eq!(report.size.len(), 1);
        assert_eq!(report.size[0].set, target.to_vec());
        assert!(!report.nesting.is_empty());
        assert!(report.nesting.iter().all(|v| v.superset == target.to_vec()));
        assert!(report
            .witness
            .iter()
            .all(|v| v.set.iter().all(|x| target.contains(x))));
    }

    #[test]
    fn json_roundtrip() {
        let (_, step) = built(5);
        let text = step.to_json();
        let back = LayeredAssignment::from_json(&text).unwrap();
        assert_eq!(back, step);
        assert_eq!(back.to_json(), text);
    }
}
