//! Search for colorings with no monochromatic Berge copy of a target, and
//! exact Ramsey numbers at desk scale.
//!
//! Exhaustive mode is a depth-first search over hyperedge colors in colex
//! order. After each assignment, the hyperedges colored so far are checked
//! for a monochromatic Berge copy touching the new hyperedge; a hit prunes the
//! branch. Colors are introduced in order (hyperedge `k` may use at most one
//! color not used before it), which removes color permutations. An optional
//! vertex-permutation group rejects leaves that are not lexicographically
//! least in their orbit.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coloring::{Color, ColoredHypergraph};
use crate::combinatorics::{rank_colex_unchecked, ColexSubsets};
use crate::detection::{count_witness_cores, is_avoiding, search_index, DetectOptions, PairIndex};
use crate::error::{Error, Result};
use crate::parallel::{ordered_search, Parallelism, Search, Stop, Ticker};
use crate::target::TargetGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    /// Seeded local search; `steps` recolor moves in total.
    Randomized { seed: u64, steps: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Exhaustive mode: maximum DFS nodes. Randomized mode ignores it.
    pub budget: u64,
    pub parallelism: Parallelism,
    /// Generators of a vertex-permutation group for leaf canonicity; `None`
    /// disables the check.
    pub vertex_symmetry: Option<Vec<Vec<usize>>>,
    /// Leading hyperedges whose colors are fixed per parallel branch.
    pub split_depth: usize,
    /// Randomized mode: restart after this many moves without improvement.
    pub plateau: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 50_000_000,
            parallelism: Parallelism::default(),
            vertex_symmetry: None,
            split_depth: 6,
            plateau: 2_000,
        }
    }
}

struct Problem<'a> {
    c: usize,
    n: usize,
    target: &'a TargetGraph,
    sets: Vec<Vec<usize>>,
    /// Per group element, the induced permutation of hyperedge ranks.
    symmetry: Vec<Vec<usize>>,
}

/// Partial coloring with its incremental pair index.
#[derive(Clone)]
struct State {
    colors: Vec<Color>,
    index: PairIndex,
    max_used: Color,
}

impl Problem<'_> {
    fn fresh(&self, r: usize) -> State {
        State {
            colors: Vec::with_capacity(self.sets.len()),
            index: PairIndex::empty(self.n, r, self.c),
            max_used: 0,
        }
    }

    /// Colors hyperedge `state.colors.len()` with `col`; returns `false` (and
    /// leaves the state unchanged) when that creates a monochromatic copy.
    fn try_push(&self, state: &mut State, col: Color) -> bool {
        let k = state.colors.len();
        let set = &self.sets[k];
        state.index.push(set, col);
        let (hit, _) = search_index(
            &state.index,
            col,
            self.target,
            DetectOptions::sequential(),
            Some(set),
        );
        if matches!(hit, Search::Found(_)) {
            state.index.pop(set, col);
            return false;
        }
        state.colors.push(col);
        state.max_used = state.max_used.max(col);
        true
    }

    fn pop(&self, state: &mut State, prev_max: Color) {
        let k = state.colors.len() - 1;
        let col = state.colors.pop().unwrap();
        state.index.pop(&self.sets[k], col);
        state.max_used = prev_max;
    }

    fn choices(&self, state: &State) -> std::ops::RangeInclusive<Color> {
        1..=(state.max_used as usize + 1).min(self.c) as Color
    }

    fn canonical(&self, colors: &[Color]) -> bool {
        let mut image = vec![0 as Color; colors.len()];
        for perm in &self.symmetry {
            for (k, &to) in perm.iter().enumerate() {
                image[to] = colors[k];
            }
            normalize(&mut image);
            if image.as_slice() < colors {
                return false;
            }
        }
        true
    }

    fn dfs(&self, state: &mut State, ticker: &mut Ticker<'_>) -> Result<Option<Vec<Color>>, Stop> {
        ticker.tick()?;
        if state.colors.len() == self.sets.len() {
            return Ok(self.canonical(&state.colors).then(|| state.colors.clone()));
        }
        let prev_max = state.max_used;
        for col in self.choices(state) {
            if !self.try_push(state, col) {
                continue;
            }
            let found = self.dfs(state, ticker)?;
            self.pop(state, prev_max);
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Surviving color prefixes of the first `depth` hyperedges, in
    /// lexicographic order.
    fn prefixes(&self, state: &mut State, depth: usize, out: &mut Vec<Vec<Color>>, nodes: &mut u64) {
        *nodes += 1;
        if state.colors.len() == depth {
            out.push(state.colors.clone());
            return;
        }
        let prev_max = state.max_used;
        for col in self.choices(state) {
            if self.try_push(state, col) {
                self.prefixes(state, depth, out, nodes);
                self.pop(state, prev_max);
            }
        }
    }
}

/// Relabels colors in order of first appearance.
fn normalize(colors: &mut [Color]) {
    let mut map = [0 as Color; 256];
    let mut next = 0;
    for c in colors.iter_mut() {
        if map[*c as usize] == 0 {
            next += 1;
            map[*c as usize] = next;
        }
        *c = map[*c as usize];
    }
}

/// Closure of the generated permutation group of `0..n`.
fn close_group(n: usize, generators: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    for g in generators {
        let mut sorted = g.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidArgument(format!("{g:?} is not a permutation of 0..{n}")));
        }
    }
    let identity: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
    let mut frontier = vec![identity];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if seen.insert(q.clone()) {
                if seen.len() > 1 << 20 {
                    return Err(Error::InvalidArgument("symmetry group too large".into()));
                }
                frontier.push(q);
            }
        }
    }
    let mut group: Vec<Vec<usize>> = seen.into_iter().collect();
    group.sort();
    Ok(group)
}

/// Searches for a `c`-coloring of the complete `r`-uniform hypergraph on `n`
/// vertices with no monochromatic Berge copy of `g`.
///
/// `Found` carries the coloring; `Exhausted` (exhaustive mode only) proves
/// none exists; `OutOfBudget` decides nothing.
pub fn find_avoiding_coloring(
    r: usize,
    c: usize,
    n: usize,
    g: &TargetGraph,
    mode: SearchMode,
    config: &SearchConfig,
) -> Result<Search<ColoredHypergraph>> {
    // validates the shape
    ColoredHypergraph::monochromatic(r, c, n, 1)?;
    match mode {
        SearchMode::Exhaustive => exhaustive(r, c, n, g, config),
        SearchMode::Randomized { seed, steps } => randomized(r, c, n, g, seed, steps, config.plateau),
    }
}

fn exhaustive(r: usize, c: usize, n: usize, g: &TargetGraph, config: &SearchConfig) -> Result<Search<ColoredHypergraph>> {
    let sets: Vec<Vec<usize>> = ColexSubsets::new(n, r).collect();
    let symmetry = match &config.vertex_symmetry {
        None => Vec::new(),
        Some(generators) => close_group(n, generators)?
            .into_iter()
            .map(|perm| {
                sets.iter()
                    .map(|s| {
                        let mut img: Vec<usize> = s.iter().map(|&v| perm[v]).collect();
                        img.sort_unstable();
                        rank_colex_unchecked(&img) as usize
                    })
                    .collect()
            })
            .collect(),
    };
    let problem = Problem {
        c,
        n,
        target: g,
        sets,
        symmetry,
    };

    let depth = config.split_depth.min(problem.sets.len());
    let mut prefixes = Vec::new();
    let mut nodes = 0;
    problem.prefixes(&mut problem.fresh(r), depth, &mut prefixes, &mut nodes);
    if nodes > config.budget {
        return Ok(Search::OutOfBudget);
    }

    let (outcome, _) = ordered_search(prefixes.len(), config.budget - nodes, config.parallelism, |b, ticker| {
        let mut state = problem.fresh(r);
        for &col in &prefixes[b] {
            let pushed = problem.try_push(&mut state, col);
            debug_assert!(pushed);
        }
        problem.dfs(&mut state, ticker)
    });
    Ok(match outcome {
        Search::Found(colors) => Search::Found(ColoredHypergraph::new(r, c, n, colors)?),
        Search::Exhausted => Search::Exhausted,
        Search::OutOfBudget => Search::OutOfBudget,
    })
}

fn objective(index: &PairIndex, c: usize, g: &TargetGraph) -> usize {
    (1..=c).map(|col| count_witness_cores(index, col as Color, g)).sum()
}

fn randomized(
    r: usize,
    c: usize,
    n: usize,
    g: &TargetGraph,
    seed: u64,
    steps: u64,
    plateau: u64,
) -> Result<Search<ColoredHypergraph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<Vec<usize>> = ColexSubsets::new(n, r).collect();
    let random_start = |rng: &mut ChaCha8Rng| -> Vec<Color> {
        (0..sets.len()).map(|_| rng.random_range(1..=c as Color)).collect()
    };
    let build = |colors: &[Color]| {
        let mut index = PairIndex::empty(n, r, c);
        for (s, &col) in sets.iter().zip(colors) {
            index.push(s, col);
        }
        index
    };

    let mut colors = random_start(&mut rng);
    let mut index = build(&colors);
    let mut score = objective(&index, c, g);
    let mut best = score;
    let mut stale = 0u64;
    for _ in 0..steps {
        if score == 0 {
            break;
        }
        if c > 1 {
            let k = rng.random_range(0..sets.len());
            let old = colors[k];
            let mut new = rng.random_range(1..c as Color);
            if new >= old {
                new += 1;
            }
            index.remove(&sets[k], old);
            index.push(&sets[k], new);
            let candidate = objective(&index, c, g);
            if candidate <= score {
                colors[k] = new;
                score = candidate;
            } else {
                index.remove(&sets[k], new);
                index.push(&sets[k], old);
            }
        }
        if score < best {
            best = score;
            stale = 0;
        } else {
            stale += 1;
        }
        if stale >= plateau && score > 0 {
            colors = random_start(&mut rng);
            index = build(&colors);
            score = objective(&index, c, g);
            best = score;
            stale = 0;
        }
    }
    if score != 0 {
        return Ok(Search::OutOfBudget);
    }
    let h = ColoredHypergraph::new(r, c, n, colors)?;
    if !is_avoiding(&h, g, DetectOptions::sequential()) {
        return Err(Error::Internal("local search objective reached zero on a non-avoiding coloring".into()));
    }
    Ok(Search::Found(h))
}

/// Status of one vertex count in a Ramsey scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NStatus {
    Avoidance(ColoredHypergraph),
    Forced,
    Unknown,
}

impl fmt::Display for NStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NStatus::Avoidance(_) => "AVOIDANCE",
            NStatus::Forced => "FORCED",
            NStatus::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RamseyResult {
    pub r: usize,
    pub c: usize,
    pub target: String,
    pub per_n: BTreeMap<usize, NStatus>,
    /// Exact value when bracketed.
    pub value: Option<usize>,
}

#[derive(Serialize)]
struct EntryJson<'a> {
    n: usize,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<&'a str>,
}

impl RamseyResult {
    /// Largest `N` with a recorded avoiding coloring, plus one.
    pub fn lower_bound(&self) -> usize {
        self.per_n
            .iter()
            .filter(|(_, s)| matches!(s, NStatus::Avoidance(_)))
            .map(|(&n, _)| n + 1)
            .max()
            .unwrap_or(self.r)
    }

    /// JSON summary; `certificate(n)` names the certificate file for an
    /// `AVOIDANCE` entry, if one was written.
    pub fn to_json(&self, certificate: impl Fn(usize) -> Option<String>) -> String {
        let names: BTreeMap<usize, Option<String>> = self.per_n.keys().map(|&n| (n, certificate(n))).collect();
        let entries: Vec<EntryJson> = self
            .per_n
            .iter()
            .map(|(&n, s)| EntryJson {
                n,
                status: s.to_string(),
                certificate: match s {
                    NStatus::Avoidance(_) => names[&n].as_deref(),
                    _ => None,
                },
            })
            .collect();
        serde_json::json!({
            "r": self.r,
            "c": self.c,
            "target": self.target,
            "per_n": entries,
            "value": self.value,
            "lower_bound": self.lower_bound(),
        })
        .to_string()
    }
}

/// Scans `N = max(r, |V(G)|)..=n_max` exhaustively, stopping at the first
/// `N` where every coloring is forced.
pub fn ramsey_exact(r: usize, c: usize, g: &TargetGraph, n_max: usize, config: &SearchConfig) -> Result<RamseyResult> {
    let start = r.max(g.num_vertices());
    let mut per_n = BTreeMap::new();
    for n in start..=n_max {
        let status = match find_avoiding_coloring(r, c, n, g, SearchMode::Exhaustive, config)? {
            Search::Found(h) => NStatus::Avoidance(h),
            Search::Exhausted => NStatus::Forced,
            Search::OutOfBudget => NStatus::Unknown,
        };
        let forced = status == NStatus::Forced;
        per_n.insert(n, status);
        if forced {
            break;
        }
    }
    let value = per_n
        .iter()
        .find(|(_, s)| **s == NStatus::Forced)
        .map(|(&n, _)| n)
        .filter(|&n| n == start || matches!(per_n.get(&(n - 1)), Some(NStatus::Avoidance(_))));
    Ok(RamseyResult {
        r,
        c,
        target: g.to_string(),
        per_n,
        value,
    })
}
