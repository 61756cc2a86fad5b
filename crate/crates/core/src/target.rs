//! Target graphs whose Berge copies are sought.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// A simple graph on vertices `0..n` with normalized edges `(u, v)`, `u < v`,
/// kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    label: String,
}

impl TargetGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut norm = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a},{b}) has an endpoint outside 0..{n}"
                )));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "duplicate edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        Ok(TargetGraph {
            n,
            edges: norm,
            label: format!("graph({n} vertices)"),
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|b| (0..b).map(move |a| (a, b)));
        Self::new(n, edges).unwrap().labeled(format!("K{n}"))
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v));
        Self::new(n, edges).unwrap().labeled(format!("P{n}"))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parse(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let edges = (0..n).map(|v| (v, (v + 1) % n));
        Ok(Self::new(n, edges)?.labeled(format!("C{n}")))
    }

    fn labeled(mut self, label: String) -> Self {
        self.label = label;
        self
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }
}

impl fmt::Display for TargetGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Parses `K<n>`, `P<n>`, `C<n>`, or else reads an edge-list file.
///
/// Edge-list files hold one `u v` pair per line; blank lines and lines
/// starting with `#` are skipped. An optional `vertices <n>` line fixes the
/// vertex count (otherwise it is one more than the largest endpoint).
pub fn make_target(spec: &str) -> Result<TargetGraph> {
    let family = spec.chars().next();
    let rest = spec.get(1..).unwrap_or("");
    if let Some(kind @ ('K' | 'P' | 'C')) = family {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad size in target {spec:?}")))?;
            if n == 0 {
                return Err(Error::Parse(format!("target {spec:?} has no vertices")));
            }
            return match kind {
                'K' => Ok(TargetGraph::complete(n)),
                'P' => Ok(TargetGraph::path(n)),
                _ => TargetGraph::cycle(n),
            };
        }
    }
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return parse_edge_list(&text).map(|g| g.labeled(spec.to_string()));
    }
    Err(Error::Parse(format!(
        "target {spec:?} is neither K<n>, P<n>, C<n> nor an edge-list file"
    )))
}

pub fn parse_edge_list(text: &str) -> Result<TargetGraph> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse(format!("line {}: cannot parse {line:?}", lineno + 1));
        match fields.as_slice() {
            ["vertices", n] => declared = Some(n.parse::<usize>().map_err(|_| bad())?),
            [a, b] => edges.push((
                a.parse::<usize>().map_err(|_| bad())?,
                b.parse::<usize>().map_err(|_| bad())?,
            )),
            _ => return Err(bad()),
        }
    }
    let implied = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let n = declared.unwrap_or(implied);
    TargetGraph::new(n, edges).map_err(|e| Error::Parse(e.to_string()))
}
