//! Edge colorings of the complete r-uniform hypergraph, stored by colex rank,
//! and the `BRC1` text format.

use std::fmt::Write as _;
use std::path::Path;

use crate::combinatorics::{binomial, next_colex, rank_colex_unchecked, ColexSubsets};
use crate::error::{Error, Result};

/// Colors are 1-based; `u8` caps a coloring at 255 colors.
pub type Color = u8;

/// A `c`-coloring of every `r`-subset of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredHypergraph {
    r: usize,
    c: usize,
    n: usize,
    colors: Vec<Color>,
}

impl ColoredHypergraph {
    pub fn new(r: usize, c: usize, n: usize, colors: Vec<Color>) -> Result<Self> {
        check_shape(r, c, n)?;
        let expected = edge_count(n, r)?;
        if colors.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "expected {expected} colors for C({n},{r}), got {}",
                colors.len()
            )));
        }
        if let Some((rank, &col)) = colors
            .iter()
            .enumerate()
            .find(|(_, &col)| col == 0 || usize::from(col) > c)
        {
            return Err(Error::InvalidArgument(format!(
                "hyperedge {rank} has color {col}, outside 1..={c}"
            )));
        }
        Ok(ColoredHypergraph { r, c, n, colors })
    }

    /// Every hyperedge gets `color`.
    pub fn monochromatic(r: usize, c: usize, n: usize, color: Color) -> Result<Self> {
        check_shape(r, c, n)?;
        let len = edge_count(n, r)?;
        Self::new(r, c, n, vec![color; len])
    }

    /// Colors each r-set (visited in colex order) with `f(set)`.
    pub fn from_fn<F>(r: usize, c: usize, n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Result<Color>,
    {
        check_shape(r, c, n)?;
        let len = edge_count(n, r)?;
        let mut colors = Vec::with_capacity(len);
        let mut set: Vec<usize> = (0..r).collect();
        loop {
            colors.push(f(&set)?);
            if !next_colex(&mut set, n) {
                break;
            }
        }
        Self::new(r, c, n, colors)
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn num_colors(&self) -> usize {
        self.c
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    #[inline]
    pub fn color(&self, rank: u64) -> Color {
        self.colors[rank as usize]
    }

    /// Color of a sorted r-set.
    pub fn color_of_set(&self, set: &[usize]) -> Color {
        debug_assert_eq!(set.len(), self.r);
        self.colors[rank_colex_unchecked(set) as usize]
    }

    /// All r-sets in colex order, paired with their colors.
    pub fn edges(&self) -> impl Iterator<Item = (Vec<usize>, Color)> + '_ {
        ColexSubsets::new(self.n, self.r).zip(self.colors.iter().copied())
    }

    /// Restriction to the vertex subset `w`, relabeled by increasing order.
    pub fn induced_subcoloring(&self, w: &[usize]) -> Result<Self> {
        let mut w = w.to_vec();
        w.sort_unstable();
        w.dedup();
        if w.len() < self.r {
            return Err(Error::InvalidArgument(format!(
                "subset of size {} is smaller than the uniformity {}",
                w.len(),
                self.r
            )));
        }
        if let Some(&v) = w.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} out of range for N = {}",
                self.n
            )));
        }
        let mut image = vec![0usize; self.r];
        Self::from_fn(self.r, self.c, w.len(), |set| {
            for (dst, &s) in image.iter_mut().zip(set) {
                *dst = w[s];
            }
            Ok(self.color_of_set(&image))
        })
    }

    /// Serializes in `BRC1` format: a header line, then all colors on one
    /// line separated by single spaces, newline terminated.
    pub fn to_brc1(&self) -> String {
        let mut out = String::with_capacity(16 + 3 * self.colors.len());
        let _ = writeln!(out, "BRC1 {} {} {}", self.r, self.c, self.n);
        for (i, col) in self.colors.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{col}");
        }
        out.push('\n');
        out
    }

    /// Parses `BRC1` text. Tokens after the header are separated by exactly
    /// one space or newline; a single final newline is accepted.
    pub fn from_brc1(text: &str) -> Result<Self> {
        let (header, body) = text
            .split_once('\n')
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 4 || fields[0] != "BRC1" {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let num = |s: &str, what: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::Parse(format!("bad {what} {s:?} in header")))
        };
        let r = num(fields[1], "r")?;
        let c = num(fields[2], "c")?;
        let n = num(fields[3], "N")?;
        check_shape(r, c, n)?;
        let expected = edge_count(n, r)?;

        let body = body.strip_suffix('\n').unwrap_or(body);
        let mut colors = Vec::with_capacity(expected);
        for tok in body.split([' ', '\n']) {
            if tok.is_empty() {
                return Err(Error::Parse(
                    "empty token: separators must be a single space or newline".into(),
                ));
            }
            if !tok.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("bad color token {tok:?}")));
            }
            let col: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad color token {tok:?}")))?;
            if col == 0 || col > c {
                return Err(Error::Parse(format!("color {col} outside 1..={c}")));
            }
            colors.push(col as Color);
        }
        if colors.len() != expected {
            return Err(Error::Parse(format!(
                "expected {expected} colors, found {}",
                colors.len()
            )));
        }
        Self::new(r, c, n, colors)
    }

    pub fn read_brc1(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_brc1(&std::fs::read_to_string(path)?)
    }

    pub fn write_brc1(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_brc1())?;
        Ok(())
    }
}

fn check_shape(r: usize, c: usize, n: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("uniformity {r} < 2")));
    }
    if c == 0 || c > usize::from(Color::MAX) {
        return Err(Error::InvalidArgument(format!(
            "color count {c} outside 1..={}",
            Color::MAX
        )));
    }
    if r > n {
        return Err(Error::InvalidArgument(format!(
            "uniformity {r} exceeds vertex count {n}"
        )));
    }
    Ok(())
}

fn edge_count(n: usize, r: usize) -> Result<usize> {
    let count = binomial(n as u64, r as u64);
    if count > (1 << 32) {
        return Err(Error::InvalidArgument(format!(
            "C({n},{r}) = {count} hyperedges is too many to store"
        )));
    }
    Ok(count as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one_odd_triple() -> ColoredHypergraph {
        ColoredHypergraph::from_fn(3, 2, 5, |s| Ok(if s == [0, 1, 4] { 2 } else { 1 })).unwrap()
    }

    #[test]
    fn induced_identity() {
        let h = one_odd_triple();
        assert_eq!(h.induced_subcoloring(&[0, 1, 2, 3, 4]).unwrap(), h);
    }

    #[test]
    fn induced_monochromatic_stays_monochromatic() {
        let h = ColoredHypergraph::monochromatic(3, 3, 7, 2).unwrap();
        let sub = h.induced_subcoloring(&[6, 1, 3, 4]).unwrap();
        assert_eq!(sub.num_vertices(), 4);
        assert!(sub.colors().iter().all(|&c| c == 2));
    }

    #[test]
    fn induced_single_edge() {
        let sub = one_odd_triple().induced_subcoloring(&[0, 1, 4]).unwrap();
        assert_eq!(sub.colors(), &[2]);
    }

    #[test]
    fn induced_too_small() {
        assert!(matches!(
            one_odd_triple().induced_subcoloring(&[0, 1]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn brc1_format() {
        let h = one_odd_triple();
        let text = h.to_brc1();
        assert_eq!(text, "BRC1 3 2 5\n1 1 1 1 2 1 1 1 1 1\n");
        assert_eq!(ColoredHypergraph::from_brc1(&text).unwrap(), h);
        // newline separators and no final newline are accepted
        let alt = "BRC1 3 2 5\n1 1 1 1\n2 1 1 1 1 1";
        assert_eq!(ColoredHypergraph::from_brc1(alt).unwrap(), h);
    }

    #[test]
    fn brc1_rejects_malformed() {
        for bad in [
            "BRC1 3 2 5\n1 1 1 1 2 1 1 1 1\n",
            "BRC1 3 2 5\n1 1 1 1 2 1 1 1 1 1 1\n",
            "BRC1 3 2 5\n1  1 1 1 2 1 1 1 1 1\n",
            "BRC1 3 2 5\n1 1 1 1 3 1 1 1 1 1\n",
            "BRC1 3 2 5\n1 1 1 1 0 1 1 1 1 1\n",
            "BRC1 3 2 5\n1 1 1 1 2 1 1 1 1 1\n\n",
            "BRC2 3 2 5\n1 1 1 1 2 1 1 1 1 1\n",
            "BRC1 3 2\n1\n",
            "BRC1 4 2 3\n",
        ] {
            assert!(ColoredHypergraph::from_brc1(bad).is_err(), "{bad:?}");
        }
    }

    proptest! {
        #[test]
        fn brc1_roundtrip_is_byte_identical(
            r in 2usize..4, extra in 0usize..4, c in 1usize..5, seed in any::<u64>()
        ) {
            let n = r + extra;
            let mut x = seed;
            let h = ColoredHypergraph::from_fn(r, c, n, |_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                Ok(((x >> 33) % c as u64) as Color + 1)
            }).unwrap();
            let text = h.to_brc1();
            let back = ColoredHypergraph::from_brc1(&text).unwrap();
            prop_assert_eq!(&back, &h);
            prop_assert_eq!(back.to_brc1(), text);
        }

        #[test]
        fn restriction_is_functorial(
            seed in any::<u64>(),
            a in proptest::collection::btree_set(0usize..9, 3..9),
            b in proptest::collection::btree_set(0usize..9, 3..9),
        ) {
            let mut x = seed;
            let h = ColoredHypergraph::from_fn(3, 3, 9, |_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                Ok(((x >> 33) % 3) as Color + 1)
            }).unwrap();
            let inter: Vec<usize> = a.intersection(&b).copied().collect();
            prop_assume!(inter.len() >= 3);
            let a: Vec<usize> = a.into_iter().collect();
            // positions of the intersection inside a
            let inner: Vec<usize> = inter.iter().map(|v| a.binary_search(v).unwrap()).collect();
            let twice = h.induced_subcoloring(&a).unwrap().induced_subcoloring(&inner).unwrap();
            let once = h.induced_subcoloring(&inter).unwrap();
            prop_assert_eq!(twice, once);
        }
    }
}
