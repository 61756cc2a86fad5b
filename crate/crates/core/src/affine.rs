//! Colorings from parallel classes: color `i` is identified with class `i`
//! and an r-set may take color `i` only when no block of class `i` holds two
//! of its points. A monochromatic Berge clique in color `i` then meets each
//! block of class `i` at most once, so on `p^d` points no color contains a
//! Berge `K_{p+1}`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{Color, ColoredHypergraph};
use crate::error::{Error, Result};
use crate::geometry::ParallelClassFamily;

/// Choice among the valid colors of an r-set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    Lowest,
    /// Least used valid color so far, lowest index on ties.
    Balanced,
    Random { seed: u64 },
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreak::Lowest => f.write_str("lowest"),
            TieBreak::Balanced => f.write_str("balanced"),
            TieBreak::Random { seed } => write!(f, "random(seed={seed})"),
        }
    }
}

impl FromStr for TieBreak {
    type Err = Error;

    /// `lowest`, `balanced` or `random` (seed 0; set it afterwards).
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lowest" => Ok(TieBreak::Lowest),
            "balanced" => Ok(TieBreak::Balanced),
            "random" => Ok(TieBreak::Random { seed: 0 }),
            _ => Err(Error::Parse(format!("unknown tie-break policy {s:?}"))),
        }
    }
}

/// Colors every `r`-subset of the family's points with one of the first `c`
/// classes that separates it.
pub fn affine_coloring(r: usize, c: usize, family: &ParallelClassFamily, tie: TieBreak) -> Result<ColoredHypergraph> {
    if c == 0 || c > family.num_classes() {
        return Err(Error::InvalidArgument(format!(
            "{c} colors requested but the family has {} parallel classes",
            family.num_classes()
        )));
    }
    let n = family.num_points();
    if r > n {
        return Err(Error::InvalidArgument(format!("uniformity {r} exceeds {n} points")));
    }
    let mut rng = match tie {
        TieBreak::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut usage = vec![0usize; c];
    let mut valid = Vec::with_capacity(c);
    ColoredHypergraph::from_fn(r, c, n, |set| {
        valid.clear();
        valid.extend((0..c).filter(|&j| family.separates(j, set)));
        let pick = match (tie, valid.as_slice()) {
            (_, []) => return Err(Error::NoValidColor { set: set.to_vec() }),
            (TieBreak::Lowest, v) => v[0],
            (TieBreak::Balanced, v) => *v.iter().min_by_key(|&&j| (usage[j], j)).unwrap(),
            (TieBreak::Random { .. }, v) => v[rng.as_mut().unwrap().random_range(0..v.len())],
        };
        usage[pick] += 1;
        Ok((pick + 1) as Color)
    })
}
