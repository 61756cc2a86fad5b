//! Affine spaces AG(d, p) over prime fields and their parallel classes of
//! hyperplanes. For `d = 2` the classes are the line directions of the
//! affine plane, which form a `(p + 1)`-net of order `p`.

use crate::error::{Error, Result};

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// Least prime `>= m` by trial division.
pub fn smallest_prime_at_least(m: u64) -> u64 {
    let mut q = m.max(2);
    while !is_prime(q) {
        q += 1;
    }
    q
}

/// One parallel class: the hyperplanes `a·x = b` for a fixed normal `a` and
/// every `b` in GF(p). Block `b` is the hyperplane with offset `b`.
#[derive(Clone, Debug)]
pub struct ParallelClass {
    pub normal: Vec<u32>,
    pub blocks: Vec<Vec<usize>>,
    block_of: Vec<u32>,
}

impl ParallelClass {
    /// Index of the block containing point `x`.
    #[inline]
    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x] as usize
    }
}

/// Points of AG(d, p) and all `(p^d - 1)/(p - 1)` parallel classes of
/// hyperplanes.
///
/// Point index `i` has coordinates given by the base-`p` digits of `i`,
/// least significant first. Classes are ordered by the point index of their
/// normal vector, normalized so its first nonzero coordinate is 1.
#[derive(Clone, Debug)]
pub struct ParallelClassFamily {
    p: u32,
    d: usize,
    points: Vec<Vec<u32>>,
    classes: Vec<ParallelClass>,
}

impl ParallelClassFamily {
    pub fn affine(d: usize, p: u32) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::InvalidArgument(format!("order {p} is not prime")));
        }
        if d < 2 {
            return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
        }
        let size = (p as usize)
            .checked_pow(d as u32)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::InvalidArgument(format!("AG({d},{p}) is too large")))?;
        let points: Vec<Vec<u32>> = (0..size).map(|i| coordinates(i, d, p)).collect();

        let classes = points
            .iter()
            .filter(|a| a.iter().find(|&&x| x != 0) == Some(&1))
            .map(|a| {
                let block_of: Vec<u32> = points
                    .iter()
                    .map(|x| {
                        let dot: u64 = a.iter().zip(x).map(|(&ai, &xi)| u64::from(ai * xi)).sum();
                        (dot % u64::from(p)) as u32
                    })
                    .collect();
                let mut blocks = vec![Vec::with_capacity(size / p as usize); p as usize];
                for (x, &b) in block_of.iter().enumerate() {
                    blocks[b as usize].push(x);
                }
                ParallelClass {
                    normal: a.clone(),
                    blocks,
                    block_of,
                }
            })
            .collect();

        Ok(ParallelClassFamily { p, d, points, classes })
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn classes(&self) -> &[ParallelClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Largest number of points of `set` lying in one block of class `j`.
    pub fn class_hits(&self, j: usize, set: &[usize]) -> usize {
        let class = &self.classes[j];
        let mut counts = vec![0usize; self.p as usize];
        for &x in set {
            counts[class.block_of(x)] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    }

    /// Whether every block of class `j` holds at most one point of `set`.
    pub fn separates(&self, j: usize, set: &[usize]) -> bool {
        let class = &self.classes[j];
        set.iter()
            .enumerate()
            .all(|(i, &x)| set[..i].iter().all(|&y| class.block_of(x) != class.block_of(y)))
    }
}

fn coordinates(mut i: usize, d: usize, p: u32) -> Vec<u32> {
    (0..d)
        .map(|_| {
            let digit = (i % p as usize) as u32;
            i /= p as usize;
            digit
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(smallest_prime_at_least(2), 2);
        assert_eq!(smallest_prime_at_least(8), 11);
        assert_eq!(smallest_prime_at_least(24), 29);
        assert_eq!(smallest_prime_at_least(0), 2);
        assert!(!is_prime(1) && !is_prime(9) && is_prime(97));
    }

    #[test]
    fn family_counts() {
        for (d, p, pts, classes, block) in [(2, 3, 9, 4, 3), (2, 5, 25, 6, 5), (3, 2, 8, 7, 4)] {
            let f = ParallelClassFamily::affine(d, p).unwrap();
            assert_eq!(f.num_points(), pts);
            assert_eq!(f.num_classes(), classes);
            for class in f.classes() {
                assert_eq!(class.blocks.len(), p as usize);
                assert!(class.blocks.iter().all(|b| b.len() == block));
            }
        }
    }

    #[test]
    fn rejects_non_prime() {
        assert!(ParallelClassFamily::affine(2, 4).is_err());
        assert!(ParallelClassFamily::affine(1, 3).is_err());
    }

    #[test]
    fn partition_and_hyperplane_count() {
        for p in [2u32, 3, 5, 7, 11] {
            for d in 2..=3 {
                let f = ParallelClassFamily::affine(d, p).unwrap();
                let n = f.num_points();
                let pd = (p as usize).pow(d as u32);
                assert_eq!(f.num_classes(), (pd - 1) / (p as usize - 1));
                let hyperplanes: usize = f.classes().iter().map(|c| c.blocks.len()).sum();
                assert_eq!(hyperplanes, p as usize * (pd - 1) / (p as usize - 1));
                for class in f.classes() {
                    let mut seen = vec![0u8; n];
                    for (b, block) in class.blocks.iter().enumerate() {
                        assert_eq!(block.len(), pd / p as usize);
                        for &x in block {
                            seen[x] += 1;
                            assert_eq!(class.block_of(x), b);
                        }
                    }
                    assert!(seen.iter().all(|&s| s == 1));
                }
            }
        }
    }

    #[test]
    fn plane_is_a_net() {
        for p in [2u32, 3, 5, 7] {
            let f = ParallelClassFamily::affine(2, p).unwrap();
            let n = f.num_points();
            for x in 0..n {
                for y in 0..x {
                    let through = f
                        .classes()
                        .iter()
                        .filter(|c| c.block_of(x) == c.block_of(y))
                        .count();
                    assert_eq!(through, 1, "points {x},{y} in AG(2,{p})");
                }
            }
            for (i, ci) in f.classes().iter().enumerate() {
                for cj in &f.classes()[..i] {
                    for li in &ci.blocks {
                        for lj in &cj.blocks {
                            assert_eq!(li.iter().filter(|x| lj.contains(x)).count(), 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hits() {
        let f = ParallelClassFamily::affine(2, 3).unwrap();
        assert_eq!(f.class_hits(0, &[4]), 1);
        let line = f.classes()[2].blocks[1].clone();
        assert_eq!(f.class_hits(2, &line), 3);
        let transversal: Vec<usize> = f.classes()[2].blocks.iter().map(|b| b[0]).collect();
        assert_eq!(f.class_hits(2, &transversal), 1);
        assert!(f.separates(2, &transversal));
        assert!(!f.separates(2, &line));
    }
}
