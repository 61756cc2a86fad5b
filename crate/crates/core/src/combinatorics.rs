//! Binomial coefficients and colexicographic ranking of k-subsets.
//!
//! A sorted set `s_1 < s_2 < ... < s_k` of 0-indexed vertices has colex rank
//! `C(s_1, 1) + C(s_2, 2) + ... + C(s_k, k)`. The rank of a set never depends
//! on the size of the ground set, so growing `N` appends new ranks without
//! reordering old ones.

use crate::error::{Error, Result};

/// `C(n, k)`, saturating at `u64::MAX` on overflow.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Colex rank of a strictly increasing set.
pub fn rank_colex(set: &[usize]) -> Result<u64> {
    if let Some(w) = set.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Contract(format!(
            "colex rank needs a strictly increasing set, got {} before {}",
            w[0], w[1]
        )));
    }
    Ok(rank_colex_unchecked(set))
}

/// Colex rank without the monotonicity check. The caller guarantees `set` is
/// strictly increasing.
#[inline]
pub fn rank_colex_unchecked(set: &[usize]) -> u64 {
    set.iter()
        .enumerate()
        .map(|(i, &s)| binomial(s as u64, i as u64 + 1))
        .sum()
}

/// Inverse of [`rank_colex`]: the `k`-set with the given rank.
pub fn unrank_colex(mut rank: u64, k: usize) -> Vec<usize> {
    let mut out = vec![0usize; k];
    for i in (1..=k).rev() {
        // largest s with C(s, i) <= rank
        let mut lo = (i - 1) as u64;
        let mut hi = lo + 1;
        while binomial(hi, i as u64) <= rank {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if binomial(mid, i as u64) <= rank {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out[i - 1] = lo as usize;
        rank -= binomial(lo, i as u64);
    }
    out
}

/// Advance `set` to its colex successor among subsets of `0..n`.
/// Returns `false` (leaving `set` unspecified) when `set` was the last one.
pub fn next_colex(set: &mut [usize], n: usize) -> bool {
    let k = set.len();
    for i in 0..k {
        let limit = if i + 1 < k { set[i + 1] } else { n };
        if set[i] + 1 < limit {
            set[i] += 1;
            for (j, s) in set.iter_mut().enumerate().take(i) {
                *s = j;
            }
            return true;
        }
    }
    false
}

/// Iterator over all `k`-subsets of `0..n` in colex order.
pub struct ColexSubsets {
    current: Vec<usize>,
    n: usize,
    done: bool,
}

impl ColexSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        ColexSubsets {
            current: (0..k).collect(),
            n,
            done: k > n,
        }
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        if !next_colex(&mut self.current, self.n) {
            self.done = true;
        }
        Some(out)
    }
}

/// Colex rank of the pair `{a, b}` (any order, `a != b`).
#[inline]
pub fn pair_rank(a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    hi * (hi - 1) / 2 + lo
}
