//! Budgeted search over ordered branches, run either sequentially or on the
//! rayon pool with a result identical to the sequential run.
//!
//! A search visits nodes; every visit costs one unit of budget. The
//! sequential semantics: branches are explored in order, the first witness
//! wins, and the search becomes inconclusive once more than `budget` nodes
//! have been visited. The parallel path runs every branch with the full
//! budget as its own cap and then replays the per-branch node counts in order,
//! so the outcome never depends on scheduling.

#[cfg(feature = "parallel")]
use std::sync::atomic::{AtomicUsize, Ordering};

/// How branch-level data parallelism is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    /// Rayon's current pool. Identical to `Sequential` without the
    /// `parallel` feature.
    #[default]
    Rayon,
}

/// Result of a budgeted search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// Whole space explored, nothing found.
    Exhausted,
    /// Budget ran out first. Never to be read as "absent".
    OutOfBudget,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Search<U> {
        match self {
            Search::Found(t) => Search::Found(f(t)),
            Search::Exhausted => Search::Exhausted,
            Search::OutOfBudget => Search::OutOfBudget,
        }
    }
}

/// Signals that a branch must stop.
#[derive(Debug, Clone, Copy)]
pub struct Stop;

/// Node counter handed to a branch.
pub struct Ticker<'a> {
    used: u64,
    cap: u64,
    #[cfg(feature = "parallel")]
    branch: usize,
    #[cfg(feature = "parallel")]
    first_found: Option<&'a AtomicUsize>,
    #[cfg(not(feature = "parallel"))]
    _marker: std::marker::PhantomData<&'a ()>,
}

impl<'a> Ticker<'a> {
    fn new(cap: u64) -> Self {
        Ticker {
            used: 0,
            cap,
            #[cfg(feature = "parallel")]
            branch: 0,
            #[cfg(feature = "parallel")]
            first_found: None,
            #[cfg(not(feature = "parallel"))]
            _marker: std::marker::PhantomData,
        }
    }

    pub(crate) fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    /// Counts one node visit.
    #[inline]
    pub fn tick(&mut self) -> Result<(), Stop> {
        self.used += 1;
        if self.used > self.cap {
            return Err(Stop);
        }
        #[cfg(feature = "parallel")]
        if let Some(first) = self.first_found {
            // an earlier branch already has a witness; this one cannot matter
            if first.load(Ordering::Relaxed) < self.branch {
                return Err(Stop);
            }
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

struct BranchRun<T> {
    outcome: Result<Option<T>, Stop>,
    used: u64,
}

/// Runs `branches` ordered branches under a shared node budget. One unit is
/// charged for the root before any branch starts. Returns the outcome and the
/// number of nodes the equivalent sequential run visits.
pub fn ordered_search<T, F>(branches: usize, budget: u64, par: Parallelism, run: F) -> (Search<T>, u64)
where
    T: Send,
    F: Fn(usize, &mut Ticker<'_>) -> Result<Option<T>, Stop> + Sync,
{
    if budget == 0 {
        return (Search::OutOfBudget, 0);
    }
    let mut spent = 1u64;

    let use_rayon = cfg!(feature = "parallel") && par == Parallelism::Rayon && branches > 1;
    if !use_rayon {
        for b in 0..branches {
            let mut ticker = Ticker::new(budget - spent);
            let outcome = run(b, &mut ticker);
            spent += ticker.used.min(budget - spent + 1);
            match outcome {
                Ok(Some(t)) => return (Search::Found(t), spent),
                Ok(None) => {}
                Err(Stop) => return (Search::OutOfBudget, spent),
            }
        }
        return (Search::Exhausted, spent);
    }

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let first_found = AtomicUsize::new(usize::MAX);
        let cap = budget - spent;
        let runs: Vec<BranchRun<T>> = (0..branches)
            .into_par_iter()
            .with_max_len(1)
            .map(|b| {
                if first_found.load(Ordering::Relaxed) < b {
                    return BranchRun { outcome: Err(Stop), used: 0 };
                }
                let mut ticker = Ticker::new(cap);
                ticker.branch = b;
                ticker.first_found = Some(&first_found);
                let outcome = run(b, &mut ticker);
                if let Ok(Some(_)) = outcome {
                    first_found.fetch_min(b, Ordering::Relaxed);
                }
                BranchRun { outcome, used: ticker.used }
            })
            .collect();
        replay(runs, budget, spent)
    }
    #[cfg(not(feature = "parallel"))]
    unreachable!()
}

#[cfg_attr(not(feature = "parallel"), allow(dead_code))]
fn replay<T>(runs: Vec<BranchRun<T>>, budget: u64, mut spent: u64) -> (Search<T>, u64) {
    for run in runs {
        match run.outcome {
            Ok(Some(t)) => {
                return if spent + run.used <= budget {
                    (Search::Found(t), spent + run.used)
                } else {
                    (Search::OutOfBudget, budget + 1)
                };
            }
            Ok(None) => {
                spent += run.used;
                if spent > budget {
                    return (Search::OutOfBudget, budget + 1);
                }
            }
            Err(Stop) => return (Search::OutOfBudget, budget + 1),
        }
    }
    (Search::Exhausted, spent)
}

/// Runs `f` on a dedicated rayon pool with `threads` workers. Without the
/// `parallel` feature this just calls `f`.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}
