//! Scan budgets, seeded sampling and the order-preserving parallel scan used by
//! every exhaustive check.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_MAX_WORK: u64 = 100_000_000;
pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanBudget {
    /// Largest estimated work for which a scan runs exhaustively.
    pub max_work: u64,
    /// Number of seeded samples drawn when a scan is too large.
    pub samples: u64,
    pub seed: u64,
    /// Ignore `max_work` and always scan everything.
    pub exhaustive: bool,
}

impl Default for ScanBudget {
    fn default() -> Self {
        ScanBudget {
            max_work: DEFAULT_MAX_WORK,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            exhaustive: false,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Plan {
    Exhaustive,
    Sampled(u64),
}

impl ScanBudget {
    /// Default budget, with `max_work` taken from `EA_BUDGET` when set.
    pub fn from_env() -> Self {
        let mut b = ScanBudget::default();
        if let Some(v) = std::env::var("EA_BUDGET").ok().and_then(|s| s.trim().parse().ok()) {
            b.max_work = v;
        }
        b
    }

    pub fn exhaustive() -> Self {
        ScanBudget {
            exhaustive: true,
            ..Default::default()
        }
    }

    pub fn plan(&self, work: u64) -> Plan {
        if self.exhaustive || work <= self.max_work {
            Plan::Exhaustive
        } else {
            Plan::Sampled(self.samples)
        }
    }

    /// A generator seeded from the budget seed and a per-check salt, so that
    /// independent checks do not share a stream.
    pub fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

/// Scans `0..n` in canonical order and returns the first hit together with the
/// work counted up to and including the outer index that produced it.
///
/// Outer indices are evaluated in parallel chunks, but the result is the one a
/// sequential loop would produce.
pub fn first_hit<W, F>(n: usize, f: F) -> (u64, Option<W>)
where
    W: Send,
    F: Fn(usize) -> (u64, Option<W>) + Sync,
{
    let chunk = (rayon::current_num_threads() * 8).max(32);
    let mut total = 0u64;
    let mut start = 0;
    while start < n {
        let end = (start + chunk).min(n);
        let results: Vec<(u64, Option<W>)> = (start..end).into_par_iter().map(&f).collect();
        for (work, hit) in results {
            total += work;
            if hit.is_some() {
                return (total, hit);
            }
        }
        start = end;
    }
    (total, None)
}

/// Uniformly chosen member of a bit set, or `None` when it is empty.
pub fn random_member(set: &FixedBitSet, rng: &mut impl Rng) -> Option<usize> {
    let count = set.count_ones(..);
    if count == 0 {
        return None;
    }
    set.ones().nth(rng.gen_range(0..count))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_hit_is_sequential_order() {
        let (work, hit) = first_hit(1000, |i| (1, (i % 97 == 96 || i == 500).then_some(i)));
        assert_eq!(hit, Some(96));
        assert_eq!(work, 97);
        let (work, hit) = first_hit::<usize, _>(10, |_| (2, None));
        assert_eq!((work, hit), (20, None));
    }

    #[test]
    fn plan_switches_to_sampling() {
        let b = ScanBudget {
            max_work: 10,
            ..Default::default()
        };
        assert_eq!(b.plan(10), Plan::Exhaustive);
        assert_eq!(b.plan(11), Plan::Sampled(DEFAULT_SAMPLES));
        let b = ScanBudget {
            max_work: 10,
            exhaustive: true,
            ..Default::default()
        };
        assert_eq!(b.plan(1 << 40), Plan::Exhaustive);
    }
}
