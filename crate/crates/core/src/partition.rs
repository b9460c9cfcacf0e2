//! Exact values of the partition function p(n) and its forward differences.
//!
//! The exact path uses Euler's pentagonal-number recurrence over big integers
//! and never touches floating point. A separate brute-force enumerator exists
//! purely as an independent oracle for small n.

use std::fmt;
use std::sync::{LazyLock, RwLock};

use rug::Integer;

use crate::error::{Error, Result};

/// Largest n the enumeration oracle accepts; p(90) is about 5.7e7 leaves.
pub const BRUTE_FORCE_MAX_N: u64 = 90;

/// Append-only table of p(0), p(1), ..., p(max_n).
#[derive(Clone, Debug)]
pub struct PartitionTable {
    values: Vec<Integer>,
}

impl Default for PartitionTable {
    fn default() -> Self {
        Self::new()
    }
}

impl PartitionTable {
    pub fn new() -> Self {
        Self {
            values: vec![Integer::from(1)],
        }
    }

    pub fn with_max(max_n: u64) -> Self {
        let mut table = Self::new();
        table.extend_to(max_n);
        table
    }

    pub fn max_n(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn get(&self, n: u64) -> Option<&Integer> {
        usize::try_from(n).ok().and_then(|i| self.values.get(i))
    }

    pub fn values(&self) -> &[Integer] {
        &self.values
    }

    /// Extends the table with the pentagonal-number recurrence
    /// p(i) = sum_{k>=1} (-1)^{k+1} [p(i - k(3k-1)/2) + p(i - k(3k+1)/2)].
    pub fn extend_to(&mut self, max_n: u64) {
        let target = usize::try_from(max_n).expect("partition index exceeds address space");
        self.values
            .reserve(target.saturating_sub(self.values.len() - 1));
        while self.values.len() <= target {
            let i = self.values.len();
            let mut sum = Integer::new();
            for k in 1usize.. {
                let first = k * (3 * k - 1) / 2;
                if first > i {
                    break;
                }
                let second = k * (3 * k + 1) / 2;
                if k % 2 == 1 {
                    sum += &self.values[i - first];
                    if second <= i {
                        sum += &self.values[i - second];
                    }
                } else {
                    sum -= &self.values[i - first];
                    if second <= i {
                        sum -= &self.values[i - second];
                    }
                }
            }
            self.values.push(sum);
        }
    }
}

static SHARED_TABLE: LazyLock<RwLock<PartitionTable>> =
    LazyLock::new(|| RwLock::new(PartitionTable::new()));

/// Makes sure the shared table covers `0..=max_n`, so later reads only take
/// the read lock. Call this before fanning a sweep out across threads.
pub fn ensure_table(max_n: u64) {
    {
        let table = SHARED_TABLE.read().expect("partition table lock poisoned");
        if table.max_n() >= max_n {
            return;
        }
    }
    let mut table = SHARED_TABLE.write().expect("partition table lock poisoned");
    if table.max_n() < max_n {
        table.extend_to(max_n);
    }
}

/// Runs `f` with read access to p(0..=max_n) from the shared table.
pub fn with_values<R>(max_n: u64, f: impl FnOnce(&[Integer]) -> R) -> R {
    ensure_table(max_n);
    let table = SHARED_TABLE.read().expect("partition table lock poisoned");
    f(&table.values()[..=max_n as usize])
}

/// The number of partitions of n, with p(0) = 1.
pub fn p_exact(n: u64) -> Integer {
    with_values(n, |values| values[n as usize].clone())
}

/// Counts partitions of `n` by walking every partition once, choosing parts in
/// nonincreasing order. Independent of the recurrence; only for small n.
pub fn p_brute(n: u64) -> Result<u64> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Budget {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    fn count(remaining: u64, largest: u64) -> u64 {
        if remaining == 0 {
            return 1;
        }
        (1..=largest.min(remaining))
            .map(|part| count(remaining - part, part))
            .sum()
    }
    Ok(count(n, n))
}

/// Binomial coefficient C(r, k) as an exact integer.
pub(crate) fn binomial(r: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(r, k))
}

/// The exact forward difference Δ^r p(n) = sum_k (-1)^{r-k} C(r,k) p(n+k).
pub fn delta_r_p(n: u64, r: u32) -> Integer {
    with_values(n + u64::from(r), |values| {
        difference_from(&values[n as usize..=(n as usize + r as usize)])
    })
}

fn difference_from(window: &[Integer]) -> Integer {
    let r = (window.len() - 1) as u32;
    let mut acc = Integer::new();
    for (k, value) in window.iter().enumerate() {
        let term = binomial(r, k as u32) * value;
        if (r as usize - k).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Result of an empirical sign-stabilization scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignThreshold {
    pub r: u32,
    /// Upper end of the scanned range; nothing is claimed beyond it.
    pub n_max: u64,
    /// Smallest n0 such that the scanned quantity is positive on [n0, n_max],
    /// or `None` when it is not positive at n_max itself.
    pub threshold: Option<u64>,
}

impl fmt::Display for SignThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.threshold {
            Some(n0) => write!(
                f,
                "r = {}: positive for {} <= n <= {} (checked only up to n = {})",
                self.r, n0, self.n_max, self.n_max
            ),
            None => write!(
                f,
                "r = {}: not positive at n = {}; no threshold within range",
                self.r, self.n_max
            ),
        }
    }
}

/// Smallest n0 with Δ^r p(n) > 0 for all n0 <= n <= n_max, by exact scan.
pub fn empirical_sign_threshold_p(r: u32, n_max: u64) -> SignThreshold {
    let threshold = with_values(n_max + u64::from(r), |values| {
        let mut n0 = None;
        for n in (0..=n_max).rev() {
            let window = &values[n as usize..=(n as usize + r as usize)];
            if difference_from(window) > 0 {
                n0 = Some(n);
            } else {
                break;
            }
        }
        n0
    });
    SignThreshold {
        r,
        n_max,
        threshold,
    }
}
