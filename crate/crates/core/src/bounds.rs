//! Known bounds on the shortest k-radius sequence length, and the gcd-sum identity.

use serde::Serialize;

use crate::numtheory::{divisors, gcd, totient};

/// Every bound that applies to `(n, k)`. Fractional bounds are rounded inward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundSet {
    pub n: usize,
    pub k: usize,
    /// `ceil((n^2 - n) / 2k)`.
    pub general_lower: u64,
    /// `ceil(C(n,2)/2 + 3n/4)`, only for `k = 2` and `n = 2 (mod 4)`.
    pub mod4_lower: Option<u64>,
    /// `C(n,2) + 1` for odd `n`, `C(n,2) + n/2` for even `n`; only for `k = 1`.
    pub ghosh_exact: Option<u64>,
    /// `2n - k - 1` once `k >= floor(n/2)` (with `k` capped at `n - 1`).
    pub large_k_exact: Option<u64>,
    /// `floor(3n^2 / k)`, only for `n >= k`.
    pub jl_upper: Option<u64>,
}

impl BoundSet {
    /// Largest lower bound, counting exact values as lower bounds.
    pub fn best_lower(&self) -> u64 {
        [self.mod4_lower, self.ghosh_exact, self.large_k_exact]
            .into_iter()
            .flatten()
            .fold(self.general_lower, u64::max)
    }

    /// Smallest known upper bound.
    pub fn best_upper(&self) -> Option<u64> {
        [self.ghosh_exact, self.large_k_exact, self.jl_upper]
            .into_iter()
            .flatten()
            .min()
    }

    /// An exact value, when one of the exact formulas applies.
    pub fn exact(&self) -> Option<u64> {
        self.ghosh_exact.or(self.large_k_exact)
    }
}

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

pub fn ghosh_length(n: usize) -> u64 {
    let n = n as u64;
    if n % 2 == 1 {
        pairs(n) + 1
    } else {
        pairs(n) + n / 2
    }
}

/// Panics when `k == 0`.
pub fn bounds(n: usize, k: usize) -> BoundSet {
    assert!(k >= 1, "radius must be positive");
    let (nn, kk) = (n as u64, k as u64);
    let general_lower = (nn * nn.saturating_sub(1)).div_ceil(2 * kk);
    let mod4_lower = (k == 2 && n % 4 == 2).then(|| (nn * (nn + 2)).div_ceil(4));
    let ghosh_exact = (k == 1).then(|| ghosh_length(n));
    let large_k_exact = (n >= 1 && k >= n / 2).then(|| 2 * nn - kk.min(nn - 1) - 1);
    let jl_upper = (n >= k).then(|| 3 * nn * nn / kk);
    BoundSet {
        n,
        k,
        general_lower,
        mod4_lower,
        ghosh_exact,
        large_k_exact,
        jl_upper,
    }
}

/// `sum_{d=0}^{m-1} gcd(d, m)` by direct summation, with `gcd(0, m) = m`.
pub fn gcd_sum(m: u64) -> u64 {
    (0..m).map(|d| gcd(d, m)).sum()
}

/// The same sum through the totient identity `m * sum_{d | m} phi(d) / d`.
pub fn gcd_sum_totient(m: u64) -> u64 {
    divisors(m).into_iter().map(|d| totient(d) * (m / d)).sum()
}
