//! Exhaustive branch-and-bound search for shortest k-radius sequences on tiny alphabets.
//!
//! Lengths are tried in increasing order starting from a counting bound; each
//! length is decided by a depth-first search over the next symbol. Pruning:
//!
//! * the next symbol is at most one more than the largest symbol used so far
//!   (relabeling does not change the property), and never repeats the
//!   previous symbol (an adjacent duplicate can always be deleted);
//! * a new position covers at most `k` new pairs, so the uncovered pair count
//!   must fit in the remaining capacity;
//! * each occurrence of a symbol covers at most `2k` of its partners, so every
//!   symbol needs a minimum number of further occurrences, and those minima
//!   must fit in the remaining positions.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::builder::{construct, BuildOptions};
use crate::error::{invalid, Result};
use crate::sequence::{verify, Sequence, Symbol};

/// Largest alphabet the solver accepts.
pub const MAX_SEARCH_ALPHABET: usize = 16;

pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// `best_length` is proven minimal.
    Optimal,
    /// Every length up to the cap was refuted; the optimum is above it.
    LowerBoundOnly,
    /// The node budget ran out before a decision.
    BudgetExhausted,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub k: usize,
    pub status: SearchStatus,
    /// Shortest sequence known (found by the search or by the constructions).
    pub best_length: Option<u64>,
    /// No k-radius sequence is shorter than this.
    pub proven_lower: u64,
    pub nodes_explored: u64,
    #[serde(serialize_with = "as_secs")]
    pub elapsed: Duration,
    #[serde(skip)]
    pub witness: Option<Sequence>,
}

fn as_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Shortest `m` such that a length-`m` sequence has at least `C(n,2)` position
/// pairs within distance `k`, and `m >= n`.
pub fn window_capacity_bound(n: usize, k: usize) -> u64 {
    let need = (n * n.saturating_sub(1) / 2) as u64;
    let cap = |m: u64| (1..=k as u64).map(|d| m.saturating_sub(d)).sum::<u64>();
    let mut m = n as u64;
    while cap(m) < need {
        m += 1;
    }
    m
}

enum Outcome {
    Found(Vec<Symbol>),
    Refuted,
    OutOfBudget,
}

struct Solver {
    n: usize,
    k: usize,
    length: usize,
    budget: u64,
    nodes: u64,
    seq: Vec<Symbol>,
    last_seen: Vec<Option<usize>>,
    /// `partners[a]` has bit `b` set when `{a, b}` is covered.
    partners: Vec<u32>,
    uncovered: usize,
}

impl Solver {
    fn feasible(n: usize, k: usize, length: usize, budget: u64) -> (Outcome, u64) {
        let mut solver = Solver {
            n,
            k,
            length,
            budget,
            nodes: 0,
            seq: Vec::with_capacity(length),
            last_seen: vec![None; n],
            partners: vec![0; n],
            uncovered: n * (n - 1) / 2,
        };
        let outcome = match solver.dfs(0) {
            Some(true) => Outcome::Found(solver.seq.clone()),
            Some(false) => Outcome::Refuted,
            None => Outcome::OutOfBudget,
        };
        (outcome, solver.nodes)
    }

    fn admissible(&self, pos: usize) -> bool {
        let remaining = self.length - pos;
        let capacity: usize = (0..remaining).map(|t| (pos + t).min(self.k)).sum();
        if self.uncovered > capacity {
            return false;
        }
        let full = (1u32 << self.n) - 1;
        let mut needed = 0;
        for a in 0..self.n {
            let open = (full & !self.partners[a] & !(1 << a)).count_ones() as usize;
            if open == 0 {
                continue;
            }
            needed += match self.last_seen[a] {
                None => 1.max(open.div_ceil(2 * self.k)),
                Some(at) => {
                    let reach = (at + self.k + 1).saturating_sub(pos).min(remaining);
                    open.saturating_sub(reach).div_ceil(2 * self.k)
                }
            };
            if needed > remaining {
                return false;
            }
        }
        true
    }

    /// `Some(true)` found, `Some(false)` refuted, `None` out of budget.
    fn dfs(&mut self, pos: usize) -> Option<bool> {
        if self.uncovered == 0 {
            return Some(true);
        }
        if pos == self.length || !self.admissible(pos) {
            return Some(false);
        }
        let max_used = self.seq.iter().copied().max().map_or(0, |m| m as usize + 1);
        let limit = (max_used + 1).min(self.n);
        let prev = self.seq.last().copied();
        let window_start = pos.saturating_sub(self.k);
        for s in 0..limit as Symbol {
            if Some(s) == prev {
                continue;
            }
            if self.nodes == self.budget {
                return None;
            }
            self.nodes += 1;
            let saved_partners = self.partners[s as usize];
            let saved_last = self.last_seen[s as usize];
            let mut fresh = Vec::with_capacity(self.k);
            for i in window_start..pos {
                let w = self.seq[i];
                if w != s && self.partners[s as usize] & (1 << w) == 0 {
                    self.partners[s as usize] |= 1 << w;
                    self.partners[w as usize] |= 1 << s;
                    fresh.push(w);
                }
            }
            self.uncovered -= fresh.len();
            self.last_seen[s as usize] = Some(pos);
            self.seq.push(s);

            let result = self.dfs(pos + 1);
            if result != Some(false) {
                // Leave the state in place so a found sequence survives.
                return result;
            }

            self.seq.pop();
            self.last_seen[s as usize] = saved_last;
            self.uncovered += fresh.len();
            for w in fresh {
                self.partners[w as usize] &= !(1 << s);
            }
            self.partners[s as usize] = saved_partners;
        }
        Some(false)
    }
}

/// Finds `f_k(n)` exactly when the node budget allows.
///
/// The constructions supply the initial incumbent, so the search only ever
/// has to refute lengths below it. `length_cap` stops the search after the
/// given length has been examined.
pub fn exact_search(
    n: usize,
    k: usize,
    node_budget: u64,
    length_cap: Option<u64>,
) -> Result<SearchResult> {
    if node_budget == 0 {
        return Err(invalid("node budget must be positive"));
    }
    if k == 0 {
        return Err(invalid("radius k must be at least 1"));
    }
    if n > MAX_SEARCH_ALPHABET {
        return Err(invalid(format!(
            "exact search supports n <= {MAX_SEARCH_ALPHABET}, got {n}"
        )));
    }
    let started = Instant::now();
    let (incumbent, _) = construct(n, k, &BuildOptions::default())?;
    let upper = incumbent.len() as u64;
    let mut result = SearchResult {
        n,
        k,
        status: SearchStatus::Optimal,
        best_length: Some(upper),
        proven_lower: upper,
        nodes_explored: 0,
        elapsed: Duration::ZERO,
        witness: Some(incumbent),
    };

    let mut length = window_capacity_bound(n, k).min(upper);
    while length < upper {
        if length_cap.is_some_and(|cap| length > cap) {
            result.status = SearchStatus::LowerBoundOnly;
            result.proven_lower = length;
            break;
        }
        let remaining = node_budget - result.nodes_explored;
        let (outcome, nodes) = Solver::feasible(n, k, length as usize, remaining);
        result.nodes_explored += nodes;
        match outcome {
            Outcome::Found(symbols) => {
                let seq = Sequence::new(symbols, n, k)?;
                debug_assert!(verify(&seq).is_k_radius);
                result.best_length = Some(seq.len() as u64);
                result.proven_lower = seq.len() as u64;
                result.witness = Some(seq);
                break;
            }
            Outcome::Refuted => length += 1,
            Outcome::OutOfBudget => {
                result.status = SearchStatus::BudgetExhausted;
                result.proven_lower = length;
                break;
            }
        }
    }
    result.elapsed = started.elapsed();
    Ok(result)
}
