//! Top-level construction of short k-radius sequences.
//!
//! The main path splits `n` symbols into `2k+1` classes of `q` symbols plus a
//! leftover set `B`, and emits
//!
//! ```text
//! t_0 t_1 ... t_2k  s_AB  s
//! ```
//!
//! where `t_i` is a k-radius sequence over class `i` (built recursively),
//! `s_AB` lists `a, b` for every `b` in `B` and every symbol `a`, and `s` is the
//! padded cycle concatenation from [`crate::cycles`], which covers every pair
//! of symbols from different classes when all divisors of `q` except 1 exceed
//! `k`. Degenerate regimes fall back to direct constructions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::ghosh_length;
use crate::cycles::{divisor_condition, CycleSystem};
use crate::error::{invalid, Error, Result};
use crate::numtheory::{checked_factorial, is_prime, largest_prime_in, next_prime};
use crate::optimal2p::{construct_2p, erase_symbols};
use crate::sequence::{verify, PairSet, Sequence, Symbol};

/// Outputs with `n` up to this size are re-verified by [`VerifyPolicy::Auto`].
pub const AUTO_VERIFY_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    #[default]
    #[serde(rename = "auto")]
    Auto,
    #[serde(rename = "main_recursive")]
    MainRecursive,
    #[serde(rename = "optimal_2p")]
    Optimal2p,
    /// An optimal `2p` sequence with surplus symbols erased.
    #[serde(rename = "optimal_2p_erased")]
    Optimal2pErased,
    #[serde(rename = "block_expand")]
    BlockExpand,
    #[serde(rename = "trivial_large_k")]
    TrivialLargeK,
    #[serde(rename = "single_pass")]
    SinglePass,
    #[serde(rename = "ghosh_base")]
    GhoshBase,
}

impl Strategy {
    pub const ALL: [Strategy; 8] = [
        Strategy::Auto,
        Strategy::MainRecursive,
        Strategy::Optimal2p,
        Strategy::Optimal2pErased,
        Strategy::BlockExpand,
        Strategy::TrivialLargeK,
        Strategy::SinglePass,
        Strategy::GhoshBase,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::MainRecursive => "main_recursive",
            Strategy::Optimal2p => "optimal_2p",
            Strategy::Optimal2pErased => "optimal_2p_erased",
            Strategy::BlockExpand => "block_expand",
            Strategy::TrivialLargeK => "trivial_large_k",
            Strategy::SinglePass => "single_pass",
            Strategy::GhoshBase => "ghosh_base",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown strategy '{s}'")))
    }
}

/// How `q` is picked for the recursive layer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QChoice {
    /// Largest prime `q <= n/(2k+1)` with `q > k`.
    #[default]
    Prime,
    /// `q = floor((x-1)/k!) k! + 1` with `x = floor(n/(2k+1))`; falls back to
    /// [`QChoice::Prime`] on layers where that `q` is unusable.
    Factorial,
}

impl FromStr for QChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prime" => Ok(QChoice::Prime),
            "factorial" => Ok(QChoice::Factorial),
            _ => Err(invalid(format!("unknown q choice '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum VerifyPolicy {
    /// Verify when `n <= AUTO_VERIFY_LIMIT`.
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Applied to the outermost layer; inner layers always dispatch automatically.
    pub strategy: Strategy,
    pub q_choice: QChoice,
    pub verify: VerifyPolicy,
}

/// One layer of the construction, outermost first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub strategy: Strategy,
    pub n: usize,
    pub k: usize,
    /// Class size of a recursive layer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    /// Prime of an optimal `2p` layer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    /// Block size of a block expansion.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildPlan {
    pub n: usize,
    pub k: usize,
    pub strategy: Strategy,
    pub q_choice: QChoice,
    pub trace: Vec<TraceRecord>,
}

impl BuildPlan {
    /// `q` of the outermost recursive layer, if it is one.
    pub fn top_q(&self) -> Option<usize> {
        self.trace.first().and_then(|r| r.q)
    }
}

/// `q = floor((x-1)/p!) p! + 1`; every divisor of `q` except 1 exceeds `p`.
///
/// Returns 1 when `x < 2 p!`; callers must treat that as unusable.
pub fn choose_q_factorial(p: u64, x: u64) -> Result<u64> {
    if p == 0 {
        return Err(invalid("p must be at least 1"));
    }
    if p > 20 {
        return Err(Error::Overflow(format!("{p}! does not fit in 64 bits")));
    }
    let f = checked_factorial(p)?;
    if x < f {
        return Err(Error::NoValidQ(format!("x={x} is below {p}! = {f}")));
    }
    Ok((x - 1) / f * f + 1)
}

/// Largest prime `q <= floor(n/(2k+1))` with `q > k`.
pub fn choose_q_prime(k: usize, n: usize) -> Result<usize> {
    let x = n / (2 * k + 1);
    if x < 2 {
        return Err(Error::NoValidQ(format!(
            "floor(n/(2k+1)) = {x} < 2 for n={n}, k={k}"
        )));
    }
    largest_prime_in(k as u64, x as u64)
        .map(|q| q as usize)
        .ok_or_else(|| Error::NoValidQ(format!("no prime in ({k}, {x}] for n={n}")))
}

fn choose_q(k: usize, n: usize, choice: QChoice) -> Result<usize> {
    if choice == QChoice::Factorial {
        let x = (n / (2 * k + 1)) as u64;
        if let Ok(q) = choose_q_factorial(k as u64, x) {
            if q > 1 {
                return Ok(q as usize);
            }
        }
    }
    choose_q_prime(k, n)
}

/// `0, 1, ..., n-1, 0, 1, ..., n-k-2`, of length `2n - k - 1`.
pub fn trivial_large_k(n: usize, k: usize) -> Result<Sequence> {
    if k >= n || k < n / 2 {
        return Err(invalid(format!(
            "trivial construction needs floor(n/2) <= k < n (n={n}, k={k})"
        )));
    }
    let symbols = (0..n).chain(0..n - k - 1).map(|s| s as Symbol).collect();
    Ok(Sequence::from_parts(symbols, n, k))
}

/// An optimal 1-radius sequence: an Euler walk of the complete graph.
///
/// For odd `n` every degree is even and the walk is closed, `C(n,2) + 1` terms.
/// For even `n` the extra edges `(2,3), (4,5), ..., (n-2,n-1)` leave only `0`
/// and `1` with odd degree, giving an open walk of `C(n,2) + n/2` terms.
pub fn ghosh_1radius(n: usize) -> Sequence {
    if n == 0 {
        return Sequence::from_parts(Vec::new(), 0, 1);
    }
    let mut used = PairSet::new(n);
    // the one remaining duplicate edge at each vertex, if any
    let mut extra: Vec<Option<Symbol>> = vec![None; n];
    if n.is_multiple_of(2) {
        for a in (2..n).step_by(2) {
            extra[a] = Some(a as Symbol + 1);
            extra[a + 1] = Some(a as Symbol);
        }
    }
    let mut cursor: Vec<Symbol> = vec![0; n];

    let mut next_edge = |v: Symbol| -> Option<Symbol> {
        let vi = v as usize;
        if let Some(u) = extra[vi].take() {
            extra[u as usize] = None;
            return Some(u);
        }
        while (cursor[vi] as usize) < n {
            let u = cursor[vi];
            cursor[vi] += 1;
            if u != v && used.insert(u, v) {
                return Some(u);
            }
        }
        None
    };

    let mut walk = Vec::with_capacity(ghosh_length(n) as usize);
    let mut stack: Vec<Symbol> = vec![0];
    while let Some(&v) = stack.last() {
        match next_edge(v) {
            Some(u) => stack.push(u),
            None => walk.push(stack.pop().expect("stack is non-empty")),
        }
    }
    walk.reverse();
    Sequence::from_parts(walk, n, 1)
}

/// Replaces each symbol `a_i` of a `K`-radius sequence over `N` symbols by the
/// ascending block `i*b .. (i+1)*b` (clipped to `n`), `b = floor((k+1)/(K+1))`.
/// The result is k-radius over `n` symbols.
pub fn expand_blocks(seq: &Sequence, k: usize, n: usize) -> Result<Sequence> {
    let inner_k = seq.radius();
    if inner_k > k {
        return Err(invalid(format!(
            "inner radius {inner_k} exceeds target radius {k}"
        )));
    }
    let block = (k + 1) / (inner_k + 1);
    let expected = n.div_ceil(block);
    if seq.alphabet_size() != expected {
        return Err(invalid(format!(
            "inner alphabet has {} symbols, expected ceil({n}/{block}) = {expected}",
            seq.alphabet_size()
        )));
    }
    let mut out = Vec::with_capacity(seq.len() * block);
    for &s in seq.symbols() {
        let lo = s as usize * block;
        let hi = (lo + block).min(n);
        out.extend((lo..hi).map(|x| x as Symbol));
    }
    Ok(Sequence::from_parts(out, n, k))
}

fn layered_length(n: usize, k: usize, q: usize, class_total: u64) -> u64 {
    let w = 2 * k as u64 + 1;
    let (n, q) = (n as u64, q as u64);
    class_total
        + 2 * n * (n - q * w)
        + CycleSystem::new(k, q as usize)
            .expect("valid")
            .s_length_formula()
}

fn assemble_unchecked(n: usize, k: usize, q: usize, classes: &[&[Symbol]]) -> Vec<Symbol> {
    let sys = CycleSystem::new(k, q).expect("validated by caller");
    let class_total: usize = classes.iter().map(|c| c.len()).sum();
    let len = layered_length(n, k, q, class_total as u64) as usize;
    let mut out = Vec::with_capacity(len);
    for c in classes {
        out.extend_from_slice(c);
    }
    for b in sys.vertex_count()..n {
        for a in 0..n {
            out.push(a as Symbol);
            out.push(b as Symbol);
        }
    }
    out.extend_from_slice(sys.build_s().symbols());
    debug_assert_eq!(out.len(), len);
    out
}

/// Concatenates the class sequences, the leftover pairs and the cycle sequence.
///
/// `class_sequences[i]` must be a k-radius sequence using only the global ids
/// `i*q .. (i+1)*q`; its alphabet size tag is ignored.
pub fn assemble_layers(
    n: usize,
    k: usize,
    q: usize,
    class_sequences: &[Sequence],
) -> Result<Sequence> {
    let w = 2 * k + 1;
    if k == 0 || q == 0 {
        return Err(invalid("k and q must be positive"));
    }
    if q * w > n {
        return Err(invalid(format!("q(2k+1) = {} exceeds n = {n}", q * w)));
    }
    if !divisor_condition(k, q) {
        return Err(invalid(format!(
            "q={q} has a divisor other than 1 that is <= k={k}"
        )));
    }
    if class_sequences.len() != w {
        return Err(invalid(format!(
            "expected {w} class sequences, got {}",
            class_sequences.len()
        )));
    }
    for (i, c) in class_sequences.iter().enumerate() {
        let lo = (i * q) as Symbol;
        if let Some(&s) = c
            .symbols()
            .iter()
            .find(|&&s| s < lo || s >= lo + q as Symbol)
        {
            return Err(invalid(format!(
                "class {i} contains symbol {s} outside {lo}..{}",
                lo as usize + q
            )));
        }
        let local = c.symbols().iter().map(|&s| s - lo).collect();
        let report = verify(&Sequence::from_parts(local, q, k));
        if !report.is_k_radius {
            return Err(invalid(format!(
                "class {i} is not {k}-radius over its {q} symbols"
            )));
        }
    }
    let classes: Vec<&[Symbol]> = class_sequences.iter().map(|c| c.symbols()).collect();
    Ok(Sequence::from_parts(
        assemble_unchecked(n, k, q, &classes),
        n,
        k,
    ))
}

/// A resolved construction step for one `(n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Empty,
    SinglePass,
    TrivialLargeK,
    Optimal2p { p: usize },
    Erased2p { p: usize },
    Ghosh,
    Layered { q: usize },
    Blocks { inner_k: usize, block: usize },
}

impl Step {
    fn record(self, n: usize, k: usize) -> TraceRecord {
        let (strategy, q, p, block) = match self {
            Step::Empty => (Strategy::SinglePass, None, None, None),
            Step::SinglePass => (Strategy::SinglePass, None, None, None),
            Step::TrivialLargeK => (Strategy::TrivialLargeK, None, None, None),
            Step::Optimal2p { p } => (Strategy::Optimal2p, None, Some(p), None),
            Step::Erased2p { p } => (Strategy::Optimal2pErased, None, Some(p), None),
            Step::Ghosh => (Strategy::GhoshBase, None, None, None),
            Step::Layered { q } => (Strategy::MainRecursive, Some(q), None, None),
            Step::Blocks { block, .. } => (Strategy::BlockExpand, None, None, Some(block)),
        };
        TraceRecord {
            strategy,
            n,
            k,
            q,
            p,
            block,
        }
    }
}

/// Picks a step per `(n, k)` from length estimates, memoized across layers.
struct Planner {
    q_choice: QChoice,
    memo: HashMap<(usize, usize), (Step, u64)>,
}

fn odd_prime_half(n: usize) -> Option<usize> {
    (n.is_multiple_of(2) && n >= 6 && is_prime(n as u64 / 2)).then_some(n / 2)
}

/// Erasing the most frequent symbols first shortens the result the most.
fn erasure_victims(seq: &Sequence, count: usize) -> Vec<Symbol> {
    let mut freq = vec![0usize; seq.alphabet_size()];
    for &s in seq.symbols() {
        freq[s as usize] += 1;
    }
    let mut order: Vec<Symbol> = (0..seq.alphabet_size() as Symbol).collect();
    order.sort_by_key(|&s| (std::cmp::Reverse(freq[s as usize]), std::cmp::Reverse(s)));
    order.truncate(count);
    order
}

fn erased_2p(n: usize) -> Result<(usize, Sequence)> {
    let p = next_prime(n.div_ceil(2) as u64) as usize;
    let full = construct_2p(p)?;
    let victims = erasure_victims(&full, 2 * p - n);
    Ok((p, erase_symbols(&full, &victims)?))
}

impl Planner {
    fn new(q_choice: QChoice) -> Self {
        Self {
            q_choice,
            memo: HashMap::new(),
        }
    }

    fn plan(&mut self, n: usize, k: usize) -> Result<(Step, u64)> {
        if let Some(&hit) = self.memo.get(&(n, k)) {
            return Ok(hit);
        }
        let step = self.auto_step(n, k)?;
        let est = self.estimate(n, k, step)?;
        self.memo.insert((n, k), (step, est));
        Ok((step, est))
    }

    fn auto_step(&mut self, n: usize, k: usize) -> Result<Step> {
        if n == 0 {
            return Ok(Step::Empty);
        }
        if n <= k + 1 {
            return Ok(Step::SinglePass);
        }
        if k >= n / 2 {
            return Ok(Step::TrivialLargeK);
        }
        if k == 1 {
            return Ok(Step::Ghosh);
        }
        if k == 2 {
            if let Some(p) = odd_prime_half(n) {
                return Ok(Step::Optimal2p { p });
            }
        }
        if let Ok(q) = choose_q(k, n, self.q_choice) {
            return Ok(Step::Layered { q });
        }
        if k >= 3 {
            return self.best_blocks(n, k);
        }
        let (p, erased) = erased_2p(n)?;
        Ok(if (erased.len() as u64) < ghosh_length(n) {
            Step::Erased2p { p }
        } else {
            Step::Ghosh
        })
    }

    /// Block expansion over the inner radius with the shortest estimate.
    fn best_blocks(&mut self, n: usize, k: usize) -> Result<Step> {
        let mut best: Option<(u64, Step)> = None;
        for inner_k in 1..k {
            let block = (k + 1) / (inner_k + 1);
            if block < 2 {
                break;
            }
            let step = Step::Blocks { inner_k, block };
            let est = self.estimate(n, k, step)?;
            // ties go to the larger inner radius
            if best.is_none_or(|(b, _)| est <= b) {
                best = Some((est, step));
            }
        }
        best.map(|(_, s)| s)
            .ok_or_else(|| invalid(format!("block expansion needs k >= 3 (k={k})")))
    }

    fn estimate(&mut self, n: usize, k: usize, step: Step) -> Result<u64> {
        Ok(match step {
            Step::Empty => 0,
            Step::SinglePass => n as u64,
            Step::TrivialLargeK => 2 * n as u64 - k as u64 - 1,
            Step::Optimal2p { p } => (p * p + p) as u64,
            Step::Erased2p { .. } => erased_2p(n)?.1.len() as u64,
            Step::Ghosh => ghosh_length(n),
            Step::Layered { q } => {
                let inner = self.plan(q, k)?.1;
                layered_length(n, k, q, (2 * k as u64 + 1) * inner)
            }
            Step::Blocks { inner_k, block } => {
                self.plan(n.div_ceil(block), inner_k)?.1 * block as u64
            }
        })
    }

    /// The step for an explicitly requested strategy, validating its preconditions.
    fn forced_step(&mut self, n: usize, k: usize, strategy: Strategy) -> Result<Step> {
        let reject = |why: String| Err(invalid(format!("{strategy} not applicable: {why}")));
        match strategy {
            Strategy::Auto => self.auto_step(n, k),
            Strategy::SinglePass if n <= k + 1 => Ok(Step::SinglePass),
            Strategy::SinglePass => reject(format!("n={n} > k+1={}", k + 1)),
            Strategy::TrivialLargeK if n >= 1 && n / 2 <= k && k < n => Ok(Step::TrivialLargeK),
            Strategy::TrivialLargeK => reject(format!("needs floor(n/2) <= k < n (n={n}, k={k})")),
            Strategy::GhoshBase => Ok(Step::Ghosh),
            Strategy::Optimal2p | Strategy::Optimal2pErased if k != 2 => {
                reject(format!("needs k=2, got {k}"))
            }
            Strategy::Optimal2p | Strategy::Optimal2pErased => match (n, odd_prime_half(n)) {
                (4, _) => Ok(Step::Optimal2p { p: 2 }),
                (_, Some(p)) if strategy == Strategy::Optimal2p => Ok(Step::Optimal2p { p }),
                (0..=3, _) => reject(format!("n={n} is too small")),
                _ => Ok(Step::Erased2p { p: erased_2p(n)?.0 }),
            },
            Strategy::MainRecursive => Ok(Step::Layered {
                q: choose_q(k, n, self.q_choice)?,
            }),
            Strategy::BlockExpand => self.best_blocks(n, k),
        }
    }

    fn realize(
        &mut self,
        n: usize,
        k: usize,
        step: Step,
        trace: &mut Vec<TraceRecord>,
    ) -> Result<Vec<Symbol>> {
        if step != Step::Empty {
            trace.push(step.record(n, k));
        }
        Ok(match step {
            Step::Empty => Vec::new(),
            Step::SinglePass => (0..n as Symbol).collect(),
            Step::TrivialLargeK => trivial_large_k(n, k)?.into_symbols(),
            Step::Optimal2p { p } => construct_2p(p)?.into_symbols(),
            Step::Erased2p { .. } => erased_2p(n)?.1.into_symbols(),
            Step::Ghosh => ghosh_1radius(n).into_symbols(),
            Step::Layered { q } => {
                let inner_step = self.plan(q, k)?.0;
                let inner = self.realize(q, k, inner_step, trace)?;
                let shifted: Vec<Vec<Symbol>> = (0..2 * k + 1)
                    .map(|i| inner.iter().map(|&s| s + (i * q) as Symbol).collect())
                    .collect();
                let classes: Vec<&[Symbol]> = shifted.iter().map(Vec::as_slice).collect();
                assemble_unchecked(n, k, q, &classes)
            }
            Step::Blocks { inner_k, block } => {
                let inner_n = n.div_ceil(block);
                let inner_step = self.plan(inner_n, inner_k)?.0;
                let inner = self.realize(inner_n, inner_k, inner_step, trace)?;
                let inner = Sequence::from_parts(inner, inner_n, inner_k);
                expand_blocks(&inner, k, n)?.into_symbols()
            }
        })
    }
}

/// Builds a k-radius sequence over `n` symbols.
///
/// With [`Strategy::Auto`] the dispatch is, in order: a single pass when
/// `n <= k+1`; the `2n-k-1` construction when `k >= floor(n/2)`; the optimal
/// 1-radius walk when `k = 1`; the optimal `2p` sequence when `k = 2` and
/// `n = 2p`; the recursive layered construction when a suitable `q` exists;
/// otherwise block expansion (`k >= 3`) or the shorter of an erased `2p`
/// sequence and the 1-radius walk (`k = 2`).
pub fn construct(n: usize, k: usize, options: &BuildOptions) -> Result<(Sequence, BuildPlan)> {
    if k == 0 {
        return Err(invalid("radius k must be at least 1"));
    }
    if n > Symbol::MAX as usize {
        return Err(invalid(format!("n={n} exceeds the symbol range")));
    }
    let mut planner = Planner::new(options.q_choice);
    let mut plan = BuildPlan {
        n,
        k,
        strategy: options.strategy,
        q_choice: options.q_choice,
        trace: Vec::new(),
    };
    if n == 0 {
        return Ok((Sequence::from_parts(Vec::new(), 0, k), plan));
    }
    let step = planner.forced_step(n, k, options.strategy)?;
    let symbols = planner.realize(n, k, step, &mut plan.trace)?;
    let seq = Sequence::from_parts(symbols, n, k);

    let check = match options.verify {
        VerifyPolicy::Always => true,
        VerifyPolicy::Never => false,
        VerifyPolicy::Auto => n <= AUTO_VERIFY_LIMIT,
    };
    if check {
        let report = verify(&seq);
        if !report.is_k_radius {
            return Err(Error::ConstructionBug(format!(
                "{step:?} for n={n}, k={k} left {} pairs uncovered, e.g. {:?}",
                report.total_pairs - report.covered_pairs,
                report.uncovered_witnesses.first()
            )));
        }
    }
    Ok((seq, plan))
}
