//! Sequences over a dense alphabet and the k-radius verifier.

use serde::Serialize;

use crate::error::{invalid, Result};

/// Symbol ids are dense integers `0..n`. External alphabets are mapped by the caller.
pub type Symbol = u32;

/// Maximum number of uncovered pairs listed in a [`CoverageReport`].
pub const WITNESS_LIMIT: usize = 100;

/// An ordered list of symbols tagged with its alphabet size `n` and target radius `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequence {
    n: usize,
    k: usize,
    symbols: Vec<Symbol>,
}

impl Sequence {
    /// Validates that `k >= 1` and every symbol id is below `n`.
    pub fn new(symbols: Vec<Symbol>, n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("radius k must be at least 1"));
        }
        if let Some((idx, &s)) = symbols.iter().enumerate().find(|(_, &s)| s as usize >= n) {
            return Err(invalid(format!(
                "symbol {s} at index {idx} is outside the alphabet 0..{n}"
            )));
        }
        Ok(Self { n, k, symbols })
    }

    /// Callers guarantee the invariants of [`Sequence::new`].
    pub(crate) fn from_parts(symbols: Vec<Symbol>, n: usize, k: usize) -> Self {
        debug_assert!(k >= 1);
        debug_assert!(symbols.iter().all(|&s| (s as usize) < n));
        Self { n, k, symbols }
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.k
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Same symbols, different radius tag.
    pub fn with_radius(self, k: usize) -> Result<Self> {
        Self::new(self.symbols, self.n, k)
    }

    pub fn reversed(&self) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Self::from_parts(symbols, self.n, self.k)
    }
}

/// Result of checking every unordered pair of distinct symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub n: usize,
    pub k: usize,
    pub total_pairs: u64,
    pub covered_pairs: u64,
    /// Uncovered pairs `(a, b)` with `a < b`, in lexicographic order of `(b, a)`.
    pub uncovered_witnesses: Vec<(Symbol, Symbol)>,
    pub truncated: bool,
    pub is_k_radius: bool,
}

/// Triangular bitset over unordered pairs `{a, b}`, `a != b`.
#[derive(Debug, Clone)]
pub(crate) struct PairSet {
    words: Vec<u64>,
    len: u64,
}

impl PairSet {
    pub(crate) fn new(n: usize) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        Self {
            words: vec![0; pairs.div_ceil(64)],
            len: 0,
        }
    }

    #[inline]
    fn index(a: Symbol, b: Symbol) -> usize {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let hi = hi as usize;
        hi * (hi - 1) / 2 + lo as usize
    }

    /// Returns true when the pair was not present before.
    #[inline]
    pub(crate) fn insert(&mut self, a: Symbol, b: Symbol) -> bool {
        let idx = Self::index(a, b);
        let mask = 1u64 << (idx % 64);
        let word = &mut self.words[idx / 64];
        if *word & mask == 0 {
            *word |= mask;
            self.len += 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub(crate) fn contains(&self, a: Symbol, b: Symbol) -> bool {
        let idx = Self::index(a, b);
        self.words[idx / 64] & (1u64 << (idx % 64)) != 0
    }

    pub(crate) fn len(&self) -> u64 {
        self.len
    }
}

/// Checks the k-radius property of `seq` against its own radius tag.
///
/// Runs in `O(m * k)` with a window over the last `k + 1` positions.
pub fn verify(seq: &Sequence) -> CoverageReport {
    verify_with_radius(seq, seq.k)
}

/// Like [`verify`] but against an explicit radius instead of the tag.
pub fn verify_with_radius(seq: &Sequence, k: usize) -> CoverageReport {
    let n = seq.n;
    let s = &seq.symbols;
    let mut pairs = PairSet::new(n);
    for i in 1..s.len() {
        let x = s[i];
        for &y in &s[i.saturating_sub(k)..i] {
            if x != y {
                pairs.insert(x, y);
            }
        }
    }

    let total_pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let covered_pairs = pairs.len();
    let missing = total_pairs - covered_pairs;
    let mut uncovered_witnesses = Vec::new();
    if missing > 0 {
        'scan: for b in 1..n as Symbol {
            for a in 0..b {
                if !pairs.contains(a, b) {
                    if uncovered_witnesses.len() == WITNESS_LIMIT {
                        break 'scan;
                    }
                    uncovered_witnesses.push((a, b));
                }
            }
        }
    }

    CoverageReport {
        n,
        k,
        total_pairs,
        covered_pairs,
        truncated: missing > uncovered_witnesses.len() as u64,
        uncovered_witnesses,
        is_k_radius: missing == 0,
    }
}

/// Minimum index distance between an occurrence of `a` and one of `b`.
///
/// `None` when either symbol never occurs.
pub fn pair_gap(seq: &Sequence, a: Symbol, b: Symbol) -> Result<Option<usize>> {
    if a == b {
        return Err(invalid("pair_gap needs two distinct symbols"));
    }
    if a as usize >= seq.n || b as usize >= seq.n {
        return Err(invalid(format!(
            "pair ({a}, {b}) is outside the alphabet 0..{}",
            seq.n
        )));
    }
    let mut last_a: Option<usize> = None;
    let mut last_b: Option<usize> = None;
    let mut best: Option<usize> = None;
    for (i, &x) in seq.symbols.iter().enumerate() {
        let other = if x == a {
            last_a = Some(i);
            last_b
        } else if x == b {
            last_b = Some(i);
            last_a
        } else {
            continue;
        };
        if let Some(j) = other {
            let gap = i - j;
            best = Some(best.map_or(gap, |g| g.min(gap)));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) const INTRO_EXAMPLE: [Symbol; 21] = [
        0, 1, 6, 4, 3, 7, 8, 0, 4, 2, 5, 0, 3, 2, 1, 8, 5, 6, 7, 2, 1,
    ];

    fn seq(symbols: &[Symbol], n: usize, k: usize) -> Sequence {
        Sequence::new(symbols.to_vec(), n, k).unwrap()
    }

    /// O(m^2) reference: a pair is covered iff some occurrences are within k.
    fn naive_covered(symbols: &[Symbol], n: usize, k: usize) -> Vec<(Symbol, Symbol)> {
        let mut covered = vec![vec![false; n]; n];
        for i in 0..symbols.len() {
            for j in 0..symbols.len() {
                if i.abs_diff(j) <= k && symbols[i] != symbols[j] {
                    covered[symbols[i] as usize][symbols[j] as usize] = true;
                }
            }
        }
        (0..n)
            .flat_map(|b| (0..b).map(move |a| (a, b)))
            .filter(|&(a, b)| covered[a][b])
            .map(|(a, b)| (a as Symbol, b as Symbol))
            .collect()
    }

    #[test]
    fn intro_example_is_2_radius() {
        let r = verify(&seq(&INTRO_EXAMPLE, 9, 2));
        assert!(r.is_k_radius);
        assert_eq!(r.covered_pairs, 36);
        assert_eq!(r.total_pairs, 36);
        assert!(r.uncovered_witnesses.is_empty());
        assert!(!r.truncated);
    }

    #[test]
    fn path_misses_endpoints() {
        let r = verify(&seq(&[0, 1, 2, 3], 4, 2));
        assert!(!r.is_k_radius);
        assert_eq!(r.uncovered_witnesses, vec![(0, 3)]);
        assert_eq!(r.covered_pairs, 5);
    }

    #[test]
    fn special_p2_sequence_is_2_radius() {
        assert!(verify(&seq(&[0, 1, 2, 3, 0], 4, 2)).is_k_radius);
    }

    #[test]
    fn rejects_out_of_range_symbol() {
        let err = Sequence::new(vec![0, 1, 9, 2], 4, 2).unwrap_err();
        assert!(err.to_string().contains("index 2"), "{err}");
        assert!(Sequence::new(vec![0], 1, 0).is_err());
    }

    #[test]
    fn witnesses_truncate() {
        let r = verify(&seq(&[0], 30, 1));
        assert_eq!(r.uncovered_witnesses.len(), WITNESS_LIMIT);
        assert!(r.truncated);
        assert_eq!(r.covered_pairs, 0);
        assert_eq!(r.total_pairs, 435);
    }

    #[test]
    fn empty_and_singleton_alphabets() {
        assert!(verify(&seq(&[], 0, 1)).is_k_radius);
        assert!(verify(&seq(&[0], 1, 3)).is_k_radius);
        assert!(!verify(&seq(&[0], 2, 3)).is_k_radius);
    }

    #[test]
    fn gap_examples() {
        let s = seq(&INTRO_EXAMPLE, 9, 2);
        assert_eq!(pair_gap(&s, 0, 1).unwrap(), Some(1));
        assert_eq!(pair_gap(&seq(&[0, 1, 2, 3], 4, 2), 0, 3).unwrap(), Some(3));
        assert_eq!(pair_gap(&seq(&[0, 1, 2], 4, 2), 0, 3).unwrap(), None);
        assert!(pair_gap(&s, 2, 2).is_err());
        assert!(pair_gap(&s, 2, 9).is_err());
    }

    fn arb_sequence(
        max_n: usize,
        max_len: usize,
    ) -> impl Strategy<Value = (Vec<Symbol>, usize, usize)> {
        (1..=max_n, 1..=6usize).prop_flat_map(move |(n, k)| {
            (
                proptest::collection::vec(0..n as Symbol, 0..=max_len),
                Just(n),
                Just(k),
            )
        })
    }

    proptest! {
        #[test]
        fn agrees_with_naive_oracle((symbols, n, k) in arb_sequence(10, 50)) {
            let s = seq(&symbols, n, k);
            let r = verify(&s);
            let covered = naive_covered(&symbols, n, k);
            prop_assert_eq!(r.covered_pairs, covered.len() as u64);
            prop_assert_eq!(r.is_k_radius, r.covered_pairs == r.total_pairs);
            prop_assert_eq!(r.is_k_radius, r.uncovered_witnesses.is_empty());
            for &(a, b) in &r.uncovered_witnesses {
                prop_assert!(!covered.contains(&(a, b)));
            }
        }

        #[test]
        fn gap_matches_coverage((symbols, n, k) in arb_sequence(8, 40)) {
            let s = seq(&symbols, n, k);
            let covered = naive_covered(&symbols, n, k);
            for b in 0..n as Symbol {
                for a in 0..b {
                    let within = pair_gap(&s, a, b).unwrap().is_some_and(|g| g <= k);
                    prop_assert_eq!(within, covered.contains(&(a, b)));
                }
            }
        }

        #[test]
        fn reversal_gives_identical_report((symbols, n, k) in arb_sequence(12, 60)) {
            let s = seq(&symbols, n, k);
            prop_assert_eq!(verify(&s), verify(&s.reversed()));
        }

        #[test]
        fn appending_never_loses_coverage(
            (symbols, n, k) in arb_sequence(10, 40),
            extra in proptest::collection::vec(0..10 as Symbol, 1..10),
        ) {
            let before = verify(&seq(&symbols, n, k)).covered_pairs;
            let mut longer = symbols.clone();
            longer.extend(extra.into_iter().filter(|&x| (x as usize) < n));
            let after = verify(&seq(&longer, n, k)).covered_pairs;
            prop_assert!(after >= before);
        }

        #[test]
        fn permutation_is_k_radius_iff_short(
            perm in (1..15usize).prop_flat_map(|n| Just((0..n as Symbol).collect::<Vec<_>>()).prop_shuffle()),
            k in 1..16usize,
        ) {
            let n = perm.len();
            prop_assert_eq!(verify(&seq(&perm, n, k)).is_k_radius, n <= k + 1);
        }
    }
}
