//! Optimal 2-radius sequences over `2p` symbols for a prime `p`.
//!
//! The alphabet is `A = {0..p-1}` plus an underlined copy `_A`. For each
//! `1 <= j <= (p-1)/2` the edges `(i, _(i+j))` and `(i, _(i-j))` form a
//! Hamiltonian cycle `H_j` of the complete bipartite graph on `A` and `_A`;
//! these cycles are edge-disjoint and miss only the edges `(i, _i)`. Each `H_j`
//! is cut at `_1` into a head and a tail, the pieces are interleaved so that
//! consecutive pieces join cleanly, and a short tail sequence picks up the
//! pairs the interleaving cannot reach. The result has length `p^2 + p`,
//! which meets the lower bound for alphabets of size `2 (mod 4)`.
//!
//! Underlined symbols are encoded as `p + value`.

use std::collections::BTreeSet;

use crate::error::{invalid, Result};
use crate::numtheory::{is_prime, mod_inverse};
use crate::sequence::{Sequence, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BipSymbol {
    pub value: usize,
    pub underlined: bool,
}

impl BipSymbol {
    pub fn plain(value: usize) -> Self {
        Self {
            value,
            underlined: false,
        }
    }

    pub fn under(value: usize) -> Self {
        Self {
            value,
            underlined: true,
        }
    }

    pub fn encode(self, p: usize) -> Symbol {
        (if self.underlined {
            p + self.value
        } else {
            self.value
        }) as Symbol
    }

    pub fn decode(s: Symbol, p: usize) -> Self {
        let s = s as usize;
        if s >= p {
            Self::under(s - p)
        } else {
            Self::plain(s)
        }
    }
}

impl std::fmt::Display for BipSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.underlined {
            write!(f, "_{}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamCycle {
    pub j: usize,
    /// Traversal from `0`; the closing edge back to `0` is implicit.
    pub vertices: Vec<BipSymbol>,
}

fn check_odd_prime(p: usize) -> Result<()> {
    if p < 3 || !is_prime(p as u64) {
        return Err(invalid(format!("p={p} must be an odd prime")));
    }
    Ok(())
}

fn check_step(p: usize, j: usize) -> Result<()> {
    check_odd_prime(p)?;
    if j == 0 || j > (p - 1) / 2 {
        return Err(invalid(format!(
            "j={j} out of range 1..={} for p={p}",
            (p - 1) / 2
        )));
    }
    Ok(())
}

/// `0, _j, 2j, _3j, ...` for `2p` steps.
pub fn hamiltonian_cycle(p: usize, j: usize) -> Result<HamCycle> {
    check_step(p, j)?;
    let vertices = (0..2 * p)
        .map(|t| BipSymbol {
            value: t * j % p,
            underlined: t % 2 == 1,
        })
        .collect();
    Ok(HamCycle { j, vertices })
}

/// Splits `H_j` into the run before `_1` and the run from `_1` to the end.
pub fn split_cycle(p: usize, j: usize) -> Result<(Vec<BipSymbol>, Vec<BipSymbol>)> {
    let mut h = hamiltonian_cycle(p, j)?.vertices;
    let inv = mod_inverse(j as u64, p as u64).expect("j is a unit mod a prime") as usize;
    // _1 sits at the odd position congruent to j^{-1} mod p
    let cut = if inv % 2 == 1 { inv } else { inv + p };
    debug_assert_eq!(h[cut], BipSymbol::under(1));
    let second = h.split_off(cut);
    Ok((h, second))
}

/// The interleaving of all cycle pieces; length `p^2 - p`.
///
/// Ascending over `j` it takes the head of `H_j` for odd `j` and the tail for
/// even `j`; descending from `(p-1)/2` back to 1 it takes the other piece.
pub fn interleaved(p: usize) -> Result<Vec<BipSymbol>> {
    check_odd_prime(p)?;
    let half = (p - 1) / 2;
    let pieces = (1..=half)
        .map(|j| split_cycle(p, j))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(p * p - p);
    for (idx, (head, tail)) in pieces.iter().enumerate() {
        out.extend_from_slice(if idx % 2 == 0 { head } else { tail });
    }
    for (idx, (head, tail)) in pieces.iter().enumerate().rev() {
        out.extend_from_slice(if idx % 2 == 0 { tail } else { head });
    }
    Ok(out)
}

/// The tail sequence `t_1..t_{2p}` before its first two terms are swapped.
pub fn tail_unswapped(p: usize) -> Result<Vec<BipSymbol>> {
    check_odd_prime(p)?;
    let neg = |x: usize| (p - x % p) % p;
    Ok((1..=2 * p)
        .map(|i| match i % 4 {
            1 => BipSymbol::under(neg((i - 1) / 2)),
            2 => BipSymbol::plain(neg((i - 2) / 2)),
            3 => BipSymbol::plain(i.div_ceil(2) % p),
            _ => BipSymbol::under(i / 2 % p),
        })
        .collect())
}

/// The tail with its first two terms swapped, so that it starts with `0`.
pub fn tail(p: usize) -> Result<Vec<BipSymbol>> {
    let mut t = tail_unswapped(p)?;
    t.swap(0, 1);
    Ok(t)
}

/// Pairs the interleaving cannot reach within distance 2: `(i, _i)`,
/// `(1-j, 1+j)` and `(_-j, _j)` for `1 <= j <= (p-1)/2`.
pub fn exceptional_pairs(p: usize) -> Result<Vec<(BipSymbol, BipSymbol)>> {
    check_odd_prime(p)?;
    let mut out: Vec<_> = (0..p)
        .map(|i| (BipSymbol::plain(i), BipSymbol::under(i)))
        .collect();
    for j in 1..=(p - 1) / 2 {
        out.push((
            BipSymbol::plain((1 + p - j) % p),
            BipSymbol::plain((1 + j) % p),
        ));
        out.push((BipSymbol::under(p - j), BipSymbol::under(j)));
    }
    Ok(out)
}

/// Optimal 2-radius sequence over `2p` symbols, length `p^2 + p` (5 for `p = 2`).
pub fn construct_2p(p: usize) -> Result<Sequence> {
    if p == 2 {
        return Ok(Sequence::from_parts(vec![0, 1, 2, 3, 0], 4, 2));
    }
    if !is_prime(p as u64) {
        return Err(invalid(format!("p={p} is not prime")));
    }
    let mut body = interleaved(p)?;
    // the tail starts with 0, which doubles as the closing 0 of the interleaving
    body.extend(tail(p)?);
    let symbols = body.into_iter().map(|b| b.encode(p)).collect();
    Ok(Sequence::from_parts(symbols, 2 * p, 2))
}

/// Removes every occurrence of the victims and relabels the survivors densely,
/// preserving their order. Distances only shrink, so the radius is kept.
pub fn erase_symbols(seq: &Sequence, victims: &[Symbol]) -> Result<Sequence> {
    let n = seq.alphabet_size();
    let victims: BTreeSet<Symbol> = victims.iter().copied().collect();
    if let Some(&bad) = victims.iter().find(|&&v| v as usize >= n) {
        return Err(invalid(format!(
            "victim {bad} is outside the alphabet 0..{n}"
        )));
    }
    if n > 0 && victims.len() == n {
        return Err(invalid("cannot erase the entire alphabet"));
    }
    let mut remap = vec![None; n];
    let mut next: Symbol = 0;
    for s in 0..n as Symbol {
        if !victims.contains(&s) {
            remap[s as usize] = Some(next);
            next += 1;
        }
    }
    let symbols = seq
        .symbols()
        .iter()
        .filter_map(|&s| remap[s as usize])
        .collect();
    Ok(Sequence::from_parts(symbols, next as usize, seq.radius()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::verify;
    use proptest::prelude::*;

    fn parse(text: &str) -> Vec<BipSymbol> {
        text.split(',')
            .map(|t| {
                let t = t.trim();
                match t.strip_prefix('_') {
                    Some(v) => BipSymbol::under(v.parse().unwrap()),
                    None => BipSymbol::plain(t.parse().unwrap()),
                }
            })
            .collect()
    }

    const P5: &str = "0,_1,3,_0,2,_4,1,_3,0,_2,4,_1,2,_3,4,_0,1,_2,3,_4,0,_0,2,_2,_3,3,4,_4,_1,1";

    #[test]
    fn cycle_examples() {
        assert_eq!(
            hamiltonian_cycle(5, 1).unwrap().vertices,
            parse("0,_1,2,_3,4,_0,1,_2,3,_4")
        );
        assert_eq!(
            hamiltonian_cycle(3, 1).unwrap().vertices,
            parse("0,_1,2,_0,1,_2")
        );
        assert!(hamiltonian_cycle(5, 3).is_err());
        assert!(hamiltonian_cycle(5, 0).is_err());
        assert!(hamiltonian_cycle(9, 1).is_err());
    }

    #[test]
    fn split_examples() {
        assert_eq!(
            split_cycle(5, 1).unwrap(),
            (parse("0"), parse("_1,2,_3,4,_0,1,_2,3,_4"))
        );
        assert_eq!(
            split_cycle(5, 2).unwrap(),
            (parse("0,_2,4"), parse("_1,3,_0,2,_4,1,_3"))
        );
        assert_eq!(
            split_cycle(3, 1).unwrap(),
            (parse("0"), parse("_1,2,_0,1,_2"))
        );
    }

    #[test]
    fn interleaving_examples() {
        assert_eq!(
            interleaved(5).unwrap(),
            parse("0,_1,3,_0,2,_4,1,_3,0,_2,4,_1,2,_3,4,_0,1,_2,3,_4")
        );
        assert_eq!(interleaved(3).unwrap(), parse("0,_1,2,_0,1,_2"));
        for p in [7, 11, 13, 17, 19] {
            assert_eq!(interleaved(p).unwrap().len(), p * p - p);
        }
    }

    #[test]
    fn tail_examples() {
        assert_eq!(tail(5).unwrap(), parse("0,_0,2,_2,_3,3,4,_4,_1,1"));
        assert_eq!(tail_unswapped(3).unwrap(), parse("_0,0,2,_2,_1,1"));
        assert_eq!(tail(3).unwrap(), parse("0,_0,2,_2,_1,1"));
        for p in [3, 5, 7, 11, 13, 101] {
            let mut t = tail(p).unwrap();
            t.sort();
            let mut all: Vec<_> = (0..p)
                .map(BipSymbol::plain)
                .chain((0..p).map(BipSymbol::under))
                .collect();
            all.sort();
            assert_eq!(t, all);
        }
    }

    #[test]
    fn worked_example_p5() {
        let s = construct_2p(5).unwrap();
        let expected: Vec<Symbol> = parse(P5).into_iter().map(|b| b.encode(5)).collect();
        assert_eq!(s.symbols(), expected.as_slice());
        assert_eq!(s.len(), 30);
        assert!(verify(&s).is_k_radius);
    }

    #[test]
    fn small_primes() {
        let s = construct_2p(2).unwrap();
        assert_eq!(s.symbols(), &[0, 1, 2, 3, 0]);
        assert!(verify(&s).is_k_radius);
        let s = construct_2p(7).unwrap();
        assert_eq!(s.len(), 56);
        assert!(verify(&s).is_k_radius);
        assert!(construct_2p(9).is_err());
        assert!(construct_2p(1).is_err());
    }

    #[test]
    fn erasure_examples() {
        let s = construct_2p(5).unwrap();
        let e = erase_symbols(&s, &[0]).unwrap();
        assert_eq!(e.len(), 27);
        assert_eq!(e.alphabet_size(), 9);
        assert!(verify(&e).is_k_radius);
        assert_eq!(erase_symbols(&s, &[]).unwrap(), s);
        let e = erase_symbols(&s, &[0, 1]).unwrap();
        assert_eq!(e.alphabet_size(), 8);
        assert!(verify(&e).is_k_radius);
        let all: Vec<Symbol> = (0..10).collect();
        assert!(erase_symbols(&s, &all).is_err());
        assert!(erase_symbols(&s, &[10]).is_err());
    }

    #[test]
    fn bip_roundtrip() {
        for s in 0..14 {
            assert_eq!(BipSymbol::decode(s, 7).encode(7), s);
        }
        assert_eq!(BipSymbol::under(3).to_string(), "_3");
    }

    proptest! {
        #[test]
        fn erasure_keeps_radius(
            mut symbols in proptest::collection::vec(0..8u32, 0..60),
            k in 1..4usize,
            victims in proptest::collection::vec(0..8u32, 0..7),
        ) {
            // random noise followed by every pair side by side
            for b in 0..8 {
                for a in 0..b {
                    symbols.extend([a, b]);
                }
            }
            let seq = Sequence::new(symbols, 8, k).unwrap();
            prop_assume!(victims.iter().collect::<BTreeSet<_>>().len() < 8);
            prop_assert!(verify(&seq).is_k_radius);
            let erased = erase_symbols(&seq, &victims).unwrap();
            prop_assert!(verify(&erased).is_k_radius);
        }
    }
}
