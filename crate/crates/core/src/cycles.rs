//! The `(2k+1)`-partite toroidal graph on `Z_{2k+1} x Z_q` and its cycle decomposition.
//!
//! Vertex `(i, j)` is adjacent to `(i+1, j+d)` for every `d`; the edges with a
//! fixed step `d` form the class `E_d`, which splits into `c_d = gcd((2k+1)d, q)`
//! disjoint cycles of length `(2k+1)q / c_d`. Walking every cycle once and
//! repeating its first `k` vertices puts any two vertices from different columns
//! within distance `k`, provided every divisor of `q` other than 1 exceeds `k`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numtheory::{gcd, smallest_prime_factor};
use crate::sequence::{Sequence, Symbol};

/// Edge enumeration in [`CycleSystem::edge_classes`] is refused above this many edges.
pub const EDGE_AUDIT_LIMIT: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex {
    /// Column, modulo `2k+1`.
    pub i: usize,
    /// Row, modulo `q`.
    pub j: usize,
}

/// One cycle of `G_d`, starting at `(0, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSeq {
    pub d: usize,
    pub j: usize,
    pub vertices: Vec<Vertex>,
}

/// Unordered edge with endpoints stored in ascending order.
pub type Edge = (Vertex, Vertex);

#[derive(Debug, Clone)]
pub struct EdgeClassAudit {
    /// `classes[d]` is `E_d`.
    pub classes: Vec<Vec<Edge>>,
    pub pairwise_disjoint: bool,
    /// The union of all classes equals the edge set of the graph.
    pub covers_graph: bool,
    pub graph_edges: usize,
}

/// True when every divisor of `q` other than 1 is greater than `k`.
pub fn divisor_condition(k: usize, q: usize) -> bool {
    smallest_prime_factor(q as u64).is_none_or(|p| p > k as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleSystem {
    k: usize,
    q: usize,
}

impl CycleSystem {
    pub fn new(k: usize, q: usize) -> Result<Self> {
        if k == 0 || q == 0 {
            return Err(invalid(format!(
                "cycle system needs k, q >= 1 (got k={k}, q={q})"
            )));
        }
        let vertices = (2 * k as u64 + 1).checked_mul(q as u64);
        if vertices.is_none_or(|v| v > Symbol::MAX as u64) {
            return Err(invalid(format!("(2k+1)q too large for k={k}, q={q}")));
        }
        Ok(Self { k, q })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of columns, `2k + 1`.
    pub fn width(&self) -> usize {
        2 * self.k + 1
    }

    pub fn vertex_count(&self) -> usize {
        self.width() * self.q
    }

    /// `i * q + j`; keeps each column a contiguous id range.
    pub fn encode(&self, v: Vertex) -> Symbol {
        (v.i * self.q + v.j) as Symbol
    }

    pub fn decode(&self, s: Symbol) -> Vertex {
        let s = s as usize;
        Vertex {
            i: s / self.q,
            j: s % self.q,
        }
    }

    fn check_step(&self, d: usize) -> Result<()> {
        if d >= self.q {
            return Err(invalid(format!("step d={d} out of range 0..{}", self.q)));
        }
        Ok(())
    }

    /// Number of cycles in `G_d`: `gcd((2k+1)d, q)`.
    pub fn c_d(&self, d: usize) -> Result<usize> {
        self.check_step(d)?;
        Ok(self.c_d_unchecked(d))
    }

    fn c_d_unchecked(&self, d: usize) -> usize {
        gcd((self.width() * d) as u64, self.q as u64) as usize
    }

    pub fn cycle_length(&self, d: usize) -> Result<usize> {
        Ok(self.vertex_count() / self.c_d(d)?)
    }

    fn check_cycle(&self, d: usize, j: usize) -> Result<usize> {
        let c = self.c_d(d)?;
        if j >= c {
            return Err(invalid(format!(
                "cycle index j={j} out of range 0..{c} for d={d}"
            )));
        }
        Ok(c)
    }

    fn walk(&self, d: usize, j: usize, len: usize) -> impl Iterator<Item = Vertex> + '_ {
        let w = self.width();
        let q = self.q;
        (0..len).map(move |t| Vertex {
            i: t % w,
            j: (j + t * d) % q,
        })
    }

    /// The cycle `(0,j), (1,j+d), (2,j+2d), ...` with the closing edge implicit.
    pub fn build_cycle(&self, d: usize, j: usize) -> Result<CycleSeq> {
        let c = self.check_cycle(d, j)?;
        let len = self.vertex_count() / c;
        Ok(CycleSeq {
            d,
            j,
            vertices: self.walk(d, j, len).collect(),
        })
    }

    /// The cycle followed by its first `k` vertices.
    pub fn build_padded(&self, d: usize, j: usize) -> Result<Vec<Vertex>> {
        let mut v = self.build_cycle(d, j)?.vertices;
        // every cycle has at least 2k+1 vertices
        v.extend_from_within(..self.k);
        Ok(v)
    }

    /// Concatenation of every padded cycle, `d` ascending then `j` ascending,
    /// encoded over `(2k+1)q` symbols with radius tag `k`.
    pub fn build_s(&self) -> Sequence {
        let mut out = Vec::with_capacity(self.s_length_formula() as usize);
        for d in 0..self.q {
            let c = self.c_d_unchecked(d);
            let len = self.vertex_count() / c;
            for j in 0..c {
                out.extend(self.walk(d, j, len).map(|v| self.encode(v)));
                out.extend(self.walk(d, j, self.k).map(|v| self.encode(v)));
            }
        }
        Sequence::from_parts(out, self.vertex_count(), self.k)
    }

    /// `(2k+1) q^2 + k * sum_{d<q} gcd((2k+1)d, q)`.
    pub fn s_length_formula(&self) -> u64 {
        let w = self.width() as u64;
        let q = self.q as u64;
        let gcd_total: u64 = (0..q).map(|d| gcd(w * d, q)).sum();
        w * q * q + self.k as u64 * gcd_total
    }

    /// Enumerates every `E_d` and checks that they partition the edge set.
    pub fn edge_classes(&self) -> Result<EdgeClassAudit> {
        let w = self.width();
        let q = self.q;
        let total = (w as u64) * (q as u64) * (q as u64);
        if total > EDGE_AUDIT_LIMIT {
            return Err(invalid(format!(
                "edge audit limited to {EDGE_AUDIT_LIMIT} edges, k={} q={q} has {total}",
                self.k
            )));
        }
        let norm = |a: Vertex, b: Vertex| if a <= b { (a, b) } else { (b, a) };

        let mut classes = Vec::with_capacity(q);
        for d in 0..q {
            let mut class = Vec::with_capacity(w * q);
            for i in 0..w {
                for j in 0..q {
                    let a = Vertex { i, j };
                    let b = Vertex {
                        i: (i + 1) % w,
                        j: (j + d) % q,
                    };
                    class.push(norm(a, b));
                }
            }
            class.sort_unstable();
            classes.push(class);
        }

        let mut seen: HashSet<Edge> = HashSet::new();
        let mut pairwise_disjoint = true;
        for class in &classes {
            for &e in class {
                if !seen.insert(e) {
                    pairwise_disjoint = false;
                }
            }
        }

        // all pairs between consecutive columns, built without reference to steps
        let mut graph: HashSet<Edge> = HashSet::new();
        for i in 0..w {
            let next = (i + 1) % w;
            for j in 0..q {
                for j2 in 0..q {
                    graph.insert(norm(Vertex { i, j }, Vertex { i: next, j: j2 }));
                }
            }
        }

        Ok(EdgeClassAudit {
            pairwise_disjoint,
            covers_graph: seen == graph,
            graph_edges: graph.len(),
            classes,
        })
    }
}
