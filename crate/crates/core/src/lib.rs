//! Construction and verification of short k-radius sequences.
//!
//! A sequence over the alphabet `0..n` is *k-radius* when every unordered
//! pair of distinct symbols occurs somewhere at index distance at most `k`.
//! The crate provides:
//!
//! * [`sequence`]: the [`Sequence`] type and the sliding-window verifier;
//! * [`cycles`]: the toroidal `(2k+1) x q` graph, its cycle decomposition
//!   and the padded cycle concatenation that covers all cross-class pairs;
//! * [`builder`]: the recursive top-level construction and its fallbacks;
//! * [`optimal2p`]: optimal 2-radius sequences over `2p` symbols;
//! * [`bounds`]: closed-form bounds and the gcd-sum identity;
//! * [`search`]: a branch-and-bound exact solver for tiny instances;
//! * [`io`]: the text and JSON sequence formats.

pub mod bounds;
pub mod builder;
pub mod cycles;
mod error;
pub mod io;
pub mod numtheory;
pub mod optimal2p;
pub mod search;
pub mod sequence;

pub use builder::{construct, BuildOptions, BuildPlan, QChoice, Strategy, VerifyPolicy};
pub use error::{Error, Result};
pub use sequence::{pair_gap, verify, CoverageReport, Sequence, Symbol};
