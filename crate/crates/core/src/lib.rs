//! Combinatorics and exact algebra around the H-invariant prime ideals of
//! quantum `m x p` matrices.
//!
//! * [`perm`]: permutations in one-line notation, the reverse Bruhat order and
//!   the restricted set `S = { σ : -p <= i - σ(i) <= m }`.
//! * [`counting`]: Stirling numbers, poly-Bernoulli numbers and the closed
//!   forms counting `S`, H-primes and rank strata.
//! * [`poset`]: enumeration of `S` and its barrier strata, Hasse diagrams and
//!   their DOT/JSON export.
//! * [`qalgebra`]: PBW normal forms in the quantized coordinate ring of
//!   `u x v` matrices over `Z[q, q^-1]`, quantum minors and identity checks.
//! * [`dd`]: the `(m,p)` ordering, the step set `E` and the deleting-derivations
//!   recursion run over exact rationals at `q = 1`.
//! * [`catalog`]: quantum-minor generator descriptors for the ideals
//!   `I_(w0, w0 σ)` and the combinatorial checks run against them.
//! * [`cli`]: the `hspec` command line front end.

pub mod catalog;
pub mod cli;
pub mod counting;
pub mod dd;
mod error;
pub mod perm;
pub mod poset;
pub mod qalgebra;

pub use error::{Error, Result};
pub use perm::{PairW, Permutation};
