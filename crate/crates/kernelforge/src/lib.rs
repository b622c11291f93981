//! Kernelization toolkit for small-set covering and packing problems.
//!
//! The crate turns an instance — a family of sets of size at most `d`, a
//! graph, or an implicit family of pattern occurrences in a graph — into a
//! provably equivalent instance whose size depends only on `d` and the
//! solution budget `k`, never on the input size. Two engine styles are
//! provided: streaming kernels that re-derive every intermediate decision by
//! nested simulation and account for their working space in bits, and
//! single-pass kernels that trade a subset-counting trie for linear running
//! time. Brute-force solvers and sunflower/flower finders back the test
//! suites and the `solve`/`flower` CLI verbs.

pub mod eds;
pub mod graphs;
pub mod hs_logspace;
pub mod instance;
mod layered;
pub mod linear;
pub mod oracles;
pub mod sets;
pub mod sp_logspace;
pub mod stream;
