//! Two-color Ramsey numbers `R(m, n; r)` for r-uniform hypergraphs, computed by
//! simulating a quantum-counting search end to end.
//!
//! The crate is layered bottom-up:
//!
//! - [`encoding`] maps hypergraphs on `N` labeled vertices to bit strings of
//!   length `B(N, r)` and ranks/unranks r-subsets in lexicographic order.
//! - [`oracle`] evaluates clique and independent-set counts, the Boolean
//!   search predicate and exact brute-force solution counts.
//! - [`circuit`] holds the gate IR, builders for the reversible oracle, the
//!   Grover iteration and the phase-estimation counting circuit, and the
//!   circuit text format.
//! - [`sim`] is a dense statevector engine for that IR.
//! - [`counting`] runs phase estimation (statevector or exact analytic mode)
//!   and decodes outcomes into solution-count estimates.
//! - [`driver`] sweeps `N` upward until the counting verdict flips to zero.

pub mod circuit;
pub mod cli;
pub mod counting;
pub mod driver;
pub mod encoding;
mod error;
pub mod oracle;
pub mod sim;

pub use error::{Error, Result};
