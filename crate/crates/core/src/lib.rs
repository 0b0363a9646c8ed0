//! Exact dimer-monomer (matching) enumeration on the Tower of Hanoi graphs
//! `H_n` and the Sierpinski-type graphs `X_n`.
//!
//! - [`graphs`] builds explicit instances with canonical labels.
//! - [`oracle`] counts matchings of explicit graphs directly.
//! - [`recursion`] iterates the exact boundary-count recursions.
//! - [`asymptotics`] turns the exact ledger into ratio dynamics, count bounds
//!   and rigorous two-sided entropy bounds at arbitrary precision.

pub mod asymptotics;
pub mod counts;
pub mod family;
pub mod graphs;
pub mod hp;
pub mod oracle;
pub mod poly;
pub mod recursion;

pub use counts::{AggregateCounts, BoundaryClass, BoundaryCountVector};
pub use family::Family;
pub use graphs::{build, GraphInstance};
pub use recursion::{iterate, StageRecord};
