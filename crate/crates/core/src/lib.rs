//! Symmetry-based parameter reduction for multi-angle QAOA on Max-Cut.
//!
//! The crate is organised bottom-up:
//!
//! - [`graphs`]: graphs, graph6 I/O, named families, corpus enumeration and
//!   the exact Max-Cut oracle.
//! - [`symmetry`]: automorphism groups, generator sets and orbit partitions.
//! - [`tying`]: maps from per-edge/per-vertex angles to compact parameters.
//! - [`simulator`]: statevector evolution of the (multi-angle) QAOA circuit.
//! - [`optimizer`]: Nelder-Mead with seeded multistart.
//! - [`metrics`]: approximation ratio and the `k`/`l` comparison ratios.
//! - [`harness`]: per-graph scheme runs, corpus sweeps, CSV and reports.

pub mod graphs;
pub mod harness;
pub mod metrics;
pub mod optimizer;
pub mod simulator;
pub mod symmetry;
pub mod tying;
