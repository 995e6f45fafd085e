//! Simulation and analysis toolkit for multipartite entanglement in
//! monitored random Clifford circuits.
//!
//! The crate tracks stabilizer states of brickwork circuits built from
//! uniformly random two-qubit Clifford gates interleaved with probabilistic
//! single-qubit Z measurements, extracts GHZ and Bell-pair content of the
//! state for arbitrary partitions of the chain, aggregates trajectory
//! ensembles, and locates phase transitions through finite-size-scaling
//! collapse. A dense statevector oracle cross-checks every stabilizer-side
//! computation on small systems.
//!
//! Start with the `examples/` directory; each example exercises one major
//! capability end to end. The `ghz-clifford` binary exposes the same
//! machinery for batch work.

pub mod circuit;
pub mod cli;
pub mod clifford;
pub mod config;
pub mod ensemble;
pub mod entanglement;
pub mod error;
pub mod gf2;
pub mod oracle;
pub mod partition;
pub mod pauli;
pub mod report;
pub mod scaling;
pub mod tableau;

pub use error::{Error, Result};
