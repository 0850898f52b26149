//! The optimal parallel tester and its simulation.

mod build;
mod schur;
mod simulate;

pub use build::{build_optimal_protocol, build_protocol, Construction, ParallelProtocol, Tester, MAX_PROTOCOL_N};
pub use schur::{schur_basis, SchurBasis, SchurBlock, MAX_SCHUR_N};
pub use simulate::{apply_local, simulate, SimulationReport, ROUNDOFF_FLOOR};
