//! Optimal type-II error for unitary subgroup hypothesis testing.
//!
//! Given a compact group `G = U(2)` acting on `n` qubits by `U ↦ U^{⊗n}` and a
//! subgroup `G0` (the identity, the diagonal torus, or `O(2)`), the optimal
//! probability of accepting a Haar-random unitary as "symmetric" is
//!
//! ```text
//! β(ε) = (1 - ε) e^{-Dmax(ρ_G0 ‖ ρ_G)} = (1 - ε) min_η d_η / Σ_λ d_λ n_{η,λ}
//! ```
//!
//! The crate computes the right-hand side exactly from branching tables
//! ([`rep`]), computes the left-hand side numerically from independently
//! integrated performance operators ([`integrals`], [`matrix`]), and builds and
//! simulates the parallel protocol that attains it ([`protocol`]).
//!
//! ```
//! use symtest::rep::{branching_table, theorem2_value, SubgroupKind};
//! use num_rational::BigRational;
//!
//! let table = branching_table(SubgroupKind::torus(), 2).unwrap();
//! let result = theorem2_value(&table);
//! assert_eq!(result.beta0, BigRational::new(1.into(), 4.into()));
//! ```

pub mod cli;
pub mod error;
pub mod hypothesis;
pub mod integrals;
pub mod matrix;
pub mod numfmt;
pub mod protocol;
pub mod rep;

pub use error::{Error, Result};
