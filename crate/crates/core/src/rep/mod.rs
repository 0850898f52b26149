//! Irreps of `U(2)` in tensor powers of the qubit, their branching to the
//! trivial group, the diagonal torus and `O(2)`, and the exact optimal
//! type-II error computed from those tables.

mod branching;
mod labels;
mod oracle;
mod theorem;
mod young;

pub use branching::{
    branching_table, o2_one_dim_parity, sum_dim_squared, u2_irrep_decomposition, BranchingTable, IrrepEntry,
};
pub use labels::{IrrepLabel, Parity, SubgroupFamily, SubgroupIrrep, SubgroupKind};
pub use oracle::{branching_oracle, u2_character, INTEGER_TOLERANCE};
pub use theorem::{
    ancilla_free_condition, closed_form_beta0, eta_score, reference_free_condition, theorem2_value, BetaResult,
};
pub use young::{sum_dim_squared_general, weyl_dimension, young_diagrams};
