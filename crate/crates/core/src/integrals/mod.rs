//! Haar integration over `U(d)` and its subgroups.

mod exact;
mod haar;
mod mc;
mod rng;
mod weingarten;

pub use exact::{
    analytic_blocks, performance_operator_exact, performance_operator_exact_with, subgroup_operator, ExactOptions,
    Method, PerformanceOperator, EXACT_SIDE_LIMIT, WEINGARTEN_DEFAULT_MAX_N, WEINGARTEN_SIDE_LIMIT,
};
pub(crate) use exact::o2_eigenbasis;
pub use haar::{haar_sample, reflection, rotation, GroupSpec};
pub(crate) use mc::choi_of_power;
pub use mc::{map_chunks, performance_operator_mc, worker_count, THREADS_ENV};
pub use rng::{RngStream, CHUNK_SHOTS};
pub use weingarten::{
    compose, cycle_type, gram_matrix, inverse, permutations, sn_character, weingarten_matrix, Permutation,
    WeingartenTable, MAX_WEINGARTEN_N,
};
