//! Partial-order and symmetry reduction: static dependence, ample-set
//! selection with cycle provisos, and orbit canonicalization.

mod ample;
mod dependence;
mod symmetry;

pub(crate) use ample::select;
pub use ample::{
    ample, ample_with, check_c2_star, check_c3_invisible, AmpleDecision, AmplePolicy, Condition,
    ProvisoContext, ProvisoVariant, Rejection,
};
pub use dependence::{check_c1, dependent, independent_commutes};
pub use symmetry::{
    apply_perm, check_symmetry_safe, rep, state_key, Permutation, PermutationError,
};
