//! Finite fields, `PSL_2(q)` with its automorphism group `PΓL_2(q)`, and
//! the check that every automorphism order divides the group order.

mod field;
#[cfg(feature = "psl3-4")]
mod plane;
mod projective;

use thiserror::Error;

use crate::group::GroupError;

pub use field::{make_field, FieldError, FiniteField, MAX_FIELD_SIZE};
#[cfg(feature = "psl3-4")]
pub use plane::{aut_psl3_4_group, psl3_4_group, verify_psl3_4};
pub use projective::{
    aut_exponent, field_for, pgammal2_generators, pgammal2_group, pgammal2_order, prime_power, psl2_generators,
    psl2_group, psl2_order, verify_aut_orders_divide, AutOrderCheck, SemilinearMap, BFS_ORDER_CAP, FAST_TIER_CAP,
    SLOW_TIER_CAP, STREAMING_THRESHOLD,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimpleError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("PSL(2, {0}) is not simple")]
    NotSimple(u64),
    #[error("constructed group has order {found}, expected {expected}")]
    OrderMismatch { expected: u64, found: u64 },
    #[error("{elements} elements exceed the budget of {cap}")]
    BudgetExceeded { elements: u64, cap: u64 },
    #[error("q = {q} has {elements} automorphisms; rerun with the slow tier enabled")]
    SlowTierRequired { q: u64, elements: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}
