//! Finite-group computation engine built around bijective affine maps.
//!
//! Groups are stored as dense element indices with the identity at index 0.
//! On top of that sit automorphism-group enumeration ([`autgrp`]), the
//! affine maps `g -> x * alpha(g)` and the invariant computed from them
//! ([`affine`]), exact-arithmetic scans over projective special linear
//! groups ([`lie`]), constructions of `PSL(2, q)` and its automorphism group
//! ([`simple`]), and the corpus driver used by the `holo` binary
//! ([`harness`]).

pub mod affine;
pub mod arith;
pub mod autgrp;
pub mod group;
pub mod harness;
pub mod lie;
pub mod linalg;
pub mod par;
pub mod perm;
pub mod simple;

pub use affine::{AffineMap, FValueResult};
pub use autgrp::{AutomorphismGroup, Automorphism};
pub use group::{FiniteGroup, GroupError, QuotientMap, SubgroupHandle};
pub use perm::Permutation;
