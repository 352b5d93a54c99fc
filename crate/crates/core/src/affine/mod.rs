//! Bijective affine maps `g -> x * alpha(g)` and the invariants built on
//! them.
//!
//! The order of `A = (x, alpha)` is `ord(alpha) * ord(sh)`, where the shift
//! `sh = x * alpha(x) * ... * alpha^(ord(alpha)-1)(x)` is the element such
//! that `A^ord(alpha)` is left translation by `sh`. Production code always
//! uses this formula; [`affine_order_oracle`] walks the cycles instead and
//! exists to check it.

mod checks;

use std::borrow::Cow;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{gcd, nu_p, prime_divisors, Lcm};
use crate::autgrp::{AutConfig, AutData, AutError, Automorphism};
use crate::group::{FiniteGroup, GroupError};
use crate::par;
use crate::perm::{cycle_lengths_of, Permutation};

pub use checks::{
    lcm_decomposition, verify_csub_inequality, verify_lcm_div_conditions, verify_monotonicity, CharQuotient,
    CsubCheck, DecompositionWitness, LcmDivRecord, LcmDivReport, MonotonicityCheck, RepPolicy,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("affine maps belong to different groups")]
    GroupMismatch,
    #[error("automorphism does not leave the subgroup invariant")]
    NotInvariant,
    #[error("subgroup is not a proper nontrivial characteristic subgroup")]
    NotCharacteristic,
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The permutation `g -> translation * auto(g)` of a group.
#[derive(Debug, Clone)]
pub struct AffineMap<'a> {
    group: &'a FiniteGroup,
    translation: usize,
    auto: Cow<'a, Automorphism>,
}

impl<'a> AffineMap<'a> {
    pub fn new(group: &'a FiniteGroup, translation: usize, auto: &'a Automorphism) -> Self {
        AffineMap { group, translation, auto: Cow::Borrowed(auto) }
    }

    pub fn owned(group: &'a FiniteGroup, translation: usize, auto: Automorphism) -> Self {
        AffineMap { group, translation, auto: Cow::Owned(auto) }
    }

    pub fn identity(group: &'a FiniteGroup) -> Self {
        AffineMap::owned(group, 0, Automorphism::identity(group.order()))
    }

    pub fn group(&self) -> &'a FiniteGroup {
        self.group
    }

    pub fn translation(&self) -> usize {
        self.translation
    }

    pub fn automorphism(&self) -> &Automorphism {
        &self.auto
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.group.mul(self.translation, self.auto.apply(g))
    }

    /// `self ∘ other = (x * alpha(y), alpha ∘ beta)`.
    pub fn compose(&self, other: &AffineMap<'_>) -> Result<AffineMap<'a>, AffineError> {
        if !std::ptr::eq(self.group, other.group) {
            return Err(AffineError::GroupMismatch);
        }
        let translation = self.group.mul(self.translation, self.auto.apply(other.translation));
        Ok(AffineMap::owned(self.group, translation, self.auto.compose(&other.auto)))
    }

    pub fn shift(&self) -> usize {
        shift(self.group, self.translation, &self.auto)
    }

    pub fn order(&self) -> u64 {
        affine_order(self.group, self.translation, &self.auto)
    }

    pub fn order_oracle(&self) -> u64 {
        affine_order_oracle(self.group, self.translation, &self.auto)
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        cycle_lengths(self.group, self.translation, &self.auto)
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_images_unchecked(self.group.elements().map(|g| self.apply(g) as u32).collect())
    }

    /// `A^k = (x * alpha(x) * ... * alpha^(k-1)(x), alpha^k)`.
    pub fn pow(&self, k: u64) -> AffineMap<'a> {
        let (translation, auto) = power_parts(self.group, self.translation, &self.auto, k);
        AffineMap::owned(self.group, translation, auto)
    }
}

/// Translation part of `(x, alpha)^k`.
pub fn power_translation(group: &FiniteGroup, x: usize, alpha: &Automorphism, k: u64) -> usize {
    let mut acc = 0;
    let mut y = x;
    for _ in 0..k {
        acc = group.mul(acc, y);
        y = alpha.apply(y);
    }
    acc
}

pub fn power_parts(group: &FiniteGroup, x: usize, alpha: &Automorphism, k: u64) -> (usize, Automorphism) {
    (power_translation(group, x, alpha, k), alpha.pow(k))
}

/// `x * alpha(x) * ... * alpha^(ord(alpha)-1)(x)`
pub fn shift(group: &FiniteGroup, x: usize, alpha: &Automorphism) -> usize {
    power_translation(group, x, alpha, alpha.order())
}

/// `ord(alpha) * ord(shift)`.
#[inline]
pub fn affine_order(group: &FiniteGroup, x: usize, alpha: &Automorphism) -> u64 {
    alpha.order() * group.element_order(shift(group, x, alpha))
}

/// Lcm of the cycle lengths of the map on all `|G|` points.
pub fn affine_order_oracle(group: &FiniteGroup, x: usize, alpha: &Automorphism) -> u64 {
    cycle_lengths(group, x, alpha)
        .into_iter()
        .map(|l| l as u64)
        .collect::<Lcm>()
        .to_u64()
        .expect("cycle lengths are bounded by the group order")
}

pub fn cycle_lengths(group: &FiniteGroup, x: usize, alpha: &Automorphism) -> Vec<usize> {
    cycle_lengths_of(group.order(), |g| group.mul(x, alpha.apply(g)))
}

/// `ord(sh) * prod p^nu_p(ord(alpha))` over primes dividing both
/// `ord(sh)` and `ord(alpha)`. Divides every cycle length of the map.
pub fn ell_lower_bound(group: &FiniteGroup, x: usize, alpha: &Automorphism) -> u64 {
    let sh_order = group.element_order(shift(group, x, alpha));
    let common = gcd(sh_order, alpha.order());
    prime_divisors(common).into_iter().fold(sh_order, |acc, p| {
        let e = nu_p(alpha.order(), p).expect("prime from factorization");
        acc * p.pow(e)
    })
}

/// `lcm_x ord((x, alpha))` over all `x` in `G`.
pub fn translation_lcm(group: &FiniteGroup, alpha: &Automorphism) -> Lcm {
    group.elements().map(|x| affine_order(group, x, alpha)).collect()
}

/// Result of maximizing [`translation_lcm`] over a list of automorphisms.
#[derive(Debug, Clone)]
pub struct FValueResult {
    pub value: Lcm,
    /// Index into the automorphism list of the first maximizer.
    pub witness_index: usize,
    pub witness_auto: Automorphism,
    pub per_auto_lcms: Vec<Lcm>,
    /// `value <= |G|`
    pub within_bound: bool,
}

/// Max over the given automorphisms of `lcm_x ord((x, alpha))`. Pass all of
/// `Aut(G)` or one representative per conjugacy class; the value is a class
/// function. Ties go to the smallest index.
pub fn frak_f(group: &FiniteGroup, auts: &[Automorphism]) -> FValueResult {
    assert!(!auts.is_empty(), "automorphism list must contain the identity at least");
    let per_auto_lcms = par::map_slice(auts, |a| translation_lcm(group, a));
    let mut best = 0;
    for (i, l) in per_auto_lcms.iter().enumerate() {
        if l.to_big() > per_auto_lcms[best].to_big() {
            best = i;
        }
    }
    let value = per_auto_lcms[best].clone();
    let within_bound = value.to_big() <= BigUint::from(group.order());
    FValueResult { value, witness_index: best, witness_auto: auts[best].clone(), per_auto_lcms, within_bound }
}

/// Maximum order of a bijective affine map.
pub fn maffo(group: &FiniteGroup, auts: &[Automorphism]) -> u64 {
    par::map_slice(auts, |a| group.elements().map(|x| affine_order(group, x, a)).max().unwrap_or(1))
        .into_iter()
        .max()
        .unwrap_or(1)
}

/// Everything the lemma checks need about one group.
#[derive(Debug)]
pub struct GroupProfile {
    pub aut: AutData,
    pub f: FValueResult,
    pub mao: u64,
    pub maffo: u64,
    pub order: usize,
}

impl GroupProfile {
    pub fn compute(group: &FiniteGroup, config: &AutConfig, class_reps: bool) -> Result<Self, AutError> {
        let aut = AutData::compute(group, config)?;
        let reps = aut.representatives(class_reps);
        let f = frak_f(group, &reps);
        let maffo = maffo(group, &reps);
        drop(reps);
        Ok(GroupProfile { mao: aut.mao(), f, maffo, order: group.order(), aut })
    }

    pub fn f_value(&self) -> BigUint {
        self.f.value.to_big()
    }
}

/// Serializable view of an [`FValueResult`].
#[derive(Debug, Clone, Serialize)]
pub struct FSummary {
    pub order: usize,
    pub f_value: Lcm,
    pub witness: Vec<u32>,
    pub theorem_ok: bool,
}

impl FSummary {
    pub fn new(group: &FiniteGroup, f: &FValueResult) -> Self {
        FSummary {
            order: group.order(),
            f_value: f.value.clone(),
            witness: f.witness_auto.images().to_vec(),
            theorem_ok: f.within_bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgrp::automorphism_group;
    use crate::group::{builtin_group, FamilySpec};

    fn build(s: &str) -> FiniteGroup {
        builtin_group(&s.parse::<FamilySpec>().unwrap()).unwrap()
    }

    // D4 numbering: r^i s^j has index i + 4j; r = 1, r^2 = 2, s = 4
    const R: usize = 1;
    const R2: usize = 2;
    const S: usize = 4;

    #[test]
    fn apply_and_compose() {
        let d4 = build("dihedral:4");
        let id = AffineMap::identity(&d4);
        for g in d4.elements() {
            assert_eq!(id.apply(g), g);
        }
        let conj_r = Automorphism::conjugation(&d4, R);
        let a = AffineMap::new(&d4, S, &conj_r);
        assert_eq!(a.apply(S), R2);
        let ident = Automorphism::identity(8);
        let tx = AffineMap::new(&d4, 3, &ident);
        assert_eq!(tx.apply(0), 3);

        // composition agrees with pointwise composition
        let sq = a.compose(&a).unwrap();
        for g in d4.elements() {
            assert_eq!(sq.apply(g), a.apply(a.apply(g)));
        }
        assert_eq!(sq.translation(), R2);
        assert!(sq.automorphism().is_identity());
        let t2 = tx.compose(&AffineMap::new(&d4, 5, &ident)).unwrap();
        assert_eq!(t2.translation(), d4.mul(3, 5));
        let right_id = a.compose(&AffineMap::identity(&d4)).unwrap();
        assert_eq!(right_id.to_permutation(), a.to_permutation());

        let other = build("dihedral:4");
        assert_eq!(a.compose(&AffineMap::identity(&other)).unwrap_err(), AffineError::GroupMismatch);
    }

    #[test]
    fn shift_and_order_on_d4() {
        let d4 = build("dihedral:4");
        let conj_r = Automorphism::conjugation(&d4, R);
        assert_eq!(conj_r.order(), 2);
        assert_eq!(shift(&d4, S, &conj_r), R2);
        assert_eq!(shift(&d4, 0, &conj_r), 0);
        assert_eq!(shift(&d4, 5, &Automorphism::identity(8)), 5);
        assert_eq!(affine_order(&d4, S, &conj_r), 4);
        assert_eq!(affine_order_oracle(&d4, S, &conj_r), 4);
        let mut lengths = cycle_lengths(&d4, S, &conj_r);
        lengths.sort();
        assert_eq!(lengths, vec![4, 4]);
        assert_eq!(affine_order(&d4, 0, &Automorphism::identity(8)), 1);
    }

    #[test]
    fn translations() {
        let c6 = build("cyclic:6");
        let id = Automorphism::identity(6);
        assert_eq!(affine_order_oracle(&c6, 1, &id), 6);
        assert_eq!(cycle_lengths(&c6, 1, &id), vec![6]);
        let c4 = build("cyclic:4");
        assert_eq!(cycle_lengths(&c4, 0, &Automorphism::identity(4)), vec![1, 1, 1, 1]);
        assert_eq!(cycle_lengths(&c4, 1, &Automorphism::identity(4)), vec![4]);
    }

    #[test]
    fn ell_bound_examples() {
        let c8 = build("cyclic:8");
        let id = Automorphism::identity(8);
        assert_eq!(ell_lower_bound(&c8, 3, &id), 8);
        let cube = Automorphism::new(&c8, (0..8).map(|g| (3 * g % 8) as u32).collect()).unwrap();
        assert_eq!(cube.order(), 2);
        assert_eq!(shift(&c8, 1, &cube), 4);
        assert_eq!(ell_lower_bound(&c8, 1, &cube), 4);
        assert_eq!(ell_lower_bound(&c8, 0, &cube), 1);
        assert!(cycle_lengths(&c8, 1, &cube).iter().all(|l| l % 4 == 0));
    }

    #[test]
    fn f_values_of_small_groups() {
        for (spec, expected) in [("cyclic:1", 1u64), ("cyclic:12", 12), ("symmetric:3", 6), ("dihedral:4", 8)] {
            let g = build(spec);
            let aut = automorphism_group(&g).unwrap();
            let f = frak_f(&g, aut.automorphisms());
            assert_eq!(f.value.to_u64(), Some(expected), "{spec}");
            assert!(f.within_bound);
            assert_eq!(translation_lcm(&g, &f.witness_auto), f.value);
        }
    }

    #[test]
    fn maffo_examples() {
        let s3 = build("symmetric:3");
        let aut = automorphism_group(&s3).unwrap();
        assert_eq!(maffo(&s3, aut.automorphisms()), 6);
        let c9 = build("cyclic:9");
        let aut = automorphism_group(&c9).unwrap();
        assert_eq!(maffo(&c9, aut.automorphisms()), 9);
        let c1 = build("cyclic:1");
        assert_eq!(maffo(&c1, automorphism_group(&c1).unwrap().automorphisms()), 1);
    }

    #[test]
    fn elementary_abelian_f_value_by_brute_force() {
        let g = build("elementary_abelian:2:3");
        let aut = automorphism_group(&g).unwrap();
        // oracle: orders by cycle walks over all 168 * 8 affine maps
        let brute = aut
            .automorphisms()
            .iter()
            .map(|a| g.elements().map(|x| affine_order_oracle(&g, x, a)).collect::<Lcm>().to_u64().unwrap())
            .max()
            .unwrap();
        let f = frak_f(&g, aut.automorphisms());
        assert_eq!(f.value.to_u64(), Some(brute));
        assert!(brute <= 8);
    }

    #[test]
    fn power_matches_repeated_composition() {
        let g = build("quaternion:8");
        let aut = automorphism_group(&g).unwrap();
        let alpha = &aut.automorphisms()[5];
        let a = AffineMap::new(&g, 3, alpha);
        let mut acc = AffineMap::identity(&g);
        for k in 0..7u64 {
            assert_eq!(a.pow(k).to_permutation(), acc.to_permutation());
            acc = a.compose(&acc).unwrap();
        }
    }
}
