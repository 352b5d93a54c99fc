//! `Aut(G) = GL_k(p)` for elementary abelian `G` of order `p^k`.
//!
//! The group is identified with `F_p^k` through its greedy generating
//! sequence, which is a basis. Conjugacy classes of `GL_k(p)` are listed
//! through rational canonical forms: chains `f_1 | f_2 | ... | f_r` of monic
//! polynomials with nonzero constant term and total degree `k`, realized
//! as block-diagonal companion matrices.

use num_bigint::BigUint;
use rand::Rng;

use super::Automorphism;
use crate::arith::lcm;
use crate::group::FiniteGroup;
use crate::linalg::{general_linear_order, poly, primitive_root, ModMatrix};

#[derive(Debug)]
pub struct LinearAutomorphisms {
    p: u32,
    rank: usize,
    /// vector code `sum c_i p^i` -> element index
    code_to_elem: Vec<usize>,
    /// element index -> coordinates
    coords: Vec<Vec<u32>>,
    order: BigUint,
    class_reps: Vec<Automorphism>,
    generators: Vec<Automorphism>,
}

impl LinearAutomorphisms {
    /// `None` unless `G` is elementary abelian of rank at least 1.
    pub fn new(group: &FiniteGroup) -> Option<Self> {
        if group.order() < 2 || !group.is_abelian() {
            return None;
        }
        let p = group.element_order(1);
        if !crate::arith::is_prime(p) || group.element_orders().skip(1).any(|o| o != p) {
            return None;
        }
        let basis = group.generating_sequence();
        let rank = basis.len();
        let n = group.order();
        let p32 = p as u32;
        let mut code_to_elem = vec![0usize; n];
        let mut coords = vec![Vec::new(); n];
        for (code, slot) in code_to_elem.iter_mut().enumerate() {
            let mut c = code;
            let mut elem = 0;
            let mut vec = Vec::with_capacity(rank);
            for &b in &basis {
                let digit = c % p as usize;
                c /= p as usize;
                vec.push(digit as u32);
                elem = group.mul(elem, group.pow(b, digit as u64));
            }
            *slot = elem;
            coords[elem] = vec;
        }
        let mut this = LinearAutomorphisms {
            p: p32,
            rank,
            code_to_elem,
            coords,
            order: general_linear_order(p, rank as u32),
            class_reps: Vec::new(),
            generators: Vec::new(),
        };
        this.class_reps = rational_canonical_forms(p32, rank)
            .iter()
            .map(|m| this.from_matrix(m))
            .collect();
        this.generators = gl_generators(p32, rank).iter().map(|m| this.from_matrix(m)).collect();
        Some(this)
    }

    fn code(&self, v: &[u32]) -> usize {
        v.iter().rev().fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    /// The automorphism `v -> M v` in coordinates.
    pub fn from_matrix(&self, m: &ModMatrix) -> Automorphism {
        let images = self
            .coords
            .iter()
            .map(|v| self.code_to_elem[self.code(&m.apply(v))] as u32)
            .collect();
        Automorphism::from_images_unchecked(images)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `|GL_k(p)|`
    pub fn order(&self) -> BigUint {
        self.order.clone()
    }

    /// One automorphism per conjugacy class of `GL_k(p)`.
    pub fn class_representatives(&self) -> &[Automorphism] {
        &self.class_reps
    }

    pub fn generators(&self) -> &[Automorphism] {
        &self.generators
    }

    pub fn exponent(&self) -> u64 {
        self.class_reps.iter().fold(1, |acc, a| lcm(acc, a.order()))
    }

    pub fn mao(&self) -> u64 {
        self.class_reps.iter().map(Automorphism::order).max().unwrap_or(1)
    }

    pub fn random(&self, rng: &mut impl Rng) -> Automorphism {
        self.from_matrix(&ModMatrix::random_invertible(self.p, self.rank, rng))
    }
}

/// Representatives of the similarity classes of `GL_k(p)`.
pub fn rational_canonical_forms(p: u32, k: usize) -> Vec<ModMatrix> {
    let by_degree: Vec<Vec<Vec<u32>>> = (0..=k).map(|d| if d == 0 { vec![] } else { poly::monic_units(p, d) }).collect();
    let mut out = Vec::new();
    let mut chain: Vec<Vec<u32>> = Vec::new();
    extend_chains(p, &by_degree, &[1], k, &mut chain, &mut out);
    out
}

fn extend_chains(
    p: u32,
    by_degree: &[Vec<Vec<u32>>],
    prev: &[u32],
    remaining: usize,
    chain: &mut Vec<Vec<u32>>,
    out: &mut Vec<ModMatrix>,
) {
    if remaining == 0 {
        let blocks: Vec<ModMatrix> = chain.iter().map(|f| ModMatrix::companion(p, f)).collect();
        out.push(ModMatrix::block_diagonal(p, &blocks));
        return;
    }
    let min_degree = poly::degree(prev).max(1);
    for d in min_degree..=remaining {
        for f in &by_degree[d] {
            if poly::divides(p, prev, f) {
                chain.push(f.clone());
                extend_chains(p, by_degree, f, remaining - d, chain, out);
                chain.pop();
            }
        }
    }
}

/// Elementary transvections plus a diagonal matrix with a primitive root.
fn gl_generators(p: u32, k: usize) -> Vec<ModMatrix> {
    let mut gens = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let mut m = ModMatrix::identity(p, k);
                m.set(i, j, 1);
                gens.push(m);
            }
        }
    }
    let root = primitive_root(p as u64) as u32;
    if root != 1 {
        let mut m = ModMatrix::identity(p, k);
        m.set(0, 0, root);
        gens.push(m);
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgrp::automorphism_group;
    use crate::group::{builtin_group, FamilySpec};

    fn build(s: &str) -> FiniteGroup {
        builtin_group(&s.parse::<FamilySpec>().unwrap()).unwrap()
    }

    #[test]
    fn class_counts_of_gl_over_f2() {
        let counts: Vec<usize> = (1..=6).map(|k| rational_canonical_forms(2, k).len()).collect();
        assert_eq!(counts, vec![1, 3, 6, 14, 27, 60]);
        assert_eq!(rational_canonical_forms(3, 2).len(), 8);
    }

    #[test]
    fn class_representatives_are_invertible_and_distinct() {
        let forms = rational_canonical_forms(3, 3);
        assert!(forms.iter().all(ModMatrix::is_invertible));
        let unique: std::collections::HashSet<_> = forms.iter().collect();
        assert_eq!(unique.len(), forms.len());
    }

    #[test]
    fn only_elementary_abelian_groups_qualify() {
        assert!(LinearAutomorphisms::new(&build("cyclic:4")).is_none());
        assert!(LinearAutomorphisms::new(&build("cyclic:1")).is_none());
        assert!(LinearAutomorphisms::new(&build("symmetric:3")).is_none());
        assert!(LinearAutomorphisms::new(&build("cyclic:2*cyclic:2")).is_some());
    }

    #[test]
    fn matches_full_enumeration() {
        for spec in ["elementary_abelian:2:2", "elementary_abelian:2:3", "elementary_abelian:3:2", "elementary_abelian:2:4"] {
            let g = build(spec);
            let lin = LinearAutomorphisms::new(&g).unwrap();
            let aut = automorphism_group(&g).unwrap();
            assert_eq!(lin.order(), BigUint::from(aut.order()), "{spec}");
            assert_eq!(lin.exponent(), aut.exponent(), "{spec}");
            assert_eq!(lin.mao(), aut.mao(), "{spec}");
            assert_eq!(lin.class_representatives().len(), aut.as_group().conjugacy_classes().len(), "{spec}");
            for a in lin.class_representatives().iter().chain(lin.generators()) {
                assert_eq!(a.homomorphism_violation(&g), None);
                assert!(aut.as_group().index_of_permutation(&a.to_permutation()).is_some());
            }
        }
    }

    #[test]
    fn generators_generate_gl() {
        let g = build("elementary_abelian:3:2");
        let lin = LinearAutomorphisms::new(&g).unwrap();
        let perms: Vec<_> = lin.generators().iter().map(Automorphism::to_permutation).collect();
        let closure = FiniteGroup::from_permutation_generators(9, &perms).unwrap();
        assert_eq!(closure.order(), 48);
    }
}
