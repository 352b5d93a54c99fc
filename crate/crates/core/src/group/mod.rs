//! Concrete finite groups on dense element indices.
//!
//! Every group numbers its elements `0..order` with the identity at `0`.
//! Small groups keep a full Cayley table; larger permutation groups compose
//! stored permutations and look the result up; large direct products
//! multiply componentwise.

mod families;
mod io;
mod subgroup;

use std::collections::{BTreeMap, HashMap, VecDeque};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arith::lcm;
use crate::perm::{PermError, Permutation};

pub use families::{builtin_group, FamilySpec};
pub use io::{parse_ctab, parse_pgrp, read_ctab, read_pgrp, write_ctab, write_pgrp, PgrpFile};
pub use subgroup::{quotient, subgroup_as_group, QuotientMap, SubgroupHandle, DEFAULT_LATTICE_CAP};

/// Largest order stored as a full Cayley table.
pub const TABLE_LIMIT: usize = 4096;
/// Default cap on the size of a permutation-group closure.
pub const DEFAULT_CLOSURE_CAP: usize = 1 << 24;
/// Groups below this order get the exhaustive associativity check.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("empty table")]
    Empty,
    #[error("not closed: entry ({row}, {col}) = {value} is outside 0..{order}")]
    NotClosed { row: usize, col: usize, value: usize, order: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("not associative: ({a} * {b}) * {c} != {a} * ({b} * {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("closure exceeds the cap of {cap} elements")]
    ClosureTooLarge { cap: usize },
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: usize, found: usize },
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("group of order {order} exceeds the cap of {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subset is not a subgroup")]
    NotSubgroup,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

enum Mult {
    Table(Vec<u32>),
    /// Compose stored permutations and look the product up.
    Perms,
    Product(Box<FiniteGroup>, Box<FiniteGroup>),
}

struct PermRep {
    degree: usize,
    perms: Vec<Permutation>,
    lookup: HashMap<Permutation, u32>,
}

/// A finite group on element indices `0..order`, identity at `0`.
///
/// Immutable after construction; safe to share between threads.
pub struct FiniteGroup {
    label: String,
    order: usize,
    mult: Mult,
    perm_rep: Option<PermRep>,
    inverses: Vec<u32>,
    element_orders: Vec<u32>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table and builds the group. The identity, wherever
    /// it sits, is swapped to index 0.
    pub fn from_multiplication_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::NotSquare { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::NotClosed { row, col, value, order: n });
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        let relabel = |i: usize| {
            if i == identity {
                0
            } else if i == 0 {
                identity
            } else {
                i
            }
        };
        let mut flat = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[relabel(a) * n + relabel(b)] = relabel(table[a][b]) as u32;
            }
        }
        for a in 0..n {
            let row = &flat[a * n..(a + 1) * n];
            let has_inverse = row
                .iter()
                .enumerate()
                .any(|(b, &ab)| ab == 0 && flat[b * n + a] == 0);
            if !has_inverse {
                return Err(GroupError::NoInverse(relabel(a)));
            }
        }
        if n < ASSOCIATIVITY_CHECK_LIMIT {
            check_associative(n, &flat).map_err(|(a, b, c)| GroupError::NotAssociative {
                a: relabel(a),
                b: relabel(b),
                c: relabel(c),
            })?;
        }
        Ok(FiniteGroup::from_flat_table_unchecked(format!("table:{n}"), n, flat))
    }

    /// Builds a group from a flat row-major table already known to be a
    /// group table with identity at 0.
    pub(crate) fn from_flat_table_unchecked(label: String, n: usize, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), n * n);
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            let row = &table[a * n..(a + 1) * n];
            inverses[a] = row.iter().position(|&x| x == 0).expect("group table row lacks identity") as u32;
        }
        let mut group = FiniteGroup {
            label,
            order: n,
            mult: Mult::Table(table),
            perm_rep: None,
            inverses,
            element_orders: Vec::new(),
        };
        group.element_orders = (0..n).map(|g| group.order_by_powering(g) as u32).collect();
        group
    }

    /// Breadth-first closure of `gens` under composition. Elements are
    /// numbered in discovery order with the identity first.
    pub fn from_permutation_generators(degree: usize, gens: &[Permutation]) -> Result<Self, GroupError> {
        FiniteGroup::from_permutation_generators_capped(degree, gens, DEFAULT_CLOSURE_CAP)
    }

    pub fn from_permutation_generators_capped(
        degree: usize,
        gens: &[Permutation],
        cap: usize,
    ) -> Result<Self, GroupError> {
        for (index, g) in gens.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch { index, expected: degree, found: g.degree() });
            }
        }
        let k = gens.len();
        let identity = Permutation::identity(degree);
        let mut perms = vec![identity.clone()];
        let mut lookup = HashMap::new();
        lookup.insert(identity, 0u32);
        // discovered element -> (parent, generator) with element = parent ∘ gen
        let mut parent: Vec<(u32, u32)> = vec![(0, 0)];
        let mut rmul: Vec<u32> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (s, gen) in gens.iter().enumerate() {
                let product = perms[e].compose(gen);
                let idx = match lookup.get(&product) {
                    Some(&i) => i,
                    None => {
                        if perms.len() >= cap {
                            return Err(GroupError::ClosureTooLarge { cap });
                        }
                        let i = perms.len() as u32;
                        lookup.insert(product.clone(), i);
                        perms.push(product);
                        parent.push((e as u32, s as u32));
                        queue.push_back(i as usize);
                        i
                    }
                };
                debug_assert_eq!(rmul.len(), e * k + s);
                rmul.push(idx);
            }
        }
        let n = perms.len();
        let element_orders = perms
            .iter()
            .map(|p| p.order().to_u64().expect("element order exceeds u64") as u32)
            .collect();
        let inverses = perms
            .iter()
            .map(|p| lookup[&p.inverse()])
            .collect();
        let mult = if n <= TABLE_LIMIT {
            let mut table = vec![0u32; n * n];
            for a in 0..n {
                let row = &mut table[a * n..(a + 1) * n];
                row[0] = a as u32;
                for b in 1..n {
                    let (pb, sb) = parent[b];
                    row[b] = rmul[row[pb as usize] as usize * k + sb as usize];
                }
            }
            Mult::Table(table)
        } else {
            Mult::Perms
        };
        Ok(FiniteGroup {
            label: format!("perm:{degree}"),
            order: n,
            mult,
            perm_rep: Some(PermRep { degree, perms, lookup }),
            inverses,
            element_orders,
        })
    }

    /// Componentwise product; element `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        FiniteGroup::direct_product_capped(a, b, DEFAULT_CLOSURE_CAP)
    }

    pub fn direct_product_capped(a: &FiniteGroup, b: &FiniteGroup, cap: usize) -> Result<Self, GroupError> {
        let n = a.order.checked_mul(b.order).ok_or(GroupError::ClosureTooLarge { cap })?;
        if n > cap {
            return Err(GroupError::ClosureTooLarge { cap });
        }
        let nb = b.order;
        let split = |g: usize| (g / nb, g % nb);
        let label = format!("{}*{}", a.label, b.label);
        let inverses = (0..n)
            .map(|g| {
                let (x, y) = split(g);
                (a.inv(x) * nb + b.inv(y)) as u32
            })
            .collect();
        let element_orders = (0..n)
            .map(|g| {
                let (x, y) = split(g);
                lcm(a.element_order(x), b.element_order(y)) as u32
            })
            .collect();
        let mult = if n <= TABLE_LIMIT {
            let mut table = vec![0u32; n * n];
            for g in 0..n {
                let (x1, y1) = split(g);
                for h in 0..n {
                    let (x2, y2) = split(h);
                    table[g * n + h] = (a.mul(x1, x2) * nb + b.mul(y1, y2)) as u32;
                }
            }
            Mult::Table(table)
        } else {
            Mult::Product(Box::new(a.clone_structure()), Box::new(b.clone_structure()))
        };
        Ok(FiniteGroup { label, order: n, mult, perm_rep: None, inverses, element_orders })
    }

    fn clone_structure(&self) -> FiniteGroup {
        FiniteGroup {
            label: self.label.clone(),
            order: self.order,
            mult: match &self.mult {
                Mult::Table(t) => Mult::Table(t.clone()),
                Mult::Perms => Mult::Perms,
                Mult::Product(a, b) => Mult::Product(Box::new(a.clone_structure()), Box::new(b.clone_structure())),
            },
            perm_rep: self.perm_rep.as_ref().map(|r| PermRep {
                degree: r.degree,
                perms: r.perms.clone(),
                lookup: r.lookup.clone(),
            }),
            inverses: self.inverses.clone(),
            element_orders: self.element_orders.clone(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.mult {
            Mult::Table(t) => t[a * self.order + b] as usize,
            Mult::Perms => {
                let rep = self.perm_rep.as_ref().expect("permutation storage");
                let product = rep.perms[a].compose(&rep.perms[b]);
                rep.lookup[&product] as usize
            }
            Mult::Product(x, y) => {
                let nb = y.order;
                x.mul(a / nb, b / nb) * nb + y.mul(a % nb, b % nb)
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `g * h * g^-1`
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn pow(&self, a: usize, mut exp: u64) -> usize {
        exp %= self.element_order(a);
        let mut base = a;
        let mut acc = 0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn order_by_powering(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least `n >= 1` with `a^n` the identity.
    #[inline]
    pub fn element_order(&self, a: usize) -> u64 {
        self.element_orders[a] as u64
    }

    pub fn element_orders(&self) -> impl Iterator<Item = u64> + '_ {
        self.element_orders.iter().map(|&o| o as u64)
    }

    /// Lcm of all element orders.
    pub fn exponent(&self) -> u64 {
        self.element_orders().fold(1, lcm)
    }

    /// Element order -> number of elements of that order.
    pub fn order_histogram(&self) -> BTreeMap<u64, usize> {
        let mut hist = BTreeMap::new();
        for o in self.element_orders() {
            *hist.entry(o).or_insert(0) += 1;
        }
        hist
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generating_sequence();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        let gens = self.generating_sequence();
        self.elements()
            .filter(|&z| gens.iter().all(|&g| self.mul(g, z) == self.mul(z, g)))
            .collect()
    }

    /// The stored permutation of `a`, for groups built from permutations.
    pub fn permutation(&self, a: usize) -> Option<&Permutation> {
        self.perm_rep.as_ref().map(|r| &r.perms[a])
    }

    pub fn permutation_degree(&self) -> Option<usize> {
        self.perm_rep.as_ref().map(|r| r.degree)
    }

    pub fn index_of_permutation(&self, p: &Permutation) -> Option<usize> {
        self.perm_rep
            .as_ref()
            .and_then(|r| r.lookup.get(p).map(|&i| i as usize))
    }

    /// Sorted members of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut i = 0;
        while i < members.len() {
            let e = members[i];
            for &s in gens {
                let p = self.mul(e, s);
                if !inside[p] {
                    inside[p] = true;
                    members.push(p);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }

    /// Greedy generating sequence: repeatedly take the smallest element
    /// outside the subgroup generated so far.
    pub fn generating_sequence(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut next = 1;
        while members.len() < self.order {
            while inside[next] {
                next += 1;
            }
            gens.push(next);
            // re-close from scratch with the enlarged generator list
            let mut i = 0;
            inside[next] = true;
            members.push(next);
            while i < members.len() {
                let e = members[i];
                for &s in &gens {
                    let p = self.mul(e, s);
                    if !inside[p] {
                        inside[p] = true;
                        members.push(p);
                    }
                }
                i += 1;
            }
        }
        gens
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let gens = self.generating_sequence();
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for start in self.elements() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut class = vec![start];
            let mut i = 0;
            while i < class.len() {
                let h = class[i];
                for &g in &gens {
                    let c = self.conjugate(g, h);
                    if class_of[c] == usize::MAX {
                        class_of[c] = id;
                        class.push(c);
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// Full multiplication table as nested vectors.
    pub fn to_table(&self) -> Vec<Vec<usize>> {
        self.elements()
            .map(|a| self.elements().map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Exhaustively re-checks the group axioms.
    pub fn validate_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(GroupError::NoIdentity);
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(GroupError::NoInverse(a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// SHA-256 over the multiplication table, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.order as u64).to_le_bytes());
        for a in self.elements() {
            for b in self.elements() {
                hasher.update((self.mul(a, b) as u32).to_le_bytes());
            }
        }
        hex::encode(hasher.finalize())
    }
}

fn check_associative(n: usize, t: &[u32]) -> Result<(), (usize, usize, usize)> {
    for a in 0..n {
        for b in 0..n {
            let ab = t[a * n + b] as usize;
            for c in 0..n {
                let bc = t[b * n + c] as usize;
                if t[ab * n + c] != t[a * n + bc] {
                    return Err((a, b, c));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_from_transpositions() -> FiniteGroup {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        FiniteGroup::from_permutation_generators(3, &[a, b]).unwrap()
    }

    #[test]
    fn trivial_table() {
        let g = FiniteGroup::from_multiplication_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.exponent(), 1);
    }

    #[test]
    fn s3_table_round_trip() {
        let s3 = s3_from_transpositions();
        let table = s3.to_table();
        let rebuilt = FiniteGroup::from_multiplication_table(&table).unwrap();
        assert_eq!(rebuilt.order(), 6);
        assert_eq!(rebuilt.exponent(), 6);
        assert_eq!(rebuilt.order_histogram(), s3.order_histogram());
    }

    #[test]
    fn monoid_table_is_rejected() {
        let err = FiniteGroup::from_multiplication_table(&[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, GroupError::NoInverse(1) | GroupError::NotAssociative { .. }));
    }

    #[test]
    fn table_errors_name_the_violation() {
        assert_eq!(
            FiniteGroup::from_multiplication_table(&[vec![0, 2], vec![1, 0]]).unwrap_err(),
            GroupError::NotClosed { row: 0, col: 1, value: 2, order: 2 }
        );
        assert_eq!(
            FiniteGroup::from_multiplication_table(&[vec![1, 0], vec![0, 0]]).unwrap_err(),
            GroupError::NoIdentity
        );
        assert!(matches!(
            FiniteGroup::from_multiplication_table(&[vec![0, 1], vec![1]]).unwrap_err(),
            GroupError::NotSquare { row: 1, .. }
        ));
        // a loop of order 5 in which every element is an involution
        let quasi = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_multiplication_table(&quasi).unwrap_err();
        assert!(matches!(err, GroupError::NotAssociative { .. }), "{err:?}");
    }

    #[test]
    fn identity_is_relocated_to_zero() {
        // Z/2 with the identity stored at index 1
        let g = FiniteGroup::from_multiplication_table(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.element_order(1), 2);
    }

    #[test]
    fn permutation_closure_orders() {
        let s3 = s3_from_transpositions();
        assert_eq!(s3.order(), 6);
        let c5 = FiniteGroup::from_permutation_generators(
            5,
            &[Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap()],
        )
        .unwrap();
        assert_eq!(c5.order(), 5);
        assert_eq!(c5.exponent(), 5);
        s3.validate_axioms().unwrap();
    }

    #[test]
    fn closure_cap_is_enforced() {
        let gens = [
            Permutation::from_cycles(5, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
        ];
        assert_eq!(
            FiniteGroup::from_permutation_generators_capped(5, &gens, 100).unwrap_err(),
            GroupError::ClosureTooLarge { cap: 100 }
        );
        let bad = [Permutation::identity(4)];
        assert!(matches!(
            FiniteGroup::from_permutation_generators(5, &bad),
            Err(GroupError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn element_orders_from_table_and_permutations_agree() {
        let s3 = s3_from_transpositions();
        let table = FiniteGroup::from_flat_table_unchecked(
            "s3".into(),
            6,
            s3.to_table().into_iter().flatten().map(|x| x as u32).collect(),
        );
        for g in s3.elements() {
            assert_eq!(s3.element_order(g), table.element_order(g));
            assert_eq!(s3.inv(g), table.inv(g));
        }
    }
}
