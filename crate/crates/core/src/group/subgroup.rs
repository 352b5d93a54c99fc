//! Subgroups, normal subgroups, quotients.

use std::collections::HashSet;

use super::{FiniteGroup, GroupError};

/// Default order cap for full subgroup-lattice enumeration.
pub const DEFAULT_LATTICE_CAP: usize = 128;

/// A subgroup given by its sorted member indices in the parent group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupHandle {
    members: Vec<usize>,
    parent_order: usize,
    pub is_normal: bool,
    pub is_characteristic: bool,
}

impl SubgroupHandle {
    /// Wraps `members` after checking closure; normality is computed.
    pub fn new(group: &FiniteGroup, mut members: Vec<usize>) -> Result<Self, GroupError> {
        members.sort_unstable();
        members.dedup();
        let mut inside = vec![false; group.order()];
        for &m in &members {
            if m >= group.order() {
                return Err(GroupError::NotSubgroup);
            }
            inside[m] = true;
        }
        if !inside[0] || !group.order().is_multiple_of(members.len()) {
            return Err(GroupError::NotSubgroup);
        }
        for &a in &members {
            if !inside[group.inv(a)] || !members.iter().all(|&b| inside[group.mul(a, b)]) {
                return Err(GroupError::NotSubgroup);
            }
        }
        Ok(SubgroupHandle::from_closed(group, members))
    }

    /// `members` must be sorted and closed.
    pub(crate) fn from_closed(group: &FiniteGroup, members: Vec<usize>) -> Self {
        let is_normal = is_normal_subset(group, &members);
        SubgroupHandle { members, parent_order: group.order(), is_normal, is_characteristic: false }
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        SubgroupHandle { members: vec![0], parent_order: group.order(), is_normal: true, is_characteristic: true }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        SubgroupHandle {
            members: group.elements().collect(),
            parent_order: group.order(),
            is_normal: true,
            is_characteristic: true,
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent_order
    }

    pub fn is_proper_nontrivial(&self) -> bool {
        !self.is_trivial() && !self.is_whole()
    }

    pub(crate) fn mark_characteristic(&mut self, value: bool) {
        self.is_characteristic = value;
    }
}

fn is_normal_subset(group: &FiniteGroup, members: &[usize]) -> bool {
    let mut inside = vec![false; group.order()];
    for &m in members {
        inside[m] = true;
    }
    let gens = group.generating_sequence();
    gens.iter()
        .all(|&g| members.iter().all(|&h| inside[group.conjugate(g, h)]))
}

fn bitset(n: usize, members: &[usize]) -> Vec<u64> {
    let mut bits = vec![0u64; n.div_ceil(64)];
    for &m in members {
        bits[m / 64] |= 1 << (m % 64);
    }
    bits
}

impl FiniteGroup {
    /// Every subgroup, ordered by size and then by member list. Built by
    /// cyclic extension: close each known subgroup with one more cyclic
    /// generator until no new subgroup appears.
    pub fn subgroups(&self) -> Result<Vec<SubgroupHandle>, GroupError> {
        self.subgroups_capped(DEFAULT_LATTICE_CAP)
    }

    pub fn subgroups_capped(&self, cap: usize) -> Result<Vec<SubgroupHandle>, GroupError> {
        if self.order() > cap {
            return Err(GroupError::GroupTooLarge { order: self.order(), cap });
        }
        let n = self.order();
        // one generator per cyclic subgroup
        let mut cyclic_seen = HashSet::new();
        let mut cyclic_gens = Vec::new();
        for g in 1..n {
            if cyclic_seen.insert(bitset(n, &self.closure(&[g]))) {
                cyclic_gens.push(g);
            }
        }
        let mut seen = HashSet::new();
        let mut found: Vec<(Vec<usize>, Vec<usize>)> = vec![(vec![], vec![0])];
        seen.insert(bitset(n, &[0]));
        let mut i = 0;
        while i < found.len() {
            let (gens, members) = found[i].clone();
            let mut inside = vec![false; n];
            for &m in &members {
                inside[m] = true;
            }
            for &g in &cyclic_gens {
                if inside[g] {
                    continue;
                }
                let mut ext = gens.clone();
                ext.push(g);
                let closed = self.closure(&ext);
                if seen.insert(bitset(n, &closed)) {
                    found.push((ext, closed));
                }
            }
            i += 1;
        }
        let mut subgroups: Vec<SubgroupHandle> = found
            .into_iter()
            .map(|(_, members)| SubgroupHandle::from_closed(self, members))
            .collect();
        subgroups.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
        Ok(subgroups)
    }

    /// Every normal subgroup, ordered like [`FiniteGroup::subgroups`].
    /// Normal subgroups are joins of normal closures of conjugacy classes,
    /// so no lattice cap applies.
    pub fn normal_subgroups(&self) -> Vec<SubgroupHandle> {
        let n = self.order();
        let classes = self.conjugacy_classes();
        let mut atoms: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut atom_seen = HashSet::new();
        for class in classes.iter().skip(1) {
            let closed = self.closure(class);
            if atom_seen.insert(bitset(n, &closed)) {
                atoms.push((class.clone(), closed));
            }
        }
        let mut seen = HashSet::new();
        seen.insert(bitset(n, &[0]));
        let mut found: Vec<(Vec<usize>, Vec<usize>)> = vec![(vec![], vec![0])];
        let mut i = 0;
        while i < found.len() {
            let (gens, members) = found[i].clone();
            let mut inside = vec![false; n];
            for &m in &members {
                inside[m] = true;
            }
            for (class, atom) in &atoms {
                if atom.iter().all(|&a| inside[a]) {
                    continue;
                }
                let mut ext = gens.clone();
                ext.extend_from_slice(class);
                let closed = self.closure(&ext);
                if seen.insert(bitset(n, &closed)) {
                    found.push((ext, closed));
                }
            }
            i += 1;
        }
        let mut out: Vec<SubgroupHandle> = found
            .into_iter()
            .map(|(_, members)| SubgroupHandle {
                members,
                parent_order: n,
                is_normal: true,
                is_characteristic: false,
            })
            .collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
        out
    }
}

/// The canonical projection onto `G/N`, with the minimum element of each
/// coset as its representative. Coset 0 contains the identity.
#[derive(Debug)]
pub struct QuotientMap {
    pub kernel: SubgroupHandle,
    pub target: FiniteGroup,
    projection: Vec<u32>,
    coset_reps: Vec<usize>,
    cosets: Vec<Vec<usize>>,
}

impl QuotientMap {
    #[inline]
    pub fn project(&self, g: usize) -> usize {
        self.projection[g] as usize
    }

    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    /// Members of coset `c`, ascending.
    pub fn coset(&self, c: usize) -> &[usize] {
        &self.cosets[c]
    }

    pub fn num_cosets(&self) -> usize {
        self.cosets.len()
    }
}

pub fn quotient(group: &FiniteGroup, kernel: &SubgroupHandle) -> Result<QuotientMap, GroupError> {
    if !kernel.is_normal || !is_normal_subset(group, kernel.members()) {
        return Err(GroupError::NotNormal);
    }
    let n = group.order();
    const UNSET: u32 = u32::MAX;
    let mut projection = vec![UNSET; n];
    let mut coset_reps = Vec::new();
    let mut cosets = Vec::new();
    for g in group.elements() {
        if projection[g] != UNSET {
            continue;
        }
        let c = coset_reps.len() as u32;
        coset_reps.push(g);
        let mut coset: Vec<usize> = kernel.members().iter().map(|&h| group.mul(g, h)).collect();
        for &x in &coset {
            projection[x] = c;
        }
        coset.sort_unstable();
        cosets.push(coset);
    }
    let m = coset_reps.len();
    let mut table = vec![0u32; m * m];
    for (c, &a) in coset_reps.iter().enumerate() {
        for (d, &b) in coset_reps.iter().enumerate() {
            table[c * m + d] = projection[group.mul(a, b)];
        }
    }
    let target = FiniteGroup::from_flat_table_unchecked(format!("{}/N{}", group.label(), kernel.order()), m, table);
    Ok(QuotientMap { kernel: kernel.clone(), target, projection, coset_reps, cosets })
}

/// The subgroup as a standalone group, plus the embedding local -> parent
/// index. Local numbering follows the sorted member list.
pub fn subgroup_as_group(group: &FiniteGroup, sub: &SubgroupHandle) -> (FiniteGroup, Vec<usize>) {
    let members = sub.members().to_vec();
    let m = members.len();
    let mut local = vec![u32::MAX; group.order()];
    for (i, &g) in members.iter().enumerate() {
        local[g] = i as u32;
    }
    let mut table = vec![0u32; m * m];
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            table[i * m + j] = local[group.mul(a, b)];
        }
    }
    let g = FiniteGroup::from_flat_table_unchecked(format!("{}<{}>", group.label(), m), m, table);
    (g, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{builtin_group, FamilySpec};

    fn build(s: &str) -> FiniteGroup {
        builtin_group(&s.parse::<FamilySpec>().unwrap()).unwrap()
    }

    /// Brute force: every subset containing 0 that is closed under products.
    fn brute_force_subgroup_count(g: &FiniteGroup) -> usize {
        let n = g.order();
        assert!(n <= 12);
        (0u32..1 << n)
            .filter(|mask| mask & 1 == 1)
            .filter(|mask| {
                let inside = |x: usize| mask >> x & 1 == 1;
                (0..n).filter(|&a| inside(a)).all(|a| (0..n).filter(|&b| inside(b)).all(|b| inside(g.mul(a, b))))
            })
            .count()
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(build("cyclic:1").subgroups().unwrap().len(), 1);
        let c4 = build("cyclic:4").subgroups().unwrap();
        assert_eq!(c4.iter().map(|s| s.order()).collect::<Vec<_>>(), vec![1, 2, 4]);
        let s3 = build("symmetric:3").subgroups().unwrap();
        assert_eq!(s3.iter().map(|s| s.order()).collect::<Vec<_>>(), vec![1, 2, 2, 2, 3, 6]);
        assert_eq!(s3.iter().filter(|s| s.is_normal).count(), 3);
        for spec in ["symmetric:3", "dihedral:4", "quaternion:8", "cyclic:12", "elementary_abelian:2:3", "dihedral:6"] {
            let g = build(spec);
            assert_eq!(g.subgroups().unwrap().len(), brute_force_subgroup_count(&g), "{spec}");
        }
    }

    #[test]
    fn lattice_cap() {
        let s5 = build("symmetric:5");
        assert_eq!(s5.subgroups_capped(100), Err(GroupError::GroupTooLarge { order: 120, cap: 100 }));
        assert_eq!(s5.subgroups().unwrap().len(), 156);
    }

    #[test]
    fn normal_subgroups_match_filtered_lattice() {
        for spec in ["symmetric:4", "dihedral:6", "quaternion:16", "cyclic:2*cyclic:4", "alternating:4", "dihedral:8"] {
            let g = build(spec);
            let via_lattice: Vec<Vec<usize>> = g
                .subgroups()
                .unwrap()
                .into_iter()
                .filter(|s| s.is_normal)
                .map(|s| s.members().to_vec())
                .collect();
            let direct: Vec<Vec<usize>> = g.normal_subgroups().into_iter().map(|s| s.members().to_vec()).collect();
            assert_eq!(via_lattice, direct, "{spec}");
        }
        assert_eq!(build("alternating:5").normal_subgroups().len(), 2);
    }

    #[test]
    fn quotients() {
        let c4 = build("cyclic:4");
        let whole = SubgroupHandle::whole(&c4);
        assert_eq!(quotient(&c4, &whole).unwrap().target.order(), 1);
        let half = SubgroupHandle::new(&c4, vec![0, 2]).unwrap();
        let q = quotient(&c4, &half).unwrap();
        assert_eq!(q.target.order(), 2);
        assert_eq!(q.coset_reps(), &[0, 1]);

        let d4 = build("dihedral:4");
        let center = SubgroupHandle::new(&d4, d4.center()).unwrap();
        assert_eq!(center.order(), 2);
        let q = quotient(&d4, &center).unwrap();
        assert_eq!(q.target.order(), 4);
        assert_eq!(q.target.exponent(), 2);
        for a in d4.elements() {
            for b in d4.elements() {
                assert_eq!(q.project(d4.mul(a, b)), q.target.mul(q.project(a), q.project(b)));
            }
        }
        for (c, &r) in q.coset_reps().iter().enumerate() {
            assert_eq!(q.project(r), c);
            assert_eq!(q.coset(c)[0], r);
        }
    }

    #[test]
    fn quotient_rejects_non_normal() {
        let s3 = build("symmetric:3");
        let sub = s3.subgroups().unwrap().into_iter().find(|s| s.order() == 2).unwrap();
        assert!(!sub.is_normal);
        assert_eq!(quotient(&s3, &sub).unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn handle_validation() {
        let c6 = build("cyclic:6");
        assert_eq!(SubgroupHandle::new(&c6, vec![0, 1]), Err(GroupError::NotSubgroup));
        assert_eq!(SubgroupHandle::new(&c6, vec![2, 4]), Err(GroupError::NotSubgroup));
        let h = SubgroupHandle::new(&c6, vec![4, 0, 2]).unwrap();
        assert_eq!(h.members(), &[0, 2, 4]);
        let (sub, emb) = subgroup_as_group(&c6, &h);
        assert_eq!(sub.order(), 3);
        assert_eq!(emb, vec![0, 2, 4]);
        sub.validate_axioms().unwrap();
    }
}
