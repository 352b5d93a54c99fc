//! Automorphism groups.
//!
//! [`automorphism_group`] enumerates `Aut(G)` by backtracking over the
//! images of a greedy generating sequence and then realizes the result as
//! a permutation group on the `|G|` points of `G`, so orders, exponents and
//! quotients reuse the machinery of [`crate::group`]. Elementary abelian
//! groups whose automorphism group is too large to list are handled by
//! [`LinearAutomorphisms`] instead; [`AutData`] picks between the two.

mod charsimple;
mod linear;

use std::borrow::Cow;
use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use rand::Rng;
use thiserror::Error;

use crate::arith::lcm;
use crate::group::{quotient, FiniteGroup, GroupError, QuotientMap, SubgroupHandle};
use crate::par;
use crate::perm::{cycle_lengths_of, Permutation};

pub use charsimple::{mao_of_power, verify_char_simple_bound, CharSimpleCheck};
pub use linear::LinearAutomorphisms;

/// Default order cap for full enumeration.
pub const DEFAULT_AUT_GROUP_CAP: usize = 1024;
/// Default cap on the number of automorphisms listed.
pub const DEFAULT_MAX_AUTOMORPHISMS: usize = 1 << 20;
/// Above this `|Out|` the exponent is computed without building a table.
const OUT_QUOTIENT_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("group of order {order} exceeds the automorphism cap of {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("more than {cap} automorphisms")]
    TooManyAutomorphisms { cap: usize },
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("group {0} is too large for this computation")]
    CapExceeded(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutConfig {
    pub max_group_order: usize,
    pub max_automorphisms: usize,
}

impl Default for AutConfig {
    fn default() -> Self {
        AutConfig { max_group_order: DEFAULT_AUT_GROUP_CAP, max_automorphisms: DEFAULT_MAX_AUTOMORPHISMS }
    }
}

/// A bijection on element indices that respects multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    images: Vec<u32>,
    order: u64,
}

impl Automorphism {
    /// Validates `images` against the group law.
    pub fn new(group: &FiniteGroup, images: Vec<u32>) -> Result<Self, AutError> {
        if images.len() != group.order() {
            return Err(AutError::NotAutomorphism(format!(
                "{} images for a group of order {}",
                images.len(),
                group.order()
            )));
        }
        Permutation::from_images(images.clone()).map_err(|e| AutError::NotAutomorphism(e.to_string()))?;
        let a = Automorphism::from_images_unchecked(images);
        if let Some((x, y)) = a.homomorphism_violation(group) {
            return Err(AutError::NotAutomorphism(format!("image of {x} * {y} is not the product of images")));
        }
        Ok(a)
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        let n = images.len();
        let order = cycle_lengths_of(n, |i| images[i] as usize)
            .into_iter()
            .fold(1u64, |acc, l| lcm(acc, l as u64));
        Automorphism { images, order }
    }

    pub fn identity(n: usize) -> Self {
        Automorphism { images: (0..n as u32).collect(), order: 1 }
    }

    /// Conjugation `h -> g h g^-1`.
    pub fn conjugation(group: &FiniteGroup, g: usize) -> Self {
        Automorphism::from_images_unchecked(group.elements().map(|h| group.conjugate(g, h) as u32).collect())
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.images[g] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism::from_images_unchecked(other.images.iter().map(|&g| self.images[g as usize]).collect())
    }

    pub fn inverse(&self) -> Automorphism {
        let mut images = vec![0u32; self.images.len()];
        for (g, &im) in self.images.iter().enumerate() {
            images[im as usize] = g as u32;
        }
        Automorphism { images, order: self.order }
    }

    pub fn pow(&self, k: u64) -> Automorphism {
        let k = k % self.order;
        let n = self.images.len();
        let images = (0..n)
            .map(|g| {
                let mut x = g;
                for _ in 0..k {
                    x = self.images[x] as usize;
                }
                x as u32
            })
            .collect();
        Automorphism::from_images_unchecked(images)
    }

    /// First pair `(a, b)` with `f(ab) != f(a) f(b)`, if any.
    pub fn homomorphism_violation(&self, group: &FiniteGroup) -> Option<(usize, usize)> {
        for a in group.elements() {
            for b in group.elements() {
                if self.apply(group.mul(a, b)) != group.mul(self.apply(a), self.apply(b)) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_images_unchecked(self.images.clone())
    }

    /// Whether the map sends the member set onto itself.
    pub fn fixes_setwise(&self, sub: &SubgroupHandle) -> bool {
        sub.members().iter().all(|&m| sub.contains(self.apply(m)))
    }

    /// Restriction to an invariant subgroup, in the local numbering of
    /// [`crate::group::subgroup_as_group`].
    pub fn restrict(&self, sub: &SubgroupHandle) -> Option<Automorphism> {
        let members = sub.members();
        let images = members
            .iter()
            .map(|&m| members.binary_search(&self.apply(m)).ok().map(|i| i as u32))
            .collect::<Option<Vec<u32>>>()?;
        Some(Automorphism::from_images_unchecked(images))
    }

    /// The automorphism induced on `G/N`; `None` unless `N` is invariant.
    pub fn induced_on_quotient(&self, q: &QuotientMap) -> Option<Automorphism> {
        if !self.fixes_setwise(&q.kernel) {
            return None;
        }
        let images = q
            .coset_reps()
            .iter()
            .map(|&r| q.project(self.apply(r)) as u32)
            .collect();
        Some(Automorphism::from_images_unchecked(images))
    }
}

/// `Aut(G)`, fully enumerated.
#[derive(Debug)]
pub struct AutomorphismGroup {
    base_order: usize,
    as_group: FiniteGroup,
    automorphisms: Vec<Automorphism>,
    inner: SubgroupHandle,
    out_order: usize,
    out_exponent: u64,
    build_generators: Vec<Permutation>,
}

struct Search<'a> {
    group: &'a FiniteGroup,
    gens: &'a [usize],
    candidates: &'a [Vec<usize>],
    img: Vec<u32>,
    used: Vec<bool>,
    mapped: Vec<usize>,
}

const UNSET: u32 = u32::MAX;

impl<'a> Search<'a> {
    fn new(group: &'a FiniteGroup, gens: &'a [usize], candidates: &'a [Vec<usize>]) -> Self {
        let n = group.order();
        let mut img = vec![UNSET; n];
        let mut used = vec![false; n];
        img[0] = 0;
        used[0] = true;
        Search { group, gens, candidates, img, used, mapped: vec![0] }
    }

    /// Maps `gens[level]` to `image` and extends the partial homomorphism
    /// to the subgroup generated by `gens[..=level]`. On `false` the caller
    /// undoes via [`Search::undo`].
    fn assign(&mut self, level: usize, image: usize) -> bool {
        let g = self.gens[level];
        if self.used[image] {
            return false;
        }
        let old_len = self.mapped.len();
        self.img[g] = image as u32;
        self.used[image] = true;
        self.mapped.push(g);
        let mut i = 0;
        while i < self.mapped.len() {
            let a = self.mapped[i];
            // pairs of old elements with old generators were checked before
            let first_gen = if i < old_len { level } else { 0 };
            for &s in &self.gens[first_gen..=level] {
                let b = self.group.mul(a, s);
                let expect = self.group.mul(self.img[a] as usize, self.img[s] as usize) as u32;
                if self.img[b] == UNSET {
                    if self.used[expect as usize] {
                        return false;
                    }
                    self.img[b] = expect;
                    self.used[expect as usize] = true;
                    self.mapped.push(b);
                } else if self.img[b] != expect {
                    return false;
                }
            }
            i += 1;
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for &a in &self.mapped[mark..] {
            self.used[self.img[a] as usize] = false;
            self.img[a] = UNSET;
        }
        self.mapped.truncate(mark);
    }

    fn run(&mut self, level: usize, out: &mut Vec<Vec<u32>>, found: &AtomicUsize, cap: usize) -> Result<(), AutError> {
        if level == self.gens.len() {
            if found.fetch_add(1, Ordering::Relaxed) >= cap {
                return Err(AutError::TooManyAutomorphisms { cap });
            }
            out.push(self.img.clone());
            return Ok(());
        }
        for &h in &self.candidates[level] {
            let mark = self.mapped.len();
            if self.assign(level, h) {
                self.run(level + 1, out, found, cap)?;
            }
            self.undo(mark);
        }
        Ok(())
    }
}

/// Image lists of every automorphism, sorted by the images of the greedy
/// generating sequence.
pub fn enumerate_automorphisms(group: &FiniteGroup, config: &AutConfig) -> Result<Vec<Vec<u32>>, AutError> {
    if group.order() > config.max_group_order {
        return Err(AutError::GroupTooLarge { order: group.order(), cap: config.max_group_order });
    }
    let gens = group.generating_sequence();
    if gens.is_empty() {
        return Ok(vec![vec![0]]);
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| group.elements().filter(|&h| group.element_order(h) == group.element_order(g)).collect())
        .collect();
    let found = AtomicUsize::new(0);
    let cap = config.max_automorphisms;
    let branches = par::map_slice(&candidates[0], |&h| {
        let mut search = Search::new(group, &gens, &candidates);
        let mut out = Vec::new();
        if search.assign(0, h) {
            search.run(1, &mut out, &found, cap)?;
        }
        Ok::<_, AutError>(out)
    });
    let mut all = Vec::new();
    for branch in branches {
        all.extend(branch?);
    }
    all.sort_by(|a, b| {
        gens.iter()
            .map(|&g| a[g])
            .cmp(gens.iter().map(|&g| b[g]))
    });
    Ok(all)
}

/// Brute-force filter over all bijections fixing the identity. Only for
/// tiny groups; used to cross-check the backtracking search.
pub fn automorphisms_by_brute_force(group: &FiniteGroup) -> Vec<Vec<u32>> {
    let n = group.order();
    assert!(n <= 10, "brute force is limited to order 10");
    let mut out = Vec::new();
    let mut rest: Vec<u32> = (1..n as u32).collect();
    permute_all(&mut rest, 0, &mut |tail| {
        let mut images = vec![0u32];
        images.extend_from_slice(tail);
        let ok = group.elements().all(|a| {
            group
                .elements()
                .all(|b| images[group.mul(a, b)] as usize == group.mul(images[a] as usize, images[b] as usize))
        });
        if ok {
            out.push(images);
        }
    });
    out.sort();
    out
}

fn permute_all(items: &mut [u32], k: usize, visit: &mut impl FnMut(&[u32])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Greedy generating set of an explicit list of permutations that forms a
/// group: walk the list and keep every element outside the current closure.
fn generators_of_list(degree: usize, list: &[Permutation]) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut closure: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    let mut members: Vec<Permutation> = vec![Permutation::identity(degree)];
    for p in list {
        if closure.contains(p) {
            continue;
        }
        gens.push(p.clone());
        let mut frontier: Vec<Permutation> = members.clone();
        while let Some(e) = frontier.pop() {
            for s in &gens {
                let q = e.compose(s);
                if closure.insert(q.clone()) {
                    members.push(q.clone());
                    frontier.push(q);
                }
            }
        }
        if members.len() == list.len() {
            break;
        }
    }
    gens
}

/// Computes `Aut(G)` with the default caps.
pub fn automorphism_group(group: &FiniteGroup) -> Result<AutomorphismGroup, AutError> {
    automorphism_group_with(group, &AutConfig::default())
}

pub fn automorphism_group_with(group: &FiniteGroup, config: &AutConfig) -> Result<AutomorphismGroup, AutError> {
    let images = enumerate_automorphisms(group, config)?;
    AutomorphismGroup::from_generators(group, &generators_of_list(group.order(), &to_perms(images)?), Some(config))
}

fn to_perms(images: Vec<Vec<u32>>) -> Result<Vec<Permutation>, AutError> {
    images
        .into_iter()
        .map(|v| Permutation::from_images(v).map_err(|e| AutError::NotAutomorphism(e.to_string())))
        .collect()
}

impl AutomorphismGroup {
    /// Builds `Aut(G)` from a generating set of automorphisms (each is
    /// re-validated). Used directly by the on-disk cache.
    pub fn from_generators(
        group: &FiniteGroup,
        gens: &[Permutation],
        config: Option<&AutConfig>,
    ) -> Result<Self, AutError> {
        let n = group.order();
        for g in gens {
            Automorphism::new(group, g.images().to_vec())?;
        }
        let cap = config.map_or(crate::group::DEFAULT_CLOSURE_CAP, |c| c.max_automorphisms);
        let as_group = FiniteGroup::from_permutation_generators_capped(n, gens, cap)
            .map_err(|e| match e {
                GroupError::ClosureTooLarge { cap } => AutError::TooManyAutomorphisms { cap },
                other => AutError::Group(other),
            })?
            .with_label(format!("Aut({})", group.label()));
        let automorphisms: Vec<Automorphism> = as_group
            .elements()
            .map(|i| Automorphism {
                images: as_group.permutation(i).expect("permutation group").images().to_vec(),
                order: as_group.element_order(i),
            })
            .collect();
        let mut inner_members: Vec<usize> = group
            .elements()
            .map(|g| {
                let conj = Automorphism::conjugation(group, g).to_permutation();
                as_group.index_of_permutation(&conj).expect("inner automorphism missing from Aut(G)")
            })
            .collect();
        inner_members.sort_unstable();
        inner_members.dedup();
        let inner = SubgroupHandle::new(&as_group, inner_members)?;
        let out_order = as_group.order() / inner.order();
        let out_exponent = if out_order <= OUT_QUOTIENT_LIMIT {
            quotient(&as_group, &inner)?.target.exponent()
        } else {
            out_exponent_by_powers(&as_group, &inner)
        };
        Ok(AutomorphismGroup {
            base_order: n,
            as_group,
            automorphisms,
            inner,
            out_order,
            out_exponent,
            build_generators: gens.to_vec(),
        })
    }

    pub fn base_order(&self) -> usize {
        self.base_order
    }

    /// The generators passed to [`Self::from_generators`]; rebuilding from
    /// them reproduces the same element numbering.
    pub fn build_generators(&self) -> &[Permutation] {
        &self.build_generators
    }

    pub fn order(&self) -> usize {
        self.as_group.order()
    }

    /// `Aut(G)` as a permutation group on the points of `G`.
    pub fn as_group(&self) -> &FiniteGroup {
        &self.as_group
    }

    /// All automorphisms, indexed like the elements of [`Self::as_group`].
    pub fn automorphisms(&self) -> &[Automorphism] {
        &self.automorphisms
    }

    pub fn inner(&self) -> &SubgroupHandle {
        &self.inner
    }

    pub fn out_order(&self) -> usize {
        self.out_order
    }

    pub fn out_exponent(&self) -> u64 {
        self.out_exponent
    }

    /// `(|Out(G)|, exp(Out(G)))`
    pub fn out_stats(&self) -> (usize, u64) {
        (self.out_order, self.out_exponent)
    }

    /// Maximum automorphism order.
    pub fn mao(&self) -> u64 {
        self.as_group.element_orders().max().unwrap_or(1)
    }

    pub fn exponent(&self) -> u64 {
        self.as_group.exponent()
    }

    pub fn generators(&self) -> Vec<&Automorphism> {
        self.as_group
            .generating_sequence()
            .into_iter()
            .map(|i| &self.automorphisms[i])
            .collect()
    }

    /// One automorphism per conjugacy class of `Aut(G)` (the smallest index
    /// in the class).
    pub fn class_representatives(&self) -> Vec<&Automorphism> {
        self.as_group
            .conjugacy_classes()
            .into_iter()
            .map(|class| &self.automorphisms[class[0]])
            .collect()
    }

    /// `.pgrp` text for `Aut(G)` acting on the `|G|` points of `G`.
    pub fn to_pgrp(&self, name: &str) -> String {
        let gens: Vec<Permutation> = self.generators().into_iter().map(|a| a.to_permutation()).collect();
        crate::group::write_pgrp(name, self.base_order, &gens)
    }
}

fn out_exponent_by_powers(aut: &FiniteGroup, inner: &SubgroupHandle) -> u64 {
    let mut inside = vec![false; aut.order()];
    for &m in inner.members() {
        inside[m] = true;
    }
    aut.elements().fold(1, |acc, a| {
        let mut x = a;
        let mut k = 1u64;
        while !inside[x] {
            x = aut.mul(x, a);
            k += 1;
        }
        lcm(acc, k)
    })
}

/// The automorphism data the verifiers consume: either the full list or,
/// for large elementary abelian groups, `GL_k(p)` by class representatives.
#[derive(Debug)]
pub enum AutData {
    Enumerated(AutomorphismGroup),
    Linear(LinearAutomorphisms),
}

impl AutData {
    /// Enumerates `Aut(G)` unless `G` is elementary abelian with
    /// `|GL_k(p)|` above `config.max_automorphisms`.
    pub fn compute(group: &FiniteGroup, config: &AutConfig) -> Result<AutData, AutError> {
        if let Some(linear) = LinearAutomorphisms::new(group) {
            if linear.order() > BigUint::from(config.max_automorphisms) {
                return Ok(AutData::Linear(linear));
            }
        }
        Ok(AutData::Enumerated(automorphism_group_with(group, config)?))
    }

    pub fn mode(&self) -> &'static str {
        match self {
            AutData::Enumerated(_) => "enumerated",
            AutData::Linear(_) => "linear-classes",
        }
    }

    pub fn order(&self) -> BigUint {
        match self {
            AutData::Enumerated(a) => BigUint::from(a.order()),
            AutData::Linear(l) => l.order(),
        }
    }

    pub fn inner_order(&self) -> usize {
        match self {
            AutData::Enumerated(a) => a.inner().order(),
            AutData::Linear(_) => 1,
        }
    }

    pub fn out_order(&self) -> BigUint {
        match self {
            AutData::Enumerated(a) => BigUint::from(a.out_order()),
            AutData::Linear(l) => l.order(),
        }
    }

    pub fn out_exponent(&self) -> u64 {
        match self {
            AutData::Enumerated(a) => a.out_exponent(),
            AutData::Linear(l) => l.exponent(),
        }
    }

    pub fn mao(&self) -> u64 {
        match self {
            AutData::Enumerated(a) => a.mao(),
            AutData::Linear(l) => l.mao(),
        }
    }

    /// Automorphisms to iterate when a quantity is invariant under
    /// conjugation in `Aut(G)`. With `class_reps` false and an enumerated
    /// group this is every automorphism.
    pub fn representatives(&self, class_reps: bool) -> Cow<'_, [Automorphism]> {
        match self {
            AutData::Enumerated(a) if class_reps => {
                Cow::Owned(a.class_representatives().into_iter().cloned().collect())
            }
            AutData::Enumerated(a) => Cow::Borrowed(a.automorphisms()),
            AutData::Linear(l) => Cow::Borrowed(l.class_representatives()),
        }
    }

    /// Whether [`Self::representatives`] covers every automorphism.
    pub fn is_exhaustive(&self, class_reps: bool) -> bool {
        matches!(self, AutData::Enumerated(_)) && !class_reps
    }

    pub fn generators(&self) -> Vec<Automorphism> {
        match self {
            AutData::Enumerated(a) => a.generators().into_iter().cloned().collect(),
            AutData::Linear(l) => l.generators().to_vec(),
        }
    }

    /// Uniformly random automorphism.
    pub fn sample(&self, rng: &mut impl Rng) -> Automorphism {
        match self {
            AutData::Enumerated(a) => a.automorphisms()[rng.gen_range(0..a.order())].clone(),
            AutData::Linear(l) => l.random(rng),
        }
    }

    pub fn is_characteristic(&self, sub: &SubgroupHandle) -> bool {
        self.generators().iter().all(|a| a.fixes_setwise(sub))
    }

    /// Characteristic subgroups (including trivial and whole), ordered by
    /// size, each flagged characteristic.
    pub fn characteristic_subgroups(&self, group: &FiniteGroup) -> Vec<SubgroupHandle> {
        if let AutData::Linear(_) = self {
            // GL_k(p) is transitive on nonzero vectors
            return vec![SubgroupHandle::trivial(group), SubgroupHandle::whole(group)];
        }
        let gens = self.generators();
        group
            .normal_subgroups()
            .into_iter()
            .filter(|s| gens.iter().all(|a| a.fixes_setwise(s)))
            .map(|mut s| {
                s.mark_characteristic(true);
                s
            })
            .collect()
    }
}
