//! `PSL_2(q)` and `PΓL_2(q)` acting on the projective line.
//!
//! Point `y` in `[0, q)` is `(1 : y)` and point `q` is `(0 : 1)`. A matrix
//! `[[a, b], [c, d]]` sends the column vector `(x0, x1)` to
//! `(a x0 + b x1, c x0 + d x1)`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::field::{make_field, FiniteField};
use super::SimpleError;
use crate::arith::{factorize, lcm, Lcm};
use crate::group::FiniteGroup;
use crate::perm::{cycle_lengths_of, Permutation};

/// Largest group built element by element.
pub const BFS_ORDER_CAP: usize = 200_000;
/// `PΓL_2(q)` sizes verified without `slow`.
pub const FAST_TIER_CAP: u64 = 100_000;
/// `PΓL_2(q)` sizes verified with `slow`.
pub const SLOW_TIER_CAP: u64 = 10_000_000;
/// Above this `q` orders are streamed instead of taken from a built group.
pub const STREAMING_THRESHOLD: u64 = 32;

/// `q = p^f` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, f)] => Some((*p, *f)),
        _ => None,
    }
}

pub fn field_for(q: u64) -> Result<FiniteField, SimpleError> {
    let (p, f) = prime_power(q).ok_or(SimpleError::NotPrimePower(q))?;
    Ok(make_field(p, f, None)?)
}

pub fn psl2_order(q: u64) -> u64 {
    q * (q * q - 1) / if q.is_multiple_of(2) { 1 } else { 2 }
}

pub fn pgammal2_order(q: u64) -> u64 {
    let (_, f) = prime_power(q).expect("prime power");
    q * (q * q - 1) * u64::from(f)
}

/// A semilinear map `v -> A * sigma^i(v)` of `GF(q)^2` up to scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    /// `[a, b, c, d]`, scaled so the first nonzero entry is 1.
    pub matrix: [u32; 4],
    pub field_power: u32,
}

impl SemilinearMap {
    pub fn identity() -> Self {
        SemilinearMap { matrix: [1, 0, 0, 1], field_power: 0 }
    }

    /// Canonical representative of `(matrix, i)`; `None` if singular.
    pub fn new(k: &FiniteField, matrix: [u32; 4], field_power: u32) -> Option<Self> {
        let [a, b, c, d] = matrix;
        if k.sub(k.mul(a, d), k.mul(b, c)) == 0 {
            return None;
        }
        let lead = *matrix.iter().find(|&&x| x != 0)?;
        let s = k.inv(lead)?;
        Some(SemilinearMap { matrix: matrix.map(|x| k.mul(s, x)), field_power: field_power % k.degree() })
    }

    pub fn det(&self, k: &FiniteField) -> u32 {
        let [a, b, c, d] = self.matrix;
        k.sub(k.mul(a, d), k.mul(b, c))
    }

    /// Whether the map lies in `PSL_2(q)`: linear with square determinant.
    pub fn in_psl(&self, k: &FiniteField) -> bool {
        self.field_power == 0 && k.is_square(self.det(k))
    }

    pub fn apply(&self, k: &FiniteField, point: usize) -> usize {
        let q = k.size();
        let (x0, x1) = if point == q { (0, 1) } else { (1, point as u32) };
        let (x0, x1) = (k.frobenius(x0, self.field_power), k.frobenius(x1, self.field_power));
        let [a, b, c, d] = self.matrix;
        let y0 = k.add(k.mul(a, x0), k.mul(b, x1));
        let y1 = k.add(k.mul(c, x0), k.mul(d, x1));
        match k.div(y1, y0) {
            Some(y) => y as usize,
            None => q,
        }
    }

    /// `(A, i)(B, j) = (A * sigma^i(B), i + j)`: apply `other` first.
    pub fn compose(&self, k: &FiniteField, other: &SemilinearMap) -> SemilinearMap {
        let [a, b, c, d] = self.matrix;
        let [e, f, g, h] = other.matrix.map(|x| k.frobenius(x, self.field_power));
        let m = [
            k.add(k.mul(a, e), k.mul(b, g)),
            k.add(k.mul(a, f), k.mul(b, h)),
            k.add(k.mul(c, e), k.mul(d, g)),
            k.add(k.mul(c, f), k.mul(d, h)),
        ];
        SemilinearMap::new(k, m, self.field_power + other.field_power).expect("product of invertible maps")
    }

    pub fn to_permutation(&self, k: &FiniteField) -> Permutation {
        Permutation::from_images_unchecked((0..=k.size()).map(|x| self.apply(k, x) as u32).collect())
    }

    /// Order from the cycle structure on the `q + 1` points.
    pub fn order(&self, k: &FiniteField) -> u64 {
        cycle_lengths_of(k.size() + 1, |x| self.apply(k, x))
            .into_iter()
            .fold(1, |acc, l| lcm(acc, l as u64))
    }

    /// Order by repeated composition.
    pub fn order_by_composition(&self, k: &FiniteField) -> u64 {
        let mut acc = *self;
        let mut n = 1;
        while acc != SemilinearMap::identity() {
            acc = self.compose(k, &acc);
            n += 1;
        }
        n
    }

    /// The `index`-th element of `PΓL_2(q)` in a fixed enumeration:
    /// field power outermost, then matrices `[1, b, c, d]` with `d != bc`,
    /// then `[0, 1, c, d]` with `c != 0`.
    pub fn nth(k: &FiniteField, index: u64) -> SemilinearMap {
        let q = k.size() as u64;
        let per_power = q * (q * q - 1);
        let field_power = (index / per_power) as u32;
        let r = index % per_power;
        let first = q * q * (q - 1);
        let matrix = if r < first {
            let (bc, t) = (r / (q - 1), r % (q - 1));
            let (b, c) = ((bc / q) as u32, (bc % q) as u32);
            let bc_prod = k.mul(b, c);
            // t-th value of d skipping d = bc
            let d = if (t as u32) < bc_prod { t as u32 } else { t as u32 + 1 };
            [1, b, c, d]
        } else {
            let r = r - first;
            let (c, d) = ((r / q + 1) as u32, (r % q) as u32);
            [0, 1, c, d]
        };
        SemilinearMap { matrix, field_power }
    }
}

fn generator_perms(k: &FiniteField, maps: &[[u32; 4]], frobenius: bool) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = maps
        .iter()
        .map(|&m| SemilinearMap::new(k, m, 0).expect("invertible generator").to_permutation(k))
        .collect();
    if frobenius && k.degree() > 1 {
        gens.push(SemilinearMap { matrix: [1, 0, 0, 1], field_power: 1 }.to_permutation(k));
    }
    gens
}

fn build(k: &FiniteField, gens: &[Permutation], expected: u64, label: String) -> Result<FiniteGroup, SimpleError> {
    if expected > BFS_ORDER_CAP as u64 {
        return Err(SimpleError::BudgetExceeded { elements: expected, cap: BFS_ORDER_CAP as u64 });
    }
    let g = FiniteGroup::from_permutation_generators_capped(k.size() + 1, gens, BFS_ORDER_CAP)?;
    if g.order() as u64 != expected {
        return Err(SimpleError::OrderMismatch { expected, found: g.order() as u64 });
    }
    Ok(g.with_label(label))
}

fn neg_one(k: &FiniteField) -> u32 {
    k.neg(1)
}

/// Generators `y -> y + 1`, `y -> l^2 y`, `y -> -1/y` of `PSL_2(q)`.
pub fn psl2_generators(k: &FiniteField) -> Vec<Permutation> {
    let l2 = k.mul(k.generator(), k.generator());
    generator_perms(k, &[[1, 0, 1, 1], [1, 0, 0, l2], [0, 1, neg_one(k), 0]], false)
}

/// `PSL_2(q)` generators plus `y -> l y` and the Frobenius `y -> y^p`.
pub fn pgammal2_generators(k: &FiniteField) -> Vec<Permutation> {
    let mut gens = psl2_generators(k);
    gens.extend(generator_perms(k, &[[1, 0, 0, k.generator()]], true));
    gens
}

pub fn psl2_group(q: u64) -> Result<FiniteGroup, SimpleError> {
    let k = field_for(q)?;
    build(&k, &psl2_generators(&k), psl2_order(q), format!("PSL(2,{q})"))
}

pub fn pgammal2_group(q: u64) -> Result<FiniteGroup, SimpleError> {
    let k = field_for(q)?;
    build(&k, &pgammal2_generators(&k), pgammal2_order(q), format!("PGammaL(2,{q})"))
}

#[derive(Debug, Clone, Serialize)]
pub struct AutOrderCheck {
    pub case: String,
    pub simple_order: u64,
    pub aut_order: u64,
    /// `"bfs"` or `"streaming"`.
    pub method: String,
    /// Element order -> number of automorphisms of that order.
    pub histogram: BTreeMap<u64, u64>,
    /// Orders not dividing `simple_order`.
    pub violations: Vec<u64>,
    /// Enumeration index of one automorphism per violating order.
    pub reproducers: Vec<u64>,
    pub passed: bool,
}

fn finish(case: String, simple_order: u64, aut_order: u64, method: &str, histogram: BTreeMap<u64, u64>, reproducers: Vec<u64>) -> AutOrderCheck {
    let violations: Vec<u64> = histogram.keys().copied().filter(|o| !simple_order.is_multiple_of(*o)).collect();
    AutOrderCheck {
        case,
        simple_order,
        aut_order,
        method: method.to_string(),
        passed: violations.is_empty(),
        histogram,
        violations,
        reproducers,
    }
}

/// Checks that every element order of `PΓL_2(q) = Aut(PSL_2(q))` divides
/// `|PSL_2(q)|`. Groups above [`FAST_TIER_CAP`] need `slow`; above
/// [`SLOW_TIER_CAP`] nothing is attempted.
pub fn verify_aut_orders_divide(q: u64, slow: bool) -> Result<AutOrderCheck, SimpleError> {
    let k = field_for(q)?;
    if q < 4 {
        return Err(SimpleError::NotSimple(q));
    }
    let simple_order = psl2_order(q);
    let aut_order = pgammal2_order(q);
    if aut_order > SLOW_TIER_CAP {
        return Err(SimpleError::BudgetExceeded { elements: aut_order, cap: SLOW_TIER_CAP });
    }
    if aut_order > FAST_TIER_CAP && !slow {
        return Err(SimpleError::SlowTierRequired { q, elements: aut_order });
    }
    let case = format!("psl2_{q}");
    if q <= STREAMING_THRESHOLD {
        let g = pgammal2_group(q)?;
        let mut histogram = BTreeMap::new();
        for o in g.element_orders() {
            *histogram.entry(o).or_insert(0) += 1;
        }
        return Ok(finish(case, simple_order, aut_order, "bfs", histogram, Vec::new()));
    }
    // chunked so each worker owns a histogram; merged in chunk order
    const CHUNK: u64 = 1 << 14;
    let chunks = aut_order.div_ceil(CHUNK) as usize;
    let partial = crate::par::map_range(chunks, |c| {
        let mut h: BTreeMap<u64, u64> = BTreeMap::new();
        let mut first: BTreeMap<u64, u64> = BTreeMap::new();
        let start = c as u64 * CHUNK;
        for index in start..(start + CHUNK).min(aut_order) {
            let o = SemilinearMap::nth(&k, index).order(&k);
            *h.entry(o).or_insert(0) += 1;
            first.entry(o).or_insert(index);
        }
        (h, first)
    });
    let mut histogram = BTreeMap::new();
    let mut first_index: BTreeMap<u64, u64> = BTreeMap::new();
    for (h, first) in partial {
        for (o, n) in h {
            *histogram.entry(o).or_insert(0) += n;
        }
        for (o, i) in first {
            first_index.entry(o).or_insert(i);
        }
    }
    let reproducers = first_index.iter().filter(|(o, _)| !simple_order.is_multiple_of(**o)).map(|(_, &i)| i).collect();
    Ok(finish(case, simple_order, aut_order, "streaming", histogram, reproducers))
}

/// Lcm of all element orders, streamed; a cheap cross-check of the histogram.
pub fn aut_exponent(q: u64) -> Result<Lcm, SimpleError> {
    let k = field_for(q)?;
    Ok((0..pgammal2_order(q)).map(|i| SemilinearMap::nth(&k, i).order(&k)).collect())
}
