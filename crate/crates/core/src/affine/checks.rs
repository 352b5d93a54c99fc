//! Verifiers for the coset decomposition of affine orders and the
//! inequalities derived from it.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use super::{affine_order, power_parts, translation_lcm, AffineError, GroupProfile};
use crate::arith::{big_pow, json_number, nu_p, prime_divisors, Lcm};
use crate::autgrp::{AutConfig, AutData, Automorphism};
use crate::group::{quotient, subgroup_as_group, FiniteGroup, QuotientMap, SubgroupHandle};

/// Which element of each coset plays the role of its representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RepPolicy {
    #[default]
    Min,
    Max,
}

/// A normal subgroup prepared for decomposition: the quotient map and the
/// subgroup as a standalone group.
#[derive(Debug)]
pub struct CharQuotient {
    pub quotient: QuotientMap,
    pub sub: FiniteGroup,
    embedding: Vec<usize>,
    local: Vec<u32>,
}

impl CharQuotient {
    pub fn new(group: &FiniteGroup, sub: &SubgroupHandle) -> Result<Self, AffineError> {
        let quotient = quotient(group, sub)?;
        let (sub_group, embedding) = subgroup_as_group(group, sub);
        let mut local = vec![u32::MAX; group.order()];
        for (i, &g) in embedding.iter().enumerate() {
            local[g] = i as u32;
        }
        Ok(CharQuotient { quotient, sub: sub_group, embedding, local })
    }

    pub fn kernel(&self) -> &SubgroupHandle {
        &self.quotient.kernel
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.quotient.target
    }

    /// Parent index of a local element of the subgroup.
    pub fn embed(&self, local: usize) -> usize {
        self.embedding[local]
    }

    /// Local index of a parent element, if it lies in the subgroup.
    pub fn local(&self, g: usize) -> Option<usize> {
        match self.local[g] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionWitness {
    /// `k = ord` of the induced map on `G/N`.
    pub quotient_order_part: u64,
    /// `n_C` for each coset, as parent indices.
    pub coset_elements: Vec<usize>,
    /// The distinct `n_C`, as parent indices.
    pub m_set: BTreeSet<usize>,
    pub lcm_part: Lcm,
    pub full_order: u64,
    /// Every `n_C` landed in `N`.
    pub cosets_preserved: bool,
    pub holds: bool,
}

/// Decomposes `ord((x, alpha))` along `N`: with `k` the order of the
/// induced map on `G/N` and `n_C = g^-1 A^k(g)` for the representative `g`
/// of each coset `C`, checks `ord(A) = k * lcm_{m in M} ord((m, (alpha|N)^k))`.
pub fn lcm_decomposition(
    group: &FiniteGroup,
    cq: &CharQuotient,
    x: usize,
    alpha: &Automorphism,
    policy: RepPolicy,
) -> Result<DecompositionWitness, AffineError> {
    let q = &cq.quotient;
    let alpha_bar = alpha.induced_on_quotient(q).ok_or(AffineError::NotInvariant)?;
    let k = affine_order(&q.target, q.project(x), &alpha_bar);
    let (t_k, alpha_k) = power_parts(group, x, alpha, k);
    let beta = alpha_k.restrict(&q.kernel).ok_or(AffineError::NotInvariant)?;

    let mut coset_elements = Vec::with_capacity(q.num_cosets());
    let mut cosets_preserved = true;
    for c in 0..q.num_cosets() {
        let coset = q.coset(c);
        let g = match policy {
            RepPolicy::Min => coset[0],
            RepPolicy::Max => coset[coset.len() - 1],
        };
        let image = group.mul(t_k, alpha_k.apply(g));
        let n_c = group.mul(group.inv(g), image);
        cosets_preserved &= cq.local(n_c).is_some();
        coset_elements.push(n_c);
    }
    let m_set: BTreeSet<usize> = coset_elements.iter().copied().collect();
    let lcm_part: Lcm = m_set
        .iter()
        .filter_map(|&m| cq.local(m))
        .map(|m| affine_order(&cq.sub, m, &beta))
        .collect();
    let full_order = affine_order(group, x, alpha);
    let holds = cosets_preserved && BigUint::from(full_order) == BigUint::from(k) * lcm_part.to_big();
    Ok(DecompositionWitness {
        quotient_order_part: k,
        coset_elements,
        m_set,
        lcm_part,
        full_order,
        cosets_preserved,
        holds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LcmDivRecord {
    pub alpha_index: usize,
    pub alpha_order: u64,
    pub lcm: Lcm,
    /// `ord(alpha)` divides `|G|`.
    pub part1_applies: bool,
    pub part1_holds: bool,
    /// Primes `p` whose divisibility bound fails.
    pub part2_failures: Vec<u64>,
    pub particular_holds: bool,
}

impl LcmDivRecord {
    pub fn passed(&self) -> bool {
        self.part1_holds && self.part2_failures.is_empty() && self.particular_holds
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LcmDivReport {
    pub records: Vec<LcmDivRecord>,
    /// Primes `p` with `p^(2 nu_p(exp G)) * exp(Out G) <= p^nu_p(|G|)`.
    pub small_out_primes: Vec<u64>,
    pub part1_ok: bool,
    pub part2_ok: bool,
    pub particular_ok: bool,
}

impl LcmDivReport {
    pub fn passed(&self) -> bool {
        self.part1_ok && self.part2_ok && self.particular_ok
    }
}

/// Checks both divisibility conditions for each automorphism in `auts`:
/// if `ord(alpha) | |G|` then `lcm_x ord((x, alpha)) | |G|`; and for every
/// prime `p | |G|` the lcm divides the `p`-part bound built from `exp(G)`
/// and `exp(Out(G))`, with the `<= |G|` consequence when that bound is small.
pub fn verify_lcm_div_conditions(group: &FiniteGroup, auts: &[Automorphism], out_exponent: u64) -> LcmDivReport {
    let n = group.order() as u64;
    let order = BigUint::from(n);
    let exp = group.exponent();
    let primes = prime_divisors(n);
    let mut bounds = Vec::with_capacity(primes.len());
    let mut small_out_primes = Vec::new();
    for &p in &primes {
        let nu_g = nu_p(n, p).expect("prime from factorization");
        let nu_exp = nu_p(exp, p).expect("prime from factorization");
        let p_part = big_pow(p, nu_g);
        let local = big_pow(p, 2 * nu_exp) * BigUint::from(out_exponent);
        if local <= p_part {
            small_out_primes.push(p);
        }
        bounds.push((p, &order / &p_part * local));
    }
    let records: Vec<LcmDivRecord> = crate::par::map_range(auts.len(), |i| {
        let alpha = &auts[i];
        let lcm = translation_lcm(group, alpha);
        let part1_applies = n.is_multiple_of(alpha.order());
        let part1_holds = !part1_applies || lcm.divides(&order);
        let part2_failures = bounds.iter().filter(|(_, b)| !lcm.divides(b)).map(|&(p, _)| p).collect();
        let particular_holds = small_out_primes.is_empty() || lcm.to_big() <= order;
        LcmDivRecord { alpha_index: i, alpha_order: alpha.order(), lcm, part1_applies, part1_holds, part2_failures, particular_holds }
    });
    LcmDivReport {
        part1_ok: records.iter().all(|r| r.part1_holds),
        part2_ok: records.iter().all(|r| r.part2_failures.is_empty()),
        particular_ok: records.iter().all(|r| r.particular_holds),
        records,
        small_out_primes,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CsubCheck {
    pub sub_order: usize,
    #[serde(serialize_with = "json_number::serialize")]
    pub f_group: BigUint,
    #[serde(serialize_with = "json_number::serialize")]
    pub f_sub: BigUint,
    #[serde(serialize_with = "json_number::serialize")]
    pub f_quotient: BigUint,
    pub holds: bool,
}

impl CsubCheck {
    pub fn from_values(sub_order: usize, f_group: BigUint, f_sub: BigUint, f_quotient: BigUint) -> Self {
        let holds = f_group <= &f_sub * &f_quotient;
        CsubCheck { sub_order, f_group, f_sub, f_quotient, holds }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityCheck {
    pub sub_order: usize,
    pub mao_holds: bool,
    pub maffo_holds: bool,
}

impl MonotonicityCheck {
    /// `mao(G/N) / |G/N| >= mao(G) / |G|`, likewise for maffo, compared
    /// after cross-multiplying.
    pub fn from_values(sub_order: usize, group: (usize, u64, u64), quotient: (usize, u64, u64)) -> Self {
        let (g_order, g_mao, g_maffo) = group;
        let (q_order, q_mao, q_maffo) = quotient;
        let ge = |qv: u64, gv: u64| u128::from(qv) * g_order as u128 >= u128::from(gv) * q_order as u128;
        MonotonicityCheck { sub_order, mao_holds: ge(q_mao, g_mao), maffo_holds: ge(q_maffo, g_maffo) }
    }

    pub fn holds(&self) -> bool {
        self.mao_holds && self.maffo_holds
    }
}

fn require_characteristic(group: &FiniteGroup, sub: &SubgroupHandle, config: &AutConfig) -> Result<(), AffineError> {
    if !sub.is_proper_nontrivial() {
        return Err(AffineError::NotCharacteristic);
    }
    if sub.is_characteristic {
        return Ok(());
    }
    if !sub.is_normal || !AutData::compute(group, config)?.is_characteristic(sub) {
        return Err(AffineError::NotCharacteristic);
    }
    Ok(())
}

/// `F(G) <= F(N) * F(G/N)`, with `N` turned into a standalone group first.
pub fn verify_csub_inequality(
    group: &FiniteGroup,
    sub: &SubgroupHandle,
    config: &AutConfig,
) -> Result<CsubCheck, AffineError> {
    require_characteristic(group, sub, config)?;
    let cq = CharQuotient::new(group, sub)?;
    let g = GroupProfile::compute(group, config, false)?;
    let n = GroupProfile::compute(&cq.sub, config, false)?;
    let q = GroupProfile::compute(cq.target(), config, false)?;
    Ok(CsubCheck::from_values(sub.order(), g.f_value(), n.f_value(), q.f_value()))
}

pub fn verify_monotonicity(
    group: &FiniteGroup,
    sub: &SubgroupHandle,
    config: &AutConfig,
) -> Result<MonotonicityCheck, AffineError> {
    require_characteristic(group, sub, config)?;
    let cq = CharQuotient::new(group, sub)?;
    let g = GroupProfile::compute(group, config, false)?;
    let q = GroupProfile::compute(cq.target(), config, false)?;
    Ok(MonotonicityCheck::from_values(sub.order(), (g.order, g.mao, g.maffo), (q.order, q.mao, q.maffo)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgrp::automorphism_group;
    use crate::group::{builtin_group, FamilySpec};

    fn build(s: &str) -> FiniteGroup {
        builtin_group(&s.parse::<FamilySpec>().unwrap()).unwrap()
    }

    fn sub_of_order(g: &FiniteGroup, aut: &AutData, order: usize) -> SubgroupHandle {
        aut.characteristic_subgroups(g).into_iter().find(|s| s.order() == order).unwrap()
    }

    #[test]
    fn decomposition_of_cyclic_translation() {
        let c4 = build("cyclic:4");
        let aut = AutData::compute(&c4, &AutConfig::default()).unwrap();
        let n = sub_of_order(&c4, &aut, 2);
        let cq = CharQuotient::new(&c4, &n).unwrap();
        let w = lcm_decomposition(&c4, &cq, 1, &Automorphism::identity(4), RepPolicy::Min).unwrap();
        assert_eq!(w.quotient_order_part, 2);
        assert_eq!(w.m_set.iter().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!(w.lcm_part.to_u64(), Some(2));
        assert_eq!(w.full_order, 4);
        assert!(w.holds);

        let id = lcm_decomposition(&c4, &cq, 0, &Automorphism::identity(4), RepPolicy::Max).unwrap();
        assert_eq!(id.quotient_order_part, 1);
        assert_eq!(id.m_set.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert!(id.holds);
    }

    #[test]
    fn decomposition_of_d4_over_center() {
        let d4 = build("dihedral:4");
        let aut = AutData::compute(&d4, &AutConfig::default()).unwrap();
        let z = sub_of_order(&d4, &aut, 2);
        assert_eq!(z.members(), &[0, 2]);
        let cq = CharQuotient::new(&d4, &z).unwrap();
        let conj_r = Automorphism::conjugation(&d4, 1);
        for policy in [RepPolicy::Min, RepPolicy::Max] {
            let w = lcm_decomposition(&d4, &cq, 4, &conj_r, policy).unwrap();
            assert!(w.holds);
            assert_eq!(BigUint::from(w.quotient_order_part) * w.lcm_part.to_big(), BigUint::from(4u32));
            assert_eq!(w.coset_elements.len(), 4);
            assert_eq!(w.m_set, w.coset_elements.iter().copied().collect());
        }
    }

    #[test]
    fn decomposition_rejects_non_invariant() {
        let d4 = build("dihedral:4");
        // <s> is not normal, so take a normal but non-characteristic subgroup: <r^2, s>
        let n = SubgroupHandle::new(&d4, vec![0, 2, 4, 6]).unwrap();
        assert!(n.is_normal);
        let cq = CharQuotient::new(&d4, &n).unwrap();
        let aut = automorphism_group(&d4).unwrap();
        let moving = aut.automorphisms().iter().find(|a| !a.fixes_setwise(&n)).unwrap();
        assert_eq!(lcm_decomposition(&d4, &cq, 0, moving, RepPolicy::Min).unwrap_err(), AffineError::NotInvariant);
    }

    #[test]
    fn lcm_div_examples() {
        let c1 = build("cyclic:1");
        let r = verify_lcm_div_conditions(&c1, &[Automorphism::identity(1)], 1);
        assert!(r.passed());

        let c8 = build("cyclic:8");
        let aut = automorphism_group(&c8).unwrap();
        let r = verify_lcm_div_conditions(&c8, aut.automorphisms(), aut.out_exponent());
        assert!(r.passed());
        assert!(r.records.iter().all(|rec| rec.part1_applies && rec.lcm.divides(&BigUint::from(8u32))));

        let s3 = build("symmetric:3");
        let aut = automorphism_group(&s3).unwrap();
        let r = verify_lcm_div_conditions(&s3, aut.automorphisms(), aut.out_exponent());
        assert!(r.passed());
        assert!(r.records.iter().all(|rec| rec.part1_applies && [1, 2, 3].contains(&rec.alpha_order)));
    }

    #[test]
    fn csub_examples() {
        let config = AutConfig::default();
        for (spec, order, expected) in [("cyclic:4", 2, (4u32, 2u32, 2u32)), ("cyclic:6", 3, (6, 3, 2))] {
            let g = build(spec);
            let aut = AutData::compute(&g, &config).unwrap();
            let n = sub_of_order(&g, &aut, order);
            let c = verify_csub_inequality(&g, &n, &config).unwrap();
            assert!(c.holds);
            assert_eq!((c.f_group, c.f_sub, c.f_quotient), (expected.0.into(), expected.1.into(), expected.2.into()));
        }
        let d4 = build("dihedral:4");
        let aut = AutData::compute(&d4, &config).unwrap();
        let z = sub_of_order(&d4, &aut, 2);
        let c = verify_csub_inequality(&d4, &z, &config).unwrap();
        assert_eq!(c.f_group, BigUint::from(8u32));
        assert!(c.holds);

        let whole = SubgroupHandle::whole(&d4);
        assert_eq!(verify_csub_inequality(&d4, &whole, &config).unwrap_err(), AffineError::NotCharacteristic);
        let non_char = SubgroupHandle::new(&d4, vec![0, 2, 4, 6]).unwrap();
        assert_eq!(verify_csub_inequality(&d4, &non_char, &config).unwrap_err(), AffineError::NotCharacteristic);
    }

    #[test]
    fn monotonicity_examples() {
        let config = AutConfig::default();
        let c8 = build("cyclic:8");
        let aut = AutData::compute(&c8, &config).unwrap();
        let n = sub_of_order(&c8, &aut, 2);
        let m = verify_monotonicity(&c8, &n, &config).unwrap();
        assert!(m.holds());
        // mao(C4)/4 = 2/4 against mao(C8)/8 = 2/8
        let direct = MonotonicityCheck::from_values(2, (8, 2, 8), (4, 2, 4));
        assert!(direct.mao_holds && direct.maffo_holds);
        assert!(!MonotonicityCheck::from_values(2, (8, 7, 8), (4, 2, 4)).mao_holds);

        let d6 = build("dihedral:6");
        let aut = AutData::compute(&d6, &config).unwrap();
        let n3 = sub_of_order(&d6, &aut, 3);
        assert!(verify_monotonicity(&d6, &n3, &config).unwrap().holds());
    }
}
