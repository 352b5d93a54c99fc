//! Bounds for direct powers `S^n` of a nonabelian simple group.
//!
//! `Aut(S^n)` is the wreath product `Aut(S) wr Sym(n)`. An element
//! `(a_1, ..., a_n; sigma)` has order the lcm, over the cycles of `sigma`,
//! of the cycle length times the order of the product of the `a_i` along
//! that cycle, and that product ranges over all of `Aut(S)`. The maximum
//! automorphism order of `S^n` therefore only needs the set of element
//! orders of `Aut(S)`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use super::{automorphism_group_with, AutConfig, AutError};
use crate::arith::{json_number, lcm};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, Serialize)]
pub struct CharSimpleCheck {
    pub group: String,
    pub power: u32,
    /// False when the input is not a nonabelian simple group; no claim is
    /// made in that case.
    pub applicable: bool,
    pub reason: Option<String>,
    pub mao: u64,
    pub exponent: u64,
    #[serde(serialize_with = "json_number::serialize")]
    pub power_order: BigUint,
    /// `mao^1000 < |S^n|^438`
    pub mao_bound_holds: bool,
    /// `exp(S^n) = exp(S) <= |S|` and `|S|^2 <= |S^n|`
    pub exponent_bound_holds: bool,
    /// `(mao * exp)^1000 < |S^n|^938` and `mao * exp < |S^n|`
    pub combined_holds: bool,
}

impl CharSimpleCheck {
    pub fn passed(&self) -> bool {
        self.applicable && self.mao_bound_holds && self.exponent_bound_holds && self.combined_holds
    }
}

/// Partitions of `n` into parts, largest first.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Maximum element order of `A wr Sym(n)` given the element orders of `A`.
pub fn mao_of_power(aut_orders: &BTreeSet<u64>, n: u32) -> u64 {
    fn best(parts: &[u32], orders: &BTreeSet<u64>, acc: u64) -> u64 {
        match parts.split_first() {
            None => acc,
            Some((&c, rest)) => orders
                .iter()
                .map(|&o| best(rest, orders, lcm(acc, c as u64 * o)))
                .max()
                .unwrap_or(acc),
        }
    }
    partitions(n)
        .iter()
        .map(|parts| best(parts, aut_orders, 1))
        .max()
        .unwrap_or(1)
}

fn is_nonabelian_simple(s: &FiniteGroup) -> bool {
    s.order() > 1 && !s.is_abelian() && s.normal_subgroups().len() == 2
}

/// Checks `mao(S^n) < |S^n|^0.438` and `exp(S^n) = exp(S) <= |S| <=
/// |S^n|^0.5` with integer powers only.
pub fn verify_char_simple_bound(s: &FiniteGroup, n: u32, config: &AutConfig) -> Result<CharSimpleCheck, AutError> {
    let power_order = num_traits::pow(BigUint::from(s.order()), n as usize);
    let mut check = CharSimpleCheck {
        group: s.label().to_string(),
        power: n,
        applicable: false,
        reason: None,
        mao: 0,
        exponent: 0,
        power_order: power_order.clone(),
        mao_bound_holds: false,
        exponent_bound_holds: false,
        combined_holds: false,
    };
    if n < 2 {
        check.reason = Some("power must be at least 2".into());
        return Ok(check);
    }
    if !is_nonabelian_simple(s) {
        check.reason = Some(format!("{} is not a nonabelian simple group", s.label()));
        return Ok(check);
    }
    let aut = automorphism_group_with(s, config)?;
    let orders: BTreeSet<u64> = aut.as_group().element_orders().collect();
    let mao = mao_of_power(&orders, n);

    // exp(S^n) from the constructed power
    let cap_err = |_| AutError::CapExceeded(format!("{}^{n}", s.label()));
    let mut power = FiniteGroup::direct_product(s, s).map_err(cap_err)?;
    for _ in 2..n {
        power = FiniteGroup::direct_product(&power, s).map_err(cap_err)?;
    }
    let exponent = power.exponent();

    let big = |x: u64| BigUint::from(x);
    let pow = |b: &BigUint, e: usize| num_traits::pow(b.clone(), e);
    check.applicable = true;
    check.mao = mao;
    check.exponent = exponent;
    check.mao_bound_holds = pow(&big(mao), 1000) < pow(&power_order, 438);
    let s_order = big(s.order() as u64);
    check.exponent_bound_holds =
        exponent == s.exponent() && big(exponent) <= s_order && &s_order * &s_order <= power_order;
    let product = big(mao) * big(exponent);
    check.combined_holds = pow(&product, 1000) < pow(&power_order, 938) && product < power_order;
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgrp::{Automorphism, automorphism_group};
    use crate::group::{builtin_group, FamilySpec};

    fn build(s: &str) -> FiniteGroup {
        builtin_group(&s.parse::<FamilySpec>().unwrap()).unwrap()
    }

    #[test]
    fn partitions_of_small_n() {
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(5).len(), 7);
    }

    #[test]
    fn a5_squared() {
        let a5 = build("alternating:5");
        let check = verify_char_simple_bound(&a5, 2, &AutConfig::default()).unwrap();
        assert!(check.applicable);
        assert_eq!(check.mao, 30);
        assert_eq!(check.exponent, 30);
        assert_eq!(check.power_order, BigUint::from(3600u32));
        assert!(check.passed(), "{check:?}");
    }

    #[test]
    fn non_simple_input_makes_no_claim() {
        let check = verify_char_simple_bound(&build("cyclic:4"), 2, &AutConfig::default()).unwrap();
        assert!(!check.applicable);
        assert!(!check.passed());
        let check = verify_char_simple_bound(&build("cyclic:5"), 2, &AutConfig::default()).unwrap();
        assert!(!check.applicable);
    }

    /// The wreath-product maximum is attained by an explicit automorphism of
    /// A5 x A5 acting on its 3600 points.
    #[test]
    fn wreath_maximum_is_realized() {
        let a5 = build("alternating:5");
        let aut = automorphism_group(&a5).unwrap();
        let of_order = |o: u64| aut.automorphisms().iter().find(|a| a.order() == o).unwrap().clone();
        let (a, b) = (of_order(5), of_order(6));
        let n = a5.order();
        let images: Vec<u32> = (0..n * n)
            .map(|g| (a.apply(g / n) * n + b.apply(g % n)) as u32)
            .collect();
        let sq = FiniteGroup::direct_product(&a5, &a5).unwrap();
        let alpha = Automorphism::new(&sq, images).unwrap();
        assert_eq!(alpha.order(), 30);

        // the swap composed with (a, 1) has order 2 * ord(a)
        let swap_images: Vec<u32> = (0..n * n).map(|g| (a.apply(g % n) * n + g / n) as u32).collect();
        let beta = Automorphism::new(&sq, swap_images).unwrap();
        assert_eq!(beta.order(), 10);
        let orders: BTreeSet<u64> = aut.as_group().element_orders().collect();
        assert!(mao_of_power(&orders, 2) >= 2 * 5);
    }
}
