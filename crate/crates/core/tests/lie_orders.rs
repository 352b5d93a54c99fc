use holo_core::arith::{gcd, is_prime};
use holo_core::lie::psl_params;
use holo_core::simple::{prime_power, psl2_group, psl2_order};
use num_bigint::BigUint;

fn prime_powers(max: u64) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for p in 2..=max {
        if !is_prime(p) {
            continue;
        }
        let (mut q, mut f) = (p, 1);
        while q <= max {
            out.push((p, f, q));
            q *= p;
            f += 1;
        }
    }
    out
}

#[test]
fn psl2_order_formula_matches_lie_parameters() {
    for (p, f, q) in prime_powers(128) {
        let direct = q * (q * q - 1) / gcd(2, q - 1);
        assert_eq!(psl2_order(q), direct, "q = {q}");
        assert_eq!(prime_power(q), Some((p, f)));
        if q >= 4 {
            let params = psl_params(2, p, f).unwrap();
            assert_eq!(params.group_order, BigUint::from(direct), "q = {q}");
            assert_eq!(params.out_order, gcd(2, q - 1) * u64::from(f), "q = {q}");
        }
    }
}

#[test]
fn constructed_psl2_has_the_predicted_order() {
    for q in [4u64, 5, 7, 8, 9, 11, 13, 16] {
        let g = psl2_group(q).unwrap();
        assert_eq!(g.order() as u64, psl2_order(q), "q = {q}");
    }
}

#[test]
fn psl3_orders() {
    // |PSL3(q)| = q^3 (q^2 - 1)(q^3 - 1) / gcd(3, q - 1)
    for (p, f, q) in prime_powers(32) {
        let expected = BigUint::from(q.pow(3)) * (q * q - 1) * (q.pow(3) - 1) / gcd(3, q - 1);
        assert_eq!(psl_params(3, p, f).unwrap().group_order, expected, "q = {q}");
    }
}
