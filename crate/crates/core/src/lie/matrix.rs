//! `nu_p(ord(A)) <= ceil(log_p d)` for random `A` in `GL_d(p)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::LieError;
use crate::arith::{ceil_log, factorize, is_prime, json_number, nu_p_big};
use crate::linalg::ModMatrix;

/// Prime factorization of `|GL_d(p)| = p^(d(d-1)/2) prod_{i=1..d} (p^i - 1)`.
fn gl_order_factors(p: u64, dim: u32) -> Result<BTreeMap<u64, u32>, LieError> {
    let mut factors = BTreeMap::new();
    if dim > 1 {
        factors.insert(p, dim * (dim - 1) / 2);
    }
    for i in 1..=dim {
        let v = p
            .checked_pow(i)
            .ok_or_else(|| LieError::InvalidParameter(format!("{p}^{i} overflows")))?;
        for (r, e) in factorize(v - 1) {
            *factors.entry(r).or_insert(0) += e;
        }
    }
    Ok(factors)
}

/// Exact order of an invertible matrix. The order divides `|GL_d(p)|`;
/// the `r`-part for each prime `r` is read off `A^(|GL_d(p)| / r^e)`, with
/// those powers shared across primes by splitting the factor list in half.
pub fn matrix_order(m: &ModMatrix) -> Result<BigUint, LieError> {
    let p = u64::from(m.p());
    let factors: Vec<(u64, u32)> = gl_order_factors(p, m.dim() as u32)?.into_iter().collect();
    let full = prime_power_product(&factors);
    if !m.pow(&full).is_identity() {
        return Err(LieError::InvalidParameter("matrix is not invertible".into()));
    }
    let mut order = BigUint::one();
    prime_parts(m.clone(), &factors, &mut order);
    Ok(order)
}

fn prime_power_product(factors: &[(u64, u32)]) -> BigUint {
    factors.iter().fold(BigUint::one(), |acc, &(r, e)| acc * BigUint::from(r).pow(e))
}

/// `m` has been raised to every prime power outside `factors`.
fn prime_parts(m: ModMatrix, factors: &[(u64, u32)], order: &mut BigUint) {
    match factors {
        [] => {}
        [(r, e)] => {
            let r = BigUint::from(*r);
            let mut x = m;
            for _ in 0..*e {
                if x.is_identity() {
                    break;
                }
                x = x.pow(&r);
                *order *= &r;
            }
        }
        _ => {
            let (left, right) = factors.split_at(factors.len() / 2);
            prime_parts(m.pow(&prime_power_product(right)), left, order);
            prime_parts(m.pow(&prime_power_product(left)), right, order);
        }
    }
}

/// Order by repeated multiplication, giving up after `cap` steps.
pub fn matrix_order_naive(m: &ModMatrix, cap: u64) -> Option<u64> {
    let mut acc = m.clone();
    for k in 1..=cap {
        if acc.is_identity() {
            return Some(k);
        }
        acc = acc.mul(m);
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixViolation {
    pub sample: usize,
    #[serde(serialize_with = "json_number::serialize")]
    pub order: BigUint,
    pub nu_p: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixLemmaReport {
    pub p: u64,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    /// `ceil(log_p dim)`
    pub bound: u32,
    /// Count of samples by `nu_p` of their order.
    pub nu_histogram: BTreeMap<u32, usize>,
    pub violations: Vec<MatrixViolation>,
}

impl MatrixLemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Draws `samples` uniform elements of `GL_dim(p)` and checks the
/// `p`-part of each order.
pub fn matrix_order_p_part(p: u64, dim: usize, samples: usize, seed: u64) -> Result<MatrixLemmaReport, LieError> {
    if !is_prime(p) || p > u64::from(u32::MAX) {
        return Err(LieError::NotPrime(p));
    }
    if dim == 0 {
        return Err(LieError::InvalidParameter("dimension must be positive".into()));
    }
    gl_order_factors(p, dim as u32)?;
    let bound = ceil_log(p, dim as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrices: Vec<ModMatrix> = (0..samples).map(|_| ModMatrix::random_invertible(p as u32, dim, &mut rng)).collect();
    let orders = crate::par::map_slice(&matrices, |m| matrix_order(m).expect("sampled matrices are invertible"));
    let mut nu_histogram = BTreeMap::new();
    let mut violations = Vec::new();
    for (sample, order) in orders.into_iter().enumerate() {
        let nu = nu_p_big(&order, p).expect("p is prime");
        *nu_histogram.entry(nu).or_insert(0) += 1;
        if nu > bound {
            violations.push(MatrixViolation { sample, order, nu_p: nu });
        }
    }
    Ok(MatrixLemmaReport { p, dim, samples, seed, bound, nu_histogram, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_orders() {
        assert_eq!(matrix_order(&ModMatrix::identity(5, 3)).unwrap(), BigUint::one());
        let unipotent = ModMatrix::from_rows(2, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(matrix_order(&unipotent).unwrap(), BigUint::from(2u32));
        let singular = ModMatrix::from_rows(3, &[vec![1, 1], vec![1, 1]]);
        assert!(matrix_order(&singular).is_err());
    }

    #[test]
    fn gl2_2_exhaustive_against_naive_orders() {
        let mut seen = 0;
        for bits in 0u32..16 {
            let rows = vec![vec![bits & 1, (bits >> 1) & 1], vec![(bits >> 2) & 1, (bits >> 3) & 1]];
            let m = ModMatrix::from_rows(2, &rows);
            if !m.is_invertible() {
                continue;
            }
            seen += 1;
            let naive = matrix_order_naive(&m, 6).unwrap();
            assert_eq!(matrix_order(&m).unwrap(), BigUint::from(naive));
            assert!(nu_p_big(&BigUint::from(naive), 2).unwrap() <= 1);
        }
        assert_eq!(seen, 6);
    }

    #[test]
    fn random_orders_match_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, d) in [(2u32, 4usize), (3, 3), (5, 2)] {
            for _ in 0..50 {
                let m = ModMatrix::random_invertible(p, d, &mut rng);
                let naive = matrix_order_naive(&m, 100_000).unwrap();
                assert_eq!(matrix_order(&m).unwrap(), BigUint::from(naive));
            }
        }
    }

    #[test]
    fn sampled_bound() {
        let r = matrix_order_p_part(3, 4, 2000, 11).unwrap();
        assert_eq!(r.bound, 2);
        assert!(r.passed());
        assert_eq!(r.nu_histogram.values().sum::<usize>(), 2000);
        assert!(matches!(matrix_order_p_part(4, 2, 1, 0), Err(LieError::NotPrime(4))));
    }
}
