//! Integer utilities: primality, factorization, p-adic valuations and an
//! lcm accumulator that never overflows.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("valuation of zero is undefined")]
    Zero,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Largest `k` with `p^k | n`.
pub fn nu_p(n: u64, p: u64) -> Result<u32, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if n == 0 {
        return Err(ArithError::Zero);
    }
    let mut n = n;
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    Ok(k)
}

pub fn nu_p_big(n: &BigUint, p: u64) -> Result<u32, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Ok(k);
        }
        n = q;
        k += 1;
    }
}

/// Smallest `k` with `base^k >= x`, by repeated multiplication.
pub fn ceil_log(base: u64, x: u64) -> u32 {
    assert!(base >= 2, "logarithm base must be at least 2");
    let mut k = 0;
    let mut power: u128 = 1;
    while power < x as u128 {
        power *= base as u128;
        k += 1;
    }
    k
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn big_pow(base: u64, exp: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Running least common multiple.
///
/// Stays in machine words while the value fits and promotes to a big
/// integer otherwise, so a verifier can represent any value it meets.
#[derive(Clone, PartialEq, Eq)]
pub enum Lcm {
    Small(u64),
    Big(BigUint),
}

impl Default for Lcm {
    fn default() -> Self {
        Lcm::Small(1)
    }
}

impl Lcm {
    pub fn one() -> Self {
        Lcm::Small(1)
    }

    pub fn push(&mut self, value: u64) {
        match self {
            Lcm::Small(acc) => {
                let g = acc.gcd(&value);
                match (*acc / g).checked_mul(value) {
                    Some(v) => *acc = v,
                    None => *self = Lcm::Big(BigUint::from(*acc).lcm(&BigUint::from(value))),
                }
            }
            Lcm::Big(acc) => *acc = acc.lcm(&BigUint::from(value)),
        }
    }

    pub fn merge(self, other: Lcm) -> Lcm {
        match (self, other) {
            (Lcm::Small(a), Lcm::Small(b)) => {
                let mut out = Lcm::Small(a);
                out.push(b);
                out
            }
            (a, b) => Lcm::Big(a.to_big().lcm(&b.to_big())),
        }
    }

    pub fn to_big(&self) -> BigUint {
        match self {
            Lcm::Small(v) => BigUint::from(*v),
            Lcm::Big(v) => v.clone(),
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Lcm::Small(v) => Some(*v),
            Lcm::Big(v) => v.to_u64(),
        }
    }

    pub fn divides(&self, n: &BigUint) -> bool {
        (n % self.to_big()).is_zero()
    }
}

impl FromIterator<u64> for Lcm {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let mut acc = Lcm::one();
        for v in iter {
            acc.push(v);
        }
        acc
    }
}

impl fmt::Display for Lcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lcm::Small(v) => write!(f, "{v}"),
            Lcm::Big(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for Lcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Lcm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        json_number::serialize(&self.to_big(), serializer)
    }
}

/// Serializes a [`BigUint`] as a bare JSON number token.
pub mod json_number {
    use num_bigint::BigUint;
    use serde::{Serialize, Serializer};
    use serde_json::value::RawValue;

    pub fn serialize<S: Serializer>(value: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(value.to_string()).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}
