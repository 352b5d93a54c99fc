//! Finite fields `GF(p^f)` with log/antilog tables.
//!
//! An element is the integer `sum c_i p^i` for the polynomial
//! `sum c_i x^i` reduced modulo the field's monic modulus.

use rand::Rng;
use thiserror::Error;

use crate::arith::is_prime;
use crate::linalg::{poly, primitive_root};

/// Largest field size with tables.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;
const ADD_TABLE_LIMIT: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible of degree {0}")]
    NotIrreducible(u32),
    #[error("field of size {0} exceeds the table limit")]
    TooLarge(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
}

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    f: u32,
    q: usize,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
    frobenius: Vec<u32>,
    square: Vec<bool>,
}

fn digits(mut v: usize, p: usize, f: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(f);
    for _ in 0..f {
        out.push((v % p) as u32);
        v /= p;
    }
    out
}

fn encode(coeffs: &[u32], p: usize) -> usize {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c as usize)
}

fn digit_add(a: usize, b: usize, p: usize, f: usize) -> usize {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..f {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Product of two elements by schoolbook multiplication mod `modulus`.
fn poly_mul(a: usize, b: usize, p: u32, modulus: &[u32]) -> usize {
    let f = modulus.len() - 1;
    let (da, db) = (digits(a, p as usize, f), digits(b, p as usize, f));
    let mut prod = vec![0u32; 2 * f];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    encode(&poly::rem(p, &prod, modulus), p as usize)
}

/// Powers of `g` until they return to 1; `None` if that takes fewer than
/// `q - 1` steps or hits 0.
fn power_cycle(g: usize, q: usize, p: u32, modulus: &[u32]) -> Option<Vec<u32>> {
    let mut exp = Vec::with_capacity(q - 1);
    let mut x = 1usize;
    for _ in 0..q - 1 {
        if x == 0 || (x == 1 && !exp.is_empty()) {
            return None;
        }
        exp.push(x as u32);
        x = poly_mul(x, g, p, modulus);
    }
    (x == 1).then_some(exp)
}

fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let f = modulus.len() - 1;
    if f == 1 {
        return true;
    }
    if modulus[0] == 0 {
        return false;
    }
    (1..=f / 2).all(|d| poly::monic_units(p, d).iter().all(|m| !poly::divides(p, m, modulus)))
}

/// `GF(p^f)`. Without a modulus the first monic polynomial (ordered by its
/// low-to-high coefficient encoding) having `x` as a primitive element is
/// used; `f = 1` always uses `x - r` for the least primitive root `r`.
pub fn make_field(p: u64, f: u32, modulus: Option<&[u32]>) -> Result<FiniteField, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if f == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q = p.checked_pow(f).filter(|&q| q <= MAX_FIELD_SIZE).ok_or(FieldError::TooLarge(p.saturating_pow(f)))?;
    let (p, q) = (p as u32, q as usize);
    let (modulus, exp) = match modulus {
        Some(m) => {
            let m: Vec<u32> = m.iter().map(|&c| c % p).collect();
            if m.len() != f as usize + 1 || m[f as usize] != 1 || !is_irreducible(p, &m) {
                return Err(FieldError::NotIrreducible(f));
            }
            let exp = (1..q)
                .find_map(|g| power_cycle(g, q, p, &m))
                .ok_or(FieldError::NotIrreducible(f))?;
            (m, exp)
        }
        None if f == 1 => {
            let r = primitive_root(u64::from(p)) as u32;
            let m = vec![(p - r) % p, 1];
            let exp = power_cycle(r as usize, q, p, &m).expect("primitive root generates");
            (m, exp)
        }
        None => poly::monic_units(p, f as usize)
            .into_iter()
            .find_map(|m| power_cycle(p as usize, q, p, &m).map(|e| (m, e)))
            .expect("primitive polynomials exist in every degree"),
    };
    Ok(FiniteField::from_tables(p, f, modulus, exp))
}

impl FiniteField {
    fn from_tables(p: u32, f: u32, modulus: Vec<u32>, exp: Vec<u32>) -> Self {
        let q = exp.len() + 1;
        let mut log = vec![u32::MAX; q];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let (pu, fu) = (p as usize, f as usize);
        let add = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; q * q];
            for a in 0..q {
                for b in 0..q {
                    t[a * q + b] = digit_add(a, b, pu, fu) as u32;
                }
            }
            t
        });
        let neg = (0..q)
            .map(|a| encode(&digits(a, pu, fu).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), pu) as u32)
            .collect();
        let generator = exp.get(1).copied().unwrap_or(1);
        let mut field = FiniteField {
            p,
            f,
            q,
            modulus,
            generator,
            exp,
            log,
            add,
            neg,
            frobenius: Vec::new(),
            square: Vec::new(),
        };
        field.frobenius = (0..q as u32).map(|x| field.pow(x, u64::from(p))).collect();
        field.square = (0..q as u32).map(|x| x == 0 || field.log[x as usize].is_multiple_of(2) || p == 2).collect();
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn size(&self) -> usize {
        self.q
    }

    /// Monic modulus, low-to-high coefficients.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A generator of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[a as usize * self.q + b as usize],
            None => digit_add(a as usize, b as usize, self.p as usize, self.f as usize) as u32,
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[s % (self.q - 1)]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize] as usize;
        Some(self.exp[(self.q - 1 - l) % (self.q - 1)])
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % (self.q as u64 - 1))) % (self.q as u64 - 1)) as usize]
    }

    /// `a^(p^i)`
    #[inline]
    pub fn frobenius(&self, a: u32, i: u32) -> u32 {
        (0..i % self.f).fold(a, |x, _| self.frobenius[x as usize])
    }

    pub fn is_square(&self, a: u32) -> bool {
        self.square[a as usize]
    }

    /// `g^i` for the table generator.
    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.q as u64 - 1)) as usize]
    }

    pub fn random(&self, rng: &mut impl Rng) -> u32 {
        rng.gen_range(0..self.q as u32)
    }

    /// Checks the field axioms on all triples (`exhaustive`) or on
    /// `samples` random ones. Returns the first failing triple.
    pub fn check_axioms(&self, exhaustive: bool, samples: usize, rng: &mut impl Rng) -> Option<(u32, u32, u32)> {
        let check = |a: u32, b: u32, c: u32| {
            let ok = self.add(a, b) == self.add(b, a)
                && self.mul(a, b) == self.mul(b, a)
                && self.add(self.add(a, b), c) == self.add(a, self.add(b, c))
                && self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                && self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c))
                && self.add(a, self.neg(a)) == 0
                && self.add(a, 0) == a
                && self.mul(a, 1) == a
                && (a == 0 || self.mul(a, self.inv(a).unwrap()) == 1)
                && self.mul(a, b) as usize == poly_mul(a as usize, b as usize, self.p, &self.modulus);
            (!ok).then_some((a, b, c))
        };
        if exhaustive {
            let q = self.q as u32;
            (0..q).find_map(|a| (0..q).find_map(|b| (0..q).find_map(|c| check(a, b, c))))
        } else {
            (0..samples).find_map(|_| check(self.random(rng), self.random(rng), self.random(rng)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn multiplicative_order(k: &FiniteField, a: u32) -> u64 {
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = k.mul(x, a);
            n += 1;
        }
        n
    }

    #[test]
    fn gf8_unit_group_is_cyclic() {
        let k = make_field(2, 3, None).unwrap();
        assert_eq!(k.size(), 8);
        assert!(k.elements().skip(1).any(|a| multiplicative_order(&k, a) == 7));
        assert_eq!(multiplicative_order(&k, k.generator()), 7);
    }

    #[test]
    fn frobenius_has_order_f() {
        for (p, f) in [(3u64, 3u32), (2, 4), (5, 2), (5, 3), (7, 1)] {
            let k = make_field(p, f, None).unwrap();
            assert!(k.elements().all(|a| k.frobenius(a, f) == a));
            for i in 1..f {
                assert!(k.elements().any(|a| k.frobenius(a, i) != a));
            }
            for a in k.elements() {
                for b in k.elements() {
                    assert_eq!(k.frobenius(k.mul(a, b), 1), k.mul(k.frobenius(a, 1), k.frobenius(b, 1)));
                    assert_eq!(k.frobenius(k.add(a, b), 1), k.add(k.frobenius(a, 1), k.frobenius(b, 1)));
                }
            }
        }
    }

    #[test]
    fn axioms_exhaustive_up_to_64() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (p, f) in [(2u64, 1u32), (2, 2), (3, 1), (2, 3), (3, 2), (2, 4), (5, 2), (2, 5), (3, 3), (2, 6), (7, 2)] {
            let k = make_field(p, f, None).unwrap();
            assert_eq!(k.check_axioms(true, 0, &mut rng), None, "GF({p}^{f})");
        }
        for (p, f) in [(5u64, 3u32), (2, 14), (101, 2)] {
            let k = make_field(p, f, None).unwrap();
            assert_eq!(k.check_axioms(false, 5000, &mut rng), None, "GF({p}^{f})");
        }
    }

    #[test]
    fn explicit_moduli() {
        // x^2 + 1 is irreducible over GF(3); x is not primitive for it
        let k = make_field(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(multiplicative_order(&k, k.generator()), 8);
        assert_eq!(make_field(2, 2, Some(&[1, 0, 1])).unwrap_err(), FieldError::NotIrreducible(2));
        assert_eq!(make_field(2, 3, Some(&[0, 1, 0, 1])).unwrap_err(), FieldError::NotIrreducible(3));
        assert_eq!(make_field(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field(2, 17, None).unwrap_err(), FieldError::TooLarge(1 << 17));
    }

    #[test]
    fn squares() {
        let k = make_field(3, 3, None).unwrap();
        let count = k.elements().filter(|&a| a != 0 && k.is_square(a)).count();
        assert_eq!(count, 13);
        for a in k.elements() {
            assert!(k.is_square(k.mul(a, a)));
        }
        let k = make_field(2, 3, None).unwrap();
        assert!(k.elements().all(|a| k.is_square(a)));
    }
}
