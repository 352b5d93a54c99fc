//! Dense matrices and polynomials over a prime field `Z/p`.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

/// Square matrix over `Z/p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    p: u32,
    dim: usize,
    entries: Vec<u32>,
}

impl ModMatrix {
    pub fn identity(p: u32, dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        ModMatrix { p, dim, entries }
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let dim = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), dim, "matrix must be square");
                r.iter().map(move |&x| x % p)
            })
            .collect();
        ModMatrix { p, dim, entries }
    }

    pub fn random(p: u32, dim: usize, rng: &mut impl Rng) -> Self {
        let entries = (0..dim * dim).map(|_| rng.gen_range(0..p)).collect();
        ModMatrix { p, dim, entries }
    }

    /// Uniform element of `GL_dim(p)` by rejection sampling.
    pub fn random_invertible(p: u32, dim: usize, rng: &mut impl Rng) -> Self {
        loop {
            let m = ModMatrix::random(p, dim, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u32) {
        self.entries[row * self.dim + col] = value % self.p;
    }

    pub fn is_identity(&self) -> bool {
        *self == ModMatrix::identity(self.p, self.dim)
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        let n = self.dim;
        let p = self.p as u64;
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc += self.entries[i * n + k] as u64 * other.entries[k * n + j] as u64;
                }
                entries[i * n + j] = (acc % p) as u32;
            }
        }
        ModMatrix { p: self.p, dim: n, entries }
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                let acc: u64 = (0..n).map(|k| self.entries[i * n + k] as u64 * v[k] as u64).sum();
                (acc % self.p as u64) as u32
            })
            .collect()
    }

    pub fn pow(&self, exp: &BigUint) -> ModMatrix {
        let mut acc = ModMatrix::identity(self.p, self.dim);
        let bits = exp.bits();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc);
            if exp.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let n = self.dim;
        let p = self.p as u64;
        let mut m: Vec<u64> = self.entries.iter().map(|&x| x as u64).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| m[r * n + col] != 0) else {
                continue;
            };
            for c in 0..n {
                m.swap(rank * n + c, pivot * n + c);
            }
            let inv = mod_inverse(m[rank * n + col], p);
            for r in 0..n {
                if r != rank && m[r * n + col] != 0 {
                    let factor = m[r * n + col] * inv % p;
                    for c in 0..n {
                        m[r * n + c] = (m[r * n + c] + p * p - factor * m[rank * n + c] % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim
    }

    /// Companion matrix of a monic polynomial (coefficients low to high).
    pub fn companion(p: u32, poly: &[u32]) -> ModMatrix {
        let d = poly.len() - 1;
        let mut m = ModMatrix { p, dim: d, entries: vec![0; d * d] };
        for i in 1..d {
            m.entries[i * d + (i - 1)] = 1;
        }
        for (i, &c) in poly[..d].iter().enumerate() {
            m.entries[i * d + (d - 1)] = (p - c % p) % p;
        }
        m
    }

    /// Block-diagonal matrix with the given blocks in order.
    pub fn block_diagonal(p: u32, blocks: &[ModMatrix]) -> ModMatrix {
        let dim = blocks.iter().map(|b| b.dim).sum();
        let mut m = ModMatrix { p, dim, entries: vec![0; dim * dim] };
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    m.entries[(offset + i) * dim + offset + j] = b.get(i, j);
                }
            }
            offset += b.dim;
        }
        m
    }
}

pub fn mod_inverse(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Smallest generator of `(Z/p)^*`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = crate::arith::prime_divisors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .expect("prime modulus has a primitive root")
}

/// `|GL_dim(p)| = prod_{i<dim} (p^dim - p^i)`.
pub fn general_linear_order(p: u64, dim: u32) -> BigUint {
    let p = BigUint::from(p);
    let top = num_traits::pow(p.clone(), dim as usize);
    (0..dim).fold(BigUint::one(), |acc, i| acc * (&top - num_traits::pow(p.clone(), i as usize)))
}

/// Monic polynomials over `Z/p`, coefficients low to high.
pub mod poly {
    /// Remainder of `a` modulo monic `b`.
    pub fn rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut r: Vec<u32> = a.to_vec();
        let db = b.len() - 1;
        while r.len() > db {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - db;
            if lead != 0 {
                for (i, &c) in b.iter().enumerate() {
                    let idx = shift + i;
                    r[idx] = (r[idx] + p - (lead as u64 * c as u64 % p as u64) as u32) % p;
                }
            }
            r.pop();
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        r
    }

    pub fn divides(p: u32, divisor: &[u32], a: &[u32]) -> bool {
        rem(p, a, divisor).is_empty()
    }

    /// All monic polynomials of degree `d` with nonzero constant term.
    pub fn monic_units(p: u32, d: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let count = (p as usize).pow(d as u32);
        for code in 0..count {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                coeffs.push((c % p as usize) as u32);
                c /= p as usize;
            }
            coeffs.push(1);
            if coeffs[0] != 0 {
                out.push(coeffs);
            }
        }
        out
    }

    pub fn degree(a: &[u32]) -> usize {
        a.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gl_orders() {
        assert_eq!(general_linear_order(2, 2), BigUint::from(6u32));
        assert_eq!(general_linear_order(2, 3), BigUint::from(168u32));
        assert_eq!(general_linear_order(3, 2), BigUint::from(48u32));
        assert_eq!(general_linear_order(2, 6), BigUint::from(20_158_709_760u64));
    }

    #[test]
    fn rank_and_power() {
        let m = ModMatrix::from_rows(2, &[vec![1, 1], vec![0, 1]]);
        assert!(m.is_invertible());
        assert!(m.pow(&BigUint::from(2u32)).is_identity());
        let singular = ModMatrix::from_rows(3, &[vec![1, 2], vec![2, 1]]);
        assert_eq!(singular.rank(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert!(ModMatrix::random_invertible(5, 4, &mut rng).is_invertible());
        }
    }

    #[test]
    fn companion_has_its_polynomial_as_minimal() {
        // x^2 + x + 1 over Z/2 has order 3 companion
        let c = ModMatrix::companion(2, &[1, 1, 1]);
        assert!(!c.is_identity());
        assert!(c.pow(&BigUint::from(3u32)).is_identity());
    }

    #[test]
    fn polynomial_division() {
        // (x+1)^2 = x^2 + 1 over Z/2
        assert!(poly::divides(2, &[1, 1], &[1, 0, 1]));
        assert!(!poly::divides(2, &[1, 1], &[1, 1, 1]));
        assert_eq!(poly::monic_units(2, 2).len(), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(2), 1);
    }
}
