//! Built-in group families with fixed element numbering.
//!
//! * `cyclic:n`: index `i` is `g^i`.
//! * `dihedral:n`: order `2n`; index `i + n*j` is `r^i s^j`.
//! * `quaternion:2^k`: index `i + m*j` is `a^i b^j` with `m = 2^(k-1)`.
//! * `elementary_abelian:p:k`: index `sum c_i p^i` is the vector `(c_i)`.
//! * `symmetric:n`, `alternating:n`: breadth-first closure of standard
//!   generators acting on `0..n`.
//! * `A*B`: direct product, index `a * |B| + b`.

use std::fmt;
use std::str::FromStr;

use super::{FiniteGroup, GroupError, TABLE_LIMIT};
use crate::arith::is_prime;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    /// Generalized quaternion group of the given order `2^k`, `3 <= k <= 5`.
    Quaternion(usize),
    ElementaryAbelian { p: usize, k: u32 },
    Product(Vec<FamilySpec>),
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            FamilySpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            FamilySpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            FamilySpec::Alternating(n) => write!(f, "alternating:{n}"),
            FamilySpec::Quaternion(n) => write!(f, "quaternion:{n}"),
            FamilySpec::ElementaryAbelian { p, k } => write!(f, "elementary_abelian:{p}:{k}"),
            FamilySpec::Product(parts) => {
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{part}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.contains('*') {
            let parts = s
                .split('*')
                .map(str::parse)
                .collect::<Result<Vec<FamilySpec>, _>>()?;
            return Ok(FamilySpec::Product(parts));
        }
        let mut fields = s.split(':');
        let name = fields.next().unwrap_or_default();
        let args: Vec<&str> = fields.collect();
        let num = |i: usize| -> Result<usize, GroupError> {
            args.get(i)
                .ok_or_else(|| GroupError::ParameterOutOfRange(format!("`{s}` is missing parameter {}", i + 1)))?
                .parse::<usize>()
                .map_err(|_| GroupError::ParameterOutOfRange(format!("`{s}`: parameter {} is not a number", i + 1)))
        };
        let arity = |want: usize| -> Result<(), GroupError> {
            if args.len() == want {
                Ok(())
            } else {
                Err(GroupError::ParameterOutOfRange(format!("`{s}` takes {want} parameter(s)")))
            }
        };
        match name {
            "cyclic" => arity(1).and(num(0).map(FamilySpec::Cyclic)),
            "dihedral" => arity(1).and(num(0).map(FamilySpec::Dihedral)),
            "symmetric" => arity(1).and(num(0).map(FamilySpec::Symmetric)),
            "alternating" => arity(1).and(num(0).map(FamilySpec::Alternating)),
            "quaternion" => arity(1).and(num(0).map(FamilySpec::Quaternion)),
            "elementary_abelian" => {
                arity(2)?;
                Ok(FamilySpec::ElementaryAbelian { p: num(0)?, k: num(1)? as u32 })
            }
            other => Err(GroupError::UnknownFamily(other.to_string())),
        }
    }
}

fn out_of_range(msg: impl Into<String>) -> GroupError {
    GroupError::ParameterOutOfRange(msg.into())
}

/// Constructs the named group.
pub fn builtin_group(spec: &FamilySpec) -> Result<FiniteGroup, GroupError> {
    let group = match spec {
        FamilySpec::Cyclic(n) => {
            let n = *n;
            if n == 0 || n > TABLE_LIMIT {
                return Err(out_of_range(format!("cyclic order {n} not in 1..={TABLE_LIMIT}")));
            }
            table_group(n, |a, b| (a + b) % n)
        }
        FamilySpec::Dihedral(n) => {
            let n = *n;
            if n == 0 || 2 * n > TABLE_LIMIT {
                return Err(out_of_range(format!("dihedral parameter {n} not in 1..={}", TABLE_LIMIT / 2)));
            }
            table_group(2 * n, |a, b| {
                let (i, j) = (a % n, a / n);
                let (k, l) = (b % n, b / n);
                let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
                rot + n * ((j + l) % 2)
            })
        }
        FamilySpec::Quaternion(order) => {
            let order = *order;
            if !order.is_power_of_two() || !(8..=32).contains(&order) {
                return Err(out_of_range(format!("quaternion order {order} must be 8, 16 or 32")));
            }
            let m = order / 2; // order of a
            let half = m / 2; // b^2 = a^half
            table_group(order, |x, y| {
                let (i, j) = (x % m, x / m);
                let (c, d) = (y % m, y / m);
                if j == 0 {
                    (i + c) % m + m * d
                } else if d == 0 {
                    (i + m - c) % m + m
                } else {
                    (i + m - c + half) % m
                }
            })
        }
        FamilySpec::ElementaryAbelian { p, k } => {
            let (p, k) = (*p, *k);
            if !is_prime(p as u64) {
                return Err(out_of_range(format!("{p} is not prime")));
            }
            let n = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
            if k == 0 || n > TABLE_LIMIT as u128 {
                return Err(out_of_range(format!("elementary abelian {p}^{k} not in range")));
            }
            let n = n as usize;
            table_group(n, |a, b| {
                let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
                for _ in 0..k {
                    out += ((a % p + b % p) % p) * place;
                    a /= p;
                    b /= p;
                    place *= p;
                }
                out
            })
        }
        FamilySpec::Symmetric(n) => {
            let n = *n;
            if n == 0 || n > 6 {
                return Err(out_of_range(format!("symmetric degree {n} not in 1..=6")));
            }
            let mut gens = Vec::new();
            if n >= 2 {
                gens.push(Permutation::from_cycles(n, &[&[0, 1]])?);
                let cycle: Vec<usize> = (0..n).collect();
                gens.push(Permutation::from_cycles(n, &[&cycle])?);
            }
            FiniteGroup::from_permutation_generators(n, &gens)?
        }
        FamilySpec::Alternating(n) => {
            let n = *n;
            if n == 0 || n > 6 {
                return Err(out_of_range(format!("alternating degree {n} not in 1..=6")));
            }
            let gens = (0..n.saturating_sub(2))
                .map(|i| Permutation::from_cycles(n, &[&[i, i + 1, i + 2]]))
                .collect::<Result<Vec<_>, _>>()?;
            FiniteGroup::from_permutation_generators(n, &gens)?
        }
        FamilySpec::Product(parts) => {
            let mut iter = parts.iter();
            let first = iter.next().ok_or_else(|| out_of_range("empty product"))?;
            let mut acc = builtin_group(first)?;
            for part in iter {
                acc = FiniteGroup::direct_product(&acc, &builtin_group(part)?)?;
            }
            acc
        }
    };
    Ok(group.with_label(spec.to_string()))
}

fn table_group(n: usize, op: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = op(a, b) as u32;
        }
    }
    FiniteGroup::from_flat_table_unchecked(String::new(), n, table)
}
