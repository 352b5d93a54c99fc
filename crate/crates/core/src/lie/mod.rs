//! Exact-arithmetic checks of `p^(2 ceil(log_p d_p)) * |Out(S)| <= p^nu_p(|S|)`
//! for `S = PSL_d(p^f)`, and a random tester for the `p`-part of matrix
//! orders.

mod matrix;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{big_pow, ceil_log, gcd, is_prime, json_number};
use crate::par;

pub use matrix::{matrix_order, matrix_order_naive, matrix_order_p_part, MatrixLemmaReport, MatrixViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("PSL({d}, {q}) is not simple")]
    NotSimple { d: u32, q: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dp table line {line}: {message}")]
    DpTable { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

/// `d_p` overrides keyed by `(family, d, q)`. The built-in defaults are
/// `d_p = 2` for `d = 2` and `d_p = d` otherwise.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DpTable {
    entries: HashMap<(String, u32, u64), u64>,
}

impl DpTable {
    /// Parses lines `family d q d_p`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, LieError> {
        let mut entries = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| LieError::DpTable { line: i + 1, message: message.to_string() };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(err("expected `family d q d_p`"));
            }
            let d = fields[1].parse::<u32>().map_err(|_| err("bad d"))?;
            let q = fields[2].parse::<u64>().map_err(|_| err("bad q"))?;
            let dp = fields[3].parse::<u64>().map_err(|_| err("bad d_p"))?;
            if dp == 0 {
                return Err(err("d_p must be positive"));
            }
            entries.insert((fields[0].to_ascii_lowercase(), d, q), dp);
        }
        Ok(DpTable { entries })
    }

    pub fn load(path: &Path) -> Result<Self, LieError> {
        let text = std::fs::read_to_string(path).map_err(|e| LieError::Io(format!("{}: {e}", path.display())))?;
        DpTable::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn d_p(&self, d: u32, q: u64) -> u64 {
        self.entries
            .get(&("psl".to_string(), d, q))
            .copied()
            .unwrap_or(if d == 2 { 2 } else { u64::from(d) })
    }
}

/// Order data of `PSL_d(q)`, `q = p^f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PslParams {
    pub d: u32,
    pub p: u64,
    pub f: u32,
    pub q: u64,
    #[serde(serialize_with = "json_number::serialize")]
    pub group_order: BigUint,
    pub out_order: u64,
    pub d_p: u64,
}

impl PslParams {
    /// `nu_p(|S|) = f * d(d-1)/2`.
    pub fn nu_p_order(&self) -> u32 {
        self.f * self.d * (self.d - 1) / 2
    }
}

pub fn psl_params(d: u32, p: u64, f: u32) -> Result<PslParams, LieError> {
    psl_params_with(d, p, f, &DpTable::default())
}

pub fn psl_params_with(d: u32, p: u64, f: u32, table: &DpTable) -> Result<PslParams, LieError> {
    if !is_prime(p) {
        return Err(LieError::NotPrime(p));
    }
    if d < 2 || f < 1 {
        return Err(LieError::InvalidParameter(format!("d = {d}, f = {f}")));
    }
    let q = p
        .checked_pow(f)
        .ok_or_else(|| LieError::InvalidParameter(format!("{p}^{f} overflows")))?;
    if d == 2 && (q == 2 || q == 3) {
        return Err(LieError::NotSimple { d, q });
    }
    let qb = BigUint::from(q);
    let mut group_order = qb.pow(d * (d - 1) / 2);
    for i in 2..=d {
        group_order *= qb.pow(i) - BigUint::one();
    }
    let g = gcd(u64::from(d), q - 1);
    group_order /= BigUint::from(g);
    let out_order = g * u64::from(f) * if d >= 3 { 2 } else { 1 };
    Ok(PslParams { d, p, f, q, group_order, out_order, d_p: table.d_p(d, q) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityCheck {
    pub params: PslParams,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

impl Serialize for InequalityCheck {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record<'a> {
            d: u32,
            p: u64,
            f: u32,
            #[serde(serialize_with = "json_number::serialize")]
            lhs: &'a BigUint,
            #[serde(serialize_with = "json_number::serialize")]
            rhs: &'a BigUint,
            holds: bool,
        }
        Record { d: self.params.d, p: self.params.p, f: self.params.f, lhs: &self.lhs, rhs: &self.rhs, holds: self.holds }
            .serialize(serializer)
    }
}

pub fn check_inequality(params: &PslParams) -> InequalityCheck {
    let p = params.p;
    let lhs = big_pow(p, 2 * ceil_log(p, params.d_p)) * BigUint::from(params.out_order);
    let rhs = big_pow(p, params.nu_p_order());
    let holds = lhs <= rhs;
    InequalityCheck { params: params.clone(), lhs, rhs, holds }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanFamily {
    #[serde(rename = "psl2")]
    Psl2,
    #[serde(rename = "psld")]
    PslD,
}

impl fmt::Display for ScanFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanFamily::Psl2 => "psl2",
            ScanFamily::PslD => "psld",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub family: ScanFamily,
    pub grid: String,
    pub checks: Vec<InequalityCheck>,
    /// `(p, f)` for `psl2`, `(d, q)` for `psld`, ascending.
    pub exceptions: Vec<(u64, u64)>,
    /// Non-simple points, as `(d, q)`.
    pub skipped: Vec<(u32, u64)>,
    /// `(d, p, f)` where the inequality fails after holding at a smaller `f`.
    pub non_monotone: Vec<(u32, u64, u32)>,
}

fn prime_powers(max: u64, f_min: u32) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.checked_pow(f_min).is_some_and(|v| v <= max) {
        if is_prime(p) {
            let mut f = f_min;
            while let Some(q) = p.checked_pow(f).filter(|&q| q <= max) {
                out.push((p, f, q));
                f += 1;
            }
        }
        p += 1;
    }
    out
}

fn non_monotone(checks: &[InequalityCheck]) -> Vec<(u32, u64, u32)> {
    let mut held: HashMap<(u32, u64), u32> = HashMap::new();
    let mut out = Vec::new();
    let mut sorted: Vec<&InequalityCheck> = checks.iter().collect();
    sorted.sort_by_key(|c| (c.params.d, c.params.p, c.params.f));
    for c in sorted {
        let key = (c.params.d, c.params.p);
        if c.holds {
            held.entry(key).or_insert(c.params.f);
        } else if held.contains_key(&key) {
            out.push((c.params.d, c.params.p, c.params.f));
        }
    }
    out
}

/// All `PSL_2(p^f)` with `f >= f_min` and `p^f <= q_max`.
pub fn scan_psl2(f_min: u32, q_max: u64, table: &DpTable) -> ScanResult {
    let f_min = f_min.max(1);
    let grid = prime_powers(q_max, f_min);
    let results = par::map_slice(&grid, |&(p, f, _)| psl_params_with(2, p, f, table).map(|x| check_inequality(&x)));
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for (r, &(_, _, q)) in results.into_iter().zip(&grid) {
        match r {
            Ok(c) => checks.push(c),
            Err(_) => skipped.push((2, q)),
        }
    }
    checks.sort_by_key(|c| (c.params.p, c.params.f));
    let exceptions = checks.iter().filter(|c| !c.holds).map(|c| (c.params.p, u64::from(c.params.f))).collect();
    ScanResult {
        family: ScanFamily::Psl2,
        grid: format!("d = 2, f >= {f_min}, q <= {q_max}"),
        non_monotone: non_monotone(&checks),
        checks,
        exceptions,
        skipped,
    }
}

/// All `PSL_d(q)` with `d_min <= d <= d_max` and prime powers `q <= q_max`.
pub fn scan_psl_d(d_min: u32, d_max: u32, q_max: u64, table: &DpTable) -> ScanResult {
    let d_min = d_min.max(2);
    let powers = prime_powers(q_max, 1);
    let grid: Vec<(u32, u64, u32, u64)> =
        (d_min..=d_max).flat_map(|d| powers.iter().map(move |&(p, f, q)| (d, p, f, q))).collect();
    let results = par::map_slice(&grid, |&(d, p, f, _)| psl_params_with(d, p, f, table).map(|x| check_inequality(&x)));
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for (r, &(d, _, _, q)) in results.into_iter().zip(&grid) {
        match r {
            Ok(c) => checks.push(c),
            Err(_) => skipped.push((d, q)),
        }
    }
    checks.sort_by_key(|c| (c.params.d, c.params.q));
    skipped.sort();
    let exceptions = checks.iter().filter(|c| !c.holds).map(|c| (u64::from(c.params.d), c.params.q)).collect();
    ScanResult {
        family: ScanFamily::PslD,
        grid: format!("{d_min} <= d <= {d_max}, q <= {q_max}"),
        non_monotone: non_monotone(&checks),
        checks,
        exceptions,
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::nu_p_big;

    #[test]
    fn params_examples() {
        let s = psl_params(2, 2, 3).unwrap();
        assert_eq!((s.group_order.clone(), s.out_order), (BigUint::from(504u32), 3));
        let s = psl_params(2, 5, 3).unwrap();
        assert_eq!((s.group_order.clone(), s.out_order), (BigUint::from(125u32 * 124 * 126 / 2), 6));
        let s = psl_params(3, 2, 2).unwrap();
        assert_eq!((s.group_order.clone(), s.out_order), (BigUint::from(20160u32), 12));
        assert_eq!(psl_params(2, 2, 1).unwrap_err(), LieError::NotSimple { d: 2, q: 2 });
        assert_eq!(psl_params(2, 3, 1).unwrap_err(), LieError::NotSimple { d: 2, q: 3 });
        assert_eq!(psl_params(2, 4, 1).unwrap_err(), LieError::NotPrime(4));
        assert_eq!(psl_params(2, 5, 1).unwrap().group_order, BigUint::from(60u32));
        assert_eq!(psl_params(3, 2, 1).unwrap().group_order, BigUint::from(168u32));
    }

    #[test]
    fn inequality_examples() {
        let c = check_inequality(&psl_params(2, 2, 3).unwrap());
        assert_eq!((c.lhs.clone(), c.rhs.clone(), c.holds), (12u32.into(), 8u32.into(), false));
        let c = check_inequality(&psl_params(2, 7, 3).unwrap());
        assert_eq!((c.lhs.clone(), c.rhs.clone(), c.holds), (294u32.into(), 343u32.into(), true));
        let c = check_inequality(&psl_params(3, 2, 2).unwrap());
        assert_eq!((c.lhs.clone(), c.rhs.clone(), c.holds), (192u32.into(), 64u32.into(), false));
    }

    #[test]
    fn structural_valuation_matches_expanded_order() {
        for d in 2..=6 {
            for (p, f, _) in prime_powers(1000, 1) {
                if let Ok(s) = psl_params(d, p, f) {
                    assert_eq!(nu_p_big(&s.group_order, p).unwrap(), s.nu_p_order(), "d={d} q={}", s.q);
                }
            }
        }
    }

    #[test]
    fn small_scans() {
        let t = DpTable::default();
        assert_eq!(scan_psl2(3, 8, &t).exceptions, vec![(2, 3)]);
        let empty = scan_psl2(3, 7, &t);
        assert!(empty.checks.is_empty() && empty.exceptions.is_empty());
        assert_eq!(scan_psl_d(3, 3, 3, &t).exceptions, vec![(3, 2)]);
        let r = scan_psl_d(3, 4, 2, &t);
        assert_eq!(r.checks.len(), 2);
        assert_eq!(r.exceptions, vec![(3, 2)]);
        let small_f = scan_psl2(1, 9, &t);
        assert_eq!(small_f.skipped, vec![(2, 2), (2, 3)]);
    }

    #[test]
    fn full_scans() {
        let t = DpTable::default();
        let r = scan_psl2(3, 1_000_000, &t);
        assert_eq!(r.exceptions, vec![(2, 3), (3, 3), (5, 3)]);
        assert!(r.non_monotone.is_empty());
        let r = scan_psl_d(3, 10, 100, &t);
        assert_eq!(r.exceptions, vec![(3, 2), (3, 4)]);
        assert!(r.non_monotone.is_empty());
    }

    #[test]
    fn dp_table_overrides() {
        let t = DpTable::parse("# comment\npsl 3 4 9\n\nPSL 2 8 2 # trailing\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.d_p(3, 4), 9);
        assert_eq!(t.d_p(3, 5), 3);
        assert_eq!(t.d_p(2, 8), 2);
        let c = check_inequality(&psl_params_with(3, 2, 2, &t).unwrap());
        assert_eq!(c.lhs, BigUint::from(2u32.pow(8) * 12));
        assert!(matches!(DpTable::parse("psl 3 4"), Err(LieError::DpTable { line: 1, .. })));
        assert!(matches!(DpTable::parse("psl x 4 3"), Err(LieError::DpTable { line: 1, .. })));
    }

    #[test]
    fn json_record_shape() {
        let c = check_inequality(&psl_params(2, 2, 3).unwrap());
        let v = serde_json::to_string(&c).unwrap();
        assert_eq!(v, r#"{"d":2,"p":2,"f":3,"lhs":12,"rhs":8,"holds":false}"#);
    }
}
