//! Corpus driver behind the `holo` binary.
//!
//! Each `cmd_*` function returns the JSON it would print together with the
//! process exit status: [`ExitStatus::Pass`], [`ExitStatus::Violation`]
//! when a check fails, or [`ExitStatus::Usage`] for bad input.

mod cache;
mod corpus;
mod verify;

use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::affine::{frak_f, AffineError, FSummary};
use crate::autgrp::{AutConfig, AutError};
use crate::group::GroupError;
use crate::lie::{matrix_order_p_part, scan_psl2, scan_psl_d, DpTable, LieError, ScanResult};
use crate::simple::{verify_aut_orders_divide, AutOrderCheck, SimpleError};

pub use cache::{AutCache, ProfileSummary, CACHE_ENV};
pub use corpus::{standard_corpus, CorpusEntry, CorpusManifest, GroupSource, Tier};
pub use verify::{
    group_seed, verify_corpus, verify_group, Check, Checks, GroupRecord, Summary, VerificationReport, VerifyOptions,
    Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Simple(#[from] SimpleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    Violation = 1,
    Usage = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn from_pass(passed: bool) -> Self {
        if passed {
            ExitStatus::Pass
        } else {
            ExitStatus::Violation
        }
    }
}

/// JSON to print and the exit status to end with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub json: String,
    pub status: ExitStatus,
}

impl Outcome {
    fn new(value: &impl Serialize, passed: bool) -> Self {
        let mut json = serde_json::to_string_pretty(value).expect("output serializes");
        json.push('\n');
        Outcome { json, status: ExitStatus::from_pass(passed) }
    }
}

pub fn cmd_verify(manifest: &CorpusManifest, opts: &VerifyOptions, cache: &AutCache) -> Result<(VerificationReport, ExitStatus), HarnessError> {
    let report = verify_corpus(manifest, opts, cache)?;
    let status = ExitStatus::from_pass(report.summary.violations == 0);
    Ok((report, status))
}

/// `F(G)` for one group source, with its witness.
pub fn cmd_f(source: &str, config: &AutConfig, class_reps: bool, cache: &AutCache) -> Result<Outcome, HarnessError> {
    let group = GroupSource::parse(source)?.load()?;
    let aut = cache.aut_data(&group, config)?;
    let f = frak_f(&group, &aut.representatives(class_reps));
    let summary = FSummary::new(&group, &f);
    Ok(Outcome::new(&summary, summary.theorem_ok))
}

/// Parses `"(2,3),(3,3)"` into sorted pairs.
pub fn parse_expect(text: &str) -> Result<Vec<(u64, u64)>, HarnessError> {
    let bad = || HarnessError::Usage(format!("cannot parse expected set `{text}`; use \"(a,b),(c,d)\""));
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Ok(Vec::new());
    }
    let inner = cleaned.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let mut out = inner
        .split("),(")
        .map(|pair| {
            let (a, b) = pair.split_once(',').ok_or_else(bad)?;
            Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
        })
        .collect::<Result<Vec<(u64, u64)>, HarnessError>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanRequest {
    /// `PSL_2(p^f)`, `f >= f_min`, `q <= q_max`.
    Psl2 { f_min: u32, q_max: u64 },
    /// `PSL_d(q)`, `d_min <= d <= d_max`, `q <= q_max`.
    PslD { d_min: u32, d_max: u32, q_max: u64 },
}

#[derive(Serialize)]
struct ScanOutput<'a> {
    #[serde(flatten)]
    scan: &'a ScanResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<&'a [(u64, u64)]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_expected: Option<bool>,
}

pub fn cmd_scan(request: ScanRequest, dp_table: Option<&Path>, expect: Option<&[(u64, u64)]>) -> Result<Outcome, HarnessError> {
    let table = match dp_table {
        Some(p) => DpTable::load(p)?,
        None => DpTable::default(),
    };
    let scan = match request {
        ScanRequest::Psl2 { f_min, q_max } => {
            if f_min == 0 {
                return Err(HarnessError::Usage("f_min must be at least 1".into()));
            }
            scan_psl2(f_min, q_max, &table)
        }
        ScanRequest::PslD { d_min, d_max, q_max } => {
            if d_min < 2 || d_max < d_min {
                return Err(HarnessError::Usage(format!("bad dimension range {d_min}..={d_max}")));
            }
            scan_psl_d(d_min, d_max, q_max, &table)
        }
    };
    let matches_expected = expect.map(|e| e == scan.exceptions.as_slice());
    let out = ScanOutput { scan: &scan, expected: expect, matches_expected };
    Ok(Outcome::new(&out, matches_expected.unwrap_or(true)))
}

/// Named cases: `psl2_<q>` or `psl3_4`.
pub fn cmd_simple(case: &str, slow: bool) -> Result<Outcome, HarnessError> {
    let check: AutOrderCheck = if case == "psl3_4" {
        psl3_4_check()?
    } else {
        let q = case
            .strip_prefix("psl2_")
            .and_then(|q| q.parse::<u64>().ok())
            .ok_or_else(|| HarnessError::Usage(format!("unknown case `{case}`; expected psl2_<q> or psl3_4")))?;
        verify_aut_orders_divide(q, slow).map_err(|e| match e {
            SimpleError::SlowTierRequired { .. } => HarnessError::Usage(format!("{e} (pass --slow)")),
            other => other.into(),
        })?
    };
    Ok(Outcome::new(&check, check.passed))
}

#[cfg(feature = "psl3-4")]
fn psl3_4_check() -> Result<AutOrderCheck, HarnessError> {
    Ok(crate::simple::verify_psl3_4()?)
}

#[cfg(not(feature = "psl3-4"))]
fn psl3_4_check() -> Result<AutOrderCheck, HarnessError> {
    Err(HarnessError::Usage("psl3_4 needs a build with the `psl3-4` feature".into()))
}

pub fn cmd_matrix_lemma(p: u64, dim: usize, samples: usize, seed: u64) -> Result<Outcome, HarnessError> {
    let report = matrix_order_p_part(p, dim, samples, seed)?;
    Ok(Outcome::new(&report, report.passed()))
}
