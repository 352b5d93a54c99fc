//! Runs every check on every corpus group and assembles the report.

use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cache::AutCache;
use super::corpus::{CorpusManifest, Tier};
use super::HarnessError;
use crate::affine::{
    affine_order, cycle_lengths, ell_lower_bound, frak_f, lcm_decomposition, maffo, verify_lcm_div_conditions,
    CharQuotient, CsubCheck, MonotonicityCheck, RepPolicy,
};
use crate::arith::{json_number, Lcm};
use crate::autgrp::{AutConfig, AutData, Automorphism};
use crate::group::{FiniteGroup, SubgroupHandle};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Iterate one automorphism per conjugacy class where the quantity is
    /// a class function.
    pub class_reps: bool,
    /// Random `(x, alpha)` pairs for groups above `exhaustive_limit`.
    pub samples: usize,
    pub exhaustive_limit: usize,
    /// Largest order with every affine map decomposed.
    pub decomposition_limit: usize,
    /// Random affine maps decomposed per subgroup above that limit.
    pub decomposition_samples: usize,
    pub include_slow: bool,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            class_reps: false,
            samples: 10_000,
            exhaustive_limit: 24,
            decomposition_limit: 48,
            decomposition_samples: 256,
            include_slow: false,
            timings: false,
        }
    }
}

/// Enough to reproduce a failing case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub label: String,
    pub automorphism: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<usize>>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub passed: bool,
    pub cases: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Violation>,
}

impl Check {
    fn new() -> Self {
        Check { passed: true, cases: 0, failures: 0, first_violation: None }
    }

    fn record(&mut self, ok: bool, violation: impl FnOnce() -> Violation) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            self.failures += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(violation());
            }
        }
    }

    fn merge(&mut self, other: Check) {
        self.passed &= other.passed;
        self.cases += other.cases;
        self.failures += other.failures;
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
    }

    fn merged(parts: Vec<Check>) -> Check {
        parts.into_iter().fold(Check::new(), |mut acc, c| {
            acc.merge(c);
            acc
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Checks {
    /// Shift formula against cycle walks.
    pub oracle: Check,
    pub divisor: Check,
    pub lcmdiv1: Check,
    pub lcmdiv2: Check,
    pub decomposition: Check,
    pub csub: Check,
    pub monotonicity: Check,
    /// `mao(G) <= |G| - 1` for nontrivial `G`.
    pub mao_bound: Check,
    /// `mao <= maffo <= F`.
    pub order_chain: Check,
}

impl Checks {
    fn all(&self) -> [&Check; 9] {
        [
            &self.oracle,
            &self.divisor,
            &self.lcmdiv1,
            &self.lcmdiv2,
            &self.decomposition,
            &self.csub,
            &self.monotonicity,
            &self.mao_bound,
            &self.order_chain,
        ]
    }

    pub fn failed(&self) -> usize {
        self.all().iter().filter(|c| !c.passed).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupRecord {
    pub label: String,
    pub order: usize,
    pub aut_mode: &'static str,
    #[serde(serialize_with = "json_number::serialize")]
    pub aut_order: BigUint,
    #[serde(serialize_with = "json_number::serialize")]
    pub out_order: BigUint,
    pub out_exponent: u64,
    pub f_value: Lcm,
    pub f_witness: Vec<u32>,
    pub mao: u64,
    pub maffo: u64,
    pub theorem_ok: bool,
    /// Orders of the proper nontrivial characteristic subgroups.
    pub characteristic_subgroups: Vec<usize>,
    pub checks: Checks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl GroupRecord {
    pub fn violations(&self) -> usize {
        self.checks.failed() + usize::from(!self.theorem_ok)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub groups_checked: usize,
    pub violations: usize,
    /// Slow-tier labels left out of this run.
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub class_reps: bool,
    pub summary: Summary,
    pub records: Vec<GroupRecord>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// FNV-1a, for label-derived seeds that do not depend on the platform.
fn stable_hash(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3))
}

pub fn group_seed(seed: u64, label: &str) -> u64 {
    seed ^ stable_hash(label)
}

struct Ctx<'a> {
    label: &'a str,
    group: &'a FiniteGroup,
}

impl Ctx<'_> {
    fn violation(&self, alpha: &Automorphism, element: Option<usize>, subgroup: Option<&SubgroupHandle>, message: String) -> Violation {
        Violation {
            label: self.label.to_string(),
            automorphism: alpha.images().to_vec(),
            element,
            subgroup: subgroup.map(|s| s.members().to_vec()),
            message,
        }
    }

    /// Oracle equivalence and the cycle-length divisor on one pair.
    fn pair_checks(&self, x: usize, alpha: &Automorphism) -> (Check, Check) {
        let g = self.group;
        let lengths = cycle_lengths(g, x, alpha);
        let oracle: Lcm = lengths.iter().map(|&l| l as u64).collect();
        let formula = affine_order(g, x, alpha);
        let mut o = Check::new();
        o.record(oracle.to_u64() == Some(formula), || {
            self.violation(alpha, Some(x), None, format!("shift formula {formula}, cycle lcm {oracle}"))
        });
        let ell = ell_lower_bound(g, x, alpha);
        let mut d = Check::new();
        let ok = (g.order() as u64).is_multiple_of(ell) && lengths.iter().all(|&l| (l as u64).is_multiple_of(ell));
        d.record(ok, || self.violation(alpha, Some(x), None, format!("L = {ell}, cycle lengths {lengths:?}")));
        (o, d)
    }
}

/// All checks on one group.
pub fn verify_group(
    label: &str,
    group: &FiniteGroup,
    config: &AutConfig,
    opts: &VerifyOptions,
    cache: &AutCache,
) -> Result<GroupRecord, HarnessError> {
    let started = Instant::now();
    let ctx = Ctx { label, group };
    let n = group.order();
    let aut = cache.aut_data(group, config)?;
    let reps = aut.representatives(opts.class_reps);
    let f = frak_f(group, &reps);
    let maffo_value = maffo(group, &reps);
    let mao = aut.mao();
    let mut rng = ChaCha8Rng::seed_from_u64(group_seed(opts.seed, label));

    // oracle + divisor
    let (oracle, divisor) = if n <= opts.exhaustive_limit && matches!(aut, AutData::Enumerated(_)) {
        let all = aut.representatives(false);
        let parts = par::map_slice(&all, |alpha| {
            let mut o = Check::new();
            let mut d = Check::new();
            for x in group.elements() {
                let (a, b) = ctx.pair_checks(x, alpha);
                o.merge(a);
                d.merge(b);
            }
            (o, d)
        });
        let (o, d): (Vec<Check>, Vec<Check>) = parts.into_iter().unzip();
        (Check::merged(o), Check::merged(d))
    } else {
        let pairs: Vec<(usize, Automorphism)> =
            (0..opts.samples).map(|_| (rng.gen_range(0..n), aut.sample(&mut rng))).collect();
        let parts = par::map_slice(&pairs, |(x, alpha)| ctx.pair_checks(*x, alpha));
        let (o, d): (Vec<Check>, Vec<Check>) = parts.into_iter().unzip();
        (Check::merged(o), Check::merged(d))
    };

    // divisibility conditions on lcm_x ord((x, alpha))
    let lcm_report = verify_lcm_div_conditions(group, &reps, aut.out_exponent());
    let mut lcmdiv1 = Check::new();
    let mut lcmdiv2 = Check::new();
    for r in &lcm_report.records {
        let alpha = &reps[r.alpha_index];
        lcmdiv1.record(r.part1_holds, || {
            ctx.violation(alpha, None, None, format!("ord(alpha) = {} divides |G| but lcm = {}", r.alpha_order, r.lcm))
        });
        lcmdiv2.record(r.part2_failures.is_empty() && r.particular_holds, || {
            ctx.violation(alpha, None, None, format!("lcm = {}, failing primes {:?}", r.lcm, r.part2_failures))
        });
    }

    // characteristic subgroups
    let subs: Vec<SubgroupHandle> =
        aut.characteristic_subgroups(group).into_iter().filter(|s| s.is_proper_nontrivial()).collect();
    let mut decomposition = Check::new();
    let mut csub = Check::new();
    let mut monotonicity = Check::new();
    let whole = cache.profile(group, config, opts.class_reps)?;
    let identity = Automorphism::identity(n);
    for sub in &subs {
        let cq = CharQuotient::new(group, sub)?;
        let decompose = |x: usize, alpha: &Automorphism| {
            let mut c = Check::new();
            for policy in [RepPolicy::Min, RepPolicy::Max] {
                let result = lcm_decomposition(group, &cq, x, alpha, policy);
                let ok = result.as_ref().is_ok_and(|w| w.holds);
                c.record(ok, || {
                    let message = match &result {
                        Ok(w) => format!(
                            "{policy:?} representatives: ord(A) = {}, k = {}, lcm part = {}",
                            w.full_order, w.quotient_order_part, w.lcm_part
                        ),
                        Err(e) => e.to_string(),
                    };
                    ctx.violation(alpha, Some(x), Some(sub), message)
                });
            }
            c
        };
        if n <= opts.decomposition_limit && matches!(aut, AutData::Enumerated(_)) {
            let all = aut.representatives(false);
            let parts = par::map_slice(&all, |alpha| Check::merged(group.elements().map(|x| decompose(x, alpha)).collect()));
            decomposition.merge(Check::merged(parts));
        } else {
            let pairs: Vec<(usize, Automorphism)> =
                (0..opts.decomposition_samples).map(|_| (rng.gen_range(0..n), aut.sample(&mut rng))).collect();
            let parts = par::map_slice(&pairs, |(x, alpha)| decompose(*x, alpha));
            decomposition.merge(Check::merged(parts));
        }

        let sub_profile = cache.profile(&cq.sub, config, opts.class_reps)?;
        let quot_profile = cache.profile(cq.target(), config, opts.class_reps)?;
        let c = CsubCheck::from_values(
            sub.order(),
            whole.f_value.clone(),
            sub_profile.f_value.clone(),
            quot_profile.f_value.clone(),
        );
        csub.record(c.holds, || {
            ctx.violation(&identity, None, Some(sub), format!("F(G) = {}, F(N) = {}, F(G/N) = {}", c.f_group, c.f_sub, c.f_quotient))
        });
        let m = MonotonicityCheck::from_values(
            sub.order(),
            (n, mao, maffo_value),
            (quot_profile.order, quot_profile.mao, quot_profile.maffo),
        );
        monotonicity.record(m.holds(), || {
            ctx.violation(
                &identity,
                None,
                Some(sub),
                format!("mao {} / {n}, maffo {maffo_value} / {n} against quotient {:?}", mao, (quot_profile.order, quot_profile.mao, quot_profile.maffo)),
            )
        });
    }

    let mut mao_bound = Check::new();
    mao_bound.record(n == 1 || mao < n as u64, || ctx.violation(&identity, None, None, format!("mao = {mao}")));
    let mut order_chain = Check::new();
    order_chain.record(BigUint::from(mao) <= BigUint::from(maffo_value) && BigUint::from(maffo_value) <= f.value.to_big(), || {
        ctx.violation(&f.witness_auto, None, None, format!("mao = {mao}, maffo = {maffo_value}, F = {}", f.value))
    });

    Ok(GroupRecord {
        label: label.to_string(),
        order: n,
        aut_mode: aut.mode(),
        aut_order: aut.order(),
        out_order: aut.out_order(),
        out_exponent: aut.out_exponent(),
        theorem_ok: f.within_bound,
        f_value: f.value.clone(),
        f_witness: f.witness_auto.images().to_vec(),
        mao,
        maffo: maffo_value,
        characteristic_subgroups: subs.iter().map(|s| s.order()).collect(),
        checks: Checks { oracle, divisor, lcmdiv1, lcmdiv2, decomposition, csub, monotonicity, mao_bound, order_chain },
        runtime_ms: opts.timings.then(|| started.elapsed().as_millis() as u64),
    })
}

/// Verifies every entry; input problems surface before any checking starts.
pub fn verify_corpus(
    manifest: &CorpusManifest,
    opts: &VerifyOptions,
    cache: &AutCache,
) -> Result<VerificationReport, HarnessError> {
    let mut skipped = Vec::new();
    let mut groups = Vec::new();
    for entry in &manifest.entries {
        if entry.tier == Tier::Slow && !opts.include_slow {
            skipped.push(entry.label.clone());
            continue;
        }
        groups.push((entry.label.clone(), entry.source.load()?));
    }
    let results = par::map_slice(&groups, |(label, group)| verify_group(label, group, &manifest.caps, opts, cache));
    let mut records = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    records.sort_by(|a, b| a.label.cmp(&b.label));
    skipped.sort();
    let violations = records.iter().map(GroupRecord::violations).sum();
    Ok(VerificationReport {
        seed: opts.seed,
        class_reps: opts.class_reps,
        summary: Summary { groups_checked: records.len(), violations, skipped },
        records,
    })
}
