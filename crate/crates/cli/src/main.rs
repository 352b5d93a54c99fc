//! `holo`: verify the affine-order bound over a group corpus, and run the
//! scans and simple-group checks that back it.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use holo_core::autgrp::{AutConfig, DEFAULT_AUT_GROUP_CAP, DEFAULT_MAX_AUTOMORPHISMS};
use holo_core::harness::{
    cmd_f, cmd_matrix_lemma, cmd_scan, cmd_simple, cmd_verify, parse_expect, standard_corpus, AutCache,
    CorpusManifest, ExitStatus, HarnessError, Outcome, ScanRequest, VerifyOptions,
};
use holo_core::par::with_jobs;

#[derive(Parser)]
#[command(name = "holo", version, about = "Affine-map order checks for finite groups")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Caps {
    /// Largest group whose automorphisms are enumerated.
    #[arg(long, default_value_t = DEFAULT_AUT_GROUP_CAP)]
    max_order: usize,
    /// Largest automorphism group listed element by element.
    #[arg(long, default_value_t = DEFAULT_MAX_AUTOMORPHISMS)]
    max_automorphisms: usize,
}

impl Caps {
    fn config(self) -> AutConfig {
        AutConfig { max_group_order: self.max_order, max_automorphisms: self.max_automorphisms }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on a corpus and write a JSON report.
    Verify {
        /// TOML corpus manifest.
        #[arg(long, conflicts_with = "standard")]
        corpus: Option<PathBuf>,
        /// The built-in standard corpus.
        #[arg(long)]
        standard: bool,
        /// Extra group sources (`builtin:cyclic:12`, `x.ctab`, `y.pgrp`).
        #[arg(long = "group", value_name = "SOURCE")]
        groups: Vec<String>,
        /// Report path; standard output when absent.
        #[arg(long = "report")]
        report_path: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include slow-tier manifest entries.
        #[arg(long)]
        slow: bool,
        /// Iterate conjugacy-class representatives of Aut(G) only.
        #[arg(long)]
        class_reps: bool,
        /// Random (x, alpha) pairs for groups too large to check exhaustively.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Record per-group wall-clock time (makes reports run-dependent).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Compute F(G) for one group.
    F {
        source: String,
        #[arg(long)]
        class_reps: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Scan PSL parameters for the defining-characteristic inequality.
    Scan {
        family: Family,
        #[arg(long)]
        q_max: u64,
        /// Smallest f for psl2.
        #[arg(long, default_value_t = 3)]
        f_min: u32,
        /// Also list psl2 with f <= 2 (informational).
        #[arg(long)]
        include_small_f: bool,
        #[arg(long, default_value_t = 3)]
        d_min: u32,
        #[arg(long, default_value_t = 10)]
        d_max: u32,
        /// Override file with lines `family d q d_p`.
        #[arg(long)]
        dp_table: Option<PathBuf>,
        /// Expected exception set, e.g. "(2,3),(3,3)".
        #[arg(long)]
        expect: Option<String>,
    },
    /// Check that all automorphism orders of a simple group divide its order.
    Simple {
        /// psl2_<q> or psl3_4.
        #[arg(long)]
        case: String,
        /// Allow the slow tier.
        #[arg(long)]
        slow: bool,
    },
    /// Random check of nu_p(ord A) <= ceil(log_p d) over GL_d(p).
    MatrixLemma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Psl2,
    Psld,
}

fn emit(outcome: Outcome) -> ExitStatus {
    print!("{}", outcome.json);
    outcome.status
}

fn run(command: Command) -> Result<ExitStatus, HarnessError> {
    match command {
        Command::Verify { corpus, standard, groups, report_path, seed, slow, class_reps, samples, timings, caps } => {
            let mut manifest = match (&corpus, standard) {
                (Some(path), _) => Some(CorpusManifest::load(path)?),
                (None, true) => Some(CorpusManifest { caps: caps.config(), ..standard_corpus() }),
                (None, false) => None,
            };
            if !groups.is_empty() {
                let extra = CorpusManifest::from_sources(&groups, caps.config())?;
                manifest = Some(match manifest {
                    Some(m) => CorpusManifest::new(m.entries.into_iter().chain(extra.entries).collect(), m.caps)?,
                    None => extra,
                });
            }
            let manifest =
                manifest.ok_or_else(|| HarnessError::Usage("give --corpus, --standard or --group".into()))?;
            let opts = VerifyOptions { seed, class_reps, samples, include_slow: slow, timings, ..VerifyOptions::default() };
            let (report, status) = cmd_verify(&manifest, &opts, &AutCache::from_env())?;
            let json = report.to_json();
            match report_path {
                Some(path) => {
                    fs::write(&path, json).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))?;
                    println!(
                        "{} groups checked, {} violations, {} skipped; report written to {}",
                        report.summary.groups_checked,
                        report.summary.violations,
                        report.summary.skipped.len(),
                        path.display()
                    );
                    for r in report.records.iter().filter(|r| r.violations() > 0) {
                        println!("  {}: {} failed checks", r.label, r.violations());
                    }
                }
                None => print!("{json}"),
            }
            Ok(status)
        }
        Command::F { source, class_reps, caps } => Ok(emit(cmd_f(&source, &caps.config(), class_reps, &AutCache::from_env())?)),
        Command::Scan { family, q_max, f_min, include_small_f, d_min, d_max, dp_table, expect } => {
            let expect = expect.as_deref().map(parse_expect).transpose()?;
            let request = match family {
                Family::Psl2 => ScanRequest::Psl2 { f_min: if include_small_f { 1 } else { f_min }, q_max },
                Family::Psld => ScanRequest::PslD { d_min, d_max, q_max },
            };
            Ok(emit(cmd_scan(request, dp_table.as_deref(), expect.as_deref())?))
        }
        Command::Simple { case, slow } => Ok(emit(cmd_simple(&case, slow)?)),
        Command::MatrixLemma { p, d, samples, seed } => Ok(emit(cmd_matrix_lemma(p, d, samples, seed)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = with_jobs(cli.jobs, || run(cli.command)).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitStatus::Usage
    });
    ExitCode::from(status.code() as u8)
}
