use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use fswap_core::reproduce::{self, CriterionResult};
use serde::Serialize;

use crate::input::{self, Format};
use crate::report::SCHEMA_VERSION;
use crate::Outcome;

#[derive(clap::Args)]
pub struct Args {
    /// Run only these criteria (ids such as `1`, `3`, `1b`).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

type Check = fn(u64) -> CriterionResult;

const CHECKS: [(&str, Check); 11] = [
    ("1", |_| reproduce::table3_fswap_only()),
    ("2", |_| reproduce::qubit_counts()),
    ("3", |s| reproduce::count_identity(s, 200)),
    ("4", |s| reproduce::network_combinatorics(s, 50)),
    ("5", |s| reproduce::unitary_correctness(s, 50)),
    ("6", |s| reproduce::decomposition_unitaries(s, 100)),
    ("7", |s| reproduce::depth_formulas(s, 25)),
    ("8", |_| reproduce::error_budgets()),
    ("9", |_| reproduce::trotter_convergence()),
    ("1b", |_| reproduce::table3_with_derived_loads()),
    ("1c", |_| reproduce::average_crossover()),
];

#[derive(Serialize)]
struct ReproduceReport<'a> {
    schema_version: u32,
    command: &'static str,
    seed: u64,
    passed: bool,
    criteria: &'a [CriterionResult],
}

pub fn run(args: Args, seed: u64) -> Result<Outcome> {
    if args.format == Format::Csv {
        bail!("reproduce reports are text or json");
    }
    for id in &args.only {
        if !CHECKS.iter().any(|(k, _)| k == id) {
            let ids: Vec<&str> = CHECKS.iter().map(|(k, _)| *k).collect();
            bail!("unknown criterion {id:?}; known: {}", ids.join(", "));
        }
    }
    let mut out = input::writer(args.out.as_deref())?;
    let mut results = Vec::new();
    for (id, check) in CHECKS {
        if !args.only.is_empty() && !args.only.iter().any(|k| k == id) {
            continue;
        }
        let r = check(seed);
        if args.format == Format::Text {
            writeln!(out, "{r}")?;
            out.flush()?;
        }
        results.push(r);
    }
    let passed = results.iter().all(|r| r.passed);
    match args.format {
        Format::Json => {
            let report = ReproduceReport {
                schema_version: SCHEMA_VERSION,
                command: "reproduce",
                seed,
                passed,
                criteria: &results,
            };
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        _ => {
            let n_pass = results.iter().filter(|r| r.passed).count();
            writeln!(
                out,
                "reproduce: {n_pass}/{} passed (seed {seed})",
                results.len()
            )?;
        }
    }
    out.flush()?;
    Ok(if passed {
        Outcome::Success
    } else {
        Outcome::CheckFailed
    })
}
