use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use fswap_core::compile_trotter_step;
use fswap_core::gates::{Gate, GateCounts};
use fswap_core::network::verify_coverage;
use fswap_core::oracle::{
    equivalence_check, gates_unitary, probe_distance, ReferenceProgram, StateVector,
    MAX_REFERENCE_QUBITS, MAX_SPECTRAL_QUBITS,
};
use fswap_core::resources::{gates_from_counts, Totals};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::input::{self, Format, Source, ThresholdArgs};
use crate::report::{CheckLine, VerifyReport, SCHEMA_VERSION};
use crate::Outcome;

#[derive(clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    #[arg(long, num_args = 3, value_names = ["NX", "NY", "NZ"], default_values_t = [1, 1, 1])]
    pub grid: Vec<usize>,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    /// Largest accepted distance between circuit and reference.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Add this to the first rotation angle of the circuit before checking.
    #[arg(long, value_name = "DELTA", allow_negative_numbers = true)]
    pub perturb: Option<f64>,
    /// Random probe states used above the dense-matrix size.
    #[arg(long, default_value_t = 4)]
    pub probes: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn perturb(gates: &mut [Gate], delta: f64) -> Result<()> {
    for g in gates.iter_mut() {
        match g {
            Gate::Rz(_, t) | Gate::Rx(_, t) | Gate::T(_, t) => {
                *t += delta;
                return Ok(());
            }
            _ => {}
        }
    }
    bail!("circuit has no rotation angle to perturb")
}

pub fn run(args: Args, seed: u64) -> Result<Outcome> {
    if args.format == Format::Csv {
        bail!("verify reports are text or json");
    }
    let grid = input::parse_grid(&args.grid)?;
    let dt = input::check_dt(args.dt)?;
    let loaded = input::load(&args.source, args.thresholds.get()?)?;
    let n_qubits = loaded.cell.n_orbitals_per_cell * 2 * grid.iter().product::<usize>();
    if n_qubits > MAX_REFERENCE_QUBITS {
        bail!("refusing to verify {n_qubits} qubits: the exact reference is limited to {MAX_REFERENCE_QUBITS}");
    }
    let h = loaded.cell.replicate_supercell(grid);
    let c = compile_trotter_step(&h, dt)?;
    let mut gates: Vec<Gate> = c.gates().map(|op| op.gate).collect();
    if let Some(delta) = args.perturb {
        perturb(&mut gates, delta)?;
    }

    let reference = ReferenceProgram::from_trace(&c.trace, &h, dt)?;
    let (distance, norm) = if n_qubits <= MAX_SPECTRAL_QUBITS {
        (
            equivalence_check(&gates_unitary(&gates, n_qubits)?, &reference.unitary()?)?.distance,
            "spectral",
        )
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = probe_distance(
            n_qubits,
            args.probes.max(1),
            &mut rng,
            |s: &mut StateVector| s.apply_gates(gates.iter()),
            |s| reference.apply(s),
        )?;
        (d, "probe")
    };

    let coverage = verify_coverage(&c.trace, &h);
    let formula = gates_from_counts(&h.term_counts(), n_qubits as u128)?;
    let measured = GateCounts::of(gates.iter());
    let checks = vec![
        CheckLine {
            name: "equivalence",
            passed: distance <= args.tolerance,
            detail: format!(
                "distance {distance:.3e} ({norm}), tolerance {:.0e}",
                args.tolerance
            ),
        },
        CheckLine {
            name: "coverage",
            passed: coverage.missing.is_empty()
                && coverage.repeated.is_empty()
                && coverage.window_violations.is_empty()
                && coverage.fswap_count == coverage.expected_fswap_count,
            detail: format!(
                "{} terms, missing {:?}, repeated {:?}, outside window {:?}, {} of {} fswaps",
                h.terms.len(),
                coverage.missing,
                coverage.repeated,
                coverage.window_violations,
                coverage.fswap_count,
                coverage.expected_fswap_count
            ),
        },
        CheckLine {
            name: "reversal",
            passed: coverage.reversed,
            detail: format!(
                "final orbital order {:?}",
                c.final_layout.orbital_sequence()
            ),
        },
        CheckLine {
            name: "count_identity",
            passed: Totals::from(measured) == formula.totals(),
            detail: format!(
                "measured {}/{} one-qubit/CNOT, formula {}/{}",
                measured.one_qubit, measured.cnot, formula.n_one_qubit, formula.n_cnot
            ),
        },
    ];
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        source: loaded.label,
        n_qubits,
        dt,
        tolerance: args.tolerance,
        distance,
        norm: norm.into(),
        passed,
        checks,
    };

    let mut out = input::writer(args.out.as_deref())?;
    if args.format == Format::Json {
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        for c in &report.checks {
            writeln!(
                out,
                "{:<15} {}  {}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            )?;
        }
        let verdict = if passed { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "verify: {verdict} ({}, {} qubits)",
            report.source, n_qubits
        )?;
    }
    out.flush()?;
    Ok(if passed {
        Outcome::Success
    } else {
        Outcome::CheckFailed
    })
}
