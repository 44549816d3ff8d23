use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use fswap_core::circuit_file::{write_circuit, Ordering};
use fswap_core::network::{schedule_parallel, CompiledCircuit, Event};
use fswap_core::pauli::QubitLayout;
use fswap_core::resources::{error_budget, gates_from_counts, Totals};
use fswap_core::{compile_trotter_step, EffectiveHamiltonian, Metric};
use serde::Serialize;

use crate::input::{self, Format, Source, ThresholdArgs};
use crate::report::{term_counts_map, ByMetric, CompileReport, Depth, StepGates, SCHEMA_VERSION};
use crate::Outcome;

pub const DEFAULT_MAX_QUBITS: usize = 2000;

#[derive(clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    /// Supercell repetitions along each lattice vector.
    #[arg(long, num_args = 3, value_names = ["NX", "NY", "NZ"], default_values_t = [1, 1, 1])]
    pub grid: Vec<usize>,
    /// Trotter time step.
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    /// Trotter steps; counts in the report scale with it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub steps: u64,
    /// Circuit file for one step.
    #[arg(long, value_name = "FILE")]
    pub circuit: Option<PathBuf>,
    /// Emit `#layer` markers from the parallel schedule instead of per sub-step.
    #[arg(long, requires = "circuit")]
    pub layered: bool,
    /// Execution trace as JSON.
    #[arg(long, value_name = "FILE")]
    pub trace: Option<PathBuf>,
    /// Report destination; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Refuse inputs with more qubits than this.
    #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
    pub max_qubits: usize,
}

pub fn run(args: Args) -> Result<Outcome> {
    if args.format == Format::Text {
        bail!("compile reports are json or csv");
    }
    let thresholds = args.thresholds.get()?;
    let grid = input::parse_grid(&args.grid)?;
    let dt = input::check_dt(args.dt)?;
    let loaded = input::load(&args.source, thresholds)?;
    let n_qubits = loaded.cell.n_orbitals_per_cell * 2 * grid.iter().product::<usize>();
    if n_qubits > args.max_qubits {
        bail!(
            "{n_qubits} qubits exceeds the compile cap of {} (raise it with --max-qubits)",
            args.max_qubits
        );
    }
    let h = loaded.cell.replicate_supercell(grid);
    let c = compile_trotter_step(&h, dt).context("compiling")?;

    if let Some(path) = &args.circuit {
        let mut out = input::writer(Some(path))?;
        let ordering = if args.layered {
            Ordering::Layered
        } else {
            Ordering::Serial
        };
        write_circuit(&c, &mut out, ordering)
            .with_context(|| format!("writing {}", path.display()))?;
        out.flush()?;
    }
    if let Some(path) = &args.trace {
        let mut out = input::writer(Some(path))?;
        serde_json::to_writer(&mut out, &TraceFile::new(&c))?;
        writeln!(out)?;
        out.flush()?;
    }

    let report = build_report(&loaded.label, grid, args.steps, thresholds, &h, &c)?;
    let mut out = input::writer(args.report.as_deref())?;
    match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record([
                "source",
                "n_qubits",
                "n_steps",
                "one_qubit",
                "cnot",
                "sum",
                "formula_matches_measured",
            ])?;
            let t = &report.gates_total;
            w.write_record([
                report.source.clone(),
                report.n_qubits.to_string(),
                report.n_steps.to_string(),
                t.one_qubit.to_string(),
                t.cnot.to_string(),
                t.sum.to_string(),
                report.formula_matches_measured.to_string(),
            ])?;
            w.flush()?;
        }
        _ => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(if report.formula_matches_measured {
        Outcome::Success
    } else {
        Outcome::CheckFailed
    })
}

pub fn build_report(
    source: &str,
    grid: [usize; 3],
    n_steps: u64,
    thresholds: fswap_core::Thresholds,
    h: &EffectiveHamiltonian,
    c: &CompiledCircuit,
) -> Result<CompileReport> {
    let counts = h.term_counts();
    let schedule = schedule_parallel(c);
    let formula = gates_from_counts(&counts, c.n_qubits as u128)?;
    let measured = Totals::from(c.counts);
    let b = formula.breakdown;
    let gates_per_step = ByMetric::from_fn(|m| StepGates {
        measured: measured.get(m),
        formula: formula.get(m),
        fswap: b.fswap.get(m),
        hopping: b.hopping.get(m),
        coulomb: b.coulomb.get(m),
        exchange: b.exchange.get(m),
    });
    Ok(CompileReport {
        schema_version: SCHEMA_VERSION,
        command: "compile",
        source: source.to_string(),
        grid,
        dt: c.dt,
        n_steps,
        thresholds,
        n_orbitals: h.total_orbitals(),
        n_qubits: c.n_qubits,
        n_terms: h.terms.len(),
        term_counts: term_counts_map(&counts),
        n_pairswap: c.n_pairswap,
        n_fswap: c.n_fswap,
        depth: Depth {
            fswap_serial: formula.depth_serial_fswap,
            fswap_parallel: formula.depth_parallel_fswap,
            fswap_parallel_measured: schedule.fswap_depth(),
            operations_parallel: schedule.depth(),
            gates_serial: c.depth_serial,
            gates_parallel: c.depth_parallel,
        },
        gates_per_step,
        gates_total: measured.scaled(n_steps as u128).into(),
        formula_matches_measured: formula.totals() == measured
            && formula.n_pairswap == c.n_pairswap as u128,
        error_budget: error_budget(measured.get(Metric::Cnot), n_steps),
    })
}

fn layout_labels(layout: &QubitLayout) -> Vec<String> {
    layout.sequence().iter().map(|so| so.to_string()).collect()
}

#[derive(Serialize)]
struct TraceFile<'a> {
    schema_version: u32,
    n_qubits: usize,
    dt: f64,
    initial_layout: Vec<String>,
    final_layout: Vec<String>,
    events: &'a [Event],
}

impl<'a> TraceFile<'a> {
    fn new(c: &'a CompiledCircuit) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n_qubits: c.n_qubits,
            dt: c.dt,
            initial_layout: layout_labels(&c.trace.initial),
            final_layout: layout_labels(&c.final_layout),
            events: &c.trace.events,
        }
    }
}
