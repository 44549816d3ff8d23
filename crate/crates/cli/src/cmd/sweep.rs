use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use fswap_core::resources::crossover_cells;
use fswap_core::Metric;

use super::estimate::SystemArgs;
use crate::input::{self, Format};
use crate::report::{cell_estimate, SweepPoint, SweepReport, SCHEMA_VERSION};
use crate::Outcome;

#[derive(clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 1)]
    pub min_cells: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_cells: u64,
    /// Log-spaced points per decade.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=100))]
    pub per_decade: u32,
    /// Metric for the fswap fraction and crossover.
    #[arg(long, default_value_t = Metric::Sum)]
    pub metric: Metric,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Distinct rounded values of `10^(k/per_decade)` in `[min, max]`, with both ends.
pub fn log_grid(min: u64, max: u64, per_decade: u32) -> Vec<u64> {
    let mut out = vec![min];
    let mut k = ((min as f64).log10() * per_decade as f64).floor() as i64;
    loop {
        let n = 10f64.powf(k as f64 / per_decade as f64).round() as u64;
        if n > max {
            break;
        }
        if n > *out.last().unwrap() {
            out.push(n);
        }
        k += 1;
    }
    if *out.last().unwrap() < max {
        out.push(max);
    }
    out
}

pub fn run(args: Args) -> Result<Outcome> {
    if args.min_cells == 0 || args.min_cells > args.max_cells {
        bail!("need 1 <= --min-cells <= --max-cells");
    }
    let systems = args.system.resolve()?;
    let [s] = systems.as_slice() else {
        bail!("sweep takes a single system");
    };
    let points = log_grid(args.min_cells, args.max_cells, args.per_decade)
        .into_iter()
        .map(|n| {
            let e = cell_estimate(s.load, s.qubits_per_cell, n, 1);
            let g = &e.gates;
            let fraction = [&g.one_qubit, &g.cnot, &g.sum][args.metric.index()].fswap_fraction;
            SweepPoint {
                n_cells: n,
                n_qubits: e.n_qubits,
                one_qubit: g.one_qubit.total,
                cnot: g.cnot.total,
                sum: g.sum.total,
                fswap_fraction: fraction,
            }
        })
        .collect();
    let report = SweepReport {
        schema_version: SCHEMA_VERSION,
        command: "sweep",
        system: s.name.clone(),
        qubits_per_cell: s.qubits_per_cell,
        metric: args.metric,
        interaction_per_cell: s.load.into(),
        crossover_cells: crossover_cells(s.load, s.qubits_per_cell, args.metric),
        points,
    };
    let mut out = input::writer(args.out.as_deref())?;
    match args.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for p in &report.points {
                w.serialize(p)?;
            }
            w.flush()?;
        }
        Format::Text => bail!("sweep reports are csv or json"),
    }
    out.flush()?;
    Ok(Outcome::Success)
}

#[cfg(test)]
mod tests {
    use super::log_grid;

    #[test]
    fn grid_covers_both_ends() {
        assert_eq!(log_grid(1, 100, 2), vec![1, 3, 10, 32, 100]);
        assert_eq!(log_grid(5, 7, 1), vec![5, 7]);
        assert_eq!(log_grid(10, 10, 4), vec![10]);
    }
}
