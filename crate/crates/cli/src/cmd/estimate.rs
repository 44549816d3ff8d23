use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use fswap_core::hamiltonian::TermCounts;
use fswap_core::registry::{lookup, Compound, COMPOUNDS};
use fswap_core::resources::{interaction_load, Totals};
use fswap_core::{Metric, TermKind};

use crate::input::{self, Format, OptionalSource, ThresholdArgs};
use crate::report::{cell_estimate, ByMetric, EstimateReport, EstimateRow, SCHEMA_VERSION};
use crate::Outcome;

/// Where the per-cell gate load and qubit count come from.
#[derive(clap::Args)]
pub struct SystemArgs {
    /// Registry compound (name or formula); `all` selects every entry.
    #[arg(long)]
    pub compound: Option<String>,
    #[command(flatten)]
    pub source: OptionalSource,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    /// Per-cell term count such as `Hopping=24`; repeatable.
    #[arg(long = "count", value_name = "KIND=N", conflicts_with_all = ["input", "fixture"])]
    pub counts: Vec<String>,
    /// Use the registry's interaction load instead of zero.
    #[arg(long, requires = "compound", conflicts_with_all = ["input", "fixture", "counts"])]
    pub derived_load: bool,
    /// Overrides the qubits per cell from the compound or file.
    #[arg(long)]
    pub qubits_per_cell: Option<u64>,
}

pub struct System {
    pub name: String,
    pub qubits_per_cell: u64,
    pub load: Totals,
    pub load_source: &'static str,
    pub compound: Option<&'static Compound>,
}

fn parse_count(s: &str) -> Result<(TermKind, u64)> {
    let (kind, n) = s
        .split_once('=')
        .ok_or_else(|| anyhow!("expected KIND=N, got {s:?}"))?;
    let kind = TermKind::from_name(kind.trim()).ok_or_else(|| {
        let names: Vec<&str> = TermKind::ALL.iter().map(|k| k.name()).collect();
        anyhow!("unknown term kind {kind:?} (one of {})", names.join(", "))
    })?;
    let n = n
        .trim()
        .parse()
        .map_err(|_| anyhow!("bad count in {s:?}"))?;
    Ok((kind, n))
}

fn find_compound(name: &str) -> Result<&'static Compound> {
    lookup(name).ok_or_else(|| {
        let names: Vec<&str> = COMPOUNDS.iter().map(|c| c.name).collect();
        anyhow!("unknown compound {name:?}; known: {}", names.join(", "))
    })
}

fn registry_system(c: &'static Compound, derived: bool) -> System {
    System {
        name: c.name.to_string(),
        qubits_per_cell: c.qubits_per_cell,
        load: if derived {
            c.derived_interaction_load()
        } else {
            Totals::default()
        },
        load_source: if derived { "derived" } else { "zero" },
        compound: Some(c),
    }
}

impl SystemArgs {
    pub fn resolve(&self) -> Result<Vec<System>> {
        let source = self.source.get();
        if self
            .compound
            .as_deref()
            .is_some_and(|c| c.eq_ignore_ascii_case("all"))
        {
            if source.is_some() || !self.counts.is_empty() || self.qubits_per_cell.is_some() {
                bail!("--compound all takes no other system options");
            }
            return Ok(COMPOUNDS
                .iter()
                .map(|c| registry_system(c, self.derived_load))
                .collect());
        }
        let compound = self.compound.as_deref().map(find_compound).transpose()?;
        let mut system = match compound {
            Some(c) => registry_system(c, self.derived_load),
            None => System {
                name: "custom".into(),
                qubits_per_cell: 0,
                load: Totals::default(),
                load_source: "zero",
                compound: None,
            },
        };
        if let Some(src) = source {
            let loaded = input::load(&src, self.thresholds.get()?)?;
            system.load = interaction_load(&loaded.cell.term_counts());
            system.load_source = "terms";
            if compound.is_none() {
                system.name = loaded.label;
                system.qubits_per_cell = 2 * loaded.cell.n_orbitals_per_cell as u64;
            }
        } else if !self.counts.is_empty() {
            let pairs = self
                .counts
                .iter()
                .map(|s| parse_count(s))
                .collect::<Result<Vec<_>>>()?;
            system.load = interaction_load(&TermCounts::from_pairs(pairs));
            system.load_source = "terms";
        }
        if let Some(q) = self.qubits_per_cell {
            system.qubits_per_cell = q;
        }
        if system.qubits_per_cell == 0 {
            bail!(
                "qubits per cell unknown (give --compound, --in, --fixture or --qubits-per-cell)"
            );
        }
        if system.qubits_per_cell % 2 == 1 {
            bail!(
                "qubits per cell must be even, got {}",
                system.qubits_per_cell
            );
        }
        Ok(vec![system])
    }
}

#[derive(clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Cell counts to tabulate; may be empty.
    #[arg(long, num_args = 0.., default_values_t = [100u64, 1000, 10000])]
    pub cells: Vec<u64>,
    /// Trotter steps; counts scale with it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub steps: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Report destination; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

pub fn build(args: &Args) -> Result<EstimateReport> {
    if let Some(&0) = args.cells.iter().min() {
        bail!("cell counts must be at least 1");
    }
    let rows = args
        .system
        .resolve()?
        .into_iter()
        .map(|s| EstimateRow {
            cells: args
                .cells
                .iter()
                .map(|&n| {
                    let mut e = cell_estimate(s.load, s.qubits_per_cell, n, args.steps);
                    if let (Some(c), 1) = (s.compound, args.steps) {
                        let column = [100, 1000, 10000].iter().position(|&x| x == n);
                        e.published = column.map(|k| ByMetric::from_fn(|m| c.published.get(k, m)));
                    }
                    e
                })
                .collect(),
            system: s.name,
            qubits_per_cell: s.qubits_per_cell,
            load_source: s.load_source,
            interaction_per_cell: s.load.into(),
            n_steps: args.steps,
        })
        .collect();
    Ok(EstimateReport {
        schema_version: SCHEMA_VERSION,
        command: "estimate",
        rows,
    })
}

pub fn run(args: Args) -> Result<Outcome> {
    let report = build(&args)?;
    let mut out = input::writer(args.out.as_deref())?;
    match args.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Format::Csv => write_csv(&mut out, &report, &args.cells)?,
        Format::Text => bail!("estimate reports are csv or json"),
    }
    out.flush()?;
    Ok(Outcome::Success)
}

/// One row per system, metric × cell-count columns.
fn write_csv(out: &mut impl Write, report: &EstimateReport, cells: &[u64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["system".to_string(), "qubits_per_cell".to_string()];
    for n in cells {
        for m in Metric::ALL {
            header.push(format!("{}@{n}", m.name()));
        }
    }
    w.write_record(&header)?;
    for row in &report.rows {
        let mut rec = vec![row.system.clone(), row.qubits_per_cell.to_string()];
        for e in &row.cells {
            for g in [&e.gates.one_qubit, &e.gates.cnot, &e.gates.sum] {
                rec.push(g.total.to_string());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
