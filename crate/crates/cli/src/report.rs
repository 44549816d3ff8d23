//! Versioned report layouts. Field names and nesting are part of the output
//! contract; bump [`SCHEMA_VERSION`] when they change.

use std::collections::BTreeMap;

use fswap_core::resources::{fswap_term, gates_vs_cells_with_load, qubit_count, Totals};
use fswap_core::{Metric, TermKind, Thresholds};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// One value per metric.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ByMetric<T> {
    pub one_qubit: T,
    pub cnot: T,
    pub sum: T,
}

impl<T> ByMetric<T> {
    pub fn from_fn(mut f: impl FnMut(Metric) -> T) -> Self {
        Self {
            one_qubit: f(Metric::OneQubit),
            cnot: f(Metric::Cnot),
            sum: f(Metric::Sum),
        }
    }
}

impl From<Totals> for ByMetric<u128> {
    fn from(t: Totals) -> Self {
        Self::from_fn(|m| t.get(m))
    }
}

pub fn term_counts_map(
    counts: &fswap_core::hamiltonian::TermCounts,
) -> BTreeMap<&'static str, u64> {
    TermKind::ALL
        .iter()
        .map(|&k| (k.name(), counts.get(k)))
        .collect()
}

#[derive(Serialize)]
pub struct StepGates {
    pub measured: u128,
    pub formula: u128,
    pub fswap: u128,
    pub hopping: u128,
    pub coulomb: u128,
    pub exchange: u128,
}

#[derive(Serialize)]
pub struct Depth {
    /// fswap layers with every fswap in its own layer.
    pub fswap_serial: u128,
    /// Closed-form parallel fswap depth, `3N/2`.
    pub fswap_parallel: u128,
    pub fswap_parallel_measured: usize,
    /// Layers of whole operations (term blocks and fswaps).
    pub operations_parallel: usize,
    pub gates_serial: usize,
    pub gates_parallel: usize,
}

#[derive(Serialize)]
pub struct CompileReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub source: String,
    pub grid: [usize; 3],
    pub dt: f64,
    pub n_steps: u64,
    pub thresholds: Thresholds,
    pub n_orbitals: usize,
    pub n_qubits: usize,
    pub n_terms: usize,
    pub term_counts: BTreeMap<&'static str, u64>,
    pub n_pairswap: usize,
    pub n_fswap: usize,
    pub depth: Depth,
    pub gates_per_step: ByMetric<StepGates>,
    pub gates_total: ByMetric<u128>,
    pub formula_matches_measured: bool,
    /// Per-gate error that keeps the whole run near unit total error.
    pub error_budget: f64,
}

#[derive(Serialize)]
pub struct CellGates {
    pub total: u128,
    pub fswap: u128,
    pub interaction: u128,
    pub fswap_fraction: f64,
}

#[derive(Serialize)]
pub struct CellEstimate {
    pub n_cells: u64,
    pub n_qubits: u128,
    pub gates: ByMetric<CellGates>,
    /// Registry values for the standard cell counts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub published: Option<ByMetric<f64>>,
}

pub fn cell_estimate(
    load: Totals,
    qubits_per_cell: u64,
    n_cells: u64,
    n_steps: u64,
) -> CellEstimate {
    let steps = n_steps as u128;
    let total = gates_vs_cells_with_load(load, qubits_per_cell, n_cells).scaled(steps);
    let fswap = fswap_term(qubits_per_cell, n_cells).scaled(steps);
    CellEstimate {
        n_cells,
        n_qubits: qubit_count(qubits_per_cell, n_cells),
        gates: ByMetric::from_fn(|m| {
            let (t, f) = (total.get(m), fswap.get(m));
            CellGates {
                total: t,
                fswap: f,
                interaction: t - f,
                fswap_fraction: if t == 0 { 0.0 } else { f as f64 / t as f64 },
            }
        }),
        published: None,
    }
}

#[derive(Serialize)]
pub struct EstimateRow {
    pub system: String,
    pub qubits_per_cell: u64,
    /// `zero`, `derived` (registry) or `terms` (term counts).
    pub load_source: &'static str,
    pub interaction_per_cell: ByMetric<u128>,
    pub n_steps: u64,
    pub cells: Vec<CellEstimate>,
}

#[derive(Serialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub rows: Vec<EstimateRow>,
}

#[derive(Serialize)]
pub struct SweepPoint {
    pub n_cells: u64,
    pub n_qubits: u128,
    pub one_qubit: u128,
    pub cnot: u128,
    pub sum: u128,
    pub fswap_fraction: f64,
}

#[derive(Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub system: String,
    pub qubits_per_cell: u64,
    pub metric: Metric,
    pub interaction_per_cell: ByMetric<u128>,
    /// Smallest cell count where the fswap term is at least the interaction term.
    pub crossover_cells: u64,
    pub points: Vec<SweepPoint>,
}

#[derive(Serialize)]
pub struct CheckLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub source: String,
    pub n_qubits: usize,
    pub dt: f64,
    pub tolerance: f64,
    pub distance: f64,
    pub norm: String,
    pub passed: bool,
    pub checks: Vec<CheckLine>,
}
