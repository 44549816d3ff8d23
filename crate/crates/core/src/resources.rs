//! Closed-form gate accounting for one Trotter step.
//!
//! `N_gates = Σ_kind count·cost + C(N/2, 2)·4·c_fswap` for `N` qubits, and per
//! supercell of `n` cells with `q` qubits each
//! `N_gates[n] = (Σ per-cell)·n + ½(q²n² − 2qn)·c_fswap`.
//! All counts are exact integers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::gates::{gate_cost, GateCounts, FSWAP_COST};
use crate::hamiltonian::{TermClass, TermCounts, TermKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    OneQubit,
    Cnot,
    Sum,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::OneQubit, Metric::Cnot, Metric::Sum];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::OneQubit => "one_qubit",
            Metric::Cnot => "cnot",
            Metric::Sum => "sum",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "one_qubit" | "one-qubit" | "1q" => Ok(Metric::OneQubit),
            "cnot" => Ok(Metric::Cnot),
            "sum" => Ok(Metric::Sum),
            _ => Err(format!("unknown metric {s:?} (one_qubit, cnot, sum)")),
        }
    }
}

/// Gate totals per metric. `sum` is normally `one_qubit + cnot`; loads
/// recovered from rounded published values may carry an independent sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub one_qubit: u128,
    pub cnot: u128,
    pub sum: u128,
}

impl Totals {
    pub const fn new(one_qubit: u128, cnot: u128) -> Self {
        Self {
            one_qubit,
            cnot,
            sum: one_qubit + cnot,
        }
    }

    pub const fn per_metric(one_qubit: u128, cnot: u128, sum: u128) -> Self {
        Self {
            one_qubit,
            cnot,
            sum,
        }
    }

    pub fn get(&self, m: Metric) -> u128 {
        match m {
            Metric::OneQubit => self.one_qubit,
            Metric::Cnot => self.cnot,
            Metric::Sum => self.sum,
        }
    }

    pub fn scaled(&self, n: u128) -> Self {
        Self::per_metric(self.one_qubit * n, self.cnot * n, self.sum * n)
    }

    pub fn is_zero(&self) -> bool {
        self.one_qubit == 0 && self.cnot == 0 && self.sum == 0
    }
}

impl From<GateCounts> for Totals {
    fn from(c: GateCounts) -> Self {
        Totals::new(c.one_qubit as u128, c.cnot as u128)
    }
}

impl std::ops::Add for Totals {
    type Output = Totals;
    fn add(self, o: Totals) -> Totals {
        Totals::per_metric(
            self.one_qubit + o.one_qubit,
            self.cnot + o.cnot,
            self.sum + o.sum,
        )
    }
}

impl std::ops::AddAssign for Totals {
    fn add_assign(&mut self, o: Totals) {
        *self = *self + o;
    }
}

pub fn fswap_cost() -> Totals {
    FSWAP_COST.into()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResourceError {
    #[error("qubit count must be even, got {0}")]
    OddQubitCount(u128),
    #[error("need at least {min} qubits, got {got}")]
    TooFewQubits { got: u128, min: u128 },
    #[error("number of cells must be at least 1")]
    NoCells,
    #[error("qubits per cell must be at least 1")]
    NoQubitsPerCell,
}

fn binom2(n: u128) -> u128 {
    n * n.saturating_sub(1) / 2
}

/// `C(N/2, 2)`.
pub fn pairswap_count(n_qubits: u128) -> u128 {
    binom2(n_qubits / 2)
}

/// Number of fswaps in the network, `(N² − 2N)/2`.
pub fn fswap_count(n_qubits: u128) -> u128 {
    (n_qubits * n_qubits).saturating_sub(2 * n_qubits) / 2
}

/// Fswap term of the per-cell formula: `½(q²n² − 2qn)·c_fswap`.
pub fn fswap_term(qubits_per_cell: u64, n_cells: u64) -> Totals {
    fswap_cost().scaled(fswap_count(qubits_per_cell as u128 * n_cells as u128))
}

/// Gate load of the interaction terms, per class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakdown {
    pub hopping: Totals,
    pub coulomb: Totals,
    pub exchange: Totals,
    pub fswap: Totals,
}

impl Breakdown {
    pub fn interaction(&self) -> Totals {
        self.hopping + self.coulomb + self.exchange
    }

    pub fn total(&self) -> Totals {
        self.interaction() + self.fswap
    }
}

/// Σ count·cost, split by class.
pub fn interaction_breakdown(counts: &TermCounts) -> Breakdown {
    let mut b = Breakdown::default();
    for kind in TermKind::ALL {
        let load = Totals::from(gate_cost(kind)).scaled(counts.get(kind) as u128);
        match kind.class() {
            TermClass::Hopping => b.hopping += load,
            TermClass::Coulomb => b.coulomb += load,
            TermClass::Exchange => b.exchange += load,
        }
    }
    b
}

pub fn interaction_load(counts: &TermCounts) -> Totals {
    interaction_breakdown(counts).interaction()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub n_one_qubit: u128,
    pub n_cnot: u128,
    pub n_sum: u128,
    pub n_qubits: u128,
    pub n_pairswap: u128,
    pub depth_serial_fswap: u128,
    pub depth_parallel_fswap: u128,
    pub breakdown: Breakdown,
}

impl ResourceReport {
    fn from_breakdown(n_qubits: u128, breakdown: Breakdown) -> Self {
        let total = breakdown.total();
        Self {
            n_one_qubit: total.one_qubit,
            n_cnot: total.cnot,
            n_sum: total.sum,
            n_qubits,
            n_pairswap: pairswap_count(n_qubits),
            depth_serial_fswap: fswap_count(n_qubits),
            depth_parallel_fswap: 3 * (n_qubits / 2),
            breakdown,
        }
    }

    pub fn get(&self, m: Metric) -> u128 {
        self.totals().get(m)
    }

    pub fn totals(&self) -> Totals {
        Totals::per_metric(self.n_one_qubit, self.n_cnot, self.n_sum)
    }

    /// Share of the fswap term in the chosen metric.
    pub fn fswap_fraction(&self, m: Metric) -> f64 {
        let total = self.get(m);
        if total == 0 {
            return 0.0;
        }
        self.breakdown.fswap.get(m) as f64 / total as f64
    }
}

/// Gate count of one Trotter step from term counts and the qubit total.
pub fn gates_from_counts(
    counts: &TermCounts,
    n_qubits: u128,
) -> Result<ResourceReport, ResourceError> {
    if n_qubits < 2 {
        return Err(ResourceError::TooFewQubits {
            got: n_qubits,
            min: 2,
        });
    }
    if n_qubits % 2 == 1 {
        return Err(ResourceError::OddQubitCount(n_qubits));
    }
    let mut b = interaction_breakdown(counts);
    b.fswap = fswap_cost().scaled(4 * pairswap_count(n_qubits));
    Ok(ResourceReport::from_breakdown(n_qubits, b))
}

/// Gate count of one Trotter step over `n_cells` cells.
pub fn gates_vs_cells(
    per_cell: &TermCounts,
    qubits_per_cell: u64,
    n_cells: u64,
) -> Result<ResourceReport, ResourceError> {
    if n_cells == 0 {
        return Err(ResourceError::NoCells);
    }
    if qubits_per_cell == 0 {
        return Err(ResourceError::NoQubitsPerCell);
    }
    let mut b = interaction_breakdown(per_cell);
    b.hopping = b.hopping.scaled(n_cells as u128);
    b.coulomb = b.coulomb.scaled(n_cells as u128);
    b.exchange = b.exchange.scaled(n_cells as u128);
    b.fswap = fswap_term(qubits_per_cell, n_cells);
    Ok(ResourceReport::from_breakdown(
        qubit_count(qubits_per_cell, n_cells),
        b,
    ))
}

/// Same formula with the per-cell interaction load given directly in gates.
pub fn gates_vs_cells_with_load(load: Totals, qubits_per_cell: u64, n_cells: u64) -> Totals {
    load.scaled(n_cells as u128) + fswap_term(qubits_per_cell, n_cells)
}

pub fn qubit_count(qubits_per_cell: u64, n_cells: u64) -> u128 {
    qubits_per_cell as u128 * n_cells as u128
}

/// Smallest `n` with `Σ_i ½(q_i²n² − 2q_i n)·c ≥ n·Σ_i A_i` over a set of
/// `(load, q)` systems sharing one cell count.
pub fn crossover_cells_mixture(systems: &[(Totals, u64)], metric: Metric) -> u64 {
    let c = fswap_cost().get(metric);
    let a: u128 = systems.iter().map(|(l, _)| l.get(metric)).sum();
    if a == 0 || systems.is_empty() {
        return 1;
    }
    let q1: u128 = systems.iter().map(|&(_, q)| q as u128).sum();
    let q2: u128 = systems.iter().map(|&(_, q)| (q as u128).pow(2)).sum();
    // (Σq²·n − 2Σq)·c ≥ 2A  ⇔  n ≥ (2A + 2cΣq) / (cΣq²)
    let num = 2 * a + 2 * c * q1;
    let den = c * q2;
    num.div_ceil(den).max(1) as u64
}

/// Cells at which the fswap term first reaches the interaction term.
pub fn crossover_cells(load: Totals, qubits_per_cell: u64, metric: Metric) -> u64 {
    crossover_cells_mixture(&[(load, qubits_per_cell)], metric)
}

/// Largest tolerable two-qubit error rate with `ε·N_TG ≲ 2`.
pub fn error_budget(n_cnot_per_step: u128, n_steps: u64) -> f64 {
    2.0 / (n_steps as f64 * n_cnot_per_step as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    /// `4·C(N/2, 2)` fswaps run one after another.
    pub serial: u128,
    /// `3·N/2` fswap layers.
    pub parallel: u128,
    /// For `N/2 = 2` the first odd step is empty and only 3 layers are needed.
    pub upper_bound: bool,
}

pub fn depth_report(n_qubits: u128) -> Result<DepthReport, ResourceError> {
    if n_qubits < 4 {
        return Err(ResourceError::TooFewQubits {
            got: n_qubits,
            min: 4,
        });
    }
    if n_qubits % 2 == 1 {
        return Err(ResourceError::OddQubitCount(n_qubits));
    }
    Ok(DepthReport {
        serial: 4 * pairswap_count(n_qubits),
        parallel: 3 * n_qubits / 2,
        upper_bound: n_qubits == 4,
    })
}

/// Round to two significant figures, as printed in published tables.
pub fn round_sig2(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let e = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(e - 1);
    (x / scale).round() * scale
}

/// Whether `computed` is consistent with a value printed to two significant
/// figures, i.e. lies in its rounding interval (bounds included, so exact
/// ties match either neighbour).
pub fn same_sig2(computed: f64, printed: f64) -> bool {
    if printed == 0.0 {
        return computed == 0.0;
    }
    let e = printed.abs().log10().floor() as i32;
    let half = 0.5 * 10f64.powi(e - 1);
    (computed - printed).abs() <= half * (1.0 + 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_fswap_circuit() {
        let r = gates_from_counts(&TermCounts::default(), 10).unwrap();
        assert_eq!(r.n_sum, 160);
        assert_eq!(r.n_pairswap, 10);
        assert_eq!((r.n_one_qubit, r.n_cnot), (80, 80));
    }

    #[test]
    fn one_hopping_on_four_qubits() {
        let counts = TermCounts::from_pairs([(TermKind::Hopping, 1)]);
        let r = gates_from_counts(&counts, 4).unwrap();
        assert_eq!(r.n_sum, 30);
        assert_eq!(r.breakdown.hopping, Totals::new(10, 4));
    }

    #[test]
    fn odd_or_tiny_qubit_counts_rejected() {
        assert_eq!(
            gates_from_counts(&TermCounts::default(), 7),
            Err(ResourceError::OddQubitCount(7))
        );
        assert!(gates_from_counts(&TermCounts::default(), 0).is_err());
    }

    #[test]
    fn lafeaso_ten_thousand_cells() {
        let r = gates_vs_cells(&TermCounts::default(), 20, 10_000).unwrap();
        assert_eq!(r.n_sum, (400 * 100_000_000 - 400_000) / 2 * 4);
        assert!(same_sig2(r.n_sum as f64, 8.0e10));
        assert!(same_sig2(r.n_cnot as f64, 4.0e10));
    }

    #[test]
    fn k3c60_ten_thousand_cells() {
        let r = gates_vs_cells(&TermCounts::default(), 6, 10_000).unwrap();
        assert!(same_sig2(r.n_sum as f64, 7.2e9));
    }

    #[test]
    fn qubit_counts() {
        assert_eq!(qubit_count(20, 100), 2000);
        assert_eq!(qubit_count(10, 1000), 10_000);
    }

    #[test]
    fn crossover_scan_agrees() {
        let load = Totals::new(3000, 1500);
        for q in [2u64, 4, 6, 10, 20] {
            for m in Metric::ALL {
                let n = crossover_cells(load, q, m);
                let fsw = |n| fswap_term(q, n).get(m);
                let a = |n: u64| load.get(m) * n as u128;
                assert!(fsw(n) >= a(n), "q={q} {m}");
                assert!(n == 1 || fsw(n - 1) < a(n - 1), "q={q} {m}");
            }
        }
        assert_eq!(crossover_cells(Totals::default(), 10, Metric::Sum), 1);
    }

    #[test]
    fn error_budgets() {
        assert!((error_budget(1_000_000, 1) - 2e-6).abs() < 1e-18);
        assert!((error_budget(1_000_000, 2) - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn depth_reports() {
        assert_eq!(
            depth_report(10).unwrap(),
            DepthReport {
                serial: 40,
                parallel: 15,
                upper_bound: false
            }
        );
        assert_eq!(
            depth_report(4).unwrap(),
            DepthReport {
                serial: 4,
                parallel: 6,
                upper_bound: true
            }
        );
        let big = depth_report(2000).unwrap();
        assert_eq!((big.serial, big.parallel), (1_998_000, 3000));
        assert!(depth_report(2).is_err());
        assert!(depth_report(9).is_err());
    }

    #[test]
    fn sig2_rounding() {
        assert_eq!(round_sig2(7.1994e9), 7.2e9);
        assert!(same_sig2(39_999_600_000.0, 4.0e10));
        assert!(!same_sig2(4.06e10, 4.0e10));
        assert!(same_sig2(3.55e7, 3.5e7));
        assert!(same_sig2(3.55e7, 3.6e7));
        assert_eq!(round_sig2(0.0), 0.0);
    }

    #[test]
    fn metric_parsing() {
        assert_eq!("CNOT".parse::<Metric>().unwrap(), Metric::Cnot);
        assert!("depth".parse::<Metric>().is_err());
    }
}
