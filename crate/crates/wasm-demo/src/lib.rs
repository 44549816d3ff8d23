//! Browser bindings. Every export takes plain numbers or text and returns a
//! JSON string, so the page needs no generated TypeScript types.

use std::collections::BTreeMap;

use fswap_core::hamfile::parse_hamiltonian;
use fswap_core::network::{schedule_parallel, Event, Slot};
use fswap_core::resources::{
    crossover_cells, fswap_term, gates_from_counts, gates_vs_cells_with_load, Totals,
};
use fswap_core::{compile_trotter_step, EffectiveHamiltonian, InteractionTerm, Metric, Thresholds};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Frames are only produced for small networks.
pub const MAX_FRAME_ORBITALS: usize = 16;
/// Compile cap in the browser.
pub const MAX_DEMO_QUBITS: usize = 200;

#[derive(Serialize)]
struct CurvePoint {
    n_cells: u64,
    n_qubits: u128,
    total: u128,
    fswap: u128,
    fswap_fraction: f64,
}

#[derive(Serialize)]
struct Curve {
    metric: Metric,
    crossover_cells: u64,
    points: Vec<CurvePoint>,
}

/// Gate count against cell number for a per-cell interaction load.
pub fn estimate_curve_json(
    qubits_per_cell: u64,
    load_one_qubit: u64,
    load_cnot: u64,
    max_cells: u64,
    metric: &str,
) -> Result<String, String> {
    if qubits_per_cell == 0 || qubits_per_cell % 2 == 1 {
        return Err("qubits per cell must be a positive even number".into());
    }
    if max_cells == 0 {
        return Err("max cells must be at least 1".into());
    }
    let metric: Metric = metric.parse()?;
    let load = Totals::new(load_one_qubit as u128, load_cnot as u128);
    let mut cells = Vec::new();
    let mut k = 0;
    loop {
        let n = 10f64.powf(k as f64 / 8.0).round() as u64;
        if n > max_cells {
            break;
        }
        if cells.last() != Some(&n) {
            cells.push(n);
        }
        k += 1;
    }
    if cells.last() != Some(&max_cells) {
        cells.push(max_cells);
    }
    let points = cells
        .into_iter()
        .map(|n| {
            let total = gates_vs_cells_with_load(load, qubits_per_cell, n).get(metric);
            let fswap = fswap_term(qubits_per_cell, n).get(metric);
            CurvePoint {
                n_cells: n,
                n_qubits: qubits_per_cell as u128 * n as u128,
                total,
                fswap,
                fswap_fraction: fswap as f64 / total.max(1) as f64,
            }
        })
        .collect();
    let curve = Curve {
        metric,
        crossover_cells: crossover_cells(load, qubits_per_cell, metric),
        points,
    };
    serde_json::to_string(&curve).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Frame {
    step: usize,
    sub_step: u8,
    /// Orbital label per qubit position before the fswaps of this sub-step.
    layout: Vec<String>,
    /// Positions `k` of the fswaps on `(k, k+1)`.
    fswaps: Vec<usize>,
    /// Terms executed in this sub-step, as `kind@window`.
    terms: Vec<String>,
}

#[derive(Serialize)]
struct Frames {
    n_qubits: usize,
    n_fswap: usize,
    fswap_depth: usize,
    frames: Vec<Frame>,
    final_layout: Vec<String>,
}

/// Sub-step snapshots of the swap network on `n_orbitals` orbitals with
/// nearest-neighbour hopping and on-site Coulomb terms.
pub fn network_frames_json(n_orbitals: usize) -> Result<String, String> {
    if !(1..=MAX_FRAME_ORBITALS).contains(&n_orbitals) {
        return Err(format!(
            "orbitals must be between 1 and {MAX_FRAME_ORBITALS}"
        ));
    }
    let mut terms = Vec::new();
    for p in 1..=n_orbitals {
        terms.push(InteractionTerm::coulomb_on_site(p, 1.0));
        for q in p + 1..=n_orbitals {
            terms.push(InteractionTerm::exchange_spin_flip(p, q, 0.1));
        }
    }
    let h = EffectiveHamiltonian::flat(n_orbitals, terms).map_err(|e| e.to_string())?;
    let c = compile_trotter_step(&h, 0.1).map_err(|e| e.to_string())?;
    let mut by_slot: BTreeMap<Slot, Frame> = BTreeMap::new();
    let final_layout = c.trace.replay(|e, layout| {
        let slot = match e {
            Event::Term { slot, .. } | Event::Fswap { slot, .. } => *slot,
            _ => return,
        };
        let frame = by_slot.entry(slot).or_insert_with(|| Frame {
            step: slot.step,
            sub_step: slot.sub_step,
            layout: layout.sequence().iter().map(|so| so.to_string()).collect(),
            fswaps: Vec::new(),
            terms: Vec::new(),
        });
        match e {
            Event::Fswap { position, .. } => frame.fswaps.push(*position),
            Event::Term { kind, window, .. } => frame.terms.push(format!("{kind}@{window}")),
            _ => {}
        }
    });
    let out = Frames {
        n_qubits: c.n_qubits,
        n_fswap: c.n_fswap,
        fswap_depth: schedule_parallel(&c).fswap_depth(),
        frames: by_slot.into_values().collect(),
        final_layout: final_layout
            .sequence()
            .iter()
            .map(|so| so.to_string())
            .collect(),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Summary {
    n_qubits: usize,
    n_terms: usize,
    n_pairswap: usize,
    n_fswap: usize,
    one_qubit: u64,
    cnot: u64,
    formula_one_qubit: u128,
    formula_cnot: u128,
    fswap_fraction: f64,
    depth_parallel: usize,
}

/// Compile a Hamiltonian file's text at the given supercell grid.
pub fn compile_summary_json(
    text: &str,
    nx: usize,
    ny: usize,
    nz: usize,
    dt: f64,
) -> Result<String, String> {
    if nx == 0 || ny == 0 || nz == 0 {
        return Err("grid dimensions must be at least 1".into());
    }
    let cell = parse_hamiltonian(text)
        .map_err(|e| e.to_string())?
        .apply_thresholds(Thresholds::default());
    let n_qubits = 2 * cell.n_orbitals_per_cell * nx * ny * nz;
    if n_qubits > MAX_DEMO_QUBITS {
        return Err(format!(
            "{n_qubits} qubits is more than this page compiles ({MAX_DEMO_QUBITS})"
        ));
    }
    let h = cell.replicate_supercell([nx, ny, nz]);
    let c = compile_trotter_step(&h, dt).map_err(|e| e.to_string())?;
    let formula =
        gates_from_counts(&h.term_counts(), n_qubits as u128).map_err(|e| e.to_string())?;
    let summary = Summary {
        n_qubits,
        n_terms: h.terms.len(),
        n_pairswap: c.n_pairswap,
        n_fswap: c.n_fswap,
        one_qubit: c.counts.one_qubit,
        cnot: c.counts.cnot,
        formula_one_qubit: formula.n_one_qubit,
        formula_cnot: formula.n_cnot,
        fswap_fraction: formula.fswap_fraction(Metric::Sum),
        depth_parallel: c.depth_parallel,
    };
    serde_json::to_string(&summary).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn estimate_curve(
    qubits_per_cell: u32,
    load_one_qubit: u32,
    load_cnot: u32,
    max_cells: u32,
    metric: &str,
) -> Result<String, JsValue> {
    estimate_curve_json(
        qubits_per_cell.into(),
        load_one_qubit.into(),
        load_cnot.into(),
        max_cells.into(),
        metric,
    )
    .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn network_frames(n_orbitals: u32) -> Result<String, JsValue> {
    network_frames_json(n_orbitals as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn compile_summary(text: &str, nx: u32, ny: u32, nz: u32, dt: f64) -> Result<String, JsValue> {
    compile_summary_json(text, nx as usize, ny as usize, nz as usize, dt)
        .map_err(|e| JsValue::from_str(&e))
}
