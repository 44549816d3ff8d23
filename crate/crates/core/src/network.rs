//! Fermionic swap network with pair swapping.
//!
//! Orbitals occupy consecutive qubit pairs `(p↑, p↓)`. Odd steps pair-swap
//! pairs (2, 3), (4, 5), …; even steps pairs (1, 2), (3, 4), … (1-based),
//! until the orbital sequence is reversed. A pair swap of `p` and `q` runs
//! three sub-steps, executing every pending term that is executable in the
//! current layout before the fswaps `(p↓, q↑)`, then `(p↑, q↑)` with
//! `(p↓, q↓)`, then `(p↑, q↓)`.
//!
//! A term is executable when its spin-orbitals sit on adjacent qubits
//! (2-local) or on four consecutive qubits ordered `(p↑, p↓, q↑, q↓)` or
//! `(q↑, q↓, p↑, p↓)` (exchange kinds). Under that condition the
//! Jordan-Wigner strings vanish and the fixed-window gate sequences apply.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::gates::{decompose_term, fswap_gate, Gate, GateCounts, GateOp, Origin};
use crate::hamiltonian::{EffectiveHamiltonian, InteractionTerm, SpinOrbital, TermKind};
use crate::pauli::QubitLayout;

/// Network sub-step in which an operation ran. Step 0 is the sweep before
/// the first pair swap; steps ≥ 1 are the odd/even steps with sub-steps 1..=3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub step: usize,
    pub sub_step: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Event {
    Step {
        step: usize,
        odd: bool,
    },
    PairSwap {
        p: usize,
        q: usize,
        position: usize,
    },
    Term {
        term: usize,
        kind: TermKind,
        window: usize,
        theta: f64,
        slot: Slot,
    },
    Fswap {
        position: usize,
        slot: Slot,
    },
}

/// Chronological record of term executions and fswaps. Layout snapshots are
/// recovered by replaying the fswaps from the initial layout.
#[derive(Clone, Debug, PartialEq)]
pub struct ExecutionTrace {
    pub initial: QubitLayout,
    pub events: Vec<Event>,
}

impl ExecutionTrace {
    /// Term ids in execution order.
    pub fn executed_terms(&self) -> impl Iterator<Item = usize> + '_ {
        self.events.iter().filter_map(|e| match e {
            Event::Term { term, .. } => Some(*term),
            _ => None,
        })
    }

    pub fn fswap_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.events.iter().filter_map(|e| match e {
            Event::Fswap { position, .. } => Some(*position),
            _ => None,
        })
    }

    pub fn pair_swap_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::PairSwap { .. }))
            .count()
    }

    /// Visit every event with the layout in force when it happened (fswaps see
    /// the layout before they act).
    pub fn replay(&self, mut visit: impl FnMut(&Event, &QubitLayout)) -> QubitLayout {
        let mut layout = self.initial.clone();
        for e in &self.events {
            visit(e, &layout);
            if let Event::Fswap { position, .. } = e {
                layout.swap_adjacent(*position);
            }
        }
        layout
    }

    /// Gate sequence of the whole step, with provenance.
    pub fn gates(&self) -> impl Iterator<Item = GateOp> + '_ {
        self.events.iter().flat_map(event_gates)
    }
}

/// Gates of one event (none for markers).
pub fn event_gates(e: &Event) -> Vec<GateOp> {
    match *e {
        Event::Term {
            term,
            kind,
            window,
            theta,
            ..
        } => term_gates(kind, theta, window)
            .into_iter()
            .map(|gate| GateOp {
                gate,
                origin: Origin::Term(term),
            })
            .collect(),
        Event::Fswap { position, .. } => fswap_gate(position)
            .into_iter()
            .map(|gate| GateOp {
                gate,
                origin: Origin::Fswap(position),
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// Decomposition templates at unit angle; angles scale linearly except the
/// fixed basis-change rotations.
fn term_gates(kind: TermKind, theta: f64, window: usize) -> Vec<Gate> {
    static TEMPLATES: OnceLock<Vec<Vec<(Gate, bool)>>> = OnceLock::new();
    let templates = TEMPLATES.get_or_init(|| {
        TermKind::ALL
            .iter()
            .map(|&k| {
                let w: Vec<usize> = (0..k.locality()).collect();
                let one = decompose_term(k, 1.0, &w).expect("template window");
                let two = decompose_term(k, 2.0, &w).expect("template window");
                one.into_iter().zip(two).map(|(a, b)| (a, a != b)).collect()
            })
            .collect()
    });
    templates[kind.rank()]
        .iter()
        .map(|&(g, scales)| {
            let g = if scales {
                match g {
                    Gate::Rz(q, t) => Gate::Rz(q, t * theta),
                    Gate::T(q, t) => Gate::T(q, t * theta),
                    Gate::G(t) => Gate::G(t * theta),
                    Gate::Rx(q, t) => Gate::Rx(q, t * theta),
                    other => other,
                }
            } else {
                g
            };
            g.shifted(window)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompileError {
    #[error("Hamiltonian must be flattened over its supercell before compiling")]
    NotFlattened,
    #[error("need at least 2 qubits, got {0}")]
    TooFewQubits(usize),
    #[error("time step must be finite, got {0}")]
    InvalidTimeStep(f64),
    #[error("terms never became executable: {0:?}")]
    UnexecutedTerms(Vec<usize>),
    #[error("orbital sequence not reversed after {0} steps")]
    NotReversed(usize),
}

/// One compiled Trotter step.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    pub n_qubits: usize,
    pub dt: f64,
    pub trace: ExecutionTrace,
    pub final_layout: QubitLayout,
    pub counts: GateCounts,
    pub n_pairswap: usize,
    pub n_fswap: usize,
    /// Gate count: every gate in its own layer.
    pub depth_serial: usize,
    /// As-soon-as-possible gate layering (global phases take no layer).
    pub depth_parallel: usize,
}

impl CompiledCircuit {
    pub fn gates(&self) -> impl Iterator<Item = GateOp> + '_ {
        self.trace.gates()
    }
}

/// Executability of a term in `layout`: the first qubit of its window.
pub fn executable_window(term: &InteractionTerm, layout: &QubitLayout) -> Option<usize> {
    let pos: Vec<usize> = term
        .spin_orbitals()
        .into_iter()
        .map(|so| layout.position(so))
        .collect::<Option<_>>()?;
    match pos.len() {
        1 => Some(pos[0]),
        2 => (pos[0].abs_diff(pos[1]) == 1).then(|| pos[0].min(pos[1])),
        4 => {
            let k = pos[0];
            let forward = pos[1] == k + 1 && pos[2] == k + 2 && pos[3] == k + 3;
            let k2 = pos[2];
            let backward = pos[3] == k2 + 1 && pos[0] == k2 + 2 && pos[1] == k2 + 3;
            if forward {
                Some(k)
            } else if backward {
                Some(k2)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Pending terms executable in `layout`, ordered by window start, then kind,
/// then id.
pub fn executable_terms(
    layout: &QubitLayout,
    terms: &[InteractionTerm],
    pending: impl IntoIterator<Item = usize>,
) -> Vec<usize> {
    let mut ready: Vec<(usize, usize, usize)> = pending
        .into_iter()
        .filter_map(|id| {
            executable_window(&terms[id], layout).map(|w| (w, terms[id].kind.rank(), id))
        })
        .collect();
    ready.sort_unstable();
    ready.into_iter().map(|(_, _, id)| id).collect()
}

/// How pending terms are re-examined at each sub-step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scan {
    /// Only terms touching a spin-orbital that moved since the last check.
    #[default]
    Incremental,
    /// Every pending term, every time.
    Full,
}

struct Compiler<'a> {
    terms: &'a [InteractionTerm],
    dt: f64,
    layout: QubitLayout,
    executed: Vec<bool>,
    n_pending: usize,
    by_mode: HashMap<SpinOrbital, Vec<usize>>,
    dirty: BTreeSet<usize>,
    scan: Scan,
    events: Vec<Event>,
    n_fswap: usize,
}

impl Compiler<'_> {
    fn sweep(&mut self, slot: Slot) {
        let candidates: Vec<usize> = match self.scan {
            Scan::Incremental => std::mem::take(&mut self.dirty).into_iter().collect(),
            Scan::Full => (0..self.terms.len()).collect(),
        };
        let pending = candidates.into_iter().filter(|&id| !self.executed[id]);
        for id in executable_terms(&self.layout, self.terms, pending) {
            let term = &self.terms[id];
            let window =
                executable_window(term, &self.layout).expect("executable term has a window");
            self.executed[id] = true;
            self.n_pending -= 1;
            self.events.push(Event::Term {
                term: id,
                kind: term.kind,
                window,
                theta: term.coefficient * self.dt,
                slot,
            });
        }
    }

    fn fswap(&mut self, position: usize, slot: Slot) {
        for so in [self.layout.at(position), self.layout.at(position + 1)] {
            if let Some(ids) = self.by_mode.get(&so) {
                self.dirty
                    .extend(ids.iter().copied().filter(|&id| !self.executed[id]));
            }
        }
        self.layout.swap_adjacent(position);
        self.n_fswap += 1;
        self.events.push(Event::Fswap { position, slot });
    }

    /// One network step: pair swaps of the orbital pairs starting at qubits
    /// `base` and `base + 2` for every base, run in lockstep sub-steps.
    fn step(&mut self, bases: &[usize], step: usize) {
        if bases.is_empty() {
            return;
        }
        for &base in bases {
            let p = self.layout.at(base).orbital;
            let q = self.layout.at(base + 2).orbital;
            debug_assert_eq!(
                &self.layout.sequence()[base..base + 4],
                &[
                    SpinOrbital::up(p),
                    SpinOrbital::down(p),
                    SpinOrbital::up(q),
                    SpinOrbital::down(q)
                ]
            );
            self.events.push(Event::PairSwap {
                p,
                q,
                position: base,
            });
        }
        let slot = |sub_step| Slot { step, sub_step };
        self.sweep(slot(1));
        for &base in bases {
            self.fswap(base + 1, slot(1));
        }
        self.sweep(slot(2));
        for &base in bases {
            self.fswap(base, slot(2));
            self.fswap(base + 2, slot(2));
        }
        self.sweep(slot(3));
        for &base in bases {
            self.fswap(base + 1, slot(3));
        }
    }
}

/// Compile one Trotter step of a flattened Hamiltonian.
pub fn compile_trotter_step(
    h: &EffectiveHamiltonian,
    dt: f64,
) -> Result<CompiledCircuit, CompileError> {
    compile_with(h, dt, Scan::Incremental)
}

pub fn compile_with(
    h: &EffectiveHamiltonian,
    dt: f64,
    scan: Scan,
) -> Result<CompiledCircuit, CompileError> {
    if !h.flattened {
        return Err(CompileError::NotFlattened);
    }
    if !dt.is_finite() {
        return Err(CompileError::InvalidTimeStep(dt));
    }
    let n_qubits = h.total_qubits();
    if n_qubits < 2 {
        return Err(CompileError::TooFewQubits(n_qubits));
    }
    let n_orbitals = h.total_orbitals();
    let initial = QubitLayout::initial(n_orbitals);

    let mut by_mode: HashMap<SpinOrbital, Vec<usize>> = HashMap::new();
    for (id, term) in h.terms.iter().enumerate() {
        for so in term.spin_orbitals() {
            by_mode.entry(so).or_default().push(id);
        }
    }
    let mut c = Compiler {
        terms: &h.terms,
        dt,
        layout: initial.clone(),
        executed: vec![false; h.terms.len()],
        n_pending: h.terms.len(),
        by_mode,
        dirty: (0..h.terms.len()).collect(),
        scan,
        events: Vec::new(),
        n_fswap: 0,
    };

    c.sweep(Slot {
        step: 0,
        sub_step: 0,
    });

    let reversed: Vec<usize> = (1..=n_orbitals).rev().collect();
    let last_j = (n_orbitals as i64 - 2).div_euclid(2);
    let mut step = 1;
    loop {
        let odd = step % 2 == 1;
        c.events.push(Event::Step { step, odd });
        // 1-based pairs (2j+2, 2j+3) on odd steps, (2j+1, 2j+2) on even
        let bases: Vec<usize> = (0..=last_j)
            .map(|j| j as usize)
            .filter(|&j| !odd || 2 * j + 3 <= n_orbitals)
            .map(|j| 2 * if odd { 2 * j + 1 } else { 2 * j })
            .collect();
        c.step(&bases, step);
        if c.layout.orbital_sequence() == reversed {
            break;
        }
        if step > n_orbitals + 2 {
            return Err(CompileError::NotReversed(step));
        }
        step += 1;
    }

    if c.n_pending > 0 {
        let missing = (0..h.terms.len()).filter(|&id| !c.executed[id]).collect();
        return Err(CompileError::UnexecutedTerms(missing));
    }

    let trace = ExecutionTrace {
        initial,
        events: c.events,
    };
    let mut counts = GateCounts::default();
    let mut layer = vec![0usize; n_qubits];
    let mut depth_parallel = 0;
    for op in trace.gates() {
        counts.record(&op.gate);
        let qubits = op.gate.qubits();
        if qubits.is_empty() {
            continue;
        }
        let l = qubits.iter().map(|&q| layer[q]).max().unwrap() + 1;
        qubits.iter().for_each(|&q| layer[q] = l);
        depth_parallel = depth_parallel.max(l);
    }
    let n_pairswap = trace.pair_swap_count();

    Ok(CompiledCircuit {
        n_qubits,
        dt,
        final_layout: c.layout,
        counts,
        n_pairswap,
        n_fswap: c.n_fswap,
        depth_serial: counts.sum() as usize,
        depth_parallel,
        trace,
    })
}

/// Operation-level parallel schedule of a compiled step.
#[derive(Clone, Debug, PartialEq)]
pub struct ParallelSchedule {
    /// Event indices per layer; operations in a layer act on disjoint qubits,
    /// and executing layers in order reproduces the serial circuit.
    pub layers: Vec<Vec<usize>>,
    /// Fswap positions grouped by network sub-step.
    pub fswap_layers: Vec<Vec<usize>>,
    /// Layers of `layers` that contain at least one term execution.
    pub interaction_layers: usize,
}

impl ParallelSchedule {
    pub fn fswap_depth(&self) -> usize {
        self.fswap_layers.len()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

fn event_span(e: &Event) -> Option<std::ops::Range<usize>> {
    match *e {
        Event::Term { kind, window, .. } => Some(window..window + kind.locality()),
        Event::Fswap { position, .. } => Some(position..position + 2),
        _ => None,
    }
}

/// Group operations into layers of disjoint qubit sets.
pub fn schedule_parallel(c: &CompiledCircuit) -> ParallelSchedule {
    let mut qubit_layer = vec![0usize; c.n_qubits];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut has_term: Vec<bool> = Vec::new();
    let mut fswap_layers: Vec<Vec<usize>> = Vec::new();
    let mut current_slot: Option<Slot> = None;

    for (idx, e) in c.trace.events.iter().enumerate() {
        let Some(span) = event_span(e) else { continue };
        let l = span.clone().map(|q| qubit_layer[q]).max().unwrap_or(0);
        span.for_each(|q| qubit_layer[q] = l + 1);
        if layers.len() <= l {
            layers.resize_with(l + 1, Vec::new);
            has_term.resize(l + 1, false);
        }
        layers[l].push(idx);
        match *e {
            Event::Term { .. } => has_term[l] = true,
            Event::Fswap { position, slot } => {
                if current_slot != Some(slot) {
                    current_slot = Some(slot);
                    fswap_layers.push(Vec::new());
                }
                fswap_layers.last_mut().unwrap().push(position);
            }
            _ => {}
        }
    }

    ParallelSchedule {
        interaction_layers: has_term.iter().filter(|&&t| t).count(),
        layers,
        fswap_layers,
    }
}

/// `(N² − 2N) / 2` fswaps for `N` qubits.
pub fn expected_fswap_count(n_qubits: usize) -> usize {
    (n_qubits * n_qubits).saturating_sub(2 * n_qubits) / 2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub missing: Vec<usize>,
    pub repeated: Vec<usize>,
    /// Term executions whose window was not executable at that moment.
    pub window_violations: Vec<usize>,
    pub reversed: bool,
    pub fswap_count: usize,
    pub expected_fswap_count: usize,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty()
            && self.repeated.is_empty()
            && self.window_violations.is_empty()
            && self.reversed
            && self.fswap_count == self.expected_fswap_count
    }
}

/// Check exactly-once execution, windows, reversal and the fswap count.
pub fn verify_coverage(trace: &ExecutionTrace, h: &EffectiveHamiltonian) -> CoverageReport {
    let mut times = vec![0usize; h.terms.len()];
    let mut window_violations = Vec::new();
    let mut unknown = Vec::new();
    let final_layout = trace.replay(|e, layout| {
        if let Event::Term { term, window, .. } = *e {
            match h.terms.get(term) {
                Some(t) => {
                    times[term] += 1;
                    if executable_window(t, layout) != Some(window) {
                        window_violations.push(term);
                    }
                }
                None => unknown.push(term),
            }
        }
    });
    let n_orbitals = trace.initial.len() / 2;
    let reversed = final_layout.orbital_sequence() == (1..=n_orbitals).rev().collect::<Vec<_>>();
    let fswap_count = trace.fswap_positions().count();
    let mut repeated: Vec<usize> = times
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 1)
        .map(|(i, _)| i)
        .collect();
    repeated.extend(unknown);
    CoverageReport {
        missing: times
            .iter()
            .enumerate()
            .filter(|(_, &n)| n == 0)
            .map(|(i, _)| i)
            .collect(),
        repeated,
        window_violations,
        reversed,
        fswap_count,
        expected_fswap_count: expected_fswap_count(trace.initial.len()),
    }
}
