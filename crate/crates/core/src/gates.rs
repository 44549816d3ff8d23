//! Gate set, per-term gate sequences and the fermionic swap.
//!
//! Every interaction operator is synthesised from its adjacent-layout Pauli
//! strings: basis change, nearest-neighbour CNOT ladder, `Rz`, and the
//! inverse. Global phases are kept exactly through the `G` gate, so each
//! sequence equals `exp(−iθ·O)` including phase, where `O` is the unit
//! operator of the kind.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hamiltonian::TermKind;
use crate::pauli::{kind_operator, Pauli, PauliString};

/// Largest register [`unitary_of`] will build.
pub const MAX_UNITARY_QUBITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// Hadamard.
    H(usize),
    /// `Ry(−π/2)`.
    Y(usize),
    /// `Ry(π/2)`, the inverse of `Y`.
    Ydg(usize),
    /// `exp(−iθX/2)`; used at `±π/2` to rotate between the Z and Y bases.
    Rx(usize, f64),
    /// `exp(−iθZ/2)`.
    Rz(usize, f64),
    /// `diag(1, e^{−iθ})`.
    T(usize, f64),
    /// Global phase `e^{−iθ}`.
    G(f64),
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    /// Qubits the gate acts on; empty for the global phase.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::Y(q)
            | Gate::Ydg(q)
            | Gate::Rx(q, _)
            | Gate::Rz(q, _)
            | Gate::T(q, _) => vec![q],
            Gate::G(_) => vec![],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn shifted(self, by: usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(q + by),
            Gate::Y(q) => Gate::Y(q + by),
            Gate::Ydg(q) => Gate::Ydg(q + by),
            Gate::Rx(q, t) => Gate::Rx(q + by, t),
            Gate::Rz(q, t) => Gate::Rz(q + by, t),
            Gate::T(q, t) => Gate::T(q + by, t),
            Gate::G(t) => Gate::G(t),
            Gate::Cnot { control, target } => Gate::Cnot {
                control: control + by,
                target: target + by,
            },
        }
    }

    /// 2×2 matrix of a one-qubit gate (the global phase returns `e^{−iθ}·I`).
    pub fn matrix_1q(&self) -> Option<[[Complex64; 2]; 2]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Some(match *self {
            Gate::H(_) => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
            Gate::Y(_) => [[c(s, 0.0), c(s, 0.0)], [c(-s, 0.0), c(s, 0.0)]],
            Gate::Ydg(_) => [[c(s, 0.0), c(-s, 0.0)], [c(s, 0.0), c(s, 0.0)]],
            Gate::Rx(_, t) => {
                let (sn, cs) = (t / 2.0).sin_cos();
                [[c(cs, 0.0), c(0.0, -sn)], [c(0.0, -sn), c(cs, 0.0)]]
            }
            Gate::Rz(_, t) => [
                [Complex64::from_polar(1.0, -t / 2.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)],
            ],
            Gate::T(_, t) => [
                [c(1.0, 0.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, -t)],
            ],
            Gate::G(t) => {
                let p = Complex64::from_polar(1.0, -t);
                [[p, c(0.0, 0.0)], [c(0.0, 0.0), p]]
            }
            Gate::Cnot { .. } => return None,
        })
    }

    /// Apply to a state vector in place (bit `k` of the index is qubit `k`).
    pub fn apply(&self, state: &mut [Complex64]) {
        match *self {
            Gate::Cnot { control, target } => {
                let (cm, tm) = (1usize << control, 1usize << target);
                for idx in 0..state.len() {
                    if idx & cm != 0 && idx & tm == 0 {
                        state.swap(idx, idx | tm);
                    }
                }
            }
            Gate::G(t) => {
                let p = Complex64::from_polar(1.0, -t);
                state.iter_mut().for_each(|a| *a *= p);
            }
            _ => {
                let q = self.qubits()[0];
                let m = self.matrix_1q().expect("one-qubit gate");
                let bit = 1usize << q;
                for idx in 0..state.len() {
                    if idx & bit == 0 {
                        let (a0, a1) = (state[idx], state[idx | bit]);
                        state[idx] = m[0][0] * a0 + m[0][1] * a1;
                        state[idx | bit] = m[1][0] * a0 + m[1][1] * a1;
                    }
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Y(q) => write!(f, "Y {q}"),
            Gate::Ydg(q) => write!(f, "YDG {q}"),
            Gate::Rx(q, t) => write!(f, "RX {q} {t:.16e}"),
            Gate::Rz(q, t) => write!(f, "RZ {q} {t:.16e}"),
            Gate::T(q, t) => write!(f, "T {q} {t:.16e}"),
            Gate::G(t) => write!(f, "G {t:.16e}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
        }
    }
}

/// Which network operation emitted a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    /// Index of the Hamiltonian term.
    Term(usize),
    /// Lower physical position of the swapped pair.
    Fswap(usize),
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub gate: Gate,
    pub origin: Origin,
}

pub type GateSequence = Vec<GateOp>;

/// One-qubit and CNOT tallies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub one_qubit: u64,
    pub cnot: u64,
}

impl GateCounts {
    pub const fn new(one_qubit: u64, cnot: u64) -> Self {
        Self { one_qubit, cnot }
    }

    pub fn sum(&self) -> u64 {
        self.one_qubit + self.cnot
    }

    pub fn of<'a>(gates: impl IntoIterator<Item = &'a Gate>) -> Self {
        let mut c = Self::default();
        for g in gates {
            c.record(g);
        }
        c
    }

    pub fn record(&mut self, gate: &Gate) {
        if gate.is_two_qubit() {
            self.cnot += 1;
        } else {
            self.one_qubit += 1;
        }
    }

    pub fn scaled(&self, n: u64) -> Self {
        Self::new(self.one_qubit * n, self.cnot * n)
    }
}

impl std::ops::Add for GateCounts {
    type Output = GateCounts;
    fn add(self, rhs: GateCounts) -> GateCounts {
        GateCounts::new(self.one_qubit + rhs.one_qubit, self.cnot + rhs.cnot)
    }
}

impl std::ops::AddAssign for GateCounts {
    fn add_assign(&mut self, rhs: GateCounts) {
        *self = *self + rhs;
    }
}

/// Gates per interaction operator, by kind.
pub fn gate_cost(kind: TermKind) -> GateCounts {
    match kind {
        TermKind::OnSiteEnergy => GateCounts::new(1, 0),
        TermKind::Hopping => GateCounts::new(10, 4),
        TermKind::CoulombOnSite | TermKind::CoulombOffSite | TermKind::ExchangeDensity => {
            GateCounts::new(4, 2)
        }
        TermKind::ExchangeSpinFlip | TermKind::ExchangePairHop => GateCounts::new(72, 48),
    }
}

/// Gates per fermionic swap.
pub const FSWAP_COST: GateCounts = GateCounts::new(2, 2);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GateError {
    #[error("{kind} acts on {expected} qubits, window has {got}")]
    WindowSize {
        kind: TermKind,
        expected: usize,
        got: usize,
    },
    #[error("window {0:?} is not a run of consecutive qubits")]
    NonContiguous(Vec<usize>),
    #[error("{requested} qubits exceeds the unitary limit of {limit}")]
    TooLarge { requested: usize, limit: usize },
    #[error("gate on qubit {qubit} outside a {n_qubits}-qubit register")]
    OutOfRange { qubit: usize, n_qubits: usize },
}

/// Gates realising `exp(−iθ·O_kind)` on the consecutive qubits of `window`.
///
/// The window lists the term's spin-orbitals in physical order; every kind is
/// symmetric under exchanging its two orbitals, so only the positions matter.
pub fn decompose_term(
    kind: TermKind,
    theta: f64,
    window: &[usize],
) -> Result<Vec<Gate>, GateError> {
    let width = kind.locality();
    if window.len() != width {
        return Err(GateError::WindowSize {
            kind,
            expected: width,
            got: window.len(),
        });
    }
    if window.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(GateError::NonContiguous(window.to_vec()));
    }
    let base = window[0];

    if kind == TermKind::OnSiteEnergy {
        // exp(−iθ n) = diag(1, e^{−iθ})
        return Ok(vec![Gate::T(base, theta)]);
    }

    let local: Vec<usize> = (0..width).collect();
    let op = kind_operator(kind, &local);
    let mut gates = Vec::with_capacity(gate_cost(kind).sum() as usize);
    for s in op.strings() {
        let angle = theta * s.coefficient.re;
        pauli_exponential(&s, angle, &mut gates);
    }
    debug_assert_eq!(GateCounts::of(&gates), gate_cost(kind));
    Ok(gates.into_iter().map(|g| g.shifted(base)).collect())
}

/// Append `exp(−iφP)` for a string on consecutive qubits.
fn pauli_exponential(s: &PauliString, phi: f64, out: &mut Vec<Gate>) {
    if s.ops.is_empty() {
        out.push(Gate::G(phi));
        return;
    }
    let qubits: Vec<usize> = s.ops.keys().copied().collect();
    debug_assert!(qubits.windows(2).all(|w| w[1] == w[0] + 1));
    for (&q, &p) in &s.ops {
        match p {
            Pauli::X => out.push(Gate::H(q)),
            Pauli::Y => out.push(Gate::Rx(q, FRAC_PI_2)),
            Pauli::Z => {}
        }
    }
    for w in qubits.windows(2) {
        out.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        });
    }
    out.push(Gate::Rz(*qubits.last().unwrap(), 2.0 * phi));
    for w in qubits.windows(2).rev() {
        out.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        });
    }
    for (&q, &p) in &s.ops {
        match p {
            Pauli::X => out.push(Gate::H(q)),
            Pauli::Y => out.push(Gate::Rx(q, -FRAC_PI_2)),
            Pauli::Z => {}
        }
    }
}

/// Fermionic swap of the modes at `k` and `k + 1`: SWAP with a −1 on `|11⟩`.
pub fn fswap_gate(k: usize) -> [Gate; 4] {
    [
        Gate::Ydg(k),
        Gate::Cnot {
            control: k,
            target: k + 1,
        },
        Gate::Cnot {
            control: k + 1,
            target: k,
        },
        Gate::Y(k + 1),
    ]
}

/// Dense unitary of a gate list on `n_qubits` qubits.
pub fn unitary_of<'a>(
    gates: impl IntoIterator<Item = &'a Gate> + Clone,
    n_qubits: usize,
) -> Result<DMatrix<Complex64>, GateError> {
    if n_qubits > MAX_UNITARY_QUBITS {
        return Err(GateError::TooLarge {
            requested: n_qubits,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    for g in gates.clone() {
        if let Some(&q) = g.qubits().iter().find(|&&q| q >= n_qubits) {
            return Err(GateError::OutOfRange { qubit: q, n_qubits });
        }
    }
    let dim = 1usize << n_qubits;
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut state = vec![Complex64::new(0.0, 0.0); dim];
        state[col] = Complex64::new(1.0, 0.0);
        for g in gates.clone() {
            g.apply(&mut state);
        }
        u.set_column(col, &nalgebra::DVector::from_vec(state));
    }
    Ok(u)
}
