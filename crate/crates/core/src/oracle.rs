//! Dense state-vector simulation and matrix-exponential references.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::gates::{fswap_gate, Gate};
use crate::hamiltonian::{EffectiveHamiltonian, InteractionTerm};
use crate::network::{CompiledCircuit, Event, ExecutionTrace};
use crate::pauli::{pauli_matrix, term_to_pauli, DenseError, LayoutError, PauliSum, QubitLayout};

pub type C64 = Complex64;

/// Largest state the simulator accepts.
pub const MAX_STATE_QUBITS: usize = 14;
/// Largest system for reference unitaries and equivalence checks.
pub const MAX_REFERENCE_QUBITS: usize = 12;
/// Up to this size distances use the spectral norm, above it Frobenius.
pub const MAX_SPECTRAL_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("{requested} qubits exceeds the simulator limit of {limit}")]
    TooLarge { requested: usize, limit: usize },
    #[error("gate acts on qubit {qubit} but the state has {n_qubits} qubits")]
    OutOfRange { qubit: usize, n_qubits: usize },
    #[error("shape mismatch: {0}×{0} against {1}×{1}")]
    ShapeMismatch(usize, usize),
    #[error("amplitude count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("term {0} expands to non-commuting Pauli strings")]
    NonCommuting(usize),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Dense(#[from] DenseError),
}

fn guard(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        Err(OracleError::TooLarge {
            requested: n,
            limit,
        })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, OracleError> {
        guard(n_qubits, MAX_STATE_QUBITS)?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(mut amplitudes: Vec<C64>) -> Result<Self, OracleError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(OracleError::NotPowerOfTwo(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        guard(n_qubits, MAX_STATE_QUBITS)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn random(n_qubits: usize, rng: &mut impl Rng) -> Result<Self, OracleError> {
        guard(n_qubits, MAX_STATE_QUBITS)?;
        let amps = (0..1usize << n_qubits)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Self::from_amplitudes(amps)
    }

    /// Uniform superposition restricted to basis states with `n_particles` set bits.
    pub fn random_with_particles(
        n_qubits: usize,
        n_particles: u32,
        rng: &mut impl Rng,
    ) -> Result<Self, OracleError> {
        guard(n_qubits, MAX_STATE_QUBITS)?;
        let amps = (0..1usize << n_qubits)
            .map(|i| {
                if i.count_ones() == n_particles {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨N⟩` for the occupation-number basis.
    pub fn particle_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * i.count_ones() as f64)
            .sum()
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), OracleError> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.n_qubits) {
            return Err(OracleError::OutOfRange {
                qubit: q,
                n_qubits: self.n_qubits,
            });
        }
        gate.apply(&mut self.amplitudes);
        Ok(())
    }

    pub fn apply_gates<'a>(
        &mut self,
        gates: impl IntoIterator<Item = &'a Gate>,
    ) -> Result<(), OracleError> {
        for g in gates {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &CompiledCircuit) -> Result<(), OracleError> {
        if c.n_qubits > self.n_qubits {
            return Err(OracleError::OutOfRange {
                qubit: c.n_qubits - 1,
                n_qubits: self.n_qubits,
            });
        }
        for op in c.gates() {
            op.gate.apply(&mut self.amplitudes);
        }
        Ok(())
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_dvector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.amplitudes)
    }
}

/// `exp(−i t H)` for Hermitian `H` by eigendecomposition.
pub fn expm_hermitian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| C64::from_polar(1.0, -t * e)));
    v * phases * v.adjoint()
}

/// `exp(−i ĥ Δt)` of one term, with `ĥ` mapped in `layout`.
pub fn exact_term_exponential(
    term: &InteractionTerm,
    layout: &QubitLayout,
    dt: f64,
) -> Result<DMatrix<C64>, OracleError> {
    guard(layout.len(), MAX_STATE_QUBITS)?;
    let h = pauli_matrix(&term_to_pauli(term, layout)?, layout.len())?;
    Ok(expm_hermitian(&h, dt))
}

/// Dense `H` of the whole Hamiltonian in `layout`.
pub fn hamiltonian_matrix(
    h: &EffectiveHamiltonian,
    layout: &QubitLayout,
) -> Result<DMatrix<C64>, OracleError> {
    guard(layout.len(), MAX_STATE_QUBITS)?;
    let mut sum = PauliSum::zero();
    for t in &h.terms {
        sum = &sum + &term_to_pauli(t, layout)?;
    }
    Ok(pauli_matrix(&sum, layout.len())?)
}

/// What the compiled circuit must equal: every executed term's exponential
/// in initial-layout labels, in execution order, followed by the network's
/// fswaps.
#[derive(Clone, Debug)]
pub struct ReferenceProgram {
    pub n_qubits: usize,
    pub dt: f64,
    /// `(term id, ĥ)` in execution order.
    pub exponentials: Vec<(usize, PauliSum)>,
    pub fswaps: Vec<usize>,
}

impl ReferenceProgram {
    pub fn from_trace(
        trace: &ExecutionTrace,
        h: &EffectiveHamiltonian,
        dt: f64,
    ) -> Result<Self, OracleError> {
        let mut exponentials = Vec::new();
        for id in trace.executed_terms() {
            let ps = term_to_pauli(&h.terms[id], &trace.initial)?;
            if !ps.all_commute() {
                return Err(OracleError::NonCommuting(id));
            }
            exponentials.push((id, ps));
        }
        Ok(Self {
            n_qubits: trace.initial.len(),
            dt,
            exponentials,
            fswaps: trace.fswap_positions().collect(),
        })
    }

    /// Swap the execution order of two exponentials.
    pub fn with_swapped(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.exponentials.swap(i, j);
        out
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<(), OracleError> {
        if self.n_qubits > state.n_qubits {
            return Err(OracleError::OutOfRange {
                qubit: self.n_qubits - 1,
                n_qubits: state.n_qubits,
            });
        }
        for (_, ps) in &self.exponentials {
            ps.apply_exp(self.dt, &mut state.amplitudes);
        }
        for &k in &self.fswaps {
            state.apply_gates(fswap_gate(k).iter())?;
        }
        Ok(())
    }

    /// Dense matrix, column by column.
    pub fn unitary(&self) -> Result<DMatrix<C64>, OracleError> {
        guard(self.n_qubits, MAX_REFERENCE_QUBITS)?;
        columns(self.n_qubits, |s| self.apply(s))
    }
}

fn columns(
    n_qubits: usize,
    mut f: impl FnMut(&mut StateVector) -> Result<(), OracleError>,
) -> Result<DMatrix<C64>, OracleError> {
    let dim = 1usize << n_qubits;
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut s = StateVector::basis(n_qubits, col)?;
        f(&mut s)?;
        u.set_column(col, &s.to_dvector());
    }
    Ok(u)
}

/// Reference unitary `R · Π_k exp(−i ĥ_k Δt)` for a compiled trace.
pub fn reference_unitary(
    trace: &ExecutionTrace,
    h: &EffectiveHamiltonian,
    dt: f64,
) -> Result<DMatrix<C64>, OracleError> {
    guard(trace.initial.len(), MAX_REFERENCE_QUBITS)?;
    ReferenceProgram::from_trace(trace, h, dt)?.unitary()
}

/// Same reference built from dense per-term matrix exponentials.
pub fn reference_unitary_dense(
    trace: &ExecutionTrace,
    h: &EffectiveHamiltonian,
    dt: f64,
) -> Result<DMatrix<C64>, OracleError> {
    let n = trace.initial.len();
    guard(n, MAX_SPECTRAL_QUBITS)?;
    let mut u = DMatrix::identity(1 << n, 1 << n);
    for id in trace.executed_terms() {
        u = exact_term_exponential(&h.terms[id], &trace.initial, dt)? * u;
    }
    let r = fswap_permutation(trace)?;
    Ok(r * u)
}

/// `R`: the product of the trace's fswaps.
pub fn fswap_permutation(trace: &ExecutionTrace) -> Result<DMatrix<C64>, OracleError> {
    let n = trace.initial.len();
    guard(n, MAX_REFERENCE_QUBITS)?;
    let gates: Vec<Gate> = trace.fswap_positions().flat_map(fswap_gate).collect();
    columns(n, |s| s.apply_gates(gates.iter()))
}

/// Dense unitary of a gate list.
pub fn gates_unitary(gates: &[Gate], n_qubits: usize) -> Result<DMatrix<C64>, OracleError> {
    guard(n_qubits, MAX_REFERENCE_QUBITS)?;
    columns(n_qubits, |s| s.apply_gates(gates.iter()))
}

/// Dense unitary of a compiled circuit.
pub fn circuit_unitary(c: &CompiledCircuit) -> Result<DMatrix<C64>, OracleError> {
    let gates: Vec<Gate> = c.gates().map(|op| op.gate).collect();
    gates_unitary(&gates, c.n_qubits)
}

/// Which matrix norm a distance was measured in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Spectral,
    Frobenius,
    /// Largest vector distance over a set of random probe states.
    Probe,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Equivalence {
    /// `‖A − B‖`.
    pub distance: f64,
    /// `‖A − e^{iφ}B‖` at the phase of the trace overlap.
    pub phase_aligned: f64,
    pub phase: f64,
    pub norm: NormKind,
}

fn matrix_norm(m: &DMatrix<C64>, kind: NormKind) -> f64 {
    match kind {
        NormKind::Spectral => m.clone().singular_values().max(),
        _ => m.norm(),
    }
}

pub fn equivalence_check(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<Equivalence, OracleError> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(OracleError::ShapeMismatch(a.nrows(), b.nrows()));
    }
    let norm = if a.nrows() <= 1 << MAX_SPECTRAL_QUBITS {
        NormKind::Spectral
    } else {
        NormKind::Frobenius
    };
    // tr(B†A)
    let overlap: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap.arg()
    } else {
        0.0
    };
    let aligned = a - b * C64::from_polar(1.0, phase);
    Ok(Equivalence {
        distance: matrix_norm(&(a - b), norm),
        phase_aligned: matrix_norm(&aligned, norm),
        phase,
        norm,
    })
}

/// Largest `‖Aψ − Bψ‖` over `n_probes` random states, where `A` and `B` act in place.
pub fn probe_distance(
    n_qubits: usize,
    n_probes: usize,
    rng: &mut impl Rng,
    mut a: impl FnMut(&mut StateVector) -> Result<(), OracleError>,
    mut b: impl FnMut(&mut StateVector) -> Result<(), OracleError>,
) -> Result<f64, OracleError> {
    let mut worst: f64 = 0.0;
    for _ in 0..n_probes {
        let psi = StateVector::random(n_qubits, rng)?;
        let (mut x, mut y) = (psi.clone(), psi);
        a(&mut x)?;
        b(&mut y)?;
        worst = worst.max(x.distance(&y));
    }
    Ok(worst)
}

/// Compiled circuit against its reference: dense up to the spectral-norm
/// size, random probe states above.
pub fn check_compiled(
    c: &CompiledCircuit,
    h: &EffectiveHamiltonian,
    rng: &mut impl Rng,
) -> Result<Equivalence, OracleError> {
    guard(c.n_qubits, MAX_REFERENCE_QUBITS)?;
    let reference = ReferenceProgram::from_trace(&c.trace, h, c.dt)?;
    if c.n_qubits <= MAX_SPECTRAL_QUBITS {
        return equivalence_check(&circuit_unitary(c)?, &reference.unitary()?);
    }
    let d = probe_distance(
        c.n_qubits,
        4,
        rng,
        |s| s.apply_circuit(c),
        |s| reference.apply(s),
    )?;
    Ok(Equivalence {
        distance: d,
        phase_aligned: d,
        phase: 0.0,
        norm: NormKind::Probe,
    })
}

/// One first-order Trotter step in initial-layout labels, `R† · U_circuit`.
pub fn trotter_step_unitary(c: &CompiledCircuit) -> Result<DMatrix<C64>, OracleError> {
    let r = fswap_permutation(&c.trace)?;
    Ok(r.adjoint() * circuit_unitary(c)?)
}

/// Map trace events to their gates and apply them, for fault injection.
pub fn apply_events<'a>(
    state: &mut StateVector,
    events: impl IntoIterator<Item = &'a Event>,
) -> Result<(), OracleError> {
    for e in events {
        for op in crate::network::event_gates(e) {
            state.apply_gate(&op.gate)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Spin;
    use crate::network::compile_trotter_step;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cnot_on_10() {
        // qubit 0 set: index 1
        let mut s = StateVector::basis(2, 0b01).unwrap();
        s.apply_gate(&Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        assert_eq!(s.amplitudes()[0b11], c(1.0, 0.0));
    }

    #[test]
    fn out_of_range_gate() {
        let mut s = StateVector::basis(2, 0).unwrap();
        assert_eq!(
            s.apply_gate(&Gate::H(2)),
            Err(OracleError::OutOfRange {
                qubit: 2,
                n_qubits: 2
            })
        );
        assert!(StateVector::basis(15, 0).is_err());
    }

    #[test]
    fn expm_matches_pade() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = DMatrix::from_fn(8, 8, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let h = (&a + a.adjoint()) * c(0.5, 0.0);
        let ours = expm_hermitian(&h, 0.7);
        let pade = (h * c(0.0, -0.7)).exp();
        assert!((ours - pade).norm() < 1e-10);
    }

    #[test]
    fn on_site_phase() {
        let l = QubitLayout::initial(1);
        let t = InteractionTerm::on_site_energy(1, Spin::Down, 0.8);
        let u = exact_term_exponential(&t, &l, 0.5).unwrap();
        assert!((u[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((u[(2, 2)] - C64::from_polar(1.0, -0.4)).norm() < 1e-12);
        assert!((u[(3, 3)] - C64::from_polar(1.0, -0.4)).norm() < 1e-12);
        assert!((u[(1, 1)] - c(1.0, 0.0)).norm() < 1e-12);
        let id = exact_term_exponential(&t, &l, 0.0).unwrap();
        assert!((id - DMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn phase_is_separated() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = DMatrix::from_fn(4, 4, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let h = (&a + a.adjoint()) * c(0.5, 0.0);
        let b = expm_hermitian(&h, 1.0);
        let eq = equivalence_check(&b, &b).unwrap();
        assert_eq!((eq.distance, eq.phase_aligned), (0.0, 0.0));
        let shifted = &b * C64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        let eq = equivalence_check(&shifted, &b).unwrap();
        assert!((eq.distance - 2.0 * (std::f64::consts::PI / 6.0).sin()).abs() < 1e-10);
        assert!(eq.phase_aligned < 1e-12);
        assert!((eq.phase - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch() {
        let a = DMatrix::<C64>::identity(2, 2);
        let b = DMatrix::<C64>::identity(4, 4);
        assert!(matches!(
            equivalence_check(&a, &b),
            Err(OracleError::ShapeMismatch(2, 4))
        ));
    }

    #[test]
    fn hubbard_dimer_matches_reference() {
        let h = EffectiveHamiltonian::flat(
            2,
            vec![
                InteractionTerm::hopping(1, 2, Spin::Up, -0.4),
                InteractionTerm::hopping(1, 2, Spin::Down, -0.4),
                InteractionTerm::coulomb_on_site(1, 3.0),
                InteractionTerm::coulomb_on_site(2, 3.0),
            ],
        )
        .unwrap();
        let circuit = compile_trotter_step(&h, 0.1).unwrap();
        let u = circuit_unitary(&circuit).unwrap();
        let r = reference_unitary(&circuit.trace, &h, 0.1).unwrap();
        let dense = reference_unitary_dense(&circuit.trace, &h, 0.1).unwrap();
        assert!(equivalence_check(&u, &r).unwrap().distance < 1e-10);
        assert!(equivalence_check(&r, &dense).unwrap().distance < 1e-10);
    }
}
