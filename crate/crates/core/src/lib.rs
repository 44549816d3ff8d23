//! Trotter-step compilation of lattice effective Hamiltonians onto a linear
//! qubit array with a fermionic swap network, plus resource estimates and a
//! dense state-vector check.

pub mod circuit_file;
pub mod fixtures;
pub mod gates;
pub mod hamfile;
pub mod hamiltonian;
pub mod network;
pub mod oracle;
pub mod pauli;
pub mod registry;
pub mod reproduce;
pub mod resources;

pub use gates::{Gate, GateCounts, GateOp};
pub use hamiltonian::{
    EffectiveHamiltonian, InteractionTerm, Spin, SpinOrbital, TermKind, Thresholds,
};
pub use network::{compile_trotter_step, CompiledCircuit};
pub use resources::{Metric, ResourceReport};
