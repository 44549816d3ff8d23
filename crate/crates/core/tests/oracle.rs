use fswap_core::fixtures::{builtin_cell, random_all_kinds, random_hamiltonian};
use fswap_core::gates::Gate;
use fswap_core::hamiltonian::{EffectiveHamiltonian, InteractionTerm, Spin, TermKind};
use fswap_core::network::compile_trotter_step;
use fswap_core::oracle::{
    check_compiled, circuit_unitary, equivalence_check, exact_term_exponential, gates_unitary,
    reference_unitary, reference_unitary_dense, ReferenceProgram, StateVector, C64,
};
use fswap_core::pauli::QubitLayout;
use fswap_core::reproduce::{log_log_slope, trotter_errors, TROTTER_STEPS};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn compiled_distance(h: &EffectiveHamiltonian, dt: f64) -> f64 {
    let c = compile_trotter_step(h, dt).unwrap();
    let u = circuit_unitary(&c).unwrap();
    let r = reference_unitary(&c.trace, h, dt).unwrap();
    equivalence_check(&u, &r).unwrap().distance
}

#[test]
fn all_kinds_fixture_matches_reference() {
    let h = builtin_cell("all_kinds2");
    for kind in TermKind::ALL {
        assert!(h.terms.iter().any(|t| t.kind == kind), "{kind:?} missing");
    }
    assert!(compiled_distance(&h, 0.05) <= 1e-9);
}

#[test]
fn three_orbital_and_hubbard_ring_match_reference() {
    assert!(compiled_distance(&builtin_cell("three_orbital"), 0.1) <= 1e-9);
    assert!(compiled_distance(&builtin_cell("hubbard4"), 0.05) <= 1e-9);
}

#[test]
fn state_and_dense_references_agree() {
    let h = builtin_cell("three_orbital");
    let c = compile_trotter_step(&h, 0.2).unwrap();
    let a = reference_unitary(&c.trace, &h, 0.2).unwrap();
    let b = reference_unitary_dense(&c.trace, &h, 0.2).unwrap();
    assert!(equivalence_check(&a, &b).unwrap().distance <= 1e-10);
}

#[test]
fn single_diagonal_term_reference_is_its_exponential() {
    let h = EffectiveHamiltonian::flat(1, vec![InteractionTerm::coulomb_on_site(1, 2.5)]).unwrap();
    let c = compile_trotter_step(&h, 0.3).unwrap();
    let r = reference_unitary(&c.trace, &h, 0.3).unwrap();
    let e = exact_term_exponential(&h.terms[0], &QubitLayout::initial(1), 0.3).unwrap();
    assert!(equivalence_check(&r, &e).unwrap().distance < 1e-12);
}

#[test]
fn commuting_terms_reference_ignores_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let kinds = [
        TermKind::OnSiteEnergy,
        TermKind::CoulombOnSite,
        TermKind::CoulombOffSite,
        TermKind::ExchangeDensity,
    ];
    let h = random_hamiltonian(&mut rng, 3, &kinds, 0.6);
    let c = compile_trotter_step(&h, 0.2).unwrap();
    let program = ReferenceProgram::from_trace(&c.trace, &h, 0.2).unwrap();
    let base = program.unitary().unwrap();
    let n = program.exponentials.len();
    for _ in 0..10 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let d = equivalence_check(&program.with_swapped(i, j).unitary().unwrap(), &base).unwrap();
        assert!(d.distance <= 1e-12);
    }
}

#[test]
fn non_commuting_reorder_is_detected() {
    // hopping and on-site Coulomb on a shared orbital do not commute
    let h = builtin_cell("all_kinds2");
    let c = compile_trotter_step(&h, 0.2).unwrap();
    let program = ReferenceProgram::from_trace(&c.trace, &h, 0.2).unwrap();
    let hop = program
        .exponentials
        .iter()
        .position(|(id, _)| h.terms[*id].kind == TermKind::Hopping)
        .unwrap();
    let u = program
        .exponentials
        .iter()
        .position(|(id, _)| h.terms[*id].kind == TermKind::CoulombOnSite)
        .unwrap();
    let d = equivalence_check(
        &program.with_swapped(hop, u).unitary().unwrap(),
        &program.unitary().unwrap(),
    )
    .unwrap();
    assert!(d.distance > 1e-6);
}

#[test]
fn corrupted_angle_is_caught() {
    let h = builtin_cell("all_kinds2");
    let c = compile_trotter_step(&h, 0.05).unwrap();
    let mut gates: Vec<Gate> = c.gates().map(|op| op.gate).collect();
    let k = gates
        .iter()
        .position(|g| matches!(g, Gate::Rz(..)))
        .unwrap();
    if let Gate::Rz(q, t) = gates[k] {
        gates[k] = Gate::Rz(q, t + 0.01);
    }
    let u = gates_unitary(&gates, c.n_qubits).unwrap();
    let r = reference_unitary(&c.trace, &h, 0.05).unwrap();
    assert!(equivalence_check(&u, &r).unwrap().distance > 1e-4);
}

fn random_gate(rng: &mut impl Rng, n: usize) -> Gate {
    let q = rng.gen_range(0..n);
    let theta = rng.gen_range(-3.0..3.0);
    match rng.gen_range(0..8) {
        0 => Gate::H(q),
        1 => Gate::Y(q),
        2 => Gate::Ydg(q),
        3 => Gate::Rx(q, theta),
        4 => Gate::Rz(q, theta),
        5 => Gate::T(q, theta),
        6 => Gate::G(theta),
        _ => {
            let t = (q + rng.gen_range(1..n)) % n;
            Gate::Cnot {
                control: q,
                target: t,
            }
        }
    }
}

#[test]
fn random_eight_qubit_circuit_matches_dense_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let gates: Vec<Gate> = (0..300).map(|_| random_gate(&mut rng, 8)).collect();
    let u = gates_unitary(&gates, 8).unwrap();
    for _ in 0..3 {
        let psi = StateVector::random(8, &mut rng).unwrap();
        let mut out = psi.clone();
        out.apply_gates(gates.iter()).unwrap();
        assert!((out.norm() - 1.0).abs() <= 1e-12);
        let dense = &u * psi.to_dvector();
        assert!((dense - out.to_dvector()).norm() < 1e-12);
    }
}

#[test]
fn gate_level_matches_dense_up_to_ten_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n_orb in [2usize, 3, 4, 5] {
        let h = random_all_kinds(&mut rng, n_orb, if n_orb == 5 { 0.08 } else { 0.3 });
        let c = compile_trotter_step(&h, 0.1).unwrap();
        let u = circuit_unitary(&c).unwrap();
        let psi = StateVector::random(c.n_qubits, &mut rng).unwrap();
        let mut out = psi.clone();
        out.apply_circuit(&c).unwrap();
        assert!(
            (&u * psi.to_dvector() - out.to_dvector()).norm() < 1e-10,
            "{n_orb} orbitals"
        );
    }
}

#[test]
fn probe_check_on_twelve_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let h = random_all_kinds(&mut rng, 6, 0.3);
    let c = compile_trotter_step(&h, 0.2).unwrap();
    let eq = check_compiled(&c, &h, &mut rng).unwrap();
    assert!(eq.distance <= 1e-9, "{eq:?}");
}

#[test]
fn size_guards() {
    let h = random_all_kinds(&mut ChaCha8Rng::seed_from_u64(1), 7, 0.1);
    let c = compile_trotter_step(&h, 0.1).unwrap();
    assert!(circuit_unitary(&c).is_err());
    assert!(check_compiled(&c, &h, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
}

/// Occupation-basis matrix of `a†_j` built from its action on basis states.
fn creation(j: usize, n: usize) -> DMatrix<C64> {
    let dim = 1 << n;
    let mut m = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        if s & (1 << j) == 0 {
            let parity = (s & ((1 << j) - 1)).count_ones();
            m[(s | (1 << j), s)] = C64::new(if parity.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0);
        }
    }
    m
}

#[test]
fn term_exponentials_match_independent_construction() {
    let n = 4;
    let c: Vec<DMatrix<C64>> = (0..n).map(|j| creation(j, n)).collect();
    let a: Vec<DMatrix<C64>> = c.iter().map(|m| m.adjoint()).collect();
    let (pu, pd, qu, qd) = (0, 1, 2, 3);
    let pair = &c[pu] * &c[pd] * &a[qu] * &a[qd];
    let flip = &c[pu] * &a[pd] * &a[qu] * &c[qd];
    let hop = &c[pu] * &a[qu];
    let cases = [
        (
            InteractionTerm::exchange_pair_hop(1, 2, 0.7),
            -(&pair + pair.adjoint()) * C64::new(0.7, 0.0),
        ),
        (
            InteractionTerm::exchange_spin_flip(1, 2, 0.7),
            (&flip + flip.adjoint()) * C64::new(0.7, 0.0),
        ),
        (
            InteractionTerm::hopping(1, 2, Spin::Up, -0.4),
            (&hop + hop.adjoint()) * C64::new(-0.4, 0.0),
        ),
        (
            InteractionTerm::coulomb_off_site(1, 2, Spin::Down, Spin::Up, 1.3),
            &c[pd] * &a[pd] * &c[qu] * &a[qu] * C64::new(1.3, 0.0),
        ),
    ];
    let layout = QubitLayout::initial(2);
    for (term, h) in cases {
        for dt in [0.05, 0.3, 1.1] {
            let ours = exact_term_exponential(&term, &layout, dt).unwrap();
            let pade = (&h * C64::new(0.0, -dt)).exp();
            assert!((ours - pade).norm() < 1e-10, "{:?} dt={dt}", term.kind);
        }
    }
}

#[test]
fn trotter_error_is_first_order() {
    let errors = trotter_errors("all_kinds2", 1.0, &TROTTER_STEPS);
    let slope = log_log_slope(&TROTTER_STEPS, &errors);
    assert!(
        (slope - 1.0).abs() <= 0.2,
        "slope {slope}, errors {errors:?}"
    );
    assert!(errors.windows(2).all(|w| w[1] < w[0]));
}
