//! Jordan-Wigner encoding of the Hamiltonian terms into Pauli sums.
//!
//! Qubit `k` holds the spin-orbital at physical position `k` of a
//! [`QubitLayout`]; `|1⟩` is occupied. The Z-string of a ladder operator runs
//! over all positions strictly below its target.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::hamiltonian::{InteractionTerm, SpinOrbital, TermKind};

const MERGE_EPS: f64 = 1e-12;

/// Largest register for which dense matrices are built.
pub const MAX_DENSE_QUBITS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// `self · other = phase · result` (`None` for identity).
    fn mul(self, other: Pauli) -> (Complex64, Option<Pauli>) {
        use Pauli::*;
        let i = Complex64::i();
        match (self, other) {
            (a, b) if a == b => (Complex64::new(1.0, 0.0), None),
            (X, Y) => (i, Some(Z)),
            (Y, X) => (-i, Some(Z)),
            (Y, Z) => (i, Some(X)),
            (Z, Y) => (-i, Some(X)),
            (Z, X) => (i, Some(Y)),
            (X, Z) => (-i, Some(Y)),
            _ => unreachable!(),
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::i();
        match self {
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        })
    }
}

/// Tensor product of non-identity Paulis; identity factors are omitted.
pub type PauliOps = BTreeMap<usize, Pauli>;

#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    pub ops: PauliOps,
    pub coefficient: Complex64,
}

impl PauliString {
    pub fn new(ops: PauliOps, coefficient: Complex64) -> Self {
        Self { ops, coefficient }
    }

    pub fn single(qubit: usize, pauli: Pauli, coefficient: Complex64) -> Self {
        Self::new(PauliOps::from([(qubit, pauli)]), coefficient)
    }

    pub fn weight(&self) -> usize {
        self.ops.len()
    }

    /// True when the two strings commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .ops
            .iter()
            .filter(|(q, p)| other.ops.get(q).is_some_and(|o| o != *p))
            .count();
        anti % 2 == 0
    }

    /// Apply to a state vector (bit `k` of the index is qubit `k`), accumulating
    /// `scale · P |ψ⟩` into `out`. The string's own coefficient is ignored.
    pub fn apply_unit(&self, state: &[Complex64], scale: Complex64, out: &mut [Complex64]) {
        let mut flip = 0usize;
        let mut z_mask = 0usize;
        let mut y_count = 0u32;
        for (&q, &p) in &self.ops {
            match p {
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    z_mask |= 1 << q;
                    y_count += 1;
                }
                Pauli::Z => z_mask |= 1 << q,
            }
        }
        // Y = i·X·Z, so P = i^{#Y} · X-part · Z-part
        let base = scale * Complex64::i().powu(y_count);
        for (idx, amp) in state.iter().enumerate() {
            let sign = if (idx & z_mask).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            out[idx ^ flip] += base * amp * sign;
        }
    }
}

/// Sum of Pauli strings with like terms merged.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PauliSum {
    terms: BTreeMap<Vec<(usize, Pauli)>, Complex64>,
}

impl PauliSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity(coefficient: Complex64) -> Self {
        let mut s = Self::zero();
        s.add_term(Vec::new(), coefficient);
        s
    }

    pub fn from_strings(strings: impl IntoIterator<Item = PauliString>) -> Self {
        let mut s = Self::zero();
        for ps in strings {
            s.add_term(ps.ops.into_iter().collect(), ps.coefficient);
        }
        s
    }

    fn add_term(&mut self, key: Vec<(usize, Pauli)>, c: Complex64) {
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() < MERGE_EPS {
            self.terms.remove(&key);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn strings(&self) -> impl Iterator<Item = PauliString> + '_ {
        self.terms
            .iter()
            .map(|(k, &c)| PauliString::new(k.iter().copied().collect(), c))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self::zero();
        for (k, &c) in &self.terms {
            out.add_term(k.clone(), c * factor);
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zero();
        for (k, &c) in &self.terms {
            out.add_term(k.clone(), c.conj());
        }
        out
    }

    /// Highest qubit index referenced, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|k| k.last().map(|&(q, _)| q))
            .max()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    pub fn all_commute(&self) -> bool {
        let strings: Vec<_> = self.strings().collect();
        strings
            .iter()
            .enumerate()
            .all(|(i, a)| strings[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// `H |ψ⟩`.
    pub fn apply(&self, state: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
        for s in self.strings() {
            s.apply_unit(state, s.coefficient, &mut out);
        }
        out
    }

    /// `exp(−iθH) |ψ⟩` for a sum of mutually commuting Hermitian strings,
    /// using `exp(−iφP) = cos φ − i sin φ P` string by string.
    pub fn apply_exp(&self, theta: f64, state: &mut Vec<Complex64>) {
        debug_assert!(self.all_commute(), "apply_exp needs commuting strings");
        for s in self.strings() {
            let phi = theta * s.coefficient.re;
            let mut out: Vec<Complex64> = state.iter().map(|a| a * phi.cos()).collect();
            s.apply_unit(state, Complex64::new(0.0, -phi.sin()), &mut out);
            *state = out;
        }
    }
}

impl Add for &PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: &PauliSum) -> PauliSum {
        let mut out = self.clone();
        for (k, &c) in &rhs.terms {
            out.add_term(k.clone(), c);
        }
        out
    }
}

impl Mul for &PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: &PauliSum) -> PauliSum {
        let mut out = PauliSum::zero();
        for (ka, &ca) in &self.terms {
            for (kb, &cb) in &rhs.terms {
                let mut ops: PauliOps = ka.iter().copied().collect();
                let mut phase = Complex64::new(1.0, 0.0);
                for &(q, p) in kb {
                    match ops.get(&q) {
                        None => {
                            ops.insert(q, p);
                        }
                        Some(&existing) => {
                            let (ph, res) = existing.mul(p);
                            phase *= ph;
                            match res {
                                Some(r) => {
                                    ops.insert(q, r);
                                }
                                None => {
                                    ops.remove(&q);
                                }
                            }
                        }
                    }
                }
                out.add_term(ops.into_iter().collect(), ca * cb * phase);
            }
        }
        out
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            if k.is_empty() {
                f.write_str("·I")?;
            }
            for (q, p) in k {
                write!(f, "·{p}{q}")?;
            }
        }
        Ok(())
    }
}

/// Assignment of spin-orbitals to physical qubit positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitLayout {
    sequence: Vec<SpinOrbital>,
    positions: HashMap<SpinOrbital, usize>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LayoutError {
    #[error("spin-orbital {0} is not in the layout")]
    Missing(SpinOrbital),
    #[error("layout is not a permutation: {0}")]
    NotPermutation(String),
}

impl QubitLayout {
    /// `(1↑, 1↓, 2↑, 2↓, …)` for `n_orbitals` orbitals.
    pub fn initial(n_orbitals: usize) -> Self {
        let sequence = (1..=n_orbitals)
            .flat_map(|o| [SpinOrbital::up(o), SpinOrbital::down(o)])
            .collect();
        Self::from_sequence(sequence).expect("initial layout is a permutation")
    }

    pub fn from_sequence(sequence: Vec<SpinOrbital>) -> Result<Self, LayoutError> {
        let mut positions = HashMap::with_capacity(sequence.len());
        for (i, &so) in sequence.iter().enumerate() {
            if positions.insert(so, i).is_some() {
                return Err(LayoutError::NotPermutation(format!("{so} appears twice")));
            }
        }
        Ok(Self {
            sequence,
            positions,
        })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[SpinOrbital] {
        &self.sequence
    }

    pub fn position(&self, so: SpinOrbital) -> Option<usize> {
        self.positions.get(&so).copied()
    }

    pub fn at(&self, position: usize) -> SpinOrbital {
        self.sequence[position]
    }

    /// Exchange the spin-orbitals at `k` and `k + 1`.
    pub fn swap_adjacent(&mut self, k: usize) {
        self.sequence.swap(k, k + 1);
        self.positions.insert(self.sequence[k], k);
        self.positions.insert(self.sequence[k + 1], k + 1);
    }

    /// Orbital indices pair by pair (each pair is two consecutive positions).
    pub fn orbital_sequence(&self) -> Vec<usize> {
        self.sequence.chunks(2).map(|c| c[0].orbital).collect()
    }
}

/// `a†` (`dagger`) or `a` for `target` at its current position.
pub fn jw_ladder(
    target: SpinOrbital,
    layout: &QubitLayout,
    dagger: bool,
) -> Result<PauliSum, LayoutError> {
    let k = layout
        .position(target)
        .ok_or(LayoutError::Missing(target))?;
    Ok(ladder_at(k, dagger))
}

fn ladder_at(k: usize, dagger: bool) -> PauliSum {
    let z_string: PauliOps = (0..k).map(|q| (q, Pauli::Z)).collect();
    let half = Complex64::new(0.5, 0.0);
    let y_sign = if dagger { -1.0 } else { 1.0 };
    let mut x_ops = z_string.clone();
    x_ops.insert(k, Pauli::X);
    let mut y_ops = z_string;
    y_ops.insert(k, Pauli::Y);
    PauliSum::from_strings([
        PauliString::new(x_ops, half),
        PauliString::new(y_ops, Complex64::new(0.0, 0.5 * y_sign)),
    ])
}

/// Unit-coefficient operator of `kind` acting on the modes at `positions`
/// (reference order of [`InteractionTerm::spin_orbitals`]), including the
/// sign the kind carries in the Hamiltonian.
pub fn kind_operator(kind: TermKind, positions: &[usize]) -> PauliSum {
    let cr = |i: usize| ladder_at(positions[i], true);
    let an = |i: usize| ladder_at(positions[i], false);
    let num = |i: usize| &cr(i) * &an(i);
    let one = Complex64::new(1.0, 0.0);
    match kind {
        TermKind::OnSiteEnergy => num(0),
        TermKind::Hopping => &(&cr(0) * &an(1)) + &(&cr(1) * &an(0)),
        TermKind::CoulombOnSite | TermKind::CoulombOffSite => &num(0) * &num(1),
        TermKind::ExchangeDensity => (&num(0) * &num(1)).scale(-one),
        TermKind::ExchangeSpinFlip => {
            // a†_p↑ a_p↓ a_q↑ a†_q↓ + h.c.
            let x = &(&(&cr(0) * &an(1)) * &an(2)) * &cr(3);
            &x + &x.dagger()
        }
        TermKind::ExchangePairHop => {
            // −(a†_p↑ a†_p↓ a_q↑ a_q↓ + h.c.)
            let x = &(&(&cr(0) * &cr(1)) * &an(2)) * &an(3);
            (&x + &x.dagger()).scale(-one)
        }
    }
}

/// Hermitian Pauli sum of a whole term (coefficient included) in `layout`.
pub fn term_to_pauli(
    term: &InteractionTerm,
    layout: &QubitLayout,
) -> Result<PauliSum, LayoutError> {
    let positions = term
        .spin_orbitals()
        .into_iter()
        .map(|so| layout.position(so).ok_or(LayoutError::Missing(so)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(kind_operator(term.kind, &positions).scale(Complex64::new(term.coefficient, 0.0)))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DenseError {
    #[error("{requested} qubits exceeds the dense limit of {limit}")]
    TooLarge { requested: usize, limit: usize },
    #[error("Pauli sum references qubit {qubit} outside a {n_qubits}-qubit register")]
    OutOfRange { qubit: usize, n_qubits: usize },
}

/// Dense `2ⁿ × 2ⁿ` matrix of a Pauli sum.
pub fn pauli_matrix(ps: &PauliSum, n_qubits: usize) -> Result<DMatrix<Complex64>, DenseError> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(DenseError::TooLarge {
            requested: n_qubits,
            limit: MAX_DENSE_QUBITS,
        });
    }
    if let Some(q) = ps.max_qubit() {
        if q >= n_qubits {
            return Err(DenseError::OutOfRange { qubit: q, n_qubits });
        }
    }
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::zeros(dim, dim);
    let mut basis = vec![Complex64::new(0.0, 0.0); dim];
    for col in 0..dim {
        basis[col] = Complex64::new(1.0, 0.0);
        let image = ps.apply(&basis);
        for (row, v) in image.into_iter().enumerate() {
            m[(row, col)] = v;
        }
        basis[col] = Complex64::new(0.0, 0.0);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Spin;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn creation_at_position_zero() {
        let layout = QubitLayout::initial(2);
        let a = jw_ladder(SpinOrbital::up(1), &layout, true).unwrap();
        let expected = PauliSum::from_strings([
            PauliString::single(0, Pauli::X, c(0.5, 0.0)),
            PauliString::single(0, Pauli::Y, c(0.0, -0.5)),
        ]);
        assert_eq!(a, expected);
    }

    #[test]
    fn annihilation_at_position_two() {
        let layout = QubitLayout::initial(2);
        let a = jw_ladder(SpinOrbital::up(2), &layout, false).unwrap();
        let z = |k: Pauli| PauliOps::from([(0, Pauli::Z), (1, Pauli::Z), (2, k)]);
        let expected = PauliSum::from_strings([
            PauliString::new(z(Pauli::X), c(0.5, 0.0)),
            PauliString::new(z(Pauli::Y), c(0.0, 0.5)),
        ]);
        assert_eq!(a, expected);
    }

    #[test]
    fn missing_target_is_an_error() {
        let layout = QubitLayout::initial(1);
        assert_eq!(
            jw_ladder(SpinOrbital::up(2), &layout, true),
            Err(LayoutError::Missing(SpinOrbital::up(2)))
        );
    }

    #[test]
    fn number_operator_form() {
        let layout = QubitLayout::initial(2);
        let t = InteractionTerm::on_site_energy(2, Spin::Down, 0.7);
        let ps = term_to_pauli(&t, &layout).unwrap();
        let expected = PauliSum::from_strings([
            PauliString::new(PauliOps::new(), c(0.35, 0.0)),
            PauliString::single(3, Pauli::Z, c(-0.35, 0.0)),
        ]);
        assert_eq!(ps, expected);
    }

    #[test]
    fn adjacent_hopping_form() {
        let layout = QubitLayout::from_sequence(vec![
            SpinOrbital::up(1),
            SpinOrbital::up(2),
            SpinOrbital::down(1),
            SpinOrbital::down(2),
        ])
        .unwrap();
        let t = InteractionTerm::hopping(1, 2, Spin::Up, -1.2);
        let ps = term_to_pauli(&t, &layout).unwrap();
        let expected = PauliSum::from_strings([
            PauliString::new(PauliOps::from([(0, Pauli::X), (1, Pauli::X)]), c(-0.6, 0.0)),
            PauliString::new(PauliOps::from([(0, Pauli::Y), (1, Pauli::Y)]), c(-0.6, 0.0)),
        ]);
        assert_eq!(ps, expected);
    }

    #[test]
    fn exchange_kinds_have_eight_commuting_weight_four_strings() {
        for kind in [TermKind::ExchangeSpinFlip, TermKind::ExchangePairHop] {
            let ps = kind_operator(kind, &[0, 1, 2, 3]);
            assert_eq!(ps.len(), 8, "{kind}");
            assert!(ps
                .strings()
                .all(|s| s.weight() == 4 && (s.coefficient.norm() - 0.125).abs() < 1e-15));
            assert!(ps.all_commute());
            assert!(ps.is_hermitian(0.0));
        }
    }

    #[test]
    fn small_dense_matrices() {
        let z = pauli_matrix(
            &PauliSum::from_strings([PauliString::single(0, Pauli::Z, c(1.0, 0.0))]),
            1,
        )
        .unwrap();
        assert_eq!(
            z,
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
        );
        let xx = PauliSum::from_strings([PauliString::new(
            PauliOps::from([(0, Pauli::X), (1, Pauli::X)]),
            c(1.0, 0.0),
        )]);
        let m = pauli_matrix(&xx, 2).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let expected = if r + col == 3 { 1.0 } else { 0.0 };
                assert_eq!(m[(r, col)], c(expected, 0.0));
            }
        }
        assert!(matches!(
            pauli_matrix(&xx, 15),
            Err(DenseError::TooLarge { .. })
        ));
        assert!(matches!(
            pauli_matrix(&xx, 1),
            Err(DenseError::OutOfRange { .. })
        ));
    }

    #[test]
    fn like_terms_cancel() {
        let a = PauliSum::from_strings([PauliString::single(0, Pauli::X, c(1.0, 0.0))]);
        let b = a.scale(c(-1.0, 0.0));
        assert!((&a + &b).is_empty());
    }
}
