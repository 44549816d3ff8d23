//! Effective lattice Hamiltonians of downfolded correlated-electron materials.
//!
//! A Hamiltonian is a list of [`InteractionTerm`]s of seven kinds (one-body
//! energies and hoppings, on-site and inter-orbital Coulomb terms, and the
//! three exchange-derived terms). Every stored term already represents its
//! full Hermitian combination, so one term is one interaction operator in a
//! Trotter step.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Spin projection of a spin-orbital.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    /// 0 for up, 1 for down; the offset of the spin inside an orbital pair.
    pub fn offset(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "up",
            Spin::Down => "down",
        })
    }
}

/// A fermionic mode: orbital index (1-based, flattened over the supercell) and spin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpinOrbital {
    pub orbital: usize,
    pub spin: Spin,
}

impl SpinOrbital {
    pub fn new(orbital: usize, spin: Spin) -> Self {
        Self { orbital, spin }
    }

    pub fn up(orbital: usize) -> Self {
        Self::new(orbital, Spin::Up)
    }

    pub fn down(orbital: usize) -> Self {
        Self::new(orbital, Spin::Down)
    }

    /// Qubit index in the initial ordering (1↑, 1↓, 2↑, 2↓, ...).
    pub fn initial_position(self) -> usize {
        2 * (self.orbital - 1) + self.spin.offset()
    }
}

impl fmt::Display for SpinOrbital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.spin {
            Spin::Up => '↑',
            Spin::Down => '↓',
        };
        write!(f, "{}{}", self.orbital, arrow)
    }
}

/// The seven interaction classes of the effective Hamiltonian, in their
/// canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TermKind {
    /// `t_pp n_pσ`
    OnSiteEnergy,
    /// `t_pq (a†_pσ a_qσ + h.c.)`
    Hopping,
    /// `U_pp n_p↑ n_p↓`
    CoulombOnSite,
    /// `U_pq n_pσ n_qσ'`
    CoulombOffSite,
    /// `−J_pq n_pσ n_qσ`
    ExchangeDensity,
    /// `J_pq (a†_p↑ a_p↓ a_q↑ a†_q↓ + h.c.)`
    ExchangeSpinFlip,
    /// `−J_pq (a†_p↑ a†_p↓ a_q↑ a_q↓ + h.c.)`
    ExchangePairHop,
}

/// Coefficient family a kind belongs to; thresholds and aggregates are per family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TermClass {
    /// |t|: one-body energies and hoppings.
    Hopping,
    /// U: Coulomb terms.
    Coulomb,
    /// J: exchange-derived terms.
    Exchange,
}

impl TermKind {
    pub const ALL: [TermKind; 7] = [
        TermKind::OnSiteEnergy,
        TermKind::Hopping,
        TermKind::CoulombOnSite,
        TermKind::CoulombOffSite,
        TermKind::ExchangeDensity,
        TermKind::ExchangeSpinFlip,
        TermKind::ExchangePairHop,
    ];

    /// Position in [`TermKind::ALL`].
    pub fn rank(self) -> usize {
        self as usize
    }

    pub fn class(self) -> TermClass {
        match self {
            TermKind::OnSiteEnergy | TermKind::Hopping => TermClass::Hopping,
            TermKind::CoulombOnSite | TermKind::CoulombOffSite => TermClass::Coulomb,
            TermKind::ExchangeDensity | TermKind::ExchangeSpinFlip | TermKind::ExchangePairHop => {
                TermClass::Exchange
            }
        }
    }

    /// Number of spin-orbitals the operator touches.
    pub fn locality(self) -> usize {
        match self {
            TermKind::OnSiteEnergy => 1,
            TermKind::Hopping
            | TermKind::CoulombOnSite
            | TermKind::CoulombOffSite
            | TermKind::ExchangeDensity => 2,
            TermKind::ExchangeSpinFlip | TermKind::ExchangePairHop => 4,
        }
    }

    /// Kinds that involve a single orbital (`q` absent).
    pub fn is_single_orbital(self) -> bool {
        matches!(self, TermKind::OnSiteEnergy | TermKind::CoulombOnSite)
    }

    pub fn name(self) -> &'static str {
        match self {
            TermKind::OnSiteEnergy => "OnSiteEnergy",
            TermKind::Hopping => "Hopping",
            TermKind::CoulombOnSite => "CoulombOnSite",
            TermKind::CoulombOffSite => "CoulombOffSite",
            TermKind::ExchangeDensity => "ExchangeDensity",
            TermKind::ExchangeSpinFlip => "ExchangeSpinFlip",
            TermKind::ExchangePairHop => "ExchangePairHop",
        }
    }

    pub fn from_name(name: &str) -> Option<TermKind> {
        TermKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One interaction operator with its real coefficient (eV).
///
/// Spin fields by kind:
/// - `OnSiteEnergy`, `Hopping`, `ExchangeDensity`: `spin` set, `spin_q` absent;
/// - `CoulombOffSite`: `spin` is σ on `p`, `spin_q` is σ' on `q`;
/// - `CoulombOnSite`, `ExchangeSpinFlip`, `ExchangePairHop`: no free spin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionTerm {
    pub kind: TermKind,
    pub p: usize,
    pub q: Option<usize>,
    pub spin: Option<Spin>,
    pub spin_q: Option<Spin>,
    pub coefficient: f64,
    /// Cell offset of `q` relative to `p`; all zero once flattened.
    pub cell_offset: [i64; 3],
}

/// Identity of a term independent of its coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub kind: TermKind,
    pub p: usize,
    pub q: Option<usize>,
    pub spin: Option<Spin>,
    pub spin_q: Option<Spin>,
    pub cell_offset: [i64; 3],
}

impl InteractionTerm {
    pub fn on_site_energy(p: usize, spin: Spin, coefficient: f64) -> Self {
        Self::build(
            TermKind::OnSiteEnergy,
            p,
            None,
            Some(spin),
            None,
            coefficient,
        )
    }

    pub fn hopping(p: usize, q: usize, spin: Spin, coefficient: f64) -> Self {
        Self::build(TermKind::Hopping, p, Some(q), Some(spin), None, coefficient)
    }

    pub fn coulomb_on_site(p: usize, coefficient: f64) -> Self {
        Self::build(TermKind::CoulombOnSite, p, None, None, None, coefficient)
    }

    pub fn coulomb_off_site(
        p: usize,
        q: usize,
        spin_p: Spin,
        spin_q: Spin,
        coefficient: f64,
    ) -> Self {
        Self::build(
            TermKind::CoulombOffSite,
            p,
            Some(q),
            Some(spin_p),
            Some(spin_q),
            coefficient,
        )
    }

    pub fn exchange_density(p: usize, q: usize, spin: Spin, coefficient: f64) -> Self {
        Self::build(
            TermKind::ExchangeDensity,
            p,
            Some(q),
            Some(spin),
            None,
            coefficient,
        )
    }

    pub fn exchange_spin_flip(p: usize, q: usize, coefficient: f64) -> Self {
        Self::build(
            TermKind::ExchangeSpinFlip,
            p,
            Some(q),
            None,
            None,
            coefficient,
        )
    }

    pub fn exchange_pair_hop(p: usize, q: usize, coefficient: f64) -> Self {
        Self::build(
            TermKind::ExchangePairHop,
            p,
            Some(q),
            None,
            None,
            coefficient,
        )
    }

    fn build(
        kind: TermKind,
        p: usize,
        q: Option<usize>,
        spin: Option<Spin>,
        spin_q: Option<Spin>,
        coefficient: f64,
    ) -> Self {
        Self {
            kind,
            p,
            q,
            spin,
            spin_q,
            coefficient,
            cell_offset: [0; 3],
        }
    }

    pub fn with_offset(mut self, cell_offset: [i64; 3]) -> Self {
        self.cell_offset = cell_offset;
        self
    }

    pub fn key(&self) -> TermKey {
        TermKey {
            kind: self.kind,
            p: self.p,
            q: self.q,
            spin: self.spin,
            spin_q: self.spin_q,
            cell_offset: self.cell_offset,
        }
    }

    /// Spin-orbitals touched by the term, in the operator's reference order.
    ///
    /// Exchange kinds return the block `(p↑, p↓, q↑, q↓)`.
    pub fn spin_orbitals(&self) -> Vec<SpinOrbital> {
        let q = self.q.unwrap_or(self.p);
        match self.kind {
            TermKind::OnSiteEnergy => vec![SpinOrbital::new(self.p, self.spin_or_up())],
            TermKind::CoulombOnSite => vec![SpinOrbital::up(self.p), SpinOrbital::down(self.p)],
            TermKind::Hopping | TermKind::ExchangeDensity => {
                let s = self.spin_or_up();
                vec![SpinOrbital::new(self.p, s), SpinOrbital::new(q, s)]
            }
            TermKind::CoulombOffSite => vec![
                SpinOrbital::new(self.p, self.spin_or_up()),
                SpinOrbital::new(q, self.spin_q.unwrap_or(Spin::Up)),
            ],
            TermKind::ExchangeSpinFlip | TermKind::ExchangePairHop => vec![
                SpinOrbital::up(self.p),
                SpinOrbital::down(self.p),
                SpinOrbital::up(q),
                SpinOrbital::down(q),
            ],
        }
    }

    fn spin_or_up(&self) -> Spin {
        self.spin.unwrap_or(Spin::Up)
    }

    /// Swap the roles of `p` and `q` (spins follow their orbitals). The
    /// operator is unchanged for every kind.
    fn swapped(&self) -> Self {
        let mut t = self.clone();
        if let Some(q) = self.q {
            t.p = q;
            t.q = Some(self.p);
            if self.kind == TermKind::CoulombOffSite {
                t.spin = self.spin_q;
                t.spin_q = self.spin;
            }
            t.cell_offset = self.cell_offset.map(|c| -c);
        }
        t
    }

    /// Representation with `p < q`, or for inter-cell bonds the smaller of
    /// `(p, q, s)` and `(q, p, −s)`.
    pub fn canonical(&self) -> Self {
        let Some(q) = self.q else {
            return self.clone();
        };
        let swapped = self.swapped();
        let own = (self.p, q, self.cell_offset, self.spin, self.spin_q);
        let other = (
            swapped.p,
            self.p,
            swapped.cell_offset,
            swapped.spin,
            swapped.spin_q,
        );
        if other < own {
            swapped
        } else {
            self.clone()
        }
    }

    fn check_shape(&self) -> Result<(), String> {
        let kind = self.kind;
        if kind.is_single_orbital() != self.q.is_none() {
            return Err(format!("{kind} term has inconsistent orbital indices"));
        }
        let needs_spin = matches!(
            kind,
            TermKind::OnSiteEnergy
                | TermKind::Hopping
                | TermKind::ExchangeDensity
                | TermKind::CoulombOffSite
        );
        if needs_spin != self.spin.is_some() {
            return Err(format!("{kind} term has inconsistent spin index"));
        }
        if (kind == TermKind::CoulombOffSite) != self.spin_q.is_some() {
            return Err(format!("{kind} term has inconsistent second spin index"));
        }
        if !self.coefficient.is_finite() {
            return Err(format!("{kind} term has a non-finite coefficient"));
        }
        Ok(())
    }
}

/// Class thresholds in eV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub t_min: f64,
    pub u_min: f64,
    pub j_min: f64,
}

impl Thresholds {
    pub const NONE: Thresholds = Thresholds {
        t_min: 0.0,
        u_min: 0.0,
        j_min: 0.0,
    };

    pub fn new(t_min: f64, u_min: f64, j_min: f64) -> Self {
        Self {
            t_min,
            u_min,
            j_min,
        }
    }

    pub fn for_class(&self, class: TermClass) -> f64 {
        match class {
            TermClass::Hopping => self.t_min,
            TermClass::Coulomb => self.u_min,
            TermClass::Exchange => self.j_min,
        }
    }
}

impl Default for Thresholds {
    /// 0.01 eV for |t|, 0.20 eV for U and J.
    fn default() -> Self {
        Self {
            t_min: 0.01,
            u_min: 0.20,
            j_min: 0.20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HamiltonianError {
    #[error("orbital index {index} out of range 1..={n_orbitals}")]
    OrbitalOutOfRange { index: usize, n_orbitals: usize },
    #[error("two-orbital term requires p < q within a cell, got p = {p}, q = {q}")]
    NotCanonical { p: usize, q: usize },
    #[error("duplicate term {0:?}")]
    Duplicate(TermKey),
    #[error("malformed term: {0}")]
    Malformed(String),
}

/// The effective Hamiltonian over a supercell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveHamiltonian {
    pub n_orbitals_per_cell: usize,
    pub supercell: [usize; 3],
    pub terms: Vec<InteractionTerm>,
    pub thresholds: Thresholds,
    /// True once orbitals are numbered over the whole supercell and all offsets are zero.
    pub flattened: bool,
}

impl EffectiveHamiltonian {
    /// Per-cell Hamiltonian; terms are validated and must be unique.
    pub fn new(
        n_orbitals_per_cell: usize,
        terms: Vec<InteractionTerm>,
    ) -> Result<Self, HamiltonianError> {
        let h = Self {
            n_orbitals_per_cell,
            supercell: [1, 1, 1],
            terms,
            thresholds: Thresholds::NONE,
            flattened: false,
        };
        h.validate()?;
        Ok(h)
    }

    /// Hamiltonian whose orbitals are already numbered globally (single cell, no offsets).
    pub fn flat(n_orbitals: usize, terms: Vec<InteractionTerm>) -> Result<Self, HamiltonianError> {
        if terms.iter().any(|t| t.cell_offset != [0; 3]) {
            return Err(HamiltonianError::Malformed(
                "flat Hamiltonian with cell offsets".into(),
            ));
        }
        let mut h = Self::new(n_orbitals, terms)?;
        h.flattened = true;
        Ok(h)
    }

    pub fn n_cells(&self) -> usize {
        self.supercell.iter().product()
    }

    pub fn total_orbitals(&self) -> usize {
        self.n_orbitals_per_cell * self.n_cells()
    }

    pub fn total_qubits(&self) -> usize {
        2 * self.total_orbitals()
    }

    /// Index checks, canonical order for intra-cell pairs, and uniqueness.
    pub fn validate(&self) -> Result<(), HamiltonianError> {
        let n = if self.flattened {
            self.total_orbitals()
        } else {
            self.n_orbitals_per_cell
        };
        let mut seen = std::collections::HashSet::new();
        for term in &self.terms {
            term.check_shape().map_err(HamiltonianError::Malformed)?;
            for index in std::iter::once(term.p).chain(term.q) {
                if index == 0 || index > n {
                    return Err(HamiltonianError::OrbitalOutOfRange {
                        index,
                        n_orbitals: n,
                    });
                }
            }
            if let Some(q) = term.q {
                if term.cell_offset == [0; 3] && term.p >= q {
                    return Err(HamiltonianError::NotCanonical { p: term.p, q });
                }
            }
            if !seen.insert(term.canonical().key()) {
                return Err(HamiltonianError::Duplicate(term.key()));
            }
        }
        Ok(())
    }

    /// Drop terms below their class threshold. Exchange terms are dropped per
    /// orbital pair: all terms sharing one `J_pq` go together.
    pub fn apply_thresholds(&self, thresholds: Thresholds) -> EffectiveHamiltonian {
        let mut exchange_strength: BTreeMap<(usize, Option<usize>, [i64; 3]), f64> =
            BTreeMap::new();
        for term in self
            .terms
            .iter()
            .filter(|t| t.kind.class() == TermClass::Exchange)
        {
            let c = term.canonical();
            let e = exchange_strength
                .entry((c.p, c.q, c.cell_offset))
                .or_insert(0.0);
            *e = e.max(term.coefficient.abs());
        }
        let terms = self
            .terms
            .iter()
            .filter(|term| {
                let class = term.kind.class();
                let magnitude = if class == TermClass::Exchange {
                    let c = term.canonical();
                    exchange_strength[&(c.p, c.q, c.cell_offset)]
                } else {
                    term.coefficient.abs()
                };
                magnitude >= thresholds.for_class(class)
            })
            .cloned()
            .collect();
        EffectiveHamiltonian {
            terms,
            thresholds,
            ..self.clone()
        }
    }

    /// Stamp every per-cell term into each cell of `grid` with periodic
    /// wraparound. Orbitals are numbered row-major over (x, y, z), then by
    /// local orbital. Periodic images that land on the same term are merged
    /// by summing coefficients.
    pub fn replicate_supercell(&self, grid: [usize; 3]) -> EffectiveHamiltonian {
        assert!(
            !self.flattened,
            "replicate_supercell expects a per-cell Hamiltonian"
        );
        assert!(
            grid.iter().all(|&g| g >= 1),
            "supercell grid components must be >= 1"
        );
        let n_orb = self.n_orbitals_per_cell;
        let cell_rank = |x: usize, y: usize, z: usize| (x * grid[1] + y) * grid[2] + z;
        let wrap =
            |v: usize, off: i64, len: usize| (v as i64 + off).rem_euclid(len as i64) as usize;

        let mut merged: BTreeMap<TermKey, InteractionTerm> = BTreeMap::new();
        let mut push = |term: InteractionTerm| {
            let term = term.canonical();
            merged
                .entry(term.key())
                .and_modify(|t| t.coefficient += term.coefficient)
                .or_insert(term);
        };

        for x in 0..grid[0] {
            for y in 0..grid[1] {
                for z in 0..grid[2] {
                    let base = cell_rank(x, y, z) * n_orb;
                    for term in &self.terms {
                        let mut t = term.clone();
                        t.p = base + term.p;
                        if let Some(q) = term.q {
                            let [ox, oy, oz] = term.cell_offset;
                            let other = cell_rank(
                                wrap(x, ox, grid[0]),
                                wrap(y, oy, grid[1]),
                                wrap(z, oz, grid[2]),
                            );
                            t.q = Some(other * n_orb + q);
                        }
                        t.cell_offset = [0; 3];
                        if t.q == Some(t.p) {
                            reduce_self_image(&t).into_iter().for_each(&mut push);
                        } else {
                            push(t);
                        }
                    }
                }
            }
        }

        EffectiveHamiltonian {
            n_orbitals_per_cell: n_orb,
            supercell: grid,
            terms: merged.into_values().collect(),
            thresholds: self.thresholds,
            flattened: true,
        }
    }

    /// Counts by kind.
    pub fn term_counts(&self) -> TermCounts {
        let mut counts = TermCounts::default();
        for term in &self.terms {
            counts.add(term.kind, 1);
        }
        counts
    }
}

/// Rewrite a two-orbital term whose orbitals coincide (a periodic image of
/// itself) as the equivalent on-site operators.
fn reduce_self_image(term: &InteractionTerm) -> Vec<InteractionTerm> {
    let p = term.p;
    let c = term.coefficient;
    let spin = term.spin.unwrap_or(Spin::Up);
    match term.kind {
        TermKind::Hopping => vec![InteractionTerm::on_site_energy(p, spin, 2.0 * c)],
        TermKind::CoulombOffSite => {
            if term.spin == term.spin_q {
                vec![InteractionTerm::on_site_energy(p, spin, c)]
            } else {
                vec![InteractionTerm::coulomb_on_site(p, c)]
            }
        }
        TermKind::ExchangeDensity => vec![InteractionTerm::on_site_energy(p, spin, -c)],
        TermKind::ExchangeSpinFlip => vec![
            InteractionTerm::on_site_energy(p, Spin::Up, -2.0 * c),
            InteractionTerm::coulomb_on_site(p, 2.0 * c),
        ],
        TermKind::ExchangePairHop => vec![InteractionTerm::coulomb_on_site(p, 2.0 * c)],
        TermKind::OnSiteEnergy | TermKind::CoulombOnSite => vec![term.clone()],
    }
}

/// Number of terms of each kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermCounts {
    counts: [u64; 7],
}

impl TermCounts {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (TermKind, u64)>) -> Self {
        let mut c = Self::default();
        for (k, n) in pairs {
            c.add(k, n);
        }
        c
    }

    pub fn get(&self, kind: TermKind) -> u64 {
        self.counts[kind.rank()]
    }

    pub fn add(&mut self, kind: TermKind, n: u64) {
        self.counts[kind.rank()] += n;
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermKind, u64)> + '_ {
        TermKind::ALL.into_iter().map(|k| (k, self.get(k)))
    }

    /// Aggregate over a coefficient family (|t|, U or J).
    pub fn class_total(&self, class: TermClass) -> u64 {
        self.iter()
            .filter(|(k, _)| k.class() == class)
            .map(|(_, n)| n)
            .sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn scaled(&self, factor: u64) -> Self {
        Self {
            counts: self.counts.map(|c| c * factor),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_orbital_initial_positions() {
        assert_eq!(SpinOrbital::up(1).initial_position(), 0);
        assert_eq!(SpinOrbital::down(1).initial_position(), 1);
        assert_eq!(SpinOrbital::up(3).initial_position(), 4);
    }

    #[test]
    fn rejects_noncanonical_and_duplicates() {
        let err = EffectiveHamiltonian::new(2, vec![InteractionTerm::hopping(2, 1, Spin::Up, 1.0)]);
        assert_eq!(
            err.unwrap_err(),
            HamiltonianError::NotCanonical { p: 2, q: 1 }
        );

        let dup = EffectiveHamiltonian::new(
            2,
            vec![
                InteractionTerm::coulomb_on_site(1, 1.0),
                InteractionTerm::coulomb_on_site(1, 2.0),
            ],
        );
        assert!(matches!(dup, Err(HamiltonianError::Duplicate(_))));

        let range = EffectiveHamiltonian::new(1, vec![InteractionTerm::coulomb_on_site(2, 1.0)]);
        assert!(matches!(
            range,
            Err(HamiltonianError::OrbitalOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn mirrored_inter_cell_bonds_are_duplicates() {
        let a = InteractionTerm::hopping(1, 2, Spin::Up, 1.0).with_offset([1, 0, 0]);
        let b = InteractionTerm::hopping(2, 1, Spin::Up, 1.0).with_offset([-1, 0, 0]);
        assert!(matches!(
            EffectiveHamiltonian::new(2, vec![a, b]),
            Err(HamiltonianError::Duplicate(_))
        ));
    }

    #[test]
    fn threshold_drops_small_hopping() {
        let h = EffectiveHamiltonian::new(
            2,
            vec![
                InteractionTerm::hopping(1, 2, Spin::Up, 0.009),
                InteractionTerm::hopping(1, 2, Spin::Down, -0.011),
            ],
        )
        .unwrap();
        let kept = h.apply_thresholds(Thresholds::default());
        assert_eq!(kept.terms.len(), 1);
        assert_eq!(kept.terms[0].coefficient, -0.011);
    }

    #[test]
    fn zero_thresholds_are_identity() {
        let h = EffectiveHamiltonian::new(
            2,
            vec![
                InteractionTerm::on_site_energy(1, Spin::Up, 1e-9),
                InteractionTerm::exchange_spin_flip(1, 2, 1e-9),
            ],
        )
        .unwrap();
        assert_eq!(h.apply_thresholds(Thresholds::NONE).terms, h.terms);
    }

    #[test]
    fn exchange_group_dropped_together() {
        let h = EffectiveHamiltonian::new(
            2,
            vec![
                InteractionTerm::exchange_density(1, 2, Spin::Up, 0.1),
                InteractionTerm::exchange_density(1, 2, Spin::Down, 0.1),
                InteractionTerm::exchange_spin_flip(1, 2, 0.1),
                InteractionTerm::exchange_pair_hop(1, 2, 0.1),
            ],
        )
        .unwrap();
        assert!(h.apply_thresholds(Thresholds::default()).terms.is_empty());
        assert_eq!(
            h.apply_thresholds(Thresholds::new(0.0, 0.0, 0.1))
                .terms
                .len(),
            4
        );
    }

    #[test]
    fn ring_of_four_cells() {
        let h = EffectiveHamiltonian::new(
            1,
            vec![
                InteractionTerm::hopping(1, 1, Spin::Up, -1.0).with_offset([1, 0, 0]),
                InteractionTerm::hopping(1, 1, Spin::Down, -1.0).with_offset([1, 0, 0]),
            ],
        )
        .unwrap();
        let ring = h.replicate_supercell([4, 1, 1]);
        assert_eq!(ring.total_qubits(), 8);
        let mut bonds: Vec<_> = ring
            .terms
            .iter()
            .filter(|t| t.spin == Some(Spin::Up))
            .map(|t| (t.p, t.q.unwrap()))
            .collect();
        bonds.sort();
        assert_eq!(bonds, vec![(1, 2), (1, 4), (2, 3), (3, 4)]);
        assert_eq!(ring.term_counts().get(TermKind::Hopping), 8);
    }

    #[test]
    fn wraparound_collisions_merge() {
        // offsets +1 and -1 name the same bond on a ring of two cells
        let h = EffectiveHamiltonian::new(
            1,
            vec![
                InteractionTerm::coulomb_off_site(1, 1, Spin::Up, Spin::Up, 0.5)
                    .with_offset([1, 0, 0]),
                InteractionTerm::coulomb_on_site(1, 3.0),
            ],
        )
        .unwrap();
        let r = h.replicate_supercell([2, 1, 1]);
        let off: Vec<_> = r
            .terms
            .iter()
            .filter(|t| t.kind == TermKind::CoulombOffSite)
            .collect();
        assert_eq!(off.len(), 1);
        assert_eq!((off[0].p, off[0].q), (1, Some(2)));
        assert!((off[0].coefficient - 1.0).abs() < 1e-15);
    }

    #[test]
    fn self_images_become_on_site_terms() {
        let h = EffectiveHamiltonian::new(
            1,
            vec![InteractionTerm::hopping(1, 1, Spin::Down, -0.5).with_offset([0, 1, 0])],
        )
        .unwrap();
        let r = h.replicate_supercell([1, 1, 1]);
        assert_eq!(
            r.terms,
            vec![InteractionTerm::on_site_energy(1, Spin::Down, -1.0)]
        );
    }

    #[test]
    fn counts_aggregate_by_class() {
        let h = EffectiveHamiltonian::new(
            1,
            vec![
                InteractionTerm::on_site_energy(1, Spin::Up, 1.0),
                InteractionTerm::on_site_energy(1, Spin::Down, 1.0),
                InteractionTerm::coulomb_on_site(1, 4.0),
            ],
        )
        .unwrap();
        let c = h.term_counts();
        assert_eq!(c.get(TermKind::OnSiteEnergy), 2);
        assert_eq!(c.get(TermKind::CoulombOnSite), 1);
        assert_eq!(c.class_total(TermClass::Hopping), 2);
        assert_eq!(c.class_total(TermClass::Coulomb), 1);
        assert_eq!(c.class_total(TermClass::Exchange), 0);
        assert!(EffectiveHamiltonian::new(1, vec![])
            .unwrap()
            .term_counts()
            .is_empty());
    }
}
