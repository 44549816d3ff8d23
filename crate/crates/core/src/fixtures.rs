//! Bundled coefficient files and seeded random Hamiltonians.

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::hamfile::{parse_hamiltonian, ParseError};
use crate::hamiltonian::{EffectiveHamiltonian, InteractionTerm, Spin, TermKind};

/// Directory searched before the bundled fixtures.
pub const FIXTURE_DIR_ENV: &str = "FSWAP_FIXTURES";

pub const BUILTIN: [(&str, &str); 5] = [
    ("all_kinds2.ham", include_str!("../fixtures/all_kinds2.ham")),
    (
        "three_orbital.ham",
        include_str!("../fixtures/three_orbital.ham"),
    ),
    ("hubbard4.ham", include_str!("../fixtures/hubbard4.ham")),
    ("chain1.ham", include_str!("../fixtures/chain1.ham")),
    ("nio_like.ham", include_str!("../fixtures/nio_like.ham")),
];

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("no fixture named '{0}'")]
    NotFound(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{name}: {source}")]
    Parse { name: String, source: ParseError },
}

fn with_ext(name: &str) -> String {
    if name.ends_with(".ham") {
        name.to_string()
    } else {
        format!("{name}.ham")
    }
}

/// Fixture text, from `$FSWAP_FIXTURES` when set and the file exists there,
/// otherwise from the bundled set.
pub fn fixture_text(name: &str) -> Result<String, FixtureError> {
    let file = with_ext(name);
    if let Some(dir) = std::env::var_os(FIXTURE_DIR_ENV) {
        let path = Path::new(&dir).join(&file);
        if path.is_file() {
            return std::fs::read_to_string(&path)
                .map_err(|source| FixtureError::Io { path, source });
        }
    }
    BUILTIN
        .iter()
        .find(|(n, _)| *n == file)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| FixtureError::NotFound(name.to_string()))
}

pub fn load_fixture(name: &str) -> Result<EffectiveHamiltonian, FixtureError> {
    let text = fixture_text(name)?;
    parse_hamiltonian(&text).map_err(|source| FixtureError::Parse {
        name: with_ext(name),
        source,
    })
}

/// Bundled fixture, flattened to a single cell.
pub fn builtin_cell(name: &str) -> EffectiveHamiltonian {
    let file = with_ext(name);
    let text = BUILTIN
        .iter()
        .find(|(n, _)| *n == file)
        .expect("bundled fixture")
        .1;
    parse_hamiltonian(text)
        .expect("bundled fixture parses")
        .replicate_supercell([1, 1, 1])
}

/// Every term of `kind` that a flat `n_orbitals` Hamiltonian can hold.
pub fn candidate_terms(kind: TermKind, n_orbitals: usize) -> Vec<InteractionTerm> {
    let mut out = Vec::new();
    for p in 1..=n_orbitals {
        match kind {
            TermKind::OnSiteEnergy => {
                out.extend(Spin::BOTH.map(|s| InteractionTerm::on_site_energy(p, s, 1.0)))
            }
            TermKind::CoulombOnSite => out.push(InteractionTerm::coulomb_on_site(p, 1.0)),
            _ => {}
        }
        for q in p + 1..=n_orbitals {
            match kind {
                TermKind::Hopping => {
                    out.extend(Spin::BOTH.map(|s| InteractionTerm::hopping(p, q, s, 1.0)))
                }
                TermKind::CoulombOffSite => {
                    for s in Spin::BOTH {
                        out.extend(
                            Spin::BOTH
                                .map(|s2| InteractionTerm::coulomb_off_site(p, q, s, s2, 1.0)),
                        );
                    }
                }
                TermKind::ExchangeDensity => {
                    out.extend(Spin::BOTH.map(|s| InteractionTerm::exchange_density(p, q, s, 1.0)))
                }
                TermKind::ExchangeSpinFlip => {
                    out.push(InteractionTerm::exchange_spin_flip(p, q, 1.0))
                }
                TermKind::ExchangePairHop => {
                    out.push(InteractionTerm::exchange_pair_hop(p, q, 1.0))
                }
                _ => {}
            }
        }
    }
    out
}

/// Random flat Hamiltonian: each allowed kind's candidate terms are kept with
/// probability `density`; coefficients are uniform in ±[0.05, 1.5].
pub fn random_hamiltonian(
    rng: &mut impl Rng,
    n_orbitals: usize,
    kinds: &[TermKind],
    density: f64,
) -> EffectiveHamiltonian {
    let mut terms = Vec::new();
    for &kind in kinds {
        for mut t in candidate_terms(kind, n_orbitals) {
            if rng.gen_bool(density) {
                let magnitude = rng.gen_range(0.05..1.5);
                t.coefficient = if rng.gen_bool(0.5) {
                    magnitude
                } else {
                    -magnitude
                };
                terms.push(t);
            }
        }
    }
    terms.shuffle(rng);
    EffectiveHamiltonian::flat(n_orbitals, terms).expect("generated terms are valid")
}

/// Random subset of the seven kinds (never empty).
pub fn random_kinds(rng: &mut impl Rng) -> Vec<TermKind> {
    loop {
        let kinds: Vec<TermKind> = TermKind::ALL
            .into_iter()
            .filter(|_| rng.gen_bool(0.6))
            .collect();
        if !kinds.is_empty() {
            return kinds;
        }
    }
}

/// Random Hamiltonian with at least one term of every kind the orbital count
/// allows.
pub fn random_all_kinds(
    rng: &mut impl Rng,
    n_orbitals: usize,
    density: f64,
) -> EffectiveHamiltonian {
    let mut h = random_hamiltonian(rng, n_orbitals, &TermKind::ALL, density);
    for kind in TermKind::ALL {
        if h.terms.iter().any(|t| t.kind == kind) {
            continue;
        }
        let candidates = candidate_terms(kind, n_orbitals);
        if let Some(mut t) = candidates.choose(rng).cloned() {
            t.coefficient = rng.gen_range(0.05..1.5);
            h.terms.push(t);
        }
    }
    h
}
