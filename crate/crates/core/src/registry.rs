//! Compounds with their spin-orbitals per unit cell and the printed gate
//! counts per Trotter step at 10², 10³ and 10⁴ cells.

use serde::Serialize;

use crate::resources::{fswap_term, Metric, Totals};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MaterialClass {
    OrganicSuperconductor,
    IronBasedSuperconductor,
    BinaryTransitionMetalOxide,
    PerovskiteOxide,
}

impl MaterialClass {
    pub fn name(self) -> &'static str {
        match self {
            MaterialClass::OrganicSuperconductor => "organic superconductor",
            MaterialClass::IronBasedSuperconductor => "iron-based superconductor",
            MaterialClass::BinaryTransitionMetalOxide => "binary transition metal oxide",
            MaterialClass::PerovskiteOxide => "perovskite oxide",
        }
    }
}

/// Printed gate counts, `[one-qubit, CNOT, sum]` per cell count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PublishedCounts {
    pub cells_1e2: [f64; 3],
    pub cells_1e3: [f64; 3],
    pub cells_1e4: [f64; 3],
}

impl PublishedCounts {
    pub const CELLS: [u64; 3] = [100, 1_000, 10_000];

    pub fn at(&self, column: usize) -> [f64; 3] {
        [self.cells_1e2, self.cells_1e3, self.cells_1e4][column]
    }

    pub fn get(&self, column: usize, metric: Metric) -> f64 {
        self.at(column)[metric.index()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Compound {
    pub name: &'static str,
    /// Lookup aliases (formula without subscript markup).
    pub aliases: &'static [&'static str],
    pub class: MaterialClass,
    pub qubits_per_cell: u64,
    pub published: PublishedCounts,
}

const fn row(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> PublishedCounts {
    PublishedCounts {
        cells_1e2: a,
        cells_1e3: b,
        cells_1e4: c,
    }
}

use MaterialClass::*;

pub const COMPOUNDS: [Compound; 13] = [
    Compound {
        name: "(TMTSF)2PF6",
        aliases: &["TMTSF", "TMTSF2PF6"],
        class: OrganicSuperconductor,
        qubits_per_cell: 4,
        published: row(
            [3.9e5, 2.7e5, 6.7e5],
            [1.8e7, 1.7e7, 3.5e7],
            [1.6e9, 1.6e9, 3.2e9],
        ),
    },
    Compound {
        name: "K3C60",
        aliases: &[],
        class: OrganicSuperconductor,
        qubits_per_cell: 6,
        published: row(
            [5.0e5, 4.2e5, 9.2e5],
            [3.7e7, 3.7e7, 7.4e7],
            [3.6e9, 3.6e9, 7.2e9],
        ),
    },
    Compound {
        name: "LaFeAsO",
        aliases: &[],
        class: IronBasedSuperconductor,
        qubits_per_cell: 20,
        published: row(
            [6.5e6, 5.2e6, 1.2e7],
            [4.2e8, 4.1e8, 8.4e8],
            [4.0e10, 4.0e10, 8.0e10],
        ),
    },
    Compound {
        name: "BaFe2As2",
        aliases: &[],
        class: IronBasedSuperconductor,
        qubits_per_cell: 20,
        published: row(
            [6.7e6, 5.2e6, 1.2e7],
            [4.3e8, 4.1e8, 8.4e8],
            [4.0e10, 4.0e10, 8.0e10],
        ),
    },
    Compound {
        name: "LiFeAs",
        aliases: &[],
        class: IronBasedSuperconductor,
        qubits_per_cell: 20,
        published: row(
            [1.3e7, 8.3e6, 2.1e7],
            [4.9e8, 4.4e8, 9.3e8],
            [4.1e10, 4.0e10, 8.1e10],
        ),
    },
    Compound {
        name: "FeSe",
        aliases: &[],
        class: IronBasedSuperconductor,
        qubits_per_cell: 20,
        published: row(
            [1.7e7, 1.0e7, 2.8e7],
            [5.3e8, 4.6e8, 1.0e9],
            [4.1e10, 4.1e10, 8.2e10],
        ),
    },
    Compound {
        name: "MnO",
        aliases: &[],
        class: BinaryTransitionMetalOxide,
        qubits_per_cell: 10,
        published: row(
            [1.8e6, 1.4e6, 3.2e6],
            [1.1e8, 1.0e8, 2.1e8],
            [1.0e10, 1.0e10, 2.0e10],
        ),
    },
    Compound {
        name: "FeO",
        aliases: &[],
        class: BinaryTransitionMetalOxide,
        qubits_per_cell: 10,
        published: row(
            [3.0e6, 2.0e6, 5.1e6],
            [1.2e8, 1.1e8, 2.3e8],
            [1.0e10, 1.0e10, 2.0e10],
        ),
    },
    Compound {
        name: "CoO",
        aliases: &[],
        class: BinaryTransitionMetalOxide,
        qubits_per_cell: 10,
        published: row(
            [7.9e6, 4.4e6, 1.2e7],
            [1.7e8, 1.3e8, 3.0e8],
            [1.1e10, 1.0e10, 2.1e10],
        ),
    },
    Compound {
        name: "NiO",
        aliases: &[],
        class: BinaryTransitionMetalOxide,
        qubits_per_cell: 10,
        published: row(
            [9.5e6, 5.2e6, 1.5e7],
            [1.9e8, 1.4e8, 3.3e8],
            [1.1e10, 1.0e10, 2.1e10],
        ),
    },
    Compound {
        name: "SrVO3",
        aliases: &[],
        class: PerovskiteOxide,
        qubits_per_cell: 10,
        published: row(
            [2.9e6, 1.9e6, 4.8e6],
            [1.2e8, 1.1e8, 2.3e8],
            [1.0e10, 1.0e10, 2.0e10],
        ),
    },
    Compound {
        name: "SrCrO3",
        aliases: &[],
        class: PerovskiteOxide,
        qubits_per_cell: 10,
        published: row(
            [2.5e6, 1.7e6, 4.2e6],
            [1.1e8, 1.1e8, 2.2e8],
            [1.0e10, 1.0e10, 2.0e10],
        ),
    },
    Compound {
        name: "SrMnO3",
        aliases: &[],
        class: PerovskiteOxide,
        qubits_per_cell: 10,
        published: row(
            [2.9e6, 2.0e6, 4.9e6],
            [1.2e8, 1.1e8, 2.3e8],
            [1.0e10, 1.0e10, 2.0e10],
        ),
    },
];

/// The printed "Average" row.
pub const PUBLISHED_AVERAGE: PublishedCounts = row(
    [5.7e6, 3.7e6, 9.5e6],
    [2.2e8, 2.0e8, 4.2e8],
    [1.8e10, 1.8e10, 3.7e10],
);

/// Case-insensitive lookup by name or alias.
pub fn lookup(name: &str) -> Option<&'static Compound> {
    COMPOUNDS.iter().find(|c| {
        c.name.eq_ignore_ascii_case(name) || c.aliases.iter().any(|a| a.eq_ignore_ascii_case(name))
    })
}

impl Compound {
    /// Per-cell interaction gate load recovered from the 10²-cell column:
    /// `(printed − fswap term) / 100`, rounded to whole gates. The printed
    /// values carry two significant figures, so this is a fixture, not data.
    pub fn derived_interaction_load(&self) -> Totals {
        let n = PublishedCounts::CELLS[0];
        let fswap = fswap_term(self.qubits_per_cell, n);
        let per = |m: Metric| {
            let printed = self.published.get(0, m);
            let rest = printed - fswap.get(m) as f64;
            (rest / n as f64).round().max(0.0) as u128
        };
        Totals::per_metric(per(Metric::OneQubit), per(Metric::Cnot), per(Metric::Sum))
    }
}
