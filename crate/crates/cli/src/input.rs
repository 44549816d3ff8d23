//! Hamiltonian sources and the options shared between subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use fswap_core::fixtures::load_fixture;
use fswap_core::hamfile::parse_hamiltonian;
use fswap_core::{EffectiveHamiltonian, Thresholds};

#[derive(Args, Clone, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Per-cell Hamiltonian file.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Named fixture, looked up in $FSWAP_FIXTURES and then the bundled set.
    #[arg(long, value_name = "NAME")]
    pub fixture: Option<String>,
}

/// Same as [`Source`] but optional.
#[derive(Args, Clone, Debug)]
#[group(required = false, multiple = false)]
pub struct OptionalSource {
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "NAME")]
    pub fixture: Option<String>,
}

impl OptionalSource {
    pub fn get(&self) -> Option<Source> {
        (self.input.is_some() || self.fixture.is_some()).then(|| Source {
            input: self.input.clone(),
            fixture: self.fixture.clone(),
        })
    }
}

#[derive(Args, Clone, Debug)]
pub struct ThresholdArgs {
    /// Magnitude cutoffs in eV for hopping, Coulomb and exchange terms.
    #[arg(long, num_args = 3, value_names = ["T", "U", "J"], allow_negative_numbers = true)]
    pub thresholds: Option<Vec<f64>>,
    /// Keep every term.
    #[arg(long, conflicts_with = "thresholds")]
    pub no_thresholds: bool,
}

impl ThresholdArgs {
    pub fn get(&self) -> Result<Thresholds> {
        if self.no_thresholds {
            return Ok(Thresholds::NONE);
        }
        match self.thresholds.as_deref() {
            None => Ok(Thresholds::default()),
            Some(&[t, u, j]) => {
                if [t, u, j].iter().any(|x| !x.is_finite() || *x < 0.0) {
                    bail!("thresholds must be finite and non-negative");
                }
                Ok(Thresholds::new(t, u, j))
            }
            Some(_) => bail!("--thresholds takes three values"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A per-cell Hamiltonian after thresholding.
pub struct Loaded {
    pub label: String,
    pub cell: EffectiveHamiltonian,
}

pub fn load(source: &Source, thresholds: Thresholds) -> Result<Loaded> {
    let (label, h) = match (&source.input, &source.fixture) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let h = parse_hamiltonian(&text).with_context(|| format!("{}", path.display()))?;
            (path.display().to_string(), h)
        }
        (None, Some(name)) => (name.clone(), load_fixture(name)?),
        (None, None) => bail!("no Hamiltonian given (use --in or --fixture)"),
    };
    Ok(Loaded {
        label,
        cell: h.apply_thresholds(thresholds),
    })
}

pub fn parse_grid(grid: &[usize]) -> Result<[usize; 3]> {
    match *grid {
        [a, b, c] if a >= 1 && b >= 1 && c >= 1 => Ok([a, b, c]),
        [_, _, _] => bail!("grid dimensions must be at least 1"),
        _ => bail!("--grid takes three values"),
    }
}

pub fn check_dt(dt: f64) -> Result<f64> {
    if !(dt.is_finite() && dt > 0.0) {
        bail!("--dt must be positive, got {dt}");
    }
    Ok(dt)
}

/// Buffered writer to a file, or stdout for `None` and `-`.
pub fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}
