//! Line-based coefficient file format.
//!
//! ```text
//! norb <int>
//! e <p> <sx> <sy> <sz> <spin> <value>          on-site energy
//! t <p> <q> <sx> <sy> <sz> <spin> <value>      hopping, spin in {up, down, both}
//! U <p> <q> <sx> <sy> <sz> <value>             Coulomb (p = q, zero offset: on-site)
//! J <p> <q> <sx> <sy> <sz> <value>             exchange density + spin-flip + pair-hop
//! ```
//!
//! Single-term forms used when a `U`/`J` group is incomplete:
//!
//! ```text
//! Ux  <p> <q> <sx> <sy> <sz> <spin> <spin'> <value>
//! Jn  <p> <q> <sx> <sy> <sz> <spin> <value>
//! Jsf <p> <q> <sx> <sy> <sz> <value>
//! Jph <p> <q> <sx> <sy> <sz> <value>
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::hamiltonian::{
    EffectiveHamiltonian, HamiltonianError, InteractionTerm, Spin, TermKey, TermKind,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

struct Fields<'a> {
    line: usize,
    tokens: std::slice::Iter<'a, &'a str>,
}

impl<'a> Fields<'a> {
    fn next(&mut self, what: &str) -> Result<&'a str, ParseError> {
        self.tokens
            .next()
            .copied()
            .ok_or_else(|| err(self.line, format!("missing {what}")))
    }

    fn orbital(&mut self, what: &str) -> Result<usize, ParseError> {
        let tok = self.next(what)?;
        tok.parse()
            .map_err(|_| err(self.line, format!("invalid {what} '{tok}'")))
    }

    fn offset(&mut self) -> Result<[i64; 3], ParseError> {
        let mut out = [0i64; 3];
        for (i, axis) in ["sx", "sy", "sz"].iter().enumerate() {
            let tok = self.next(axis)?;
            out[i] = tok
                .parse()
                .map_err(|_| err(self.line, format!("invalid {axis} '{tok}'")))?;
        }
        Ok(out)
    }

    fn spin(&mut self) -> Result<Spin, ParseError> {
        match self.next("spin")? {
            "up" => Ok(Spin::Up),
            "down" => Ok(Spin::Down),
            other => Err(err(self.line, format!("invalid spin '{other}'"))),
        }
    }

    fn value(&mut self) -> Result<f64, ParseError> {
        let tok = self.next("value")?;
        let v: f64 = tok
            .parse()
            .map_err(|_| err(self.line, format!("invalid value '{tok}'")))?;
        if !v.is_finite() {
            return Err(err(self.line, format!("non-finite value '{tok}'")));
        }
        Ok(v)
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.tokens.next() {
            None => Ok(()),
            Some(extra) => Err(err(
                self.line,
                format!("unexpected trailing token '{extra}'"),
            )),
        }
    }
}

/// Parse a coefficient file into a per-cell Hamiltonian (terms keep their cell offsets).
pub fn parse_hamiltonian(text: &str) -> Result<EffectiveHamiltonian, ParseError> {
    let mut n_orbitals: Option<usize> = None;
    let mut terms: Vec<InteractionTerm> = Vec::new();
    let mut seen: HashSet<TermKey> = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, rest)) = tokens.split_first() else {
            continue;
        };
        let mut f = Fields {
            line,
            tokens: rest.iter(),
        };

        if keyword == "norb" {
            if n_orbitals.is_some() {
                return Err(err(line, "repeated norb header"));
            }
            let n = f.orbital("orbital count")?;
            if n == 0 {
                return Err(err(line, "norb must be positive"));
            }
            f.finish()?;
            n_orbitals = Some(n);
            continue;
        }
        let Some(norb) = n_orbitals else {
            return Err(err(line, "term before norb header"));
        };

        let mut new_terms = Vec::new();
        match keyword {
            "e" => {
                let p = f.orbital("p")?;
                let off = f.offset()?;
                if off != [0; 3] {
                    return Err(err(line, "on-site energy with nonzero cell offset"));
                }
                let spin = f.spin_or_both()?;
                let v = f.value()?;
                for s in spin {
                    new_terms.push(InteractionTerm::on_site_energy(p, s, v));
                }
            }
            "t" => {
                let (p, q, off) = pair(&mut f)?;
                let spin = f.spin_or_both()?;
                let v = f.value()?;
                for s in spin {
                    new_terms.push(InteractionTerm::hopping(p, q, s, v).with_offset(off));
                }
            }
            "U" => {
                let (p, q, off) = pair_allow_same(&mut f)?;
                let v = f.value()?;
                if p == q && off == [0; 3] {
                    new_terms.push(InteractionTerm::coulomb_on_site(p, v));
                } else {
                    for s in Spin::BOTH {
                        for s2 in Spin::BOTH {
                            new_terms.push(
                                InteractionTerm::coulomb_off_site(p, q, s, s2, v).with_offset(off),
                            );
                        }
                    }
                }
            }
            "Ux" => {
                let (p, q, off) = pair(&mut f)?;
                let s = f.spin()?;
                let s2 = f.spin()?;
                let v = f.value()?;
                new_terms.push(InteractionTerm::coulomb_off_site(p, q, s, s2, v).with_offset(off));
            }
            "J" => {
                let (p, q, off) = pair(&mut f)?;
                let v = f.value()?;
                for s in Spin::BOTH {
                    new_terms.push(InteractionTerm::exchange_density(p, q, s, v).with_offset(off));
                }
                new_terms.push(InteractionTerm::exchange_spin_flip(p, q, v).with_offset(off));
                new_terms.push(InteractionTerm::exchange_pair_hop(p, q, v).with_offset(off));
            }
            "Jn" => {
                let (p, q, off) = pair(&mut f)?;
                let s = f.spin()?;
                let v = f.value()?;
                new_terms.push(InteractionTerm::exchange_density(p, q, s, v).with_offset(off));
            }
            "Jsf" | "Jph" => {
                let (p, q, off) = pair(&mut f)?;
                let v = f.value()?;
                new_terms.push(if keyword == "Jsf" {
                    InteractionTerm::exchange_spin_flip(p, q, v).with_offset(off)
                } else {
                    InteractionTerm::exchange_pair_hop(p, q, v).with_offset(off)
                });
            }
            other => return Err(err(line, format!("unknown term keyword '{other}'"))),
        }
        f.finish()?;

        for term in new_terms {
            for index in std::iter::once(term.p).chain(term.q) {
                if index == 0 || index > norb {
                    return Err(err(
                        line,
                        HamiltonianError::OrbitalOutOfRange {
                            index,
                            n_orbitals: norb,
                        }
                        .to_string(),
                    ));
                }
            }
            if !seen.insert(term.canonical().key()) {
                return Err(err(
                    line,
                    HamiltonianError::Duplicate(term.key()).to_string(),
                ));
            }
            terms.push(term);
        }
    }

    let n = n_orbitals.ok_or_else(|| err(text.lines().count().max(1), "missing norb header"))?;
    EffectiveHamiltonian::new(n, terms).map_err(|e| err(0, e.to_string()))
}

impl Fields<'_> {
    fn spin_or_both(&mut self) -> Result<Vec<Spin>, ParseError> {
        match self.next("spin")? {
            "up" => Ok(vec![Spin::Up]),
            "down" => Ok(vec![Spin::Down]),
            "both" => Ok(Spin::BOTH.to_vec()),
            other => Err(err(self.line, format!("invalid spin '{other}'"))),
        }
    }
}

fn pair_allow_same(f: &mut Fields<'_>) -> Result<(usize, usize, [i64; 3]), ParseError> {
    let p = f.orbital("p")?;
    let q = f.orbital("q")?;
    let off = f.offset()?;
    if off == [0; 3] && p > q {
        return Err(err(
            f.line,
            HamiltonianError::NotCanonical { p, q }.to_string(),
        ));
    }
    Ok((p, q, off))
}

fn pair(f: &mut Fields<'_>) -> Result<(usize, usize, [i64; 3]), ParseError> {
    let (p, q, off) = pair_allow_same(f)?;
    if off == [0; 3] && p == q {
        return Err(err(
            f.line,
            HamiltonianError::NotCanonical { p, q }.to_string(),
        ));
    }
    Ok((p, q, off))
}

fn fmt_value(v: f64) -> String {
    // shortest representation that parses back to the same f64
    format!("{v:?}")
}

/// Serialize a per-cell Hamiltonian. Complete `U`/`J` groups with a shared
/// coefficient collapse to one line; everything else is written term by term.
pub fn write_hamiltonian(h: &EffectiveHamiltonian) -> String {
    let n = if h.flattened {
        h.total_orbitals()
    } else {
        h.n_orbitals_per_cell
    };
    let mut out = String::new();
    let _ = writeln!(out, "norb {n}");

    type GroupKey = (usize, usize, [i64; 3]);
    let mut coulomb: BTreeMap<GroupKey, Vec<&InteractionTerm>> = BTreeMap::new();
    let mut exchange: BTreeMap<GroupKey, Vec<&InteractionTerm>> = BTreeMap::new();
    let off = |o: [i64; 3]| format!("{} {} {}", o[0], o[1], o[2]);

    for term in &h.terms {
        let t = term.canonical();
        match t.kind {
            TermKind::OnSiteEnergy => {
                let _ = writeln!(
                    out,
                    "e {} {} {} {}",
                    t.p,
                    off(t.cell_offset),
                    t.spin.unwrap(),
                    fmt_value(t.coefficient)
                );
            }
            TermKind::Hopping => {
                let _ = writeln!(
                    out,
                    "t {} {} {} {} {}",
                    t.p,
                    t.q.unwrap(),
                    off(t.cell_offset),
                    t.spin.unwrap(),
                    fmt_value(t.coefficient)
                );
            }
            TermKind::CoulombOnSite => {
                let _ = writeln!(out, "U {} {} 0 0 0 {}", t.p, t.p, fmt_value(t.coefficient));
            }
            TermKind::CoulombOffSite => {
                coulomb
                    .entry((t.p, t.q.unwrap(), t.cell_offset))
                    .or_default()
                    .push(term);
            }
            _ => {
                exchange
                    .entry((t.p, t.q.unwrap(), t.cell_offset))
                    .or_default()
                    .push(term);
            }
        }
    }

    let uniform =
        |group: &[&InteractionTerm]| group.iter().all(|t| t.coefficient == group[0].coefficient);

    for ((p, q, o), group) in coulomb {
        if group.len() == 4 && uniform(&group) {
            let _ = writeln!(
                out,
                "U {p} {q} {} {}",
                off(o),
                fmt_value(group[0].coefficient)
            );
        } else {
            for term in group {
                let t = term.canonical();
                let _ = writeln!(
                    out,
                    "Ux {p} {q} {} {} {} {}",
                    off(o),
                    t.spin.unwrap(),
                    t.spin_q.unwrap(),
                    fmt_value(t.coefficient)
                );
            }
        }
    }
    for ((p, q, o), group) in exchange {
        if group.len() == 4 && uniform(&group) {
            let _ = writeln!(
                out,
                "J {p} {q} {} {}",
                off(o),
                fmt_value(group[0].coefficient)
            );
        } else {
            for term in group {
                let v = fmt_value(term.coefficient);
                let _ = match term.kind {
                    TermKind::ExchangeDensity => {
                        writeln!(out, "Jn {p} {q} {} {} {v}", off(o), term.spin.unwrap())
                    }
                    TermKind::ExchangeSpinFlip => writeln!(out, "Jsf {p} {q} {} {v}", off(o)),
                    _ => writeln!(out, "Jph {p} {q} {} {v}", off(o)),
                };
            }
        }
    }
    out
}
