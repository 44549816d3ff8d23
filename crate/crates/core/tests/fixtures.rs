use fswap_core::fixtures::{builtin_cell, load_fixture};
use fswap_core::hamiltonian::{InteractionTerm, Spin, TermClass, TermKind, Thresholds};
use fswap_core::network::compile_trotter_step;
use fswap_core::registry::COMPOUNDS;
use fswap_core::resources::{gates_from_counts, Totals};

const NIO_TERMS: &str = include_str!("../fixtures/nio_like.terms");
const LOADS_CSV: &str = include_str!("../fixtures/table3_loads.csv");

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or("-".into(), |v| v.to_string())
}

type Row = (String, String, String, String, String, [i64; 3], u64);

fn row(t: &InteractionTerm) -> Row {
    (
        t.kind.name().to_string(),
        t.p.to_string(),
        opt(t.q),
        opt(t.spin),
        opt(t.spin_q),
        t.cell_offset,
        t.coefficient.to_bits(),
    )
}

fn frozen_rows() -> Vec<Row> {
    NIO_TERMS
        .lines()
        .filter(|l| !l.starts_with("counts") && !l.starts_with("thresholded"))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let off = [
                f[5].parse().unwrap(),
                f[6].parse().unwrap(),
                f[7].parse().unwrap(),
            ];
            let v: f64 = f[8].parse().unwrap();
            (
                f[0].into(),
                f[1].into(),
                f[2].into(),
                f[3].into(),
                f[4].into(),
                off,
                v.to_bits(),
            )
        })
        .collect()
}

fn frozen_counts(prefix: &str) -> Vec<u64> {
    let line = NIO_TERMS.lines().find(|l| l.starts_with(prefix)).unwrap();
    line.split_whitespace()
        .skip(1)
        .map(|x| x.parse().unwrap())
        .collect()
}

#[test]
fn nio_like_term_multiset_matches_independent_reader() {
    let h = load_fixture("nio_like").unwrap();
    assert_eq!(h.n_orbitals_per_cell, 5);
    let mut ours: Vec<Row> = h.terms.iter().map(row).collect();
    let mut theirs = frozen_rows();
    ours.sort();
    theirs.sort();
    assert_eq!(ours, theirs);
}

#[test]
fn nio_like_counts_match_tally() {
    let h = load_fixture("nio_like").unwrap();
    let raw: Vec<u64> = TermKind::ALL
        .iter()
        .map(|&k| h.term_counts().get(k))
        .collect();
    assert_eq!(raw, frozen_counts("counts"));
    let kept = h.apply_thresholds(Thresholds::default()).term_counts();
    let kept: Vec<u64> = TermKind::ALL.iter().map(|&k| kept.get(k)).collect();
    assert_eq!(kept, frozen_counts("thresholded"));
}

#[test]
fn class_aggregates() {
    let c = load_fixture("nio_like").unwrap().term_counts();
    assert_eq!(c.class_total(TermClass::Hopping), 10 + 35);
    assert_eq!(c.class_total(TermClass::Coulomb), 5 + 52);
    assert_eq!(c.class_total(TermClass::Exchange), 22 + 11 + 11);
}

#[test]
fn derived_loads_match_their_script_output() {
    let mut lines = LOADS_CSV.lines();
    assert_eq!(
        lines.next().unwrap(),
        "compound,qubits_per_cell,one_qubit,cnot,sum"
    );
    for (line, compound) in lines.zip(&COMPOUNDS) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], compound.name);
        assert_eq!(f[1].parse::<u64>().unwrap(), compound.qubits_per_cell);
        let want = Totals::per_metric(
            f[2].parse().unwrap(),
            f[3].parse().unwrap(),
            f[4].parse().unwrap(),
        );
        assert_eq!(
            compound.derived_interaction_load(),
            want,
            "{}",
            compound.name
        );
    }
}

#[test]
fn bundled_fixtures_compile_to_predicted_counts() {
    for name in [
        "all_kinds2",
        "three_orbital",
        "hubbard4",
        "chain1",
        "nio_like",
    ] {
        let h = builtin_cell(name);
        let c = compile_trotter_step(&h, 0.05).unwrap();
        let predicted = gates_from_counts(&h.term_counts(), c.n_qubits as u128).unwrap();
        assert_eq!(predicted.totals(), Totals::from(c.counts), "{name}");
    }
}

#[test]
fn chain_replicates_into_a_ring() {
    let h = load_fixture("chain1")
        .unwrap()
        .replicate_supercell([4, 1, 1]);
    assert_eq!(h.total_qubits(), 8);
    let mut bonds: Vec<(usize, usize)> = h
        .terms
        .iter()
        .filter(|t| t.kind == TermKind::Hopping && t.spin == Some(Spin::Up))
        .map(|t| (t.p, t.q.unwrap()))
        .collect();
    bonds.sort();
    assert_eq!(bonds, vec![(1, 2), (1, 4), (2, 3), (3, 4)]);
    assert_eq!(h.term_counts().get(TermKind::Hopping), 8);
}

#[test]
fn single_cell_chain_folds_self_images() {
    // the x-bond of a one-cell chain wraps onto the orbital itself
    let h = builtin_cell("chain1");
    let onsite: Vec<&InteractionTerm> = h
        .terms
        .iter()
        .filter(|t| t.kind == TermKind::OnSiteEnergy)
        .collect();
    assert_eq!(onsite.len(), 2);
    // 0.0125 + 2·(−0.80) from the hopping + 0.60 from the same-spin Coulomb image
    for t in onsite {
        assert!(
            (t.coefficient - (0.0125 - 1.6 + 0.6)).abs() < 1e-12,
            "{t:?}"
        );
    }
    let on_site_u: f64 = h
        .terms
        .iter()
        .filter(|t| t.kind == TermKind::CoulombOnSite)
        .map(|t| t.coefficient)
        .sum();
    // opposite-spin images of the inter-cell U (two of them) join the on-site U
    assert!((on_site_u - (2.5 + 2.0 * 0.6)).abs() < 1e-12);
}
