use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fswap_core::circuit_file::read_circuit;
use fswap_core::fixtures::builtin_cell;
use fswap_core::resources::{crossover_cells, same_sig2};
use fswap_core::{compile_trotter_step, Metric};
use serde_json::Value;

fn fswap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fswap"))
        .args(args)
        .env_remove("FSWAP_FIXTURES")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compare with a stored file; `FSWAP_BLESS=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("FSWAP_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "{name} differs from golden file");
}

#[test]
fn compile_report_and_circuit_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let circ = dir.path().join("h4.circ");
    let o = fswap(&[
        "compile",
        "--fixture",
        "hubbard4",
        "--dt",
        "0.05",
        "--circuit",
        circ.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    golden("hubbard4_report.json", &stdout(&o));
    let text = std::fs::read_to_string(&circ).unwrap();
    golden("hubbard4.circ", &text);

    let r = json(&o);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["formula_matches_measured"], true);
    for m in ["one_qubit", "cnot", "sum"] {
        assert_eq!(
            r["gates_per_step"][m]["measured"],
            r["gates_per_step"][m]["formula"]
        );
    }

    let file = read_circuit(text.as_bytes()).unwrap();
    let c = compile_trotter_step(&builtin_cell("hubbard4"), 0.05).unwrap();
    let want: Vec<_> = c.gates().map(|op| op.gate).collect();
    assert_eq!(file.n_qubits, 8);
    assert_eq!(file.gates.len(), want.len());
    assert!(file.gates.iter().map(|op| op.gate).eq(want));
}

#[test]
fn compile_trace_and_layered_output() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.json");
    let circ = dir.path().join("c.circ");
    let o = fswap(&[
        "compile",
        "--fixture",
        "all_kinds2",
        "--trace",
        trace.to_str().unwrap(),
        "--circuit",
        circ.to_str().unwrap(),
        "--layered",
        "--steps",
        "10",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(
        t["initial_layout"],
        serde_json::json!(["1↑", "1↓", "2↑", "2↓"])
    );
    assert_eq!(
        t["final_layout"],
        serde_json::json!(["2↑", "2↓", "1↑", "1↓"])
    );
    let fswaps = t["events"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e.get("Fswap").is_some())
        .count();
    assert_eq!(fswaps, 4);
    let r = json(&o);
    assert_eq!(
        r["gates_total"]["sum"],
        10 * r["gates_per_step"]["sum"]["measured"].as_u64().unwrap()
    );
    let file = read_circuit(std::fs::read(&circ).unwrap().as_slice()).unwrap();
    assert_eq!(
        file.layer_starts.len() as u64,
        r["depth"]["operations_parallel"].as_u64().unwrap()
    );
}

#[test]
fn trivial_single_orbital_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let ham = dir.path().join("one.ham");
    std::fs::write(&ham, "norb 1\ne 1 0 0 0 both 0.5\n").unwrap();
    let o = fswap(&[
        "compile",
        "--in",
        ham.to_str().unwrap(),
        "--grid",
        "1",
        "1",
        "1",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["n_qubits"], 2);
    assert_eq!(r["n_fswap"], 0);
    assert_eq!(r["gates_per_step"]["sum"]["measured"], 2);
}

#[test]
fn compile_two_thousand_qubits() {
    let dir = tempfile::tempdir().unwrap();
    let ham = dir.path().join("ten.ham");
    let mut text = String::from("norb 10\n");
    for o in 1..=10 {
        text += &format!("e {o} 0 0 0 both 0.1\nU {o} {o} 0 0 0 3.0\n");
    }
    for o in 1..10 {
        text += &format!("t {o} {} 0 0 0 both -0.3\n", o + 1);
    }
    text += "t 1 1 1 0 0 both -0.2\nt 1 1 0 1 0 both -0.2\nJ 1 2 0 0 0 0.5\n";
    std::fs::write(&ham, text).unwrap();
    let path = ham.to_str().unwrap();
    let o = fswap(&["compile", "--in", path, "--grid", "10", "10", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["n_qubits"], 2000);
    assert_eq!(r["formula_matches_measured"], true);
    assert_eq!(r["n_pairswap"], 1000 * 999 / 2);

    let capped = fswap(&["compile", "--in", path, "--grid", "10", "10", "2"]);
    assert_eq!(code(&capped), 2);
    assert!(stderr(&capped).contains("compile cap"));
}

#[test]
fn estimate_table_layout() {
    let o = fswap(&["estimate", "--compound", "all"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    golden("estimate_all.csv", &stdout(&o));

    let o = fswap(&[
        "estimate",
        "--compound",
        "k3c60",
        "--cells",
        "10000",
        "--format",
        "json",
    ]);
    let r = json(&o);
    let cell = &r["rows"][0]["cells"][0];
    assert_eq!(cell["n_qubits"], 60_000);
    let sum = cell["gates"]["sum"]["total"].as_f64().unwrap();
    assert!(same_sig2(sum, 7.2e9), "{sum}");
    assert_eq!(cell["published"]["sum"], 7.2e9);
}

#[test]
fn estimate_empty_cell_list() {
    let o = fswap(&["estimate", "--compound", "FeSe", "--cells"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "system,qubits_per_cell\nFeSe,20\n");
    let o = fswap(&[
        "estimate",
        "--compound",
        "FeSe",
        "--cells",
        "--format",
        "json",
    ]);
    assert_eq!(json(&o)["rows"][0]["cells"], serde_json::json!([]));
}

#[test]
fn single_cell_estimate_equals_compile() {
    for fixture in ["hubbard4", "three_orbital", "all_kinds2"] {
        let c = json(&fswap(&["compile", "--fixture", fixture]));
        let e = json(&fswap(&[
            "estimate",
            "--fixture",
            fixture,
            "--cells",
            "1",
            "--format",
            "json",
        ]));
        let cell = &e["rows"][0]["cells"][0];
        assert_eq!(cell["n_qubits"], c["n_qubits"]);
        for m in ["one_qubit", "cnot", "sum"] {
            assert_eq!(
                cell["gates"][m]["total"], c["gates_total"][m],
                "{fixture} {m}"
            );
        }
    }
}

#[test]
fn estimate_from_explicit_counts() {
    let o = fswap(&[
        "estimate",
        "--count",
        "Hopping=3",
        "--count",
        "exchangespinflip=1",
        "--qubits-per-cell",
        "4",
        "--cells",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let row = &json(&o)["rows"][0];
    assert_eq!(row["interaction_per_cell"]["one_qubit"], 3 * 10 + 72);
    assert_eq!(row["interaction_per_cell"]["cnot"], 3 * 4 + 48);
    // 4 qubits: one pair swap of four fswaps
    assert_eq!(row["cells"][0]["gates"]["sum"]["fswap"], 16);
}

#[test]
fn input_errors_exit_two() {
    let o = fswap(&["estimate", "--compound", "unobtainium"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown compound"));

    let o = fswap(&["compile", "--in", "/nonexistent/x.ham"]);
    assert_eq!(code(&o), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ham");
    std::fs::write(&bad, "norb 2\nt 1 2 0 0 0 sideways 1.0\n").unwrap();
    let o = fswap(&["compile", "--in", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    assert_eq!(
        code(&fswap(&["compile", "--fixture", "hubbard4", "--dt", "0"])),
        2
    );
    assert_eq!(
        code(&fswap(&[
            "compile",
            "--fixture",
            "hubbard4",
            "--steps",
            "0"
        ])),
        2
    );
    assert_eq!(code(&fswap(&["frobnicate"])), 2);
}

#[test]
fn verify_passes_on_fixtures() {
    let o = fswap(&["verify", "--fixture", "all_kinds2", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = json(&o);
    assert!(r["distance"].as_f64().unwrap() <= 1e-9);
    assert!(r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));

    let start = std::time::Instant::now();
    let o = fswap(&["verify", "--fixture", "three_orbital"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(start.elapsed().as_secs() < 60);
    assert!(stdout(&o).ends_with("verify: PASS (three_orbital, 6 qubits)\n"));
}

#[test]
fn verify_probe_mode_with_seeds() {
    for seed in ["1", "2"] {
        let o = fswap(&[
            "--seed",
            seed,
            "verify",
            "--fixture",
            "nio_like",
            "--format",
            "json",
        ]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert_eq!(json(&o)["norm"], "probe");
    }
}

#[test]
fn corrupted_angle_fails_verification() {
    let o = fswap(&[
        "verify",
        "--fixture",
        "all_kinds2",
        "--perturb",
        "0.01",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert!(r["distance"].as_f64().unwrap() > 1e-4);
    assert_eq!(r["passed"], false);
}

#[test]
fn verify_refuses_large_inputs() {
    let o = fswap(&["verify", "--fixture", "hubbard4", "--grid", "2", "1", "1"]);
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("refusing to verify 16 qubits"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn fixture_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("hubbard4.ham"), "norb 1\nU 1 1 0 0 0 1.0\n").unwrap();
    let run = |env: Option<&Path>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_fswap"));
        cmd.args(["compile", "--fixture", "hubbard4"])
            .env_remove("FSWAP_FIXTURES");
        if let Some(d) = env {
            cmd.env("FSWAP_FIXTURES", d);
        }
        json(&cmd.output().unwrap())["n_qubits"].as_u64().unwrap()
    };
    assert_eq!(run(Some(dir.path())), 2);
    assert_eq!(run(None), 8);
    // names missing from the override directory fall back to the bundled set
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fswap"));
    let o = cmd
        .args(["compile", "--fixture", "chain1"])
        .env("FSWAP_FIXTURES", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn sweep_reports_crossover() {
    let o = fswap(&[
        "sweep",
        "--compound",
        "LaFeAsO",
        "--derived-load",
        "--format",
        "json",
        "--max-cells",
        "1000",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    let load = fswap_core::registry::lookup("LaFeAsO")
        .unwrap()
        .derived_interaction_load();
    assert_eq!(r["crossover_cells"], crossover_cells(load, 20, Metric::Sum));
    let points = r["points"].as_array().unwrap();
    assert_eq!(points.first().unwrap()["n_cells"], 1);
    assert_eq!(points.last().unwrap()["n_cells"], 1000);
    let fractions: Vec<f64> = points
        .iter()
        .map(|p| p["fswap_fraction"].as_f64().unwrap())
        .collect();
    assert!(fractions.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn reproduce_exit_code_follows_results() {
    let o = fswap(&["reproduce", "--only", "2,8"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("reproduce: 2/2 passed"));

    let o = fswap(&["reproduce", "--only", "1", "--format", "json"]);
    let r = json(&o);
    assert_eq!(code(&o), if r["passed"] == true { 0 } else { 1 });
    assert_eq!(r["criteria"][0]["id"], "1");

    assert_eq!(code(&fswap(&["reproduce", "--only", "42"])), 2);
}
