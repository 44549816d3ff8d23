use fswap_core::resources::{crossover_cells, Totals};
use fswap_core::Metric;
use fswap_wasm_demo::{compile_summary_json, estimate_curve_json, network_frames_json};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn curve_ends_and_crossover() {
    let v = parse(estimate_curve_json(20, 2000, 1000, 10_000, "sum"));
    let points = v["points"].as_array().unwrap();
    assert_eq!(points[0]["n_cells"], 1);
    assert_eq!(points.last().unwrap()["n_cells"], 10_000);
    assert_eq!(
        v["crossover_cells"],
        crossover_cells(Totals::new(2000, 1000), 20, Metric::Sum)
    );
    let f: Vec<f64> = points
        .iter()
        .map(|p| p["fswap_fraction"].as_f64().unwrap())
        .collect();
    assert!(f.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn curve_rejects_bad_input() {
    assert!(estimate_curve_json(3, 0, 0, 10, "sum").is_err());
    assert!(estimate_curve_json(4, 0, 0, 0, "sum").is_err());
    assert!(estimate_curve_json(4, 0, 0, 10, "toffoli").is_err());
}

#[test]
fn frames_replay_to_reversed_order() {
    for n in 1..=6 {
        let v = parse(network_frames_json(n));
        let n_qubits = 2 * n;
        let frames = v["frames"].as_array().unwrap();
        let fswaps: usize = frames
            .iter()
            .map(|f| f["fswaps"].as_array().unwrap().len())
            .sum();
        assert_eq!(fswaps, (n_qubits * n_qubits - 2 * n_qubits) / 2, "n = {n}");
        assert_eq!(v["n_fswap"], fswaps);
        // replay the recorded swaps on the first layout
        let mut layout: Vec<String> = if frames.is_empty() {
            v["final_layout"]
                .as_array()
                .unwrap()
                .iter()
                .map(|s| s.as_str().unwrap().to_string())
                .collect()
        } else {
            frames[0]["layout"]
                .as_array()
                .unwrap()
                .iter()
                .map(|s| s.as_str().unwrap().to_string())
                .collect()
        };
        for f in frames {
            for k in f["fswaps"].as_array().unwrap() {
                let k = k.as_u64().unwrap() as usize;
                layout.swap(k, k + 1);
            }
        }
        let want: Vec<String> = (1..=n)
            .rev()
            .flat_map(|o| [format!("{o}↑"), format!("{o}↓")])
            .collect();
        assert_eq!(layout, want);
    }
    assert!(network_frames_json(0).is_err());
    assert!(network_frames_json(17).is_err());
}

#[test]
fn summary_counts_agree_with_formula() {
    let text = "norb 2\ne 1 0 0 0 both 0.3\nt 1 2 0 0 0 both -0.5\nt 1 1 1 0 0 both -0.2\nU 1 1 0 0 0 2.0\nJ 1 2 0 0 0 0.4\n";
    let v = parse(compile_summary_json(text, 3, 1, 1, 0.1));
    assert_eq!(v["n_qubits"], 12);
    assert_eq!(v["one_qubit"], v["formula_one_qubit"]);
    assert_eq!(v["cnot"], v["formula_cnot"]);
    assert!(compile_summary_json(text, 0, 1, 1, 0.1).is_err());
    assert!(compile_summary_json("norb x\n", 1, 1, 1, 0.1)
        .unwrap_err()
        .contains("line 1"));
    assert!(compile_summary_json(text, 100, 1, 1, 0.1).is_err());
}
