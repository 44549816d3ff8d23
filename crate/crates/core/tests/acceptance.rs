//! One line per acceptance criterion, then the supplementary checks.
//! Exits nonzero when any numbered criterion fails.

use fswap_core::reproduce::{run_all, DEFAULT_SEED};

fn main() {
    let seed = std::env::var("FSWAP_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    println!("acceptance criteria (seed {seed})");
    let results = run_all(seed);
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.supplementary && !r.passed)
        .map(|r| r.id)
        .collect();
    let supp_failed = results.iter().any(|r| r.supplementary && !r.passed);
    if failed.is_empty() && !supp_failed {
        println!("all criteria passed");
    } else {
        println!(
            "failed: {failed:?}{}",
            if supp_failed {
                " (and supplementary checks)"
            } else {
                ""
            }
        );
        std::process::exit(1);
    }
}
