//! Small Monte-Carlo study: detection frequency and accuracy of the full
//! detector on one benchmark scenario.
//!
//! ```text
//! cargo run --release --example scenario_study -- M1.6 --n 20 --t 1000 --runs 20 --reps 100
//! ```
//!
//! Other flags: `--sparsity`, `--alpha`, `--seed`, and `--raw` to scan the
//! unstandardized rows.

use std::time::Instant;

use mvgarch_cpd::pipeline::{detect, DetectionSettings};
use mvgarch_cpd::simlab::{generate, ModelId, ScenarioSpec};

fn flag<T: std::str::FromStr>(args: &[String], name: &str, default: T) -> T {
    args.iter()
        .position(|a| a == name)
        .and_then(|i| args.get(i + 1))
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

fn main() -> mvgarch_cpd::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let model = ModelId::parse(args.first().map_or("M1.6", String::as_str))?;
    let n = flag(&args, "--n", 20);
    let t = flag(&args, "--t", 1000);
    let runs = flag(&args, "--runs", 20u64);
    let reps = flag(&args, "--reps", 100);
    let sparsity = flag(&args, "--sparsity", 1.0);
    let alpha = flag(&args, "--alpha", 0.05);
    let base_seed = flag(&args, "--seed", 0u64);
    let standardize = !args.iter().any(|a| a == "--raw");

    let tol = (t as f64).ln().powi(2);
    let (p, q) = model.detector_orders();
    let started = Instant::now();
    let mut counts = std::collections::BTreeMap::new();
    let mut hits = vec![0usize; 3];
    let mut any = 0;
    for run in 0..runs {
        let seed = base_seed + run;
        let spec = ScenarioSpec::new(model, n, t, seed).with_sparsity(sparsity);
        let labeled = generate(&spec)?;
        let settings = DetectionSettings {
            p,
            q,
            alpha,
            boot_reps: reps,
            seed: seed.wrapping_mul(7919),
            standardize,
            ..Default::default()
        };
        let found = detect(&labeled.returns, &settings)?.change_points.locations();
        *counts.entry(found.len()).or_insert(0) += 1;
        if !found.is_empty() {
            any += 1;
        }
        for (b, eta) in labeled.truth.iter().enumerate() {
            if found.iter().any(|&e| (e as f64 - *eta as f64).abs() < tol) {
                hits[b] += 1;
            }
        }
        println!("run {run:>3}: truth {:?} found {:?}", labeled.truth, found);
    }
    println!("{} N={n} T={t} sparsity={sparsity} R={reps} alpha={alpha} standardize={standardize}", model.name());
    println!("number of change-points found: {counts:?}");
    println!("runs with any detection: {any}/{runs}");
    println!("truth hit within log^2 T: {:?}", hits);
    println!("elapsed {:.1?}", started.elapsed());
    Ok(())
}
