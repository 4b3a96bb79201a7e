//! Simulates a panel with two known breaks and runs the full detector.
//!
//! ```text
//! cargo run --release --example detect_end_to_end -- [model] [N] [T] [seed]
//! ```

use std::time::Instant;

use mvgarch_cpd::pipeline::{detect, DetectionSettings};
use mvgarch_cpd::simlab::{generate, ModelId, ScenarioSpec};

fn main() -> mvgarch_cpd::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let model = ModelId::parse(args.first().map_or("M2.2", String::as_str))?;
    let n = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let t = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(500);
    let seed = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(1);

    let labeled = generate(&ScenarioSpec::new(model, n, t, seed))?;
    let (p, q) = model.detector_orders();
    let settings = DetectionSettings {
        p,
        q,
        boot_reps: 100,
        seed,
        ..Default::default()
    };
    let started = Instant::now();
    let detection = detect(&labeled.returns, &settings)?;
    println!("{} with N = {n}, T = {t}", model.name());
    println!("true change-points:     {:?}", labeled.truth);
    println!("detected change-points: {:?}", detection.change_points.locations());
    for cp in &detection.change_points.points {
        println!(
            "  at {:>4}: stat {:8.3}, threshold {:8.3}, {} of {} rows, level {}",
            cp.location,
            cp.stat,
            cp.threshold,
            cp.n_hat,
            detection.panel.dim(),
            cp.level
        );
    }
    println!("elapsed {:.2?}", started.elapsed());
    Ok(())
}
