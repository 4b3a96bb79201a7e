//! Bootstrap null distribution of the scan statistic for a stationary panel
//! and the thresholds it yields on nested segments.
//!
//! ```text
//! cargo run --release --example bootstrap_threshold -- [reps]
//! ```

use mvgarch_cpd::bootstrap::{upper_order_statistic, BootstrapEnsemble};
use mvgarch_cpd::dcbs::segment_statistic;
use mvgarch_cpd::pipeline::fit_all;
use mvgarch_cpd::simlab::{generate, ModelId, ScenarioSpec};
use mvgarch_cpd::transform::{build_panel, DEFAULT_EPSILON};

fn main() -> mvgarch_cpd::Result<()> {
    let reps: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let labeled = generate(&ScenarioSpec::new(ModelId::M0(1), 10, 500, 5))?;
    let fits = fit_all(&labeled.returns, 1, 1)?;
    let (panel, config) = build_panel(&labeled.returns, &fits, DEFAULT_EPSILON)?;
    let ensemble = BootstrapEnsemble::from_fits(&labeled.returns, &fits, config, reps, 5)?;

    println!("R = {reps}, stationary M0.1 panel with N = 10, T = 500");
    println!("segment     data stat   q90      q95      q99");
    for (start, end) in [(0, 500), (0, 250), (250, 500), (100, 200)] {
        let stats = ensemble.segment_stats(start, end, true)?;
        let data = segment_statistic(&panel.data, start, end, true)?.stat;
        println!(
            "{start:>3}..{end:<3}  {data:9.3}  {:7.3}  {:7.3}  {:7.3}",
            upper_order_statistic(stats.clone(), 0.10)?,
            upper_order_statistic(stats.clone(), 0.05)?,
            upper_order_statistic(stats.clone(), 0.01)?
        );
    }
    Ok(())
}
