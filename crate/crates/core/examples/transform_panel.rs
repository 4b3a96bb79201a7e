//! Builds the transformed panel of a small simulated panel and shows how
//! row means move across a volatility break.
//!
//! ```text
//! cargo run --release --example transform_panel
//! ```

use mvgarch_cpd::pipeline::fit_all;
use mvgarch_cpd::simlab::{generate, ModelId, ScenarioSpec};
use mvgarch_cpd::transform::{build_panel, DEFAULT_EPSILON};

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn main() -> mvgarch_cpd::Result<()> {
    // M1.4: unconditional variance drops from 1.0 to 0.2 at T/2
    let labeled = generate(&ScenarioSpec::new(ModelId::M1(4), 4, 1000, 3))?;
    let eta = labeled.truth[0];
    let fits = fit_all(&labeled.returns, 1, 1)?;
    let (panel, config) = build_panel(&labeled.returns, &fits, DEFAULT_EPSILON)?;

    println!("{} series -> {} rows x {} columns", config.n_series(), panel.dim(), panel.len());
    println!("break at {eta}");
    println!("row  pair    F_i      before   after");
    let map = config.index_map();
    for j in 0..panel.dim() {
        let (i, k) = map.pair(j);
        let row = panel.data.row(j);
        println!(
            "{j:>3}  ({i},{k})  {:6.2}  {:7.3}  {:7.3}",
            config.dampening[i],
            mean(&row[..eta]),
            mean(&row[eta..])
        );
    }
    Ok(())
}
