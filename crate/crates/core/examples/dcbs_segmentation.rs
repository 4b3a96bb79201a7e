//! Double CUSUM Binary Segmentation on a hand-made panel with a dense and a
//! sparse mean shift, using a fixed threshold.
//!
//! ```text
//! cargo run --release --example dcbs_segmentation
//! ```

use mvgarch_cpd::dcbs::{dcbs_run, segment_statistic, ConstantThreshold, DcbsConfig};
use mvgarch_cpd::panel::Panel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> mvgarch_cpd::Result<()> {
    let (d, t) = (40, 600);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rows: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            (0..t)
                .map(|s| {
                    let mut mu = 0.0;
                    // every row shifts at 200, only four rows at 420
                    if s >= 200 {
                        mu += 0.5;
                    }
                    if s >= 420 && j < 4 {
                        mu += 1.5;
                    }
                    mu + <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng)
                })
                .collect()
        })
        .collect();
    let panel = Panel::from_rows(rows)?;

    let full = segment_statistic(&panel, 0, t, false)?;
    println!("full-sample scan: stat {:.2} at {} using {} rows", full.stat, full.location, full.n_hat);

    let config = DcbsConfig::default();
    let found = dcbs_run(&panel, &ConstantThreshold(10.0), &config)?;
    for cp in &found.points {
        println!(
            "level {} on {}..{}: break at {} (stat {:.2}, {} rows)",
            cp.level, cp.start, cp.end, cp.location, cp.stat, cp.n_hat
        );
    }
    println!("segments: {:?}", found.segments(t));
    Ok(())
}
