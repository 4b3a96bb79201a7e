//! Simulates a GARCH(1, 1) path and recovers its parameters by Gaussian
//! QMLE.
//!
//! ```text
//! cargo run --release --example garch_fit -- [T] [seed]
//! ```

use mvgarch_cpd::garch::{fit_garch, simulate_garch_path, GarchParams, ParamSchedule, DEFAULT_BURN_IN};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> mvgarch_cpd::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let t: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(5000);
    let seed: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(7);

    let truth = GarchParams::garch11(0.1, 0.1, 0.8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps: Vec<f64> = (0..t + DEFAULT_BURN_IN)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let path = simulate_garch_path(&ParamSchedule::constant(truth.clone()), &eps, DEFAULT_BURN_IN)?;

    let fit = fit_garch(&path.values, 1, 1)?;
    println!("T = {t}");
    println!("true   omega {:.4}  alpha {:.4}  beta {:.4}", truth.omega, truth.alpha[0], truth.beta[0]);
    println!(
        "fitted omega {:.4}  alpha {:.4}  beta {:.4}",
        fit.params.omega, fit.params.alpha[0], fit.params.beta[0]
    );
    println!("log-likelihood {:.2}, converged {}", fit.loglik, fit.converged);

    let var_res = fit.residuals.iter().map(|e| e * e).sum::<f64>() / fit.residuals.len() as f64;
    println!("mean squared residual {var_res:.4}");
    Ok(())
}
