//! Parametric bootstrap calibration of the detection threshold.
//!
//! Standardized residuals are resampled as whole cross-sections, fed back
//! through the fitted GARCH recursions, transformed with the coefficients
//! and pair signs of the original data, and scanned. The threshold for a
//! segment is an upper order statistic of the replicate statistics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dcbs::{segment_statistic, ThresholdProvider};
use crate::error::{Error, Result};
use crate::garch::{simulate_garch_path, GarchFit, GarchParams, ParamSchedule};
use crate::panel::{Panel, ReturnsPanel};
use crate::transform::TransformConfig;

pub const DEFAULT_REPS: usize = 200;
pub const DEFAULT_ALPHA: f64 = 0.05;
/// Fewer replicates make the upper quantile too coarse to be useful.
pub const MIN_REPS: usize = 20;

/// `N x T` matrix of `r_{i,t} / sqrt(h_{i,t})`.
pub fn residual_matrix(returns: &ReturnsPanel, fits: &[GarchFit]) -> Result<Panel> {
    if fits.len() != returns.n_series() {
        return Err(Error::InvalidArgument(format!(
            "{} fits for {} series",
            fits.len(),
            returns.n_series()
        )));
    }
    let rows = fits
        .iter()
        .enumerate()
        .map(|(i, fit)| {
            returns
                .series(i)
                .iter()
                .zip(&fit.fitted_condvar)
                .map(|(r, h)| r / h.sqrt())
                .collect()
        })
        .collect();
    Panel::from_rows(rows)
}

/// Draws `T` column indices uniformly with replacement and copies the
/// corresponding cross-sections.
pub fn resample_vectors<R: Rng + ?Sized>(residuals: &Panel, rng: &mut R) -> Panel {
    let (n, t) = (residuals.rows(), residuals.cols());
    let picks: Vec<usize> = (0..t).map(|_| rng.random_range(0..t)).collect();
    let mut out = Panel::zeros(n, t);
    for i in 0..n {
        let src = residuals.row(i);
        for (dst, &k) in out.row_mut(i).iter_mut().zip(&picks) {
            *dst = src[k];
        }
    }
    out
}

/// Runs each series' GARCH recursion on the given innovations, starting
/// from the unconditional variance.
pub fn simulate_replicate(params: &[GarchParams], innovations: &Panel) -> Result<ReturnsPanel> {
    if params.len() != innovations.rows() {
        return Err(Error::InvalidArgument(format!(
            "{} parameter sets for {} innovation rows",
            params.len(),
            innovations.rows()
        )));
    }
    let series = params
        .iter()
        .enumerate()
        .map(|(i, p)| {
            simulate_garch_path(&ParamSchedule::constant(p.clone()), innovations.row(i), 0)
                .map(|s| s.values)
        })
        .collect::<Result<Vec<_>>>()?;
    ReturnsPanel::new(series)
}

/// `R` bootstrap replicates, each re-created on demand from `(seed, l)`.
#[derive(Debug, Clone)]
pub struct BootstrapEnsemble {
    residuals: Panel,
    config: TransformConfig,
    reps: usize,
    seed: u64,
}

impl BootstrapEnsemble {
    /// `config` carries both the fitted parameters used for simulation and
    /// the transformation applied to every replicate.
    pub fn new(residuals: Panel, config: TransformConfig, reps: usize, seed: u64) -> Result<Self> {
        if reps < MIN_REPS {
            return Err(Error::InvalidArgument(format!(
                "at least {MIN_REPS} bootstrap replicates needed, got {reps}"
            )));
        }
        if residuals.rows() != config.n_series() {
            return Err(Error::InvalidArgument(format!(
                "residuals have {} rows, transform has {} series",
                residuals.rows(),
                config.n_series()
            )));
        }
        if residuals.cols() == 0 {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        Ok(Self {
            residuals,
            config,
            reps,
            seed,
        })
    }

    /// Ensemble for data already run through [`crate::transform::build_panel`].
    pub fn from_fits(
        returns: &ReturnsPanel,
        fits: &[GarchFit],
        config: TransformConfig,
        reps: usize,
        seed: u64,
    ) -> Result<Self> {
        Self::new(residual_matrix(returns, fits)?, config, reps, seed)
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.residuals.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Simulated returns of replicate `l`.
    pub fn replicate(&self, l: usize) -> Result<ReturnsPanel> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ l as u64);
        let eps = resample_vectors(&self.residuals, &mut rng);
        simulate_replicate(&self.config.params, &eps)
    }

    /// Statistic of every replicate over `start..end`, in replicate order.
    pub fn segment_stats(&self, start: usize, end: usize, standardize: bool) -> Result<Vec<f64>> {
        if end > self.len() || end < start + 2 {
            return Err(Error::InvalidArgument(format!(
                "segment {start}..{end} invalid for length {}",
                self.len()
            )));
        }
        (0..self.reps)
            .into_par_iter()
            .map(|l| {
                let returns = self.replicate(l)?;
                let panel = self.config.apply(&returns)?;
                Ok(segment_statistic(&panel.data, start, end, standardize)?.stat)
            })
            .collect()
    }

    /// Threshold for `start..end` at level `alpha`.
    pub fn threshold_for_segment(
        &self,
        start: usize,
        end: usize,
        alpha: f64,
        standardize: bool,
    ) -> Result<f64> {
        let stats = self.segment_stats(start, end, standardize)?;
        upper_order_statistic(stats, alpha)
    }
}

/// The `ceil((1 - alpha) R)`-th smallest of `values`.
pub fn upper_order_statistic(mut values: Vec<f64>, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    if values.is_empty() {
        return Err(Error::InvalidArgument("no values".into()));
    }
    let r = values.len();
    // guard against (1 - alpha) R landing a hair above an integer
    let rank = (((1.0 - alpha) * r as f64) - 1e-9).ceil().clamp(1.0, r as f64) as usize;
    values.sort_unstable_by(f64::total_cmp);
    Ok(values[rank - 1])
}

/// [`ThresholdProvider`] backed by a bootstrap ensemble.
#[derive(Debug, Clone)]
pub struct BootstrapThreshold {
    pub ensemble: BootstrapEnsemble,
    pub alpha: f64,
    /// Must match the segmentation's setting.
    pub standardize: bool,
}

impl ThresholdProvider for BootstrapThreshold {
    fn threshold(&self, start: usize, end: usize) -> Result<f64> {
        self.ensemble
            .threshold_for_segment(start, end, self.alpha, self.standardize)
    }
}
