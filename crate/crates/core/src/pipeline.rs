//! End-to-end runs: detection on a returns panel and the stressed VaR
//! backtest built on its segments.

use serde::{Deserialize, Serialize};

use crate::bootstrap::{BootstrapEnsemble, BootstrapThreshold, DEFAULT_ALPHA, DEFAULT_REPS};
use crate::dcbs::{dcbs_run, ChangePointSet, DcbsConfig, DEFAULT_MIN_SEG};
use crate::error::Result;
use crate::garch::{fit_garch, GarchFit};
use crate::panel::ReturnsPanel;
use crate::risk::{
    rolling_svar_backtest, segment_covariances, BacktestConfig, BacktestReport, CovarianceSource,
};
use crate::transform::{build_panel, TransformConfig, TransformedPanel, DEFAULT_EPSILON};

/// Settings of [`detect`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionSettings {
    pub p: usize,
    pub q: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub boot_reps: usize,
    pub seed: u64,
    pub min_seg: usize,
    pub standardize: bool,
}

impl Default for DetectionSettings {
    fn default() -> Self {
        Self {
            p: 1,
            q: 1,
            epsilon: DEFAULT_EPSILON,
            alpha: DEFAULT_ALPHA,
            boot_reps: DEFAULT_REPS,
            seed: 0,
            min_seg: DEFAULT_MIN_SEG,
            standardize: true,
        }
    }
}

/// Everything produced by a detection run.
#[derive(Debug, Clone)]
pub struct Detection {
    pub fits: Vec<GarchFit>,
    pub transform: TransformConfig,
    pub panel: TransformedPanel,
    pub change_points: ChangePointSet,
}

impl Detection {
    pub fn segments(&self) -> Vec<(usize, usize)> {
        self.change_points.segments(self.panel.len())
    }
}

/// Fits every series, transforms the panel and segments it with bootstrap
/// thresholds.
pub fn detect(returns: &ReturnsPanel, settings: &DetectionSettings) -> Result<Detection> {
    let fits = fit_all(returns, settings.p, settings.q)?;
    let (panel, transform) = build_panel(returns, &fits, settings.epsilon)?;
    let ensemble = BootstrapEnsemble::from_fits(
        returns,
        &fits,
        transform.clone(),
        settings.boot_reps,
        settings.seed,
    )?;
    let thresholds = BootstrapThreshold {
        ensemble,
        alpha: settings.alpha,
        standardize: settings.standardize,
    };
    let config = DcbsConfig {
        min_seg: settings.min_seg,
        standardize: settings.standardize,
    };
    let change_points = dcbs_run(&panel.data, &thresholds, &config)?;
    Ok(Detection {
        fits,
        transform,
        panel,
        change_points,
    })
}

/// GARCH(p, q) fit of every series.
pub fn fit_all(returns: &ReturnsPanel, p: usize, q: usize) -> Result<Vec<GarchFit>> {
    use rayon::prelude::*;
    returns
        .all_series()
        .par_iter()
        .map(|s| fit_garch(s, p, q))
        .collect()
}

/// Stress periods from the segments of `detection_sample`, backtested on
/// `eval`.
pub fn stress_backtest(
    detection_sample: &ReturnsPanel,
    segments: &[(usize, usize)],
    eval: &ReturnsPanel,
    source: CovarianceSource,
    config: &BacktestConfig,
) -> Result<BacktestReport> {
    let periods = segment_covariances(detection_sample, segments, source)?;
    rolling_svar_backtest(eval, &periods, config)
}
