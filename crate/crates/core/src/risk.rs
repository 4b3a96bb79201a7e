//! Stressed Value-at-Risk on detected regimes and its backtesting.
//!
//! Each stationary segment of the detection sample supplies a covariance
//! `S_b = L_b L_b'`. On every day of the evaluation year the trailing
//! window of returns is rotated onto that covariance via
//! `r (L_b L_cur^{-1})'`, where `L_cur` factors the window's own sample
//! covariance, and the VaR of the equally weighted portfolio is read off the
//! empirical quantile. Violations against the realized portfolio returns
//! are scored with Kupiec's proportion-of-failures and time-until-first-
//! failure tests and the Basel traffic light.

use std::io::Write;

use chrono::NaiveDate;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::garch::fit_garch;
use crate::panel::ReturnsPanel;

pub const DEFAULT_WINDOW: usize = 250;
pub const DEFAULT_LEVELS: [f64; 2] = [0.95, 0.99];
/// Shortest sample an empirical VaR is taken from.
pub const MIN_VAR_SAMPLE: usize = 20;

/// What the per-segment covariance is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceSource {
    /// Returns net of their segment mean. Keeps the volatility level of the
    /// regime, which is what the stress rotation is meant to import.
    #[default]
    DemeanedReturns,
    /// Residuals of GARCH(1, 1) fits re-estimated on the segment, divided by
    /// their conditional standard deviation. These have roughly unit
    /// variance in every regime, so only correlation structure differs.
    StandardizedResiduals,
}

/// Covariance of one stationary segment and its Cholesky factor.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentCovariance {
    pub segment: usize,
    pub start: usize,
    pub end: usize,
    pub sigma: DMatrix<f64>,
    /// Lower triangular with positive diagonal, `L L' = sigma`.
    pub chol: DMatrix<f64>,
}

impl SegmentCovariance {
    pub fn from_sigma(segment: usize, start: usize, end: usize, sigma: DMatrix<f64>) -> Result<Self> {
        let chol = sigma
            .clone()
            .cholesky()
            .ok_or(Error::Cholesky { segment })?
            .l();
        Ok(Self {
            segment,
            start,
            end,
            sigma,
            chol,
        })
    }
}

/// Sample covariance (divisor `n - 1`) of the rows of `x` (`n x N`).
pub fn sample_covariance(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mean = x.row_mean();
    let mut centred = x.clone();
    for mut row in centred.row_iter_mut() {
        row -= &mean;
    }
    centred.transpose() * &centred / (n as f64 - 1.0)
}

/// `T x N` matrix of a panel's observations `start..end`.
pub fn window_matrix(returns: &ReturnsPanel, start: usize, end: usize) -> DMatrix<f64> {
    let n = returns.n_series();
    DMatrix::from_fn(end - start, n, |t, i| returns.series(i)[start + t])
}

/// One covariance per segment `start..end`.
pub fn segment_covariances(
    returns: &ReturnsPanel,
    segments: &[(usize, usize)],
    source: CovarianceSource,
) -> Result<Vec<SegmentCovariance>> {
    let n = returns.n_series();
    segments
        .iter()
        .enumerate()
        .map(|(b, &(start, end))| {
            if end > returns.len() || start >= end {
                return Err(Error::InvalidArgument(format!(
                    "segment {start}..{end} outside the sample"
                )));
            }
            if end - start <= n {
                return Err(Error::SegmentTooShort {
                    segment: b,
                    len: end - start,
                    dim: n,
                });
            }
            let x = match source {
                CovarianceSource::DemeanedReturns => window_matrix(returns, start, end),
                CovarianceSource::StandardizedResiduals => {
                    let cols = (0..n)
                        .map(|i| Ok(fit_garch(&returns.series(i)[start..end], 1, 1)?.residuals))
                        .collect::<Result<Vec<_>>>()?;
                    DMatrix::from_fn(end - start, n, |t, i| cols[i][t])
                }
            };
            SegmentCovariance::from_sigma(b, start, end, sample_covariance(&x))
        })
        .collect()
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky_lower(sigma: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(sigma.clone().cholesky().ok_or(Error::Singular)?.l())
}

/// Maps every row `r` of `window` to `r (L_b L_cur^{-1})'`.
pub fn stress_transform(
    window: &DMatrix<f64>,
    l_b: &DMatrix<f64>,
    l_cur: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let n = l_cur.nrows();
    if l_cur.ncols() != n || l_b.shape() != (n, n) || window.ncols() != n {
        return Err(Error::InvalidArgument("dimension mismatch in stress transform".into()));
    }
    // (L_b L_cur^{-1})' = L_cur^{-T} L_b', solved rather than inverted
    let m = l_cur
        .transpose()
        .solve_upper_triangular(&l_b.transpose())
        .ok_or(Error::Singular)?;
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular);
    }
    Ok(window * m)
}

/// `-q`, where `q` is the ascending order statistic at `ceil((1 - level) W)`.
pub fn empirical_var(returns: &[f64], level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "VaR level must lie in (0, 1), got {level}"
        )));
    }
    let w = returns.len();
    if w < MIN_VAR_SAMPLE {
        return Err(Error::TooShort {
            needed: MIN_VAR_SAMPLE,
            got: w,
        });
    }
    let rank = (((1.0 - level) * w as f64) - 1e-9).ceil().clamp(1.0, w as f64) as usize;
    let mut sorted = returns.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(-sorted[rank - 1])
}

/// `x ln y` with `0 ln 0 = 0`.
fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// `P(chi^2_1 > lr)`.
pub fn chi2_1_survival(lr: f64) -> f64 {
    erfc((lr.max(0.0) / 2.0).sqrt())
}

/// Kupiec proportion-of-failures test of `violations` out of `days`.
/// Returns `(LR, p)`.
pub fn kupiec_pof(days: usize, violations: usize, level: f64) -> Result<(f64, f64)> {
    if violations > days || days == 0 {
        return Err(Error::InvalidArgument(format!(
            "{violations} violations in {days} days"
        )));
    }
    check_level(level)?;
    let (t, x) = (days as f64, violations as f64);
    let null = xlny(t - x, level) + xlny(x, 1.0 - level);
    let alt = xlny(t - x, 1.0 - x / t) + xlny(x, x / t);
    let lr = (-2.0 * (null - alt)).max(0.0);
    Ok((lr, chi2_1_survival(lr)))
}

/// Kupiec time-until-first-failure test, first violation on day
/// `first_failure` (1-based). Returns `(LR, p)`.
pub fn kupiec_tff(first_failure: usize, level: f64) -> Result<(f64, f64)> {
    if first_failure == 0 {
        return Err(Error::InvalidArgument("first failure day is 1-based".into()));
    }
    check_level(level)?;
    let t = first_failure as f64;
    let null = (1.0 - level).ln() + xlny(t - 1.0, level);
    let alt = (1.0 / t).ln() + xlny(t - 1.0, 1.0 - 1.0 / t);
    let lr = (-2.0 * (null - alt)).max(0.0);
    Ok((lr, chi2_1_survival(lr)))
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "level must lie in (0, 1), got {level}"
        )))
    }
}

/// Basel traffic-light zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Zone {
    Green,
    Yellow,
    Red,
}

/// Largest violation counts still green and still yellow, per level, for a
/// 250-day window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficLightConfig {
    pub green_max_99: usize,
    pub yellow_max_99: usize,
    pub green_max_95: usize,
    pub yellow_max_95: usize,
}

impl Default for TrafficLightConfig {
    /// Cutoffs where the binomial(250, 1 - level) distribution function
    /// passes 95% and 99.99%.
    fn default() -> Self {
        Self {
            green_max_99: 4,
            yellow_max_99: 9,
            green_max_95: 17,
            yellow_max_95: 26,
        }
    }
}

pub fn traffic_light(violations: usize, level: f64) -> Result<Zone> {
    traffic_light_with(violations, level, &TrafficLightConfig::default())
}

pub fn traffic_light_with(violations: usize, level: f64, config: &TrafficLightConfig) -> Result<Zone> {
    let (green, yellow) = if (level - 0.99).abs() < 1e-12 {
        (config.green_max_99, config.yellow_max_99)
    } else if (level - 0.95).abs() < 1e-12 {
        (config.green_max_95, config.yellow_max_95)
    } else {
        return Err(Error::InvalidArgument(format!(
            "traffic light defined for levels 0.95 and 0.99, got {level}"
        )));
    };
    Ok(if violations <= green {
        Zone::Green
    } else if violations <= yellow {
        Zone::Yellow
    } else {
        Zone::Red
    })
}

/// Test outcome for one stress period at one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestResult {
    /// 1-based period number.
    pub period: usize,
    pub level: f64,
    /// Detection-sample segment `from..to` supplying the covariance.
    pub from: usize,
    pub to: usize,
    /// Quantile of the stressed portfolio on the first forecast day; the
    /// negative of the VaR.
    pub svar: f64,
    pub violations: usize,
    /// Day of the first violation, 1-based.
    pub t_first: Option<usize>,
    pub lr_pof: f64,
    pub p_pof: f64,
    pub lr_tff: Option<f64>,
    pub p_tff: Option<f64>,
    /// `None` for levels without a traffic light.
    pub zone: Option<Zone>,
}

/// Stressed VaR path for one period and level.
#[derive(Debug, Clone, PartialEq)]
pub struct SvarPath {
    pub period: usize,
    pub level: f64,
    /// `-VaR` per forecast day.
    pub quantiles: Vec<f64>,
}

/// Full backtest output.
#[derive(Debug, Clone, PartialEq)]
pub struct BacktestReport {
    pub window: usize,
    pub results: Vec<BacktestResult>,
    pub paths: Vec<SvarPath>,
    /// Realized portfolio return of each forecast day.
    pub realized: Vec<f64>,
    pub dates: Option<Vec<NaiveDate>>,
}

/// Settings of [`rolling_svar_backtest`].
#[derive(Debug, Clone, PartialEq)]
pub struct BacktestConfig {
    pub window: usize,
    pub levels: Vec<f64>,
    pub traffic_light: TrafficLightConfig,
}

impl Default for BacktestConfig {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            levels: DEFAULT_LEVELS.to_vec(),
            traffic_light: TrafficLightConfig::default(),
        }
    }
}

/// Counts `realized < -VaR` days and the first such day (1-based).
pub fn count_violations(realized: &[f64], quantiles: &[f64]) -> (usize, Option<usize>) {
    let mut count = 0;
    let mut first = None;
    for (day, (r, q)) in realized.iter().zip(quantiles).enumerate() {
        if r < q {
            count += 1;
            first.get_or_insert(day + 1);
        }
    }
    (count, first)
}

/// One-day-ahead stressed VaR over the evaluation sample.
///
/// `eval` holds `window` initial observations followed by the forecast
/// days. On forecast day `i` the trailing window `i..i + window` is rotated
/// onto each period's covariance and the VaR is compared with the realized
/// portfolio return of day `window + i`.
pub fn rolling_svar_backtest(
    eval: &ReturnsPanel,
    periods: &[SegmentCovariance],
    config: &BacktestConfig,
) -> Result<BacktestReport> {
    let w = config.window;
    if w < MIN_VAR_SAMPLE {
        return Err(Error::InvalidArgument(format!(
            "window must be at least {MIN_VAR_SAMPLE} days, got {w}"
        )));
    }
    if w <= eval.n_series() {
        return Err(Error::InvalidArgument(format!(
            "window of {w} days cannot estimate a {n} x {n} covariance",
            n = eval.n_series()
        )));
    }
    if eval.len() <= w {
        return Err(Error::TooShort {
            needed: w + 1,
            got: eval.len(),
        });
    }
    if periods.is_empty() {
        return Err(Error::InvalidArgument("no stress periods".into()));
    }
    for level in &config.levels {
        check_level(*level)?;
    }
    let n = eval.n_series();
    if periods.iter().any(|p| p.chol.nrows() != n) {
        return Err(Error::InvalidArgument(
            "stress covariances and evaluation panel differ in dimension".into(),
        ));
    }
    let horizon = eval.len() - w;
    let full = window_matrix(eval, 0, eval.len());
    let realized = eval.equal_weight_portfolio()[w..].to_vec();
    let weight = 1.0 / n as f64;

    // per day: -VaR for every (period, level)
    let per_day: Vec<Vec<f64>> = (0..horizon)
        .into_par_iter()
        .map(|day| {
            let window = full.rows(day, w).into_owned();
            let l_cur = cholesky_lower(&sample_covariance(&window))?;
            let mut out = Vec::with_capacity(periods.len() * config.levels.len());
            for p in periods {
                let stressed = stress_transform(&window, &p.chol, &l_cur)?;
                let portfolio: Vec<f64> = stressed
                    .row_iter()
                    .map(|r| r.iter().sum::<f64>() * weight)
                    .collect();
                for level in &config.levels {
                    out.push(-empirical_var(&portfolio, *level)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let n_levels = config.levels.len();
    let mut results = Vec::new();
    let mut paths = Vec::new();
    for (b, p) in periods.iter().enumerate() {
        for (k, &level) in config.levels.iter().enumerate() {
            let quantiles: Vec<f64> = per_day.iter().map(|d| d[b * n_levels + k]).collect();
            let (violations, t_first) = count_violations(&realized, &quantiles);
            let (lr_pof, p_pof) = kupiec_pof(horizon, violations, level)?;
            let tff = t_first.map(|t| kupiec_tff(t, level)).transpose()?;
            let zone = traffic_light_with(violations, level, &config.traffic_light).ok();
            results.push(BacktestResult {
                period: b + 1,
                level,
                from: p.start,
                to: p.end,
                svar: quantiles[0],
                violations,
                t_first,
                lr_pof,
                p_pof,
                lr_tff: tff.map(|x| x.0),
                p_tff: tff.map(|x| x.1),
                zone,
            });
            paths.push(SvarPath {
                period: b + 1,
                level,
                quantiles,
            });
        }
    }
    Ok(BacktestReport {
        window: w,
        results,
        paths,
        realized,
        dates: eval.dates().map(|d| d[w..].to_vec()),
    })
}

impl BacktestReport {
    /// Period with the most negative first-day stressed quantile at `level`.
    pub fn most_stressed(&self, level: f64) -> Option<usize> {
        self.results
            .iter()
            .filter(|r| (r.level - level).abs() < 1e-12)
            .min_by(|a, b| a.svar.total_cmp(&b.svar))
            .map(|r| r.period)
    }

    /// Per-day CSV: date (or day index), realized portfolio return and one
    /// stressed quantile column per period and level.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let mut header = vec![
            if self.dates.is_some() { "date" } else { "day" }.to_string(),
            "portfolio_return".to_string(),
        ];
        header.extend(
            self.paths
                .iter()
                .map(|p| format!("svar_p{}_{}", p.period, p.level)),
        );
        wtr.write_record(&header).map_err(csv_err)?;
        for day in 0..self.realized.len() {
            let mut row = vec![match &self.dates {
                Some(d) => d[day].to_string(),
                None => (day + 1).to_string(),
            }];
            row.push(self.realized[day].to_string());
            row.extend(self.paths.iter().map(|p| p.quantiles[day].to_string()));
            wtr.write_record(&row).map_err(csv_err)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian_panel(n: usize, t: usize, scale: f64, seed: u64) -> ReturnsPanel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let series = (0..n)
            .map(|_| {
                (0..t)
                    .map(|_| scale * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
                    .collect()
            })
            .collect();
        ReturnsPanel::new(series).unwrap()
    }

    /// `P(chi^2_1 > x) = 1 - (2/sqrt(pi)) int_0^{sqrt(x/2)} exp(-u^2) du`,
    /// integrated with composite Simpson.
    fn chi2_survival_quadrature(x: f64) -> f64 {
        let b = (x / 2.0).sqrt();
        let m = 20_000;
        let h = b / m as f64;
        let f = |u: f64| (-u * u).exp();
        let mut s = f(0.0) + f(b);
        for k in 1..m {
            s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        1.0 - 2.0 / std::f64::consts::PI.sqrt() * s * h / 3.0
    }

    #[test]
    fn survival_matches_quadrature() {
        let mut x = 0.01;
        while x <= 20.0 {
            assert!((chi2_1_survival(x) - chi2_survival_quadrature(x)).abs() < 1e-6, "{x}");
            x += 0.01 + x * 0.05;
        }
        assert_eq!(chi2_1_survival(0.0), 1.0);
    }

    #[test]
    fn pof_examples() {
        let (lr, p) = kupiec_pof(100, 5, 0.95).unwrap();
        assert_eq!(lr, 0.0);
        assert_eq!(p, 1.0);
        let (lr, p) = kupiec_pof(250, 1, 0.99).unwrap();
        assert_abs_diff_eq!(lr, 1.1765, epsilon = 1e-3);
        assert_abs_diff_eq!(p, 0.278, epsilon = 1e-3);
        assert!((p - 0.2805).abs() <= 0.02);
        let (lr, p) = kupiec_pof(250, 0, 0.99).unwrap();
        assert_abs_diff_eq!(lr, -500.0 * 0.99f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(p, 0.0250, epsilon = 1e-4);
        let (lr, _) = kupiec_pof(10, 10, 0.99).unwrap();
        assert_abs_diff_eq!(lr, -20.0 * 0.01f64.ln(), epsilon = 1e-12);
        assert!(kupiec_pof(10, 11, 0.99).is_err());
    }

    #[test]
    fn tff_examples() {
        let (lr, p) = kupiec_tff(121, 0.99).unwrap();
        assert_abs_diff_eq!(lr, 0.0391, epsilon = 1e-3);
        assert!((p - 0.8431).abs() <= 0.005, "{p}");
        let (lr, p) = kupiec_tff(1, 0.99).unwrap();
        assert_abs_diff_eq!(lr, -2.0 * 0.01f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(p, 0.0024, epsilon = 1e-4);
        // geometric MLE at 1 / (1 - level)
        let at = |t| kupiec_tff(t, 0.95).unwrap().0;
        let min = (1..200).min_by(|&a, &b| at(a).total_cmp(&at(b))).unwrap();
        assert_eq!(min, 20);
    }

    #[test]
    fn traffic_light_examples() {
        assert_eq!(traffic_light(1, 0.99).unwrap(), Zone::Green);
        assert_eq!(traffic_light(4, 0.99).unwrap(), Zone::Green);
        assert_eq!(traffic_light(5, 0.99).unwrap(), Zone::Yellow);
        assert_eq!(traffic_light(10, 0.99).unwrap(), Zone::Red);
        assert_eq!(traffic_light(17, 0.95).unwrap(), Zone::Green);
        assert_ne!(traffic_light(18, 0.95).unwrap(), Zone::Green);
        assert!(traffic_light(1, 0.9).is_err());
    }

    #[test]
    fn var_examples() {
        let r: Vec<f64> = (-3..17).map(f64::from).collect();
        assert_eq!(empirical_var(&r, 0.95).unwrap(), 3.0);
        let pos: Vec<f64> = (0..40).map(f64::from).collect();
        assert!(empirical_var(&pos, 0.99).unwrap() <= 0.0);
        assert!(empirical_var(&r[..19], 0.95).is_err());
    }

    #[test]
    fn stress_transform_examples() {
        let window = DMatrix::from_row_slice(3, 1, &[1.0, -2.0, 0.5]);
        let l = DMatrix::from_element(1, 1, 2.0);
        assert_eq!(stress_transform(&window, &l, &l).unwrap(), window);
        let l_b = DMatrix::from_element(1, 1, 3.0);
        let out = stress_transform(&window, &l_b, &l).unwrap();
        assert_abs_diff_eq!(out[(1, 0)], -3.0, epsilon = 1e-15);
        let zero = DMatrix::zeros(1, 1);
        assert!(stress_transform(&window, &l_b, &zero).is_err());
    }

    /// Whitens a sample so that its covariance is exactly `target`.
    fn with_exact_covariance(x: &DMatrix<f64>, target: &DMatrix<f64>) -> DMatrix<f64> {
        let l_x = cholesky_lower(&sample_covariance(x)).unwrap();
        let l_t = cholesky_lower(target).unwrap();
        stress_transform(x, &l_t, &l_x).unwrap()
    }

    #[test]
    fn covariance_identity() {
        for n in [1, 2, 5, 31] {
            let t = 120;
            let a = window_matrix(&gaussian_panel(n, t, 1.0, n as u64), 0, t);
            let b = window_matrix(&gaussian_panel(n, t, 2.0, 100 + n as u64), 0, t);
            let sigma_b = sample_covariance(&b);
            let l_b = cholesky_lower(&sigma_b).unwrap();
            let l_cur = cholesky_lower(&sample_covariance(&a)).unwrap();
            let out = sample_covariance(&stress_transform(&a, &l_b, &l_cur).unwrap());
            assert!((out - &sigma_b).abs().max() < 1e-8);
            let exact = with_exact_covariance(&a, &sigma_b);
            assert!((sample_covariance(&exact) - &sigma_b).abs().max() < 1e-8);
        }
    }

    #[test]
    fn inverse_transform_round_trip() {
        let a = window_matrix(&gaussian_panel(4, 60, 1.0, 9), 0, 60);
        let l1 = cholesky_lower(&sample_covariance(&a)).unwrap();
        let l2 = cholesky_lower(&sample_covariance(&window_matrix(&gaussian_panel(4, 60, 3.0, 10), 0, 60))).unwrap();
        let there = stress_transform(&a, &l2, &l1).unwrap();
        let back = stress_transform(&there, &l1, &l2).unwrap();
        assert!((back - a).abs().max() < 1e-10);
    }

    #[test]
    fn segment_covariance_examples() {
        let returns = gaussian_panel(3, 2000, 1.0, 2);
        let cov = segment_covariances(&returns, &[(0, 2000)], CovarianceSource::DemeanedReturns).unwrap();
        let bound = 3.0 / (2000f64).sqrt();
        assert!((&cov[0].sigma - DMatrix::<f64>::identity(3, 3)).abs().max() < bound);
        let std = segment_covariances(&returns, &[(0, 2000)], CovarianceSource::StandardizedResiduals).unwrap();
        assert!((&std[0].sigma - DMatrix::<f64>::identity(3, 3)).abs().max() < bound);
        for c in cov.iter().chain(&std) {
            assert!((0..3).all(|i| c.chol[(i, i)] > 0.0));
            assert!(c.chol.upper_triangle().iter().enumerate().all(|(k, v)| k % 4 == 0 || *v == 0.0));
            assert!((&c.chol * c.chol.transpose() - &c.sigma).abs().max() < 1e-10);
        }

        let one = ReturnsPanel::new(vec![vec![1.0, 3.0, 2.0, 6.0]]).unwrap();
        let c = &segment_covariances(&one, &[(0, 4)], CovarianceSource::DemeanedReturns).unwrap()[0];
        assert_abs_diff_eq!(c.sigma[(0, 0)], 14.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.chol[(0, 0)], (14.0f64 / 3.0).sqrt(), epsilon = 1e-12);

        let err = segment_covariances(&returns, &[(0, 3)], CovarianceSource::DemeanedReturns);
        assert!(matches!(err, Err(Error::SegmentTooShort { segment: 0, .. })));
    }

    #[test]
    fn backtest_recount_and_shapes() {
        let detection = gaussian_panel(3, 400, 1.0, 3);
        let periods = segment_covariances(
            &detection,
            &[(0, 200), (200, 400)],
            CovarianceSource::DemeanedReturns,
        )
        .unwrap();
        let eval = gaussian_panel(3, 100, 1.0, 4);
        let config = BacktestConfig {
            window: 50,
            ..Default::default()
        };
        let report = rolling_svar_backtest(&eval, &periods, &config).unwrap();
        assert_eq!(report.results.len(), 4);
        assert_eq!(report.realized.len(), 50);
        for (res, path) in report.results.iter().zip(&report.paths) {
            let direct = report
                .realized
                .iter()
                .zip(&path.quantiles)
                .filter(|(r, q)| **r < **q)
                .count();
            assert_eq!(res.violations, direct);
            assert_eq!(res.lr_tff.is_some(), res.violations > 0);
            assert!(res.lr_pof >= 0.0 && (0.0..=1.0).contains(&res.p_pof));
        }
        // row mean of the forecast days
        let row = eval.row(60);
        assert_abs_diff_eq!(report.realized[10], row.iter().sum::<f64>() / 3.0, epsilon = 1e-15);
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("day,portfolio_return,svar_p1_0.95,svar_p1_0.99,svar_p2_0.95"));
        assert_eq!(text.lines().count(), 51);
    }

    #[test]
    fn own_covariance_reduces_to_plain_var() {
        // a periodic evaluation sample has the same covariance in every window
        let base = gaussian_panel(2, 60, 1.0, 5);
        let series = (0..2)
            .map(|i| base.series(i).iter().cycle().take(120).copied().collect())
            .collect();
        let eval = ReturnsPanel::new(series).unwrap();
        let periods = segment_covariances(&eval, &[(0, 60)], CovarianceSource::DemeanedReturns).unwrap();
        let config = BacktestConfig {
            window: 60,
            ..Default::default()
        };
        let report = rolling_svar_backtest(&eval, &periods, &config).unwrap();
        let portfolio = eval.equal_weight_portfolio();
        for (k, level) in config.levels.iter().enumerate() {
            for day in 0..60 {
                let plain = -empirical_var(&portfolio[day..day + 60], *level).unwrap();
                assert!((report.paths[k].quantiles[day] - plain).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn backtest_rejects_bad_windows() {
        let eval = gaussian_panel(2, 40, 1.0, 6);
        let periods = segment_covariances(&eval, &[(0, 40)], CovarianceSource::DemeanedReturns).unwrap();
        let short = BacktestConfig {
            window: 10,
            ..Default::default()
        };
        assert!(rolling_svar_backtest(&eval, &periods, &short).is_err());
        let long = BacktestConfig {
            window: 40,
            ..Default::default()
        };
        assert!(rolling_svar_backtest(&eval, &periods, &long).is_err());
    }

    proptest! {
        #[test]
        fn lr_statistics_non_negative(days in 1usize..400, frac in 0.0f64..1.0, level in 0.5f64..0.999) {
            let x = ((days as f64) * frac) as usize;
            let (lr, p) = kupiec_pof(days, x, level).unwrap();
            prop_assert!(lr >= 0.0 && (0.0..=1.0).contains(&p));
            let (lr, p) = kupiec_tff(days, level).unwrap();
            prop_assert!(lr >= 0.0 && (0.0..=1.0).contains(&p));
        }

        #[test]
        fn var_tail_nesting(values in prop::collection::vec(-10.0f64..10.0, 20..200)) {
            prop_assert!(empirical_var(&values, 0.99).unwrap() >= empirical_var(&values, 0.95).unwrap());
        }
    }
}
