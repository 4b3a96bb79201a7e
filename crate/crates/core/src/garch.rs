//! Univariate GARCH(p, q): path simulation, conditional-variance filtering and
//! Gaussian quasi-maximum likelihood estimation.
//!
//! The variance recursion is
//!
//! ```text
//! h_t = omega + sum_j alpha_j r_{t-j}^2 + sum_k beta_k h_{t-k}
//! ```
//!
//! Fitting is done on the series rescaled to unit sample variance, which makes
//! the estimator exactly scale equivariant: `omega` scales with the variance
//! and the ARCH/GARCH coefficients are untouched.

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower bound on the intercept.
pub const MIN_OMEGA: f64 = 1e-6;
/// Upper bound on `sum(alpha) + sum(beta)`.
pub const MAX_PERSISTENCE: f64 = 0.999;
/// Burn-in used by the scenario generators.
pub const DEFAULT_BURN_IN: usize = 500;

const PERSISTENCE_SLACK: f64 = 1e-12;

/// Parameters of one GARCH(p, q) regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchParams {
    pub omega: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl GarchParams {
    pub fn new(omega: f64, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let params = Self { omega, alpha, beta };
        params.validate()?;
        Ok(params)
    }

    /// GARCH(1, 1) shorthand.
    pub fn garch11(omega: f64, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(omega, vec![alpha], vec![beta])
    }

    pub fn validate(&self) -> Result<()> {
        if !self.omega.is_finite() || self.omega < MIN_OMEGA {
            return Err(Error::InvalidParams(format!(
                "omega = {} must be finite and >= {MIN_OMEGA}",
                self.omega
            )));
        }
        if self
            .alpha
            .iter()
            .chain(&self.beta)
            .any(|c| !c.is_finite() || *c < 0.0)
        {
            return Err(Error::InvalidParams(
                "ARCH/GARCH coefficients must be finite and non-negative".into(),
            ));
        }
        let s = self.persistence();
        if s > MAX_PERSISTENCE + PERSISTENCE_SLACK {
            return Err(Error::InvalidParams(format!(
                "persistence {s} exceeds {MAX_PERSISTENCE}"
            )));
        }
        Ok(())
    }

    /// Projects arbitrary values into the admissible box: negative
    /// coefficients are zeroed, `omega` is floored and the coefficients are
    /// shrunk proportionally when their sum exceeds the persistence cap.
    pub fn clipped(omega: f64, alpha: Vec<f64>, beta: Vec<f64>) -> Self {
        let mut alpha: Vec<f64> = alpha.into_iter().map(|a| a.max(0.0)).collect();
        let mut beta: Vec<f64> = beta.into_iter().map(|b| b.max(0.0)).collect();
        let s: f64 = alpha.iter().chain(&beta).sum();
        if s > MAX_PERSISTENCE {
            let k = MAX_PERSISTENCE / s;
            alpha.iter_mut().chain(beta.iter_mut()).for_each(|c| *c *= k);
        }
        Self {
            omega: omega.max(MIN_OMEGA),
            alpha,
            beta,
        }
    }

    pub fn p(&self) -> usize {
        self.alpha.len()
    }

    pub fn q(&self) -> usize {
        self.beta.len()
    }

    /// `sum(alpha) + sum(beta)`.
    pub fn persistence(&self) -> f64 {
        self.alpha.iter().sum::<f64>() + self.beta.iter().sum::<f64>()
    }

    /// `omega / (1 - persistence)`.
    pub fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.persistence())
    }

    /// Same parameters for a series multiplied by `c`.
    pub fn rescaled(&self, c: f64) -> Self {
        Self {
            omega: self.omega * c * c,
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
        }
    }
}

/// A univariate return series, optionally carrying the true conditional
/// variances when it was simulated.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnsSeries {
    pub values: Vec<f64>,
    pub condvar: Option<Vec<f64>>,
}

impl ReturnsSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        if let Some(t) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite return at index {t}"
            )));
        }
        Ok(Self {
            values,
            condvar: None,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Piecewise-constant parameter path over `0..T`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSchedule {
    pieces: Vec<(usize, GarchParams)>,
}

impl ParamSchedule {
    pub fn constant(params: GarchParams) -> Self {
        Self {
            pieces: vec![(0, params)],
        }
    }

    /// Builds a schedule from `(first index, params)` pairs. The first piece
    /// must start at 0, starts must increase and all pieces share one order.
    pub fn new(pieces: Vec<(usize, GarchParams)>) -> Result<Self> {
        let Some((first_start, first)) = pieces.first() else {
            return Err(Error::InvalidArgument("empty parameter schedule".into()));
        };
        if *first_start != 0 {
            return Err(Error::InvalidArgument(
                "parameter schedule must start at index 0".into(),
            ));
        }
        for w in pieces.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidArgument(
                    "parameter schedule starts must be strictly increasing".into(),
                ));
            }
        }
        for (_, p) in &pieces {
            p.validate()?;
            if p.p() != first.p() || p.q() != first.q() {
                return Err(Error::InvalidArgument(
                    "all schedule pieces must share the same (p, q)".into(),
                ));
            }
        }
        Ok(Self { pieces })
    }

    /// Parameters `before` for `t < at`, `after` from `at` on.
    pub fn with_break(before: GarchParams, at: usize, after: GarchParams) -> Result<Self> {
        if at == 0 {
            return Ok(Self::constant(after));
        }
        Self::new(vec![(0, before), (at, after)])
    }

    pub fn first(&self) -> &GarchParams {
        &self.pieces[0].1
    }

    pub fn at(&self, t: usize) -> &GarchParams {
        let idx = self.pieces.partition_point(|(start, _)| *start <= t);
        &self.pieces[idx - 1].1
    }
}

/// Simulates `r_t = sqrt(h_t) eps_t` driven by `innovations`, of which the
/// first `burn_in` are discarded. Pre-sample values of `r^2` and `h` are the
/// unconditional variance of the first regime, which also governs the
/// burn-in.
pub fn simulate_garch_path(
    schedule: &ParamSchedule,
    innovations: &[f64],
    burn_in: usize,
) -> Result<ReturnsSeries> {
    if innovations.len() <= burn_in {
        return Err(Error::TooShort {
            needed: burn_in + 1,
            got: innovations.len(),
        });
    }
    let first = schedule.first();
    let init = first.unconditional_variance();
    let total = innovations.len();
    let mut r2 = vec![0.0; total];
    let mut h = vec![0.0; total];
    let mut r = vec![0.0; total];
    for t in 0..total {
        let params = if t < burn_in {
            first
        } else {
            schedule.at(t - burn_in)
        };
        let mut ht = params.omega;
        for (j, a) in params.alpha.iter().enumerate() {
            ht += a * if t > j { r2[t - j - 1] } else { init };
        }
        for (k, b) in params.beta.iter().enumerate() {
            ht += b * if t > k { h[t - k - 1] } else { init };
        }
        if !ht.is_finite() || ht <= 0.0 {
            return Err(Error::Explosion {
                index: t.saturating_sub(burn_in),
            });
        }
        h[t] = ht;
        r[t] = ht.sqrt() * innovations[t];
        r2[t] = r[t] * r[t];
    }
    Ok(ReturnsSeries {
        values: r.split_off(burn_in),
        condvar: Some(h.split_off(burn_in)),
    })
}

/// Population variance (divisor `T`) about the sample mean.
pub fn sample_variance(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// Fitted conditional variances under `params`, with pre-sample `r^2` and
/// `h` set to the sample variance of the series.
pub fn filter_condvar(values: &[f64], params: &GarchParams) -> Vec<f64> {
    filter_with_init(values, params, sample_variance(values))
}

pub(crate) fn filter_with_init(values: &[f64], params: &GarchParams, init: f64) -> Vec<f64> {
    let n = values.len();
    let mut h = vec![0.0; n];
    for t in 0..n {
        let mut ht = params.omega;
        for (j, a) in params.alpha.iter().enumerate() {
            ht += a * if t > j {
                values[t - j - 1] * values[t - j - 1]
            } else {
                init
            };
        }
        for (k, b) in params.beta.iter().enumerate() {
            ht += b * if t > k { h[t - k - 1] } else { init };
        }
        h[t] = ht;
    }
    h
}

/// Gaussian quasi log-likelihood `-1/2 sum(log h_t + r_t^2 / h_t)`.
pub fn qmle_loglik(values: &[f64], params: &GarchParams) -> f64 {
    loglik_from_condvar(values, &filter_condvar(values, params))
}

fn loglik_from_condvar(values: &[f64], h: &[f64]) -> f64 {
    -0.5 * values
        .iter()
        .zip(h)
        .map(|(r, h)| h.ln() + r * r / h)
        .sum::<f64>()
}

/// Result of [`fit_garch`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchFit {
    pub params: GarchParams,
    pub fitted_condvar: Vec<f64>,
    pub residuals: Vec<f64>,
    pub loglik: f64,
    pub converged: bool,
}

impl GarchFit {
    /// Builds the fit record for given parameters without optimizing.
    pub fn from_params(values: &[f64], params: GarchParams, converged: bool) -> Self {
        let fitted_condvar = filter_condvar(values, &params);
        let residuals = values
            .iter()
            .zip(&fitted_condvar)
            .map(|(r, h)| r / h.sqrt())
            .collect();
        let loglik = loglik_from_condvar(values, &fitted_condvar);
        Self {
            params,
            fitted_condvar,
            residuals,
            loglik,
            converged,
        }
    }
}

/// Multi-start points `(omega / v, alpha, beta)` in units of the sample
/// variance `v`.
const STARTS: [(f64, f64, f64); 3] = [(0.1, 0.1, 0.8), (0.5, 0.1, 0.4), (0.9, 0.05, 0.05)];
const MAX_ITERS: u64 = 3000;
const SD_TOLERANCE: f64 = 1e-12;
/// Local optima whose log-likelihood is within this of the best are treated
/// as equivalent and resolved towards the least persistent one: half the 95%
/// quantile of chi-squared with 2 degrees of freedom, i.e. the persistent fit
/// is kept only when it beats the simpler one by a significant margin. This
/// pins down the near-flat ridge `alpha ~ 0, omega ~ v (1 - beta)` of white
/// noise.
const TIE_LOGLIK_MARGIN: f64 = 2.995_732_273_553_991;
const LOG_CLAMP: f64 = 50.0;

/// Negative mean quasi log-likelihood on the unconstrained scale.
#[derive(Clone)]
struct QmleObjective<'a> {
    values: &'a [f64],
    init: f64,
    p: usize,
    omega_floor: f64,
}

impl QmleObjective<'_> {
    fn params(&self, x: &[f64]) -> GarchParams {
        let omega = self.omega_floor + x[0].clamp(-LOG_CLAMP, LOG_CLAMP).exp();
        let weights: Vec<f64> = x[1..]
            .iter()
            .map(|v| v.clamp(-LOG_CLAMP, LOG_CLAMP).exp())
            .collect();
        let denom = 1.0 + weights.iter().sum::<f64>();
        let coefs: Vec<f64> = weights
            .iter()
            .map(|w| MAX_PERSISTENCE * w / denom)
            .collect();
        GarchParams {
            omega,
            alpha: coefs[..self.p].to_vec(),
            beta: coefs[self.p..].to_vec(),
        }
    }

    fn unconstrained(&self, omega: f64, alpha: &[f64], beta: &[f64]) -> Vec<f64> {
        let coefs: Vec<f64> = alpha.iter().chain(beta).copied().collect();
        let slack = 1.0 - coefs.iter().sum::<f64>() / MAX_PERSISTENCE;
        std::iter::once((omega - self.omega_floor).ln())
            .chain(coefs.iter().map(|c| (c / MAX_PERSISTENCE / slack).ln()))
            .collect()
    }
}

impl CostFunction for QmleObjective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let params = self.params(x);
        let h = filter_with_init(self.values, &params, self.init);
        let ll = loglik_from_condvar(self.values, &h) / self.values.len() as f64;
        Ok(if ll.is_finite() { -ll } else { 1e10 })
    }
}

struct LocalOptimum {
    x: Vec<f64>,
    cost: f64,
    converged: bool,
}

fn nelder_mead(objective: &QmleObjective<'_>, start: Vec<f64>, step: f64) -> LocalOptimum {
    let mut simplex = vec![start.clone()];
    for i in 0..start.len() {
        let mut v = start.clone();
        v[i] += if i == 0 { 0.5 * step } else { step };
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(SD_TOLERANCE)
        .expect("tolerance is positive");
    let fallback_cost = objective.cost(&start).unwrap_or(f64::MAX);
    match Executor::new(objective.clone(), solver)
        .configure(|s| s.max_iters(MAX_ITERS))
        .run()
    {
        Ok(res) => {
            let state = res.state();
            let converged = matches!(
                state.get_termination_status(),
                TerminationStatus::Terminated(TerminationReason::SolverConverged)
            );
            match state.get_best_param() {
                Some(x) => LocalOptimum {
                    x: x.clone(),
                    cost: state.get_best_cost(),
                    converged,
                },
                None => LocalOptimum {
                    x: start,
                    cost: fallback_cost,
                    converged: false,
                },
            }
        }
        Err(_) => LocalOptimum {
            x: start,
            cost: fallback_cost,
            converged: false,
        },
    }
}

/// Gaussian QMLE of a GARCH(p, q) model.
///
/// Runs Nelder-Mead from three fixed starting points on a smooth
/// reparameterization of the constraint box (`omega = floor + exp(a)`,
/// coefficients through a softmax with a slack component), then restarts
/// once from the best point. `converged` is false when the final run hit
/// the iteration cap.
pub fn fit_garch(values: &[f64], p: usize, q: usize) -> Result<GarchFit> {
    if p + q == 0 {
        return Err(Error::InvalidArgument("GARCH order (0, 0)".into()));
    }
    let needed = 20 * (p + q + 1);
    if values.len() < needed {
        return Err(Error::TooShort {
            needed,
            got: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite return".into()));
    }
    let var = sample_variance(values);
    if !(var > 0.0) || !var.is_finite() {
        return Err(Error::Degenerate);
    }
    let scale = var.sqrt();
    let normalized: Vec<f64> = values.iter().map(|v| v / scale).collect();
    let objective = QmleObjective {
        values: &normalized,
        init: sample_variance(&normalized),
        p,
        omega_floor: MIN_OMEGA / var,
    };

    let mut optima: Vec<LocalOptimum> = STARTS
        .iter()
        .map(|&(w, a, b)| {
            let alpha = vec![a / p as f64; p];
            let beta = vec![b / q as f64; q];
            let x0 = objective.unconstrained(w, &alpha, &beta);
            nelder_mead(&objective, x0, 1.0)
        })
        .collect();
    let best_cost = optima
        .iter()
        .map(|o| o.cost)
        .fold(f64::INFINITY, f64::min);
    let margin = TIE_LOGLIK_MARGIN / normalized.len() as f64;
    optima.retain(|o| o.cost <= best_cost + margin);
    let chosen = optima
        .into_iter()
        .min_by(|a, b| {
            let pa = objective.params(&a.x).persistence();
            let pb = objective.params(&b.x).persistence();
            pa.total_cmp(&pb)
        })
        .expect("at least one start survives");
    let polished = nelder_mead(&objective, chosen.x.clone(), 0.1);
    let (x, converged) = if polished.cost <= chosen.cost {
        (polished.x, polished.converged)
    } else {
        (chosen.x, chosen.converged)
    };

    let norm_params = objective.params(&x);
    let params = GarchParams::clipped(norm_params.omega * var, norm_params.alpha, norm_params.beta);
    Ok(GarchFit::from_params(values, params, converged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normals(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn simulate(params: &GarchParams, n: usize, seed: u64) -> ReturnsSeries {
        let eps = normals(n + DEFAULT_BURN_IN, seed);
        simulate_garch_path(&ParamSchedule::constant(params.clone()), &eps, DEFAULT_BURN_IN)
            .unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(GarchParams::garch11(0.1, 0.1, 0.8).is_ok());
        assert!(GarchParams::garch11(1e-7, 0.1, 0.8).is_err());
        assert!(GarchParams::garch11(0.1, -0.1, 0.8).is_err());
        assert!(GarchParams::garch11(0.1, 0.2, 0.8).is_err());
        assert!(GarchParams::garch11(0.1, 0.0, 0.999).is_ok());
    }

    #[test]
    fn clipping_lands_in_box() {
        let p = GarchParams::clipped(-1.0, vec![-0.2, 0.6], vec![0.9]);
        p.validate().unwrap();
        assert_eq!(p.alpha[0], 0.0);
    }

    #[test]
    fn schedule_lookup() {
        let a = GarchParams::garch11(0.4, 0.1, 0.5).unwrap();
        let b = GarchParams::garch11(0.8, 0.1, 0.5).unwrap();
        let s = ParamSchedule::with_break(a.clone(), 10, b.clone()).unwrap();
        assert_eq!(s.at(0), &a);
        assert_eq!(s.at(9), &a);
        assert_eq!(s.at(10), &b);
        assert_eq!(s.at(1000), &b);
        assert!(ParamSchedule::new(vec![(1, a)]).is_err());
    }

    #[test]
    fn constant_variance_when_arch_terms_vanish() {
        let params = GarchParams::garch11(0.4, 0.0, 0.0).unwrap();
        let path = simulate(&params, 200, 1);
        for h in path.condvar.unwrap() {
            assert_eq!(h, 0.4);
        }
    }

    #[test]
    fn long_run_variance_matches_formula() {
        for (params, seed) in [
            (GarchParams::garch11(0.4, 0.1, 0.5).unwrap(), 11),
            (GarchParams::garch11(0.1, 0.1, 0.8).unwrap(), 12),
        ] {
            let path = simulate(&params, 100_000, seed);
            let v = sample_variance(&path.values);
            assert!((v - 1.0).abs() < 0.05, "variance {v}");
        }
    }

    #[test]
    fn explosion_reports_index() {
        let params = GarchParams {
            omega: 1.0,
            alpha: vec![0.0],
            beta: vec![1e308],
        };
        let err = simulate_garch_path(&ParamSchedule { pieces: vec![(0, params)] }, &[1.0; 10], 2);
        assert!(matches!(err, Err(Error::Explosion { .. })));
    }

    #[test]
    fn filter_hand_recursion() {
        let params = GarchParams::garch11(0.5, 0.5, 0.0).unwrap();
        let h = filter_condvar(&[1.0, 2.0], &params);
        assert_abs_diff_eq!(h[0], 0.625, epsilon = 1e-15);
        assert_abs_diff_eq!(h[1], 1.0, epsilon = 1e-15);

        let c = GarchParams::garch11(2.5, 0.0, 0.0).unwrap();
        assert!(filter_condvar(&[1.0, -3.0, 0.2], &c).iter().all(|&h| h == 2.5));
    }

    #[test]
    fn filter_forgets_initialization() {
        let params = GarchParams::garch11(0.1, 0.1, 0.8).unwrap();
        let path = simulate(&params, 2000, 5);
        let truth = path.condvar.unwrap();
        let h = filter_condvar(&path.values, &params);
        let early = (h[0] - truth[0]).abs();
        let late = h[1900..]
            .iter()
            .zip(&truth[1900..])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(late < 1e-12, "late gap {late}, early gap {early}");
    }

    #[test]
    fn loglik_hand_evaluation() {
        let params = GarchParams::garch11(0.5, 0.5, 0.0).unwrap();
        let ll = qmle_loglik(&[1.0, 2.0], &params);
        let expected = -0.5 * ((0.625f64.ln() + 1.0 / 0.625) + (0.0 + 4.0));
        assert_abs_diff_eq!(ll, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(ll, -2.5650, epsilon = 1e-4);
    }

    #[test]
    fn loglik_iid_maximized_at_mean_square() {
        let x = normals(500, 3);
        let ms = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        let at = |w: f64| qmle_loglik(&x, &GarchParams::garch11(w, 0.0, 0.0).unwrap());
        assert!(at(ms) > at(ms * 1.05));
        assert!(at(ms) > at(ms * 0.95));
    }

    #[test]
    fn loglik_true_params_dominate() {
        let truth = GarchParams::garch11(0.4, 0.1, 0.5).unwrap();
        let perturbed = GarchParams::garch11(0.4, 0.1, 0.6).unwrap();
        let wins = (0..50)
            .filter(|&seed| {
                let path = simulate(&truth, 5000, 100 + seed);
                qmle_loglik(&path.values, &truth) >= qmle_loglik(&path.values, &perturbed)
            })
            .count();
        assert!(wins >= 48, "{wins}/50");
    }

    #[test]
    fn fit_recovers_persistent_model() {
        let truth = GarchParams::garch11(0.1, 0.1, 0.8).unwrap();
        let path = simulate(&truth, 20_000, 2024);
        let fit = fit_garch(&path.values, 1, 1).unwrap();
        assert!((fit.params.omega - 0.1).abs() < 0.05, "{:?}", fit.params);
        assert!((fit.params.alpha[0] - 0.1).abs() < 0.05, "{:?}", fit.params);
        assert!((fit.params.beta[0] - 0.8).abs() < 0.05, "{:?}", fit.params);
        for ((r, h), e) in path.values.iter().zip(&fit.fitted_condvar).zip(&fit.residuals) {
            assert!(*h > 0.0);
            assert!((e * h.sqrt() - r).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_white_noise() {
        let x: Vec<f64> = normals(20_000, 77).into_iter().map(|v| 2.0 * v).collect();
        let fit = fit_garch(&x, 1, 1).unwrap();
        assert!((fit.params.omega - 4.0).abs() < 0.4, "{:?}", fit.params);
        assert!(fit.params.persistence() <= 0.1, "{:?}", fit.params);
    }

    #[test]
    fn fit_rejects_degenerate_and_short() {
        assert!(matches!(fit_garch(&[0.0; 100], 1, 1), Err(Error::Degenerate)));
        assert!(matches!(
            fit_garch(&[1.0; 10], 1, 1),
            Err(Error::TooShort { needed: 60, .. })
        ));
    }

    #[test]
    fn fit_is_scale_equivariant_and_deterministic() {
        let truth = GarchParams::garch11(0.4, 0.1, 0.5).unwrap();
        let path = simulate(&truth, 2000, 9);
        let a = fit_garch(&path.values, 1, 1).unwrap();
        let again = fit_garch(&path.values, 1, 1).unwrap();
        assert_eq!(a, again);
        let c = 3.0;
        let scaled: Vec<f64> = path.values.iter().map(|v| c * v).collect();
        let b = fit_garch(&scaled, 1, 1).unwrap();
        assert!((b.params.omega / (c * c) - a.params.omega).abs() < 1e-3);
        assert!((b.params.alpha[0] - a.params.alpha[0]).abs() < 1e-3);
        assert!((b.params.beta[0] - a.params.beta[0]).abs() < 1e-3);
    }

    #[test]
    fn fit_higher_order() {
        let truth = GarchParams::new(0.1, vec![0.1, 0.2], vec![0.1, 0.2]).unwrap();
        let path = simulate(&truth, 5000, 31);
        let fit = fit_garch(&path.values, 2, 2).unwrap();
        assert_eq!(fit.params.p(), 2);
        assert_eq!(fit.params.q(), 2);
        fit.params.validate().unwrap();
    }
}
