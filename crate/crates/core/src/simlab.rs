//! Benchmark scenarios with known change-points.
//!
//! Families:
//!
//! * `M0.x`: stationary GARCH(1, 1) panels, Gaussian innovations with an
//!   AR(1) correlation or i.i.d. unit-variance `t_10`;
//! * `M1.x`: one break in the GARCH parameters of the series in `S1`;
//! * `M2.x`: a parameter break at `[T/4]` plus a break in the innovation
//!   correlation at `[3T/5]`, where the series in `S2` trade places;
//! * `M3.1.x`: `M2.1`/`M2.2` data meant for a GARCH(2, 2) detector;
//!   `M3.2.x`: GARCH(2, 2) data meant for a GARCH(1, 1) detector;
//! * `M4.x`: full-factor model `r_t = W f_t` with GARCH(1, 1) factors, a
//!   factor break at `[T/4]` and a swap of loading rows at `[3T/5]`.
//!
//! Every series gets its own parameter jitter `U(-delta, delta)`, drawn once
//! and kept across the break.
//!
//! [`stress_scenario`] builds the calm / stressed / calm detection sample
//! plus a calm evaluation sample used to exercise the stressed VaR backtest.

use nalgebra::DMatrix;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::garch::{simulate_garch_path, GarchParams, ParamSchedule, DEFAULT_BURN_IN};
use crate::panel::ReturnsPanel;

pub const DEFAULT_RHO: f64 = -0.75;
pub const DEFAULT_JITTER: f64 = 0.01;

/// Scenario family and sub-model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelId {
    /// `M0.1`, `M0.2`.
    M0(u8),
    /// `M1.1` .. `M1.8`.
    M1(u8),
    /// `M2.1` .. `M2.3`.
    M2(u8),
    /// `M3.1.1`, `M3.1.2`.
    M3Over(u8),
    /// `M3.2.1`, `M3.2.2`.
    M3Under(u8),
    /// `M4.1`, `M4.2`.
    M4(u8),
}

impl ModelId {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::UnknownModel(s.to_string());
        let rest = s.trim().strip_prefix(['M', 'm']).ok_or_else(bad)?;
        let parts: Vec<u8> = rest
            .split('.')
            .map(|p| p.parse::<u8>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let id = match parts.as_slice() {
            [0, k @ 1..=2] => ModelId::M0(*k),
            [1, k @ 1..=8] => ModelId::M1(*k),
            [2, k @ 1..=3] => ModelId::M2(*k),
            [3, 1, k @ 1..=2] => ModelId::M3Over(*k),
            [3, 2, k @ 1..=2] => ModelId::M3Under(*k),
            [4, k @ 1..=2] => ModelId::M4(*k),
            _ => return Err(bad()),
        };
        Ok(id)
    }

    pub fn name(&self) -> String {
        match self {
            ModelId::M0(k) => format!("M0.{k}"),
            ModelId::M1(k) => format!("M1.{k}"),
            ModelId::M2(k) => format!("M2.{k}"),
            ModelId::M3Over(k) => format!("M3.1.{k}"),
            ModelId::M3Under(k) => format!("M3.2.{k}"),
            ModelId::M4(k) => format!("M4.{k}"),
        }
    }

    /// GARCH orders the detector is meant to run with.
    pub fn detector_orders(&self) -> (usize, usize) {
        match self {
            ModelId::M3Over(_) => (2, 2),
            _ => (1, 1),
        }
    }

    /// Default break fractions of `T`.
    pub fn default_breaks(&self) -> Vec<f64> {
        match self {
            ModelId::M0(_) => vec![],
            ModelId::M1(_) => vec![0.5],
            _ => vec![0.25, 0.6],
        }
    }

    /// `(omega, alpha.., beta..)` before and after the parameter break.
    fn regimes(&self) -> (GarchParams, GarchParams) {
        let g = |o: f64, a: f64, b: f64| GarchParams {
            omega: o,
            alpha: vec![a],
            beta: vec![b],
        };
        let g22 = |o: f64, a1: f64, a2: f64, b1: f64, b2: f64| GarchParams {
            omega: o,
            alpha: vec![a1, a2],
            beta: vec![b1, b2],
        };
        let m2_before = g(0.1, 0.3, 0.3);
        let m2_after = |k: u8| match k {
            1 => g(0.15, 0.25, 0.65),
            2 => g(0.125, 0.1, 0.6),
            _ => g(0.15, 0.15, 0.25),
        };
        match *self {
            ModelId::M0(1) => (g(0.4, 0.1, 0.5), g(0.4, 0.1, 0.5)),
            ModelId::M0(_) => (g(0.1, 0.1, 0.8), g(0.1, 0.1, 0.8)),
            ModelId::M1(k) => {
                let (a, b) = match k {
                    1 => (g(0.4, 0.1, 0.5), g(0.4, 0.1, 0.6)),
                    2 => (g(0.4, 0.1, 0.5), g(0.4, 0.1, 0.8)),
                    3 => (g(0.1, 0.1, 0.8), g(0.1, 0.1, 0.7)),
                    4 => (g(0.1, 0.1, 0.8), g(0.1, 0.1, 0.4)),
                    5 => (g(0.4, 0.1, 0.5), g(0.5, 0.1, 0.5)),
                    6 => (g(0.4, 0.1, 0.5), g(0.8, 0.1, 0.5)),
                    7 => (g(0.1, 0.1, 0.8), g(0.3, 0.1, 0.8)),
                    _ => (g(0.1, 0.1, 0.8), g(0.5, 0.1, 0.8)),
                };
                (a, b)
            }
            ModelId::M2(k) | ModelId::M4(k) | ModelId::M3Over(k) => (m2_before, m2_after(k)),
            ModelId::M3Under(k) => {
                let before = g22(0.1, 0.1, 0.2, 0.1, 0.2);
                let after = if k == 1 {
                    g22(0.15, 0.15, 0.1, 0.35, 0.3)
                } else {
                    g22(0.125, 0.1, 0.0, 0.3, 0.3)
                };
                (before, after)
            }
        }
    }

    /// Parameters before and after the break, for inspection.
    pub fn parameter_regimes(&self) -> (GarchParams, GarchParams) {
        self.regimes()
    }
}

/// Innovation law of the simulated returns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Innovation {
    /// `N(0, Sigma)` with `Sigma_{ik} = rho^|i-k|`.
    Gaussian { rho: f64 },
    /// i.i.d. `t_10` rescaled to unit variance.
    StudentT10,
}

/// Full description of one simulated panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub model: ModelId,
    pub n: usize,
    pub t: usize,
    /// Fraction of series affected by each break, in `(0, 1]`.
    pub sparsity: f64,
    /// Break locations as fractions of `T`; the location is `[frac T]`.
    pub breaks: Vec<f64>,
    pub innovation: Innovation,
    pub jitter: f64,
    pub burn_in: usize,
    pub seed: u64,
}

impl ScenarioSpec {
    /// Defaults: Gaussian innovations with `rho = -0.75`, dense breaks,
    /// jitter 0.01, burn-in 500.
    pub fn new(model: ModelId, n: usize, t: usize, seed: u64) -> Self {
        Self {
            model,
            n,
            t,
            sparsity: 1.0,
            breaks: model.default_breaks(),
            innovation: Innovation::Gaussian { rho: DEFAULT_RHO },
            jitter: DEFAULT_JITTER,
            burn_in: DEFAULT_BURN_IN,
            seed,
        }
    }

    pub fn with_sparsity(mut self, sparsity: f64) -> Self {
        self.sparsity = sparsity;
        self
    }

    pub fn with_breaks(mut self, breaks: Vec<f64>) -> Self {
        self.breaks = breaks;
        self
    }

    pub fn with_innovation(mut self, innovation: Innovation) -> Self {
        self.innovation = innovation;
        self
    }

    pub fn with_jitter(mut self, jitter: f64) -> Self {
        self.jitter = jitter;
        self
    }

    /// Break locations `[frac T]`.
    pub fn break_locations(&self) -> Vec<usize> {
        self.breaks
            .iter()
            .map(|f| (f * self.t as f64 + 1e-9).floor() as usize)
            .collect()
    }

    /// Number of affected series, `[sparsity N]`.
    pub fn affected(&self) -> usize {
        (self.sparsity * self.n as f64 + 1e-9).floor() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.t < 2 {
            return Err(Error::InvalidArgument(format!(
                "scenario needs N >= 1 and T >= 2, got N = {}, T = {}",
                self.n, self.t
            )));
        }
        if !(self.sparsity > 0.0 && self.sparsity <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "sparsity must lie in (0, 1], got {}",
                self.sparsity
            )));
        }
        if !(self.jitter >= 0.0 && self.jitter.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "jitter must be non-negative, got {}",
                self.jitter
            )));
        }
        let want = self.model.default_breaks().len();
        if self.breaks.len() != want {
            return Err(Error::InvalidArgument(format!(
                "{} expects {want} break fraction(s), got {}",
                self.model.name(),
                self.breaks.len()
            )));
        }
        let locs = self.break_locations();
        if locs.iter().any(|&l| l == 0 || l >= self.t) || locs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "break locations {locs:?} must be interior and increasing"
            )));
        }
        if let Innovation::Gaussian { rho } = self.innovation {
            if !(rho.abs() < 1.0) {
                return Err(Error::InvalidArgument(format!("|rho| must be < 1, got {rho}")));
            }
        }
        Ok(())
    }
}

/// A simulated panel with its ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPanel {
    pub returns: ReturnsPanel,
    /// True change-point locations (first post-break index).
    pub truth: Vec<usize>,
    /// Series whose GARCH parameters (or factor parameters) break.
    pub s1: Vec<usize>,
    /// Series trading places in the correlation (or loading) break.
    pub s2: Vec<usize>,
}

/// `rho^|i-k|` correlation matrix.
pub fn ar1_corr(rho: f64, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, k| rho.powi(i.abs_diff(k) as i32))
}

/// A permutation of `0..n` that moves the entries listed in `subset` among
/// themselves and fixes everything else. Whenever `subset` has two or more
/// entries the permutation is not the identity.
pub fn subset_permutation<R: Rng + ?Sized>(n: usize, subset: &[usize], rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    if subset.len() < 2 {
        return perm;
    }
    let mut shuffled = subset.to_vec();
    loop {
        shuffled.shuffle(rng);
        if shuffled != subset {
            break;
        }
    }
    for (&from, &to) in subset.iter().zip(&shuffled) {
        perm[from] = to;
    }
    perm
}

/// `Sigma` with rows and columns rearranged by `perm`:
/// `out[i][k] = sigma[perm[i]][perm[k]]`.
pub fn permute_symmetric(sigma: &DMatrix<f64>, perm: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(sigma.nrows(), sigma.ncols(), |i, k| sigma[(perm[i], perm[k])])
}

fn choose_subset<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Vec<usize> {
    let all: Vec<usize> = (0..n).collect();
    let mut s: Vec<usize> = all.choose_multiple(rng, size).copied().collect();
    s.sort_unstable();
    s
}

fn jittered(base: &GarchParams, delta: &[f64]) -> GarchParams {
    let p = base.p();
    GarchParams::clipped(
        base.omega + delta[0],
        base.alpha.iter().zip(&delta[1..=p]).map(|(a, d)| a + d).collect(),
        base.beta.iter().zip(&delta[p + 1..]).map(|(b, d)| b + d).collect(),
    )
}

/// `total x N` innovations, row by row in time.
fn draw_innovations<R: Rng + ?Sized>(
    innovation: Innovation,
    n: usize,
    total: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    match innovation {
        Innovation::Gaussian { rho } => {
            let chol = ar1_corr(rho, n).cholesky().ok_or(Error::Singular)?;
            let l = chol.l();
            Ok((0..total)
                .map(|_| {
                    let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
                    (0..n)
                        .map(|i| (0..=i).map(|k| l[(i, k)] * z[k]).sum())
                        .collect()
                })
                .collect())
        }
        Innovation::StudentT10 => {
            let t10 = StudentT::new(10.0).expect("valid degrees of freedom");
            let scale = (8.0f64 / 10.0).sqrt();
            Ok((0..total)
                .map(|_| (0..n).map(|_| scale * t10.sample(rng)).collect())
                .collect())
        }
    }
}

/// Generates the panel described by `spec`.
pub fn generate(spec: &ScenarioSpec) -> Result<LabeledPanel> {
    spec.validate()?;
    match spec.model {
        ModelId::M4(_) => gen_factor(spec),
        _ => gen_correlated(spec),
    }
}

/// Stationary panels (`M0.x`).
pub fn gen_m0(spec: &ScenarioSpec) -> Result<LabeledPanel> {
    expect_family(spec, matches!(spec.model, ModelId::M0(_)), "M0")?;
    generate(spec)
}

/// Single parameter break (`M1.x`).
pub fn gen_m1(spec: &ScenarioSpec) -> Result<LabeledPanel> {
    expect_family(spec, matches!(spec.model, ModelId::M1(_)), "M1")?;
    generate(spec)
}

/// Parameter and correlation breaks (`M2.x`).
pub fn gen_m2(spec: &ScenarioSpec) -> Result<LabeledPanel> {
    expect_family(spec, matches!(spec.model, ModelId::M2(_)), "M2")?;
    generate(spec)
}

/// Order misspecification (`M3.1.x`, `M3.2.x`).
pub fn gen_m3(spec: &ScenarioSpec) -> Result<LabeledPanel> {
    expect_family(
        spec,
        matches!(spec.model, ModelId::M3Over(_) | ModelId::M3Under(_)),
        "M3",
    )?;
    generate(spec)
}

/// Full-factor model (`M4.x`).
pub fn gen_m4(spec: &ScenarioSpec) -> Result<LabeledPanel> {
    expect_family(spec, matches!(spec.model, ModelId::M4(_)), "M4")?;
    generate(spec)
}

fn expect_family(spec: &ScenarioSpec, ok: bool, family: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::UnknownModel(format!(
            "{} is not an {family} model",
            spec.model.name()
        )))
    }
}

struct Draws {
    s1: Vec<usize>,
    s2: Vec<usize>,
    perm: Vec<usize>,
    before: Vec<GarchParams>,
    after: Vec<GarchParams>,
}

fn draw_structure<R: Rng + ?Sized>(spec: &ScenarioSpec, rng: &mut R) -> Draws {
    let n = spec.n;
    let breaks = spec.breaks.len();
    let size = spec.affected();
    let s1 = if breaks >= 1 {
        choose_subset(n, size, rng)
    } else {
        Vec::new()
    };
    let s2 = if breaks >= 2 {
        choose_subset(n, size, rng)
    } else {
        Vec::new()
    };
    let perm = subset_permutation(n, &s2, rng);
    let (base_before, base_after) = spec.model.regimes();
    let k = 1 + base_before.p() + base_before.q();
    let mut before = Vec::with_capacity(n);
    let mut after = Vec::with_capacity(n);
    for i in 0..n {
        let delta: Vec<f64> = (0..k)
            .map(|_| {
                if spec.jitter > 0.0 {
                    rng.random_range(-spec.jitter..spec.jitter)
                } else {
                    0.0
                }
            })
            .collect();
        let b = jittered(&base_before, &delta);
        let a = if s1.binary_search(&i).is_ok() {
            jittered(&base_after, &delta)
        } else {
            b.clone()
        };
        before.push(b);
        after.push(a);
    }
    Draws {
        s1,
        s2,
        perm,
        before,
        after,
    }
}

fn truth_of(spec: &ScenarioSpec, draws: &Draws) -> Vec<usize> {
    let locs = spec.break_locations();
    let mut truth = Vec::new();
    if let Some(&eta1) = locs.first() {
        if !draws.s1.is_empty() && draws.before != draws.after {
            truth.push(eta1);
        }
    }
    if let Some(&eta2) = locs.get(1) {
        if draws.perm.iter().enumerate().any(|(i, &p)| i != p) {
            truth.push(eta2);
        }
    }
    truth
}

fn schedule(before: &GarchParams, after: &GarchParams, eta1: Option<usize>) -> Result<ParamSchedule> {
    match eta1 {
        Some(at) if before != after => ParamSchedule::with_break(before.clone(), at, after.clone()),
        _ => Ok(ParamSchedule::constant(before.clone())),
    }
}

fn gen_correlated(spec: &ScenarioSpec) -> Result<LabeledPanel> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let draws = draw_structure(spec, &mut rng);
    let locs = spec.break_locations();
    let total = spec.burn_in + spec.t;
    let mut eps = draw_innovations(spec.innovation, spec.n, total, &mut rng)?;
    if let Some(&eta2) = locs.get(1) {
        // the correlation break: series i now carries the draw of perm[i]
        for row in &mut eps[spec.burn_in + eta2..] {
            let original = row.clone();
            for (i, v) in row.iter_mut().enumerate() {
                *v = original[draws.perm[i]];
            }
        }
    }
    let series = (0..spec.n)
        .map(|i| {
            let sched = schedule(&draws.before[i], &draws.after[i], locs.first().copied())?;
            let innov: Vec<f64> = eps.iter().map(|row| row[i]).collect();
            Ok(simulate_garch_path(&sched, &innov, spec.burn_in)?.values)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledPanel {
        returns: ReturnsPanel::new(series)?,
        truth: truth_of(spec, &draws),
        s1: draws.s1,
        s2: draws.s2,
    })
}

/// Loading matrix with i.i.d. `N(1, 1)` entries.
pub fn random_loadings<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| {
        1.0 + <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
    })
}

/// `r_t = W f_t`, switching to `w_after` from index `eta2` on.
fn combine_factors(
    w: &DMatrix<f64>,
    w_after: &DMatrix<f64>,
    eta2: usize,
    factors: &[Vec<f64>],
) -> Vec<Vec<f64>> {
    let n = factors.len();
    let t_len = factors.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..t_len)
                .map(|t| {
                    let wm = if t >= eta2 { w_after } else { w };
                    (0..n).map(|k| wm[(i, k)] * factors[k][t]).sum()
                })
                .collect()
        })
        .collect()
}

fn gen_factor(spec: &ScenarioSpec) -> Result<LabeledPanel> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let draws = draw_structure(spec, &mut rng);
    let locs = spec.break_locations();
    let n = spec.n;
    let w = random_loadings(n, &mut rng);
    let w_after = DMatrix::from_fn(n, n, |i, k| w[(draws.perm[i], k)]);
    let total = spec.burn_in + spec.t;
    let factors = (0..n)
        .map(|j| {
            let sched = schedule(&draws.before[j], &draws.after[j], locs.first().copied())?;
            let innov: Vec<f64> = (0..total).map(|_| StandardNormal.sample(&mut rng)).collect();
            Ok(simulate_garch_path(&sched, &innov, spec.burn_in)?.values)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let eta2 = locs.get(1).copied().unwrap_or(usize::MAX);
    let series = combine_factors(&w, &w_after, eta2, &factors);
    Ok(LabeledPanel {
        returns: ReturnsPanel::new(series)?,
        truth: truth_of(spec, &draws),
        s1: draws.s1,
        s2: draws.s2,
    })
}

/// Layout of [`stress_scenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressScenarioSpec {
    pub n: usize,
    /// Calm observations before and after the stressed block.
    pub calm_before: usize,
    pub stressed: usize,
    pub calm_after: usize,
    /// Length of the evaluation sample (initial window plus forecast days).
    pub eval_len: usize,
    /// Volatility multiplier of the stressed block.
    pub vol_scale: f64,
    pub rho_calm: f64,
    pub rho_stress: f64,
    pub seed: u64,
}

impl StressScenarioSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            calm_before: 400,
            stressed: 200,
            calm_after: 400,
            eval_len: 500,
            vol_scale: 3.0,
            rho_calm: DEFAULT_RHO,
            rho_stress: 0.5,
            seed,
        }
    }

    pub fn detection_len(&self) -> usize {
        self.calm_before + self.stressed + self.calm_after
    }
}

/// Detection sample with one engineered high-volatility block and the
/// evaluation sample that follows it.
#[derive(Debug, Clone, PartialEq)]
pub struct StressScenario {
    pub detection: ReturnsPanel,
    pub eval: ReturnsPanel,
    /// The stressed block `start..end` of the detection sample.
    pub stressed: (usize, usize),
}

/// One continuous GARCH(1, 1) panel with parameters of `M0.1`: calm with
/// AR(1) correlation `rho_calm`, then a block with volatility times
/// `vol_scale` and correlation `rho_stress`, then calm again. The tail after
/// the detection sample becomes the evaluation sample.
pub fn stress_scenario(spec: &StressScenarioSpec) -> Result<StressScenario> {
    let d = spec.detection_len();
    if spec.n == 0 || spec.stressed == 0 || spec.calm_before == 0 || spec.eval_len == 0 {
        return Err(Error::InvalidArgument("stress scenario blocks must be non-empty".into()));
    }
    if !(spec.vol_scale > 0.0 && spec.vol_scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "volatility scale must be positive, got {}",
            spec.vol_scale
        )));
    }
    let calm = GarchParams::garch11(0.4, 0.1, 0.5)?;
    let (s0, s1) = (spec.calm_before, spec.calm_before + spec.stressed);
    let sched = ParamSchedule::new(vec![
        (0, calm.clone()),
        (s0, calm.rescaled(spec.vol_scale)),
        (s1, calm.clone()),
    ])?;
    let total = DEFAULT_BURN_IN + d + spec.eval_len;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut eps = draw_innovations(Innovation::Gaussian { rho: spec.rho_calm }, spec.n, total, &mut rng)?;
    let stress_eps = draw_innovations(
        Innovation::Gaussian { rho: spec.rho_stress },
        spec.n,
        spec.stressed,
        &mut rng,
    )?;
    eps.splice(DEFAULT_BURN_IN + s0..DEFAULT_BURN_IN + s1, stress_eps);
    let series = (0..spec.n)
        .map(|i| {
            let innov: Vec<f64> = eps.iter().map(|row| row[i]).collect();
            Ok(simulate_garch_path(&sched, &innov, DEFAULT_BURN_IN)?.values)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let detection = ReturnsPanel::new(series.iter().map(|s| s[..d].to_vec()).collect())?;
    let eval = ReturnsPanel::new(series.iter().map(|s| s[d..].to_vec()).collect())?;
    Ok(StressScenario {
        detection,
        eval,
        stressed: (s0, s1),
    })
}
