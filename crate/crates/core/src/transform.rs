//! Stage 1: maps an `N`-dimensional returns panel to the `d = N(N+1)/2`
//! panel of squared empirical residuals and pairwise combinations, whose row
//! means shift whenever a GARCH parameter or a cross-correlation does.
//!
//! For each series the bounded residual filter is
//!
//! ```text
//! hc_t = C_0 + sum_j C_j r_{t-j}^2 + sum_k C_{p+k} h_{t-k} + eps r_t^2
//! U_t  = r_t^2 / hc_t
//! ```
//!
//! with `h` the fitted conditional variance and `C` the fitted coefficients
//! divided by a per-series dampening factor. Pairs enter as
//! `(U_i^{1/2} - s U_{i'}^{1/2})^2` with a signed square root.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::garch::{filter_condvar, sample_variance, GarchFit, GarchParams};
use crate::panel::{Panel, ReturnsPanel};

pub const DEFAULT_EPSILON: f64 = 0.001;

/// Divisor applied to the fitted ARCH/GARCH coefficients,
/// `max(1, min(0.99, s) / max(0.01, 1 - s))` with `s` the fitted persistence.
pub fn dampening_factor(alpha_beta_sum: f64) -> f64 {
    let s = alpha_beta_sum;
    (s.min(0.99) / (1.0 - s).max(0.01)).max(1.0)
}

/// Bounded variance filter `hc_t` for one series.
///
/// `coefficients` holds `C_0, C_1..C_p, C_{p+1}..C_{p+q}`; `fitted_condvar`
/// supplies the lagged `h` terms. Pre-sample `r^2` and `h` are the sample
/// variance of `values`.
pub fn check_h(
    values: &[f64],
    coefficients: &[f64],
    p: usize,
    epsilon: f64,
    fitted_condvar: &[f64],
) -> Vec<f64> {
    debug_assert_eq!(values.len(), fitted_condvar.len());
    let init = sample_variance(values);
    let (arch, garch) = coefficients[1..].split_at(p);
    (0..values.len())
        .map(|t| {
            let mut h = coefficients[0] + epsilon * values[t] * values[t];
            for (j, c) in arch.iter().enumerate() {
                h += c * if t > j {
                    values[t - j - 1] * values[t - j - 1]
                } else {
                    init
                };
            }
            for (k, c) in garch.iter().enumerate() {
                h += c * if t > k { fitted_condvar[t - k - 1] } else { init };
            }
            h
        })
        .collect()
}

/// `U_t = r_t^2 / hc_t`.
pub fn u_single(values: &[f64], check_h: &[f64]) -> Vec<f64> {
    values.iter().zip(check_h).map(|(r, h)| r * r / h).collect()
}

/// `U_t^{1/2} = r_t / sqrt(hc_t)`, keeping the sign of the return.
pub fn u_signed_root(values: &[f64], check_h: &[f64]) -> Vec<f64> {
    values.iter().zip(check_h).map(|(r, h)| r / h.sqrt()).collect()
}

/// Sign `s_{i,i'}` used in a pair row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Outcome of [`choose_sign`]; `degenerate` flags constant or too short
/// input, for which the sign defaults to `Plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignChoice {
    pub sign: Sign,
    pub degenerate: bool,
}

/// Sign of the sample correlation of two signed-root series. Zero or
/// undefined correlation gives `Plus`.
pub fn choose_sign(a: &[f64], b: &[f64]) -> SignChoice {
    let n = a.len().min(b.len());
    if n < 2 {
        return SignChoice {
            sign: Sign::Plus,
            degenerate: true,
        };
    }
    let (a, b) = (&a[..n], &b[..n]);
    let ma = a.iter().sum::<f64>() / n as f64;
    let mb = b.iter().sum::<f64>() / n as f64;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return SignChoice {
            sign: Sign::Plus,
            degenerate: true,
        };
    }
    SignChoice {
        sign: if sab < 0.0 { Sign::Minus } else { Sign::Plus },
        degenerate: false,
    }
}

/// `U_{ii',t} = (U_i^{1/2} - s U_{i'}^{1/2})^2`.
pub fn u_pair(root_i: &[f64], root_k: &[f64], sign: Sign) -> Vec<f64> {
    let s = sign.value();
    root_i
        .iter()
        .zip(root_k)
        .map(|(a, b)| (a - s * b) * (a - s * b))
        .collect()
}

/// Bijection between row index `j` and the series pair `(i, i')`, `i <= i'`,
/// with rows ordered `(0,0), (0,1), .., (0,N-1), (1,1), ..` (zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMap {
    n: usize,
}

impl IndexMap {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn n_series(&self) -> usize {
        self.n
    }

    /// `d = N(N+1)/2`.
    pub fn dim(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    /// Zero-based row of pair `(i, k)`, `i <= k < N`.
    pub fn row(&self, i: usize, k: usize) -> usize {
        assert!(i <= k && k < self.n, "pair ({i}, {k}) out of range");
        i * (2 * self.n - i - 1) / 2 + k
    }

    /// Inverse of [`IndexMap::row`].
    pub fn pair(&self, j: usize) -> (usize, usize) {
        assert!(j < self.dim(), "row {j} out of range");
        let mut i = 0;
        let mut start = 0;
        loop {
            let width = self.n - i;
            if j < start + width {
                return (i, i + (j - start));
            }
            start += width;
            i += 1;
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i..self.n).map(move |k| (i, k)))
    }
}

/// Per-series coefficients and pair signs defining the transformation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformConfig {
    pub epsilon: f64,
    /// Fitted (undampened) parameters, used for the lagged `h` terms.
    pub params: Vec<GarchParams>,
    pub dampening: Vec<f64>,
    /// `C_{i,0..p+q}` per series.
    pub coefficients: Vec<Vec<f64>>,
    /// Signs for pairs `i < i'`, in [`IndexMap`] order with diagonals skipped.
    pub signs: Vec<Sign>,
}

impl TransformConfig {
    /// Coefficients `C_0 = omega`, `C_j = alpha_j / F`, `C_{p+k} = beta_k / F`.
    /// All signs start as `Plus`.
    pub fn from_params(params: Vec<GarchParams>, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        if params.is_empty() {
            return Err(Error::InvalidArgument("no series".into()));
        }
        for p in &params {
            p.validate()?;
        }
        let dampening: Vec<f64> = params
            .iter()
            .map(|p| dampening_factor(p.persistence()))
            .collect();
        let coefficients = params
            .iter()
            .zip(&dampening)
            .map(|(p, f)| {
                std::iter::once(p.omega)
                    .chain(p.alpha.iter().chain(&p.beta).map(|c| c / f))
                    .collect()
            })
            .collect();
        let n = params.len();
        Ok(Self {
            epsilon,
            params,
            dampening,
            coefficients,
            signs: vec![Sign::Plus; n * (n - 1) / 2],
        })
    }

    pub fn n_series(&self) -> usize {
        self.params.len()
    }

    pub fn index_map(&self) -> IndexMap {
        IndexMap::new(self.n_series())
    }

    /// Sign for the pair `(i, k)`, `i < k`.
    pub fn sign(&self, i: usize, k: usize) -> Sign {
        self.signs[off_diagonal_index(self.n_series(), i, k)]
    }

    /// Signed roots `U_i^{1/2}` of every series of `returns`.
    pub fn signed_roots(&self, returns: &ReturnsPanel) -> Result<Vec<Vec<f64>>> {
        if returns.n_series() != self.n_series() {
            return Err(Error::InvalidArgument(format!(
                "config has {} series, panel has {}",
                self.n_series(),
                returns.n_series()
            )));
        }
        Ok((0..self.n_series())
            .into_par_iter()
            .map(|i| {
                let values = returns.series(i);
                let params = &self.params[i];
                let h = filter_condvar(values, params);
                let hc = check_h(values, &self.coefficients[i], params.p(), self.epsilon, &h);
                u_signed_root(values, &hc)
            })
            .collect())
    }

    /// Sets every pair sign from the full-sample correlation of the roots.
    /// Returns the number of degenerate pairs.
    pub fn choose_signs(&mut self, roots: &[Vec<f64>]) -> usize {
        let n = self.n_series();
        let choices: Vec<SignChoice> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |k| (i, k)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(i, k)| choose_sign(&roots[i], &roots[k]))
            .collect();
        self.signs = choices.iter().map(|c| c.sign).collect();
        choices.iter().filter(|c| c.degenerate).count()
    }

    /// Transforms `returns` with the stored coefficients and signs.
    pub fn apply(&self, returns: &ReturnsPanel) -> Result<TransformedPanel> {
        let roots = self.signed_roots(returns)?;
        Ok(self.assemble(&roots))
    }

    fn assemble(&self, roots: &[Vec<f64>]) -> TransformedPanel {
        let map = self.index_map();
        let t = roots[0].len();
        let mut data = Panel::zeros(map.dim(), t);
        data.data_mut()
            .par_chunks_mut(t)
            .enumerate()
            .for_each(|(j, row)| {
                let (i, k) = map.pair(j);
                if i == k {
                    for (x, a) in row.iter_mut().zip(&roots[i]) {
                        *x = a * a;
                    }
                } else {
                    let s = self.sign(i, k).value();
                    for ((x, a), b) in row.iter_mut().zip(&roots[i]).zip(&roots[k]) {
                        *x = (a - s * b) * (a - s * b);
                    }
                }
            });
        TransformedPanel { data, map }
    }
}

fn off_diagonal_index(n: usize, i: usize, k: usize) -> usize {
    assert!(i < k && k < n, "pair ({i}, {k}) is not off-diagonal");
    i * (2 * n - i - 1) / 2 + (k - i - 1)
}

/// The `d x T` transformed panel with its row labelling.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedPanel {
    pub data: Panel,
    pub map: IndexMap,
}

impl TransformedPanel {
    pub fn dim(&self) -> usize {
        self.data.rows()
    }

    pub fn len(&self) -> usize {
        self.data.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// CSV dump: header `j,i,i_prime,1..T`, one row per transformed series,
    /// all labels one-based.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "j,i,i_prime")?;
        for t in 1..=self.len() {
            write!(out, ",{t}")?;
        }
        writeln!(out)?;
        for j in 0..self.dim() {
            let (i, k) = self.map.pair(j);
            write!(out, "{},{},{}", j + 1, i + 1, k + 1)?;
            for v in self.data.row(j) {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Stage 1 end to end: dampened coefficients from the fits, full-sample
/// signs, then all `d` rows.
pub fn build_panel(
    returns: &ReturnsPanel,
    fits: &[GarchFit],
    epsilon: f64,
) -> Result<(TransformedPanel, TransformConfig)> {
    if fits.len() != returns.n_series() {
        return Err(Error::InvalidArgument(format!(
            "{} fits for {} series",
            fits.len(),
            returns.n_series()
        )));
    }
    let mut config =
        TransformConfig::from_params(fits.iter().map(|f| f.params.clone()).collect(), epsilon)?;
    let roots = config.signed_roots(returns)?;
    config.choose_signs(&roots);
    let panel = config.assemble(&roots);
    Ok((panel, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garch::{fit_garch, simulate_garch_path, ParamSchedule, DEFAULT_BURN_IN};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normals(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn dampening_examples() {
        assert_abs_diff_eq!(dampening_factor(0.9), 9.0, epsilon = 1e-12);
        assert_eq!(dampening_factor(0.3), 1.0);
        assert_abs_diff_eq!(dampening_factor(1.05), 99.0, epsilon = 1e-9);
        assert_eq!(dampening_factor(0.0), 1.0);
        for s in [-1.0, 0.0, 0.2, 0.5, 0.7, 0.95, 0.999, 2.0] {
            let f = dampening_factor(s);
            assert!((1.0..=99.0 + 1e-9).contains(&f));
        }
    }

    #[test]
    fn check_h_examples() {
        let hc = check_h(&[3.0, -1.0, 2.0], &[0.7, 0.0, 0.0], 1, 0.0, &[1.0, 1.0, 1.0]);
        assert!(hc.iter().all(|&h| h == 0.7));

        let values = [1.0, 2.0];
        let h = filter_condvar(&values, &GarchParams::garch11(0.5, 0.5, 0.0).unwrap());
        let hc = check_h(&values, &[0.5, 0.5, 0.0], 1, 0.001, &h);
        assert_abs_diff_eq!(hc[0], 0.626, epsilon = 1e-12);
        assert_abs_diff_eq!(hc[1], 1.004, epsilon = 1e-12);

        let u = u_single(&values, &hc);
        assert_abs_diff_eq!(u[0], 1.0 / 0.626, epsilon = 1e-12);
        assert_abs_diff_eq!(u[0], 1.59744, epsilon = 1e-5);
        let root = u_signed_root(&values, &hc);
        assert_abs_diff_eq!(root[0], 1.0 / 0.626f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(root[0], 1.26390, epsilon = 1e-5);
    }

    #[test]
    fn zero_return_gives_zero_u() {
        let u = u_single(&[0.0, 1.0], &[2.0, 2.0]);
        assert_eq!(u[0], 0.0);
        let root = u_signed_root(&[-1.0], &[4.0]);
        assert_eq!(root[0], -0.5);
    }

    #[test]
    fn sign_examples() {
        let v = [1.0, -2.0, 0.5, 3.0];
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert_eq!(choose_sign(&v, &v).sign, Sign::Plus);
        assert_eq!(choose_sign(&v, &neg).sign, Sign::Minus);
        assert_eq!(
            choose_sign(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0]).sign,
            Sign::Minus
        );
        let flat = choose_sign(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]);
        assert_eq!(flat.sign, Sign::Plus);
        assert!(flat.degenerate);
    }

    #[test]
    fn pair_examples() {
        let a = [0.3, -1.2, 2.0];
        assert!(u_pair(&a, &a, Sign::Plus).iter().all(|&x| x == 0.0));
        let u = u_pair(&[1.2], &[-0.5], Sign::Minus);
        assert_abs_diff_eq!(u[0], 0.49, epsilon = 1e-12);
    }

    #[test]
    fn index_map_small_cases() {
        let m = IndexMap::new(3);
        assert_eq!(m.dim(), 6);
        let expected = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
        for (j, &(i, k)) in expected.iter().enumerate() {
            assert_eq!(m.row(i, k), j);
            assert_eq!(m.pair(j), (i, k));
            // one-based formula j = (N - i/2)(i - 1) + i'
            let (i1, k1) = ((i + 1) as f64, (k + 1) as f64);
            assert_eq!((3.0 - i1 / 2.0) * (i1 - 1.0) + k1, (j + 1) as f64);
        }
        assert_eq!(IndexMap::new(1).dim(), 1);
        assert_eq!(IndexMap::new(50).dim(), 1275);
    }

    #[test]
    fn index_map_bijective_up_to_200() {
        for n in 1..=200 {
            let m = IndexMap::new(n);
            let mut seen = vec![false; m.dim()];
            for (i, k) in m.pairs() {
                let j = m.row(i, k);
                assert!(!seen[j]);
                seen[j] = true;
                assert_eq!(m.pair(j), (i, k));
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    fn white_noise_fits(panel: &ReturnsPanel, omega: f64) -> Vec<GarchFit> {
        (0..panel.n_series())
            .map(|i| {
                GarchFit::from_params(
                    panel.series(i),
                    GarchParams::garch11(omega, 0.0, 0.0).unwrap(),
                    true,
                )
            })
            .collect()
    }

    #[test]
    fn closed_form_without_dynamics() {
        let panel = ReturnsPanel::new(vec![normals(50, 1), normals(50, 2)]).unwrap();
        let fits = white_noise_fits(&panel, 0.8);
        let (tp, _) = build_panel(&panel, &fits, 0.01).unwrap();
        for i in 0..2 {
            let row = tp.data.row(tp.map.row(i, i));
            for (u, r) in row.iter().zip(panel.series(i)) {
                assert_abs_diff_eq!(*u, r * r / (0.8 + 0.01 * r * r), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn single_series_panel_is_u() {
        let x = normals(80, 4);
        let panel = ReturnsPanel::new(vec![x.clone()]).unwrap();
        let fit = fit_garch(&x, 1, 1).unwrap();
        let (tp, config) = build_panel(&panel, std::slice::from_ref(&fit), DEFAULT_EPSILON).unwrap();
        assert_eq!(tp.dim(), 1);
        let hc = check_h(
            &x,
            &config.coefficients[0],
            1,
            DEFAULT_EPSILON,
            &fit.fitted_condvar,
        );
        for (a, b) in tp.data.row(0).iter().zip(u_single(&x, &hc)) {
            assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn unit_mean_under_true_parameters() {
        let params = GarchParams::garch11(0.4, 0.1, 0.5).unwrap();
        let eps = normals(50_000 + DEFAULT_BURN_IN, 8);
        let path =
            simulate_garch_path(&ParamSchedule::constant(params.clone()), &eps, DEFAULT_BURN_IN)
                .unwrap();
        let h = filter_condvar(&path.values, &params);
        let coefs = [params.omega, params.alpha[0], params.beta[0]];
        let hc = check_h(&path.values, &coefs, 1, 1e-6, &h);
        let u = u_single(&path.values, &hc);
        let mean = u.iter().sum::<f64>() / u.len() as f64;
        assert!((mean - 1.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn permuting_series_permutes_rows() {
        let a = normals(60, 10);
        let b: Vec<f64> = normals(60, 11).iter().zip(&a).map(|(x, y)| x - 0.5 * y).collect();
        let c = normals(60, 12);
        let p1 = ReturnsPanel::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        let p2 = ReturnsPanel::new(vec![c, a, b]).unwrap();
        let (t1, _) = build_panel(&p1, &white_noise_fits(&p1, 1.0), 0.001).unwrap();
        let (t2, _) = build_panel(&p2, &white_noise_fits(&p2, 1.0), 0.001).unwrap();
        let key = |p: &TransformedPanel| {
            let mut rows: Vec<Vec<u64>> = (0..p.dim())
                .map(|j| p.data.row(j).iter().map(|v| (v * 1e9).round() as u64).collect())
                .collect();
            rows.sort();
            rows
        };
        assert_eq!(key(&t1), key(&t2));
    }

    #[test]
    fn csv_dump_has_labels() {
        let panel = ReturnsPanel::new(vec![normals(5, 1), normals(5, 2)]).unwrap();
        let (tp, _) = build_panel(&panel, &white_noise_fits(&panel, 1.0), 0.001).unwrap();
        let mut buf = Vec::new();
        tp.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "j,i,i_prime,1,2,3,4,5");
        assert!(lines[2].starts_with("2,1,2,"));
    }

    proptest! {
        #[test]
        fn entries_are_bounded(
            values in prop::collection::vec(-50.0f64..50.0, 2..40),
            other in prop::collection::vec(-50.0f64..50.0, 40),
            omega in 0.01f64..5.0,
            alpha in 0.0f64..0.5,
            beta in 0.0f64..0.49,
            eps in 0.0005f64..0.1,
        ) {
            let t = values.len();
            let panel = ReturnsPanel::new(vec![values, other[..t].to_vec()]).unwrap();
            let params = GarchParams::garch11(omega, alpha, beta).unwrap();
            let fits: Vec<GarchFit> = (0..2)
                .map(|i| GarchFit::from_params(panel.series(i), params.clone(), true))
                .collect();
            let (tp, _) = build_panel(&panel, &fits, eps).unwrap();
            for j in 0..tp.dim() {
                let (i, k) = tp.map.pair(j);
                let bound = if i == k { 1.0 / eps } else { 4.0 / eps };
                for &x in tp.data.row(j) {
                    prop_assert!(x >= 0.0 && x <= bound * (1.0 + 1e-12));
                }
            }
        }

        #[test]
        fn root_squares_to_u_and_pair_expands(
            values in prop::collection::vec(-10.0f64..10.0, 1..30),
            other in prop::collection::vec(-10.0f64..10.0, 30),
            minus in any::<bool>(),
        ) {
            let t = values.len();
            let hc: Vec<f64> = values.iter().map(|r| 0.5 + 0.001 * r * r).collect();
            let hk: Vec<f64> = other[..t].iter().map(|r| 1.5 + 0.001 * r * r).collect();
            let root = u_signed_root(&values, &hc);
            let u = u_single(&values, &hc);
            for (a, b) in root.iter().zip(&u) {
                prop_assert!((a * a - b).abs() < 1e-12 * b.max(1.0));
            }
            let root_k = u_signed_root(&other[..t], &hk);
            let u_k = u_single(&other[..t], &hk);
            let sign = if minus { Sign::Minus } else { Sign::Plus };
            let pair = u_pair(&root, &root_k, sign);
            for idx in 0..t {
                let expanded = u[idx] + u_k[idx] - 2.0 * sign.value() * root[idx] * root_k[idx];
                prop_assert!((pair[idx] - expanded).abs() < 1e-12 * pair[idx].max(1.0));
            }
        }
    }
}
