//! Stage 2: Double CUSUM Binary Segmentation over a generic `d x T` panel.
//!
//! Indexing: a segment is the half-open range `start..end` of zero-based
//! columns. A split after `k` observations of the segment has location
//! `start + k`, which is both the number of observations up to and
//! including the last pre-break point and the zero-based index of the first
//! post-break point. Candidate splits are `k = 1..len`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::Panel;

pub const DEFAULT_MIN_SEG: usize = 30;

/// CUSUM series of one row over `start..end`: entry `k - 1` is
/// `sqrt(k (L - k) / L) * (mean(first k) - mean(last L - k))`.
pub fn cusum_row(x: &[f64], start: usize, end: usize) -> Vec<f64> {
    assert!(end <= x.len() && end >= start + 2, "segment too short");
    let seg = &x[start..end];
    let len = seg.len();
    let lf = len as f64;
    // centring keeps the prefix sums small; CUSUMs are shift invariant
    let centre = seg.iter().sum::<f64>() / lf;
    let total: f64 = seg.iter().map(|v| v - centre).sum();
    let mut left = 0.0;
    let mut out = Vec::with_capacity(len - 1);
    for (k, v) in seg[..len - 1].iter().enumerate() {
        left += v - centre;
        let nl = (k + 1) as f64;
        let nr = lf - nl;
        out.push((nl * nr / lf).sqrt() * (left / nl - (total - left) / nr));
    }
    out
}

/// Median absolute deviation about the median.
fn mad(values: &[f64]) -> f64 {
    let median = |v: &mut Vec<f64>| {
        v.sort_unstable_by(f64::total_cmp);
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    };
    let mut v = values.to_vec();
    let m = median(&mut v);
    let mut dev: Vec<f64> = values.iter().map(|x| (x - m).abs()).collect();
    median(&mut dev)
}

/// All `d` CUSUM series over one segment, stored split-major so that the
/// cross-section at each candidate is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct CusumMatrix {
    start: usize,
    end: usize,
    dim: usize,
    values: Vec<f64>,
}

impl CusumMatrix {
    /// CUSUMs of every row of `panel` over `start..end`. With `standardize`
    /// each row is first divided by its MAD over the segment (rows with zero
    /// MAD are left as they are).
    pub fn compute(panel: &Panel, start: usize, end: usize, standardize: bool) -> Result<Self> {
        if end > panel.cols() || end < start + 2 {
            return Err(Error::InvalidArgument(format!(
                "segment {start}..{end} invalid for {} columns",
                panel.cols()
            )));
        }
        if panel.rows() == 0 {
            return Err(Error::InvalidArgument("panel has no rows".into()));
        }
        let rows: Vec<Vec<f64>> = (0..panel.rows())
            .into_par_iter()
            .map(|j| {
                let mut c = cusum_row(panel.row(j), start, end);
                if standardize {
                    let scale = mad(&panel.row(j)[start..end]);
                    if scale > 0.0 {
                        c.iter_mut().for_each(|v| *v /= scale);
                    }
                }
                c
            })
            .collect();
        Ok(Self::from_rows(start, end, &rows))
    }

    /// Wraps precomputed row-wise CUSUMs (`rows[j][k - 1]`).
    pub fn from_rows(start: usize, end: usize, rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let splits = end - start - 1;
        let mut values = vec![0.0; dim * splits];
        for (j, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), splits, "CUSUM row length mismatch");
            for (k, v) in row.iter().enumerate() {
                values[k * dim + j] = *v;
            }
        }
        Self {
            start,
            end,
            dim,
            values,
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of candidate splits, `end - start - 1`.
    pub fn n_splits(&self) -> usize {
        self.end - self.start - 1
    }

    /// Cross-section of CUSUMs for split `k` (1-based within the segment).
    pub fn at_split(&self, k: usize) -> &[f64] {
        &self.values[(k - 1) * self.dim..k * self.dim]
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[(k - 1) * self.dim + j]
    }
}

/// Maximizer of the double CUSUM array over one segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcScanResult {
    pub stat: f64,
    /// Split location, see the module docs.
    pub location: usize,
    /// Number of leading ordered CUSUMs, `1..=d`.
    pub n_hat: usize,
}

/// Best `(D(n), n)` for one cross-section, smallest `n` on ties.
fn best_double_cusum(cross_section: &[f64], sorted: &mut Vec<f64>, tail: &mut Vec<f64>) -> (f64, usize) {
    let d = cross_section.len();
    sorted.clear();
    sorted.extend(cross_section.iter().map(|v| v.abs()));
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    tail.clear();
    tail.resize(d + 1, 0.0);
    for j in (0..d).rev() {
        tail[j] = tail[j + 1] + sorted[j];
    }
    let two_d = (2 * d) as f64;
    let mut head = 0.0;
    let mut best = (f64::NEG_INFINITY, 0);
    for n in 1..=d {
        head += sorted[n - 1];
        let nf = n as f64;
        let rest = two_d - nf;
        let value = (nf * rest / two_d).sqrt() * (head / nf - tail[n] / rest);
        if value > best.0 {
            best = (value, n);
        }
    }
    best
}

/// `max_c max_n D(c, n)` with
/// `D(n) = sqrt(n (2d - n) / 2d) * (mean of n largest |X| - sum of the rest / (2d - n))`.
/// Ties go to the smallest split, then the smallest `n`.
pub fn dc_scan(cusums: &CusumMatrix) -> DcScanResult {
    let per_split: Vec<(f64, usize)> = (1..=cusums.n_splits())
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(sorted, tail), k| best_double_cusum(cusums.at_split(k), sorted, tail),
        )
        .collect();
    let mut best = DcScanResult {
        stat: f64::NEG_INFINITY,
        location: cusums.start + 1,
        n_hat: 1,
    };
    for (k, (stat, n)) in per_split.into_iter().enumerate() {
        if stat > best.stat {
            best = DcScanResult {
                stat,
                location: cusums.start + k + 1,
                n_hat: n,
            };
        }
    }
    best
}

/// Settings of the binary segmentation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcbsConfig {
    /// Segments with fewer observations are not tested.
    pub min_seg: usize,
    /// Divide rows by their MAD over each examined segment.
    pub standardize: bool,
}

impl Default for DcbsConfig {
    fn default() -> Self {
        Self {
            min_seg: DEFAULT_MIN_SEG,
            standardize: false,
        }
    }
}

/// Test statistic of `panel` over `start..end`.
pub fn segment_statistic(
    panel: &Panel,
    start: usize,
    end: usize,
    standardize: bool,
) -> Result<DcScanResult> {
    Ok(dc_scan(&CusumMatrix::compute(panel, start, end, standardize)?))
}

/// Supplies the detection threshold for an examined segment.
pub trait ThresholdProvider: Sync {
    fn threshold(&self, start: usize, end: usize) -> Result<f64>;
}

/// A fixed threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantThreshold(pub f64);

impl ThresholdProvider for ConstantThreshold {
    fn threshold(&self, _start: usize, _end: usize) -> Result<f64> {
        Ok(self.0)
    }
}

impl<F> ThresholdProvider for F
where
    F: Fn(usize, usize) -> Result<f64> + Sync,
{
    fn threshold(&self, start: usize, end: usize) -> Result<f64> {
        self(start, end)
    }
}

/// One detected change-point with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangePoint {
    /// See the module docs for the indexing convention.
    pub location: usize,
    pub stat: f64,
    pub threshold: f64,
    pub n_hat: usize,
    /// Recursion level, 1 for the full sample.
    pub level: usize,
    /// Examined segment `start..end`.
    pub start: usize,
    pub end: usize,
}

/// Detected change-points, sorted by location.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChangePointSet {
    pub points: Vec<ChangePoint>,
}

impl ChangePointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn locations(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.location).collect()
    }

    /// Stationary segments `start..end` of a sample of length `t`.
    pub fn segments(&self, t: usize) -> Vec<(usize, usize)> {
        segments_from_locations(&self.locations(), t)
    }
}

/// Splits `0..t` at the given sorted locations.
pub fn segments_from_locations(locations: &[usize], t: usize) -> Vec<(usize, usize)> {
    let mut bounds = vec![0];
    bounds.extend(locations.iter().copied());
    bounds.push(t);
    bounds.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Binary segmentation: every segment at the current level is tested; when
/// its statistic exceeds the segment's threshold (and is positive) the
/// maximizing split is recorded and both halves move to the next level.
pub fn dcbs_run(
    panel: &Panel,
    thresholds: &dyn ThresholdProvider,
    config: &DcbsConfig,
) -> Result<ChangePointSet> {
    let t = panel.cols();
    let min_seg = config.min_seg.max(2);
    if t < min_seg {
        return Err(Error::TooShort {
            needed: min_seg,
            got: t,
        });
    }
    let mut points = Vec::new();
    let mut level = 1;
    let mut current = vec![(0, t)];
    while !current.is_empty() {
        let mut next = Vec::new();
        for (start, end) in current {
            if end - start < min_seg {
                continue;
            }
            let scan = segment_statistic(panel, start, end, config.standardize)?;
            let threshold = thresholds.threshold(start, end)?;
            if scan.stat > threshold && scan.stat > 0.0 {
                points.push(ChangePoint {
                    location: scan.location,
                    stat: scan.stat,
                    threshold,
                    n_hat: scan.n_hat,
                    level,
                    start,
                    end,
                });
                next.push((start, scan.location));
                next.push((scan.location, end));
            }
        }
        current = next;
        level += 1;
    }
    points.sort_by_key(|p| p.location);
    Ok(ChangePointSet { points })
}
