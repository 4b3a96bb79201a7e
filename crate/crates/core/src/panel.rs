//! Data containers: the observed returns panel and the generic `d x T`
//! matrix consumed by the segmentation engine.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `T x N` returns, stored series by series, with an optional date axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnsPanel {
    series: Vec<Vec<f64>>,
    dates: Option<Vec<NaiveDate>>,
}

impl ReturnsPanel {
    /// `series[i][t]` is the return of series `i` at time `t`.
    pub fn new(series: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = series.first() else {
            return Err(Error::InvalidArgument("panel needs at least one series".into()));
        };
        let t = first.len();
        if t == 0 {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        for (i, s) in series.iter().enumerate() {
            if s.len() != t {
                return Err(Error::InvalidArgument(format!(
                    "series {i} has length {}, expected {t}",
                    s.len()
                )));
            }
            if let Some(pos) = s.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "non-finite value in series {i} at index {pos}"
                )));
            }
        }
        Ok(Self {
            series,
            dates: None,
        })
    }

    /// Builds a panel from time-ordered rows of length `N`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        let series = (0..n)
            .map(|i| rows.iter().map(|r| r[i]).collect())
            .collect();
        Self::new(series)
    }

    pub fn with_dates(mut self, dates: Vec<NaiveDate>) -> Result<Self> {
        if dates.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "{} dates for {} observations",
                dates.len(),
                self.len()
            )));
        }
        self.dates = Some(dates);
        Ok(self)
    }

    /// Number of series `N`.
    pub fn n_series(&self) -> usize {
        self.series.len()
    }

    /// Number of observations `T`.
    pub fn len(&self) -> usize {
        self.series[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn series(&self, i: usize) -> &[f64] {
        &self.series[i]
    }

    pub fn all_series(&self) -> &[Vec<f64>] {
        &self.series
    }

    pub fn dates(&self) -> Option<&[NaiveDate]> {
        self.dates.as_deref()
    }

    /// Cross-section at time `t`.
    pub fn row(&self, t: usize) -> Vec<f64> {
        self.series.iter().map(|s| s[t]).collect()
    }

    /// Observations `start..end`, dates included.
    pub fn slice(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.len() {
            return Err(Error::InvalidArgument(format!(
                "bad slice {start}..{end} of {} observations",
                self.len()
            )));
        }
        Ok(Self {
            series: self.series.iter().map(|s| s[start..end].to_vec()).collect(),
            dates: self.dates.as_ref().map(|d| d[start..end].to_vec()),
        })
    }

    /// Equally weighted portfolio return at every time point.
    pub fn equal_weight_portfolio(&self) -> Vec<f64> {
        let n = self.n_series() as f64;
        (0..self.len())
            .map(|t| self.series.iter().map(|s| s[t]).sum::<f64>() / n)
            .collect()
    }
}

/// Dense row-major `rows x cols` matrix of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Panel {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} values for a {rows} x {cols} panel",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        let n = rows.len();
        Self::from_vec(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Number of rows (`d`).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns (`T`).
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.data[j * self.cols..(j + 1) * self.cols]
    }

    pub fn row_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.cols..(j + 1) * self.cols]
    }

    pub fn get(&self, j: usize, t: usize) -> f64 {
        self.data[j * self.cols + t]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}
