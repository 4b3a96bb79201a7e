//! Multiple change-point detection in the volatility of high-dimensional
//! return panels, with stressed Value-at-Risk backtesting on the detected
//! regimes.
//!
//! The pipeline has three stages:
//!
//! 1. [`garch`] fits a univariate GARCH(p, q) model to each series by
//!    Gaussian quasi maximum likelihood.
//! 2. [`transform`] maps every series and every pair of series to a
//!    near-stationary sequence whose mean moves when volatility or
//!    co-volatility breaks, giving an `N(N+1)/2 x T` panel.
//! 3. [`dcbs`] runs Double CUSUM Binary Segmentation on that panel, with
//!    thresholds from the parametric bootstrap in [`bootstrap`].
//!
//! [`simlab`] generates the benchmark scenarios and [`risk`] turns detected
//! segments into stress periods for VaR backtesting.

pub mod bootstrap;
pub mod cli;
pub mod dcbs;
pub mod error;
pub mod garch;
pub mod panel;
pub mod pipeline;
pub mod risk;
pub mod simlab;
pub mod transform;

pub use error::{Error, Result};
