//! Noncentral gamma (Marcum) and noncentral beta cumulative distributions,
//! together with the families of sharp bounds obtained from monotone ratios of
//! densities.
//!
//! Every bound is returned as a [`BoundValue`] that carries its numeric value,
//! which side of the target it lies on, and whether the evaluation point is
//! inside the region where the bound is proven. The reference evaluators
//! ([`marcum::marcum_pq`], [`beta::beta_nc_cdf`]) are Poisson mixtures with
//! certified truncation and serve as the oracles the [`verify`] sweeps compare
//! against.
//!
//! Module map:
//!
//! - [`specfun`]: scaled Bessel, Kummer, incomplete gamma/beta, erf, log-gamma kernels
//! - [`ratio_engine`]: crossing point and ratio/difference bounds for a generic density pair
//! - [`marcum`]: Marcum P/Q oracle and the Bessel, error-function and incomplete-gamma bounds
//! - [`beta`]: noncentral beta oracle, recurrence, ratio, series and central-factor bounds
//! - [`kummer_ratios`]: monotonicity and closed-form bounds for Kummer function ratios
//! - [`quantile`]: certified brackets and safeguarded inversion for small central beta quantiles
//! - [`verify`]: parameter-grid sweeps producing [`verify::SweepReport`]s

pub mod beta;
mod bound;
mod config;
mod error;
mod mixture;
pub mod kummer_ratios;
pub mod marcum;
pub mod quantile;
pub mod ratio_engine;
pub mod specfun;
pub mod verify;

pub use bound::{BoundValue, Side};
pub use config::{EvalConfig, ValidityMode};
pub use error::{Error, Result};

/// Lower and upper tail of a cumulative distribution, each computed directly
/// so that both keep full relative accuracy.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct Tails {
    pub lower: f64,
    pub upper: f64,
}
