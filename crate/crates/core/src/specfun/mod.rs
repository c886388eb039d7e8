//! Reference-precision kernels for the classical special functions the bounds
//! are built from.
//!
//! Bessel, Kummer and incomplete gamma/beta values are summed from ascending
//! power series of positive terms. Summation stops once a geometric bound on
//! the remaining tail drops below `rel_tol` times the partial sum, so the
//! truncation error is certified rather than estimated. Large values are
//! carried as logarithms; the `ln_*` variants expose them directly.

mod bessel;
mod beta;
mod erf;
mod gamma;
mod kummer;
mod series;

pub use bessel::{bessel_i_scaled, ln_bessel_i_scaled};
pub use beta::{central_beta, central_beta_density, central_beta_tails, ln_beta};
pub use erf::erfc_pair;
pub use gamma::{incomplete_gamma, log_gamma, reg_gamma_tails, IncompleteGamma};
pub use kummer::{kummer_m, ln_kummer_m};
