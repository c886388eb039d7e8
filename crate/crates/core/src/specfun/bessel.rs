use super::gamma::log_gamma;
use super::series::ln_sum_positive;
use crate::error::ensure_domain;
use crate::{EvalConfig, Result};

/// `e^{-t} I_nu(t)`, the exponentially scaled modified Bessel function of the
/// first kind.
///
/// Accepts `nu > -1` (and `nu = -1`, where `I_{-1} = I_1`), `t >= 0`. At
/// `t = 0` the value is 1 for `nu = 0`, 0 for `nu > 0` and infinite for
/// negative orders.
pub fn bessel_i_scaled(nu: f64, t: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(ln_bessel_i_scaled(nu, t, cfg)?.exp())
}

/// Natural log of [`bessel_i_scaled`].
pub fn ln_bessel_i_scaled(nu: f64, t: f64, cfg: &EvalConfig) -> Result<f64> {
    ensure_domain!(nu.is_finite() && nu >= -1.0, "Bessel order must be >= -1, got {nu}");
    ensure_domain!(t.is_finite() && t >= 0.0, "Bessel argument must be finite and >= 0, got {t}");
    let nu = if nu == -1.0 { 1.0 } else { nu };
    if t == 0.0 {
        return Ok(match nu {
            n if n == 0.0 => 0.0,
            n if n > 0.0 => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        });
    }
    // I_nu(t) = sum_k (t/2)^{2k+nu} / (k! Gamma(k+nu+1))
    let ln_first = nu * (0.5 * t).ln() - log_gamma(nu + 1.0) - t;
    let q = 0.25 * t * t;
    let ratio = |k: usize| {
        let k = k as f64;
        q / ((k + 1.0) * (k + 1.0 + nu))
    };
    ln_sum_positive("Bessel I series", ln_first, ratio, ratio, cfg)
}
