use super::series::ln_sum_positive;
use crate::error::ensure_domain;
use crate::{EvalConfig, Result};

/// Kummer's confluent hypergeometric function `M(alpha, beta, z)` for
/// `alpha, beta > 0`, `z >= 0`.
pub fn kummer_m(alpha: f64, beta: f64, z: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(ln_kummer_m(alpha, beta, z, cfg)?.exp())
}

/// Natural log of [`kummer_m`]; stays finite where `M` itself overflows.
pub fn ln_kummer_m(alpha: f64, beta: f64, z: f64, cfg: &EvalConfig) -> Result<f64> {
    ensure_domain!(
        alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0,
        "Kummer parameters must be positive, got ({alpha}, {beta})"
    );
    ensure_domain!(z.is_finite() && z >= 0.0, "Kummer argument must be finite and >= 0, got {z}");
    if z == 0.0 {
        return Ok(0.0);
    }
    let ratio = |k: usize| {
        let k = k as f64;
        z * (alpha + k) / ((beta + k) * (k + 1.0))
    };
    // (alpha+k)/(beta+k) is monotone towards 1, so its later values are
    // bounded by max(1, current).
    let tail = |k: usize| {
        let k = k as f64;
        z * ((alpha + k) / (beta + k)).max(1.0) / (k + 1.0)
    };
    ln_sum_positive("Kummer M series", 0.0, ratio, tail, cfg)
}
