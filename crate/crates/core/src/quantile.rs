//! Brackets for small quantiles of the central beta distribution.
//!
//! For `y < a/(a+b)`,
//! `(1 + ((a+b)/(a+1)) y) y^a (1-y)^b / (a B) < I_y(a, b) < y^a (1-y)^b / (B (a - (a+b) y))`,
//! so solving each bound for `= beta` brackets the quantile `y_beta`. Both
//! equations are solved by fixed-point iteration from `y = 0`.

use crate::error::ensure_domain;
use crate::specfun::{central_beta_density, central_beta_tails, ln_beta};
use crate::{EvalConfig, Error, Result, ValidityMode};

const MAX_ITERATIONS: usize = 200;
const STEP_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuantileBracket {
    pub y_l: f64,
    pub y_u: f64,
    pub beta: f64,
    pub iterations_l: usize,
    pub iterations_u: usize,
    pub converged: bool,
}

/// `(beta B(a,b) (a - (a+b) y) (1-y)^{-b})^{1/a}`; its fixed point solves
/// the upper CDF bound for `beta`.
pub fn lower_map(a: f64, b: f64, beta: f64, y: f64) -> f64 {
    ((beta.ln() + ln_beta(a, b) + (a - (a + b) * y).ln() - b * (1.0 - y).ln()) / a).exp()
}

/// `(1 + ((a+b)/(a+1)) y)^{-1/a} (a beta B(a,b) (1-y)^{-b})^{1/a}`; its
/// fixed point solves the lower CDF bound for `beta`.
pub fn upper_map(a: f64, b: f64, beta: f64, y: f64) -> f64 {
    ((a.ln() + beta.ln() + ln_beta(a, b) - b * (1.0 - y).ln() - ((a + b) / (a + 1.0) * y).ln_1p()) / a).exp()
}

fn upper_cdf_bound(a: f64, b: f64, y: f64) -> f64 {
    (a * y.ln() + b * (1.0 - y).ln() - ln_beta(a, b)).exp() / (a - (a + b) * y)
}

fn lower_cdf_bound(a: f64, b: f64, y: f64) -> f64 {
    (1.0 + (a + b) / (a + 1.0) * y) * (a * y.ln() + b * (1.0 - y).ln() - ln_beta(a, b)).exp() / a
}

struct FixedPoint {
    y: f64,
    iterations: usize,
    converged: bool,
}

fn iterate(map: impl Fn(f64) -> f64, domain_hi: f64, which: &str) -> Result<FixedPoint> {
    let mut y = 0.0;
    for n in 1..=MAX_ITERATIONS {
        let next = map(y);
        if !(next > 0.0 && next < domain_hi) {
            return Err(Error::BracketUnavailable(format!(
                "the {which} iteration left (0, {domain_hi}) at step {n}; beta is too large for this estimator"
            )));
        }
        let step = (next - y).abs();
        y = next;
        if step <= STEP_TOL * y.max(1e-300) {
            return Ok(FixedPoint { y, iterations: n, converged: true });
        }
    }
    Ok(FixedPoint { y, iterations: MAX_ITERATIONS, converged: false })
}

/// `(y_l, y_u)` with `I_{y_l}(a, b) < beta < I_{y_u}(a, b)`.
///
/// Fails with [`Error::BracketUnavailable`] when the lower iteration leaves
/// `(0, a/(a+b))`. Endpoints are nudged outward until the bounding functions
/// themselves certify the ordering in floating point.
pub fn beta_quantile_bracket(a: f64, b: f64, beta: f64, _cfg: &EvalConfig) -> Result<QuantileBracket> {
    ensure_domain!(a > 0.0 && b > 0.0, "shapes must be positive, got ({a}, {b})");
    ensure_domain!(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1), got {beta}");
    let mode = a / (a + b);
    let lo = iterate(|y| lower_map(a, b, beta, y), mode, "lower")?;
    let hi = iterate(|y| upper_map(a, b, beta, y), 1.0, "upper")?;

    let mut y_l = lo.y;
    let mut y_u = hi.y;
    for _ in 0..64 {
        if upper_cdf_bound(a, b, y_l) <= beta {
            break;
        }
        y_l *= 1.0 - 4.0 * f64::EPSILON;
    }
    for _ in 0..64 {
        if lower_cdf_bound(a, b, y_u) >= beta || y_u >= 1.0 {
            break;
        }
        y_u = (y_u * (1.0 + 4.0 * f64::EPSILON)).min(1.0);
    }
    let converged = lo.converged && hi.converged && y_l <= y_u && y_u < 1.0;
    Ok(QuantileBracket { y_l, y_u, beta, iterations_l: lo.iterations, iterations_u: hi.iterations, converged })
}

/// Inverts `I_y(a, b) = beta` inside the certified bracket.
pub fn beta_quantile(a: f64, b: f64, beta: f64, cfg: &EvalConfig) -> Result<f64> {
    let bracket = beta_quantile_bracket(a, b, beta, cfg)?;
    if !bracket.converged {
        return Err(Error::BracketUnavailable(format!(
            "bracket iterations did not converge within {MAX_ITERATIONS} steps"
        )));
    }
    beta_quantile_in(a, b, beta, (bracket.y_l, bracket.y_u))
}

/// Safeguarded Newton on `I_y(a, b) - beta` over a caller-supplied bracket
/// `lo <= y_beta <= hi`: steps leaving the current bracket fall back to
/// bisection.
pub fn beta_quantile_in(a: f64, b: f64, beta: f64, (mut lo, mut hi): (f64, f64)) -> Result<f64> {
    ensure_domain!(a > 0.0 && b > 0.0, "shapes must be positive, got ({a}, {b})");
    ensure_domain!(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1), got {beta}");
    ensure_domain!(0.0 <= lo && lo <= hi && hi <= 1.0, "invalid bracket [{lo}, {hi}]");
    let tight = EvalConfig::new(1e-15, 100_000, ValidityMode::Proven)?;
    let residual = |y: f64| -> Result<f64> {
        let t = central_beta_tails(a, b, y, &tight)?;
        // work in whichever tail is small so beta near 1 is handled too
        Ok(if beta <= 0.5 { t.lower - beta } else { (1.0 - beta) - t.upper })
    };
    let mut y = 0.5 * (lo + hi);
    let mut best = (f64::INFINITY, y);
    for _ in 0..MAX_ITERATIONS {
        let f = residual(y)?;
        if f.abs() < best.0 {
            best = (f.abs(), y);
        }
        if f.abs() <= 0.25e-12 * beta.min(1.0 - beta) || f == 0.0 {
            return Ok(y);
        }
        if f < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
        let density = if y > 0.0 && y < 1.0 { central_beta_density(a, b, y)? } else { 0.0 };
        let newton = y - f / density;
        y = if density > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Ok(best.1)
}
