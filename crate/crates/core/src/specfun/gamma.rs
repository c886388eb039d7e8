use super::series::ln_sum_positive;
use crate::error::ensure_domain;
use crate::{EvalConfig, Error, Result, Tails};

/// `ln Gamma(v)` for `v > 0`; NaN outside that domain.
pub fn log_gamma(v: f64) -> f64 {
    if v > 0.0 {
        libm::lgamma(v)
    } else {
        f64::NAN
    }
}

/// Lower and upper incomplete gamma functions and their regularized forms.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct IncompleteGamma {
    /// `gamma_nu(y) = int_0^y t^{nu-1} e^{-t} dt`
    pub lower: f64,
    /// `Gamma_nu(y) = int_y^inf t^{nu-1} e^{-t} dt`
    pub upper: f64,
    pub reg_lower: f64,
    pub reg_upper: f64,
}

pub fn incomplete_gamma(nu: f64, y: f64, cfg: &EvalConfig) -> Result<IncompleteGamma> {
    let t = reg_gamma_tails(nu, y, cfg)?;
    let g = log_gamma(nu).exp();
    Ok(IncompleteGamma { lower: t.lower * g, upper: t.upper * g, reg_lower: t.lower, reg_upper: t.upper })
}

/// Regularized pair `(P(nu, y), Q(nu, y))`.
///
/// The tail that is small is computed directly and the other by complement:
/// the ascending series gives `P` for `y < nu + 1`, a continued fraction
/// gives `Q` beyond.
pub fn reg_gamma_tails(nu: f64, y: f64, cfg: &EvalConfig) -> Result<Tails> {
    ensure_domain!(nu.is_finite() && nu > 0.0, "incomplete gamma order must be positive, got {nu}");
    ensure_domain!(y >= 0.0 && !y.is_nan(), "incomplete gamma argument must be >= 0, got {y}");
    if y == 0.0 {
        return Ok(Tails { lower: 0.0, upper: 1.0 });
    }
    if y.is_infinite() {
        return Ok(Tails { lower: 1.0, upper: 0.0 });
    }
    let ln_prefix = nu * y.ln() - y - log_gamma(nu);
    if y < nu + 1.0 {
        // P = y^nu e^{-y} / Gamma(nu+1) * sum_k y^k / ((nu+1)...(nu+k))
        let ratio = |k: usize| y / (nu + k as f64 + 1.0);
        let p = ln_sum_positive("incomplete gamma series", ln_prefix - nu.ln(), ratio, ratio, cfg)?.exp();
        Ok(Tails { lower: p, upper: 1.0 - p })
    } else {
        let q = (ln_prefix + upper_cf(nu, y, cfg)?.ln()).exp();
        Ok(Tails { lower: 1.0 - q, upper: q })
    }
}

/// Modified Lentz evaluation of the continued fraction
/// `1/(y+1-nu- 1(1-nu)/(y+3-nu- 2(2-nu)/(y+5-nu- ...)))`.
fn upper_cf(nu: f64, y: f64, cfg: &EvalConfig) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let tol = cfg.truncation_tol();
    let mut b = y + 1.0 - nu;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=cfg.max_terms() {
        let i = i as f64;
        let an = -i * (i - nu);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() <= tol {
            return Ok(h);
        }
    }
    Err(Error::Convergence { what: "incomplete gamma continued fraction", terms: cfg.max_terms(), partial: h })
}
