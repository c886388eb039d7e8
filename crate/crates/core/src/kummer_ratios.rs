//! Ratios of Kummer functions with neighbouring parameters: closed-form
//! bounds from the characteristic roots of their Riccati equations, and the
//! sampled monotonicity checks used to test them.

use crate::error::ensure_domain;
use crate::specfun::ln_kummer_m;
use crate::{BoundValue, EvalConfig, Result};

/// `D(a, b, z) = (z - b + sqrt((z - b)^2 + 4az)) / (2z)` for `a, z > 0` and
/// any real `b`; rationalized when `z < b`.
pub fn dee(a: f64, b: f64, z: f64) -> f64 {
    let d = z - b;
    let s = d.hypot(2.0 * (a * z).sqrt());
    if d >= 0.0 {
        (d + s) / (2.0 * z)
    } else {
        2.0 * a / (s - d)
    }
}

/// `lambda_+ = (z + 1 - b + 2a + sqrt((z + 1 - b)^2 + 4za)) / (2a)`, the
/// bound on `M(a+1, b, z) / M(a, b, z)`.
pub fn lambda_plus(a: f64, b: f64, z: f64) -> f64 {
    let d = z + 1.0 - b;
    (d + 2.0 * a + d.hypot(2.0 * (z * a).sqrt())) / (2.0 * a)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RatioDiagnostics {
    /// `h = M(a+1, b+1, z) / M(a, b, z)`
    pub h: f64,
    pub zh: f64,
    /// `G = (a/b) h = M'/M`
    pub g: f64,
    /// `M(a+1, b, z) / M(a, b, z)`
    pub shifted: f64,
    /// `D(a, b, z)`
    pub d_lower: f64,
    /// `D(a, b-1, z)`
    pub d_upper: f64,
    pub lambda_plus: f64,
}

pub fn ratio_h_diag(a: f64, b: f64, z: f64, cfg: &EvalConfig) -> Result<RatioDiagnostics> {
    ensure_domain!(a > 0.0 && b > 0.0 && z > 0.0, "ratio diagnostics need a, b, z > 0");
    let ln_m = ln_kummer_m(a, b, z, cfg)?;
    let h = (ln_kummer_m(a + 1.0, b + 1.0, z, cfg)? - ln_m).exp();
    let shifted = (ln_kummer_m(a + 1.0, b, z, cfg)? - ln_m).exp();
    Ok(RatioDiagnostics {
        h,
        zh: z * h,
        g: a / b * h,
        shifted,
        d_lower: dee(a, b, z),
        d_upper: dee(a, b - 1.0, z),
        lambda_plus: lambda_plus(a, b, z),
    })
}

/// Closed-form bounds on `G = (a/b) M(a+1, b+1, z) / M(a, b, z)`:
/// `D(a,b,z) < G < D(a,b-1,z)` for `a > b`, `G < D(a,b,z)` for `a < b`,
/// and `G = D(a,a,z) = 1` for `a = b`.
pub fn g_bounds(a: f64, b: f64, z: f64) -> Result<Vec<BoundValue>> {
    ensure_domain!(a > 0.0 && b > 0.0 && z > 0.0, "Kummer ratio bounds need a, b, z > 0");
    Ok(if a > b {
        vec![BoundValue::lower("G", dee(a, b, z)), BoundValue::upper("G", dee(a, b - 1.0, z))]
    } else if a < b {
        vec![BoundValue::upper("G", dee(a, b, z))]
    } else {
        vec![BoundValue::upper("G", 1.0), BoundValue::lower("G", 1.0)]
    })
}

/// `(M(a+1, b, z) / M(a, b, z), lambda_+)` for `z >= 0`.
pub fn shifted_ratio_bound(a: f64, b: f64, z: f64, cfg: &EvalConfig) -> Result<(f64, f64)> {
    ensure_domain!(a > 0.0 && b > 0.0 && z >= 0.0, "shifted ratio needs a, b > 0 and z >= 0");
    let ratio = (ln_kummer_m(a + 1.0, b, z, cfg)? - ln_kummer_m(a, b, z, cfg)?).exp();
    Ok((ratio, lambda_plus(a, b, z)))
}

/// Outcome of a sampled pairwise ordering check.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OrderingCheck {
    /// Smallest `(v_j - v_i) / max(|v_i|, |v_j|)` over `i < j`, sign-adjusted
    /// for the expected direction.
    pub min_margin: f64,
    pub worst: (usize, usize),
}

impl OrderingCheck {
    pub fn passes(&self, noise: f64) -> bool {
        self.min_margin >= -noise
    }
}

/// Expected ordering of a sampled sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
}

/// Compares every pair of samples (taken at increasing abscissae). For
/// `Constant`, the margin is minus the largest relative spread.
pub fn pairwise_ordering(values: &[f64], trend: Trend) -> OrderingCheck {
    let mut check = OrderingCheck { min_margin: f64::INFINITY, worst: (0, 0) };
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let (vi, vj) = (values[i], values[j]);
            let scale = vi.abs().max(vj.abs()).max(f64::MIN_POSITIVE);
            let rel = (vj - vi) / scale;
            let margin = match trend {
                Trend::Increasing => rel,
                Trend::Decreasing => -rel,
                Trend::Constant => -rel.abs(),
            };
            if margin < check.min_margin || margin.is_nan() {
                check = OrderingCheck { min_margin: margin, worst: (i, j) };
            }
        }
    }
    check
}
