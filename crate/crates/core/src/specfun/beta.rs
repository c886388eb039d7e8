use super::gamma::log_gamma;
use super::series::ln_sum_positive;
use crate::error::ensure_domain;
use crate::{EvalConfig, Result, Tails};

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    log_gamma(a) + log_gamma(b) - log_gamma(a + b)
}

/// Regularized incomplete beta function `I_y(a, b)`.
pub fn central_beta(a: f64, b: f64, y: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(central_beta_tails(a, b, y, cfg)?.lower)
}

/// `(I_y(a, b), 1 - I_y(a, b))`, each computed directly when it is the
/// smaller tail so that neither loses relative accuracy.
pub fn central_beta_tails(a: f64, b: f64, y: f64, cfg: &EvalConfig) -> Result<Tails> {
    check(a, b, y)?;
    if y == 0.0 {
        return Ok(Tails { lower: 0.0, upper: 1.0 });
    }
    if y == 1.0 {
        return Ok(Tails { lower: 1.0, upper: 0.0 });
    }
    let ymc = 1.0 - y;
    if y <= (a + 1.0) / (a + b + 2.0) {
        let lower = lower_series(a, b, y, ymc, cfg)?;
        Ok(Tails { lower, upper: 1.0 - lower })
    } else {
        let upper = lower_series(b, a, ymc, y, cfg)?;
        Ok(Tails { lower: 1.0 - upper, upper })
    }
}

/// `y^{a-1} (1-y)^{b-1} / B(a, b)` on `(0, 1)`.
pub fn central_beta_density(a: f64, b: f64, y: f64) -> Result<f64> {
    check(a, b, y)?;
    ensure_domain!(y > 0.0 && y < 1.0, "beta density needs y in (0,1), got {y}");
    Ok(((a - 1.0) * y.ln() + (b - 1.0) * (1.0 - y).ln() - ln_beta(a, b)).exp())
}

fn check(a: f64, b: f64, y: f64) -> Result<()> {
    ensure_domain!(
        a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0,
        "beta shapes must be positive, got ({a}, {b})"
    );
    ensure_domain!((0.0..=1.0).contains(&y), "beta argument must lie in [0,1], got {y}");
    Ok(())
}

// I_y(a,b) = y^a (1-y)^b / (a B(a,b)) * sum_n (a+b)_n / (a+1)_n y^n
fn lower_series(a: f64, b: f64, y: f64, ymc: f64, cfg: &EvalConfig) -> Result<f64> {
    let ln_first = a * y.ln() + b * ymc.ln() - a.ln() - ln_beta(a, b);
    let ratio = |n: usize| {
        let n = n as f64;
        y * (a + b + n) / (a + 1.0 + n)
    };
    let tail = |n: usize| {
        let n = n as f64;
        y * ((a + b + n) / (a + 1.0 + n)).max(1.0)
    };
    Ok(ln_sum_positive("incomplete beta series", ln_first, ratio, tail, cfg)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn uniform_and_symmetric() {
        assert!((central_beta(1.0, 1.0, 0.3, &cfg()).unwrap() - 0.3).abs() < 1e-15);
        for &c in &[0.4, 2.0, 17.0] {
            assert!((central_beta(c, c, 0.5, &cfg()).unwrap() - 0.5).abs() < 1e-14);
        }
        assert_eq!(central_beta(2.0, 3.0, 0.0, &cfg()).unwrap(), 0.0);
        assert_eq!(central_beta(2.0, 3.0, 1.0, &cfg()).unwrap(), 1.0);
    }

    #[test]
    fn polynomial_case() {
        // I_y(2, 2) = 3y^2 - 2y^3
        for &y in &[0.01, 0.25, 0.6, 0.99] {
            let expected = 3.0 * y * y - 2.0 * y * y * y;
            assert!((central_beta(2.0, 2.0, y, &cfg()).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn density_uniform() {
        assert!((central_beta_density(1.0, 1.0, 0.37).unwrap() - 1.0).abs() < 1e-15);
        assert!(central_beta_density(1.0, 1.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn reflection(a in 0.05f64..100.0, b in 0.05f64..100.0, y in 0.0f64..=1.0) {
            let lhs = central_beta(a, b, y, &cfg()).unwrap();
            let rhs = 1.0 - central_beta(b, a, 1.0 - y, &cfg()).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-11, "{lhs} vs {rhs}");
        }

        #[test]
        fn monotone(a in 0.1f64..30.0, b in 0.1f64..30.0, y in 0.0f64..0.99, dy in 1e-7f64..0.01) {
            let lo = central_beta(a, b, y, &cfg()).unwrap();
            let hi = central_beta(a, b, y + dy, &cfg()).unwrap();
            prop_assert!(hi >= lo - 1e-15);
        }
    }
}
