use crate::{EvalConfig, Error, Result};

const RESCALE: f64 = 1e200;

/// Natural log of `t_0 + t_1 + ...` for a series of positive terms.
///
/// `ln_first` is `ln t_0`, `ratio(k)` is `t_{k+1} / t_k`, and `tail_ratio(k)`
/// must bound every ratio `t_{j+1} / t_j` with `j >= k`. Summation stops once
/// the geometric tail bound `t_k * rho / (1 - rho)` is below `rel_tol` times
/// the partial sum.
pub(crate) fn ln_sum_positive(
    what: &'static str,
    ln_first: f64,
    ratio: impl Fn(usize) -> f64,
    tail_ratio: impl Fn(usize) -> f64,
    cfg: &EvalConfig,
) -> Result<f64> {
    let tol = cfg.truncation_tol();
    let mut shift = 0.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..cfg.max_terms() {
        term *= ratio(k);
        sum += term;
        if term == 0.0 {
            return Ok(ln_first + shift + sum.ln());
        }
        let rho = tail_ratio(k + 1);
        if rho < 1.0 && term * rho <= tol * sum * (1.0 - rho) {
            return Ok(ln_first + shift + sum.ln());
        }
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            shift += RESCALE.ln();
        }
    }
    Err(Error::Convergence {
        what,
        terms: cfg.max_terms(),
        partial: (ln_first + shift + sum.ln()).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let cfg = EvalConfig::default();
        let ln = ln_sum_positive("geometric", 0.0, |_| 0.5, |_| 0.5, &cfg).unwrap();
        assert!((ln.exp() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_with_rescaling() {
        // sum z^k / k! at z = 600 overflows without rescaling
        let z = 600.0;
        let cfg = EvalConfig::default();
        let ln = ln_sum_positive(
            "exp",
            0.0,
            |k| z / (k + 1) as f64,
            |k| z / (k + 1) as f64,
            &cfg,
        )
        .unwrap();
        assert!((ln - z).abs() < 1e-12 * z);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = EvalConfig::new(1e-12, 100, Default::default()).unwrap();
        let err = ln_sum_positive("harmonic", 0.0, |_| 1.0, |_| 1.0, &cfg).unwrap_err();
        match err {
            Error::Convergence { terms, partial, .. } => {
                assert_eq!(terms, 100);
                assert!((partial - 101.0).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
