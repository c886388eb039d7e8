use crate::{EvalConfig, Error, Result, Tails};

/// `sum_j e^{-lambda} lambda^j / j! * tails(j)` for both tails at once.
///
/// `tails(j).lower` must be nonincreasing in `j` (true for every family here:
/// raising the order of a gamma or the first shape of a beta moves mass to the
/// right), and `upper` is bounded by 1. That makes
/// `sum_{i>j} w_i <= w_{j+1} / (1 - lambda/(j+2))` a certified bound on both
/// truncated tails.
pub(crate) fn poisson_mixture(
    what: &'static str,
    lambda: f64,
    cfg: &EvalConfig,
    mut tails: impl FnMut(usize) -> Result<Tails>,
) -> Result<Tails> {
    if lambda == 0.0 {
        return tails(0);
    }
    let tol = cfg.truncation_tol();
    let ln_lambda = lambda.ln();
    let mut ln_w = -lambda;
    let mut acc = Tails { lower: 0.0, upper: 0.0 };
    for j in 0..cfg.max_terms() {
        let t = tails(j)?;
        let w = ln_w.exp();
        acc.lower += w * t.lower;
        acc.upper += w * t.upper;
        ln_w += ln_lambda - ((j + 1) as f64).ln();
        let rho = lambda / (j + 2) as f64;
        if rho < 1.0 {
            let rest = ln_w.exp() / (1.0 - rho);
            let lower_done = rest * t.lower <= tol * acc.lower;
            let upper_done = rest <= tol * acc.upper || rest < f64::MIN_POSITIVE;
            if lower_done && upper_done {
                return Ok(acc);
            }
        }
    }
    Err(Error::Convergence { what, terms: cfg.max_terms(), partial: acc.lower })
}
