//! Marcum functions `P_mu(x, y)`, `Q_mu(x, y)` (the noncentral gamma
//! distribution) and the bounds derived from monotone density ratios.
//!
//! The density is `g_mu(x, y) = (y/x)^{(mu-1)/2} e^{-x-y} I_{mu-1}(2 sqrt(xy))`.
//! Everything is evaluated through the scaled Bessel kernel, so the
//! exponentials cancel before they can overflow.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

use crate::error::ensure_domain;
use crate::mixture::poisson_mixture;
use crate::ratio_engine::{self, CrossingCache, DensityPair, Direction};
use crate::specfun::{erfc_pair, ln_bessel_i_scaled, log_gamma, reg_gamma_tails};
use crate::{BoundValue, EvalConfig, Result, Tails};

/// Order, noncentrality and argument of a Marcum function.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GammaParams {
    pub mu: f64,
    pub x: f64,
    pub y: f64,
}

impl GammaParams {
    pub const MAX_MU: f64 = 100.0;
    pub const MAX_X: f64 = 200.0;
    /// Large enough to reach the far tail at the largest noncentralities.
    pub const MAX_Y: f64 = 1000.0;

    pub fn new(mu: f64, x: f64, y: f64) -> Result<Self> {
        ensure_domain!(mu > 0.0 && mu <= Self::MAX_MU, "order mu must lie in (0, {}], got {mu}", Self::MAX_MU);
        ensure_domain!(x >= 0.0 && x <= Self::MAX_X, "noncentrality x must lie in [0, {}], got {x}", Self::MAX_X);
        ensure_domain!(y >= 0.0 && y <= Self::MAX_Y, "argument y must lie in [0, {}], got {y}", Self::MAX_Y);
        Ok(GammaParams { mu, x, y })
    }

    /// Parameters in the `(a, b) = (sqrt(2x), sqrt(2y))` convention of
    /// `Q~_mu(a, b)`.
    pub fn from_ab(mu: f64, a: f64, b: f64) -> Result<Self> {
        ensure_domain!(a >= 0.0 && b >= 0.0, "a and b must be nonnegative, got ({a}, {b})");
        Self::new(mu, 0.5 * a * a, 0.5 * b * b)
    }

    pub fn with_mu(self, mu: f64) -> Result<Self> {
        Self::new(mu, self.x, self.y)
    }

    pub fn with_x(self, x: f64) -> Result<Self> {
        Self::new(self.mu, x, self.y)
    }

    pub fn with_y(self, y: f64) -> Result<Self> {
        Self::new(self.mu, self.x, y)
    }

    pub fn aa(&self) -> f64 {
        (2.0 * self.x).sqrt()
    }

    pub fn bb(&self) -> f64 {
        (2.0 * self.y).sqrt()
    }

    /// Bessel argument `2 sqrt(xy)`.
    pub fn t(&self) -> f64 {
        2.0 * (self.x * self.y).sqrt()
    }
}

/// `(P_mu(x, y), Q_mu(x, y))` as Poisson mixtures of regularized incomplete
/// gamma functions, each tail summed separately.
pub fn marcum_pq(p: &GammaParams, cfg: &EvalConfig) -> Result<Tails> {
    if p.y == 0.0 {
        return Ok(Tails { lower: 0.0, upper: 1.0 });
    }
    poisson_mixture("Marcum Poisson mixture", p.x, cfg, |j| reg_gamma_tails(p.mu + j as f64, p.y, cfg))
}

/// Density `g_mu(x, y)`; at `x = 0` the limit `y^{mu-1} e^{-y} / Gamma(mu)`.
pub fn marcum_density(p: &GammaParams, cfg: &EvalConfig) -> Result<f64> {
    Ok(ln_density(p.mu, p.x, p.y, cfg)?.exp())
}

pub(crate) fn ln_density(mu: f64, x: f64, y: f64, cfg: &EvalConfig) -> Result<f64> {
    if y == 0.0 {
        return Ok(match mu {
            m if m > 1.0 => f64::NEG_INFINITY,
            m if m == 1.0 => -x,
            _ => f64::INFINITY,
        });
    }
    if x == 0.0 {
        return Ok((mu - 1.0) * y.ln() - y - log_gamma(mu));
    }
    let t = 2.0 * (x * y).sqrt();
    let d = x.sqrt() - y.sqrt();
    Ok(0.5 * (mu - 1.0) * (y / x).ln() - d * d + ln_bessel_i_scaled(mu - 1.0, t, cfg)?)
}

/// `c_mu(x, y) = sqrt(y/x) I_mu(2 sqrt(xy)) / I_{mu-1}(2 sqrt(xy))`, the ratio
/// `g_{mu+1} / g_mu`; `y/mu` at `x = 0`.
pub fn c_ratio(mu: f64, x: f64, y: f64, cfg: &EvalConfig) -> Result<f64> {
    if x == 0.0 {
        return Ok(y / mu);
    }
    let t = 2.0 * (x * y).sqrt();
    Ok((0.5 * (y / x).ln() + ln_bessel_i_scaled(mu, t, cfg)? - ln_bessel_i_scaled(mu - 1.0, t, cfg)?).exp())
}

/// `c_mu(x, y)` read as an upper bound on `P_{mu+1}/P_mu` and a lower bound
/// on `Q_{mu+1}/Q_mu`.
pub fn ratio_bound_c(p: &GammaParams, cfg: &EvalConfig) -> Result<(BoundValue, BoundValue)> {
    ensure_domain!(p.x > 0.0 && p.y > 0.0, "the c-ratio bound needs x, y > 0");
    let c = c_ratio(p.mu, p.x, p.y, cfg)?;
    Ok((BoundValue::upper("P[mu+1]/P[mu]", c), BoundValue::lower("Q[mu+1]/Q[mu]", c)))
}

/// The pair `(g_mu, g_{mu+1})` in `y` at fixed `x`, with ratio `c_mu`.
pub fn recurrence_pair(mu: f64, x: f64, cfg: &EvalConfig) -> DensityPair {
    let cfg = *cfg;
    DensityPair::new(
        move |y| Ok(ln_density(mu, x, y, &cfg)?.exp()),
        move |y| Ok(ln_density(mu + 1.0, x, y, &cfg)?.exp()),
        Direction::Increasing,
        (0.0, f64::INFINITY),
    )
    .with_ratio(move |y| c_ratio(mu, x, y, &cfg))
}

/// The `y0` where `c_mu(x, y0) = 1`.
pub fn recurrence_crossing(mu: f64, x: f64, cfg: &EvalConfig) -> Result<f64> {
    ratio_engine::crossing_point(&recurrence_pair(mu, x, cfg), cfg)
}

/// Bounds from `P_mu - P_{mu+1} = g_{mu+1}` and the ratio `c_mu`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RecurrenceBounds {
    /// `P_mu < g_{mu+1} / (1 - c)`, valid below `y0`
    pub p_upper: BoundValue,
    /// `P_{mu+1} < c g_{mu+1} / (1 - c)`, valid below `y0`
    pub pnext_upper: BoundValue,
    /// `Q_mu < g_{mu+1} / (c - 1)`, valid above `y0`
    pub q_upper: BoundValue,
    /// `Q_{mu+1} < c g_{mu+1} / (c - 1)`, valid above `y0`
    pub qnext_upper: BoundValue,
    pub crossing: f64,
}

pub fn recurrence_difference_bounds(p: &GammaParams, cfg: &EvalConfig) -> Result<RecurrenceBounds> {
    recurrence_difference_bounds_cached(p, cfg, None)
}

/// As [`recurrence_difference_bounds`], memoizing `y0` per `(mu, x)`.
pub fn recurrence_difference_bounds_cached(
    p: &GammaParams,
    cfg: &EvalConfig,
    cache: Option<&CrossingCache>,
) -> Result<RecurrenceBounds> {
    ensure_domain!(p.x > 0.0 && p.y > 0.0, "recurrence bounds need x, y > 0");
    let y0 = match cache {
        Some(c) => c.get_or_compute([p.mu, p.x, 0.0], || recurrence_crossing(p.mu, p.x, cfg))?,
        None => recurrence_crossing(p.mu, p.x, cfg)?,
    };
    let g_next = ln_density(p.mu + 1.0, p.x, p.y, cfg)?.exp();
    let c = c_ratio(p.mu, p.x, p.y, cfg)?;
    let d = ratio_engine::difference_bounds_from_ratio(c, g_next, p.y, y0)?;
    Ok(RecurrenceBounds {
        p_upper: d.g1_upper.with_target("P[mu]"),
        pnext_upper: d.g2_upper.with_target("P[mu+1]"),
        q_upper: d.g1bar_upper.with_target("Q[mu]"),
        qnext_upper: d.g2bar_upper.with_target("Q[mu+1]"),
        crossing: y0,
    })
}

/// `P_nu < F P_mu` and `Q_nu > F Q_mu` for `nu >= mu`, with
/// `F = (y/x)^{(nu-mu)/2} I_{nu-1}(2 sqrt(xy)) / I_{mu-1}(2 sqrt(xy))`.
///
/// Proven for `mu >= 1`. In conjectured mode `mu >= 1/2` is accepted and the
/// results below `mu = 1` are flagged as not valid.
pub fn order_shift_bound(nu: f64, mu: f64, base: &GammaParams, cfg: &EvalConfig) -> Result<(BoundValue, BoundValue)> {
    ensure_domain!(nu >= mu, "order shift needs nu >= mu, got nu={nu}, mu={mu}");
    let min_mu = if cfg.is_conjectured() { 0.5 } else { 1.0 };
    ensure_domain!(
        mu >= min_mu,
        "order shift with mu={mu} needs mu >= {min_mu} in {} mode",
        cfg.validity_mode()
    );
    ensure_domain!(base.x > 0.0 && base.y > 0.0, "order shift needs x, y > 0");
    let base = base.with_mu(mu)?;
    let t = base.t();
    let ln_f = 0.5 * (nu - mu) * (base.y / base.x).ln() + ln_bessel_i_scaled(nu - 1.0, t, cfg)?
        - ln_bessel_i_scaled(mu - 1.0, t, cfg)?;
    let f = ln_f.exp();
    let pq = marcum_pq(&base, cfg)?;
    let (valid, note) = if mu >= 1.0 { (true, "") } else { (false, "conjectured: base order below 1") };
    Ok((
        BoundValue::upper("P[nu]", f * pq.lower).with_validity(valid, note),
        BoundValue::lower("Q[nu]", f * pq.upper).with_validity(valid, note),
    ))
}

/// Error-function bounds on `Q~_nu(a, b) = Q_nu(a^2/2, b^2/2)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ErfBoundSet {
    pub b1: BoundValue,
    pub b2: BoundValue,
    pub l1: BoundValue,
    pub l2: BoundValue,
    /// `G_nu(a, b) = (a/2) sqrt(pi/2) (b/a)^nu`
    pub g_nu: f64,
}

pub fn erf_bounds(nu: f64, p: &GammaParams, cfg: &EvalConfig) -> Result<ErfBoundSet> {
    ensure_domain!(nu >= 0.5, "error-function bounds need nu >= 1/2, got {nu}");
    ensure_domain!(p.x > 0.0 && p.y > 0.0, "error-function bounds need x, y > 0");
    let (a, b) = (p.aa(), p.bb());
    let t = a * b;
    let e2t = (-2.0 * t).exp();
    let ln_g = (0.5 * a).ln() + 0.5 * (0.5 * PI).ln() + nu * (b / a).ln();
    // G I_{nu-1}(ab) / cosh(ab), with e^{ab} cancelled against cosh
    let ln_k = ln_g + ln_bessel_i_scaled(nu - 1.0, t, cfg)? + (2.0 / (1.0 + e2t)).ln();
    let k = ln_k.exp();
    let (erf_m, erfc_m) = erfc_pair((b - a) * FRAC_1_SQRT_2);
    let (erf_p, erfc_p) = erfc_pair((b + a) * FRAC_1_SQRT_2);
    let b1 = k * (erfc_m + erfc_p);
    let x_term = k * (erf_m + erf_p);
    let b2 = 1.0 - x_term;
    let coth_factor = a / b * (1.0 + e2t) / (1.0 - e2t);
    // (b/a)^{nu-1} e^{-(a^2+b^2)/2} I_{nu-1}(ab)
    let tail = ((nu - 1.0) * (b / a).ln() - 0.5 * (a - b) * (a - b) + ln_bessel_i_scaled(nu - 1.0, t, cfg)?).exp();
    let l1 = coth_factor * b1 + tail;
    let l2 = 1.0 - coth_factor * x_term + tail;

    let base_note = "rests on the order-1/2 base case";
    let l_valid = nu > 1.5;
    let l_note = if l_valid { "" } else { "requires nu > 3/2" };
    Ok(ErfBoundSet {
        b1: BoundValue::lower("Q", b1).with_validity(true, base_note),
        b2: BoundValue::lower("Q", b2).with_validity(true, base_note).with_magnitude(1.0_f64.max(x_term)),
        l1: BoundValue::lower("Q", l1).with_validity(l_valid, l_note),
        l2: BoundValue::lower("Q", l2)
            .with_validity(l_valid, l_note)
            .with_magnitude(1.0_f64.max(coth_factor * x_term)),
        g_nu: ln_g.exp(),
    })
}

/// `1 - LHS/RHS` for
/// `(erfc((b-a)/sqrt2) + erfc((b+a)/sqrt2)) I_nu(ab) < sqrt(2/pi) a^nu b^{-nu-1} (e^{ab} + e^{-ab})`;
/// positive exactly when the inequality holds.
///
/// With `K = 2 I_nu(ab) b^{nu+1} / (sqrt(2/pi) a^nu (e^{ab} + e^{-ab}))` the
/// ratio is `K (1 - d/2)`, `d = erfc((a-b)/sqrt2) - erfc((a+b)/sqrt2)`, so the
/// margin is `(1 - K) + K d/2` without cancellation. `K = 1` exactly at
/// `nu = -1/2`, where the margin is just `d/2`.
pub fn erfc_bessel_inequality_margin(nu: f64, a: f64, b: f64, cfg: &EvalConfig) -> Result<f64> {
    ensure_domain!(nu >= -0.5, "order must be >= -1/2, got {nu}");
    ensure_domain!(a > 0.0 && b > 0.0, "a and b must be positive, got ({a}, {b})");
    let t = a * b;
    let d = erfc_pair((a - b) * FRAC_1_SQRT_2).1 - erfc_pair((a + b) * FRAC_1_SQRT_2).1;
    let ln_k = if nu == -0.5 {
        0.0
    } else {
        LN_2 + ln_bessel_i_scaled(nu, t, cfg)? + (nu + 1.0) * b.ln()
            - 0.5 * (2.0 / PI).ln()
            - nu * a.ln()
            - (-2.0 * t).exp().ln_1p()
    };
    Ok(-ln_k.exp_m1() + ln_k.exp() * 0.5 * d)
}

/// Bounds from comparing the noncentralities `x` and `rho^2 x`:
/// `P_nu(x, y) < rho^{nu-1} e^{-x(1-rho^2)} I_{nu-1}(t)/I_{nu-1}(rho t) P_nu(rho^2 x, y)`
/// and the mirrored lower bound on `Q_nu`, `t = 2 sqrt(xy)`. At `rho = 0`
/// these are the incomplete gamma forms
/// `e^{-x} (sqrt(xy))^{1-nu} I_{nu-1}(t) gamma_nu(y)` and the same with `Gamma_nu(y)`.
pub fn incgamma_bounds(nu: f64, p: &GammaParams, rho: f64, cfg: &EvalConfig) -> Result<(BoundValue, BoundValue)> {
    ensure_domain!((0.0..1.0).contains(&rho), "rho must lie in [0, 1), got {rho}");
    ensure_domain!(p.x > 0.0 && p.y > 0.0, "incomplete gamma bounds need x, y > 0");
    let min_nu = if cfg.is_conjectured() { 0.0 } else { 1.0 };
    ensure_domain!(
        nu > 0.0 && nu >= min_nu,
        "incomplete gamma bounds with nu={nu} need nu >= {min_nu} in {} mode",
        cfg.validity_mode()
    );
    let p = p.with_mu(nu)?;
    let t = p.t();
    let ln_i = ln_bessel_i_scaled(nu - 1.0, t, cfg)? + t;
    let (ln_factor, tails) = if rho == 0.0 {
        let ln_factor = -p.x + 0.5 * (1.0 - nu) * (p.x * p.y).ln() + ln_i + log_gamma(nu);
        (ln_factor, reg_gamma_tails(nu, p.y, cfg)?)
    } else {
        let ln_i_rho = ln_bessel_i_scaled(nu - 1.0, rho * t, cfg)? + rho * t;
        let ln_factor = (nu - 1.0) * rho.ln() - p.x * (1.0 - rho * rho) + ln_i - ln_i_rho;
        (ln_factor, marcum_pq(&p.with_x(rho * rho * p.x)?, cfg)?)
    };
    let note = if nu >= 1.0 { "" } else { "order below 1 rests on the cited Bessel-ratio lemma" };
    Ok((
        BoundValue::upper("P[nu]", (ln_factor + tails.lower.ln()).exp()).with_validity(true, note),
        BoundValue::lower("Q[nu]", (ln_factor + tails.upper.ln()).exp()).with_validity(true, note),
    ))
}

/// `1 - LHS/RHS` for `I_nu(2 sqrt(xy)) Gamma_{nu+1}(y) < e^x (sqrt(xy))^nu`.
pub fn curious_gamma_inequality_margin(nu: f64, x: f64, y: f64, cfg: &EvalConfig) -> Result<f64> {
    ensure_domain!(nu > -1.0, "order must be > -1, got {nu}");
    ensure_domain!(x > 0.0 && y > 0.0, "x and y must be positive");
    let t = 2.0 * (x * y).sqrt();
    let q = reg_gamma_tails(nu + 1.0, y, cfg)?.upper;
    let ln_ratio = ln_bessel_i_scaled(nu, t, cfg)? + t + log_gamma(nu + 1.0) + q.ln() - x - 0.5 * nu * (x * y).ln();
    Ok(-ln_ratio.exp_m1())
}

/// `P_mu > sum_{n=1}^{N} g_{mu+n}`; the remainder is exactly `P_{mu+N}`.
pub fn series_lower_bound_p(p: &GammaParams, n: usize, cfg: &EvalConfig) -> Result<BoundValue> {
    ensure_domain!(n >= 1, "series bound needs N >= 1");
    let mut sum = 0.0;
    for k in 1..=n {
        sum += ln_density(p.mu + k as f64, p.x, p.y, cfg)?.exp();
    }
    Ok(BoundValue::lower("P[mu]", sum))
}

/// `Q_mu > g_mu`, from `Q_mu = Q_{mu-1} + g_mu`; needs `mu >= 1` so that
/// `Q_{mu-1}` is a genuine tail.
pub fn series_lower_bound_q(p: &GammaParams, cfg: &EvalConfig) -> Result<BoundValue> {
    let b = BoundValue::lower("Q[mu]", marcum_density(p, cfg)?);
    Ok(if p.mu >= 1.0 { b } else { b.with_validity(false, "needs mu >= 1") })
}

/// `t^alpha I_{mu+alpha}(t) / I_mu(t)`, increasing in `t` for `alpha, mu > 0`
/// (and with `alpha = 1` for `mu >= -1`).
pub fn bessel_power_ratio(alpha: f64, mu: f64, t: f64, cfg: &EvalConfig) -> Result<f64> {
    ensure_domain!(t > 0.0, "t must be positive");
    Ok((alpha * t.ln() + ln_bessel_i_scaled(mu + alpha, t, cfg)? - ln_bessel_i_scaled(mu, t, cfg)?).exp())
}
