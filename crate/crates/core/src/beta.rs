//! Noncentral beta distribution `B_{a,b}(x, y)` and its bounds.
//!
//! `B_{a,b}(x, y) = sum_j e^{-x/2} (x/2)^j / j! I_y(a + j, b)` with density
//! `e^{-x/2} y^{a-1} (1-y)^{b-1} M(a+b, a, xy/2) / B(a, b)`. The ratio of the
//! densities at `a+1` and `a` is
//! `r = ((a+b)/a) y M(a+b+1, a+1, z) / M(a+b, a, z)`, `z = xy/2`, increasing
//! in `y`; the shift relations
//! `B_{a,b} - B_{a+1,b} = (C_{a,b}/a) M(a+b, a+1, z)`, with
//! `C_{a,b} = e^{-x/2} y^a (1-y)^b / B(a, b)`, turn it into difference bounds.

use crate::error::ensure_domain;
use crate::kummer_ratios::dee;
use crate::mixture::poisson_mixture;
use crate::ratio_engine::{self, CrossingCache, DensityPair, Direction};
use crate::specfun::{central_beta_tails, ln_beta, ln_kummer_m};
use crate::{BoundValue, EvalConfig, Result, Tails};

/// Shapes, noncentrality and argument of a noncentral beta distribution.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BetaParams {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub y: f64,
}

impl BetaParams {
    pub const MAX_SHAPE: f64 = 100.0;
    pub const MAX_X: f64 = 200.0;

    pub fn new(a: f64, b: f64, x: f64, y: f64) -> Result<Self> {
        ensure_domain!(
            a > 0.0 && a <= Self::MAX_SHAPE && b > 0.0 && b <= Self::MAX_SHAPE,
            "shapes must lie in (0, {}], got ({a}, {b})",
            Self::MAX_SHAPE
        );
        ensure_domain!(x >= 0.0 && x <= Self::MAX_X, "noncentrality x must lie in [0, {}], got {x}", Self::MAX_X);
        ensure_domain!((0.0..=1.0).contains(&y), "argument y must lie in [0, 1], got {y}");
        Ok(BetaParams { a, b, x, y })
    }

    pub fn with_a(self, a: f64) -> Result<Self> {
        Self::new(a, self.b, self.x, self.y)
    }

    pub fn with_b(self, b: f64) -> Result<Self> {
        Self::new(self.a, b, self.x, self.y)
    }

    pub fn with_x(self, x: f64) -> Result<Self> {
        Self::new(self.a, self.b, x, self.y)
    }

    pub fn with_y(self, y: f64) -> Result<Self> {
        Self::new(self.a, self.b, self.x, y)
    }

    /// `z = xy/2`, the Kummer argument.
    pub fn z(&self) -> f64 {
        0.5 * self.x * self.y
    }

    /// `ln C_{a,b}(x, y)`.
    fn ln_c(&self) -> f64 {
        -0.5 * self.x + self.a * self.y.ln() + self.b * (1.0 - self.y).ln() - ln_beta(self.a, self.b)
    }
}

/// `(B, Bbar)`, each tail summed separately over the Poisson mixture.
pub fn beta_nc_cdf(p: &BetaParams, cfg: &EvalConfig) -> Result<Tails> {
    if p.y == 0.0 || p.y == 1.0 {
        return central_beta_tails(p.a, p.b, p.y, cfg);
    }
    poisson_mixture("noncentral beta Poisson mixture", 0.5 * p.x, cfg, |j| {
        central_beta_tails(p.a + j as f64, p.b, p.y, cfg)
    })
}

pub fn beta_nc_density(p: &BetaParams, cfg: &EvalConfig) -> Result<f64> {
    ensure_domain!(p.y > 0.0 && p.y < 1.0, "density needs y in (0, 1), got {}", p.y);
    Ok((-0.5 * p.x + (p.a - 1.0) * p.y.ln() + (p.b - 1.0) * (1.0 - p.y).ln() - ln_beta(p.a, p.b)
        + ln_kummer_m(p.a + p.b, p.a, p.z(), cfg)?)
    .exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftKind {
    /// `B_{a,b} = B_{a+1,b} + (C/a) M(a+b, a+1, z)`
    AUp,
    /// `B_{a,b} = B_{a,b+1} - (C/b) M(a+b, a, z)`
    BUp,
    /// `B_{a,b} = B_{a-1,b+1} - (C/(by)) M(a+b, a, z)`, needs `a > 1`
    ADownBUp,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RecurrenceShift {
    pub kind: ShiftKind,
    pub term: f64,
    /// `C_{a,b}(x, y)`
    pub prefactor: f64,
}

impl RecurrenceShift {
    /// `B_{a,b}` from the distribution at the shifted parameters.
    pub fn apply(&self, shifted: f64) -> f64 {
        match self.kind {
            ShiftKind::AUp => shifted + self.term,
            ShiftKind::BUp | ShiftKind::ADownBUp => shifted - self.term,
        }
    }

    /// `Bbar_{a,b}` from the complementary tail at the shifted parameters:
    /// the inhomogeneous term changes sign.
    pub fn apply_complement(&self, shifted: f64) -> f64 {
        match self.kind {
            ShiftKind::AUp => shifted - self.term,
            ShiftKind::BUp | ShiftKind::ADownBUp => shifted + self.term,
        }
    }

    /// The parameters on the right-hand side of the relation.
    pub fn shifted_params(&self, p: &BetaParams) -> Result<BetaParams> {
        match self.kind {
            ShiftKind::AUp => p.with_a(p.a + 1.0),
            ShiftKind::BUp => p.with_b(p.b + 1.0),
            ShiftKind::ADownBUp => BetaParams::new(p.a - 1.0, p.b + 1.0, p.x, p.y),
        }
    }
}

pub fn recurrence_shift(p: &BetaParams, kind: ShiftKind, cfg: &EvalConfig) -> Result<RecurrenceShift> {
    if kind == ShiftKind::ADownBUp {
        ensure_domain!(p.a > 1.0, "the a-down shift needs a > 1, got {}", p.a);
    }
    if p.y == 0.0 || p.y == 1.0 {
        return Ok(RecurrenceShift { kind, term: 0.0, prefactor: 0.0 });
    }
    let ln_c = p.ln_c();
    let (a, b, z) = (p.a, p.b, p.z());
    let ln_term = match kind {
        ShiftKind::AUp => ln_c - a.ln() + ln_kummer_m(a + b, a + 1.0, z, cfg)?,
        ShiftKind::BUp => ln_c - b.ln() + ln_kummer_m(a + b, a, z, cfg)?,
        ShiftKind::ADownBUp => ln_c - (b * p.y).ln() + ln_kummer_m(a + b, a, z, cfg)?,
    };
    Ok(RecurrenceShift { kind, term: ln_term.exp(), prefactor: ln_c.exp() })
}

/// `r = g_{a+1,b} / g_{a,b}` at `(x, y)`.
pub fn density_ratio(a: f64, b: f64, x: f64, y: f64, cfg: &EvalConfig) -> Result<f64> {
    let z = 0.5 * x * y;
    Ok((a + b) / a * y * (ln_kummer_m(a + b + 1.0, a + 1.0, z, cfg)? - ln_kummer_m(a + b, a, z, cfg)?).exp())
}

/// Upper bounds on `B_{a+1,b} / B_{a,b}`: the density ratio
/// `((a+b)/a) y M(a+b+1, a+1, z) / M(a+b, a, z)` and its closed-form bound
/// `y D(a+b, a-1, z) = (z + 1 - a + sqrt((z+1-a)^2 + 4(a+b)z)) / x`.
pub fn ratio_bound_a(p: &BetaParams, cfg: &EvalConfig) -> Result<(BoundValue, BoundValue)> {
    ensure_domain!(p.x > 0.0, "the closed-form ratio bound needs x > 0");
    ensure_domain!(p.y > 0.0 && p.y < 1.0, "ratio bounds need y in (0, 1)");
    let kummer = density_ratio(p.a, p.b, p.x, p.y, cfg)?;
    let closed = p.y * dee(p.a + p.b, p.a - 1.0, p.z());
    Ok((BoundValue::upper("B[a+1,b]/B[a,b]", kummer), BoundValue::upper("B[a+1,b]/B[a,b]", closed)))
}

pub fn recurrence_pair(a: f64, b: f64, x: f64, cfg: &EvalConfig) -> DensityPair {
    let cfg = *cfg;
    let density = move |a: f64, y: f64| BetaParams { a, b, x, y };
    DensityPair::new(
        move |y| beta_nc_density(&density(a, y), &cfg),
        move |y| beta_nc_density(&density(a + 1.0, y), &cfg),
        Direction::Increasing,
        (0.0, 1.0),
    )
    .with_ratio(move |y| density_ratio(a, b, x, y, &cfg))
}

/// The `y0` in `(0, 1)` where `g_{a+1,b} = g_{a,b}`; `a/(a+b)` when `x = 0`.
pub fn recurrence_crossing(a: f64, b: f64, x: f64, cfg: &EvalConfig) -> Result<f64> {
    if x == 0.0 {
        return Ok(a / (a + b));
    }
    ratio_engine::crossing_point(&recurrence_pair(a, b, x, cfg), cfg)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BetaRecurrenceBounds {
    /// `B_{a,b} < C M(a+b, a+1, z) / (a (1 - r))`, valid below `y0`
    pub b_upper: BoundValue,
    /// `B_{a+1,b} < r` times the above, valid below `y0`
    pub bnext_upper: BoundValue,
    /// `Bbar_{a,b} < C M(a+b, a+1, z) / (a (r - 1))`, valid above `y0`
    pub bbar_upper: BoundValue,
    /// `Bbar_{a+1,b} < r` times the above, valid above `y0`
    pub bbarnext_upper: BoundValue,
    pub crossing: f64,
}

pub fn recurrence_difference_bounds_beta(p: &BetaParams, cfg: &EvalConfig) -> Result<BetaRecurrenceBounds> {
    recurrence_difference_bounds_beta_cached(p, cfg, None)
}

pub fn recurrence_difference_bounds_beta_cached(
    p: &BetaParams,
    cfg: &EvalConfig,
    cache: Option<&CrossingCache>,
) -> Result<BetaRecurrenceBounds> {
    ensure_domain!(p.y > 0.0 && p.y < 1.0, "recurrence bounds need y in (0, 1)");
    let y0 = match cache {
        Some(c) => c.get_or_compute([p.a, p.b, p.x], || recurrence_crossing(p.a, p.b, p.x, cfg))?,
        None => recurrence_crossing(p.a, p.b, p.x, cfg)?,
    };
    let diff = recurrence_shift(p, ShiftKind::AUp, cfg)?.term;
    let r = density_ratio(p.a, p.b, p.x, p.y, cfg)?;
    let d = ratio_engine::difference_bounds_from_ratio(r, diff, p.y, y0)?;
    Ok(BetaRecurrenceBounds {
        b_upper: d.g1_upper.with_target("B[a,b]"),
        bnext_upper: d.g2_upper.with_target("B[a+1,b]"),
        bbar_upper: d.g1bar_upper.with_target("Bbar[a,b]"),
        bbarnext_upper: d.g2bar_upper.with_target("Bbar[a+1,b]"),
        crossing: y0,
    })
}

/// `I_y(a, b) < y^a (1-y)^b / (B(a, b) (a - (a+b) y))`, valid for `y < a/(a+b)`.
pub fn central_uu(a: f64, b: f64, y: f64) -> Result<BoundValue> {
    ensure_domain!(a > 0.0 && b > 0.0 && y > 0.0 && y < 1.0, "central bounds need a, b > 0 and y in (0, 1)");
    let gap = a - (a + b) * y;
    let value = (a * y.ln() + b * (1.0 - y).ln() - ln_beta(a, b)).exp() / gap;
    let valid = gap > 0.0;
    Ok(BoundValue::upper("I[a,b]", value).with_validity(valid, if valid { "" } else { "requires y < a/(a+b)" }))
}

/// `1 - I_y(a, b) < y^a (1-y)^b / (B(a, b) ((a+b) y - a))`, valid for `y > a/(a+b)`.
pub fn central_rela(a: f64, b: f64, y: f64) -> Result<BoundValue> {
    let uu = central_uu(a, b, y)?;
    let valid = !uu.valid && uu.value != f64::INFINITY;
    Ok(BoundValue::upper("Ibar[a,b]", -uu.value)
        .with_validity(valid, if valid { "" } else { "requires y > a/(a+b)" }))
}

/// The shifted central bound: `I_y(a, b) < ((a+b-1)/(a-1)) y` times the
/// `(a-1, b)` form of [`central_uu`], valid for `a > 1`, `y < (a-1)/(a+b-1)`.
pub fn central_ee(a: f64, b: f64, y: f64) -> Result<BoundValue> {
    ensure_domain!(a > 1.0, "the shifted central bound needs a > 1, got {a}");
    let uu = central_uu(a - 1.0, b, y)?;
    let r = (a + b - 1.0) / (a - 1.0) * y;
    Ok(BoundValue::upper("I[a,b]", r * uu.value).with_validity(
        uu.valid,
        if uu.valid { "" } else { "requires y < (a-1)/(a+b-1)" },
    ))
}

/// `B_{a,b} > (C/a) sum_{j=0}^{N} (a+b)_j / (a+1)_j y^j M(a+b+j, a+j+1, z)`.
pub fn series_lower_bound_beta(p: &BetaParams, n: usize, cfg: &EvalConfig) -> Result<BoundValue> {
    if p.y == 0.0 || p.y == 1.0 {
        return Ok(BoundValue::lower("B[a,b]", 0.0));
    }
    let (a, b, z) = (p.a, p.b, p.z());
    let mut ln_coef = p.ln_c() - a.ln();
    let mut sum = 0.0;
    for j in 0..=n {
        let jf = j as f64;
        sum += (ln_coef + ln_kummer_m(a + b + jf, a + jf + 1.0, z, cfg)?).exp();
        ln_coef += ((a + b + jf) / (a + 1.0 + jf)).ln() + p.y.ln();
    }
    Ok(BoundValue::lower("B[a,b]", sum))
}

/// `Bbar_{a,b} > (C_{a-1,b}/(a-1)) M(a+b-1, a, z)` for `a > 1`.
pub fn series_complement_lower_beta(p: &BetaParams, cfg: &EvalConfig) -> Result<BoundValue> {
    ensure_domain!(p.a > 1.0, "the complementary series bound needs a > 1, got {}", p.a);
    let shifted = BetaParams { a: p.a - 1.0, ..*p };
    Ok(BoundValue::lower("Bbar[a,b]", recurrence_shift(&shifted, ShiftKind::AUp, cfg)?.term))
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CentralFactorBounds {
    pub b_upper: BoundValue,
    pub bbar_lower: BoundValue,
    /// `1 - e^{-x/2} M(a+b, a, z) Bbar_{a,b}(0, y)`, positive when
    /// `Bbar_{a,b}(0, y) M(a+b, a, z) < e^{x/2}`.
    pub curious_margin: f64,
}

/// With `R = e^{-x(rho-1)/2} M(a+b, a, rho z) / M(a+b, a, z)`:
/// `B(x) < B(rho x) / R` and `Bbar(x) > Bbar(rho x) / R`.
pub fn central_factor_bounds(p: &BetaParams, rho: f64, cfg: &EvalConfig) -> Result<CentralFactorBounds> {
    ensure_domain!(p.x > 0.0, "central-factor bounds need x > 0");
    ensure_domain!((0.0..1.0).contains(&rho), "rho must lie in [0, 1), got {rho}");
    let (a, b, z) = (p.a, p.b, p.z());
    let ln_m = ln_kummer_m(a + b, a, z, cfg)?;
    let ln_inv_r = 0.5 * p.x * (rho - 1.0) + ln_m - ln_kummer_m(a + b, a, rho * z, cfg)?;
    let inv_r = ln_inv_r.exp();
    let at_rho = beta_nc_cdf(&p.with_x(rho * p.x)?, cfg)?;
    let central = if rho == 0.0 { at_rho } else { beta_nc_cdf(&p.with_x(0.0)?, cfg)? };
    let curious_margin = -(-0.5 * p.x + ln_m + central.upper.ln()).exp_m1();
    Ok(CentralFactorBounds {
        b_upper: BoundValue::upper("B[a,b]", inv_r * at_rho.lower),
        bbar_lower: BoundValue::lower("Bbar[a,b]", inv_r * at_rho.upper),
        curious_margin,
    })
}
