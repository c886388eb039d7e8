//! Bounds from a pair of densities whose ratio is strictly monotone.
//!
//! With `G_i(x) = int_lo^x g_i` and `r = g2/g1` increasing, the ratio
//! `G2/G1` stays below `r` and `Gbar2/Gbar1` stays above it; both also
//! compare with 1, since `r` crosses 1 exactly once, at `x0`. Given the
//! difference `G1 - G2` in closed form this yields
//! `G1 < (G1 - G2) / (1 - r)` below `x0` and the complementary bound
//! above it. The same formulas hold verbatim for a decreasing ratio.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::{BoundValue, EvalConfig, Error, Result};

type Density = Box<dyn Fn(f64) -> Result<f64> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// `|1 - r|` below which difference bounds are refused.
pub const SINGULAR_GAP: f64 = 1e-8;

/// Two densities on `(lo, hi)` with `g2/g1` strictly monotone in the
/// declared direction. The monotonicity is a property of the family, not
/// something checked here.
pub struct DensityPair {
    g1: Density,
    g2: Density,
    ratio: Option<Density>,
    pub direction: Direction,
    pub interval: (f64, f64),
}

impl DensityPair {
    pub fn new(
        g1: impl Fn(f64) -> Result<f64> + Send + Sync + 'static,
        g2: impl Fn(f64) -> Result<f64> + Send + Sync + 'static,
        direction: Direction,
        interval: (f64, f64),
    ) -> Self {
        DensityPair { g1: Box::new(g1), g2: Box::new(g2), ratio: None, direction, interval }
    }

    /// Supplies `g2/g1` in closed form, for families where the quotient of
    /// the two evaluated densities would underflow.
    pub fn with_ratio(mut self, ratio: impl Fn(f64) -> Result<f64> + Send + Sync + 'static) -> Self {
        self.ratio = Some(Box::new(ratio));
        self
    }

    pub fn g1(&self, x: f64) -> Result<f64> {
        (self.g1)(x)
    }

    pub fn g2(&self, x: f64) -> Result<f64> {
        (self.g2)(x)
    }

    pub fn ratio(&self, x: f64) -> Result<f64> {
        match &self.ratio {
            Some(r) => r(x),
            None => Ok(self.g2(x)? / self.g1(x)?),
        }
    }
}

/// The unique `x0` with `r(x0) = 1`, by bisection.
///
/// An infinite upper end is handled by doubling until the ratio has crossed.
pub fn crossing_point(pair: &DensityPair, _cfg: &EvalConfig) -> Result<f64> {
    let (lo, hi) = pair.interval;
    let sign = match pair.direction {
        Direction::Increasing => 1.0,
        Direction::Decreasing => -1.0,
    };
    // f < 0 left of x0, > 0 right of it
    let f = |x: f64| -> Result<f64> { Ok(sign * (pair.ratio(x)? - 1.0)) };

    let mut a = if hi.is_finite() { lo + (hi - lo) * 1e-12 } else { lo + lo.abs().max(1.0) * 1e-12 };
    let mut b;
    if hi.is_finite() {
        b = hi - (hi - lo) * 1e-12;
        if f(b)? <= 0.0 {
            return Err(Error::NoCrossing { lo, hi });
        }
    } else {
        b = (2.0 * lo).max(1.0);
        let mut doublings = 0;
        while f(b)? <= 0.0 {
            a = b;
            b *= 2.0;
            doublings += 1;
            if doublings > 1000 || !b.is_finite() {
                return Err(Error::NoCrossing { lo, hi });
            }
        }
    }
    let fa = f(a)?;
    if fa >= 0.0 {
        if fa == 0.0 {
            return Ok(a);
        }
        return Err(Error::NoCrossing { lo, hi });
    }
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b || b - a <= 1e-14 * mid.abs() {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Bounds on `G2/G1` and `Gbar2/Gbar1` at `x`: the ratio `r(x)` combined
/// with the trivial bound 1.
pub fn ratio_bound(pair: &DensityPair, x: f64) -> Result<(BoundValue, BoundValue)> {
    let r = pair.ratio(x)?;
    Ok(match pair.direction {
        Direction::Increasing => (
            BoundValue::upper("G2/G1", r.min(1.0)),
            BoundValue::lower("G2bar/G1bar", r.max(1.0)),
        ),
        Direction::Decreasing => (
            BoundValue::lower("G2/G1", r.max(1.0)),
            BoundValue::upper("G2bar/G1bar", r.min(1.0)),
        ),
    })
}

/// Difference-based bounds at one point. Below the crossing the `g*_upper`
/// pair is valid, above it the `g*bar_upper` pair; the other pair is reported
/// with `valid = false`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DifferenceBounds {
    /// `U1 = (G1 - G2) / (1 - r)`
    pub g1_upper: BoundValue,
    /// `U2 = r U1`
    pub g2_upper: BoundValue,
    /// `-U1`
    pub g1bar_upper: BoundValue,
    /// `-U2`
    pub g2bar_upper: BoundValue,
    pub ratio: f64,
    pub crossing: f64,
}

pub fn difference_bounds(pair: &DensityPair, diff: f64, x: f64, cfg: &EvalConfig) -> Result<DifferenceBounds> {
    let x0 = crossing_point(pair, cfg)?;
    difference_bounds_at(pair, diff, x, x0)
}

/// [`difference_bounds`] with a crossing point that is already known.
pub fn difference_bounds_at(pair: &DensityPair, diff: f64, x: f64, x0: f64) -> Result<DifferenceBounds> {
    let r = pair.ratio(x)?;
    difference_bounds_from_ratio(r, diff, x, x0)
}

pub(crate) fn difference_bounds_from_ratio(r: f64, diff: f64, x: f64, x0: f64) -> Result<DifferenceBounds> {
    let gap = 1.0 - r;
    if gap.abs() < SINGULAR_GAP || x == x0 {
        return Err(Error::SingularDenominator { at: x, gap: gap.abs() });
    }
    let u1 = diff / gap;
    let below = x < x0;
    let lower_note = if below { String::new() } else { format!("requires argument below the crossing {x0}") };
    let upper_note = if below { format!("requires argument above the crossing {x0}") } else { String::new() };
    Ok(DifferenceBounds {
        g1_upper: BoundValue::upper("G1", u1).with_validity(below, lower_note.clone()),
        g2_upper: BoundValue::upper("G2", r * u1).with_validity(below, lower_note),
        g1bar_upper: BoundValue::upper("G1bar", -u1).with_validity(!below, upper_note.clone()),
        g2bar_upper: BoundValue::upper("G2bar", -r * u1).with_validity(!below, upper_note),
        ratio: r,
        crossing: x0,
    })
}

/// Crossing points memoized by the parameters that determine them, safe to
/// share across threads of a sweep.
#[derive(Debug, Default)]
pub struct CrossingCache {
    map: Mutex<HashMap<[u64; 3], f64>>,
}

impl CrossingCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(&self, key: [f64; 3], compute: impl FnOnce() -> Result<f64>) -> Result<f64> {
        let bits = key.map(f64::to_bits);
        if let Some(&x0) = self.map.lock().unwrap().get(&bits) {
            return Ok(x0);
        }
        // computed outside the lock; a racing duplicate computes the same value
        let x0 = compute()?;
        self.map.lock().unwrap().insert(bits, x0);
        Ok(x0)
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
