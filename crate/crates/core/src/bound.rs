use serde::Serialize;

/// Which side of the bounded quantity a bound lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        })
    }
}

/// A computed bound.
///
/// `valid` is false whenever the evaluation point lies outside the region where
/// the inequality is established; the value is still reported. `magnitude` is
/// the size of the largest quantity combined to form `value` (for instance `1`
/// for a bound of the form `1 - X`), so rounding noise in `value` is relative
/// to it rather than to `value` itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub side: Side,
    pub target: &'static str,
    pub valid: bool,
    pub validity_note: String,
    pub magnitude: f64,
}

impl BoundValue {
    pub fn new(side: Side, target: &'static str, value: f64) -> Self {
        BoundValue {
            value,
            side,
            target,
            valid: true,
            validity_note: String::new(),
            magnitude: value.abs(),
        }
    }

    pub fn upper(target: &'static str, value: f64) -> Self {
        Self::new(Side::Upper, target, value)
    }

    pub fn lower(target: &'static str, value: f64) -> Self {
        Self::new(Side::Lower, target, value)
    }

    pub fn with_validity(mut self, valid: bool, note: impl Into<String>) -> Self {
        self.valid = valid;
        self.validity_note = note.into();
        self
    }

    pub fn with_target(mut self, target: &'static str) -> Self {
        self.target = target;
        self
    }

    pub fn with_magnitude(mut self, magnitude: f64) -> Self {
        self.magnitude = magnitude.abs().max(self.value.abs());
        self
    }

    /// Signed distance to `actual`, positive when the bound holds, measured
    /// relative to `max(|actual|, magnitude)`.
    pub fn relative_margin(&self, actual: f64) -> f64 {
        let diff = match self.side {
            Side::Upper => self.value - actual,
            Side::Lower => actual - self.value,
        };
        let scale = actual.abs().max(self.magnitude);
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    /// Whether the bound holds against `actual` up to a relative noise budget.
    pub fn holds(&self, actual: f64, noise: f64) -> bool {
        self.relative_margin(actual) >= -noise
    }
}
