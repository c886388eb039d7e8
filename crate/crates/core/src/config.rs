use serde::Serialize;

use crate::error::{ensure_domain, Result};

/// Whether bounds may rely on monotonicity claims that are only conjectured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidityMode {
    /// Only parameter ranges covered by proofs.
    #[default]
    Proven,
    /// Also the extended ranges that are supported numerically but not proven.
    Conjectured,
}

impl std::str::FromStr for ValidityMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "proven" => Ok(ValidityMode::Proven),
            "conjectured" => Ok(ValidityMode::Conjectured),
            other => Err(format!("unknown validity mode `{other}`")),
        }
    }
}

impl std::fmt::Display for ValidityMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ValidityMode::Proven => "proven",
            ValidityMode::Conjectured => "conjectured",
        })
    }
}

/// Evaluation settings shared by every kernel and bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalConfig {
    rel_tol: f64,
    max_terms: usize,
    validity_mode: ValidityMode,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            rel_tol: 1e-12,
            max_terms: 10_000,
            validity_mode: ValidityMode::Proven,
        }
    }
}

impl EvalConfig {
    /// Requires `0 < rel_tol < 1e-6` and `max_terms >= 100`.
    pub fn new(rel_tol: f64, max_terms: usize, validity_mode: ValidityMode) -> Result<Self> {
        ensure_domain!(
            rel_tol > 0.0 && rel_tol < 1e-6,
            "rel_tol must lie in (0, 1e-6), got {rel_tol}"
        );
        ensure_domain!(max_terms >= 100, "max_terms must be at least 100, got {max_terms}");
        Ok(EvalConfig {
            rel_tol,
            max_terms,
            validity_mode,
        })
    }

    pub fn with_validity_mode(mut self, mode: ValidityMode) -> Self {
        self.validity_mode = mode;
        self
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn validity_mode(&self) -> ValidityMode {
        self.validity_mode
    }

    pub fn is_conjectured(&self) -> bool {
        self.validity_mode == ValidityMode::Conjectured
    }

    /// Truncation target for series and continued fractions, kept well below
    /// `rel_tol` to leave room for rounding in prefactors and sums.
    pub(crate) fn truncation_tol(&self) -> f64 {
        (1e-3 * self.rel_tol).max(f64::EPSILON)
    }
}
