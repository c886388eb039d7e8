//! Grid sweeps that compare every bound, identity and monotonicity claim
//! against the reference evaluators.
//!
//! A family is a cartesian parameter grid plus a per-cell evaluation that
//! returns a list of [`Check`]s. Cells run in parallel; results are collected
//! in grid order, so reports are identical from run to run.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::beta::{self as nb, BetaParams, ShiftKind};
use crate::kummer_ratios::{pairwise_ordering, ratio_h_diag, shifted_ratio_bound, OrderingCheck, Trend};
use crate::marcum::{self as mq, GammaParams};
use crate::quantile;
use crate::ratio_engine::CrossingCache;
use crate::specfun::{central_beta_tails, reg_gamma_tails};
use crate::{BoundValue, EvalConfig, Result, ValidityMode};

/// Relative slack allowed for bounds compared against the oracles.
pub const DEFAULT_NOISE: f64 = 1e-10;
/// Slack for sampled monotonicity checks.
pub const ORDERING_NOISE: f64 = 1e-11;
/// Largest allowed deviation of a sharp bound from its target at the limit point.
pub const SHARPNESS_TOL: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Gamma,
    Beta,
    Kummer,
    Quantile,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "all" => Suite::All,
            "gamma" => Suite::Gamma,
            "beta" => Suite::Beta,
            "kummer" => Suite::Kummer,
            "quantile" => Suite::Quantile,
            other => return Err(format!("unknown suite `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridSize {
    #[default]
    Default,
    Dense,
}

impl FromStr for GridSize {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "default" => Ok(GridSize::Default),
            "dense" => Ok(GridSize::Dense),
            other => Err(format!("unknown grid `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub grid: GridSize,
    /// Replaces the values of any grid axis with the same name.
    pub overrides: BTreeMap<String, Vec<f64>>,
    pub noise: f64,
    pub cfg: EvalConfig,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { grid: GridSize::Default, overrides: BTreeMap::new(), noise: DEFAULT_NOISE, cfg: EvalConfig::default() }
    }
}

/// One inequality or identity checked in a cell. `margin` is positive when
/// the claim holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub margin: f64,
    pub noise: f64,
    /// Require `margin > 0` rather than `margin >= -noise`.
    pub strict: bool,
}

impl Check {
    /// A bound against its target; `None` outside the bound's validity region.
    pub fn bound(label: impl Into<String>, b: &BoundValue, actual: f64, noise: f64) -> Option<Check> {
        b.valid.then(|| Check::margin(label, b.relative_margin(actual), noise))
    }

    /// A bound against its target regardless of the validity flag.
    pub fn bound_unconditional(label: impl Into<String>, b: &BoundValue, actual: f64, noise: f64) -> Check {
        Check::margin(label, b.relative_margin(actual), noise)
    }

    pub fn margin(label: impl Into<String>, margin: f64, noise: f64) -> Check {
        Check { label: label.into(), margin, noise, strict: false }
    }

    pub fn positive(label: impl Into<String>, margin: f64) -> Check {
        Check { label: label.into(), margin, noise: 0.0, strict: true }
    }

    pub fn residual(label: impl Into<String>, relative_residual: f64, noise: f64) -> Check {
        Check::margin(label, -relative_residual.abs(), noise)
    }

    pub fn ordering(label: impl Into<String>, o: &OrderingCheck) -> Check {
        Check::margin(label, o.min_margin, ORDERING_NOISE)
    }

    pub fn passes(&self) -> bool {
        if self.strict {
            self.margin > 0.0
        } else {
            self.margin >= -self.noise
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessCheck {
    pub label: String,
    pub point: BTreeMap<String, f64>,
    /// `1 - target/bound`, which must lie in `[0, tolerance]` (up to noise).
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SharpnessCheck {
    fn new(label: &str, point: &[(&str, f64)], deviation: f64, tolerance: f64, noise: f64) -> Self {
        SharpnessCheck {
            label: label.to_string(),
            point: point.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            deviation,
            tolerance,
            passed: deviation >= -noise && deviation <= tolerance,
        }
    }

    fn failed(label: &str, point: &[(&str, f64)], tolerance: f64) -> Self {
        SharpnessCheck {
            label: format!("{label} (evaluation failed)"),
            point: point.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            deviation: f64::NAN,
            tolerance,
            passed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedCell {
    pub cell: BTreeMap<String, f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub family: String,
    pub grid_spec: BTreeMap<String, Vec<f64>>,
    pub cells_total: usize,
    /// Cells with at least one check inside its validity region.
    pub cells_valid: usize,
    pub cells_skipped: usize,
    /// Cells where some check failed beyond its noise budget.
    pub violations: usize,
    pub checks: usize,
    pub min_margin: Option<f64>,
    pub worst_cell: Option<BTreeMap<String, f64>>,
    pub worst_check: Option<String>,
    pub sharpness_checks: Vec<SharpnessCheck>,
    pub skipped: Vec<SkippedCell>,
    /// Reported only; does not affect the suite verdict.
    pub informational: bool,
    pub passed: bool,
}

const MAX_SKIPPED_LISTED: usize = 20;

/// Parameter values of one grid cell, in axis order.
pub struct Point<'a> {
    names: &'a [&'static str],
    values: Vec<f64>,
}

impl Point<'_> {
    pub fn get(&self, name: &str) -> f64 {
        let i = self.names.iter().position(|n| *n == name).expect("unknown axis");
        self.values[i]
    }

    fn to_map(&self) -> BTreeMap<String, f64> {
        self.names.iter().zip(&self.values).map(|(n, v)| (n.to_string(), *v)).collect()
    }
}

type CellEval<'a> = Box<dyn Fn(&Point) -> Result<Vec<Check>> + Send + Sync + 'a>;
type Sharpness<'a> = Box<dyn Fn() -> Vec<SharpnessCheck> + Send + Sync + 'a>;

struct Family<'a> {
    name: &'static str,
    axes: Vec<(&'static str, Vec<f64>)>,
    eval: CellEval<'a>,
    sharpness: Option<Sharpness<'a>>,
    informational: bool,
}

impl<'a> Family<'a> {
    fn new(
        name: &'static str,
        axes: Vec<(&'static str, Vec<f64>)>,
        eval: impl Fn(&Point) -> Result<Vec<Check>> + Send + Sync + 'a,
    ) -> Self {
        Family { name, axes, eval: Box::new(eval), sharpness: None, informational: false }
    }

    fn with_sharpness(mut self, s: impl Fn() -> Vec<SharpnessCheck> + Send + Sync + 'a) -> Self {
        self.sharpness = Some(Box::new(s));
        self
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    fn run(self, opts: &SweepOptions) -> SweepReport {
        let axes: Vec<(&'static str, Vec<f64>)> = self
            .axes
            .into_iter()
            .map(|(name, values)| match opts.overrides.get(name) {
                Some(v) => (name, v.clone()),
                None => (name, values),
            })
            .collect();
        let names: Vec<&'static str> = axes.iter().map(|a| a.0).collect();
        let mut cells: Vec<Vec<f64>> = vec![vec![]];
        for (_, values) in &axes {
            cells = cells
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut c = prefix.clone();
                        c.push(*v);
                        c
                    })
                })
                .collect();
        }
        let points: Vec<Point> = cells.into_iter().map(|values| Point { names: &names, values }).collect();
        let eval = &self.eval;
        let results: Vec<Result<Vec<Check>>> = points.par_iter().map(|p| eval(p)).collect();

        let mut report = SweepReport {
            family: self.name.to_string(),
            grid_spec: axes.iter().map(|(n, v)| (n.to_string(), v.clone())).collect(),
            cells_total: points.len(),
            cells_valid: 0,
            cells_skipped: 0,
            violations: 0,
            checks: 0,
            min_margin: None,
            worst_cell: None,
            worst_check: None,
            sharpness_checks: vec![],
            skipped: vec![],
            informational: self.informational,
            passed: false,
        };
        for (point, result) in points.iter().zip(results) {
            match result {
                Err(e) => {
                    report.cells_skipped += 1;
                    if report.skipped.len() < MAX_SKIPPED_LISTED {
                        report.skipped.push(SkippedCell { cell: point.to_map(), reason: e.to_string() });
                    }
                }
                Ok(checks) if checks.is_empty() => {}
                Ok(checks) => {
                    report.cells_valid += 1;
                    report.checks += checks.len();
                    if checks.iter().any(|c| !c.passes()) {
                        report.violations += 1;
                    }
                    for c in &checks {
                        let m = if c.margin.is_nan() { f64::NEG_INFINITY } else { c.margin };
                        if report.min_margin.is_none_or(|cur| m < cur) {
                            report.min_margin = Some(m);
                            report.worst_cell = Some(point.to_map());
                            report.worst_check = Some(c.label.clone());
                        }
                    }
                }
            }
        }
        if report.cells_total > 0 {
            if let Some(s) = &self.sharpness {
                report.sharpness_checks = s();
            }
        }
        report.passed =
            report.cells_total > 0 && report.violations == 0 && report.sharpness_checks.iter().all(|s| s.passed);
        report
    }
}

/// Runs every family of `suite`.
pub fn run_suite(suite: Suite, opts: &SweepOptions) -> Vec<SweepReport> {
    let families = match suite {
        Suite::All => {
            let mut f = gamma_families(opts);
            f.extend(beta_families(opts));
            f.extend(kummer_families(opts));
            f.extend(quantile_families(opts));
            f
        }
        Suite::Gamma => gamma_families(opts),
        Suite::Beta => beta_families(opts),
        Suite::Kummer => kummer_families(opts),
        Suite::Quantile => quantile_families(opts),
    };
    families.into_iter().map(|f| f.run(opts)).collect()
}

/// True when every non-informational family passed and the grid was not empty.
pub fn suite_passed(reports: &[SweepReport]) -> bool {
    !reports.is_empty() && reports.iter().all(|r| r.informational || r.passed)
}

fn dense(opts: &SweepOptions, default: &[f64], dense: &[f64]) -> Vec<f64> {
    match opts.grid {
        GridSize::Default => default.to_vec(),
        GridSize::Dense => dense.to_vec(),
    }
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

// ---------------------------------------------------------------- gamma

struct GammaGrid {
    mu: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
}

fn gamma_grid(opts: &SweepOptions) -> GammaGrid {
    GammaGrid {
        mu: dense(opts, &[0.6, 1.0, 1.5, 2.0, 5.0, 10.0], &[0.6, 0.8, 1.0, 1.5, 2.0, 3.0, 5.0, 7.5, 10.0]),
        x: dense(opts, &[0.1, 1.0, 5.0, 20.0, 50.0], &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0]),
        y: dense(
            opts,
            &[0.01, 0.5, 1.0, 5.0, 20.0, 80.0],
            &[0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 80.0],
        ),
    }
}

/// Smallest point of the ladder approaching `y -> 0` at which the P-side
/// recurrence bound is checked for sharpness.
pub fn p_sharpness_y(mu: f64, x: f64) -> f64 {
    1e-4 * (mu / x).min(1.0)
}

/// Candidate arguments for the Q-side sharpness check, increasing.
pub fn q_sharpness_ladder(mu: f64, x: f64) -> Vec<f64> {
    let start = 4.0 * (mu + x);
    let mut ladder = vec![start];
    ladder.extend([100.0, 200.0, 300.0, 400.0, 500.0, 600.0, 800.0, 1000.0].into_iter().filter(|&y| y > start));
    ladder.retain(|&y| y <= GammaParams::MAX_Y);
    ladder
}

/// Smallest tail value treated as reliable: well inside the normal range,
/// so the oracle keeps full relative precision.
pub const RELIABLE_TAIL: f64 = 1e-280;

fn gamma_families(opts: &SweepOptions) -> Vec<Family<'static>> {
    let g = gamma_grid(opts);
    let cfg = opts.cfg;
    let noise = opts.noise;
    let pq = move |mu: f64, x: f64, y: f64| mq::marcum_pq(&GammaParams::new(mu, x, y)?, &cfg);
    let cache = std::sync::Arc::new(CrossingCache::new());
    let axes3 = |g: &GammaGrid| vec![("mu", g.mu.clone()), ("x", g.x.clone()), ("y", g.y.clone())];
    let mut out = vec![];

    out.push(Family::new("gamma.c-ratio", axes3(&g), move |p| {
        let gp = GammaParams::new(p.get("mu"), p.get("x"), p.get("y"))?;
        let (pb, qb) = mq::ratio_bound_c(&gp, &cfg)?;
        let a = pq(gp.mu, gp.x, gp.y)?;
        let b = pq(gp.mu + 1.0, gp.x, gp.y)?;
        let mut checks = vec![];
        if a.lower > 0.0 {
            checks.extend(Check::bound("P[mu+1]/P[mu] < c", &pb, b.lower / a.lower, noise));
        }
        if a.upper > 0.0 {
            checks.extend(Check::bound("Q[mu+1]/Q[mu] > c", &qb, b.upper / a.upper, noise));
        }
        Ok(checks)
    }));

    let c2 = cache.clone();
    let sharp_grid = (g.mu.clone(), g.x.clone(), g.y.clone());
    out.push(
        Family::new("gamma.recurrence", axes3(&g), move |p| {
            let gp = GammaParams::new(p.get("mu"), p.get("x"), p.get("y"))?;
            let rb = mq::recurrence_difference_bounds_cached(&gp, &cfg, Some(&c2))?;
            let a = pq(gp.mu, gp.x, gp.y)?;
            let b = pq(gp.mu + 1.0, gp.x, gp.y)?;
            Ok([
                Check::bound("P[mu] upper", &rb.p_upper, a.lower, noise),
                Check::bound("P[mu+1] upper", &rb.pnext_upper, b.lower, noise),
                Check::bound("Q[mu] upper", &rb.q_upper, a.upper, noise),
                Check::bound("Q[mu+1] upper", &rb.qnext_upper, b.upper, noise),
            ]
            .into_iter()
            .flatten()
            .collect())
        })
        .with_sharpness(move || gamma_sharpness(&sharp_grid.0, &sharp_grid.1, &sharp_grid.2, &cfg, noise)),
    );

    let mut shift_axes = axes3(&g);
    shift_axes.push(("shift", vec![0.5, 1.0, 2.5]));
    out.push(Family::new("gamma.order-shift", shift_axes, move |p| {
        let (mu, shift) = (p.get("mu"), p.get("shift"));
        if mu < 1.0 {
            return Ok(vec![]);
        }
        let gp = GammaParams::new(mu, p.get("x"), p.get("y"))?;
        let (up, lo) = mq::order_shift_bound(mu + shift, mu, &gp, &cfg)?;
        let t = pq(mu + shift, gp.x, gp.y)?;
        Ok([Check::bound("P[nu] upper", &up, t.lower, noise), Check::bound("Q[nu] lower", &lo, t.upper, noise)]
            .into_iter()
            .flatten()
            .collect())
    }));

    out.push(Family::new(
        "gamma.erf",
        vec![("nu", g.mu.clone()), ("x", g.x.clone()), ("y", g.y.clone())],
        move |p| {
            let gp = GammaParams::new(p.get("nu"), p.get("x"), p.get("y"))?;
            let s = mq::erf_bounds(gp.mu, &gp, &cfg)?;
            let q = pq(gp.mu, gp.x, gp.y)?.upper;
            Ok([
                Check::bound("B1 lower", &s.b1, q, noise),
                Check::bound("B2 lower", &s.b2, q, noise),
                Check::bound("L1 lower", &s.l1, q, noise),
                Check::bound("L2 lower", &s.l2, q, noise),
            ]
            .into_iter()
            .flatten()
            .collect())
        },
    ));

    out.push(Family::new(
        "gamma.incgamma",
        vec![("nu", g.mu.clone()), ("x", g.x.clone()), ("y", g.y.clone()), ("rho", vec![0.0, 0.5, 0.9])],
        move |p| {
            let nu = p.get("nu");
            if nu < 1.0 {
                return Ok(vec![]);
            }
            let gp = GammaParams::new(nu, p.get("x"), p.get("y"))?;
            let (up, lo) = mq::incgamma_bounds(nu, &gp, p.get("rho"), &cfg)?;
            let t = pq(nu, gp.x, gp.y)?;
            Ok([Check::bound("P[nu] upper", &up, t.lower, noise), Check::bound("Q[nu] lower", &lo, t.upper, noise)]
                .into_iter()
                .flatten()
                .collect())
        },
    ));

    let mut series_axes = axes3(&g);
    series_axes.push(("n", vec![1.0, 5.0, 20.0]));
    out.push(Family::new("gamma.series", series_axes, move |p| {
        let gp = GammaParams::new(p.get("mu"), p.get("x"), p.get("y"))?;
        let n = p.get("n") as usize;
        let t = pq(gp.mu, gp.x, gp.y)?;
        let lo = mq::series_lower_bound_p(&gp, n, &cfg)?;
        let shorter = mq::series_lower_bound_p(&gp, n.max(2) - 1, &cfg)?;
        let q = mq::series_lower_bound_q(&gp, &cfg)?;
        Ok([
            Check::bound("P[mu] series lower", &lo, t.lower, noise),
            Check::bound("Q[mu] > g[mu]", &q, t.upper, noise),
            Some(Check::margin("nondecreasing in N", lo.value - shorter.value, 0.0)),
        ]
        .into_iter()
        .flatten()
        .collect())
    }));

    let nus = vec![-0.9, -0.5, 0.0, 0.5, 1.0, 2.5, 5.0, 10.0];
    out.push(Family::new(
        "gamma.curious-gamma",
        vec![("nu", nus.clone()), ("x", g.x.clone()), ("y", g.y.clone())],
        move |p| {
            let m = mq::curious_gamma_inequality_margin(p.get("nu"), p.get("x"), p.get("y"), &cfg)?;
            Ok(vec![Check::positive("I[nu] Gamma[nu+1](y) < e^x (xy)^(nu/2)", m)])
        },
    ));

    out.push(Family::new(
        "gamma.curious-erfc-bessel",
        vec![("nu", nus[1..].to_vec()), ("x", g.x.clone()), ("y", g.y.clone())],
        move |p| {
            let (a, b) = ((2.0 * p.get("x")).sqrt(), (2.0 * p.get("y")).sqrt());
            let m = mq::erfc_bessel_inequality_margin(p.get("nu"), a, b, &cfg)?;
            Ok(vec![Check::positive("erfc-Bessel inequality", m)])
        },
    ));

    let ts = geometric(0.05, 100.0, 50);
    out.push(Family::new(
        "gamma.bessel-xratio-monotone",
        vec![("mu", vec![-1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0])],
        move |p| {
            let mu = p.get("mu");
            let v = ts.iter().map(|&t| mq::bessel_power_ratio(1.0, mu, t, &cfg)).collect::<Result<Vec<_>>>()?;
            Ok(vec![Check::ordering("t I[mu+1]/I[mu] increasing", &pairwise_ordering(&v, Trend::Increasing))])
        },
    ));

    let conj = cfg.with_validity_mode(ValidityMode::Conjectured);
    out.push(
        Family::new(
            "gamma.order-shift-conjectured",
            vec![("nu", vec![0.6, 0.75, 1.0, 1.5, 2.0]), ("x", g.x.clone()), ("y", g.y.clone())],
            move |p| {
                let gp = GammaParams::new(0.5, p.get("x"), p.get("y"))?;
                let nu = p.get("nu");
                let (up, lo) = mq::order_shift_bound(nu, 0.5, &gp, &conj)?;
                let t = mq::marcum_pq(&gp.with_mu(nu)?, &conj)?;
                Ok(vec![
                    Check::bound_unconditional("P[nu] upper (mu=1/2)", &up, t.lower, noise),
                    Check::bound_unconditional("Q[nu] lower (mu=1/2)", &lo, t.upper, noise),
                ])
            },
        )
        .informational(),
    );
    out
}

fn gamma_sharpness(mus: &[f64], xs: &[f64], ys: &[f64], cfg: &EvalConfig, noise: f64) -> Vec<SharpnessCheck> {
    let mut jobs: Vec<(f64, f64)> = vec![];
    for &mu in mus {
        for &x in xs {
            if x > 0.0 {
                jobs.push((mu, x));
            }
        }
    }
    let mut out: Vec<SharpnessCheck> = jobs
        .par_iter()
        .flat_map_iter(|&(mu, x)| {
            let mut v = vec![];
            let y = p_sharpness_y(mu, x);
            let pt = [("mu", mu), ("x", x), ("y", y)];
            v.push(
                (|| -> Result<SharpnessCheck> {
                    let gp = GammaParams::new(mu, x, y)?;
                    let b = mq::recurrence_difference_bounds(&gp, cfg)?;
                    let p = mq::marcum_pq(&gp, cfg)?.lower;
                    Ok(SharpnessCheck::new("P-side recurrence bound as y -> 0", &pt, 1.0 - p / b.p_upper.value, SHARPNESS_TOL, noise))
                })()
                .unwrap_or_else(|_| SharpnessCheck::failed("P-side recurrence bound as y -> 0", &pt, SHARPNESS_TOL)),
            );
            v.push(q_sharpness(mu, x, cfg, noise));
            v
        })
        .collect();

    // the rho = 0 incomplete gamma bound tends to P_nu(0, y) as x -> 0
    let x = 1e-8;
    for &nu in mus.iter().filter(|&&m| m >= 1.0) {
        for &y in ys.iter().filter(|&&y| y > 0.0) {
            let pt = [("nu", nu), ("x", x), ("y", y)];
            let label = "rho=0 incomplete gamma bound -> P_nu(0, y) as x -> 0";
            out.push(
                (|| -> Result<SharpnessCheck> {
                    let gp = GammaParams::new(nu, x, y)?;
                    let (b1, _) = mq::incgamma_bounds(nu, &gp, 0.0, cfg)?;
                    let p0 = reg_gamma_tails(nu, y, cfg)?.lower;
                    let dev = (b1.value / p0 - 1.0).abs();
                    Ok(SharpnessCheck::new(label, &pt, dev, 1e-6, noise))
                })()
                .unwrap_or_else(|_| SharpnessCheck::failed(label, &pt, 1e-6)),
            );
        }
    }
    out
}

/// Q-side recurrence bound at the largest ladder point whose tail is
/// reliably representable.
fn q_sharpness(mu: f64, x: f64, cfg: &EvalConfig, noise: f64) -> SharpnessCheck {
    let label = "Q-side recurrence bound at the largest reliable y";
    let mut chosen = None;
    for y in q_sharpness_ladder(mu, x) {
        let Ok(gp) = GammaParams::new(mu, x, y) else { break };
        let Ok(t) = mq::marcum_pq(&gp, cfg) else { break };
        if t.upper < RELIABLE_TAIL {
            break;
        }
        chosen = Some((gp, t.upper));
    }
    let Some((gp, q)) = chosen else {
        return SharpnessCheck::failed(label, &[("mu", mu), ("x", x)], SHARPNESS_TOL);
    };
    let pt = [("mu", mu), ("x", x), ("y", gp.y)];
    match mq::recurrence_difference_bounds(&gp, cfg) {
        Ok(b) if b.q_upper.valid => SharpnessCheck::new(label, &pt, 1.0 - q / b.q_upper.value, SHARPNESS_TOL, noise),
        _ => SharpnessCheck::failed(label, &pt, SHARPNESS_TOL),
    }
}

// ---------------------------------------------------------------- beta

fn beta_axes(opts: &SweepOptions) -> Vec<(&'static str, Vec<f64>)> {
    let shapes = dense(opts, &[0.5, 1.0, 2.0, 5.0, 10.0], &[0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 7.5, 10.0]);
    vec![
        ("a", shapes.clone()),
        ("b", shapes),
        ("x", dense(opts, &[0.0, 0.5, 2.0, 10.0], &[0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0])),
        (
            "y",
            dense(
                opts,
                &[0.05, 0.2, 0.5, 0.8, 0.95],
                &[0.01, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 0.95, 0.99],
            ),
        ),
    ]
}

fn bp(p: &Point) -> Result<BetaParams> {
    BetaParams::new(p.get("a"), p.get("b"), p.get("x"), p.get("y"))
}

fn rel_residual(lhs: f64, rhs: f64, scale: &[f64]) -> f64 {
    let s = scale.iter().fold(lhs.abs().max(rhs.abs()), |m, v| m.max(v.abs()));
    if s == 0.0 {
        0.0
    } else {
        (lhs - rhs) / s
    }
}

fn beta_families(opts: &SweepOptions) -> Vec<Family<'static>> {
    let cfg = opts.cfg;
    let noise = opts.noise;
    let axes = beta_axes(opts);
    let cache = std::sync::Arc::new(CrossingCache::new());
    let mut out = vec![];

    let sharp_axes = axes.clone();
    out.push(
        Family::new("beta.recurrence", axes.clone(), move |p| {
            let bp = bp(p)?;
            let r = nb::recurrence_difference_bounds_beta_cached(&bp, &cfg, Some(&cache))?;
            let t = nb::beta_nc_cdf(&bp, &cfg)?;
            let tn = nb::beta_nc_cdf(&bp.with_a(bp.a + 1.0)?, &cfg)?;
            Ok([
                Check::bound("B[a,b] upper", &r.b_upper, t.lower, noise),
                Check::bound("B[a+1,b] upper", &r.bnext_upper, tn.lower, noise),
                Check::bound("Bbar[a,b] upper", &r.bbar_upper, t.upper, noise),
                Check::bound("Bbar[a+1,b] upper", &r.bbarnext_upper, tn.upper, noise),
            ]
            .into_iter()
            .flatten()
            .collect())
        })
        .with_sharpness(move || beta_sharpness(&sharp_axes, &cfg, noise)),
    );

    out.push(Family::new("beta.identities", axes.clone(), move |p| {
        let bp = bp(p)?;
        let t = nb::beta_nc_cdf(&bp, &cfg)?;
        let mut checks = vec![];
        for kind in [ShiftKind::AUp, ShiftKind::BUp, ShiftKind::ADownBUp] {
            if kind == ShiftKind::ADownBUp && bp.a <= 1.0 {
                continue;
            }
            let s = nb::recurrence_shift(&bp, kind, &cfg)?;
            let shifted = nb::beta_nc_cdf(&s.shifted_params(&bp)?, &cfg)?;
            checks.push(Check::residual(
                format!("{kind:?} identity"),
                rel_residual(t.lower, s.apply(shifted.lower), &[shifted.lower, s.term]),
                noise,
            ));
            checks.push(Check::residual(
                format!("{kind:?} complementary identity"),
                rel_residual(t.upper, s.apply_complement(shifted.upper), &[shifted.upper, s.term]),
                noise,
            ));
        }
        Ok(checks)
    }));

    out.push(Family::new("beta.ratio", axes.clone(), move |p| {
        let bp = bp(p)?;
        let t = nb::beta_nc_cdf(&bp, &cfg)?;
        let tn = nb::beta_nc_cdf(&bp.with_a(bp.a + 1.0)?, &cfg)?;
        let actual = tn.lower / t.lower;
        if bp.x == 0.0 {
            let r = nb::density_ratio(bp.a, bp.b, 0.0, bp.y, &cfg)?;
            return Ok(vec![Check::bound_unconditional("central ratio", &BoundValue::upper("", r), actual, noise)]);
        }
        let (k, c) = nb::ratio_bound_a(&bp, &cfg)?;
        Ok(vec![
            Check::bound_unconditional("Kummer-form ratio bound", &k, actual, noise),
            Check::bound_unconditional("closed-form ratio bound", &c, actual, noise),
            Check::margin("Kummer form <= closed form", (c.value - k.value) / c.value, noise),
        ])
    }));

    let mut series_axes = axes.clone();
    series_axes.push(("n", vec![0.0, 3.0, 10.0]));
    out.push(Family::new("beta.series", series_axes, move |p| {
        let bp = bp(p)?;
        let n = p.get("n") as usize;
        let t = nb::beta_nc_cdf(&bp, &cfg)?;
        let lo = nb::series_lower_bound_beta(&bp, n, &cfg)?;
        let mut checks = vec![Check::bound_unconditional("B[a,b] series lower", &lo, t.lower, noise)];
        if n > 0 {
            let shorter = nb::series_lower_bound_beta(&bp, n - 1, &cfg)?;
            checks.push(Check::margin("nondecreasing in N", lo.value - shorter.value, 0.0));
        }
        if bp.a > 1.0 {
            let c = nb::series_complement_lower_beta(&bp, &cfg)?;
            checks.push(Check::bound_unconditional("Bbar[a,b] lower", &c, t.upper, noise));
        }
        Ok(checks)
    }));

    let central_axes: Vec<_> = axes.iter().filter(|a| a.0 != "x").cloned().collect();
    out.push(Family::new("beta.central", central_axes, move |p| {
        let (a, b, y) = (p.get("a"), p.get("b"), p.get("y"));
        let t = central_beta_tails(a, b, y, &cfg)?;
        let mut checks = vec![];
        checks.extend(Check::bound("uu", &nb::central_uu(a, b, y)?, t.lower, noise));
        checks.extend(Check::bound("rela", &nb::central_rela(a, b, y)?, t.upper, noise));
        if a > 1.0 {
            checks.extend(Check::bound("ee", &nb::central_ee(a, b, y)?, t.lower, noise));
        }
        Ok(checks)
    }));

    let mut cf_axes = axes;
    cf_axes.push(("rho", vec![0.0, 0.5]));
    out.push(Family::new("beta.central-factor", cf_axes, move |p| {
        let bp = bp(p)?;
        if bp.x == 0.0 {
            return Ok(vec![]);
        }
        let rho = p.get("rho");
        let f = nb::central_factor_bounds(&bp, rho, &cfg)?;
        let t = nb::beta_nc_cdf(&bp, &cfg)?;
        let mut checks = vec![
            Check::bound_unconditional("B[a,b] upper", &f.b_upper, t.lower, noise),
            Check::bound_unconditional("Bbar[a,b] lower", &f.bbar_lower, t.upper, noise),
        ];
        if rho == 0.0 {
            checks.push(Check::positive("Bbar(0,y) M < e^(x/2)", f.curious_margin));
        }
        Ok(checks)
    }));
    out
}

/// Argument at which the lower-tail recurrence bound is checked for sharpness.
pub const BETA_SHARP_Y_LOW: f64 = 1e-4;
/// Argument at which the upper-tail recurrence bound is checked for sharpness.
pub const BETA_SHARP_Y_HIGH: f64 = 1.0 - 1e-4;

fn beta_sharpness(axes: &[(&'static str, Vec<f64>)], cfg: &EvalConfig, noise: f64) -> Vec<SharpnessCheck> {
    let get = |n: &str| axes.iter().find(|a| a.0 == n).map(|a| a.1.clone()).unwrap_or_default();
    let mut jobs = vec![];
    for &a in &get("a") {
        for &b in &get("b") {
            for &x in &get("x") {
                jobs.push((a, b, x));
            }
        }
    }
    jobs.par_iter()
        .flat_map_iter(|&(a, b, x)| {
            let low = [("a", a), ("b", b), ("x", x), ("y", BETA_SHARP_Y_LOW)];
            let high = [("a", a), ("b", b), ("x", x), ("y", BETA_SHARP_Y_HIGH)];
            let l_label = "B-side recurrence bound as y -> 0";
            let h_label = "Bbar-side recurrence bound as y -> 1";
            let eval = |y: f64, upper_tail: bool| -> Result<f64> {
                let p = BetaParams::new(a, b, x, y)?;
                let r = nb::recurrence_difference_bounds_beta(&p, cfg)?;
                let t = nb::beta_nc_cdf(&p, cfg)?;
                let (bound, target) = if upper_tail { (&r.bbar_upper, t.upper) } else { (&r.b_upper, t.lower) };
                if !bound.valid {
                    return Err(crate::Error::Domain("sharpness point outside the validity region".into()));
                }
                Ok(1.0 - target / bound.value)
            };
            [
                eval(BETA_SHARP_Y_LOW, false)
                    .map(|d| SharpnessCheck::new(l_label, &low, d, SHARPNESS_TOL, noise))
                    .unwrap_or_else(|_| SharpnessCheck::failed(l_label, &low, SHARPNESS_TOL)),
                eval(BETA_SHARP_Y_HIGH, true)
                    .map(|d| SharpnessCheck::new(h_label, &high, d, SHARPNESS_TOL, noise))
                    .unwrap_or_else(|_| SharpnessCheck::failed(h_label, &high, SHARPNESS_TOL)),
            ]
        })
        .collect()
}

// ---------------------------------------------------------------- Kummer

const KUMMER_SHAPES: [f64; 7] = [0.25, 0.5, 1.0, 2.0, 3.5, 6.0, 10.0];
const KUMMER_Z: [f64; 15] = [0.01, 0.05, 0.1, 0.3, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 20.0, 35.0, 60.0, 100.0];

fn kummer_families(opts: &SweepOptions) -> Vec<Family<'static>> {
    let cfg = opts.cfg;
    let shapes = dense(opts, &KUMMER_SHAPES, &[0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.5, 6.0, 10.0, 20.0]);
    let zs = dense(opts, &KUMMER_Z, &geometric(1e-3, 150.0, 40));
    let axes = vec![("a", shapes.clone()), ("b", shapes), ("z", zs)];
    let mut out = vec![];

    out.push(Family::new("kummer.sandwich", axes.clone(), move |p| {
        let (a, b, z) = (p.get("a"), p.get("b"), p.get("z"));
        let d = ratio_h_diag(a, b, z, &cfg)?;
        Ok(if a > b {
            vec![
                Check::positive("D(a,b,z) < (a/b)h", (d.g - d.d_lower) / d.g),
                Check::positive("(a/b)h < D(a,b-1,z)", (d.d_upper - d.g) / d.g),
            ]
        } else if a < b {
            vec![Check::positive("(a/b)h < D(a,b,z)", (d.d_lower - d.g) / d.g)]
        } else {
            vec![Check::residual("h = 1", d.h - 1.0, ORDERING_NOISE)]
        })
    }));

    out.push(
        Family::new("kummer.shifted-ratio", axes.clone(), move |p| {
            let (a, b, z) = (p.get("a"), p.get("b"), p.get("z"));
            let (r, l) = shifted_ratio_bound(a, b, z, &cfg)?;
            Ok(vec![Check::positive("M(a+1,b,z)/M(a,b,z) < lambda_plus", (l - r) / l)])
        })
        .with_sharpness(move || kummer_sharpness(&cfg)),
    );

    let zgrid = geometric(0.01, 100.0, 50);
    let pair_axes: Vec<_> = axes.into_iter().filter(|a| a.0 != "z").collect();
    out.push(Family::new("kummer.monotone", pair_axes, move |p| {
        let (a, b) = (p.get("a"), p.get("b"));
        let diags = zgrid.iter().map(|&z| ratio_h_diag(a, b, z, &cfg)).collect::<Result<Vec<_>>>()?;
        let h: Vec<f64> = diags.iter().map(|d| d.h).collect();
        let zh: Vec<f64> = diags.iter().map(|d| d.zh).collect();
        let s: Vec<f64> = diags.iter().map(|d| d.shifted).collect();
        let trend = if a > b {
            Trend::Decreasing
        } else if a < b {
            Trend::Increasing
        } else {
            Trend::Constant
        };
        Ok(vec![
            Check::ordering("h monotone by sign(b-a)", &pairwise_ordering(&h, trend)),
            Check::ordering("z h increasing", &pairwise_ordering(&zh, Trend::Increasing)),
            Check::ordering("M(a+1,b)/M(a,b) increasing", &pairwise_ordering(&s, Trend::Increasing)),
        ])
    }));

    let ts = geometric(0.05, 100.0, 50);
    out.push(Family::new(
        "kummer.bessel-lemma",
        vec![("alpha", vec![0.25, 0.5, 1.0, 2.5]), ("mu", vec![0.1, 0.5, 1.0, 3.0, 10.0])],
        move |p| {
            let (alpha, mu) = (p.get("alpha"), p.get("mu"));
            let v = ts.iter().map(|&t| mq::bessel_power_ratio(alpha, mu, t, &cfg)).collect::<Result<Vec<_>>>()?;
            Ok(vec![Check::ordering("t^alpha I[mu+alpha]/I[mu] increasing", &pairwise_ordering(&v, Trend::Increasing))])
        },
    ));
    out
}

/// Large-`z` and small-`z` behaviour of the shifted ratio.
fn kummer_sharpness(cfg: &EvalConfig) -> Vec<SharpnessCheck> {
    let mut out = vec![];
    for &a in &[0.5, 1.0, 2.0] {
        for &b in &[0.5, 1.0, 2.0] {
            let z = 150.0;
            let pt = [("a", a), ("b", b), ("z", z)];
            let label = "M(a+1,b,z)/M(a,b,z) / (z/a) -> 1 as z grows";
            out.push(match shifted_ratio_bound(a, b, z, cfg) {
                Ok((r, _)) => SharpnessCheck::new(label, &pt, (r * a / z - 1.0).abs(), 0.05, 0.0),
                Err(_) => SharpnessCheck::failed(label, &pt, 0.05),
            });
            let z = 1e-6;
            let pt = [("a", a), ("b", b), ("z", z)];
            let label = "M(a+1,b,z)/M(a,b,z) has slope 1/b at z = 0";
            out.push(match shifted_ratio_bound(a, b, z, cfg) {
                Ok((r, _)) => SharpnessCheck::new(label, &pt, ((r - 1.0) / z * b - 1.0).abs(), 1e-3, 0.0),
                Err(_) => SharpnessCheck::failed(label, &pt, 1e-3),
            });
        }
    }
    out
}

// ---------------------------------------------------------------- quantile

/// Shapes and probabilities of the quantile ladder.
pub const QUANTILE_SHAPES: [f64; 5] = [0.7, 1.0, 2.0, 5.0, 10.0];
pub const QUANTILE_BETAS: [f64; 5] = [1e-10, 1e-8, 1e-6, 1e-4, 1e-2];

fn quantile_families(opts: &SweepOptions) -> Vec<Family<'static>> {
    let cfg = opts.cfg;
    let shapes = QUANTILE_SHAPES.to_vec();
    let betas = dense(opts, &QUANTILE_BETAS, &[1e-12, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2]);
    let mut out = vec![];

    out.push(Family::new(
        "quantile.bracket",
        vec![("a", shapes.clone()), ("b", shapes.clone()), ("beta", betas.clone())],
        move |p| {
            let (a, b, beta) = (p.get("a"), p.get("b"), p.get("beta"));
            let br = match quantile::beta_quantile_bracket(a, b, beta, &cfg) {
                Ok(br) if br.converged => br,
                Ok(_) | Err(crate::Error::BracketUnavailable(_)) => return Ok(vec![]),
                Err(e) => return Err(e),
            };
            let lo = central_beta_tails(a, b, br.y_l, &cfg)?.lower;
            let hi = central_beta_tails(a, b, br.y_u, &cfg)?.lower;
            let y = quantile::beta_quantile_in(a, b, beta, (br.y_l, br.y_u))?;
            let at = central_beta_tails(a, b, y, &cfg)?.lower;
            Ok(vec![
                Check::margin("I(y_l) < beta", (beta - lo) / beta, 1e-12),
                Check::margin("beta < I(y_u)", (hi - beta) / beta, 1e-12),
                Check::residual("|I(y) - beta| / beta", (at - beta) / beta, 1e-12),
                Check::margin("y in [y_l, y_u]", (y - br.y_l).min(br.y_u - y), 0.0),
            ])
        },
    ));

    out.push(Family::new("quantile.width", vec![("a", shapes.clone()), ("b", shapes.clone())], move |p| {
        let (a, b) = (p.get("a"), p.get("b"));
        // relative width over the ladder, from the smallest beta up
        let mut widths = vec![];
        for &beta in &betas {
            let Ok(br) = quantile::beta_quantile_bracket(a, b, beta, &cfg) else { continue };
            if br.converged {
                let y = quantile::beta_quantile_in(a, b, beta, (br.y_l, br.y_u))?;
                widths.push((br.y_u - br.y_l) / y);
            }
        }
        if widths.len() < 2 {
            return Ok(vec![]);
        }
        Ok(vec![Check::ordering("width / y_beta shrinks as beta decreases", &pairwise_ordering(&widths, Trend::Increasing))])
    }));

    out.push(Family::new(
        "quantile.lower-map",
        vec![("a", shapes.clone()), ("b", shapes), ("beta", QUANTILE_BETAS.to_vec())],
        move |p| {
            let (a, b, beta) = (p.get("a"), p.get("b"), p.get("beta"));
            let br = match quantile::beta_quantile_bracket(a, b, beta, &cfg) {
                Ok(br) if br.converged => br,
                _ => return Ok(vec![]),
            };
            Ok(lower_map_checks(a, b, beta, br.y_l, br.iterations_l))
        },
    ));
    out
}

/// Iterates of the lower map from 0 must approach the fixed point `fixed` at
/// every step, and must be nondecreasing where the map is increasing.
fn lower_map_checks(a: f64, b: f64, beta: f64, fixed: f64, steps: usize) -> Vec<Check> {
    let mut ys = vec![0.0];
    for _ in 0..steps {
        ys.push(quantile::lower_map(a, b, beta, *ys.last().unwrap()));
    }
    // d/dy ln h = (b/(1-y) - (a+b)/(a-(a+b)y)) / a, evaluated along the path
    let hi = ys.iter().cloned().fold(0.0, f64::max);
    let increasing = (0..=10).all(|i| {
        let y = hi * i as f64 / 10.0;
        b / (1.0 - y) - (a + b) / (a - (a + b) * y) > 0.0
    });
    let slack = 1e-12 * fixed;
    let mut approach = f64::INFINITY;
    let mut monotone = f64::INFINITY;
    for w in ys.windows(2) {
        approach = approach.min(((w[0] - fixed).abs() - (w[1] - fixed).abs() + slack) / fixed);
        monotone = monotone.min((w[1] - w[0]) / fixed);
    }
    let mut checks = vec![Check::margin("iterates approach the fixed point", approach, 0.0)];
    if increasing {
        checks.push(Check::margin("iterates nondecreasing", monotone, 1e-12));
    }
    checks
}
