//! `cdfbounds`: evaluate noncentral gamma/beta distributions, compute bounds,
//! run verification sweeps and bracket small central beta quantiles.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use cdf_bounds::beta::{self as nb, BetaParams};
use cdf_bounds::kummer_ratios::ratio_h_diag;
use cdf_bounds::marcum::{self as mq, GammaParams};
use cdf_bounds::quantile;
use cdf_bounds::specfun::central_beta_tails;
use cdf_bounds::verify::{self, GridSize, Suite, SweepOptions};
use cdf_bounds::{BoundValue, EvalConfig, ValidityMode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "cdfbounds", version, about = "Noncentral gamma/beta distributions and their sharp bounds")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Relative tolerance for series truncation
    #[arg(long, global = true, default_value_t = 1e-12)]
    rel_tol: f64,
    #[arg(long, global = true, default_value_t = 10_000)]
    max_terms: usize,
    #[arg(long, global = true, default_value = "proven")]
    validity_mode: ValidityMode,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate P/Q or B/Bbar
    Eval(EvalArgs),
    /// Compute one family of bounds
    Bound(BoundArgs),
    /// Run verification sweeps
    Verify(VerifyArgs),
    /// Bracket and invert a small central beta quantile
    Quantile(QuantileArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Marcum,
    BetaNc,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    dist: Dist,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    x: f64,
    #[arg(long)]
    y: f64,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    /// sqrt(2x), an alternative to --x
    #[arg(long)]
    aa: Option<f64>,
    /// sqrt(2y), an alternative to --y
    #[arg(long)]
    bb: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    z: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    /// Number of terms for the series families
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Also report the reference value and the margin
    #[arg(long)]
    with_oracle: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value = "default")]
    grid: GridSize,
    /// Relative noise budget for bound checks
    #[arg(long, default_value_t = verify::DEFAULT_NOISE)]
    noise: f64,
    /// Override a grid axis, e.g. `--axis y=0.1,0.5,2` (an empty list empties the grid)
    #[arg(long = "axis", value_parser = parse_axis)]
    axes: Vec<(String, Vec<f64>)>,
}

#[derive(Args)]
struct QuantileArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    beta: f64,
}

fn parse_axis(s: &str) -> Result<(String, Vec<f64>), String> {
    let (name, values) = s.split_once('=').ok_or_else(|| format!("expected NAME=v1,v2,..., got `{s}`"))?;
    let values = values
        .split(',')
        .filter(|v| !v.trim().is_empty())
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad value `{v}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((name.trim().to_string(), values))
}

enum Failure {
    Usage(String),
    Numeric(String),
    /// Output already written; only the exit code remains.
    Silent(u8),
}

impl From<cdf_bounds::Error> for Failure {
    fn from(e: cdf_bounds::Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Numeric(format!("csv error: {e}"))
    }
}

type Outcome = Result<(), Failure>;

#[derive(Serialize)]
struct Row {
    family: String,
    target: String,
    side: String,
    value: f64,
    oracle: Option<f64>,
    margin: Option<f64>,
    valid: bool,
}

impl Row {
    fn value(family: &str, target: &str, value: f64) -> Row {
        Row {
            family: family.into(),
            target: target.into(),
            side: "value".into(),
            value,
            oracle: None,
            margin: None,
            valid: true,
        }
    }

    fn bound(family: &str, b: &BoundValue, oracle: Option<f64>) -> Row {
        Row {
            family: family.into(),
            target: b.target.into(),
            side: b.side.to_string(),
            value: b.value,
            oracle,
            margin: oracle.map(|o| b.relative_margin(o)),
            valid: b.valid,
        }
    }
}

struct Output {
    sink: Box<dyn Write>,
    format: Format,
}

impl Output {
    fn open(common: &Common) -> std::io::Result<Output> {
        let sink: Box<dyn Write> = match &common.out {
            Some(p) => Box::new(std::fs::File::create(p)?),
            None => Box::new(std::io::stdout().lock()),
        };
        Ok(Output { sink, format: common.format })
    }

    fn rows(&mut self, cfg: &EvalConfig, rows: &[Row]) -> Outcome {
        match self.format {
            Format::Csv => {
                writeln!(
                    self.sink,
                    "# rel_tol={} max_terms={} validity_mode={}",
                    cfg.rel_tol(),
                    cfg.max_terms(),
                    cfg.validity_mode()
                )?;
                let mut w = csv::Writer::from_writer(&mut self.sink);
                for r in rows {
                    w.serialize(r)?;
                }
                w.flush()?;
            }
            Format::Json => {
                let doc = serde_json::json!({ "config": cfg, "rows": rows });
                serde_json::to_writer_pretty(&mut self.sink, &doc).map_err(std::io::Error::from)?;
                writeln!(self.sink)?;
            }
        }
        Ok(())
    }
}

fn need(v: Option<f64>, flag: &str, family: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("`{family}` needs --{flag}")))
}

fn cmd_eval(args: &EvalArgs, cfg: &EvalConfig) -> Result<Vec<Row>, Failure> {
    Ok(match args.dist {
        Dist::Marcum => {
            let mu = need(args.mu, "mu", "marcum")?;
            let t = mq::marcum_pq(&GammaParams::new(mu, args.x, args.y)?, cfg)?;
            vec![Row::value("marcum", "P", t.lower), Row::value("marcum", "Q", t.upper)]
        }
        Dist::BetaNc => {
            let (a, b) = (need(args.a, "a", "beta-nc")?, need(args.b, "b", "beta-nc")?);
            let t = nb::beta_nc_cdf(&BetaParams::new(a, b, args.x, args.y)?, cfg)?;
            vec![Row::value("beta-nc", "B", t.lower), Row::value("beta-nc", "Bbar", t.upper)]
        }
    })
}

fn gamma_params(args: &BoundArgs, family: &str, mu: f64) -> Result<GammaParams, Failure> {
    let x = match (args.x, args.aa) {
        (Some(x), _) => x,
        (None, Some(aa)) => 0.5 * aa * aa,
        _ => return Err(Failure::Usage(format!("`{family}` needs --x or --aa"))),
    };
    let y = match (args.y, args.bb) {
        (Some(y), _) => y,
        (None, Some(bb)) => 0.5 * bb * bb,
        _ => return Err(Failure::Usage(format!("`{family}` needs --y or --bb"))),
    };
    Ok(GammaParams::new(mu, x, y)?)
}

fn beta_params(args: &BoundArgs, family: &str) -> Result<BetaParams, Failure> {
    Ok(BetaParams::new(
        need(args.a, "a", family)?,
        need(args.b, "b", family)?,
        need(args.x, "x", family)?,
        need(args.y, "y", family)?,
    )?)
}

const FAMILIES: &[&str] = &[
    "c-ratio",
    "recurrence",
    "order-shift",
    "erf",
    "incgamma",
    "series",
    "beta-recurrence",
    "beta-ratio",
    "beta-series",
    "central-factor",
    "kummer-sandwich",
    "beta-central-uu",
    "beta-central-rela",
    "beta-central-ee",
];

fn cmd_bound(args: &BoundArgs, cfg: &EvalConfig) -> Result<Vec<Row>, Failure> {
    let fam = args.family.as_str();
    let o = args.with_oracle;
    let pq = |mu: f64, p: &GammaParams| mq::marcum_pq(&p.with_mu(mu)?, cfg);
    let bnc = |p: &BetaParams| nb::beta_nc_cdf(p, cfg);
    let row = |b: &BoundValue, oracle: f64| Row::bound(fam, b, o.then_some(oracle));
    let rows = match fam {
        "c-ratio" => {
            let p = gamma_params(args, fam, need(args.mu, "mu", fam)?)?;
            let (up, lo) = mq::ratio_bound_c(&p, cfg)?;
            let (a, b) = if o { (pq(p.mu, &p)?, pq(p.mu + 1.0, &p)?) } else { Default::default() };
            vec![row(&up, b.lower / a.lower), row(&lo, b.upper / a.upper)]
        }
        "recurrence" => {
            let p = gamma_params(args, fam, need(args.mu, "mu", fam)?)?;
            let r = mq::recurrence_difference_bounds(&p, cfg)?;
            let (a, b) = if o { (pq(p.mu, &p)?, pq(p.mu + 1.0, &p)?) } else { Default::default() };
            vec![
                row(&r.p_upper, a.lower),
                row(&r.pnext_upper, b.lower),
                row(&r.q_upper, a.upper),
                row(&r.qnext_upper, b.upper),
            ]
        }
        "order-shift" => {
            let nu = need(args.nu, "nu", fam)?;
            let p = gamma_params(args, fam, need(args.mu, "mu", fam)?)?;
            let (up, lo) = mq::order_shift_bound(nu, p.mu, &p, cfg)?;
            let t = if o { pq(nu, &p)? } else { Default::default() };
            vec![row(&up, t.lower), row(&lo, t.upper)]
        }
        "erf" => {
            let nu = need(args.nu, "nu", fam)?;
            let p = gamma_params(args, fam, nu)?;
            let s = mq::erf_bounds(nu, &p, cfg)?;
            let q = if o { pq(nu, &p)?.upper } else { 0.0 };
            vec![row(&s.b1, q), row(&s.b2, q), row(&s.l1, q), row(&s.l2, q)]
        }
        "incgamma" => {
            let nu = need(args.nu, "nu", fam)?;
            let p = gamma_params(args, fam, nu)?;
            let (up, lo) = mq::incgamma_bounds(nu, &p, args.rho, cfg)?;
            let t = if o { pq(nu, &p)? } else { Default::default() };
            vec![row(&up, t.lower), row(&lo, t.upper)]
        }
        "series" => {
            let p = gamma_params(args, fam, need(args.mu, "mu", fam)?)?;
            let t = if o { pq(p.mu, &p)? } else { Default::default() };
            vec![
                row(&mq::series_lower_bound_p(&p, args.n, cfg)?, t.lower),
                row(&mq::series_lower_bound_q(&p, cfg)?, t.upper),
            ]
        }
        "beta-recurrence" => {
            let p = beta_params(args, fam)?;
            let r = nb::recurrence_difference_bounds_beta(&p, cfg)?;
            let (a, b) = if o { (bnc(&p)?, bnc(&p.with_a(p.a + 1.0)?)?) } else { Default::default() };
            vec![
                row(&r.b_upper, a.lower),
                row(&r.bnext_upper, b.lower),
                row(&r.bbar_upper, a.upper),
                row(&r.bbarnext_upper, b.upper),
            ]
        }
        "beta-ratio" => {
            let p = beta_params(args, fam)?;
            let (k, c) = nb::ratio_bound_a(&p, cfg)?;
            let r = if o { bnc(&p.with_a(p.a + 1.0)?)?.lower / bnc(&p)?.lower } else { 0.0 };
            vec![row(&k, r), row(&c, r)]
        }
        "beta-series" => {
            let p = beta_params(args, fam)?;
            let t = if o { bnc(&p)? } else { Default::default() };
            let mut rows = vec![row(&nb::series_lower_bound_beta(&p, args.n, cfg)?, t.lower)];
            if p.a > 1.0 {
                rows.push(row(&nb::series_complement_lower_beta(&p, cfg)?, t.upper));
            }
            rows
        }
        "central-factor" => {
            let p = beta_params(args, fam)?;
            let f = nb::central_factor_bounds(&p, args.rho, cfg)?;
            let t = if o { bnc(&p)? } else { Default::default() };
            vec![row(&f.b_upper, t.lower), row(&f.bbar_lower, t.upper)]
        }
        "kummer-sandwich" => {
            let (a, b, z) = (need(args.a, "a", fam)?, need(args.b, "b", fam)?, need(args.z, "z", fam)?);
            let g = if o { ratio_h_diag(a, b, z, cfg)?.g } else { 0.0 };
            cdf_bounds::kummer_ratios::g_bounds(a, b, z)?.iter().map(|bv| row(bv, g)).collect()
        }
        "beta-central-uu" | "beta-central-rela" | "beta-central-ee" => {
            let (a, b, y) = (need(args.a, "a", fam)?, need(args.b, "b", fam)?, need(args.y, "y", fam)?);
            let t = if o { central_beta_tails(a, b, y, cfg)? } else { Default::default() };
            match fam {
                "beta-central-uu" => vec![row(&nb::central_uu(a, b, y)?, t.lower)],
                "beta-central-rela" => vec![row(&nb::central_rela(a, b, y)?, t.upper)],
                _ => vec![row(&nb::central_ee(a, b, y)?, t.lower)],
            }
        }
        other => {
            return Err(Failure::Usage(format!("unknown family `{other}`; expected one of: {}", FAMILIES.join(", "))))
        }
    };
    Ok(rows)
}

fn cmd_verify(args: &VerifyArgs, cfg: &EvalConfig, out: &mut Output) -> Outcome {
    let opts = SweepOptions {
        grid: args.grid,
        overrides: args.axes.iter().cloned().collect(),
        noise: args.noise,
        cfg: *cfg,
    };
    let reports = verify::run_suite(args.suite, &opts);
    match out.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out.sink, &reports).map_err(std::io::Error::from)?;
            writeln!(out.sink)?;
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Line<'a> {
                family: &'a str,
                cells_total: usize,
                cells_valid: usize,
                cells_skipped: usize,
                violations: usize,
                min_margin: Option<f64>,
                sharpness_checks: usize,
                sharpness_failed: usize,
                informational: bool,
                passed: bool,
            }
            let mut w = csv::Writer::from_writer(&mut out.sink);
            for r in &reports {
                w.serialize(Line {
                    family: &r.family,
                    cells_total: r.cells_total,
                    cells_valid: r.cells_valid,
                    cells_skipped: r.cells_skipped,
                    violations: r.violations,
                    min_margin: r.min_margin,
                    sharpness_checks: r.sharpness_checks.len(),
                    sharpness_failed: r.sharpness_checks.iter().filter(|s| !s.passed).count(),
                    informational: r.informational,
                    passed: r.passed,
                })?;
            }
            w.flush()?;
        }
    }
    out.sink.flush()?;
    if reports.iter().any(|r| r.cells_total == 0) {
        eprintln!("error: empty grid (cells_total = 0); check the --axis overrides");
        return Err(Failure::Silent(2));
    }
    if !verify::suite_passed(&reports) {
        for r in reports.iter().filter(|r| !r.informational && !r.passed) {
            eprintln!("failed: {} ({} violations)", r.family, r.violations);
        }
        return Err(Failure::Silent(1));
    }
    Ok(())
}

fn cmd_quantile(args: &QuantileArgs, cfg: &EvalConfig, out: &mut Output) -> Outcome {
    let br = quantile::beta_quantile_bracket(args.a, args.b, args.beta, cfg).map_err(|e| match e {
        cdf_bounds::Error::BracketUnavailable(m) => Failure::Numeric(format!(
            "beta = {} is too large for the small-probability estimator: {m}",
            args.beta
        )),
        other => other.into(),
    })?;
    if !br.converged {
        return Err(Failure::Numeric("bracket iteration did not converge".into()));
    }
    let y = quantile::beta_quantile_in(args.a, args.b, args.beta, (br.y_l, br.y_u))?;
    #[derive(Serialize)]
    struct Line {
        a: f64,
        b: f64,
        beta: f64,
        y_l: f64,
        y_beta: f64,
        y_u: f64,
        iterations_l: usize,
        iterations_u: usize,
    }
    let line = Line {
        a: args.a,
        b: args.b,
        beta: args.beta,
        y_l: br.y_l,
        y_beta: y,
        y_u: br.y_u,
        iterations_l: br.iterations_l,
        iterations_u: br.iterations_u,
    };
    match out.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out.sink);
            w.serialize(&line)?;
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out.sink, &line).map_err(std::io::Error::from)?;
            writeln!(out.sink)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let c = &cli.common;
    let cfg = EvalConfig::new(c.rel_tol, c.max_terms, c.validity_mode)?;
    let mut out = Output::open(c)?;
    match &cli.cmd {
        Cmd::Eval(a) => {
            let rows = cmd_eval(a, &cfg)?;
            out.rows(&cfg, &rows)
        }
        Cmd::Bound(a) => {
            let rows = cmd_bound(a, &cfg)?;
            out.rows(&cfg, &rows)
        }
        Cmd::Verify(a) => cmd_verify(a, &cfg, &mut out),
        Cmd::Quantile(a) => cmd_quantile(a, &cfg, &mut out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Silent(code)) => ExitCode::from(code),
    }
}
