//! Command-line surface: run configuration, experiment drivers and the
//! CSV/JSON table format.
//!
//! Every command produces a [`Table`]: an anchor naming what the numbers
//! reproduce, a header, rows, and summary key/value pairs. CSV output is
//!
//! ```text
//! # anchor=<name>
//! col1,col2,...
//! ...
//! # summary.<key>=<value>
//! ```
//!
//! and JSON mirrors it as `{anchor, columns, rows, summary}`.

pub mod checks;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analytic::{eval_series, eval_series_capped, Abscissa, Method};
use crate::brjuno::{brjuno_report, construct_extreme_number, divergence_scan, ExtremeKind};
use crate::contfrac::{parse_real, rational_f64, RealSpec};
use crate::error::{domain, Error, Result};
use crate::funceq::{eval_f2g2_cf, local_expansion, LocalExpansion};

pub use checks::{run_verify_suite, CheckResult, Fault, VerifyOptions, VerifyReport};

// ---------------------------------------------------------------------------
// RunConfig

/// Summation route for `eval`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum CliMethod {
    Naive,
    Hyperbola,
    /// Gauss-map iteration (k = 2 only).
    Cf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Subcommand)]
pub enum Command {
    /// F_k and G_k at x with certificates.
    Eval,
    /// Continued-fraction orbit of x: quotients, convergents, β, γ.
    Cf,
    /// Brjuno-type sums, (∗)/(∗∗) sequences and κ_n.
    Brjuno,
    /// Difference quotients of F₂ and G₂ at a rational over h = 2^−e.
    ScanRational {
        /// Smallest exponent e of the grid.
        #[arg(long, default_value_t = 10)]
        h_exp_min: i32,
        /// Largest exponent e of the grid.
        #[arg(long, default_value_t = 26)]
        h_exp_max: i32,
    },
    /// Difference quotients of F₂ along the intervals of an irrational.
    ScanIrrational {
        /// Odd depths n; defaults to every odd n the list allows.
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<usize>,
    },
    /// |F₂(x) − F₂(y)| against |x−y| log(1/|x−y|) + |x−y| at random y.
    Moc {
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
    },
    /// Run the check battery; exit status 0 iff every check passes.
    Verify,
}

/// Parsed command line.
#[derive(Clone, Debug, Parser)]
#[command(name = "fseries", version, about = "Divisor-sum Fourier series: evaluation, functional equations, continued-fraction diagnostics")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// rational:<p>/<q>, cf:[a1,a2,...] or decimal:<digits>.
    #[arg(long, global = true)]
    pub x: Option<RealSpec>,
    /// Build x instead: golden, periodic:<a,b,...>, liouville:<rate>, star_violator.
    #[arg(long, global = true)]
    pub construct: Option<ExtremeKind>,
    #[arg(long, global = true, default_value_t = 2)]
    pub k: u32,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub eps: f64,
    #[arg(long, global = true, default_value_t = 40)]
    pub depth: usize,
    #[arg(long, global = true, value_enum, default_value_t = CliMethod::Hyperbola)]
    pub method: CliMethod,
    #[arg(long = "out", global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub output: OutputFormat,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Restrict `verify` to one module.
    #[arg(long, global = true)]
    pub only: Option<String>,
    /// Test hook for `verify`.
    #[arg(long, global = true, hide = true)]
    pub inject_fault: Option<Fault>,
}

// ---------------------------------------------------------------------------
// Tables

/// A self-describing result table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub anchor: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
}

/// f64 as a JSON value; non-finite values become strings.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(format!("{v}"))
    }
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Table {
    pub fn new(anchor: &str, columns: &[&str]) -> Self {
        Self {
            anchor: anchor.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, v: Value) {
        self.summary.push((key.into(), v));
    }

    pub fn summary_value(&self, key: &str) -> Option<&Value> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.columns).unwrap();
        for r in &self.rows {
            w.write_record(r.iter().map(cell)).unwrap();
        }
        let body = String::from_utf8(w.into_inner().unwrap()).unwrap();
        let mut out = format!("# anchor={}\n{body}", self.anchor);
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary.{k}={}\n", cell(v)));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect::<Map<_, _>>()))
            .collect();
        let summary: Map<String, Value> = self.summary.iter().cloned().collect();
        let v = json!({"anchor": self.anchor, "columns": self.columns, "rows": rows, "summary": summary});
        serde_json::to_string_pretty(&v).unwrap() + "\n"
    }

    pub fn render(&self, fmt: OutputFormat) -> String {
        match fmt {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Rendered output and the process exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

fn big_cell(v: &BigInt) -> Value {
    if v.bits() > 200 {
        Value::String(format!("<{} bits>", v.bits()))
    } else {
        Value::String(v.to_string())
    }
}

// ---------------------------------------------------------------------------
// Dispatch

/// The real the command operates on: `--construct` builds a list of
/// `len` quotients, otherwise `--x` is required.
fn resolve_x(cfg: &RunConfig, len: usize) -> Result<(RealSpec, Vec<usize>)> {
    match (&cfg.x, &cfg.construct) {
        (Some(_), Some(_)) => domain("give either --x or --construct, not both"),
        (Some(x), None) => Ok((x.clone(), Vec::new())),
        (None, Some(kind)) => {
            let e = construct_extreme_number(kind, len)?;
            Ok((e.spec, e.saturated))
        }
        (None, None) => domain("this command needs --x or --construct"),
    }
}

/// Execute a parsed command line.
pub fn run(cfg: &RunConfig) -> Result<Output> {
    let table = match &cfg.command {
        Command::Eval => eval_table(cfg)?,
        Command::Cf => cf_table(cfg)?,
        Command::Brjuno => brjuno_table(cfg)?,
        Command::ScanRational { h_exp_min, h_exp_max } => {
            let (x, _) = resolve_x(cfg, cfg.depth)?;
            let r = parse_real(&x)?;
            let v = r.value();
            let (p, q) = (v.numer().to_i64(), v.denom().to_i64());
            let (Some(p), Some(q)) = (p, q) else {
                return domain("scan-rational needs a rational with 64-bit numerator and denominator");
            };
            if h_exp_min > h_exp_max || *h_exp_min < 1 {
                return domain("need 1 ≤ h-exp-min ≤ h-exp-max");
            }
            let grid: Vec<f64> = (*h_exp_min..=*h_exp_max).map(|e| 2f64.powi(-e)).collect();
            run_scan_rational(p, q, &grid, cfg.eps.min(1e-12))?.table()
        }
        Command::ScanIrrational { n_list } => {
            let (x, saturated) = resolve_x(cfg, cfg.depth)?;
            scan_irrational_table(&x, n_list, &saturated)?
        }
        Command::Moc { pairs } => {
            let (x, _) = resolve_x(cfg, cfg.depth)?;
            run_moc_sampler(&x, *pairs, cfg.seed, MOC_EPS)?.table()
        }
        Command::Verify => {
            let opts = VerifyOptions { seed: cfg.seed, only: cfg.only.clone(), fault: cfg.inject_fault };
            let report = run_verify_suite(&opts)?;
            let text = match cfg.output {
                OutputFormat::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
                OutputFormat::Csv => report.table().to_csv(),
            };
            return Ok(Output { text, exit_code: if report.passed { 0 } else { 1 } });
        }
    };
    Ok(Output { text: table.render(cfg.output), exit_code: 0 })
}

fn eval_table(cfg: &RunConfig) -> Result<Table> {
    let (x, _) = resolve_x(cfg, cfg.depth)?;
    let r = parse_real(&x)?;
    let mut t = Table::new(
        "divisor-sum-fourier-series-values",
        &["x", "k", "method", "F", "F_certificate", "G", "G_certificate", "terms"],
    );
    let (f, g) = match cfg.method {
        CliMethod::Cf => {
            if cfg.k != 2 {
                return domain("the cf method evaluates k = 2 only");
            }
            let (f, g, _) = eval_f2g2_cf(&x, cfg.eps, cfg.depth.max(1))?;
            (f, g)
        }
        m => {
            let method = if m == CliMethod::Naive { Method::Naive } else { Method::Hyperbola };
            eval_series(Abscissa::from_rational(r.value()), cfg.k, cfg.eps, method)?
        }
    };
    let method = serde_json::to_value(cfg.method).unwrap();
    t.push(vec![
        Value::String(x.to_string()),
        json!(cfg.k),
        method,
        num(f.value),
        num(f.error_bound),
        num(g.value),
        num(g.error_bound),
        json!(f.terms_used.max(g.terms_used)),
    ]);
    Ok(t)
}

fn cf_table(cfg: &RunConfig) -> Result<Table> {
    let (x, _) = resolve_x(cfg, cfg.depth)?;
    let r = parse_real(&x)?;
    let v = r.value();
    if !v.is_positive() || v >= &BigRational::one() {
        return domain("x must lie in (0, 1)");
    }
    let o = r.orbit(cfg.depth)?;
    let mut t = Table::new(
        "gauss-map-orbit-and-convergents",
        &["k", "a_k", "p_k", "q_k", "T_k", "beta_k", "gamma_k"],
    );
    for k in 0..=o.depth() {
        let a = if k == 0 { Value::Null } else { big_cell(o.a(k)) };
        t.push(vec![
            json!(k),
            a,
            big_cell(o.p(k as i64)),
            big_cell(o.q(k as i64)),
            num(o.t_f64(k)),
            num(o.beta_f64(k as i64)),
            num(o.gamma(k)),
        ]);
    }
    t.note("x", Value::String(x.to_string()));
    t.note("depth", json!(o.depth()));
    t.note("terminated", json!(o.terminated()));
    t.note("certified_depth", json!(o.certified_depth()));
    Ok(t)
}

fn brjuno_table(cfg: &RunConfig) -> Result<Table> {
    let (x, saturated) = resolve_x(cfg, cfg.depth + 4)?;
    let r = brjuno_report(&x, cfg.depth)?;
    let mut t = Table::new(
        "brjuno-type-sums-and-approximation-exponents",
        &[
            "n",
            "square_increment",
            "sum_k1",
            "sum_k2",
            "sum_k4",
            "sum_k6",
            "beta_gamma_sum",
            "bracket_upper_ok",
            "bracket_lower_ok",
            "star_sequence",
            "starstar_sequence",
            "kappa",
            "kappa_tail_sup",
        ],
    );
    for n in 0..=r.depth {
        let s = |k: u32| num(r.brjuno_sums[&k][n]);
        t.push(vec![
            json!(n),
            num(r.increments[n]),
            s(1),
            s(2),
            s(4),
            s(6),
            num(r.beta_gamma_sum[n]),
            json!(r.bracket_ok[n].0),
            json!(r.bracket_ok[n].1),
            num(r.star_sequence[n]),
            num(r.starstar_sequence[n]),
            opt(r.kappa[n]),
            opt(r.kappa_tail_sup[n]),
        ]);
    }
    t.note("x", Value::String(x.to_string()));
    t.note("verdict", Value::String(r.verdict.to_string()));
    t.note("square_brjuno_sum", num(r.square_sum()));
    t.note("last_increment", num(r.last_increment()));
    t.note("star_ok", json!(r.star_ok));
    t.note("starstar_ok", json!(r.starstar_ok));
    t.note("mu_est", num(r.mu_est));
    t.note("nu_est", num(r.nu_est));
    t.note("saturated_at", r.saturated_at.map_or(Value::Null, |v| json!(v)));
    t.note("constructed_saturated_indices", json!(saturated));
    t.note("brackets_hold", json!(r.brackets_hold()));
    Ok(t)
}

fn scan_irrational_table(x: &RealSpec, n_list: &[usize], saturated: &[usize]) -> Result<Table> {
    let n_list: Vec<usize> = if n_list.is_empty() {
        let len = match x {
            RealSpec::Quotients(a) => a.len(),
            _ => parse_real(x)?.orbit(10_000)?.depth(),
        };
        (1..len.saturating_sub(1)).step_by(2).collect()
    } else {
        n_list.to_vec()
    };
    let rows = divergence_scan(x, &n_list)?;
    let mut t = Table::new(
        "f2-difference-quotients-along-shrinking-intervals",
        &["n", "h", "ln_h", "lower_ok", "upper_ok", "membership_ok", "contains_next", "dq_f2", "dq_certificate", "note"],
    );
    for r in &rows {
        t.push(vec![
            json!(r.n),
            num(r.h),
            num(r.ln_h),
            json!(r.lower_ok),
            json!(r.upper_ok),
            json!(r.membership_ok),
            json!(r.contains_next),
            opt(r.dq),
            num(r.dq_error),
            Value::String(r.note.clone()),
        ]);
    }
    let dqs: Vec<f64> = rows.iter().filter_map(|r| r.dq).collect();
    t.note("x", Value::String(x.to_string()));
    t.note("all_brackets_ok", json!(rows.iter().all(|r| r.bracket_ok())));
    t.note("max_abs_dq", num(dqs.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
    t.note("resolved_rows", json!(dqs.len()));
    t.note("dq_increasing", json!(dqs.len() == rows.len() && dqs.windows(2).all(|w| w[1] > w[0])));
    t.note("constructed_saturated_indices", json!(saturated));
    Ok(t)
}

// ---------------------------------------------------------------------------
// Rational scan

/// One grid point of [`run_scan_rational`].
#[derive(Clone, Debug, Serialize)]
pub struct RationalScanRow {
    pub h: f64,
    pub dq_f2: f64,
    pub dq_g2_right: f64,
    pub dq_g2_left: f64,
    /// Certificate of each difference quotient.
    pub dq_error: f64,
}

/// Difference quotients at p/q with fitted and predicted local constants.
#[derive(Clone, Debug, Serialize)]
pub struct RationalScan {
    pub p: i64,
    pub q: i64,
    pub rows: Vec<RationalScanRow>,
    /// Least-squares slope of DQ_F2 against log(1/h).
    pub fitted_log_slope: f64,
    pub fitted_intercept: f64,
    /// Richardson extrapolation on the two smallest h.
    pub fitted_right_slope: f64,
    pub fitted_left_slope: f64,
    pub fitted_jump: f64,
    pub predicted: LocalExpansion,
}

impl RationalScan {
    pub fn log_slope_rel_error(&self) -> f64 {
        (self.fitted_log_slope - self.predicted.f2_log_coefficient).abs() / self.predicted.f2_log_coefficient
    }

    pub fn jump_rel_error(&self) -> f64 {
        (self.fitted_jump - self.predicted.jump).abs() / self.predicted.jump
    }

    pub fn right_slope_rel_error(&self) -> f64 {
        let p = self.predicted.g2_right_slope;
        (self.fitted_right_slope - p).abs() / p.abs().max(1.0)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(
            "one-sided-difference-quotients-at-a-rational",
            &["h", "log_inv_h", "dq_f2", "dq_g2_right", "dq_g2_left", "dq_certificate", "predicted_f2_log_part", "predicted_g2_right", "predicted_g2_left"],
        );
        let e = &self.predicted;
        for r in &self.rows {
            let l = (1.0 / r.h).ln();
            t.push(vec![
                num(r.h),
                num(l),
                num(r.dq_f2),
                num(r.dq_g2_right),
                num(r.dq_g2_left),
                num(r.dq_error),
                num(e.f2_log_coefficient * l),
                num(e.g2_right_slope),
                num(e.g2_left_slope),
            ]);
        }
        t.note("x", Value::String(format!("rational:{}/{}", self.p, self.q)));
        t.note("fitted_f2_log_slope", num(self.fitted_log_slope));
        t.note("predicted_f2_log_slope", num(e.f2_log_coefficient));
        t.note("fitted_g2_right_slope", num(self.fitted_right_slope));
        t.note("predicted_g2_right_slope", num(e.g2_right_slope));
        t.note("fitted_g2_left_slope", num(self.fitted_left_slope));
        t.note("predicted_g2_left_slope", num(e.g2_left_slope));
        t.note("fitted_jump", num(self.fitted_jump));
        t.note("predicted_jump", num(e.jump));
        t.note("log_slope_within_2pct", json!(self.log_slope_rel_error() < 0.02));
        t.note("jump_within_1pct", json!(self.jump_rel_error() < 0.01));
        t.note("right_slope_within_1pct", json!(self.right_slope_rel_error() < 0.01));
        t
    }
}

fn lstsq(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Scan F₂ and G₂ at p/q ± h over `h_grid` (positive, decreasing).
pub fn run_scan_rational(p: i64, q: i64, h_grid: &[f64], eps: f64) -> Result<RationalScan> {
    if q < 1 || num_integer::Integer::gcd(&p, &q) != 1 {
        return domain(format!("{p}/{q} is not a reduced fraction with q ≥ 1"));
    }
    if h_grid.len() < 2 || h_grid.iter().any(|&h| !(h > 0.0 && h < 0.5)) || h_grid.windows(2).any(|w| w[1] >= w[0]) {
        return domain("h grid must hold at least two decreasing values in (0, 1/2)");
    }
    let predicted = local_expansion(p, q, eps.max(1e-12))?;
    let x0 = BigRational::new(BigInt::from(p), BigInt::from(q));
    let at = |h: f64| -> Result<(f64, f64, f64)> {
        let y = &x0 + BigRational::from_float(h).unwrap();
        let (f, g) = eval_series(Abscissa::from_rational(&y), 2, eps, Method::Hyperbola)?;
        Ok((f.value, g.value, f.error_bound.max(g.error_bound)))
    };
    let (f0, g0, e0) = at(0.0)?;
    let mut rows = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        let (fr, gr, er) = at(h)?;
        let (_, gl, el) = at(-h)?;
        rows.push(RationalScanRow {
            h,
            dq_f2: (fr - f0) / h,
            dq_g2_right: (gr - g0) / h,
            dq_g2_left: (g0 - gl) / h,
            dq_error: (e0 + er.max(el)) / h,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (1.0 / r.h).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.dq_f2).collect();
    let (fitted_log_slope, fitted_intercept) = lstsq(&xs, &ys);
    let n = rows.len();
    let (a, b) = (&rows[n - 2], &rows[n - 1]);
    let rich = |da: f64, db: f64| {
        let r = a.h / b.h;
        (r * db - da) / (r - 1.0)
    };
    let fitted_right_slope = rich(a.dq_g2_right, b.dq_g2_right);
    let fitted_left_slope = rich(a.dq_g2_left, b.dq_g2_left);
    Ok(RationalScan {
        p,
        q,
        rows,
        fitted_log_slope,
        fitted_intercept,
        fitted_right_slope,
        fitted_left_slope,
        fitted_jump: fitted_left_slope - fitted_right_slope,
        predicted,
    })
}

// ---------------------------------------------------------------------------
// Modulus-of-continuity sampler

/// Tolerance of each F₂ evaluation in the sampler.
pub const MOC_EPS: f64 = 1e-11;
/// |x − y| = 10^−u with u uniform on this range.
pub const MOC_DECADES: (f64, f64) = (2.0, 8.0);

#[derive(Clone, Debug, Serialize)]
pub struct MocRow {
    pub index: usize,
    pub y: f64,
    pub delta: f64,
    pub abs_diff: f64,
    pub bound_ratio: f64,
    /// Median of the ratios of rows 0..=index.
    pub running_median: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MocSample {
    pub x: String,
    pub rows: Vec<MocRow>,
    pub skipped: usize,
    pub max_ratio: f64,
    pub median_ratio: f64,
    /// Largest ratio/running-median over the rows.
    pub max_over_running_median: f64,
    /// Max ratio with |x−y| in the widest and in the narrowest decade.
    pub first_decade_max: f64,
    pub last_decade_max: f64,
}

impl MocSample {
    pub fn all_finite(&self) -> bool {
        self.rows.iter().all(|r| r.bound_ratio.is_finite())
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(
            "f2-modulus-of-continuity-ratio",
            &["index", "y", "delta", "abs_diff", "bound_ratio", "running_median"],
        );
        for r in &self.rows {
            t.push(vec![json!(r.index), num(r.y), num(r.delta), num(r.abs_diff), num(r.bound_ratio), num(r.running_median)]);
        }
        t.note("x", Value::String(self.x.clone()));
        t.note("pairs", json!(self.rows.len()));
        t.note("skipped", json!(self.skipped));
        t.note("max_ratio", num(self.max_ratio));
        t.note("median_ratio", num(self.median_ratio));
        t.note("max_over_running_median", num(self.max_over_running_median));
        t.note("first_decade_max", num(self.first_decade_max));
        t.note("last_decade_max", num(self.last_decade_max));
        t.note("log_share_shrinks", json!(self.last_decade_max < self.first_decade_max));
        t
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Sample y around x and report |F₂(x) − F₂(y)| / (δ log(1/δ) + δ), δ = |x − y|.
pub fn run_moc_sampler(x: &RealSpec, pair_count: usize, seed: u64, eps: f64) -> Result<MocSample> {
    let xv = parse_real(x)?.value().clone();
    let f0 = eval_series_capped(Abscissa::from_rational(&xv), 2, eps, Method::Hyperbola, 0)?.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(pair_count);
    let mut sorted: Vec<f64> = Vec::with_capacity(pair_count);
    let mut skipped = 0;
    for index in 0..pair_count {
        let u: f64 = rng.gen_range(MOC_DECADES.0..MOC_DECADES.1);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let delta = sign * 10f64.powf(-u);
        let y = &xv + BigRational::from_float(delta).unwrap();
        if y.is_zero() || delta == 0.0 {
            skipped += 1;
            continue;
        }
        let f1 = eval_series_capped(Abscissa::from_rational(&y), 2, eps, Method::Hyperbola, 0)?.0;
        let d = delta.abs();
        let ratio = (f1.value - f0.value).abs() / (d * (1.0 / d).ln() + d);
        let pos = sorted.partition_point(|&v| v < ratio);
        sorted.insert(pos, ratio);
        rows.push(MocRow {
            index,
            y: rational_f64(&y),
            delta,
            abs_diff: (f1.value - f0.value).abs(),
            bound_ratio: ratio,
            running_median: median(&sorted),
        });
    }
    if rows.is_empty() {
        return Err(Error::Domain("no usable pairs".into()));
    }
    let decade_max = |lo: f64, hi: f64| {
        rows.iter()
            .filter(|r| {
                let u = -r.delta.abs().log10();
                u >= lo && u < hi
            })
            .map(|r| r.bound_ratio)
            .fold(0.0, f64::max)
    };
    Ok(MocSample {
        x: x.to_string(),
        max_ratio: rows.iter().map(|r| r.bound_ratio).fold(0.0, f64::max),
        median_ratio: median(&sorted),
        max_over_running_median: rows.iter().map(|r| r.bound_ratio / r.running_median).fold(0.0, f64::max),
        first_decade_max: decade_max(MOC_DECADES.0, MOC_DECADES.0 + 1.0),
        last_decade_max: decade_max(MOC_DECADES.1 - 1.0, MOC_DECADES.1 + 1e-9),
        rows,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("fseries").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults() {
        let c = cfg(&["eval", "--x", "rational:1/3"]);
        assert_eq!((c.k, c.eps, c.depth, c.method, c.output, c.seed), (2, 1e-9, 40, CliMethod::Hyperbola, OutputFormat::Csv, 0));
    }

    #[test]
    fn eval_csv_and_json_agree() {
        let c = cfg(&["eval", "--x", "rational:1/3", "--eps", "1e-10"]);
        let csv = run(&c).unwrap().text;
        assert!(csv.starts_with("# anchor=divisor-sum-fourier-series-values\nx,k,method,F,"));
        let c = cfg(&["eval", "--x", "rational:1/3", "--eps", "1e-10", "--out", "json"]);
        let js: Value = serde_json::from_str(&run(&c).unwrap().text).unwrap();
        let f = js["rows"][0]["F"].as_f64().unwrap();
        let line = csv.lines().nth(2).unwrap();
        assert_eq!(line.split(',').nth(3).unwrap().parse::<f64>().unwrap(), f);
        let c = cfg(&["eval", "--x", "rational:1/3", "--method", "cf", "--eps", "1e-9"]);
        let out = run(&c).unwrap().text;
        let fc: f64 = out.lines().nth(2).unwrap().split(',').nth(3).unwrap().parse().unwrap();
        assert!((fc - f).abs() < 1e-8);
    }

    #[test]
    fn missing_or_double_x_is_an_error() {
        assert!(run(&cfg(&["eval"])).is_err());
        assert!(run(&cfg(&["cf", "--x", "rational:1/3", "--construct", "golden"])).is_err());
        assert!(RunConfig::try_parse_from(["fseries", "eval", "--x", "nonsense"]).is_err());
    }

    #[test]
    fn cf_and_brjuno_tables() {
        let out = run(&cfg(&["cf", "--x", "rational:2/5"])).unwrap().text;
        assert!(out.contains("\n2,2,2,5,"), "{out}");
        assert!(out.contains("# summary.terminated=true"));
        let out = run(&cfg(&["brjuno", "--construct", "golden", "--depth", "30"])).unwrap().text;
        assert!(out.contains("# summary.verdict=convergent_at_depth"));
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["moc", "--construct", "golden", "--depth", "30", "--pairs", "20", "--seed", "3"];
        let a = run(&cfg(&args)).unwrap();
        let b = run(&cfg(&args)).unwrap();
        assert_eq!(a, b);
        let c = run(&cfg(&["moc", "--construct", "golden", "--depth", "30", "--pairs", "20", "--seed", "4"])).unwrap();
        assert_ne!(a.text, c.text);
    }

    #[test]
    fn scan_rational_rejects_bad_input() {
        assert!(run_scan_rational(2, 4, &[0.1, 0.01], 1e-12).is_err());
        assert!(run_scan_rational(1, 2, &[0.01, 0.1], 1e-12).is_err());
    }

    #[test]
    fn irrational_scan_table() {
        let out = run(&cfg(&["scan-irrational", "--construct", "golden", "--depth", "12", "--n-list", "1,3,5"])).unwrap().text;
        assert!(out.contains("# summary.all_brackets_ok=true"), "{out}");
    }
}
