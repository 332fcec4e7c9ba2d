//! Command-line front-end. Four commands: `eval` for single values,
//! `verify` for the built-in suites, `table` for grids, `scan` for
//! counterexample search. JSON bodies are byte-identical for a fixed
//! configuration and seed; human summaries go to stderr so stdout stays
//! diffable.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integral::{
    bound_catalogue, bound_ratio, bound_tightness_scan, closed_form_integral_mean, j_mean,
    BoundTarget, IntegralMeanKind,
};
use crate::lab::{
    gamma_sandwich_check, high_precision_eval, prop25_outcomes, scan_counterexample, verify_chain,
    ChainId, ExprId, ScanRegion,
};
use crate::hiprec::PrecisionConfig;
use crate::mean::{MeanFunction, MeanKind};
use crate::pair::{PairSampler, PositivePair, Tolerance};
use crate::quad::mean_of_integrand;
use crate::report::{fmt17, csv_row, Report};
use crate::transform::{s_mean, t_mean};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Environment variable holding the default precision in decimal digits.
pub const PRECISION_ENV: &str = "MEANLAB_PRECISION";

const DEFAULT_SEED: u64 = 42;
const DEFAULT_SAMPLES: u64 = 10_000;
const DEFAULT_PRECISION: u32 = 50;
const DEFAULT_SCAN_BUDGET: u64 = 100_000;
const SAMPLE_LO: f64 = 1e-3;
const SAMPLE_HI: f64 = 1e3;

#[derive(Parser, Debug)]
#[command(name = "meanlab", version, about = "Bivariate means, integral means, mean transforms, and an inequality lab")]
struct Cli {
    /// Optional key=value config file mirroring the global flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true)]
    samples: Option<u64>,

    /// Decimal digits for high-precision evaluation (15..=10000).
    #[arg(long, global = true)]
    precision: Option<u32>,

    #[arg(long, global = true)]
    tol_abs: Option<f64>,

    #[arg(long, global = true)]
    tol_rel: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate means and transforms at one pair.
    Eval(EvalArgs),
    /// Run a verification suite: classical | integral | bounds | transforms | incomparability | gamma.
    Verify(VerifyArgs),
    /// Emit a grid of values over a cartesian product of axis points.
    Table(TableArgs),
    /// Search a region for a pair where lhs < rhs (and/or the reverse).
    Scan(ScanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Pair as `a,b`; decimal or scientific literals.
    #[arg(long)]
    pair: String,

    /// Classical mean names (repeatable).
    #[arg(long)]
    mean: Vec<String>,

    /// Integral means, named by source mean (repeatable).
    #[arg(long)]
    imean: Vec<String>,

    /// J-transformed integral means, named by source mean (repeatable).
    #[arg(long)]
    jmean: Vec<String>,

    /// S-transformed means, named by source mean (repeatable).
    #[arg(long)]
    smean: Vec<String>,

    /// Composite T means as `outer,inner` (repeatable).
    #[arg(long)]
    tmean: Vec<String>,

    /// Registered lab expressions (N0, L0, JId, ...) evaluated at
    /// `--precision` digits (repeatable).
    #[arg(long)]
    expr: Vec<String>,

    /// Evaluate integral means by cubature and report the error bound.
    #[arg(long)]
    quadrature: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// classical | integral | bounds | transforms | incomparability | gamma
    suite: String,

    /// Bounds suite: sweep one window, e.g. `IG`, `IH`, `Jr`.
    #[arg(long)]
    target: Option<String>,

    /// Bounds sweep range of b/a as `lo:hi`, geometric ladder.
    #[arg(long)]
    sweep: Option<String>,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// mean | imean | jmean | smean
    #[arg(long, default_value = "mean")]
    family: String,

    /// Comma-separated kind names.
    #[arg(long)]
    kinds: String,

    /// Comma-separated axis values; rows run over the product, ordered
    /// lexicographically by (a, b).
    #[arg(long)]
    grid: String,

    /// Skip diagonal rows.
    #[arg(long)]
    off_diagonal: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    lhs: String,

    #[arg(long)]
    rhs: String,

    /// Region as `aLo:aHi,bLo:bHi`.
    #[arg(long)]
    region: String,

    /// Total evaluation budget per direction.
    #[arg(long)]
    budget: Option<u64>,

    /// Which strict orderings to look for.
    #[arg(long, value_enum, default_value = "both")]
    direction: ScanDirection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScanDirection {
    Lt,
    Gt,
    Both,
}

/// Merged run settings: flags override the config file, which overrides
/// the environment, which overrides defaults.
#[derive(Clone, Debug)]
struct Settings {
    seed: u64,
    samples: u64,
    precision: u32,
    tol: Tolerance,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

#[derive(Default)]
struct FileConfig {
    seed: Option<u64>,
    samples: Option<u64>,
    precision: Option<u32>,
    tol_abs: Option<f64>,
    tol_rel: Option<f64>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

fn parse_config_file(path: &PathBuf) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Domain(format!(
                "config line {} is not key=value: '{raw}'",
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| Error::Domain(format!("config key {key}: invalid {what} '{value}'"));
        match key {
            "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("integer"))?),
            "samples" => cfg.samples = Some(value.parse().map_err(|_| bad("integer"))?),
            "precision" => cfg.precision = Some(value.parse().map_err(|_| bad("integer"))?),
            "tol_abs" => cfg.tol_abs = Some(value.parse().map_err(|_| bad("number"))?),
            "tol_rel" => cfg.tol_rel = Some(value.parse().map_err(|_| bad("number"))?),
            "format" => {
                cfg.format = Some(match value {
                    "table" => OutputFormat::Table,
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    _ => return Err(bad("format")),
                })
            }
            "out" => cfg.out = Some(PathBuf::from(value)),
            _ => return Err(Error::Domain(format!("unknown config key '{key}'"))),
        }
    }
    Ok(cfg)
}

fn load_settings(cli: &Cli) -> Result<Settings> {
    let file = match &cli.config {
        Some(path) => parse_config_file(path)?,
        None => FileConfig::default(),
    };
    let env_precision = std::env::var(PRECISION_ENV)
        .ok()
        .map(|v| {
            v.parse::<u32>().map_err(|_| {
                Error::Domain(format!("{PRECISION_ENV} is not an integer: '{v}'"))
            })
        })
        .transpose()?;
    let precision = cli
        .precision
        .or(file.precision)
        .or(env_precision)
        .unwrap_or(DEFAULT_PRECISION);
    PrecisionConfig::new(precision)?;
    let samples = cli.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(Error::Domain("samples must be at least 1".into()));
    }
    let tol = Tolerance::new(
        cli.tol_abs.or(file.tol_abs).unwrap_or(1e-10),
        cli.tol_rel.or(file.tol_rel).unwrap_or(1e-10),
    )?;
    Ok(Settings {
        seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        samples,
        precision,
        tol,
        format: cli.format.or(file.format),
        out: cli.out.clone().or(file.out),
    })
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::Domain(msg) if msg.starts_with("precision backend") => EXIT_CAPABILITY,
        Error::NoConvergence { .. } => EXIT_CAPABILITY,
        _ => EXIT_USAGE,
    }
}

/// Parses argv and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let settings = match load_settings(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let outcome = match &cli.command {
        Command::Eval(args) => cmd_eval(args, &settings),
        Command::Verify(args) => cmd_verify(args, &settings),
        Command::Table(args) => cmd_table(args, &settings),
        Command::Scan(args) => cmd_scan(args, &settings),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn parse_pair(s: &str) -> Result<PositivePair> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Domain(format!("pair must be 'a,b', got '{s}'")))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| Error::Domain(format!("not a number: '{v}'")))
    };
    PositivePair::new(parse(a)?, parse(b)?)
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::Domain(format!("range must be 'lo:hi', got '{s}'")))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| Error::Domain(format!("not a number: '{v}'")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

fn parse_region(s: &str) -> Result<ScanRegion> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Domain(format!("region must be 'aLo:aHi,bLo:bHi', got '{s}'")))?;
    ScanRegion::new(parse_range(a)?, parse_range(b)?)
}

fn registered_mean_names() -> String {
    MeanKind::all_basic()
        .iter()
        .map(|k| k.name())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_mean(s: &str) -> Result<MeanKind> {
    MeanKind::parse(s).ok_or_else(|| {
        Error::UnknownExpression(format!("{s}; registered means: {}", registered_mean_names()))
    })
}

fn parse_integral_kind(s: &str) -> Result<IntegralMeanKind> {
    IntegralMeanKind::parse(s).ok_or_else(|| {
        Error::UnknownExpression(format!(
            "{s}; integral means exist for: A G H C r g Hn AGhalf"
        ))
    })
}

fn write_output(out: &Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, body)?;
            Ok(())
        }
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

/// Human-readable value for the table view; CSV and JSON carry the full
/// 17-digit representation instead.
fn fmt_human(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && (a < 1e-4 || a >= 1e7) {
        format!("{v:.6e}")
    } else {
        format!("{v:.6}")
    }
}

#[derive(Serialize)]
struct EvalRow {
    name: String,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<String>,
}

fn cmd_eval(args: &EvalArgs, settings: &Settings) -> Result<i32> {
    let p = parse_pair(&args.pair)?;
    let mut rows: Vec<EvalRow> = Vec::new();
    let plain = |name: String, value: f64| EvalRow {
        name,
        value,
        error_bound: None,
        decimal: None,
    };

    for name in &args.mean {
        let kind = parse_mean(name)?;
        rows.push(plain(kind.name(), kind.eval(p.a(), p.b())));
    }
    for name in &args.imean {
        let kind = parse_integral_kind(name)?;
        if args.quadrature {
            let m = MeanFunction::from_kind(kind.source_mean());
            let est = mean_of_integrand(&m, &p, settings.tol)?.require_converged()?;
            rows.push(EvalRow {
                name: kind.label(),
                value: est.value,
                error_bound: Some(est.error_bound),
                decimal: None,
            });
        } else {
            rows.push(plain(kind.label(), closed_form_integral_mean(kind, &p)?.value));
        }
    }
    for name in &args.jmean {
        let kind = parse_integral_kind(name)?;
        rows.push(plain(format!("J_{}", kind.name()), j_mean(kind, &p)?));
    }
    for name in &args.smean {
        let kind = parse_mean(name)?;
        let v = s_mean(&MeanFunction::from_kind(kind.clone()), &p, settings.tol)?;
        rows.push(plain(format!("S_{}", kind.name()), v));
    }
    for spec in &args.tmean {
        let (outer, inner) = spec.split_once(',').ok_or_else(|| {
            Error::Domain(format!("tmean must be 'outer,inner', got '{spec}'"))
        })?;
        let m1 = parse_mean(outer.trim())?;
        let m2 = parse_mean(inner.trim())?;
        let v = t_mean(
            &MeanFunction::from_kind(m1.clone()),
            &MeanFunction::from_kind(m2.clone()),
            &p,
            settings.tol,
        )?;
        rows.push(plain(format!("T({},{})", m1.name(), m2.name()), v));
    }
    for name in &args.expr {
        let expr = ExprId::parse(name)?;
        let decimal = high_precision_eval(&expr, &p, PrecisionConfig::new(settings.precision)?)?;
        let value: f64 = decimal.parse().unwrap_or(f64::NAN);
        rows.push(EvalRow {
            name: expr.name(),
            value,
            error_bound: None,
            decimal: Some(decimal),
        });
    }

    if rows.is_empty() {
        return Err(Error::Domain(
            "nothing to evaluate; pass --mean/--imean/--jmean/--smean/--tmean/--expr".into(),
        ));
    }

    let format = settings.format.unwrap_or(OutputFormat::Table);
    let body = match format {
        OutputFormat::Table => rows
            .iter()
            .map(|r| {
                let mut line = format!("{:<12} {}", r.name, fmt_human(r.value));
                if let Some(b) = r.error_bound {
                    line.push_str(&format!("  (error bound {b:.3e})"));
                }
                if let Some(d) = &r.decimal {
                    line.push_str(&format!("  [{d}]"));
                }
                line
            })
            .collect::<Vec<_>>()
            .join("\n"),
        OutputFormat::Csv => {
            let mut lines = vec!["name,value,error_bound".to_string()];
            for r in &rows {
                lines.push(csv_row(&[
                    r.name.clone(),
                    fmt17(r.value),
                    r.error_bound.map(fmt17).unwrap_or_default(),
                ]));
            }
            lines.join("\n")
        }
        OutputFormat::Json => {
            let mut report = report_envelope(settings, None);
            for r in &rows {
                report.push(r);
            }
            report.to_json_string()
        }
    };
    write_output(&settings.out, &body)?;
    Ok(EXIT_OK)
}

fn report_envelope(settings: &Settings, seed: Option<u64>) -> Report {
    Report::new(seed, settings.tol.abs, settings.tol.rel)
}

#[derive(Serialize)]
struct WindowCheck {
    target: String,
    kind: String,
    lower: f64,
    upper: f64,
    samples: u64,
    violations: u64,
}

fn parse_bound_target(s: &str) -> Result<(BoundTarget, IntegralMeanKind)> {
    let cleaned = s.replace('_', "");
    let (prefix, rest) = cleaned.split_at(1.min(cleaned.len()));
    let target = match prefix {
        "I" | "i" => BoundTarget::I,
        "J" | "j" => BoundTarget::J,
        _ => {
            return Err(Error::UnknownExpression(format!(
                "{s}; bound targets look like IG, IH, IC, IHn, Ig, Ir, JG, ..."
            )))
        }
    };
    let kind = parse_integral_kind(rest)?;
    Ok((target, kind))
}

fn geometric_ladder(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo > 1.0 && hi > lo) {
        return Err(Error::Domain(format!(
            "sweep range must satisfy 1 < lo < hi, got {lo}:{hi}"
        )));
    }
    Ok((0..points)
        .map(|k| lo * (hi / lo).powf(k as f64 / (points - 1) as f64))
        .collect())
}

fn cmd_verify(args: &VerifyArgs, settings: &Settings) -> Result<i32> {
    match args.suite.as_str() {
        "classical" | "integral" | "transforms" => {
            let chains: Vec<ChainId> = match args.suite.as_str() {
                "classical" => vec![ChainId::Classical],
                "integral" => vec![ChainId::Integral],
                _ => vec![ChainId::SMeans, ChainId::TMeans],
            };
            let mut report = report_envelope(settings, Some(settings.seed));
            let mut clean = true;
            for chain in chains {
                let r = verify_chain(chain, settings.samples, settings.seed, settings.tol)?;
                eprintln!(
                    "{}: {} comparisons, {} samples, {} violations",
                    r.chain_name,
                    r.comparisons.len(),
                    r.samples_checked,
                    r.violations.len()
                );
                clean &= r.passed();
                report.push(&r);
            }
            write_output(&settings.out, &report.to_json_string())?;
            Ok(if clean { EXIT_OK } else { EXIT_NOT_FOUND })
        }
        "bounds" => {
            let mut report = report_envelope(settings, Some(settings.seed));
            let mut clean = true;
            if let Some(target) = &args.target {
                let (target, kind) = parse_bound_target(target)?;
                let sweep = args.sweep.as_deref().unwrap_or("10:1e6");
                let (lo, hi) = parse_range(sweep)?;
                let ladder = geometric_ladder(lo, hi, 13)?;
                let r = bound_tightness_scan(target, kind, &ladder)?;
                eprintln!(
                    "{}_{} -> {}: closest {:.3e}, monotone {}, inside {}",
                    r.target.name(),
                    r.kind.name(),
                    r.far_limit,
                    r.closest_distance,
                    r.monotone_approach,
                    r.all_inside
                );
                clean &= r.all_inside;
                report.push(&r);
            } else {
                let mut sampler = PairSampler::new(settings.seed, SAMPLE_LO, SAMPLE_HI);
                let pairs: Vec<PositivePair> = (0..settings.samples)
                    .map(|_| sampler.sample_off_diagonal())
                    .collect();
                for spec in bound_catalogue() {
                    let mut violations = 0u64;
                    for p in &pairs {
                        let (_, inside) = bound_ratio(spec.target, spec.kind, p)?;
                        if !inside {
                            violations += 1;
                        }
                    }
                    eprintln!(
                        "{}_{} in ({:.6}, {:.6}): {violations} violations / {} samples",
                        spec.target.name(),
                        spec.kind.name(),
                        spec.lower,
                        spec.upper,
                        pairs.len()
                    );
                    clean &= violations == 0;
                    report.push(&WindowCheck {
                        target: spec.target.name().to_string(),
                        kind: spec.kind.name().to_string(),
                        lower: spec.lower,
                        upper: spec.upper,
                        samples: pairs.len() as u64,
                        violations,
                    });
                }
            }
            write_output(&settings.out, &report.to_json_string())?;
            Ok(if clean { EXIT_OK } else { EXIT_NOT_FOUND })
        }
        "incomparability" => {
            let outcomes = prop25_outcomes().map_err(|e| match e {
                Error::Domain(msg) => Error::Domain(format!("precision backend: {msg}")),
                other => other,
            })?;
            let mut report = report_envelope(settings, None);
            let mut clean = true;
            for o in &outcomes {
                eprintln!(
                    "{}: {} (difference {:.6e} at {} digits)",
                    o.label,
                    if o.reproduced { "reproduced" } else { "NOT reproduced" },
                    o.certificate.difference,
                    o.certificate.precision_digits
                );
                clean &= o.reproduced;
                report.push(o);
            }
            write_output(&settings.out, &report.to_json_string())?;
            Ok(if clean { EXIT_OK } else { EXIT_NOT_FOUND })
        }
        "gamma" => {
            let check = gamma_sandwich_check(PrecisionConfig::new(settings.precision)?)?;
            eprintln!(
                "7/12 = {:.9} > {:.9} > {:.9}: {}",
                check.left,
                check.middle,
                check.right,
                if check.holds { "holds" } else { "fails" }
            );
            eprintln!(
                "A(3,4) = {} > S_G(3,4) = {:.6} > S_H(3,4) = {:.6}: {}",
                check.mean_route[0],
                check.mean_route[1],
                check.mean_route[2],
                if check.mean_route_holds { "holds" } else { "fails" }
            );
            let mut report = report_envelope(settings, None);
            report.push(&check);
            write_output(&settings.out, &report.to_json_string())?;
            Ok(if check.holds && check.mean_route_holds {
                EXIT_OK
            } else {
                EXIT_NOT_FOUND
            })
        }
        other => Err(Error::Domain(format!(
            "unknown suite '{other}'; suites: classical integral bounds transforms incomparability gamma"
        ))),
    }
}

#[derive(Serialize)]
struct TableRow {
    a: f64,
    b: f64,
    values: Vec<f64>,
}

fn cmd_table(args: &TableArgs, settings: &Settings) -> Result<i32> {
    let kinds: Vec<&str> = args
        .kinds
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if kinds.is_empty() {
        return Err(Error::Domain("kind list is empty".into()));
    }
    let mut axis: Vec<f64> = Vec::new();
    for tok in args.grid.split(',') {
        let v: f64 = tok
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("grid value not a number: '{tok}'")))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!("grid values must be positive: {v}")));
        }
        axis.push(v);
    }
    if axis.is_empty() {
        return Err(Error::Domain("grid is empty".into()));
    }
    axis.sort_by(|x, y| x.partial_cmp(y).unwrap());
    axis.dedup();

    enum Family {
        Mean(Vec<MeanKind>),
        IMean(Vec<IntegralMeanKind>),
        JMean(Vec<IntegralMeanKind>),
        SMean(Vec<MeanKind>),
    }
    let family = match args.family.as_str() {
        "mean" => Family::Mean(kinds.iter().map(|s| parse_mean(s)).collect::<Result<_>>()?),
        "imean" => Family::IMean(
            kinds
                .iter()
                .map(|s| parse_integral_kind(s))
                .collect::<Result<_>>()?,
        ),
        "jmean" => Family::JMean(
            kinds
                .iter()
                .map(|s| parse_integral_kind(s))
                .collect::<Result<_>>()?,
        ),
        "smean" => Family::SMean(kinds.iter().map(|s| parse_mean(s)).collect::<Result<_>>()?),
        other => {
            return Err(Error::Domain(format!(
                "unknown family '{other}'; families: mean imean jmean smean"
            )))
        }
    };
    let header: Vec<String> = match &family {
        Family::Mean(ks) => ks.iter().map(|k| k.name()).collect(),
        Family::IMean(ks) => ks.iter().map(|k| k.label()).collect(),
        Family::JMean(ks) => ks.iter().map(|k| format!("J_{}", k.name())).collect(),
        Family::SMean(ks) => ks.iter().map(|k| format!("S_{}", k.name())).collect(),
    };

    let mut rows: Vec<TableRow> = Vec::new();
    for &a in &axis {
        for &b in &axis {
            if args.off_diagonal && a == b {
                continue;
            }
            let p = PositivePair::new(a, b)?;
            let mut values = Vec::with_capacity(header.len());
            match &family {
                Family::Mean(ks) => {
                    for k in ks {
                        values.push(k.eval(a, b));
                    }
                }
                Family::IMean(ks) => {
                    for k in ks {
                        values.push(closed_form_integral_mean(*k, &p)?.value);
                    }
                }
                Family::JMean(ks) => {
                    for k in ks {
                        values.push(j_mean(*k, &p)?);
                    }
                }
                Family::SMean(ks) => {
                    for k in ks {
                        values.push(s_mean(&MeanFunction::from_kind(k.clone()), &p, settings.tol)?);
                    }
                }
            }
            rows.push(TableRow { a, b, values });
        }
    }

    let format = settings.format.unwrap_or(OutputFormat::Csv);
    let body = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct JsonRow<'a> {
                a: f64,
                b: f64,
                #[serde(flatten)]
                values: std::collections::BTreeMap<&'a str, f64>,
            }
            let mut report = report_envelope(settings, None);
            for row in &rows {
                let values: std::collections::BTreeMap<&str, f64> = header
                    .iter()
                    .map(String::as_str)
                    .zip(row.values.iter().copied())
                    .collect();
                report.push(&JsonRow {
                    a: row.a,
                    b: row.b,
                    values,
                });
            }
            report.to_json_string()
        }
        _ => {
            // CSV and table share the grid layout; table pads nothing extra.
            let mut lines = Vec::with_capacity(rows.len() + 1);
            let mut head = vec!["a".to_string(), "b".to_string()];
            head.extend(header.iter().cloned());
            lines.push(csv_row(&head));
            for row in &rows {
                let mut fields = vec![fmt17(row.a), fmt17(row.b)];
                fields.extend(row.values.iter().map(|v| fmt17(*v)));
                lines.push(csv_row(&fields));
            }
            lines.join("\n")
        }
    };
    write_output(&settings.out, &body)?;
    Ok(EXIT_OK)
}

fn cmd_scan(args: &ScanArgs, settings: &Settings) -> Result<i32> {
    let lhs = ExprId::parse(&args.lhs)?;
    let rhs = ExprId::parse(&args.rhs)?;
    let region = parse_region(&args.region)?;
    let budget = args.budget.unwrap_or(DEFAULT_SCAN_BUDGET);
    let prec = PrecisionConfig::new(settings.precision)?;

    let mut report = report_envelope(settings, None);
    let mut all_found = true;
    let mut run_direction = |lhs: &ExprId, rhs: &ExprId, label: &str| -> Result<bool> {
        let found = scan_counterexample(lhs, rhs, region, budget, prec)?;
        match &found {
            Some(cert) => {
                eprintln!(
                    "{label}: witness ({}, {}), difference {:.6e} at {} digits",
                    cert.witness.a(),
                    cert.witness.b(),
                    cert.difference,
                    cert.precision_digits
                );
                report.push(cert);
                Ok(true)
            }
            None => {
                eprintln!("{label}: none found within budget {budget}");
                Ok(false)
            }
        }
    };

    if matches!(args.direction, ScanDirection::Lt | ScanDirection::Both) {
        all_found &= run_direction(&lhs, &rhs, &format!("{} < {}", args.lhs, args.rhs))?;
    }
    if matches!(args.direction, ScanDirection::Gt | ScanDirection::Both) {
        all_found &= run_direction(&rhs, &lhs, &format!("{} > {}", args.lhs, args.rhs))?;
    }
    write_output(&settings.out, &report.to_json_string())?;
    Ok(if all_found { EXIT_OK } else { EXIT_NOT_FOUND })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_and_region_parsing() {
        let p = parse_pair("3,4").unwrap();
        assert_eq!((p.a(), p.b()), (3.0, 4.0));
        let p = parse_pair(" 1e-3 , 2.5e2 ").unwrap();
        assert_eq!((p.a(), p.b()), (1e-3, 250.0));
        assert!(parse_pair("3").is_err());
        assert!(parse_pair("3,-4").is_err());
        let r = parse_region("0.1:1,0.2:2").unwrap();
        assert_eq!(r.a, (0.1, 1.0));
        assert_eq!(r.b, (0.2, 2.0));
        assert!(parse_region("0.1:1").is_err());
    }

    #[test]
    fn bound_target_parsing() {
        let (t, k) = parse_bound_target("IG").unwrap();
        assert_eq!(t, BoundTarget::I);
        assert_eq!(k, IntegralMeanKind::IG);
        let (t, k) = parse_bound_target("Jg").unwrap();
        assert_eq!(t, BoundTarget::J);
        assert_eq!(k, IntegralMeanKind::IGrav);
        assert!(parse_bound_target("XG").is_err());
        assert!(parse_bound_target("Imax").is_err());
    }

    #[test]
    fn config_file_round_trip() {
        let dir = std::env::temp_dir().join("meanlab-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("config.txt");
        std::fs::write(&path, "# comment\nseed=7\nsamples=123\nprecision=33\nformat=json\n")
            .unwrap();
        let cfg = parse_config_file(&path).unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.samples, Some(123));
        assert_eq!(cfg.precision, Some(33));
        assert_eq!(cfg.format, Some(OutputFormat::Json));
        std::fs::write(&path, "nonsense line").unwrap();
        assert!(parse_config_file(&path).is_err());
        std::fs::write(&path, "mystery=1").unwrap();
        assert!(parse_config_file(&path).is_err());
    }

    #[test]
    fn exit_codes_map_error_classes() {
        assert_eq!(
            exit_code_for(&Error::Io(std::io::Error::other("x"))),
            EXIT_IO
        );
        assert_eq!(
            exit_code_for(&Error::Domain("precision backend unavailable".into())),
            EXIT_CAPABILITY
        );
        assert_eq!(
            exit_code_for(&Error::UnknownExpression("Q".into())),
            EXIT_USAGE
        );
    }

    #[test]
    fn geometric_ladder_spans_range() {
        let l = geometric_ladder(10.0, 1e6, 13).unwrap();
        assert_eq!(l.len(), 13);
        assert!((l[0] - 10.0).abs() < 1e-9);
        assert!((l[12] - 1e6).abs() < 1e-3);
        assert!(l.windows(2).all(|w| w[0] < w[1]));
        assert!(geometric_ladder(0.5, 10.0, 5).is_err());
    }
}
