//! Command-line front end behind the `magic-ctx` binary.
//!
//! Exit codes: 0 success, 1 invalid input, 2 no threshold, 3 validation failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::frames::{
    gross_wigner_frame, kd_frame, validate_frame, Basis, ExactFrame, FrameValidationReport,
};
use crate::linalg::C64;
use crate::optimizer::{self, minimize_omega, OptimizerConfig, SearchContext};
use crate::qudit::{depolarize, magic_state, Dimension, MagicKind, Operator};
use crate::representation::{omega, represent_state, OperationalSet, Scope};
use crate::thresholds::{self, csv_number, Family, SearchSettings, ThresholdKind, ThresholdResult};
use crate::tolerance::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NO_THRESHOLD: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

pub const VERSION: &str = concat!("magic-ctx ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(
    name = "magic-ctx",
    version,
    about = "Noise thresholds for contextuality of depolarised qudit magic states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a noise threshold and its certificate.
    Threshold {
        #[arg(long, value_enum)]
        method: Method,
        /// Frame families for `--method crit`, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "gross,kd")]
        families: Vec<FamilyArg>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Witness and extreme entries of each frame family on a grid of noise levels.
    Scan {
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 1.0)]
        stop: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Comma separated subset of gross, kd-mub, kd-opt.
        #[arg(long, value_delimiter = ',', default_value = "gross,kd-mub")]
        families: Vec<ScanFamily>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check the exact-frame axioms of a built-in or saved frame.
    Validate {
        #[arg(
            long,
            value_enum,
            conflicts_with = "frame",
            required_unless_present = "frame"
        )]
        builtin: Option<Builtin>,
        /// Frame JSON file as written by the `frame` command.
        #[arg(long)]
        frame: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write a built-in frame as JSON.
    Frame {
        #[arg(long, value_enum)]
        builtin: Builtin,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Wigner,
    Polytope,
    Kd,
    Crit,
}

impl From<Method> for ThresholdKind {
    fn from(m: Method) -> Self {
        match m {
            Method::Wigner => ThresholdKind::Wigner,
            Method::Polytope => ThresholdKind::Polytope,
            Method::Kd => ThresholdKind::Kd,
            Method::Crit => ThresholdKind::Crit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Gross,
    Kd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum ScanFamily {
    #[value(name = "gross")]
    Gross,
    #[value(name = "kd-mub")]
    KdMub,
    #[value(name = "kd-opt")]
    KdOpt,
}

impl ScanFamily {
    fn as_str(self) -> &'static str {
        match self {
            ScanFamily::Gross => "gross",
            ScanFamily::KdMub => "kd-mub",
            ScanFamily::KdOpt => "kd-opt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Gross,
    #[value(name = "kd-mub")]
    KdMub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every command. Each overrides the matching field of `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Qudit dimension (3, 5 or 7).
    #[arg(long)]
    pub d: Option<usize>,
    /// Magic state: strange, norrell or custom (with --vec).
    #[arg(long)]
    pub state: Option<String>,
    /// Amplitudes of a custom state, comma separated (e.g. 1,0,0 or 1,0.5i,-1).
    #[arg(long, allow_hyphen_values = true)]
    pub vec: Option<String>,
    /// Members entering Ω: state or subtheory.
    #[arg(long)]
    pub scope: Option<String>,
    /// Bisection width.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Ω at or below this value counts as classical.
    #[arg(long)]
    pub classify_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON config file with a top-level "schema": 1.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Effective settings of a run, echoed into every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub d: usize,
    pub state: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vec: Option<Vec<C64>>,
    pub scope: Scope,
    pub tol: f64,
    pub classify_tol: f64,
    pub seed: u64,
    pub restarts: usize,
    pub max_iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let opt = OptimizerConfig::default();
        RunConfig {
            schema: 1,
            d: 3,
            state: "strange".into(),
            vec: None,
            scope: Scope::State,
            tol: thresholds::DEFAULT_TOL,
            classify_tol: Tolerances::DEFAULT.classification,
            seed: 1,
            restarts: opt.restarts,
            max_iterations: opt.max_iterations,
            threads: None,
            format: Format::Json,
            out: None,
        }
    }
}

/// An input problem, naming the field at fault.
#[derive(Debug, Clone, PartialEq)]
pub struct InvalidField {
    pub field: &'static str,
    pub message: String,
}

impl std::fmt::Display for InvalidField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.message)
    }
}

fn invalid(field: &'static str, message: impl Into<String>) -> InvalidField {
    InvalidField {
        field,
        message: message.into(),
    }
}

/// Parse `1,0,-1` or `1+0.5i,0,-1` into complex amplitudes.
pub fn parse_vec(s: &str) -> Result<Vec<C64>, InvalidField> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<C64>()
                .map_err(|_| invalid("vec", format!("cannot parse `{t}` as a complex number")))
        })
        .collect()
}

impl RunConfig {
    /// Defaults, then the config file, then explicit flags.
    pub fn resolve(args: &CommonArgs, format_default: Format) -> Result<Self, InvalidField> {
        let mut cfg = match &args.config {
            Some(path) => Self::from_file(path)?,
            None => RunConfig {
                format: format_default,
                ..Default::default()
            },
        };
        if let Some(d) = args.d {
            cfg.d = d;
        }
        if let Some(s) = &args.state {
            cfg.state = s.clone();
        }
        if let Some(v) = &args.vec {
            cfg.vec = Some(parse_vec(v)?);
        }
        if let Some(s) = &args.scope {
            cfg.scope = s
                .parse()
                .map_err(|e: Error| invalid("scope", e.to_string()))?;
        }
        if let Some(t) = args.tol {
            cfg.tol = t;
        }
        if let Some(t) = args.classify_tol {
            cfg.classify_tol = t;
        }
        if let Some(s) = args.seed {
            cfg.seed = s;
        }
        if let Some(r) = args.restarts {
            cfg.restarts = r;
        }
        if let Some(m) = args.max_iterations {
            cfg.max_iterations = m;
        }
        if args.threads.is_some() {
            cfg.threads = args.threads;
        }
        if let Some(f) = args.format {
            cfg.format = f;
        }
        if args.out.is_some() {
            cfg.out = args.out.clone();
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, InvalidField> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
        match value.get("schema").and_then(|s| s.as_u64()) {
            Some(1) => {}
            Some(other) => {
                return Err(invalid(
                    "schema",
                    format!("unsupported schema version {other}"),
                ))
            }
            None => {
                return Err(invalid(
                    "schema",
                    "config file needs a top-level \"schema\": 1",
                ))
            }
        }
        serde_json::from_value(value).map_err(|e| invalid("config", e.to_string()))
    }

    fn check(&self) -> Result<(), InvalidField> {
        Dimension::new(self.d).map_err(|e| invalid("d", e.to_string()))?;
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(invalid("tol", format!("{} is not in (0, 1)", self.tol)));
        }
        if !(self.classify_tol >= 0.0 && self.classify_tol.is_finite()) {
            return Err(invalid(
                "classify_tol",
                format!("{} is not a non-negative number", self.classify_tol),
            ));
        }
        if self.restarts == 0 {
            return Err(invalid("restarts", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations", "must be positive"));
        }
        if self.threads == Some(0) {
            return Err(invalid("threads", "must be positive"));
        }
        Ok(())
    }

    pub fn dim(&self) -> Dimension {
        Dimension::new(self.d).expect("checked on resolve")
    }

    pub fn magic(&self) -> Result<Operator, InvalidField> {
        let dim = Dimension::new(self.d).map_err(|e| invalid("d", e.to_string()))?;
        let kind = match self.state.as_str() {
            "strange" => MagicKind::Strange,
            "norrell" => MagicKind::Norrell,
            "custom" => MagicKind::Custom(
                self.vec
                    .clone()
                    .ok_or_else(|| invalid("vec", "--state custom needs --vec"))?,
            ),
            other => {
                return Err(invalid(
                    "state",
                    format!("unknown state `{other}` (expected strange|norrell|custom)"),
                ))
            }
        };
        if self.vec.is_some() && self.state != "custom" {
            return Err(invalid("vec", "--vec is only used with --state custom"));
        }
        magic_state(&kind, dim).map_err(|e| {
            let field = match e {
                Error::UnsupportedDimension(_) => "state",
                _ => "vec",
            };
            invalid(field, e.to_string())
        })
    }

    pub fn search_settings(&self) -> SearchSettings {
        SearchSettings {
            optimizer: OptimizerConfig {
                restarts: self.restarts,
                max_iterations: self.max_iterations,
                seed: self.seed,
                threads: self.threads,
                ..Default::default()
            },
            scope: self.scope,
            tol: self.tol,
            classify_tol: self.classify_tol,
        }
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    version: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn json_report<T: Serialize>(config: &RunConfig, body: T) -> String {
    let mut s = serde_json::to_string_pretty(&Report {
        version: VERSION,
        config,
        body,
    })
    .expect("reports serialise");
    s.push('\n');
    s
}

/// `#` comment lines carrying the version and the config, placed above a CSV header.
fn csv_preamble(config: &RunConfig) -> String {
    format!(
        "# {VERSION}\n# config: {}\n",
        serde_json::to_string(config).expect("config serialises")
    )
}

/// What a command produced: text for the output target, a message for
/// stderr, and the exit code.
struct Outcome {
    text: Option<String>,
    message: Option<String>,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text: Some(text),
            message: None,
            code: EXIT_OK,
        }
    }

    fn fail(code: i32, message: String) -> Self {
        Outcome {
            text: None,
            message: Some(message),
            code,
        }
    }
}

impl From<InvalidField> for Outcome {
    fn from(e: InvalidField) -> Self {
        Outcome::fail(EXIT_INVALID, e.to_string())
    }
}

fn from_error(e: Error) -> Outcome {
    match e {
        Error::NoThreshold => Outcome::fail(
            EXIT_NO_THRESHOLD,
            "no threshold: the predicate fails even at p = 1".into(),
        ),
        Error::NoValidFrame => Outcome::fail(EXIT_VALIDATION, e.to_string()),
        other => Outcome::fail(EXIT_INVALID, other.to_string()),
    }
}

/// Parse `args` (including the program name) and run. Output goes to the
/// `--out` file when given, otherwise to `stdout`; messages go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => EXIT_INVALID,
            };
        }
    };
    let (outcome, out_path) = dispatch(&cli.command);
    if let Some(text) = &outcome.text {
        let written = match &out_path {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
        };
        if let Err(msg) = written {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_INVALID;
        }
    }
    if let Some(msg) = &outcome.message {
        let _ = writeln!(stderr, "error: {msg}");
    }
    outcome.code
}

fn dispatch(command: &Command) -> (Outcome, Option<PathBuf>) {
    let (common, default_format) = match command {
        Command::Scan { common, .. } => (common, Format::Csv),
        Command::Threshold { common, .. }
        | Command::Validate { common, .. }
        | Command::Frame { common, .. } => (common, Format::Json),
    };
    let cfg = match RunConfig::resolve(common, default_format) {
        Ok(cfg) => cfg,
        Err(e) => return (e.into(), None),
    };
    if matches!(command, Command::Threshold { .. } | Command::Scan { .. }) {
        if let Err(e) = cfg.magic() {
            return (e.into(), None);
        }
    }
    let outcome = match command {
        Command::Threshold {
            method, families, ..
        } => cmd_threshold(&cfg, (*method).into(), families),
        Command::Scan {
            start,
            stop,
            step,
            families,
            ..
        } => cmd_scan(&cfg, *start, *stop, *step, families),
        Command::Validate { builtin, frame, .. } => cmd_validate(&cfg, *builtin, frame.as_deref()),
        Command::Frame { builtin, .. } => cmd_frame(&cfg, *builtin),
    };
    (outcome, cfg.out.clone())
}

/// Run one threshold computation.
pub fn threshold(
    cfg: &RunConfig,
    method: ThresholdKind,
    families: &[Family],
) -> crate::Result<ThresholdResult> {
    let magic = cfg
        .magic()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let dim = cfg.dim();
    match method {
        ThresholdKind::Wigner => thresholds::wigner_threshold(&magic, dim),
        ThresholdKind::Polytope => thresholds::polytope_threshold(&magic, dim, cfg.tol),
        ThresholdKind::Kd => thresholds::kd_threshold(&magic, dim, &cfg.search_settings()),
        ThresholdKind::Crit => {
            thresholds::crit_threshold(&magic, dim, families, &cfg.search_settings())
        }
    }
}

fn cmd_threshold(cfg: &RunConfig, method: ThresholdKind, families: &[FamilyArg]) -> Outcome {
    let mut fams: Vec<Family> = Vec::new();
    for f in families {
        let f = match f {
            FamilyArg::Gross => Family::Gross,
            FamilyArg::Kd => Family::Kd,
        };
        if !fams.contains(&f) {
            fams.push(f);
        }
    }
    match threshold(cfg, method, &fams) {
        Ok(result) => Outcome::ok(match cfg.format {
            Format::Json => json_report(cfg, &result),
            Format::Csv => csv_preamble(cfg) + &result.scan_csv(),
        }),
        Err(e) => from_error(e),
    }
}

/// One row of a scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub p: f64,
    pub frame: &'static str,
    pub witness: f64,
    pub min_real: f64,
    pub max_abs_imag: f64,
}

/// Grid points start, start + step, ... up to stop.
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, InvalidField> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(invalid("grid", "start, stop and step must be finite"));
    }
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
        return Err(invalid("grid", "start and stop must lie in [0, 1]"));
    }
    if start >= stop {
        return Err(invalid(
            "grid",
            format!("start {start} must be below stop {stop}"),
        ));
    }
    if step <= 0.0 {
        return Err(invalid("step", format!("{step} must be positive")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|k| (((start + k as f64 * step) * 1e12).round() / 1e12).min(stop))
        .collect())
}

/// Evaluate each family on each grid point.
pub fn scan(
    cfg: &RunConfig,
    points: &[f64],
    families: &[ScanFamily],
) -> crate::Result<Vec<ScanRow>> {
    let magic = cfg
        .magic()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let dim = cfg.dim();
    let gross = gross_wigner_frame(dim);
    let mub = kd_frame(&Basis::computational(dim), &Basis::fourier(dim))?;
    let settings = cfg.search_settings();
    let mut rows = Vec::new();
    for &p in points {
        let set = OperationalSet::new(&magic, p)?;
        let noisy = depolarize(&magic, p)?;
        for &family in families {
            let frame: ExactFrame = match family {
                ScanFamily::Gross => gross.clone(),
                ScanFamily::KdMub => mub.clone(),
                ScanFamily::KdOpt => {
                    let ctx = SearchContext::new(&magic, p, cfg.scope)?;
                    let best = minimize_omega(&ctx, &settings.optimizer)?.best;
                    optimizer::decode(&best.params, dim)?
                }
            };
            let dist = represent_state(&frame, &noisy)?;
            rows.push(ScanRow {
                p,
                frame: family.as_str(),
                witness: omega(&frame, &set, cfg.scope)?.value,
                min_real: dist.min_real(),
                max_abs_imag: dist.max_abs_imag(),
            });
        }
    }
    Ok(rows)
}

fn cmd_scan(cfg: &RunConfig, start: f64, stop: f64, step: f64, families: &[ScanFamily]) -> Outcome {
    let points = match grid(start, stop, step) {
        Ok(points) => points,
        Err(e) => return e.into(),
    };
    let rows = match scan(cfg, &points, families) {
        Ok(rows) => rows,
        Err(e) => return from_error(e),
    };
    Outcome::ok(match cfg.format {
        Format::Csv => {
            let mut out = csv_preamble(cfg);
            out.push_str("p,frame,witness,min_real,max_abs_imag\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_number(r.p),
                    r.frame,
                    csv_number(r.witness),
                    csv_number(r.min_real),
                    csv_number(r.max_abs_imag)
                ));
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                rows: &'a [ScanRow],
            }
            json_report(cfg, Body { rows: &rows })
        }
    })
}

fn builtin_frame(dim: Dimension, builtin: Builtin) -> crate::Result<ExactFrame> {
    match builtin {
        Builtin::Gross => Ok(gross_wigner_frame(dim)),
        Builtin::KdMub => kd_frame(&Basis::computational(dim), &Basis::fourier(dim)),
    }
}

fn cmd_validate(cfg: &RunConfig, builtin: Option<Builtin>, path: Option<&Path>) -> Outcome {
    let frame = match (builtin, path) {
        (Some(b), _) => match builtin_frame(cfg.dim(), b) {
            Ok(f) => f,
            Err(e) => return from_error(e),
        },
        (None, Some(path)) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return invalid("frame", format!("{}: {e}", path.display())).into(),
            };
            match serde_json::from_str::<ExactFrame>(&text) {
                Ok(f) => f,
                Err(e) => return invalid("frame", format!("{}: {e}", path.display())).into(),
            }
        }
        (None, None) => return invalid("frame", "give --builtin or --frame").into(),
    };
    let report: FrameValidationReport = validate_frame(&frame);
    let text = match cfg.format {
        Format::Json => json_report(cfg, &report),
        Format::Csv => {
            let mut out = csv_preamble(cfg);
            out.push_str("check,residual,tolerance,pass\n");
            for c in &report.checks {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    c.name,
                    csv_number(c.residual),
                    csv_number(c.tolerance),
                    c.pass
                ));
            }
            out
        }
    };
    Outcome {
        text: Some(text),
        message: (!report.pass).then(|| "frame fails validation".to_string()),
        code: if report.pass {
            EXIT_OK
        } else {
            EXIT_VALIDATION
        },
    }
}

fn cmd_frame(cfg: &RunConfig, builtin: Builtin) -> Outcome {
    match builtin_frame(cfg.dim(), builtin) {
        Ok(frame) => {
            let mut s = serde_json::to_string_pretty(&frame).expect("frames serialise");
            s.push('\n');
            Outcome::ok(s)
        }
        Err(e) => from_error(e),
    }
}
