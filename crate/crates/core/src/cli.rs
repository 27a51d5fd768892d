//! Command-line front end.
//!
//! Settings are resolved as: command-line flags, then the `--config` file,
//! then built-in defaults. Exit codes for `check`: 0 certified, 1 refuted,
//! 2 inconclusive, 3 error. `scan`, `list` and `export` exit 0 on success.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::algebra::{AlgElement, FieldTag};
use crate::catalog::{self, EntryParams};
use crate::certify::{self, CertReport, StartBudget, Tolerances, Verdict};
use crate::error::{Error, Result};
use crate::triple::{DeformParam, Triple, MAX_DOCUMENT_SIZE};

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

/// Largest config file or inline argument accepted, in bytes.
pub const MAX_INPUT_LEN: usize = 1 << 20;

const PRECEDENCE: &str = "Settings precedence: command-line flags > --config file > built-in defaults.\n\
Config files hold `key = value` lines (keys: seed, starts, tol, refute_tol, s_values, \
output_path, format, workers, t, max_iters); `#` starts a comment.\n\
Exit codes for check: 0 certified, 1 refuted, 2 inconclusive, 3 error.";

#[derive(Debug, Parser)]
#[command(name = "quasipos", version, about = "Curvature certificates for homogeneous bundles", after_help = PRECEDENCE)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog entries with parameters, dimensions and metadata.
    List {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run one decision procedure.
    Check(CheckArgs),
    /// Test positivity at the points exp(−sA) for each s.
    Scan(ScanArgs),
    /// Write a catalog entry in the triple JSON format.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Fat,
    Part2,
    Part3,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Catalog entry id.
    #[arg(value_name = "ENTRY")]
    pub entry_pos: Option<String>,
    #[arg(long, conflicts_with = "entry_pos")]
    pub entry: Option<String>,
    /// Triple JSON file.
    #[arg(long, conflicts_with_all = ["entry", "entry_pos"])]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<i64>,
    #[arg(long, value_parser = parse_field)]
    pub field: Option<FieldTag>,
    /// Base point A as JSON: flat component list or nested rows.
    #[arg(long = "A", value_name = "JSON", allow_hyphen_values = true)]
    pub a: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub refute_tol: Option<f64>,
    /// Comma-separated scan parameters.
    #[arg(long, allow_hyphen_values = true)]
    pub s_values: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Deformation parameter t in (0, 1).
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Record wall-clock time in reports (makes them non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_field(s: &str) -> std::result::Result<FieldTag, String> {
    match s.to_ascii_lowercase().as_str() {
        "real" | "r" => Ok(FieldTag::Real),
        "complex" | "c" => Ok(FieldTag::Complex),
        "quaternion" | "h" => Ok(FieldTag::Quaternion),
        other => Err(format!("unknown field '{other}'")),
    }
}

/// Resolved settings, embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub starts: usize,
    pub tol: f64,
    pub refute_tol: f64,
    pub s_values: Vec<f64>,
    pub output_path: Option<String>,
    pub format: Format,
    pub workers: Option<usize>,
    pub t: f64,
    pub max_iters: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let b = StartBudget::default();
        RunConfig {
            seed: b.seed,
            starts: b.starts,
            tol: certify::DEFAULT_TOL,
            refute_tol: certify::DEFAULT_REFUTE_TOL,
            s_values: Vec::new(),
            output_path: None,
            format: Format::Json,
            workers: None,
            t: 0.5,
            max_iters: b.max_iters,
        }
    }
}

/// Settings found in a config file; unset keys stay `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub seed: Option<u64>,
    pub starts: Option<usize>,
    pub tol: Option<f64>,
    pub refute_tol: Option<f64>,
    pub s_values: Option<Vec<f64>>,
    pub output_path: Option<String>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub t: Option<f64>,
    pub max_iters: Option<usize>,
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse(format!("invalid value '{v}' for {key}")))
}

/// Parses `key = value` lines; blank lines and `#` comments are ignored.
pub fn parse_config(text: &str) -> Result<ConfigOverrides> {
    if text.len() > MAX_INPUT_LEN {
        return Err(Error::Parse("config file too large".into()));
    }
    let mut c = ConfigOverrides::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "seed" => c.seed = Some(parse_value(key, value)?),
            "starts" => c.starts = Some(parse_value(key, value)?),
            "tol" => c.tol = Some(parse_value(key, value)?),
            "refute_tol" => c.refute_tol = Some(parse_value(key, value)?),
            "s_values" => c.s_values = Some(parse_s_values(value)?),
            "output_path" | "out" => c.output_path = Some(value.to_string()),
            "format" => {
                c.format = Some(Format::from_str(value, true).map_err(|_| Error::Parse(format!("invalid format '{value}'")))?)
            }
            "workers" => c.workers = Some(parse_value(key, value)?),
            "t" => c.t = Some(parse_value(key, value)?),
            "max_iters" => c.max_iters = Some(parse_value(key, value)?),
            other => return Err(Error::Parse(format!("line {}: unknown key '{other}'", lineno + 1))),
        }
    }
    Ok(c)
}

/// Comma-separated finite reals. An empty list is an error.
pub fn parse_s_values(text: &str) -> Result<Vec<f64>> {
    if text.len() > MAX_INPUT_LEN {
        return Err(Error::Parse("s-value list too long".into()));
    }
    let trimmed = text.trim().trim_start_matches('[').trim_end_matches(']');
    let values: Vec<f64> = trimmed
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Parse(format!("invalid s-value '{s}'"))),
        })
        .collect::<Result<_>>()?;
    if values.is_empty() {
        return Err(Error::Input("s-values must not be empty".into()));
    }
    Ok(values)
}

/// Parses a matrix given either as the flat component list of the triple
/// format or as nested rows whose entries are numbers (real part) or
/// component arrays `[w, x, y, z]` truncated to the field.
pub fn parse_matrix_arg(text: &str, field: FieldTag, n: usize) -> Result<AlgElement> {
    if text.len() > MAX_INPUT_LEN {
        return Err(Error::Parse("matrix argument too long".into()));
    }
    if n == 0 || n > MAX_DOCUMENT_SIZE {
        return Err(Error::Input(format!("matrix size {n} out of range")));
    }
    let value: Value = serde_json::from_str(text)?;
    let Value::Array(items) = value else {
        return Err(Error::Parse("matrix must be a JSON array".into()));
    };
    let c = field.components();
    let number = |v: &Value| v.as_f64().ok_or_else(|| Error::Parse("matrix entries must be numbers".into()));
    let components: Vec<f64> = if items.iter().all(Value::is_number) {
        items.iter().map(number).collect::<Result<_>>()?
    } else {
        if items.len() != n {
            return Err(Error::Parse(format!("expected {n} rows, got {}", items.len())));
        }
        let mut out = Vec::with_capacity(n * n * c);
        for row in &items {
            let Value::Array(entries) = row else {
                return Err(Error::Parse("rows must be arrays".into()));
            };
            if entries.len() != n {
                return Err(Error::Parse(format!("expected {n} entries per row, got {}", entries.len())));
            }
            for e in entries {
                let mut q = vec![0.0; c];
                match e {
                    Value::Array(parts) => {
                        if parts.is_empty() || parts.len() > c {
                            return Err(Error::Parse(format!("entry needs 1 to {c} components")));
                        }
                        for (slot, p) in q.iter_mut().zip(parts) {
                            *slot = number(p)?;
                        }
                    }
                    other => q[0] = number(other)?,
                }
                out.extend(q);
            }
        }
        out
    };
    AlgElement::from_components(field, n, &components)
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => ConfigOverrides::default(),
        };
        let d = RunConfig::default();
        let s_values = match &args.s_values {
            Some(text) => parse_s_values(text)?,
            None => file.s_values.unwrap_or(d.s_values),
        };
        let c = RunConfig {
            seed: args.seed.or(file.seed).unwrap_or(d.seed),
            starts: args.starts.or(file.starts).unwrap_or(d.starts),
            tol: args.tol.or(file.tol).unwrap_or(d.tol),
            refute_tol: args.refute_tol.or(file.refute_tol).unwrap_or(d.refute_tol),
            s_values,
            output_path: args.out.as_ref().map(|p| p.display().to_string()).or(file.output_path),
            format: args.format.or(file.format).unwrap_or(d.format),
            workers: args.workers.or(file.workers),
            t: args.t.or(file.t).unwrap_or(d.t),
            max_iters: args.max_iters.or(file.max_iters).unwrap_or(d.max_iters),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::Input("starts must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Input("workers must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Input("max_iters must be at least 1".into()));
        }
        Tolerances::new(self.tol, self.refute_tol)?;
        DeformParam::new(self.t)?;
        Ok(())
    }

    pub fn budget(&self) -> StartBudget {
        StartBudget { starts: self.starts, seed: self.seed, max_iters: self.max_iters, workers: self.workers }
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances::new(self.tol, self.refute_tol).expect("validated")
    }
}

/// A triple with its designated point, from the catalog or a file.
pub struct Source {
    pub triple: Triple,
    pub base_point: Option<AlgElement>,
}

impl SourceArgs {
    fn entry_id(&self) -> Option<&str> {
        self.entry.as_deref().or(self.entry_pos.as_deref())
    }

    pub fn resolve(&self) -> Result<Source> {
        let (triple, default_a) = match (self.entry_id(), &self.file) {
            (Some(id), None) => {
                let params = EntryParams { field: self.field, n: self.n, k: self.k, l: self.l };
                let e = catalog::build(id, &params)?;
                (e.triple, Some(e.base_point))
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
                let t = Triple::from_json(&text)?;
                let a = t.base_point().cloned();
                (t, a)
            }
            (None, None) => return Err(Error::Input("either an entry id or --file is required".into())),
            (Some(_), Some(_)) => return Err(Error::Input("give an entry id or --file, not both".into())),
        };
        let base_point = match &self.a {
            Some(text) => {
                let a = parse_matrix_arg(text, triple.field(), triple.size())?;
                triple.project(&a, crate::triple::Part::P)?; // membership in g
                Some(a)
            }
            None => default_a,
        };
        Ok(Source { triple, base_point })
    }
}

fn require_a(src: &Source) -> Result<&AlgElement> {
    src.base_point.as_ref().ok_or_else(|| Error::Input("no base point A: pass --A or use an entry that defines one".into()))
}

#[derive(Serialize)]
struct CheckEnvelope<'a> {
    #[serde(flatten)]
    report: &'a CertReport,
    config: &'a RunConfig,
}

#[derive(Serialize)]
struct ScanEnvelope<'a> {
    triple: &'a str,
    config: &'a RunConfig,
    reports: &'a [CertReport],
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Certified => EXIT_CERTIFIED,
        Verdict::Refuted => EXIT_REFUTED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn csv_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        "inf".into()
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Certified => "CERTIFIED",
        Verdict::Refuted => "REFUTED",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

fn emit(path: Option<&str>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("{p}: {e}"))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Input(format!("stdout: {e}"))),
    }
}

fn csv_field(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn cmd_list(format: Format) -> String {
    #[derive(Serialize)]
    struct Row {
        #[serde(flatten)]
        info: catalog::CatalogInfo,
        default_params: EntryParams,
        dims: Option<[usize; 5]>,
        metadata: Option<catalog::Metadata>,
    }
    let rows: Vec<Row> = catalog::list()
        .into_iter()
        .map(|info| {
            let built = catalog::build(info.id, &EntryParams::default()).ok();
            Row {
                info,
                default_params: built.as_ref().map(|e| e.params.clone()).unwrap_or_default(),
                dims: built.as_ref().map(|e| {
                    let t = &e.triple;
                    [t.g().dim(), t.h().dim(), t.k().dim(), t.m().dim(), t.p().dim()]
                }),
                metadata: built.map(|e| e.metadata),
            }
        })
        .collect();
    match format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("listing serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("id,parameters,constraints,description\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    r.info.id,
                    csv_field(r.info.parameters),
                    csv_field(r.info.constraints),
                    csv_field(r.info.description)
                );
            }
            s
        }
    }
}

pub fn cmd_check(src: &Source, method: MethodArg, config: &RunConfig, timing: bool) -> Result<CertReport> {
    let started = Instant::now();
    let (budget, tols) = (config.budget(), config.tolerances());
    let mut r = match method {
        MethodArg::Fat => certify::check_fatness(&src.triple, &budget, tols)?,
        MethodArg::Part2 => certify::certify_part2(&src.triple, require_a(src)?, &budget, tols)?,
        MethodArg::Part3 => certify::certify_part3(&src.triple, require_a(src)?, tols)?,
    };
    if timing {
        r.wall_time_ms = Some(started.elapsed().as_millis() as u64);
    }
    Ok(r)
}

pub fn cmd_scan(src: &Source, config: &RunConfig, timing: bool) -> Result<Vec<CertReport>> {
    if config.s_values.is_empty() {
        return Err(Error::Input("scan needs a non-empty --s-values list".into()));
    }
    let a = require_a(src)?;
    let started = Instant::now();
    let mut reports = certify::scan_along_a(&src.triple, a, &config.s_values, &config.budget(), config.tolerances())?;
    if timing {
        let ms = started.elapsed().as_millis() as u64;
        for r in &mut reports {
            r.wall_time_ms = Some(ms);
        }
    }
    Ok(reports)
}

/// Runs a parsed command, writing output to `stdout` or `--out`; returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::List { format } => {
            emit(None, &cmd_list(format), stdout)?;
            Ok(0)
        }
        Command::Check(args) => {
            let config = RunConfig::resolve(&args.run)?;
            let src = args.source.resolve()?;
            let report = cmd_check(&src, args.method, &config, args.run.timing)?;
            let text = match config.format {
                Format::Json => serde_json::to_string_pretty(&CheckEnvelope { report: &report, config: &config })? + "\n",
                Format::Csv => format!(
                    "triple,method,verdict,score,tolerance\n{},{},{},{},{}\n",
                    csv_field(&report.triple),
                    serde_json::to_value(report.method)?.as_str().unwrap_or(""),
                    verdict_name(report.verdict),
                    csv_number(report.score),
                    csv_number(report.tolerance)
                ),
            };
            emit(config.output_path.as_deref(), &text, stdout)?;
            Ok(exit_code(report.verdict))
        }
        Command::Scan(args) => {
            let config = RunConfig::resolve(&args.run)?;
            let src = args.source.resolve()?;
            let reports = cmd_scan(&src, &config, args.run.timing)?;
            let text = match config.format {
                Format::Json => {
                    serde_json::to_string_pretty(&ScanEnvelope { triple: src.triple.label(), config: &config, reports: &reports })?
                        + "\n"
                }
                Format::Csv => {
                    let mut s = String::from("s,verdict,score\n");
                    for r in &reports {
                        let _ = writeln!(s, "{},{},{}", r.s.unwrap_or(f64::NAN), verdict_name(r.verdict), csv_number(r.score));
                    }
                    s
                }
            };
            emit(config.output_path.as_deref(), &text, stdout)?;
            Ok(0)
        }
        Command::Export(args) => {
            let src = args.source.resolve()?;
            let triple = match src.base_point {
                Some(a) => src.triple.with_base_point(a)?,
                None => src.triple,
            };
            let path = args.out.as_ref().map(|p| p.display().to_string());
            emit(path.as_deref(), &(triple.to_json() + "\n"), stdout)?;
            Ok(0)
        }
    }
}

/// Entry point used by the binary: parses `args`, runs, and maps errors to exit code 3.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    match run(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
