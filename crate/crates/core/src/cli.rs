//! The `multspec` command line. Flags and `--config` files both resolve to
//! a [`RunConfig`], which [`execute`] turns into one artifact on stdout.
//!
//! Exit codes: 0 success, 1 verification or numerical failure, 2 parse or
//! configuration error, 3 theorem hypotheses not met.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipliers::{fredholm_analysis, is_multiplier, peak_refutation_scan, scan_csv};
use crate::numerics::ToleranceConfig;
use crate::spaces::{norm_of_symbol, SpaceSpec};
use crate::spectra::{essential_spectrum, spectrum, to_svg, SpectrumOptions};
use crate::symbols::Symbol;
use crate::verify::{run_suite, summary_table};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Norm,
    Spectrum,
    EssSpectrum,
    Fredholm,
    Multiplier,
    PeakScan,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionOverrides {
    pub boundary_samples: Option<usize>,
    pub occupancy_cells: Option<usize>,
}

/// One fully specified invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub command: Command,
    #[serde(default)]
    pub symbol: Option<String>,
    #[serde(default)]
    pub space: Option<SpaceSpec>,
    /// Complex number such as "0.5-0.25i".
    #[serde(default)]
    pub lambda: Option<String>,
    #[serde(default)]
    pub xi: Option<String>,
    #[serde(default)]
    pub kmax: Option<u32>,
    #[serde(default)]
    pub suite: Option<String>,
    #[serde(default)]
    pub annulus: bool,
    /// Also write the spectrum estimate as SVG to this path.
    #[serde(default)]
    pub svg: Option<PathBuf>,
    /// Dimension for `spectrum` when no space is given.
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub output_format: Option<Format>,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub resolution: ResolutionOverrides,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            command,
            symbol: None,
            space: None,
            lambda: None,
            xi: None,
            kmax: None,
            suite: None,
            annulus: false,
            svg: None,
            dim: None,
            output_format: None,
            tolerances: ToleranceConfig::default(),
            resolution: ResolutionOverrides::default(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "multspec", version, about = "Spectra and Fredholm theory of multiplication operators on spaces of analytic functions")]
struct Cli {
    /// JSON run configuration; replaces the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    refine_depth: Option<u32>,
    #[arg(long, global = true)]
    slope_fit_tol: Option<f64>,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Norm of a symbol with a bracket for the exact value.
    Norm {
        #[arg(short = 'u', long = "symbol", allow_hyphen_values = true)]
        symbol: String,
        #[arg(long)]
        space: String,
    },
    /// Spectrum of M_u.
    Spectrum {
        #[arg(short = 'u', long = "symbol", allow_hyphen_values = true)]
        symbol: String,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        boundary_samples: Option<usize>,
        #[arg(long)]
        occupancy_cells: Option<usize>,
    },
    /// Essential spectrum of M_u on a space.
    EssSpectrum {
        #[arg(short = 'u', long = "symbol", allow_hyphen_values = true)]
        symbol: String,
        #[arg(long)]
        space: String,
        #[arg(long)]
        annulus: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        boundary_samples: Option<usize>,
        #[arg(long)]
        occupancy_cells: Option<usize>,
    },
    /// Fredholm analysis of M_u − λI.
    Fredholm {
        #[arg(short = 'u', long = "symbol", allow_hyphen_values = true)]
        symbol: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        space: String,
    },
    /// Multiplier membership of u.
    Multiplier {
        #[arg(short = 'u', long = "symbol", allow_hyphen_values = true)]
        symbol: String,
        #[arg(long)]
        space: String,
    },
    /// ‖u·g_{ξ,k}‖ for k = 8, 16, … up to kmax.
    PeakScan {
        #[arg(short = 'u', long = "symbol", allow_hyphen_values = true)]
        symbol: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 1024)]
        kmax: u32,
    },
    /// Run invariant suites; exit 0 iff all pass.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn parse_space(text: &str) -> Result<SpaceSpec> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("space: {e}")))
}

fn config_from_cli(cli: Cli) -> Result<RunConfig> {
    let mut cfg = match (cli.config, cli.command) {
        (Some(_), Some(_)) => return Err(Error::Config("--config replaces the subcommand; give one or the other".into())),
        (None, None) => return Err(Error::Config("a subcommand or --config is required".into())),
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            cfg
        }
        (None, Some(sub)) => from_subcommand(sub)?,
    };
    if let Some(f) = cli.format {
        cfg.output_format = Some(f);
    }
    if let Some(v) = cli.rel_tol {
        cfg.tolerances.rel_tol = v;
    }
    if let Some(v) = cli.refine_depth {
        cfg.tolerances.boundary_refine_depth = v;
    }
    if let Some(v) = cli.slope_fit_tol {
        cfg.tolerances.slope_fit_tol = v;
    }
    Ok(cfg)
}

fn from_subcommand(sub: Sub) -> Result<RunConfig> {
    Ok(match sub {
        Sub::Norm { symbol, space } => RunConfig { symbol: Some(symbol), space: Some(parse_space(&space)?), ..RunConfig::new(Command::Norm) },
        Sub::Spectrum { symbol, svg, dim, boundary_samples, occupancy_cells } => RunConfig {
            symbol: Some(symbol),
            svg,
            dim,
            resolution: ResolutionOverrides { boundary_samples, occupancy_cells },
            ..RunConfig::new(Command::Spectrum)
        },
        Sub::EssSpectrum { symbol, space, annulus, svg, boundary_samples, occupancy_cells } => RunConfig {
            symbol: Some(symbol),
            space: Some(parse_space(&space)?),
            annulus,
            svg,
            resolution: ResolutionOverrides { boundary_samples, occupancy_cells },
            ..RunConfig::new(Command::EssSpectrum)
        },
        Sub::Fredholm { symbol, lambda, space } => RunConfig {
            symbol: Some(symbol),
            lambda: Some(lambda),
            space: Some(parse_space(&space)?),
            ..RunConfig::new(Command::Fredholm)
        },
        Sub::Multiplier { symbol, space } => {
            RunConfig { symbol: Some(symbol), space: Some(parse_space(&space)?), ..RunConfig::new(Command::Multiplier) }
        }
        Sub::PeakScan { symbol, xi, space, kmax } => RunConfig {
            symbol: Some(symbol),
            xi: Some(xi),
            space: Some(parse_space(&space)?),
            kmax: Some(kmax),
            ..RunConfig::new(Command::PeakScan)
        },
        Sub::Verify { suite } => RunConfig { suite: Some(suite), ..RunConfig::new(Command::Verify) },
    })
}

/// A complex literal in the symbol syntax, e.g. "1", "-0.5+2i", "i".
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = Symbol::parse(text)?;
    if s.degree_bound() != 0 {
        return Err(Error::Argument(format!("'{text}' is not a complex constant")));
    }
    Ok(s.value(Complex64::new(0.0, 0.0)))
}

/// The artifact produced by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub exit_code: i32,
}

/// Writes f64 values with 17 significant digits.
struct Precise;

impl serde_json::ser::Formatter for Precise {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("utf-8 JSON") + "\n"
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    symbol: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    space: Option<&'a SpaceSpec>,
    result: &'a T,
}

fn envelope<T: Serialize>(cfg: &RunConfig, result: &T) -> Result<String> {
    let symbol = match cfg.command {
        Command::Verify => None,
        _ => Some(symbol_for(cfg)?.render()),
    };
    Ok(to_json(&Envelope { schema_version: SCHEMA_VERSION, command: cfg.command, symbol, space: cfg.space.as_ref(), result }))
}

fn require<'a, T>(v: &'a Option<T>, what: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Config(format!("missing required field '{what}'")))
}

fn symbol_for(cfg: &RunConfig) -> Result<Symbol> {
    let text = require(&cfg.symbol, "symbol")?;
    match (cfg.space, cfg.dim) {
        (Some(s), Some(d)) if s.n != d => Err(Error::Config(format!("dim {d} disagrees with space dimension {}", s.n))),
        (Some(s), _) => Symbol::parse_in(text, s.n),
        (None, Some(d)) => Symbol::parse_in(text, d),
        (None, None) => Symbol::parse(text),
    }
}

/// Runs a configuration and renders its artifact.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.schema_version != SCHEMA_VERSION {
        return Err(Error::Config(format!("unsupported schema_version {}; expected {SCHEMA_VERSION}", cfg.schema_version)));
    }
    cfg.tolerances.validate()?;
    let tol = &cfg.tolerances;
    let format = cfg.output_format.unwrap_or(match cfg.command {
        Command::PeakScan => Format::Csv,
        Command::Verify => Format::Text,
        _ => Format::Json,
    });
    let allowed: &[Format] = match cfg.command {
        Command::Spectrum | Command::EssSpectrum => &[Format::Json, Format::Svg],
        Command::PeakScan => &[Format::Csv, Format::Json],
        Command::Verify => &[Format::Text, Format::Json],
        _ => &[Format::Json],
    };
    if !allowed.contains(&format) {
        return Err(Error::Config(format!("format {format:?} is not available for {:?}", cfg.command)));
    }
    let opts = SpectrumOptions {
        boundary_samples: cfg.resolution.boundary_samples.unwrap_or(SpectrumOptions::default().boundary_samples),
        occupancy_cells: cfg.resolution.occupancy_cells.unwrap_or(SpectrumOptions::default().occupancy_cells),
        annulus: cfg.annulus,
    };
    let ok = |body: String| Ok(Outcome { body, exit_code: 0 });
    match cfg.command {
        Command::Norm => {
            let est = norm_of_symbol(require(&cfg.space, "space")?, &symbol_for(cfg)?, tol)?;
            ok(envelope(cfg, &est)?)
        }
        Command::Spectrum | Command::EssSpectrum => {
            let u = symbol_for(cfg)?;
            let est = if cfg.command == Command::Spectrum {
                spectrum(&u, &opts, tol)?
            } else {
                essential_spectrum(&u, require(&cfg.space, "space")?, &opts, tol)?
            };
            if let Some(path) = &cfg.svg {
                std::fs::write(path, to_svg(&est)).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            }
            if format == Format::Svg {
                ok(to_svg(&est))
            } else {
                ok(envelope(cfg, &est)?)
            }
        }
        Command::Fredholm => {
            let lambda = parse_complex(require(&cfg.lambda, "lambda")?)?;
            let report = fredholm_analysis(&symbol_for(cfg)?, lambda, require(&cfg.space, "space")?, tol)?;
            ok(envelope(cfg, &report)?)
        }
        Command::Multiplier => {
            let report = is_multiplier(require(&cfg.space, "space")?, &symbol_for(cfg)?, tol)?;
            ok(envelope(cfg, &report)?)
        }
        Command::PeakScan => {
            let xi = parse_complex(require(&cfg.xi, "xi")?)?;
            let kmax = *require(&cfg.kmax, "kmax")?;
            if kmax < 8 {
                return Err(Error::Config(format!("kmax must be at least 8, got {kmax}")));
            }
            let grid: Vec<u32> = (3..32).map(|j| 1u32 << j).take_while(|&k| k <= kmax).collect();
            let rows = peak_refutation_scan(&symbol_for(cfg)?, xi, require(&cfg.space, "space")?, &grid, tol)?;
            if format == Format::Csv {
                ok(scan_csv(&rows))
            } else {
                ok(envelope(cfg, &rows)?)
            }
        }
        Command::Verify => {
            let reports = run_suite(cfg.suite.as_deref().unwrap_or("all"), tol)?;
            let passed = reports.iter().all(|r| r.passed);
            let body = if format == Format::Json { envelope(cfg, &reports)? } else { summary_table(&reports) };
            Ok(Outcome { body, exit_code: if passed { 0 } else { 1 } })
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::OutsideHypotheses { .. } => 3,
        Error::Syntax { .. } | Error::Argument(_) | Error::Config(_) | Error::Space(_) | Error::Domain(_) | Error::DenominatorVanishes { .. } => 2,
        _ => 1,
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("MULTSPEC_THREADS") {
        let n: usize = v.parse().map_err(|_| Error::Config(format!("MULTSPEC_THREADS must be a positive integer, got '{v}'")))?;
        if n == 0 {
            return Err(Error::Config("MULTSPEC_THREADS must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `args`, runs, writes the artifact to `out` and diagnostics to
/// `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let result = configure_threads().and_then(|_| config_from_cli(cli)).and_then(|cfg| execute(&cfg));
    match result {
        Ok(outcome) => {
            let _ = out.write_all(outcome.body.as_bytes());
            outcome.exit_code
        }
        Err(e) => {
            let _ = writeln!(err, "multspec: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("multspec").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("-0.5+2i").unwrap(), Complex64::new(-0.5, 2.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert!(parse_complex("z").is_err());
    }

    #[test]
    fn fredholm_json() {
        let (code, out, _) = run_args(&["fredholm", "-u", "z^2", "--lambda", "0", "--space", r#"{"variant":"bloch","alpha":0.5}"#]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["result"]["fredholm"], true);
        assert_eq!(v["result"]["index"], -2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["spectrum", "-u", "z+*2"]).0, 2);
        assert_eq!(run_args(&["norm", "-u", "z", "--space", r#"{"variant":"bloch","alpha":0.5,"bogus":1}"#]).0, 2);
        let (code, _, err) = run_args(&["ess-spectrum", "-u", "z", "--space", r#"{"variant":"bergman_sobolev","p":2,"alpha":0,"beta":0.75}"#]);
        assert_eq!(code, 3);
        assert!(err.contains("outside theorem hypotheses"));
        assert_eq!(run_args(&["verify", "--suite", "chu"]).0, 0);
    }

    #[test]
    fn seventeen_digits() {
        let s = to_json(&0.1f64);
        assert_eq!(s.trim(), "1.0000000000000001e-1");
        assert_eq!(s.trim().parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let bad = r#"{"schema_version":1,"command":"spectrum","symbol":"z","colour":"red"}"#;
        assert!(serde_json::from_str::<RunConfig>(bad).is_err());
        let good: RunConfig = serde_json::from_str(r#"{"schema_version":1,"command":"spectrum","symbol":"z"}"#).unwrap();
        assert_eq!(execute(&good).unwrap().exit_code, 0);
    }
}
