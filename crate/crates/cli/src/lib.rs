//! Command-line front end: file I/O, the fuzzing driver and SVG output.
//!
//! [`run`] takes arguments and output streams and returns the process exit
//! code, so the whole surface is testable in-process.

pub mod draw;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use splitorder::suites::{run_all, FuzzConfig, SuiteReport};
use splitorder::{
    dvr::check_prime, intersect_maximal, maximal_orders_containing, polytope_of, verify_roundtrip, ApartmentVertex,
    Execution, ExponentMatrix,
};

pub use draw::{render_svg, DrawOptions};

/// Largest `n` the fuzzer accepts; enumeration cost grows as width^(n-1).
pub const MAX_FUZZ_N: usize = 4;
/// Largest `|entry|` the fuzzer accepts.
pub const MAX_FUZZ_ENTRY: i64 = 20;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("drawing needs n = 3, got n = {0}")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Core(#[from] splitorder::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "splitorder", version, about = "Split orders, their polytopes, and invariant checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report whether an exponent matrix is an order (exit 0) or not (exit 1).
    Check(Input),
    /// Print the order hull as JSON.
    Hull(Input),
    /// Print the lattice points of C(nu) as JSON; the count goes to stderr.
    Vertices(Input),
    /// Intersect the maximal orders at a JSON list of vertices.
    Intersect(Input),
    /// Run the round trip nu -> vertices -> intersection and print the report.
    Roundtrip(Input),
    /// Normal form of a 2 x 2 order: level and tree geodesic.
    Hijikata(Input),
    /// Run every invariant suite on seeded random inputs.
    Fuzz(FuzzArgs),
    /// Render C(nu) for n = 3 as SVG.
    Draw(DrawArgs),
}

#[derive(Debug, Args)]
pub struct Input {
    /// JSON input file, or `-` for stdin.
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    /// Prime for the local-field suites.
    #[arg(long, default_value_t = 2)]
    pub prime: u32,
    /// Master seed; each trial draws from its own stream.
    #[arg(long, default_value_t = FuzzConfig::default().seed)]
    pub seed: u64,
    /// Trials per size for the exponent-matrix sweeps.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Largest matrix size; sizes 2..=n are swept.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Smallest random entry.
    #[arg(long, default_value_t = -3, allow_negative_numbers = true)]
    pub min: i64,
    /// Largest random entry.
    #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
    pub max: i64,
    /// Where to write the counterexample dump (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run on one thread; reports are identical either way.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct DrawArgs {
    /// JSON exponent matrix, or `-` for stdin.
    pub file: PathBuf,
    /// SVG output path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Pixels per lattice step.
    #[arg(long, default_value_t = 40.0)]
    pub scale: f64,
    /// Lattice steps of padding beyond the largest entry.
    #[arg(long, default_value_t = 1)]
    pub margin: i64,
}

impl FuzzArgs {
    pub fn config(&self) -> Result<FuzzConfig, CliError> {
        if self.trials == 0 {
            return Err(CliError::Config("--trials must be at least 1".into()));
        }
        if self.min > self.max {
            return Err(CliError::Config(format!("empty entry range [{}, {}]", self.min, self.max)));
        }
        if self.min.abs().max(self.max.abs()) > MAX_FUZZ_ENTRY {
            return Err(CliError::Config(format!("entries must lie in [-{MAX_FUZZ_ENTRY}, {MAX_FUZZ_ENTRY}]")));
        }
        if !(2..=MAX_FUZZ_N).contains(&self.n) {
            return Err(CliError::Config(format!("--n must lie in 2..={MAX_FUZZ_N}")));
        }
        check_prime(self.prime).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(FuzzConfig {
            min_n: 2,
            max_n: self.n,
            lo: self.min,
            hi: self.max,
            trials: self.trials,
            seed: self.seed,
            prime: self.prime,
        })
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io { path: path.display().to_string(), source };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

fn read_matrix(path: &Path) -> Result<ExponentMatrix, CliError> {
    parse(&read_input(path)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version also arrive here
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    match cmd {
        Command::Check(i) => cmd_check(&read_matrix(&i.file)?, out),
        Command::Hull(i) => {
            let hull = read_matrix(&i.file)?.order_hull()?;
            emit(out, &json!(hull).to_string());
            Ok(EXIT_OK)
        }
        Command::Vertices(i) => {
            let pts = polytope_of(&read_matrix(&i.file)?).enumerate_lattice_points()?;
            emit(out, &json!(pts).to_string());
            let _ = writeln!(err, "{} lattice points", pts.len());
            Ok(EXIT_OK)
        }
        Command::Intersect(i) => {
            let vs: Vec<ApartmentVertex> = parse(&read_input(&i.file)?)?;
            emit(out, &json!(intersect_maximal(&vs)?).to_string());
            Ok(EXIT_OK)
        }
        Command::Roundtrip(i) => {
            let report = verify_roundtrip(&read_matrix(&i.file)?)?;
            emit(out, &serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Hijikata(i) => cmd_hijikata(&read_matrix(&i.file)?, out),
        Command::Fuzz(args) => {
            let exec = if args.sequential { Execution::Sequential } else { Execution::default() };
            cmd_fuzz(&args.config()?, exec, args.out.as_deref(), out)
        }
        Command::Draw(args) => {
            if !(args.scale.is_finite() && args.scale > 0.0) {
                return Err(CliError::Config("--scale must be positive".into()));
            }
            let nu = read_matrix(&args.file)?;
            let opts = DrawOptions { scale: args.scale, margin: args.margin };
            if nu.n() != 3 {
                return Err(CliError::UnsupportedDimension(nu.n()));
            }
            let pts = polytope_of(&nu).enumerate_lattice_points()?;
            let svg = render_svg(&nu, &pts, opts)?;
            match &args.out {
                Some(path) => write_file(path, &svg)?,
                None => {
                    let _ = out.write_all(svg.as_bytes());
                }
            }
            let _ = writeln!(err, "{} lattice points", pts.len());
            Ok(EXIT_OK)
        }
    }
}

fn emit(out: &mut dyn Write, line: &str) {
    let _ = writeln!(out, "{line}");
}

/// Prints the order report; exit 0 for an order, 1 otherwise.
pub fn cmd_check(nu: &ExponentMatrix, out: &mut dyn Write) -> Result<u8, CliError> {
    let order = nu.is_order();
    emit(out, &format!("order: {order}"));
    emit(out, &format!("reduced: {}", splitorder::is_reduced(nu)));
    emit(out, &format!("has_containing_maximal: {}", nu.has_containing_maximal()));
    if order {
        return Ok(EXIT_OK);
    }
    if let Some(t) = nu.violated_triple() {
        emit(out, &format!("violated: ({},{}) via k={}", t.i + 1, t.j + 1, t.k + 1));
    }
    match nu.order_hull() {
        Ok(h) => emit(out, &format!("hull: {h}")),
        Err(e) => emit(out, &format!("hull: none ({e})")),
    }
    Ok(EXIT_FAIL)
}

fn cmd_hijikata(nu: &ExponentMatrix, out: &mut dyn Write) -> Result<u8, CliError> {
    let level = nu.hijikata_normal_form()?;
    let verts = maximal_orders_containing(nu)?;
    emit(out, &format!("level: {level}"));
    emit(out, &format!("normal form: [[0,0],[{level},0]]"));
    emit(out, &format!("geodesic: {}", json!(verts)));
    Ok(EXIT_OK)
}

fn summary_line(r: &SuiteReport) -> String {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    let counters: Vec<String> = r.counters.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut line = format!("{status} {}: {} trials", r.name, r.trials);
    if !counters.is_empty() {
        line.push_str(&format!(" ({})", counters.join(", ")));
    }
    if !r.passed() {
        line.push_str(&format!(", {} failing", r.failures.len()));
    }
    line
}

/// Runs every suite; exit 1 and a JSON dump of the first failure of each
/// failing suite on any violation.
pub fn cmd_fuzz(cfg: &FuzzConfig, exec: Execution, dump: Option<&Path>, out: &mut dyn Write) -> Result<u8, CliError> {
    emit(
        out,
        &format!(
            "fuzz: n in 2..={}, entries in [{}, {}], {} trials, seed {}, p = {}",
            cfg.max_n, cfg.lo, cfg.hi, cfg.trials, cfg.seed, cfg.prime
        ),
    );
    let reports = run_all(cfg, exec);
    report_fuzz(cfg, &reports, dump, out)
}

/// Summary lines for finished suites, plus the counterexample dump if any failed.
pub fn report_fuzz(
    cfg: &FuzzConfig,
    reports: &[SuiteReport],
    dump: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    for r in reports {
        emit(out, &summary_line(r));
    }
    let failing: Vec<_> =
        reports.iter().filter(|r| !r.passed()).map(|r| json!({ "suite": r.name, "failure": r.failures[0] })).collect();
    if failing.is_empty() {
        emit(out, "all invariants hold");
        return Ok(EXIT_OK);
    }
    let text =
        serde_json::to_string_pretty(&json!({ "config": cfg, "counterexamples": failing })).expect("dump serializes");
    match dump {
        Some(path) => {
            write_file(path, &text)?;
            emit(out, &format!("counterexamples written to {}", path.display()));
        }
        None => emit(out, &text),
    }
    Ok(EXIT_FAIL)
}
