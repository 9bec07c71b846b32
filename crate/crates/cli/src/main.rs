//! `permreal`: classify, realize and certify real spectra.
//!
//! Exit codes: 0 pass, 1 usage or parse error, 2 verified failure,
//! 3 inconclusive search.

mod input;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permreal::bench::{run_bench, BenchConfig};
use permreal::exact::{self, certify_exact, parse_rational, realize_exact, ExactRealization};
use permreal::explorer::{explore, to_jsonl, ExploreConfig, Strategy, MAX_DIM, MIN_DIM};
use permreal::linalg::{matrix_from_text, matrix_to_csv, DenseMatrix, Matrix};
use permreal::spectrum::{DEFAULT_DEPTH, DEFAULT_SIGN_TOL};
use permreal::verify::{certify_external, RealizationParams};
use permreal::{realize, Method, MethodChoice, Realization, RealizeOptions, Spectrum, TolProfile};
use serde::Deserialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Default tolerance profile, `abs,rel[,entry,residual]`.
pub const TOL_ENV: &str = "PERMREAL_TOL";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

impl From<permreal::Error> for CliError {
    fn from(e: permreal::Error) -> Self {
        use permreal::Error as E;
        match e {
            E::EmptyInput
            | E::NonFiniteEntry { .. }
            | E::NotSquare { .. }
            | E::DimensionMismatch { .. }
            | E::DimensionOutOfRange { .. }
            | E::DimensionTooLarge { .. }
            | E::DimensionTooSmall { .. }
            | E::Parse(_) => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "permreal", version, about = "Nonnegative permutative realizations of real spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct SpectrumSource {
    /// Inline comma-separated spectrum, e.g. "10,-1,-2,-3".
    #[arg(allow_hyphen_values = true)]
    spectrum: Option<String>,
    /// Spectrum file: a JSON array or one value per line.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl SpectrumSource {
    fn tokens(&self) -> Result<Vec<String>, CliError> {
        input::spectrum_tokens(self.spectrum.as_deref(), self.file.as_deref())
    }

    fn spectrum(&self) -> Result<Spectrum, CliError> {
        input::parse_spectrum(&self.tokens()?)
    }
}

#[derive(Args, Clone, Default)]
struct TolArgs {
    /// Absolute coefficient tolerance (overrides the environment profile).
    #[arg(long)]
    tol_abs: Option<f64>,
    /// Relative coefficient tolerance (overrides the environment profile).
    #[arg(long)]
    tol_rel: Option<f64>,
}

impl TolArgs {
    fn profile(&self) -> Result<TolProfile, CliError> {
        let mut p = match std::env::var(TOL_ENV) {
            Ok(text) if !text.trim().is_empty() => TolProfile::parse(&text)
                .map_err(|e| CliError::Usage(format!("{TOL_ENV}: {e}")))?,
            _ => TolProfile::default(),
        };
        for (slot, v, name) in [(&mut p.abs, self.tol_abs, "--tol-abs"), (&mut p.rel, self.tol_rel, "--tol-rel")] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(CliError::Usage(format!("{name} must be finite and >= 0")));
                }
                *slot = v;
            }
        }
        Ok(p)
    }
}

#[derive(Args, Clone)]
struct SearchArgs {
    #[arg(long, default_value = "alpha", value_parser = parse_strategy)]
    strategy: Strategy,
    /// Total objective evaluations.
    #[arg(long, default_value_t = 20_000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SearchArgs {
    fn config(&self, parallel: bool) -> ExploreConfig {
        ExploreConfig {
            strategy: self.strategy,
            budget: self.budget,
            seed: self.seed,
            parallel,
            ..ExploreConfig::default()
        }
    }
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: permreal::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<MethodChoice, String> {
    s.parse().map_err(|e: permreal::Error| e.to_string())
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a spectrum and test the necessary conditions.
    Check {
        #[command(flatten)]
        source: SpectrumSource,
        /// Highest power sum checked.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Relative sign band for classification and power sums.
        #[arg(long, default_value_t = DEFAULT_SIGN_TOL)]
        sign_tol: f64,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Build and certify a nonnegative realizing matrix.
    Realize {
        #[command(flatten)]
        source: SpectrumSource,
        /// auto, suleimanova, small, companion or explore.
        #[arg(long, default_value = "auto", value_parser = parse_method)]
        method: MethodChoice,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
        /// Also write the matrix (CSV, or JSON with --format json) to this file.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Exact rational arithmetic; inputs may be decimals or p/q.
        #[arg(long)]
        exact: bool,
    },
    /// Certify a matrix file against a spectrum.
    Verify {
        /// Matrix file: CSV, JSON nested array, or a `realize --format json` artifact.
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        source: SpectrumSource,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
        #[arg(long)]
        exact: bool,
    },
    /// Time the permutative construction against the companion baseline.
    Bench {
        /// Comma-separated orders.
        #[arg(long, default_value = "256,512,1024,2048")]
        sizes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Search permutation patterns for a permutative realization.
    Explore {
        #[command(flatten)]
        source: SpectrumSource,
        #[command(flatten)]
        search: SearchArgs,
        /// Evaluate candidate patterns in parallel.
        #[arg(long)]
        parallel: bool,
        /// Write the JSON-lines log here instead of stdout.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn status(passed: bool) -> u8 {
    if passed {
        0
    } else {
        2
    }
}

fn cmd_check(source: &SpectrumSource, depth: usize, sign_tol: f64, format: Format) -> Result<u8, CliError> {
    let s = source.spectrum()?;
    let class = s.classify(sign_tol);
    let cond = s.check_necessary(depth, sign_tol);
    match format {
        Format::Json => print!(
            "{}",
            to_json(&serde_json::json!({ "classification": class, "conditions": cond, "passed": cond.passed() }))
        ),
        Format::Csv | Format::Pretty => print!("{}", output::check(&class, &cond)),
    }
    Ok(status(cond.passed()))
}

fn exact_json(r: &ExactRealization) -> serde_json::Value {
    let rows: Vec<Vec<String>> = r
        .matrix
        .row_iter()
        .map(|row| row.iter().map(exact::format_rational).collect())
        .collect();
    serde_json::json!({
        "method": r.method,
        "case": r.case,
        "block_sizes": r.block_sizes,
        "matrix": rows,
        "certificate": r.certify(),
    })
}

fn cmd_realize_exact(source: &SpectrumSource, format: Format, out: Option<&Path>) -> Result<u8, CliError> {
    let values = source
        .tokens()?
        .iter()
        .map(|t| parse_rational(t))
        .collect::<Result<Vec<_>, _>>()?;
    let r = realize_exact(values)?;
    let report = r.certify();
    let csv = exact::matrix_to_csv_exact(&r.matrix);
    let json = to_json(&exact_json(&r));
    match format {
        Format::Csv => print!("{csv}"),
        Format::Json => print!("{json}"),
        Format::Pretty => {
            println!("method: {}", r.method);
            if let Some(case) = r.case {
                println!("case: {case}");
            }
            println!("matrix:");
            let rows: Vec<Vec<String>> =
                r.matrix.row_iter().map(|row| row.iter().map(exact::format_rational).collect()).collect();
            print!("{}", output::aligned(&rows));
            print!("{}", output::report_lines(&report));
        }
    }
    if let Some(path) = out {
        write_file(path, if format == Format::Json { &json } else { &csv })?;
    }
    Ok(status(report.passed))
}

fn cmd_realize(
    source: &SpectrumSource,
    method: MethodChoice,
    tol: &TolArgs,
    search: &SearchArgs,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let spectrum = source.spectrum()?;
    let options = RealizeOptions {
        method,
        profile: tol.profile()?,
        explore: search.config(false),
    };
    let outcome = realize(&spectrum, &options)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let r = &outcome.realization;
    let passed = r.is_certified();
    let csv = matrix_to_csv(&r.matrix);
    let json = to_json(r);
    match format {
        Format::Csv => {
            print!("{csv}");
            eprintln!("method: {}; certificate: {}", r.method, if passed { "pass" } else { "fail" });
        }
        Format::Json => print!("{json}"),
        Format::Pretty => print!("{}", output::realization(r)),
    }
    if let Some(path) = out {
        write_file(path, if format == Format::Json { &json } else { &csv })?;
    }
    Ok(status(passed))
}

/// A `realize --format json` artifact; the target comes from the command line.
#[derive(Deserialize)]
struct StoredRealization {
    matrix: DenseMatrix,
    method: Method,
    #[serde(default)]
    params: RealizationParams,
}

fn load_realization(text: &str, spectrum: &Spectrum, profile: &TolProfile) -> Result<Realization, CliError> {
    let n = spectrum.len();
    let check_dims = |m: &DenseMatrix| -> Result<(), CliError> {
        let k = m.ensure_square()?;
        if k != n {
            return Err(permreal::Error::DimensionMismatch { expected: n, got: k }.into());
        }
        Ok(())
    };
    if text.trim_start().starts_with('{') {
        let stored: StoredRealization =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad realization file: {e}")))?;
        check_dims(&stored.matrix)?;
        let r = Realization::new(stored.matrix, stored.method, spectrum, stored.params);
        return Ok(r.certified(profile));
    }
    let m = matrix_from_text(text)?;
    check_dims(&m)?;
    Ok(certify_external(m, spectrum, profile))
}

fn cmd_verify(
    matrix: &Path,
    source: &SpectrumSource,
    tol: &TolArgs,
    format: Format,
    exact_mode: bool,
) -> Result<u8, CliError> {
    let text = input::read_file(matrix)?;
    let report = if exact_mode {
        let target = source
            .tokens()?
            .iter()
            .map(|t| parse_rational(t))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = input::matrix_token_rows(&text)?
            .iter()
            .map(|row| row.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let m = Matrix::from_rows(rows)?;
        let k = m.ensure_square()?;
        if k != target.len() {
            return Err(permreal::Error::DimensionMismatch { expected: target.len(), got: k }.into());
        }
        let mut target = target;
        target.sort_by(|a, b| b.cmp(a));
        certify_exact(&m, Method::External, &[k], &target)
    } else {
        let spectrum = source.spectrum()?;
        let r = load_realization(&text, &spectrum, &tol.profile()?)?;
        r.certificate.expect("certified on load")
    };
    match format {
        Format::Json => print!("{}", to_json(&report)),
        Format::Csv | Format::Pretty => print!("{}", output::report_lines(&report)),
    }
    Ok(status(report.passed))
}

fn cmd_bench(sizes: &str, seed: u64, format: Format) -> Result<u8, CliError> {
    let sizes = sizes
        .split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(n) if n >= 2 => Ok(n),
            _ => Err(CliError::Usage(format!("bad size `{t}`"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let report = run_bench(&BenchConfig {
        sizes,
        seed,
        ..BenchConfig::default()
    });
    match format {
        Format::Json => print!("{}", to_json(&report)),
        Format::Csv | Format::Pretty => print!("{}", output::bench(&report)),
    }
    Ok(status(report.cross_check_n4))
}

fn cmd_explore(source: &SpectrumSource, search: &SearchArgs, parallel: bool, log: Option<&Path>) -> Result<u8, CliError> {
    let spectrum = source.spectrum()?;
    let n = spectrum.len();
    if !(MIN_DIM..=MAX_DIM).contains(&n) {
        return Err(CliError::Usage(format!("explore supports n in {MIN_DIM}..={MAX_DIM}, got {n}")));
    }
    let results = explore(&spectrum, &search.config(parallel))?;
    let lines = to_jsonl(&results);
    match log {
        Some(path) => write_file(path, &lines)?,
        None => print!("{lines}"),
    }
    let found = results.iter().find(|r| r.certified);
    match (found, results.first()) {
        (Some(r), _) => eprintln!("certified: {} with objective {:e}", r.tuple.encoding(), r.objective),
        (None, Some(best)) => eprintln!("inconclusive: best objective {:e} ({})", best.objective, best.tuple.encoding()),
        (None, None) => eprintln!("inconclusive: no candidates"),
    }
    Ok(if found.is_some() { 0 } else { 3 })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check { source, depth, sign_tol, format } => cmd_check(&source, depth, sign_tol, format),
        Command::Realize { source, method, tol, search, format, output, exact } => {
            if exact {
                cmd_realize_exact(&source, format, output.as_deref())
            } else {
                cmd_realize(&source, method, &tol, &search, format, output.as_deref())
            }
        }
        Command::Verify { matrix, source, tol, format, exact } => cmd_verify(&matrix, &source, &tol, format, exact),
        Command::Bench { sizes, seed, format } => cmd_bench(&sizes, seed, format),
        Command::Explore { source, search, parallel, log } => cmd_explore(&source, &search, parallel, log.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
