//! `obstruct` command line: single tuples, batch files, and the small
//! Seifert families.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::families::{self, SmallSeifertData};
use crate::lattice::{SearchConfig, DEFAULT_CAP};
use crate::obstruction::{self, ObstructionReport, PipelineConfig};
use crate::report::{self, FamilyJson};
use crate::seifert::Multiplicities;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;

pub const MIN_CAP: u64 = 1_000;

#[derive(Debug, Parser)]
#[command(
    name = "obstruct",
    about = "Exact obstruction certificates for contact-type embeddings of Brieskorn spheres in R^4",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    /// Pairwise-coprime fiber multiplicities a1 ... an
    #[arg(allow_negative_numbers = true)]
    multiplicities: Vec<i64>,

    /// Emit JSON instead of the text report
    #[arg(long, global = true)]
    json: bool,

    /// File with one whitespace-separated tuple per line (`#` starts a comment)
    #[arg(long, value_name = "FILE")]
    batch: Option<PathBuf>,

    /// Lattice enumeration budget in search nodes
    #[arg(long, env = "SEIFERT_GATE_CAP", value_name = "N")]
    cap: Option<u64>,

    /// Most negative k_n checked in the slope inequality
    #[arg(long = "kn-range", value_name = "K", default_value_t = -10, allow_negative_numbers = true)]
    kn_range: i64,

    /// Worker threads for batch evaluation
    #[arg(long, value_name = "J", default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Seifert data and transverse-contact test for M_p and M_{p,l}
    Family {
        kind: FamilyKind,
        #[arg(long, allow_negative_numbers = true)]
        p: i64,
        #[arg(long, allow_negative_numbers = true)]
        ell: Option<i64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyKind {
    Mp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    Single(Vec<i64>),
    Batch(PathBuf),
    Family { p: i64, ell: Option<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: Mode,
    pub cap: u64,
    pub format: OutputFormat,
    pub kn_bound: i64,
    pub jobs: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.cap < MIN_CAP {
            return Err(format!(
                "--cap must be at least {MIN_CAP}, got {}",
                self.cap
            ));
        }
        if self.kn_bound > -1 {
            return Err(format!("--kn-range must be <= -1, got {}", self.kn_bound));
        }
        if self.jobs == 0 {
            return Err("--jobs must be positive".to_string());
        }
        Ok(())
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            search: SearchConfig { cap: self.cap },
            kn_bound: self.kn_bound,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::EnumerationCapExceeded(_) => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::TooFewFibers(_) => "too_few_fibers",
        Error::MultiplicityTooSmall { .. } => "multiplicity_too_small",
        Error::NotCoprime { .. } => "not_coprime",
        Error::DivisionByZero => "division_by_zero",
        Error::InvalidRange(_) => "invalid_range",
        Error::SingularMatrix => "singular_matrix",
        Error::NotNegativeDefinite => "not_negative_definite",
        Error::NotUnimodular(_) => "not_unimodular",
        Error::EnumerationCapExceeded(_) => "enumeration_cap_exceeded",
        Error::NotDiagonalizable => "not_diagonalizable",
        Error::InvalidParameter(_) => "invalid_parameter",
        Error::NotApplicable(_) => "not_applicable",
    }
}

#[derive(Debug, Serialize)]
struct ErrorJson {
    kind: &'static str,
    message: String,
}

#[derive(Debug, Serialize)]
struct LineErrorJson<'a> {
    line: usize,
    input: &'a str,
    error: ErrorJson,
}

/// Full pipeline for one tuple, with wall-clock time in milliseconds.
pub fn evaluate(raw: &[i64], config: PipelineConfig) -> Result<(ObstructionReport, u64), Error> {
    let start = Instant::now();
    let m = Multiplicities::new(raw)?;
    let report = obstruction::verdict(&m, config)?;
    Ok((report, start.elapsed().as_millis() as u64))
}

fn render(report: &ObstructionReport, elapsed_ms: u64, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => report::to_json(report, elapsed_ms) + "\n",
        OutputFormat::Text => report::to_text(report, elapsed_ms),
    }
}

pub fn run_single(
    config: &RunConfig,
    raw: &[i64],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match evaluate(raw, config.pipeline()) {
        Ok((report, ms)) => {
            let _ = out.write_all(render(&report, ms, config.format).as_bytes());
            EXIT_OK
        }
        Err(e) => {
            if config.format == OutputFormat::Json {
                let body = ErrorJson {
                    kind: error_kind(&e),
                    message: e.to_string(),
                };
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&body).expect("error serializes")
                );
            }
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

enum LineOutcome {
    Report(Box<ObstructionReport>, u64),
    Failed(Error),
    Unparsed(String),
}

struct BatchLine<'a> {
    number: usize,
    text: &'a str,
    tokens: Result<Vec<i64>, String>,
}

fn parse_batch(contents: &str) -> Vec<BatchLine<'_>> {
    contents
        .lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let text = line.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                return None;
            }
            let tokens = text
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| format!("not an integer: {t:?}"))
                })
                .collect();
            Some(BatchLine {
                number: i + 1,
                text,
                tokens,
            })
        })
        .collect()
}

/// Evaluates every tuple line; reports are written in input order.
pub fn run_batch_str(
    config: &RunConfig,
    contents: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let lines = parse_batch(contents);
    let pipeline = config.pipeline();
    let eval = |line: &BatchLine| match &line.tokens {
        Ok(raw) => match evaluate(raw, pipeline) {
            Ok((r, ms)) => LineOutcome::Report(Box::new(r), ms),
            Err(e) => LineOutcome::Failed(e),
        },
        Err(msg) => LineOutcome::Unparsed(msg.clone()),
    };
    let outcomes: Vec<LineOutcome> = if config.jobs > 1 {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
        {
            Ok(pool) => pool.install(|| lines.par_iter().map(eval).collect()),
            Err(e) => {
                let _ = writeln!(err, "error: cannot start worker pool: {e}");
                return EXIT_INVALID;
            }
        }
    } else {
        lines.iter().map(eval).collect()
    };

    let mut all_parsed = true;
    for (line, outcome) in lines.iter().zip(outcomes) {
        let failure = match outcome {
            LineOutcome::Report(r, ms) => {
                let _ = out.write_all(render(&r, ms, config.format).as_bytes());
                if config.format == OutputFormat::Text {
                    let _ = writeln!(out);
                }
                continue;
            }
            LineOutcome::Failed(e) => ErrorJson {
                kind: error_kind(&e),
                message: e.to_string(),
            },
            LineOutcome::Unparsed(message) => {
                all_parsed = false;
                ErrorJson {
                    kind: "parse_error",
                    message,
                }
            }
        };
        match config.format {
            OutputFormat::Json => {
                let body = LineErrorJson {
                    line: line.number,
                    input: line.text,
                    error: failure,
                };
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&body).expect("error serializes")
                );
            }
            OutputFormat::Text => {
                let _ = writeln!(
                    out,
                    "line {}: {}: {}\n",
                    line.number, failure.kind, failure.message
                );
            }
        }
    }
    if all_parsed {
        EXIT_OK
    } else {
        EXIT_INVALID
    }
}

pub fn run_batch(
    config: &RunConfig,
    path: &std::path::Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match std::fs::read_to_string(path) {
        Ok(contents) => run_batch_str(config, &contents, out, err),
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            EXIT_INVALID
        }
    }
}

pub fn family_data(p: i64, ell: Option<i64>) -> Result<SmallSeifertData, Error> {
    match ell {
        None => families::mp_family(p),
        Some(l) => families::mpl_family(p, l),
    }
}

pub fn run_family(
    config: &RunConfig,
    p: i64,
    ell: Option<i64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let data = match family_data(p, ell) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let witness = families::transverse_contact_exists(&data).map_err(|e| e.to_string());
    let body = FamilyJson::new(&data, witness);
    match config.format {
        OutputFormat::Json => {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string(&body).expect("family serializes")
            );
        }
        OutputFormat::Text => {
            let _ = out.write_all(report::family_text(&body).as_bytes());
        }
    }
    EXIT_OK
}

/// Parses `args` (including the program name) and runs the requested mode.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let mode = match (&cli.command, &cli.batch) {
        (
            Some(Command::Family {
                kind: FamilyKind::Mp,
                p,
                ell,
            }),
            _,
        ) => Mode::Family { p: *p, ell: *ell },
        (None, Some(path)) => {
            if !cli.multiplicities.is_empty() {
                let _ = writeln!(
                    err,
                    "error: --batch cannot be combined with positional multiplicities"
                );
                return EXIT_INVALID;
            }
            Mode::Batch(path.clone())
        }
        (None, None) => Mode::Single(cli.multiplicities.clone()),
    };
    let config = RunConfig {
        mode,
        cap: cli.cap.unwrap_or(DEFAULT_CAP),
        format: if cli.json {
            OutputFormat::Json
        } else {
            OutputFormat::Text
        },
        kn_bound: cli.kn_range,
        jobs: cli.jobs,
    };
    if let Err(msg) = config.validate() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_INVALID;
    }
    match &config.mode {
        Mode::Single(raw) => run_single(&config, raw, out, err),
        Mode::Batch(path) => run_batch(&config, path, out, err),
        Mode::Family { p, ell } => run_family(&config, *p, *ell, out, err),
    }
}
