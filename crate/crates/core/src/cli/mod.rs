//! The `khlab` command-line front end.
//!
//! ```text
//! khlab homology --braid "1 1 1" --format json
//! khlab verify --braid "p=4; 1 3 1 3"
//! khlab jones --pd trefoil.pd --convention inverted
//! khlab cube-stats --braid "1 2 1 2" --cap 12
//! ```
//!
//! Exit codes: 0 success, 1 input error, 2 resource limit, 3 a verifier
//! check failed.

mod render;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::braid::{braid_closure, parse_braid};
use crate::cube::{build_complex, DEFAULT_CROSSING_CAP};
use crate::diagram::{from_pd, Diagram};
use crate::error::KhError;
use crate::homology::homology_table;
use crate::invariants::{
    apply_convention, graded_euler_characteristic, jones_state_sum, verify_positive_braid, Convention,
    VerificationReport,
};

pub use render::{
    render_document, render_table, CubeStats, DifferentialStats, GroupStats, InputEcho, OutputDocument, TableEntry,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Name of the environment variable holding the default crossing cap.
pub const CAP_ENV: &str = "KHLAB_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Braid,
    Pd,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Ring {
    /// Integral homology, torsion included.
    #[default]
    #[value(name = "z")]
    #[serde(rename = "z")]
    Integers,
    /// Free ranks only.
    #[value(name = "q")]
    #[serde(rename = "q")]
    Rationals,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Bigraded homology table.
    Homology,
    /// Jones polynomial by the state sum.
    Jones,
    /// Structure checks for a positive braid closure.
    Verify,
    /// Chain group sizes and differential nonzeros.
    CubeStats,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    #[default]
    Standard,
    Inverted,
}

#[derive(Debug, Parser)]
#[command(name = "khlab", version, about = "Integral Khovanov homology of braid closures and PD diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Braid word, e.g. "p=4; 1 3 -2".
    #[arg(long, global = true, allow_hyphen_values = true, conflicts_with = "pd")]
    braid: Option<String>,

    /// File with one "X[a,b,c,d] +|-" record per line.
    #[arg(long, global = true)]
    pd: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t)]
    ring: Ring,

    #[arg(long, global = true, value_enum, default_value_t)]
    convention: ConventionArg,

    /// Largest number of crossings accepted (default: $KHLAB_CAP, else 20).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t)]
    format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSource {
    Braid(String),
    Pd(PathBuf),
}

impl InputSource {
    pub fn kind(&self) -> InputKind {
        match self {
            InputSource::Braid(_) => InputKind::Braid,
            InputSource::Pd(_) => InputKind::Pd,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub input: InputSource,
    pub ring: Ring,
    pub convention: Convention,
    pub crossing_cap: usize,
    pub output_format: Format,
}

impl RunConfig {
    pub fn input_kind(&self) -> InputKind {
        self.input.kind()
    }
}

/// Failure of a single invocation, already mapped to its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<KhError> for CliError {
    fn from(e: KhError) -> Self {
        let code = if e.is_resource() { EXIT_RESOURCE } else { EXIT_INPUT };
        CliError { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_INPUT, message: message.into() }
}

/// Parses arguments (the first is the program name). `env_cap` is the value
/// of `KHLAB_CAP`, consulted when `--cap` is absent.
pub fn parse_config(args: &[String], env_cap: Option<&str>) -> Result<RunConfig, clap::Error> {
    let cli = Cli::try_parse_from(args)?;
    let input = match (cli.braid, cli.pd) {
        (Some(b), None) => InputSource::Braid(b),
        (None, Some(p)) => InputSource::Pd(p),
        _ => {
            return Err(clap::Error::raw(
                clap::error::ErrorKind::MissingRequiredArgument,
                "one of --braid <TEXT> or --pd <FILE> is required\n",
            ))
        }
    };
    let crossing_cap = match (cli.cap, env_cap) {
        (Some(c), _) => c as usize,
        (None, Some(v)) => match v.trim().parse::<usize>() {
            Ok(c) if c >= 1 => c,
            _ => {
                return Err(clap::Error::raw(
                    clap::error::ErrorKind::InvalidValue,
                    format!("{CAP_ENV} must be a positive integer, found {v:?}\n"),
                ))
            }
        },
        (None, None) => DEFAULT_CROSSING_CAP,
    };
    let convention = match cli.convention {
        ConventionArg::Standard => Convention::Standard,
        ConventionArg::Inverted => Convention::Inverted,
    };
    Ok(RunConfig { command: cli.command, input, ring: cli.ring, convention, crossing_cap, output_format: cli.format })
}

struct LoadedInput {
    diagram: Diagram,
    text: String,
    strands: Option<usize>,
    word: Option<crate::braid::BraidWord>,
}

fn load(input: &InputSource) -> Result<LoadedInput, CliError> {
    match input {
        InputSource::Braid(text) => {
            let word = parse_braid(text)?;
            Ok(LoadedInput {
                diagram: braid_closure(&word),
                text: word.to_text(),
                strands: Some(word.strands()),
                word: Some(word),
            })
        }
        InputSource::Pd(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
            let diagram = from_pd(&text)?;
            Ok(LoadedInput { diagram, text: text.trim_end().to_string(), strands: None, word: None })
        }
    }
}

/// 3 if any check failed, else 0. Skipped checks do not fail.
pub fn verify_exit_code(report: &VerificationReport) -> i32 {
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

/// Runs one configured invocation and returns the document plus its exit code.
pub fn execute(cfg: &RunConfig) -> Result<(OutputDocument, i32), CliError> {
    let start = Instant::now();
    let input = load(&cfg.input)?;
    let d = &input.diagram;
    let mut doc = OutputDocument {
        input: InputEcho { kind: cfg.input_kind(), text: input.text.clone(), strands: input.strands },
        n_plus: d.n_plus(),
        n_minus: d.n_minus(),
        components: d.component_count(),
        convention: cfg.convention,
        ring: cfg.ring,
        homology: None,
        euler_characteristic: None,
        jones: None,
        report: None,
        cube: None,
        elapsed_ms: 0,
    };
    let mut code = EXIT_OK;
    match cfg.command {
        Command::Homology => {
            let c = build_complex(d, cfg.crossing_cap)?;
            let mut table = apply_convention(&homology_table(&c)?, cfg.convention);
            if cfg.ring == Ring::Rationals {
                table = table.free_part();
            }
            let chi = graded_euler_characteristic(&c);
            doc.homology = Some(TableEntry::from_table(&table));
            doc.euler_characteristic = Some(match cfg.convention {
                Convention::Standard => chi,
                Convention::Inverted => chi.mirror(),
            });
        }
        Command::Jones => {
            let j = jones_state_sum(d, cfg.crossing_cap)?;
            doc.jones = Some(match cfg.convention {
                Convention::Standard => j,
                Convention::Inverted => j.mirror(),
            });
        }
        Command::Verify => {
            let word = input.word.as_ref().ok_or_else(|| input_error("verify needs a braid word (--braid)"))?;
            let report = verify_positive_braid(word, cfg.crossing_cap)?;
            code = verify_exit_code(&report);
            doc.report = Some(report);
        }
        Command::CubeStats => {
            let c = build_complex(d, cfg.crossing_cap)?;
            doc.cube = Some(CubeStats::of(&c));
        }
    }
    doc.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok((doc, code))
}

/// Full entry point: parses `args` (program name first), reads `KHLAB_CAP`
/// from the environment, writes the rendered document to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let env_cap = std::env::var(CAP_ENV).ok();
    run_with_env(args, env_cap.as_deref(), out, err)
}

/// [`run`] with the `KHLAB_CAP` value passed explicitly.
pub fn run_with_env(args: &[String], env_cap: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match parse_config(args, env_cap) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    match execute(&cfg) {
        Ok((doc, code)) => {
            let _ = write!(out, "{}", render_document(&doc, cfg.output_format));
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
