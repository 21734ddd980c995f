//! Command-line front end: argument parsing, input validation, dispatch and report output.
//!
//! Every command reads one JSON document and writes one compact JSON report,
//! to stdout or to `--output`. Failures print `{"error": {...}}` to stderr and
//! leave no output file behind.

mod commands;
pub mod schema;

use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::Error;

/// Environment variable overriding element caps when `--cap` is absent.
pub const CAP_ENV: &str = "FINQ_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "finq", version, about = "Exact finite-group quantum models")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closure, conjugacy classes and class coefficients of a permutation group.
    GroupInfo {
        /// JSON input file.
        input: PathBuf,
        /// Element cap; overrides FINQ_CAP.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Exact character table.
    CharTable {
        /// JSON input file.
        input: PathBuf,
        /// Element cap; overrides FINQ_CAP.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Multiplicities and block diagonalisation of the natural permutation representation.
    Decompose {
        /// JSON input file.
        input: PathBuf,
        /// Element cap; overrides FINQ_CAP.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Born probability of two natural vectors, optionally inside one component (0-based).
    Born {
        /// JSON input file.
        input: PathBuf,
        /// Irreducible component index, in character-table row order.
        #[arg(long)]
        component: Option<usize>,
        /// Comma-separated multiplicities of the prepared state.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        /// Comma-separated multiplicities of the measured state.
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<u64>,
        /// Element cap; overrides FINQ_CAP.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// All natural vector pairs with entries up to `--bound` that interfere to zero in a component.
    Interfere {
        /// JSON input file.
        input: PathBuf,
        /// Irreducible component index, in character-table row order.
        #[arg(long)]
        component: usize,
        /// Largest multiplicity searched.
        #[arg(long, default_value_t = 3)]
        bound: u64,
        /// Element cap; overrides FINQ_CAP.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Closure of a finitely generated gate group.
    GatesClosure {
        /// JSON input file.
        input: PathBuf,
        /// Element cap; overrides FINQ_CAP and any cap in the input.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Wreath-product construction and evolutions of a scenario.
    DynamicsCheck {
        /// JSON input file.
        input: PathBuf,
        /// Element cap; overrides FINQ_CAP.
        #[arg(long)]
        cap: Option<usize>,
    },
}

/// A failure with its exit code and machine-readable kind.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub exit: i32,
    pub kind: String,
    pub message: String,
    pub pointer: Option<String>,
    pub detail: Option<Box<Value>>,
}

impl CliError {
    pub fn input(kind: &str, message: String, pointer: Option<String>) -> Self {
        CliError { exit: EXIT_INPUT, kind: kind.into(), message, pointer, detail: None }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { exit: EXIT_INTERNAL, kind: "internal".into(), message: message.into(), pointer: None, detail: None }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(Box::new(detail));
        self
    }

    pub fn to_json(&self) -> Value {
        let mut e = json!({ "code": self.kind, "exit": self.exit, "message": self.message });
        if let Some(p) = &self.pointer {
            e["pointer"] = json!(p);
        }
        if let Some(d) = &self.detail {
            e["detail"] = (**d).clone();
        }
        json!({ "error": e })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        CliError { exit, kind: e.code().into(), message: e.to_string(), pointer: None, detail: None }
    }
}

/// Cap from the flag, else the environment, else `fallback`.
fn resolve_cap(flag: Option<usize>, fallback: usize) -> Result<usize, CliError> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::input("invalid_argument", format!("{CAP_ENV}={s} is not a count"), None)),
        Err(_) => Ok(fallback),
    }
}

/// Runs one parsed invocation and returns the report.
pub fn run(cli: &Cli) -> Result<Value, CliError> {
    let work = || commands::dispatch(&cli.command);
    match cli.threads {
        Some(0) => Err(CliError::input("invalid_argument", "--threads must be positive".into(), None)),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::internal(e.to_string()))?
            .install(work),
        None => work(),
    }
}

fn write_report(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::input("io_error", format!("{}: {e}", path.display()), None);
    let tmp = path.with_extension("partial");
    std::fs::write(&tmp, text).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let err = CliError::input("usage_error", e.to_string().trim_end().to_string(), None);
            eprintln!("{}", err.to_json());
            return err.exit;
        }
    };
    let outcome = run(&cli).and_then(|report| {
        let text = format!("{report}\n");
        match &cli.output {
            Some(p) => write_report(p, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit
        }
    }
}

/// The clap command, for help rendering.
pub fn command() -> clap::Command {
    Cli::command()
}
