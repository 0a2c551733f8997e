//! Command-line front end for `cstar-core`.
//!
//! [`run`] turns parsed arguments into a [`Report`] plus its text rendering;
//! the binary only prints them and exits with [`Report::exit_code`].

mod commands;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cstar_core::graph::{parse_graph, parse_matrix_shorthand, Graph, GraphError};

pub use report::{CommandEcho, InputDigest, Report};

/// Decision computed (Yes or No, or a plain analysis).
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_OUT_OF_SCOPE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

pub const DEFAULT_MAX_VERTICES: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "cstar", version, about = "Invariants and stable-isomorphism decisions for graph C*-algebras")]
pub struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertex classification, saturated hereditary sets, ideal lattice, Condition (K), distinguished ideals.
    Analyze(Inputs),
    /// K0 and K1, and with --ideal the six-term sequence of the ideal.
    Ktheory {
        #[command(flatten)]
        inputs: Inputs,
        /// Vertex names of a saturated hereditary set, comma separated.
        #[arg(long, value_delimiter = ',', value_name = "V1,V2,...")]
        ideal: Option<Vec<String>>,
    },
    /// The lattice of gauge-invariant ideals as admissible pairs.
    Ideals(Inputs),
    /// Decide stable isomorphism of two graph algebras.
    Classify(Inputs),
    /// Stability of the unique ideal and existence of a normalized graph trace.
    Stability(Inputs),
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Graph files.
    pub paths: Vec<PathBuf>,
    /// Vertex matrix shorthand such as "4,1;0,0" (`inf` allowed); taken after the files.
    #[arg(long = "matrix", value_name = "ROWS")]
    pub matrices: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{input}: {err}")]
    Parse { input: String, err: GraphError },
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    OutOfScope(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::OutOfScope(_) => EXIT_OUT_OF_SCOPE,
            _ => EXIT_USAGE,
        }
    }
}

/// A report and its human-readable form.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub text: String,
}

impl Outcome {
    /// What the binary writes to stdout.
    pub fn stdout(&self, json: bool) -> String {
        if json {
            self.report.to_json()
        } else {
            self.text.clone()
        }
    }
}

enum Source<'a> {
    File(&'a PathBuf),
    Matrix(&'a str),
}

impl Inputs {
    fn sources(&self) -> Vec<Source<'_>> {
        self.paths
            .iter()
            .map(Source::File)
            .chain(self.matrices.iter().map(|m| Source::Matrix(m)))
            .collect()
    }

    pub(crate) fn labels(&self) -> Vec<String> {
        self.sources()
            .iter()
            .map(|s| match s {
                Source::File(p) => p.display().to_string(),
                Source::Matrix(m) => format!("--matrix {m}"),
            })
            .collect()
    }

    /// Reads and parses every input; digests of the inputs read so far are kept on failure.
    pub(crate) fn load(&self, expected: usize, digests: &mut Vec<InputDigest>) -> Result<Vec<Graph>, CliError> {
        let sources = self.sources();
        if sources.len() != expected {
            return Err(CliError::Usage(format!(
                "expected {expected} graph input(s), got {}",
                sources.len()
            )));
        }
        let mut graphs = Vec::new();
        for s in sources {
            let (label, kind, text) = match s {
                Source::File(p) => {
                    let label = p.display().to_string();
                    let bytes = std::fs::read(p).map_err(|err| CliError::Io {
                        path: label.clone(),
                        err,
                    })?;
                    let text = String::from_utf8(bytes)
                        .map_err(|_| CliError::Usage(format!("{label}: input is not UTF-8")))?;
                    (label, "file", text)
                }
                Source::Matrix(m) => (m.to_string(), "matrix", m.to_string()),
            };
            let mut digest = InputDigest::new(&label, kind, text.as_bytes());
            let parsed = if kind == "file" {
                parse_graph(&text)
            } else {
                parse_matrix_shorthand(&text)
            };
            match parsed {
                Ok(g) => {
                    digest.vertices = g.names().to_vec();
                    digests.push(digest);
                    graphs.push(g);
                }
                Err(err) => {
                    digests.push(digest);
                    return Err(CliError::Parse { input: label, err });
                }
            }
        }
        Ok(graphs)
    }
}

/// `CSTAR_MAX_VERTICES`, the largest graph for which saturated sets are enumerated.
pub fn max_vertices() -> Result<usize, CliError> {
    match std::env::var("CSTAR_MAX_VERTICES") {
        Err(_) => Ok(DEFAULT_MAX_VERTICES),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("CSTAR_MAX_VERTICES must be a non-negative integer, got {v:?}"))),
    }
}

pub(crate) fn check_enumeration_bound(graphs: &[Graph]) -> Result<(), CliError> {
    let max = max_vertices()?;
    match graphs.iter().find(|g| g.len() > max) {
        Some(g) => Err(CliError::OutOfScope(format!(
            "graph has {} vertices, above CSTAR_MAX_VERTICES = {max}",
            g.len()
        ))),
        None => Ok(()),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    commands::dispatch(&cli.command)
}

/// Parses `args` (including the program name) and runs the command.
///
/// Returns the exit code and the stdout/stderr text. Help and version requests exit 0.
pub fn run_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                (code, rendered, String::new())
            } else {
                (code, String::new(), rendered)
            };
        }
    };
    let outcome = run(&cli);
    let stderr = match &outcome.report.error {
        Some(e) => format!("error: {e}\n"),
        None => String::new(),
    };
    let mut stdout = outcome.stdout(cli.json);
    if !stdout.is_empty() && !stdout.ends_with('\n') {
        stdout.push('\n');
    }
    (outcome.report.exit_code, stdout, stderr)
}
