//! Command-line runner for the pisom experiments.
//!
//! Every subcommand reads its parameters from an optional TOML file (one
//! section per subcommand) overridden by command-line flags, validates them,
//! runs, and writes one CSV or JSON document at the end.
//!
//! Exit codes: 0 success, 2 bad configuration or precondition, 3 numeric or
//! verification failure.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

pub mod commands;
pub mod table;

pub use commands::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pisom", version, about = "Numerical checks for p-isometrisability of discrete groups")]
pub struct Cli {
    /// TOML file with one section per subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every random choice of the run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interpolation bound for A(alpha) = [[1, i alpha], [i alpha, 1]].
    LemmaEstimate(commands::LemmaArgs),
    /// Spectra of mu_1 for random l^p isometries against the lens region.
    Lens(commands::LensArgs),
    /// Spectral radius of mu_1 on growing Cayley balls.
    Kesten(commands::KestenArgs),
    /// Isometry defect of averaged norms.
    Folner(commands::FolnerArgs),
    /// Littlewood T_1 norms by linear programming.
    Littlewood(commands::LittlewoodArgs),
    /// Ellipse point outside the lens region.
    Witness(commands::WitnessArgs),
    /// Random trials of the p-space contraction inequality.
    PspaceCheck(commands::PspaceArgs),
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub format: Option<Format>,
    #[serde(rename = "lemma-estimate")]
    pub lemma_estimate: Option<commands::LemmaArgs>,
    pub lens: Option<commands::LensArgs>,
    pub kesten: Option<commands::KestenArgs>,
    pub folner: Option<commands::FolnerArgs>,
    pub littlewood: Option<commands::LittlewoodArgs>,
    pub witness: Option<commands::WitnessArgs>,
    #[serde(rename = "pspace-check")]
    pub pspace_check: Option<commands::PspaceArgs>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or preconditions.
    Usage(String),
    Core(pisom::Error),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Core(e) => write!(f, "error: {e}"),
            CliError::Io(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<pisom::Error> for CliError {
    fn from(e: pisom::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_precondition() => 2,
            CliError::Core(_) | CliError::Io(_) => 3,
        }
    }
}

pub fn load_config(path: &std::path::Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

/// Runs the parsed command and renders its output; does not write it.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let file = match &cli.config {
        Some(p) => load_config(p)?,
        None => ConfigFile::default(),
    };
    let seed = |section: Option<u64>| cli.seed.or(section).or(file.seed);
    let format = cli.format.or(file.format);
    match cli.command {
        Command::LemmaEstimate(a) => commands::lemma_estimate(a.merge(file.lemma_estimate), format),
        Command::Lens(a) => {
            let a = a.merge(file.lens);
            let s = seed(a.seed);
            commands::lens(a, s, format)
        }
        Command::Kesten(a) => commands::kesten(a.merge(file.kesten), format),
        Command::Folner(a) => {
            let a = a.merge(file.folner);
            let s = seed(a.seed);
            commands::folner(a, s, format)
        }
        Command::Littlewood(a) => {
            let a = a.merge(file.littlewood);
            let s = seed(a.seed);
            commands::littlewood(a, s, format)
        }
        Command::Witness(a) => commands::witness(a.merge(file.witness), format),
        Command::PspaceCheck(a) => {
            let a = a.merge(file.pspace_check);
            let s = seed(a.seed);
            commands::pspace_check(a, s, format)
        }
    }
}

/// Parses, runs, writes the output and returns the process exit code.
pub fn main_with_args(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = cli.out.clone();
    let outcome = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => {
            eprintln!("{e}");
            return e.exit_code();
        }
        Err(_) => return 3,
    };
    let written = match &out {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(outcome.text.as_bytes()).map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 3;
    }
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    if outcome.ok {
        0
    } else {
        3
    }
}
