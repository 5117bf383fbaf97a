//! Command-line front end. Four subcommands exchange data only through files,
//! so hardware counts can replace `simulate` output at the `characterize` stage.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 runtime. Every failure prints
//! a single line `spamcorr: error[<kind>]: <message>` to standard error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{analyze, default_edges, AnalysisConfig};
use crate::error::{Error, ErrorKind};
use crate::estimators::{characterize, CorrelatorSet};
use crate::io::{sibling_path, write_atomic};
use crate::noise_model::{NoiseModel, DEFAULT_MAX_ENUM};
use crate::protocol::{preparation_set, run_protocol, BitOrder, CountsTable, SimulatorBackend};
use crate::topology::Topology;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "spamcorr", version, about = "Characterize correlated qubit readout errors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the ground and single-excitation preparations from a noise model.
    Simulate(SimulateArgs),
    /// Estimate epsilon, A and C with sampling bounds from a counts file.
    Characterize(CharacterizeArgs),
    /// Histogram, distance-bin and floor-classify a correlator file against a topology.
    Analyze(AnalyzeArgs),
    /// Exact infinite-shot correlators of a noise model by enumeration.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CharacterizeArgs {
    #[arg(long)]
    pub counts: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Bit order of the counts file; must agree with the file's own `bit_order` if it has one.
    #[arg(long, value_parser = parse_bit_order)]
    pub bit_order: Option<BitOrder>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub correlators: PathBuf,
    #[arg(long)]
    pub topology: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated histogram edges for absolute values (default: 20 log bins over [1e-5, 1]).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub edges: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub floor_multiplier: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Largest allowed enumeration size 2^n * 2^pairs.
    #[arg(long, default_value_t = DEFAULT_MAX_ENUM)]
    pub max_enum: u128,
}

fn parse_bit_order(s: &str) -> Result<BitOrder, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of one CLI invocation.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }

    /// `spamcorr: error[kind]: message`, always one line.
    pub fn line(&self) -> String {
        let msg = self.message.split_whitespace().collect::<Vec<_>>().join(" ");
        format!("spamcorr: error[{}]: {msg}", self.kind)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match e.kind() {
            ErrorKind::Validation => (EXIT_VALIDATION, "validation"),
            ErrorKind::Runtime => (EXIT_RUNTIME, "runtime"),
        };
        CliError {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn require_input(path: &Path) -> Result<(), CliError> {
    if !path.is_file() {
        return Err(CliError::usage(format!("input file {} does not exist", path.display())));
    }
    Ok(())
}

fn require_output(path: &Path) -> Result<(), CliError> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !parent.is_dir() {
        return Err(CliError::usage(format!(
            "output directory {} does not exist",
            parent.display()
        )));
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    write_atomic(path, text.as_bytes()).map_err(CliError::from)
}

/// Runs one parsed command. Informational notes (clamp warnings, written files) go to `log`.
pub fn execute(command: &Command, log: &mut dyn FnMut(&str)) -> Result<(), CliError> {
    match command {
        Command::Simulate(a) => {
            require_input(&a.model)?;
            require_output(&a.out)?;
            let model = NoiseModel::load(&a.model)?;
            let n = model.num_qubits();
            for prep in preparation_set(n)? {
                let clamped = model.effective_flip_probs(&prep.true_state(n))?.clamped;
                if !clamped.is_empty() {
                    log(&format!(
                        "warning: preparation {prep}: flip probabilities clamped to [0, 1] on qubits {clamped:?}"
                    ));
                }
            }
            let table = run_protocol(&SimulatorBackend { model: &model }, n, a.shots, a.seed)?;
            write(&a.out, &table.to_json_string())?;
            log(&format!("wrote {}", a.out.display()));
        }
        Command::Characterize(a) => {
            require_input(&a.counts)?;
            require_output(&a.out)?;
            let table = CountsTable::load(&a.counts, a.bit_order)?;
            let corr = characterize(&table)?;
            write(&a.out, &corr.to_json_string())?;
            write(&sibling_path(&a.out, "A", "csv"), &corr.a.to_csv())?;
            write(&sibling_path(&a.out, "C", "csv"), &corr.c.to_csv())?;
            log(&format!("wrote {}", a.out.display()));
        }
        Command::Analyze(a) => {
            require_input(&a.correlators)?;
            require_input(&a.topology)?;
            require_output(&a.out)?;
            let corr = CorrelatorSet::load(&a.correlators)?;
            let topo = Topology::load(&a.topology)?;
            let config = AnalysisConfig {
                edges: a.edges.clone().unwrap_or_else(default_edges),
                floor_multiplier: a.floor_multiplier,
            };
            let summary = analyze(&corr, &topo.min_distances(), &config)?;
            write(&a.out, &summary.to_json_string())?;
            write(&sibling_path(&a.out, "histograms", "csv"), &summary.histograms_csv())?;
            write(
                &sibling_path(&a.out, "distance_summary", "csv"),
                &summary.distance_summary.to_csv(),
            )?;
            write(
                &sibling_path(&a.out, "distance_summary_C", "csv"),
                &summary.distance_summary_c.to_csv(),
            )?;
            write(&sibling_path(&a.out, "A_matrix", "csv"), &summary.matrix_report.a_csv())?;
            write(
                &sibling_path(&a.out, "distance_matrix", "csv"),
                &summary.matrix_report.distance_csv(),
            )?;
            log(&format!("wrote {}", a.out.display()));
        }
        Command::Oracle(a) => {
            require_input(&a.model)?;
            require_output(&a.out)?;
            let model = NoiseModel::load(&a.model)?;
            let exact = model.exact_correlators(a.max_enum)?;
            write(&a.out, &exact.to_json_string())?;
            log(&format!("wrote {}", a.out.display()));
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code; output lines go through `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn FnMut(&str), err: &mut dyn FnMut(&str)) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(
                e.kind(),
                K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                out(e.render().to_string().trim_end());
                return if e.kind() == K::DisplayHelpOnMissingArgumentOrSubcommand {
                    EXIT_USAGE
                } else {
                    EXIT_OK
                };
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            err(&CliError::usage(first.trim_start_matches("error: ")).line());
            return EXIT_USAGE;
        }
    };
    match execute(&cli.command, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            err(&e.line());
            e.code
        }
    }
}
