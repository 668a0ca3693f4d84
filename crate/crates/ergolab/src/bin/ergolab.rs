//! Command-line front end: run experiments from config files, list the
//! system catalog, and reproduce the full suite.
//!
//! Exit codes: 0 completed; 1 a `--check` expectation or suite criterion
//! failed; 2 config or argument error; 3 I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ergolab::config::ExperimentConfig;
use ergolab::error::Error;
use ergolab::runner::run_experiment;
use ergolab::suite::run_paper_suite;
use ergolab::zoo::catalog;

#[derive(Parser)]
#[command(
    name = "ergolab",
    version,
    about = "Ergodic-averaging laboratory: orbit statistics, Cesaro averages, transfer-operator densities and limit-behavior probes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a JSON config file.
    Run {
        /// Also evaluate the config's declared expectations and exit
        /// nonzero if any fails.
        #[arg(long)]
        check: bool,
        /// Path to the experiment config (JSON).
        config: PathBuf,
    },
    /// Print every map family with parameters, ranges and formulas.
    ListSystems,
    /// Run the whole reproduction suite and write its summary table.
    ReproducePaper {
        /// Output directory for the summary and criterion details.
        dir: PathBuf,
        /// Master seed for the entire suite.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Exit nonzero if any criterion failed.
        #[arg(long)]
        check: bool,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 3,
        _ => 2,
    }
}

/// Print without panicking when stdout is a closed pipe (`... | head`).
fn out(text: impl AsRef<str>) {
    let _ = writeln!(std::io::stdout(), "{}", text.as_ref());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { check, config } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", config.display());
                    return ExitCode::from(3);
                }
            };
            let cfg = match ExperimentConfig::from_json(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match run_experiment(&cfg) {
                Ok(outcome) => {
                    out(outcome.report.to_text());
                    for path in &outcome.artifacts {
                        out(format!("wrote {}", path.display()));
                    }
                    if check && !outcome.check_failures.is_empty() {
                        for f in &outcome.check_failures {
                            eprintln!("check failed: {f}");
                        }
                        return ExitCode::from(1);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code_for(&e))
                }
            }
        }
        Command::ListSystems => {
            for info in catalog() {
                let params = if info.params.is_empty() {
                    "none".to_string()
                } else {
                    info.params
                        .iter()
                        .map(|(n, r)| format!("{n} in {r}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                let kind = if info.measure_dependent {
                    "measure-dependent"
                } else {
                    "autonomous"
                };
                out(format!("{:16} [{kind}, {:?}]", info.name, info.phase));
                out(format!("    params:  {params}"));
                out(format!("    formula: {}", info.formula));
            }
            ExitCode::SUCCESS
        }
        Command::ReproducePaper { dir, seed, check } => match run_paper_suite(seed) {
            Ok(outcome) => {
                let summary = outcome.summary();
                let _ = write!(std::io::stdout(), "{summary}");
                if let Err(e) = std::fs::create_dir_all(&dir) {
                    eprintln!("error: cannot create {}: {e}", dir.display());
                    return ExitCode::from(3);
                }
                let write = |name: &str, contents: String| -> std::io::Result<()> {
                    std::fs::write(dir.join(name), contents)
                };
                if let Err(e) = write("summary.txt", summary).and_then(|_| {
                    write(
                        "criteria.json",
                        serde_json::to_string_pretty(&outcome).expect("serializable"),
                    )
                }) {
                    eprintln!("error: {e}");
                    return ExitCode::from(3);
                }
                if check && !outcome.all_passed() {
                    return ExitCode::from(1);
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_code_for(&e))
            }
        },
    }
}
