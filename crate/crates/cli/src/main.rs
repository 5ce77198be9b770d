//! Command-line entry point: verification suites, iteration sweeps, and
//! custom-family reports, emitted as JSON or Markdown.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qhalf_core::problems::{family_from_json, FamilyFile};
use qhalf_core::report::VerificationReport;
use qhalf_core::verify::{family_report, sweep_report, verify_report, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "qhalf",
    version,
    about = "Two-register oracle algorithms and their query counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite for one family or for all of them.
    Verify {
        /// grover | dj | simon | perm | all
        #[arg(long)]
        family: String,
        /// Argument width; defaults to the smallest supported size.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the state-equation tolerance (density Frobenius norm).
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Sweep the search iteration count against the closed form.
    Sweep {
        #[arg(long, default_value = "grover")]
        family: String,
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze a family supplied as a JSON file.
    Family {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Bad configuration or unreadable/malformed input: exit code 2.
struct UsageError(String);

fn run(cli: Cli) -> Result<(VerificationReport, Format, Option<PathBuf>), UsageError> {
    match cli.command {
        Command::Verify {
            family,
            n,
            seed,
            format,
            out,
            tolerance,
        } => {
            let mut opts = VerifyOptions {
                seed,
                ..VerifyOptions::default()
            };
            if let Some(t) = tolerance {
                if t <= 0.0 {
                    return Err(UsageError("tolerance must be positive".into()));
                }
                opts.state_tolerance = t;
            }
            let report = verify_report(&family, n, &opts).map_err(|e| UsageError(e.to_string()))?;
            Ok((report, format, out))
        }
        Command::Sweep {
            family,
            n_min,
            n_max,
            seed,
            format,
            out,
        } => {
            if family != "grover" {
                return Err(UsageError(format!(
                    "sweep supports only the search family, got {family:?}"
                )));
            }
            let opts = VerifyOptions {
                seed,
                ..VerifyOptions::default()
            };
            let report =
                sweep_report(n_min, n_max, &opts).map_err(|e| UsageError(e.to_string()))?;
            Ok((report, format, out))
        }
        Command::Family {
            file,
            seed,
            format,
            out,
        } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", file.display())))?;
            let parsed: FamilyFile = serde_json::from_str(&text).map_err(|e| {
                UsageError(format!("malformed family file {}: {e}", file.display()))
            })?;
            let family = family_from_json(&parsed).map_err(|e| UsageError(e.to_string()))?;
            let opts = VerifyOptions {
                seed,
                ..VerifyOptions::default()
            };
            let report = family_report(&family, &opts).map_err(|e| UsageError(e.to_string()))?;
            Ok((report, format, out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, format, out)) => {
            let rendered = match format {
                Format::Json => report.to_json_string(),
                Format::Markdown => report.to_markdown(),
            };
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &rendered) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    println!("report written to {}", path.display());
                }
                None => println!("{rendered}"),
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
